# src/linear/__init__.py
# Paquete de bloques lineales y respuesta en frecuencia
