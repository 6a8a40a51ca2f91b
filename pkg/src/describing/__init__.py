# src/describing/__init__.py
# Paquete de funciones descriptivas
