# src/__init__.py
# Paquete principal de dfosc: análisis de osciladores con funciones descriptivas
