# src/simulation/__init__.py
# Paquete de simulación transitoria
