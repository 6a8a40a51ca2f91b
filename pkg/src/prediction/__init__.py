# src/prediction/__init__.py
# Paquete de predicción de ciclos límite
