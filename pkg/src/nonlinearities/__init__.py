# src/nonlinearities/__init__.py
# Paquete de no linealidades (estáticas y con histéresis)
