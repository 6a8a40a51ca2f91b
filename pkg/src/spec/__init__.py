# src/spec/__init__.py
# Paquete de especificaciones, presets y salida
