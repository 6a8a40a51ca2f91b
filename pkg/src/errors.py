# src/errors.py

from typing import Optional


class OscillatorToolError(Exception):
    """Error base de la herramienta de análisis de osciladores"""
    exit_code = 3


class ConfigurationError(OscillatorToolError):
    """Parámetros, especificación o argumentos inválidos"""
    exit_code = 2

    def __init__(self, message: str, key: Optional[str] = None):
        super().__init__(message)
        self.key = key


class SpecSyntaxError(ConfigurationError):
    """Error de sintaxis en un archivo de especificación"""

    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"línea {line}, columna {column}: {message}")
        self.line = line
        self.column = column


class UnsupportedError(ConfigurationError):
    """Operación no disponible para el tipo de no linealidad"""


class NumericalError(OscillatorToolError):
    """Fallo numérico durante el análisis o la simulación"""
    exit_code = 3


class DomainError(NumericalError):
    """Amplitud por debajo del umbral de validez de una forma cerrada"""

    def __init__(self, message: str, threshold: float):
        super().__init__(message)
        self.threshold = threshold


class ExtrapolationError(NumericalError):
    """Evaluación de una tabla fuera del rango de muestras"""


class SingularityError(NumericalError):
    """Polo alcanzado o función descriptiva nula"""

    def __init__(self, message: str, where: Optional[float] = None):
        super().__init__(message)
        self.where = where


class IntegrationError(NumericalError):
    """Fallo del integrador (paso demasiado pequeño o estado no finito)"""

    def __init__(self, message: str, time: Optional[float] = None):
        super().__init__(message)
        self.time = time


class WindowingError(NumericalError):
    """Ventana de análisis incompatible con el periodo"""


class NoOscillationError(OscillatorToolError):
    """Veredicto: la señal no oscila (decae o es constante)"""
    exit_code = 1
