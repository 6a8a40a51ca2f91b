# src/nonlinearities/catalog.py

import logging
from typing import Any, Dict, List, Optional, Type

import numpy as np

from ..errors import ConfigurationError, ExtrapolationError
from .nonlinearity import Nonlinearity
from .classic import Saturation, Relay, DeadZone, RelayHysteresis
from .smooth import TanhResistor, TanhInverter, TanhRelaxation, CubicFN, Hill, Polynomial
from .tabulated import Tabulated


class NonlinearityCatalog:
    """Registro de tipos de no linealidad disponibles"""

    def __init__(self):
        self._kinds: Dict[str, Type[Nonlinearity]] = {}

    def register(self, cls: Type[Nonlinearity]) -> None:
        """Registra una clase de no linealidad bajo su etiqueta `kind`"""
        if not cls.kind:
            raise ConfigurationError(f"La clase {cls.__name__} no declara 'kind'")
        self._kinds[cls.kind] = cls
        logging.debug(f"No linealidad '{cls.kind}' registrada")

    def kinds(self) -> List[str]:
        return list(self._kinds)

    def make(self, kind: str, params: Optional[Dict[str, Any]] = None) -> Nonlinearity:
        """Construye y valida una no linealidad"""
        cls = self._kinds.get(kind)
        if cls is None:
            raise ConfigurationError(f"Tipo de no linealidad desconocido: '{kind}'", key="kind")
        return cls(params or {})


catalog = NonlinearityCatalog()
for _cls in (Saturation, Relay, DeadZone, RelayHysteresis, TanhResistor, TanhInverter,
             TanhRelaxation, CubicFN, Hill, Polynomial, Tabulated):
    catalog.register(_cls)


def make_nonlinearity(kind: str, params: Optional[Dict[str, Any]] = None) -> Nonlinearity:
    """Atajo sobre el catálogo compartido"""
    return catalog.make(kind, params)


def _sample(nl: Nonlinearity, xs: np.ndarray, state: int) -> np.ndarray:
    if nl.stateful:
        return np.array([nl.evaluate(x, state)[0] for x in xs])
    return nl(xs)


def symmetry_check(nl: Nonlinearity, domain_halfwidth: float, n_samples: int = 64) -> str:
    """
    Clasifica f como 'odd', 'even' o 'none' sobre [-w, w].
    Los tipos con estado se comparan con estados reflejados.
    """
    if n_samples < 8:
        raise ConfigurationError("symmetry_check necesita al menos 8 muestras", key="n_samples")
    if not domain_halfwidth > 0.0:
        raise ConfigurationError("El semiancho del dominio debe ser > 0", key="domain_halfwidth")

    xs = np.linspace(0.0, domain_halfwidth, n_samples)
    try:
        pos = _sample(nl, xs, 1)
        neg = _sample(nl, -xs, -1)
    except ExtrapolationError as e:
        logging.debug(f"symmetry_check fuera de la tabla: {e}")
        return "none"

    scale = max(float(np.max(np.abs(pos))), float(np.max(np.abs(neg))), np.finfo(float).tiny)
    tol = 1e-12 * scale
    if np.max(np.abs(pos + neg)) <= tol:
        return "odd"
    if np.max(np.abs(pos - neg)) <= tol:
        return "even"
    return "none"
