# src/nonlinearities/nonlinearity.py

from abc import ABC, abstractmethod
import math
import logging
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from ..errors import ConfigurationError


class Nonlinearity(ABC):
    """
    Clase base para las no linealidades sin memoria f(x).

    Cada subclase declara `kind`, los parámetros obligatorios en `PARAMS`
    y, si procede, parámetros opcionales en `OPTIONAL`. Todas aceptan
    `scale`, un factor que multiplica la salida (negativo = etapa inversora).
    """

    kind: str = ""
    PARAMS: Tuple[str, ...] = ()
    OPTIONAL: Dict[str, Any] = {}
    stateful = False

    def __init__(self, params: Dict[str, Any]):
        params = dict(params or {})
        allowed = set(self.PARAMS) | set(self.OPTIONAL) | {"scale"}

        for key in params:
            if key not in allowed:
                raise ConfigurationError(
                    f"Parámetro desconocido '{key}' para la no linealidad '{self.kind}'", key=key)
        for key in self.PARAMS:
            if key not in params:
                raise ConfigurationError(
                    f"Falta el parámetro '{key}' para la no linealidad '{self.kind}'", key=key)

        self.params: Dict[str, Any] = {}
        for key in self.PARAMS:
            self.params[key] = self._coerce(key, params[key])
        for key, default in self.OPTIONAL.items():
            self.params[key] = self._coerce(key, params.get(key, default))

        scale = self._coerce("scale", params.get("scale", 1.0))
        if scale == 0.0:
            raise ConfigurationError("El parámetro 'scale' debe ser distinto de cero", key="scale")
        self.scale = scale

        self._validate()

    def _coerce(self, key: str, value: Any) -> Any:
        """Convierte un parámetro escalar a float finito"""
        try:
            number = float(value)
        except (TypeError, ValueError):
            raise ConfigurationError(f"El parámetro '{key}' debe ser un número real", key=key)
        if not math.isfinite(number):
            raise ConfigurationError(f"El parámetro '{key}' debe ser finito", key=key)
        return number

    def _require_positive(self, *keys: str) -> None:
        for key in keys:
            if not self.params[key] > 0.0:
                raise ConfigurationError(f"El parámetro '{key}' debe ser > 0", key=key)

    def _require_nonnegative(self, *keys: str) -> None:
        for key in keys:
            if self.params[key] < 0.0:
                raise ConfigurationError(f"El parámetro '{key}' debe ser >= 0", key=key)

    def _validate(self) -> None:
        """Comprueba restricciones propias de cada tipo"""
        pass

    @abstractmethod
    def _f(self, x: np.ndarray) -> np.ndarray:
        """Característica sin escalar, vectorizada"""
        pass

    def __call__(self, x):
        """Evalúa f vectorizada (solo para tipos sin estado)"""
        if self.stateful:
            raise ConfigurationError(
                f"La no linealidad '{self.kind}' tiene estado; use evaluate() o march()")
        return self.scale * self._f(np.asarray(x, dtype=float))

    def evaluate(self, x: float, prev_state: Optional[int] = None) -> Tuple[float, Optional[int]]:
        """Evaluación puntual exacta; devuelve (y, estado)"""
        if prev_state is not None:
            raise ConfigurationError(
                f"La no linealidad '{self.kind}' no tiene estado; prev_state debe omitirse",
                key="prev_state")
        return float(self(x)), None

    def breakpoints(self) -> List[float]:
        """Entradas donde f no es suave (saltos o quiebres)"""
        return []

    def output_bound(self) -> Optional[float]:
        """Cota de |f(x)| si existe"""
        return None

    def to_dict(self) -> Dict[str, Any]:
        """Convierte la no linealidad a un diccionario"""
        data = {"kind": self.kind}
        data.update(self.params)
        if self.scale != 1.0:
            data["scale"] = self.scale
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'Nonlinearity':
        """Crea una no linealidad a partir de un diccionario"""
        from .catalog import make_nonlinearity
        params = {k: v for k, v in data.items() if k != "kind"}
        return make_nonlinearity(data["kind"], params)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Nonlinearity):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    def __hash__(self):
        return hash(repr(self.to_dict()))

    def __repr__(self) -> str:
        args = ", ".join(f"{k}={v!r}" for k, v in self.to_dict().items() if k != "kind")
        return f"{self.kind}({args})"


class StatefulNonlinearity(Nonlinearity):
    """No linealidad con un estado binario (+1/-1) que se arrastra entre muestras"""

    stateful = True

    @abstractmethod
    def _step(self, x: float, state: int) -> int:
        """Devuelve el nuevo estado tras ver la entrada x"""
        pass

    @abstractmethod
    def _output(self, state: int) -> float:
        """Salida sin escalar para un estado"""
        pass

    def _f(self, x: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def initial_state(self, x: float) -> int:
        """Estado inicial: signo de la entrada, +1 en empates"""
        return 1 if x >= 0.0 else -1

    def evaluate(self, x: float, prev_state: Optional[int] = None) -> Tuple[float, Optional[int]]:
        x = float(x)
        if prev_state is None:
            prev_state = self.initial_state(x)
            logging.debug(f"{self.kind}: estado inicial {prev_state:+d} para x={x!r}")
        elif prev_state not in (1, -1):
            raise ConfigurationError("prev_state debe ser +1 o -1", key="prev_state")
        state = self._step(x, prev_state)
        return self.scale * self._output(state), state

    def march(self, xs: np.ndarray, state: Optional[int] = None) -> Tuple[np.ndarray, int]:
        """Recorre una secuencia de entradas arrastrando el estado"""
        xs = np.asarray(xs, dtype=float)
        ys = np.empty_like(xs)
        if state is None:
            state = self.initial_state(float(xs[0]))
        for i, x in enumerate(xs):
            state = self._step(float(x), state)
            ys[i] = self.scale * self._output(state)
        return ys, state
