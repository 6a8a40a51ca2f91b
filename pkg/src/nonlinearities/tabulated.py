# src/nonlinearities/tabulated.py

from typing import Any, List

import numpy as np

from ..errors import ConfigurationError, ExtrapolationError
from .nonlinearity import Nonlinearity


class Tabulated(Nonlinearity):
    """Característica medida: interpolación lineal a trozos, sin extrapolar"""

    kind = "tabulated"
    PARAMS = ("x", "y")

    def _coerce(self, key: str, value: Any):
        if key not in ("x", "y"):
            return super()._coerce(key, value)
        try:
            values = [float(v) for v in value]
        except (TypeError, ValueError):
            raise ConfigurationError(f"'{key}' debe ser una lista de reales", key=key)
        if not np.all(np.isfinite(values)):
            raise ConfigurationError(f"'{key}' debe contener reales finitos", key=key)
        return values

    def _validate(self):
        x, y = self.params["x"], self.params["y"]
        if len(x) < 2:
            raise ConfigurationError("La tabla necesita al menos dos muestras", key="x")
        if len(x) != len(y):
            raise ConfigurationError("'x' e 'y' deben tener la misma longitud", key="y")
        if np.any(np.diff(x) <= 0.0):
            raise ConfigurationError("'x' debe ser estrictamente creciente", key="x")
        self._x = np.asarray(x)
        self._y = np.asarray(y)

    def _f(self, x):
        lo, hi = self._x[0], self._x[-1]
        if np.any(x < lo) or np.any(x > hi):
            bad = x[(x < lo) | (x > hi)]
            raise ExtrapolationError(
                f"Entrada {float(np.ravel(bad)[0])!r} fuera del rango tabulado [{lo!r}, {hi!r}]")
        return np.interp(x, self._x, self._y)

    def breakpoints(self) -> List[float]:
        return [float(v) for v in self._x[1:-1]]
