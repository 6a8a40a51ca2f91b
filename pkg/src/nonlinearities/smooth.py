# src/nonlinearities/smooth.py

from typing import Any, List, Tuple

import numpy as np

from ..errors import ConfigurationError
from .nonlinearity import Nonlinearity


class TanhFamily(Nonlinearity):
    """
    No linealidades de la forma f(x) = c·x + g·tanh(k·x).
    `tanh_form()` expone (c, g, k) ya escalados para el desarrollo en serie.
    """

    def _f(self, x):
        c, g, k = self._unscaled_form()
        return c * x + g * np.tanh(k * x)

    def _unscaled_form(self) -> Tuple[float, float, float]:
        raise NotImplementedError

    def tanh_form(self) -> Tuple[float, float, float]:
        c, g, k = self._unscaled_form()
        return self.scale * c, self.scale * g, k


class TanhResistor(TanhFamily):
    """Resistencia negativa: f(i) = -V_max·tanh(R_max/V_max · i)"""

    kind = "tanh_resistor"
    PARAMS = ("V_max", "R_max")

    def _validate(self):
        self._require_positive("V_max", "R_max")

    def _unscaled_form(self):
        v, r = self.params["V_max"], self.params["R_max"]
        return 0.0, -v, r / v


class TanhInverter(TanhFamily):
    """Inversor: f(x) = -A_hat·tanh(k·x)"""

    kind = "tanh_inverter"
    PARAMS = ("A_hat", "k")

    def _validate(self):
        self._require_positive("A_hat", "k")

    def _unscaled_form(self):
        return 0.0, -self.params["A_hat"], self.params["k"]


class TanhRelaxation(TanhFamily):
    """Bloque de relajación: f(v) = -k1·v + k2·tanh(k3·v)"""

    kind = "tanh_relaxation"
    PARAMS = ("k1", "k2", "k3")

    def _validate(self):
        self._require_nonnegative("k1", "k2")
        self._require_positive("k3")

    def _unscaled_form(self):
        p = self.params
        return -p["k1"], p["k2"], p["k3"]


class CubicFN(Nonlinearity):
    """Cúbica de FitzHugh-Nagumo: f(v) = v - v³/3 + I_ext"""

    kind = "cubic_fn"
    PARAMS = ("I_ext",)

    def _f(self, x):
        return x - x ** 3 / 3.0 + self.params["I_ext"]


class Hill(Nonlinearity):
    """
    Represor de Hill: f(p) = alpha / (1 + p^n) + alpha0.
    Las concentraciones negativas se tratan como cero.
    """

    kind = "hill"
    PARAMS = ("alpha", "alpha0", "n")

    def _validate(self):
        self._require_positive("alpha")
        self._require_nonnegative("alpha0")
        if self.params["n"] < 1.0:
            raise ConfigurationError("El exponente de Hill 'n' debe ser >= 1", key="n")

    def _f(self, x):
        p = self.params
        conc = np.maximum(x, 0.0)
        return p["alpha"] / (1.0 + conc ** p["n"]) + p["alpha0"]

    def breakpoints(self) -> List[float]:
        return [0.0]

    def output_bound(self):
        p = self.params
        return abs(self.scale) * (p["alpha"] + p["alpha0"])


class Polynomial(Nonlinearity):
    """Polinomio con coeficientes ascendentes"""

    kind = "polynomial"
    PARAMS = ("coefficients",)

    def _coerce(self, key: str, value: Any):
        if key != "coefficients":
            return super()._coerce(key, value)
        try:
            coeffs = [float(c) for c in value]
        except (TypeError, ValueError):
            raise ConfigurationError("'coefficients' debe ser una lista de reales", key=key)
        if not coeffs or not np.all(np.isfinite(coeffs)):
            raise ConfigurationError("'coefficients' debe contener reales finitos", key=key)
        return coeffs

    def _f(self, x):
        return np.polynomial.polynomial.polyval(x, self.params["coefficients"])
