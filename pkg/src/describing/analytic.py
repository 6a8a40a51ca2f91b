# src/describing/analytic.py

import math
import logging
from typing import Optional

import numpy as np

from ..errors import ConfigurationError, DomainError, UnsupportedError
from ..nonlinearities.nonlinearity import Nonlinearity
from ..nonlinearities.smooth import TanhFamily

# Cociente entre términos consecutivos de la serie a partir del cual se avisa
TAYLOR_WARNING_RATIO = 0.3


def closed_form_threshold(nl: Nonlinearity) -> Optional[float]:
    """Amplitud mínima de validez de la forma cerrada, o None si no existe"""
    p = nl.params
    if nl.kind == "saturation":
        return p["a"]
    if nl.kind == "dead_zone":
        return p["delta"]
    if nl.kind == "relay_hysteresis":
        return p["h"]
    if nl.kind in ("relay", "cubic_fn"):
        return 0.0
    return None


def df_closed_form(nl: Nonlinearity, A: float) -> Optional[complex]:
    """
    Función descriptiva exacta para los tipos clásicos y la cúbica.
    Devuelve None para los tipos sin forma cerrada.
    """
    threshold = closed_form_threshold(nl)
    if threshold is None:
        return None
    if not A > 0.0:
        raise DomainError(f"La amplitud debe ser > 0 (A={A!r})", threshold=0.0)
    if A < threshold:
        raise DomainError(
            f"La forma cerrada de '{nl.kind}' requiere A >= {threshold!r} (A={A!r})",
            threshold=threshold)

    p = nl.params
    if nl.kind == "saturation":
        r = p["a"] / A
        value = 2.0 * p["K"] / math.pi * (math.asin(r) + r * math.sqrt(1.0 - r * r))
    elif nl.kind == "relay":
        value = 4.0 * p["M"] / (math.pi * A)
    elif nl.kind == "dead_zone":
        r = p["delta"] / A
        value = 2.0 * p["K"] / math.pi * (math.pi / 2.0 - math.asin(r) - r * math.sqrt(1.0 - r * r))
    elif nl.kind == "relay_hysteresis":
        r = p["h"] / A
        value = 4.0 * p["M"] / (math.pi * A) * complex(math.sqrt(1.0 - r * r), -r)
    else:
        # Forma publicada para el modelo FitzHugh-Nagumo
        value = 1.0 - 0.75 * A * A
    return nl.scale * complex(value)


def closed_form_dc(nl: Nonlinearity) -> float:
    """Término a0 con sesgo nulo para los tipos con forma cerrada"""
    if nl.kind == "cubic_fn":
        return nl.scale * nl.params["I_ext"]
    return 0.0


class TaylorDF:
    """Valor de la serie truncada y aviso de precisión"""

    def __init__(self, value: float, order: int, inaccurate: bool, ratio: float):
        self.value = value
        self.order = order
        self.inaccurate = inaccurate
        self.ratio = ratio

    def __float__(self) -> float:
        return self.value

    def __repr__(self) -> str:
        flag = ", inaccurate" if self.inaccurate else ""
        return f"TaylorDF({self.value!r}, order={self.order}{flag})"


def _series_coefficients(nl: Nonlinearity, order: int):
    if not isinstance(nl, TanhFamily):
        raise UnsupportedError(
            f"La serie de Taylor solo está disponible para la familia tanh, no para '{nl.kind}'",
            key="kind")
    if order not in (2, 4):
        raise ConfigurationError("El orden de la serie debe ser 2 o 4", key="order")
    c, g, k = nl.tanh_form()
    # c·x + g·tanh(kx): N = c + gk·(1 - (kA)²/4 + (kA)⁴/12)
    coeffs = [c + g * k, -g * k ** 3 / 4.0, g * k ** 5 / 12.0]
    return coeffs[: order // 2 + 1]


def df_taylor(nl: Nonlinearity, A: float, order: int = 4) -> TaylorDF:
    """Función descriptiva por desarrollo en serie de tanh (solo diagnóstico)"""
    coeffs = _series_coefficients(nl, order)
    terms = [coef * A ** (2 * i) for i, coef in enumerate(coeffs)]

    ratio = 0.0
    for prev, cur in zip(terms, terms[1:]):
        if prev == 0.0:
            ratio = math.inf if cur != 0.0 else ratio
        else:
            ratio = max(ratio, abs(cur / prev))
    inaccurate = ratio > TAYLOR_WARNING_RATIO
    if inaccurate:
        logging.warning(f"Serie de Taylor de '{nl.kind}' poco fiable en A={A!r} (cociente {ratio:.3g})")
    return TaylorDF(float(sum(terms)), order, inaccurate, ratio)


def solve_taylor_amplitude(nl: Nonlinearity, target: float, order: int = 4) -> Optional[float]:
    """Menor A > 0 con df_taylor(A) = target, o None si la serie no lo alcanza"""
    coeffs = list(_series_coefficients(nl, order))
    coeffs[0] -= target
    # Polinomio en u = A², coeficientes de mayor a menor grado para np.roots
    roots = np.roots(coeffs[::-1])
    candidates = [r.real for r in np.atleast_1d(roots)
                  if abs(r.imag) <= 1e-12 * max(abs(r), 1.0) and r.real > 0.0]
    if not candidates:
        logging.info(f"La serie de orden {order} de '{nl.kind}' no alcanza el valor {target!r}")
        return None
    return math.sqrt(min(candidates))
