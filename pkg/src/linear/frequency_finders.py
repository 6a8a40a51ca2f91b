# src/linear/frequency_finders.py

import math
import logging
from typing import List, Optional, Tuple

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.optimize import brentq, minimize_scalar

from ..errors import ConfigurationError, SingularityError
from .linear_block import LinearBlock

# Cociente |Im G|/|G| por encima del cual un cambio de signo se toma por un polo
POLE_REJECT_RATIO = 1e-6
_RTOL = 4.0 * np.finfo(float).eps


def _check_bracket(bracket: Tuple[float, float]) -> Tuple[float, float]:
    lo, hi = float(bracket[0]), float(bracket[1])
    if not (0.0 < lo < hi) or not math.isfinite(hi):
        raise ConfigurationError(f"Intervalo de frecuencias inválido: [{lo!r}, {hi!r}]", key="omega_range")
    return lo, hi


def _safe_response(G: LinearBlock, omega: float) -> Optional[complex]:
    try:
        return complex(G.response(omega))
    except SingularityError:
        return None


def real_axis_crossings(G: LinearBlock, bracket: Tuple[float, float],
                        n_grid: int = 2000) -> List[Tuple[float, complex]]:
    """
    Frecuencias positivas del intervalo donde Im G(jω) = 0.

    Busca cambios de signo de Im G en una rejilla logarítmica y los refina
    con brentq. Los cambios de signo producidos por polos sobre el eje jω se
    descartan: allí |Im G| no se anula frente a |G|.
    """
    lo, hi = _check_bracket(bracket)
    omegas = np.geomspace(lo, hi, int(n_grid))
    values = np.array([_safe_response(G, w) for w in omegas], dtype=object)
    valid = np.array([v is not None for v in values])

    # Respuesta real en todo el intervalo (p. ej. ganancia pura): no hay cruces aislados
    finite = [v for v in values if v is not None]
    if finite and all(abs(v.imag) <= 1e-12 * abs(v) for v in finite):
        logging.debug("G(jω) es real en todo el intervalo; sin cruces aislados")
        return []

    imag = lambda w: complex(G.response(w)).imag
    crossings: List[Tuple[float, complex]] = []
    for i in range(len(omegas) - 1):
        if not (valid[i] and valid[i + 1]):
            continue
        a, b = omegas[i], omegas[i + 1]
        ia, ib = values[i].imag, values[i + 1].imag
        if ia == 0.0:
            if abs(values[i]) > 0.0:
                crossings.append((float(a), values[i]))
            continue
        if ia * ib > 0.0 or ib == 0.0:
            continue
        try:
            root = brentq(imag, a, b, xtol=1e-15 * a, rtol=_RTOL, maxiter=200)
        except (SingularityError, ValueError, RuntimeError) as e:
            logging.debug(f"Refinado fallido en [{a!r}, {b!r}]: {e}")
            continue
        value = _safe_response(G, root)
        if value is None or not np.isfinite(value) or abs(value.imag) > POLE_REJECT_RATIO * abs(value):
            logging.debug(f"Cambio de signo de Im G en ω≈{root!r} descartado (polo)")
            continue
        crossings.append((float(root), value))

    # El último punto de la rejilla con Im exactamente nula
    if valid[-1] and values[-1].imag == 0.0 and abs(values[-1]) > 0.0:
        crossings.append((float(omegas[-1]), values[-1]))

    logging.debug(f"{len(crossings)} cruces con el eje real en [{lo!r}, {hi!r}]")
    return crossings


class PeakResult:
    """Máximo de |G(jω)| en un intervalo"""

    def __init__(self, omega: float, magnitude: float, interior: bool):
        self.omega = omega
        self.magnitude = magnitude
        self.interior = interior

    def to_dict(self):
        return {"omega": self.omega, "magnitude": self.magnitude, "interior": self.interior}

    def __iter__(self):
        return iter((self.omega, self.magnitude))

    def __repr__(self) -> str:
        flag = "" if self.interior else ", non-interior"
        return f"PeakResult(omega={self.omega!r}, magnitude={self.magnitude!r}{flag})"


def _magnitude(G: LinearBlock, omega: float) -> float:
    value = _safe_response(G, omega)
    return math.inf if value is None else abs(value)


def magnitude_peak(G: LinearBlock, bracket: Tuple[float, float], n_grid: int = 400) -> PeakResult:
    """
    Máximo de |G(jω)| en el intervalo.

    Una rejilla logarítmica localiza el máximo; la búsqueda de Brent en log ω
    lo acota y el punto estacionario de |num|²/|den|² lo pule hasta la
    precisión de máquina. Si el máximo cae en un extremo se marca como no interior.
    """
    lo, hi = _check_bracket(bracket)
    omegas = np.geomspace(lo, hi, int(n_grid))
    mags = np.array([_magnitude(G, w) for w in omegas])
    i = int(np.argmax(mags))

    if i == 0 or i == len(omegas) - 1:
        logging.info(f"|G| es máximo en el extremo ω={omegas[i]!r}: sin pico interior")
        return PeakResult(float(omegas[i]), float(mags[i]), interior=False)

    a, b = omegas[i - 1], omegas[i + 1]
    # Derivada de |num|²/|den|²: se anula en el máximo
    num2, den2 = G.magnitude_polynomials()
    stationary = P.polysub(P.polymul(P.polyder(num2), den2), P.polymul(num2, P.polyder(den2)))
    fa, fb = P.polyval(a, stationary), P.polyval(b, stationary)
    if fa * fb < 0.0:
        omega = brentq(lambda w: P.polyval(w, stationary), a, b, xtol=1e-15 * a, rtol=_RTOL)
    else:
        result = minimize_scalar(lambda u: -_magnitude(G, math.exp(u)),
                                 bounds=(math.log(a), math.log(b)), method="bounded",
                                 options={"xatol": 1e-12})
        omega = math.exp(result.x)
    return PeakResult(float(omega), _magnitude(G, omega), interior=True)
