# src/prediction/stability.py

import math
import logging
from typing import Optional

import numpy as np

from ..config import get_config
from ..describing.numeric import df_eval
from ..errors import NumericalError, SingularityError
from ..linear.linear_block import LinearBlock
from .loop import LoopSpec, PredictedOscillation, STABLE, UNSTABLE, MARGINAL

MAX_ANGLE_STEP = math.pi / 4.0
MAX_DEPTH = 40
# Semianchos de banda a cada lado de una resonancia y muestras en ese tramo
RESONANCE_SPAN = 8.0
RESONANCE_POINTS = 65


def _angle_increment(a: complex, b: complex) -> float:
    return math.atan2((b * a.conjugate()).imag, (b * a.conjugate()).real)


def _resonant_samples(G: LinearBlock) -> np.ndarray:
    """Muestras densas alrededor de la frecuencia natural de cada polo complejo"""
    roots = np.roots(G.den[::-1]) if len(G.den) > 2 else np.array([])
    samples = [np.empty(0)]
    for p in roots[np.abs(roots.imag) > 0.0]:
        wn = abs(p)
        half = max(abs(p.real), 1e-9 * wn)
        samples.append(wn + half * np.linspace(-RESONANCE_SPAN, RESONANCE_SPAN, RESONANCE_POINTS))
    local = np.concatenate(samples)
    return local[local > 0.0]


def winding_number(G: LinearBlock, point: complex, omega_scale: float = 1.0,
                   decades: float = 8.0, n_grid: int = 400) -> Optional[int]:
    """
    Vueltas en sentido antihorario de G(jω) alrededor de `point` con ω de -∞ a +∞.

    Se muestrea ω en ambos signos (más ω = 0), con muestras extra junto a las
    resonancias, y cada tramo cuyo incremento de ángulo supera π/4 se biseca.
    Devuelve None si el lugar pasa por el punto o G tiene un polo sobre el eje jω.
    """
    positive = np.union1d(omega_scale * np.logspace(-decades, decades, n_grid),
                          _resonant_samples(G))
    omegas = np.concatenate((-positive[::-1], [0.0], positive))
    try:
        values = G.response(omegas) - point
    except SingularityError:
        return None
    if np.any(np.abs(values) == 0.0):
        return None

    def segment(w0: float, w1: float, v0: complex, v1: complex, depth: int) -> float:
        delta = _angle_increment(v0, v1)
        if abs(delta) <= MAX_ANGLE_STEP or depth >= MAX_DEPTH:
            return delta
        wm = 0.5 * (w0 + w1)
        vm = complex(G.response(wm)) - point
        if vm == 0.0:
            raise SingularityError("El lugar de Nyquist pasa por el punto crítico", where=wm)
        return segment(w0, wm, v0, vm, depth + 1) + segment(wm, w1, vm, v1, depth + 1)

    try:
        total = 0.0
        for i in range(len(omegas) - 1):
            total += segment(omegas[i], omegas[i + 1], complex(values[i]), complex(values[i + 1]), 0)
    except SingularityError:
        return None
    # Cierre por el semicírculo de radio infinito
    total += _angle_increment(complex(values[-1]), complex(values[0]))
    return int(round(total / (2.0 * math.pi)))


def unstable_poles(G: LinearBlock) -> int:
    """Polos de G en el semiplano derecho abierto"""
    roots = np.roots(G.den[::-1]) if len(G.den) > 1 else np.array([])
    return int(np.sum(roots.real > 0.0))


def _closed_loop_unstable(G: LinearBlock, point: complex, omega_scale: float) -> Optional[bool]:
    winding = winding_number(G, point, omega_scale)
    if winding is None:
        return None
    # Recorrido de ω creciente = contorno de Nyquist en sentido horario
    zeros = unstable_poles(G) - winding
    return zeros > 0


def classify(spec: LoopSpec, osc: PredictedOscillation) -> str:
    """
    Estabilidad del ciclo límite por perturbación de la amplitud.

    Con A' = A*(1 ± ε) se obtiene el punto crítico sign/N(A'). Sin retardo se
    cuentan los rodeos del lugar de Nyquist completo: el ciclo es estable si
    A⁺ da un lazo cerrado estable y A⁻ uno inestable. Con retardo se usa la
    forma local del mismo criterio: el lado del recorrido de G(jω) hacia el
    que se desplaza el punto crítico al aumentar A.
    """
    eps = float(get_config().get("prediction", "classify_eps", 1e-3))
    bias = osc.bias if osc.bias is not None else spec.held_bias
    A = osc.A_star
    try:
        n_plus = df_eval(spec.nl, A * (1.0 + eps), bias).N
        n_minus = df_eval(spec.nl, A * (1.0 - eps), bias).N
    except NumericalError as e:
        logging.warning(f"No se puede perturbar A*={A!r}: {e}")
        return MARGINAL
    if n_plus == 0.0 or n_minus == 0.0:
        return MARGINAL
    c_plus, c_minus = spec.sign / n_plus, spec.sign / n_minus

    G = spec.G
    if not G.has_delay():
        up = _closed_loop_unstable(G, c_plus, osc.omega_star)
        down = _closed_loop_unstable(G, c_minus, osc.omega_star)
        if up is not None and down is not None:
            if not up and down:
                return STABLE
            if up and not down:
                return UNSTABLE
            return MARGINAL
        logging.debug("Conteo de rodeos no disponible; se usa el criterio local")

    return _local_rule(G, osc.omega_signed, c_plus, c_minus)


def _local_rule(G: LinearBlock, omega: float, c_plus: complex, c_minus: complex) -> str:
    h = 1e-6 * abs(omega)
    try:
        dG = (complex(G.response(omega + h)) - complex(G.response(omega - h))) / (2.0 * h)
    except SingularityError:
        return MARGINAL
    dC = c_plus - c_minus
    cross = (dG.conjugate() * dC).imag
    if abs(cross) <= 1e-12 * abs(dG) * abs(dC):
        return MARGINAL
    # Punto crítico a la izquierda del sentido de recorrido para A⁺: estable
    return STABLE if cross > 0.0 else UNSTABLE
