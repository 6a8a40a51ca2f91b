# src/describing/numeric.py

import math
import logging
from typing import List, Optional, Tuple

import numpy as np

from ..config import get_config
from ..errors import ConfigurationError, SingularityError
from ..nonlinearities.nonlinearity import Nonlinearity
from .analytic import closed_form_dc, closed_form_threshold, df_closed_form
from .describing_function import DFCurve, DFSample

TWO_PI = 2.0 * math.pi
# Longitud máxima de cada arco de integración en funciones a trozos
MAX_ARC = math.pi / 4.0


def _check_samples(n_samples: int) -> int:
    n = int(n_samples)
    if n < 256 or n & (n - 1):
        raise ConfigurationError(
            f"n_samples debe ser una potencia de dos >= 256 (recibido {n_samples!r})",
            key="n_samples")
    return n


def _crossing_angles(nl: Nonlinearity, A: float, bias: float) -> List[float]:
    """Ángulos en [0, 2π) donde bias + A·sinθ pasa por un punto de quiebre"""
    angles = []
    for xb in nl.breakpoints():
        s = (xb - bias) / A
        if abs(s) > 1.0:
            continue
        base = math.asin(s)
        angles.append(base % TWO_PI)
        angles.append((math.pi - base) % TWO_PI)
    return angles


def _arc_edges(angles: List[float]) -> np.ndarray:
    edges = np.unique(np.concatenate(([0.0, TWO_PI], np.asarray(angles, dtype=float))))
    edges = edges[(edges >= 0.0) & (edges <= TWO_PI)]
    refined = [edges[0]]
    for lo, hi in zip(edges[:-1], edges[1:]):
        pieces = max(1, int(math.ceil((hi - lo) / MAX_ARC)))
        refined.extend(np.linspace(lo, hi, pieces + 1)[1:])
    return np.asarray(refined)


def _piecewise_moments(nl: Nonlinearity, A: float, bias: float, omega: float,
                       order: int) -> Tuple[float, float, float]:
    """Momentos (a0, a1, b1) integrando en el tiempo por arcos con Gauss-Legendre"""
    period = TWO_PI / omega
    # Instantes de cada quiebre dentro de un periodo
    edges = _arc_edges(_crossing_angles(nl, A, bias)) / omega
    x_ref, w_ref = np.polynomial.legendre.leggauss(order)

    time_parts, weight_parts = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        half = 0.5 * (hi - lo)
        time_parts.append(lo + half * (x_ref + 1.0))
        weight_parts.append(half * w_ref)

    t = np.concatenate(time_parts)
    weights = np.concatenate(weight_parts)
    phase = omega * t

    if nl.stateful:
        # Secuencia en orden temporal: borde de cada arco (solo actualiza estado) y nodos
        seq, is_node = [], []
        for lo, part in zip(edges[:-1], time_parts):
            seq.append(lo)
            is_node.append(False)
            seq.extend(part)
            is_node.extend([True] * len(part))
        seq = np.asarray(seq)
        is_node = np.asarray(is_node)
        xs = bias + A * np.sin(omega * seq)
        # Un ciclo de calentamiento y un ciclo registrado
        _, state = nl.march(xs)
        ys, _ = nl.march(xs, state)
        y = ys[is_node]
    else:
        y = nl(bias + A * np.sin(phase))

    a0 = float(np.sum(weights * y)) / period
    a1 = 2.0 * float(np.sum(weights * y * np.sin(phase))) / period
    b1 = 2.0 * float(np.sum(weights * y * np.cos(phase))) / period
    return a0, a1, b1


def _uniform_moments(nl: Nonlinearity, A: float, bias: float, omega: float,
                     n: int) -> Tuple[float, float, float]:
    """Regla del trapecio periódica sobre n instantes equiespaciados de un periodo"""
    t = np.arange(n) * ((TWO_PI / omega) / n)
    phase = omega * t
    y = nl(bias + A * np.sin(phase))
    a0 = float(np.mean(y))
    a1 = 2.0 * float(np.mean(y * np.sin(phase)))
    b1 = 2.0 * float(np.mean(y * np.cos(phase)))
    return a0, a1, b1


def df_numeric(nl: Nonlinearity, A: float, bias: float = 0.0,
               n_samples: Optional[int] = None, omega: float = 1.0) -> DFSample:
    """
    Función descriptiva por cuadratura de y(θ) = f(bias + A·sinθ).

    a0 es la media, a1 = (1/π)∫y·sinθ dθ, b1 = (1/π)∫y·cosθ dθ y
    N = (a1 + j·b1)/A. Las no linealidades suaves usan la regla del trapecio
    en una rejilla uniforme; las que tienen quiebres se integran por arcos.
    La integral se hace en el tiempo sobre un periodo T = 2π/ω de la
    excitación; para una f sin dependencia de la velocidad N no depende de ω.
    """
    config = get_config()
    n = _check_samples(n_samples if n_samples is not None else config.get("describing", "n_samples", 1024))
    if not A > 0.0:
        raise ConfigurationError(f"La amplitud A debe ser > 0 (A={A!r})", key="A")
    if not omega > 0.0:
        raise ConfigurationError("omega debe ser > 0", key="omega")

    if nl.stateful or nl.breakpoints():
        order = int(config.get("describing", "gauss_order", 32))
        a0, a1, b1 = _piecewise_moments(nl, A, bias, omega, order)
    else:
        a0, a1, b1 = _uniform_moments(nl, A, bias, omega, n)
    return DFSample(A=A, bias=bias, a0=a0, N=complex(a1, b1) / A)


def df_eval(nl: Nonlinearity, A: float, bias: float = 0.0,
            n_samples: Optional[int] = None) -> DFSample:
    """Muestra de N(A): forma cerrada si existe y el sesgo es nulo, si no cuadratura"""
    threshold = closed_form_threshold(nl)
    if bias == 0.0 and threshold is not None and A >= threshold and A > 0.0:
        return DFSample(A=A, bias=0.0, a0=closed_form_dc(nl), N=df_closed_form(nl, A))
    return df_numeric(nl, A, bias, n_samples)


def df_curve(nl: Nonlinearity, A_min: float, A_max: float, n_points: int,
             bias: float = 0.0, n_samples: Optional[int] = None) -> DFCurve:
    """Barrido geométrico de amplitudes entre A_min y A_max"""
    if not (0.0 < A_min < A_max) or not math.isfinite(A_max):
        raise ConfigurationError(f"Rango de amplitudes inválido: [{A_min!r}, {A_max!r}]", key="A_range")
    if n_points < 2:
        raise ConfigurationError("df_curve necesita al menos dos puntos", key="n_points")

    amplitudes = np.geomspace(A_min, A_max, int(n_points))
    samples = [df_eval(nl, float(A), bias, n_samples) for A in amplitudes]
    logging.debug(f"Curva DF de {nl!r}: {len(samples)} muestras en [{A_min!r}, {A_max!r}]")
    return DFCurve(samples, nl)


def critical_locus(curve: DFCurve, sign: int) -> List[Tuple[float, complex]]:
    """Lugar crítico σ/N(A) conservando el orden en A"""
    if sign not in (1, -1):
        raise ConfigurationError("El signo del lazo debe ser +1 o -1", key="sign")

    values = curve.values
    scale = float(np.max(np.abs(values))) if len(values) else 0.0
    locus = []
    for sample in curve.samples:
        if abs(sample.N) <= 1e-12 * scale or sample.N == 0:
            raise SingularityError(f"N(A) nula en A={sample.A!r}; el lugar crítico no existe",
                                   where=sample.A)
        locus.append((sample.A, sign / sample.N))
    return locus
