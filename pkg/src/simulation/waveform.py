# src/simulation/waveform.py

import math
import logging
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from ..config import get_config
from ..errors import NoOscillationError, NumericalError, WindowingError
from .integrator import Trajectory

# Cociente de amplitudes entre el último y el primer periodo que se toma por decaimiento
DECAY_RATIO = 0.1


class WaveformMetrics:
    """Métricas de régimen permanente de un nodo"""

    HEADER = ["node", "amplitude", "offset", "period", "thd"]

    def __init__(self, node: str, amplitude: float, offset: float, period: float,
                 thd: float, window: Tuple[float, float], steady: bool = True,
                 dispersion: float = 0.0):
        self.node = node
        self.amplitude = amplitude
        self.offset = offset
        self.period = period
        self.thd = thd
        self.window = window
        self.steady = steady
        self.dispersion = dispersion

    @property
    def frequency_hz(self) -> float:
        return 1.0 / self.period

    @property
    def swing(self) -> float:
        return 2.0 * self.amplitude

    def row(self) -> List[Any]:
        return [self.node, self.amplitude, self.offset, self.period, self.thd]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "node": self.node,
            "amplitude": self.amplitude,
            "offset": self.offset,
            "period": self.period,
            "thd": self.thd,
            "window": list(self.window),
            "steady": self.steady,
            "dispersion": self.dispersion,
        }

    def __repr__(self) -> str:
        flag = "" if self.steady else ", non-steady"
        return (f"WaveformMetrics({self.node}: amplitude={self.amplitude:.6g}, "
                f"period={self.period:.6g}, thd={self.thd:.3g}{flag})")


def _uniform(traj: Trajectory, node: str) -> Tuple[np.ndarray, np.ndarray]:
    """Serie del nodo sobre una rejilla uniforme (remuestreo lineal si hace falta)"""
    t, x = traj.times, traj.node(node)
    if traj.is_uniform():
        return t, x
    grid = np.linspace(t[0], t[-1], t.size)
    return grid, np.interp(grid, t, x)


def rising_crossings(t: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Instantes de cruce ascendente por cero, interpolados linealmente"""
    idx = np.nonzero((y[:-1] < 0.0) & (y[1:] >= 0.0))[0]
    frac = -y[idx] / (y[idx + 1] - y[idx])
    return t[idx] + frac * (t[idx + 1] - t[idx])


def waveform_metrics(traj: Trajectory, node: str,
                     settle_fraction: Optional[float] = None) -> WaveformMetrics:
    """
    Periodo, amplitud, offset y THD en régimen permanente.

    Tras descartar la fracción inicial `settle_fraction`, el periodo es la
    separación media de los cruces ascendentes de (señal - media); amplitud
    y offset se miden en los últimos periodos completos de la ventana.
    """
    config = get_config()
    if settle_fraction is None:
        settle_fraction = float(config.get("simulation", "settle_fraction", 0.5))
    window_periods = int(config.get("simulation", "window_periods", 5))
    limit = float(config.get("simulation", "dispersion_limit", 1e-3))
    if not 0.0 <= settle_fraction < 1.0:
        raise WindowingError(f"settle_fraction fuera de [0, 1): {settle_fraction!r}")

    t, x = _uniform(traj, node)
    start = t[0] + settle_fraction * (t[-1] - t[0])
    mask = t >= start
    ts, ys = t[mask], x[mask]
    mean = float(np.mean(ys))
    if np.ptp(ys) <= 1e-12 * max(1.0, abs(mean)):
        raise NoOscillationError(f"El nodo '{node}' es constante en la ventana de análisis")

    crossings = rising_crossings(ts, ys - mean)
    if crossings.size < 3:
        raise NoOscillationError(
            f"Solo {crossings.size} cruces ascendentes en '{node}': la señal no oscila")
    periods = np.diff(crossings)
    period = float(np.mean(periods))
    dispersion = float(np.std(periods) / period)

    first = ys[ts < crossings[1]]
    last = ys[ts >= crossings[-2]]
    if np.ptp(last) < DECAY_RATIO * np.ptp(first):
        raise NoOscillationError(f"La oscilación de '{node}' decae")

    dt = float(t[1] - t[0])
    m = int(round(window_periods * period / dt))
    if m > ys.size:
        raise WindowingError(
            f"La ventana de {window_periods} periodos ({m} muestras) excede el tramo asentado")
    tail = ys[-m:]
    amplitude = 0.5 * float(np.ptp(tail))
    offset = float(np.mean(tail))

    steady = dispersion < limit
    if not steady:
        logging.warning(f"Nodo '{node}' no estacionario: dispersión del periodo {dispersion:.2e}")

    try:
        distortion = thd(fourier_coeffs(traj, node, period))
    except NumericalError as e:
        logging.warning(f"THD no disponible para '{node}': {e}")
        distortion = float("nan")

    return WaveformMetrics(node, amplitude, offset, period, distortion,
                           (float(ts[-m]), float(ts[-1])), steady, dispersion)


def fourier_coeffs(traj: Trajectory, node: str, period: float,
                   k_max: Optional[int] = None,
                   settle_fraction: Optional[float] = None) -> List[complex]:
    """
    Coeficientes armónicos c₁..c_k sobre el mayor número entero de periodos
    al final de la trayectoria (tras el asentamiento). La señal se remuestrea
    a un número fijo de muestras por periodo; la suma de rectángulos coincide
    con el trapecio para un integrando periódico.
    """
    config = get_config()
    if k_max is None:
        k_max = int(config.get("simulation", "k_max", 49))
    if settle_fraction is None:
        settle_fraction = float(config.get("simulation", "settle_fraction", 0.5))
    per_period = int(config.get("simulation", "samples_per_period", 2048))
    if not (period > 0.0 and math.isfinite(period)):
        raise WindowingError(f"Periodo inválido: {period!r}")
    if k_max < 1 or 2 * k_max >= per_period:
        raise WindowingError(f"k_max={k_max} incompatible con {per_period} muestras por periodo")

    t, x = traj.times, traj.node(node)
    usable = (1.0 - settle_fraction) * (t[-1] - t[0])
    n_periods = int(math.floor(usable / period * (1.0 + 1e-12)))
    if n_periods < 3:
        raise WindowingError(f"La ventana contiene {n_periods} periodos; se necesitan al menos 3")

    n = n_periods * per_period
    grid = t[-1] - n_periods * period + np.arange(n) * (period / per_period)
    y = np.interp(grid, t, x)
    spectrum = np.fft.rfft(y)
    return [complex(2.0 * spectrum[k * n_periods] / n) for k in range(1, k_max + 1)]


def thd(coeffs: List[complex]) -> float:
    """√(Σ_{k≥2} |c_k|²) / |c₁|"""
    if not coeffs:
        raise WindowingError("Sin coeficientes armónicos")
    fundamental = abs(coeffs[0])
    if fundamental == 0.0:
        raise NumericalError("Fundamental nula: THD indefinida")
    harmonics = np.abs(np.asarray(coeffs[1:]))
    return float(math.sqrt(float(np.sum(harmonics ** 2))) / fundamental)
