# src/prediction/solver.py

import math
import logging
from typing import List, Optional, Tuple

import numpy as np
from scipy.optimize import brentq

from ..config import get_config
from ..describing.numeric import df_eval
from ..errors import ConfigurationError, NumericalError, SingularityError
from ..linear.frequency_finders import real_axis_crossings
from .loop import LoopSpec, PredictedOscillation
from .newton import damped_newton
from .stability import classify

# Puntos de la exploración de B en el modo dc_balance
BIAS_SCAN_POINTS = 65


def _check_range(values: Tuple[float, float], key: str) -> Tuple[float, float]:
    lo, hi = float(values[0]), float(values[1])
    if not (0.0 < lo < hi) or not math.isfinite(hi):
        raise ConfigurationError(f"Rango inválido para '{key}': [{lo!r}, {hi!r}]", key=key)
    return lo, hi


class LoopSolver:
    """
    Resuelve G(jω)·N(A) = sign en dos etapas: candidatos (cruces con el eje
    real o exploración de una rejilla A×ω) y pulido por Newton amortiguado.
    """

    def __init__(self, spec: LoopSpec, tolerance: Optional[float] = None):
        config = get_config()
        self.spec = spec
        self.tolerance = float(tolerance if tolerance is not None
                               else config.get("prediction", "tolerance", 1e-9))
        self.grid_A = int(config.get("prediction", "grid_A", 200))
        self.grid_omega = int(config.get("prediction", "grid_omega", 200))
        self.max_iter = int(config.get("prediction", "newton_max_iter", 60))
        self.halvings = int(config.get("prediction", "damping_halvings", 20))
        self.dedup_rel = float(config.get("prediction", "dedup_rel", 1e-6))
        self._dc_gain: Optional[float] = None

    # -- evaluación del lazo ------------------------------------------------

    def describe(self, A: float, bias: Optional[float] = None):
        return df_eval(self.spec.nl, A, self.spec.held_bias if bias is None else bias)

    def residual(self, A: float, omega: float, bias: Optional[float] = None) -> complex:
        return complex(self.spec.G.response(omega)) * self.describe(A, bias).N - self.spec.sign

    @property
    def dc_gain(self) -> float:
        if self._dc_gain is None:
            try:
                self._dc_gain = float(complex(self.spec.G.without_delay().response(0.0)).real)
            except SingularityError:
                raise ConfigurationError("dc_balance requiere G(0) finito", key="bias_mode")
        return self._dc_gain

    def bias_range(self, A_max: float) -> Tuple[float, float]:
        return self.spec.bias_range or (-A_max, A_max)

    def dc_residual(self, A: float, bias: float) -> float:
        return bias - self.spec.sign * self.dc_gain * self.describe(A, bias).a0

    def solve_bias(self, A: float, A_max: float) -> Optional[float]:
        """B con B = sign·G(0)·a0(A, B) dentro del rango de sesgo"""
        lo, hi = self.bias_range(A_max)
        grid = np.linspace(lo, hi, BIAS_SCAN_POINTS)
        values = [self.dc_residual(A, b) for b in grid]
        for i in range(len(grid) - 1):
            if values[i] == 0.0:
                return float(grid[i])
            if values[i] * values[i + 1] < 0.0:
                return float(brentq(lambda b: self.dc_residual(A, b), grid[i], grid[i + 1],
                                    xtol=1e-13 * max(abs(hi), abs(lo), 1.0)))
        if values[-1] == 0.0:
            return float(grid[-1])
        return None

    # -- candidatos ---------------------------------------------------------

    def _real_candidates(self, A_range, omega_range) -> List[Tuple[float, float, float]]:
        amplitudes = np.geomspace(A_range[0], A_range[1], self.grid_A)
        levels = np.array([self.describe(float(A)).N.real for A in amplitudes])
        candidates = []
        for omega, g in real_axis_crossings(self.spec.G, omega_range):
            if g == 0.0:
                continue
            target = (self.spec.sign / g).real
            diff = levels - target
            for i in range(len(amplitudes) - 1):
                if diff[i] == 0.0:
                    candidates.append((float(amplitudes[i]), omega, 0.0))
                    continue
                if diff[i] * diff[i + 1] >= 0.0:
                    continue
                A = brentq(lambda a: self.describe(a).N.real - target,
                           amplitudes[i], amplitudes[i + 1], xtol=1e-14 * amplitudes[i])
                candidates.append((float(A), omega, 0.0))
        return candidates

    def _grid_candidates(self, A_range, omega_range) -> List[Tuple[float, float, float]]:
        amplitudes = np.geomspace(A_range[0], A_range[1], self.grid_A)
        positive = np.geomspace(omega_range[0], omega_range[1], self.grid_omega)
        omegas = np.concatenate((-positive[::-1], positive))

        biases = np.full(amplitudes.size, self.spec.held_bias)
        usable = np.ones(amplitudes.size, dtype=bool)
        if self.spec.uses_bias:
            for i, A in enumerate(amplitudes):
                bias = self.solve_bias(float(A), A_range[1])
                if bias is None:
                    usable[i] = False
                else:
                    biases[i] = bias
        N = np.array([self.describe(float(A), float(B)).N if ok else np.nan
                      for A, B, ok in zip(amplitudes, biases, usable)])

        G = np.empty(omegas.size, dtype=complex)
        for j, w in enumerate(omegas):
            try:
                G[j] = complex(self.spec.G.response(w))
            except SingularityError:
                G[j] = np.nan

        r = np.outer(N, G) - self.spec.sign
        corners = np.stack((r[:-1, :-1], r[1:, :-1], r[:-1, 1:], r[1:, 1:]))
        with np.errstate(invalid="ignore"):
            finite = np.all(np.isfinite(corners), axis=0)
            re_hit = (corners.real.min(axis=0) <= 0.0) & (corners.real.max(axis=0) >= 0.0)
            im_hit = (corners.imag.min(axis=0) <= 0.0) & (corners.imag.max(axis=0) >= 0.0)
        hits = finite & re_hit & im_hit
        # Las celdas que cruzan ω = 0 unen las dos ramas
        hits[:, positive.size - 1] = False

        candidates = []
        for i, j in zip(*np.nonzero(hits)):
            A0 = math.sqrt(amplitudes[i] * amplitudes[i + 1])
            w0 = math.copysign(math.sqrt(omegas[j] * omegas[j + 1]), omegas[j])
            candidates.append((A0, w0, 0.5 * (biases[i] + biases[i + 1])))
        # Orden determinista antes del pulido
        candidates.sort()
        return candidates

    # -- pulido -------------------------------------------------------------

    def polish(self, A0: float, omega0: float, bias0: float = 0.0) -> Tuple[float, float, Optional[float]]:
        sign = self.spec.sign
        G = self.spec.G

        if self.spec.uses_bias:
            def func(x):
                sample = self.describe(x[0], x[2])
                r = complex(G.response(x[1])) * sample.N - sign
                dc = x[2] - sign * self.dc_gain * sample.a0
                return np.array([r.real, r.imag, dc])
            x0 = [A0, omega0, bias0]
        else:
            def func(x):
                r = self.residual(x[0], x[1])
                return np.array([r.real, r.imag])
            x0 = [A0, omega0]

        # La amplitud es positiva y ω no cambia de rama
        admissible = lambda x: x[0] > 0.0 and x[1] * omega0 > 0.0
        x = damped_newton(func, x0, self.tolerance, self.max_iter, self.halvings, admissible)
        if self.spec.uses_bias:
            return float(x[0]), float(x[1]), float(x[2])
        if self.spec.bias_mode == "fixed":
            return float(x[0]), float(x[1]), self.spec.held_bias
        return float(x[0]), float(x[1]), None

    def _is_duplicate(self, osc: PredictedOscillation, found: List[PredictedOscillation]) -> bool:
        for other in found:
            if (abs(osc.A_star - other.A_star) <= self.dedup_rel * other.A_star and
                    abs(osc.omega_star - other.omega_star) <= self.dedup_rel * other.omega_star):
                return True
        return False

    def solve(self, A_range, omega_range, with_stability: bool = True) -> List[PredictedOscillation]:
        A_range = _check_range(A_range, "A_range")
        omega_range = _check_range(omega_range, "omega_range")

        real_path = not self.spec.nl.stateful and not self.spec.uses_bias
        if real_path:
            candidates = self._real_candidates(A_range, omega_range)
        else:
            candidates = self._grid_candidates(A_range, omega_range)
        logging.info(f"{len(candidates)} candidatos para la ecuación de lazo")

        found: List[PredictedOscillation] = []
        for A0, w0, b0 in candidates:
            try:
                A, omega, bias = self.polish(A0, w0, b0)
                res = abs(self.residual(A, omega, bias))
            except NumericalError as e:
                logging.warning(f"Candidato A={A0:.4g}, ω={w0:.4g} descartado: {e}")
                continue
            if res > self.tolerance or not (A_range[0] <= A <= A_range[1]):
                logging.warning(f"Candidato A={A0:.4g}, ω={w0:.4g} descartado (residuo {res:.2e})")
                continue
            osc = PredictedOscillation(A, omega, res, bias=bias)
            if not self._is_duplicate(osc, found):
                found.append(osc)

        found.sort(key=lambda o: (o.A_star, o.omega_star))
        if with_stability:
            for osc in found:
                osc.stability = classify(self.spec, osc)
        logging.info(f"{len(found)} oscilaciones predichas")
        return found


def solve_loop(spec: LoopSpec, A_range, omega_range,
               tolerance: Optional[float] = None) -> List[PredictedOscillation]:
    """Intersecciones clasificadas de la ecuación de lazo"""
    return LoopSolver(spec, tolerance).solve(A_range, omega_range)


class ExistenceMargin:
    """Veredicto geométrico de existencia y distancia con signo entre lugares"""

    def __init__(self, oscillates: bool, margin: float):
        self.oscillates = oscillates
        self.margin = margin

    def __iter__(self):
        return iter((self.oscillates, self.margin))

    def to_dict(self):
        return {"oscillates": self.oscillates, "margin": self.margin}

    def __repr__(self) -> str:
        return f"ExistenceMargin(oscillates={self.oscillates}, margin={self.margin!r})"


def existence_margin(spec: LoopSpec, A_range, omega_range,
                     tolerance: Optional[float] = None) -> ExistenceMargin:
    """
    Distancia entre el lugar crítico sign/N(A) y el lugar de Nyquist de G.

    Sin intersección el margen es la distancia mínima (positiva). Con
    intersección es negativo: menos la mayor distancia al lugar de Nyquist de
    las muestras críticas entre las amplitudes de intersección (o media
    década por debajo si solo hay una).
    """
    solver = LoopSolver(spec, tolerance)
    A_range = _check_range(A_range, "A_range")
    omega_range = _check_range(omega_range, "omega_range")
    found = solver.solve(A_range, omega_range, with_stability=False)

    config = get_config()
    n_points = int(config.get("describing", "curve_points", 200))
    amplitudes = np.geomspace(A_range[0], A_range[1], n_points)
    positive = np.geomspace(omega_range[0], omega_range[1], solver.grid_omega)
    omegas = np.concatenate((-positive[::-1], positive))
    nyquist = []
    for w in omegas:
        try:
            nyquist.append(complex(spec.G.response(w)))
        except SingularityError:
            continue
    nyquist = np.array(nyquist)

    critical, kept = [], []
    for A in amplitudes:
        bias = None
        if spec.uses_bias:
            bias = solver.solve_bias(float(A), A_range[1])
            if bias is None:
                continue
        N = solver.describe(float(A), bias).N
        if abs(N) <= 1e-12:
            continue
        critical.append(spec.sign / N)
        kept.append(A)
    if not critical:
        return ExistenceMargin(bool(found), 0.0)

    critical = np.array(critical)
    kept = np.array(kept)
    distances = np.min(np.abs(critical[:, None] - nyquist[None, :]), axis=1)

    if not found:
        margin = float(np.min(distances))
        logging.info(f"Sin intersección; margen {margin:.4g}")
        return ExistenceMargin(False, margin)

    amps = [o.A_star for o in found]
    lo, hi = min(amps), max(amps)
    if lo == hi:
        lo = lo / math.sqrt(10.0)
    window = (kept >= lo) & (kept <= hi)
    margin = -float(np.max(distances[window])) if np.any(window) else 0.0
    logging.info(f"{len(found)} intersecciones; margen {margin:.4g}")
    return ExistenceMargin(True, margin)
