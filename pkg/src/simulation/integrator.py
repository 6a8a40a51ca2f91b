# src/simulation/integrator.py

import math
import logging
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import solve_ivp

from ..config import get_config
from ..errors import ConfigurationError, IntegrationError
from .models import OscModel

METHODS = ("rk4", "rk45")
# Precisión de la localización de conmutaciones, relativa a la constante de tiempo
EVENT_TOLERANCE = 1e-12


class Trajectory:
    """Serie temporal del estado con un nombre por componente"""

    def __init__(self, times: Sequence[float], states: np.ndarray, node_names: List[str]):
        times = np.asarray(times, dtype=float)
        states = np.asarray(states, dtype=float)
        if times.ndim != 1 or times.size < 2:
            raise ConfigurationError("Una trayectoria necesita al menos dos instantes", key="times")
        if np.any(np.diff(times) <= 0.0):
            raise ConfigurationError("Los instantes de la trayectoria deben ser crecientes", key="times")
        if states.shape != (times.size, len(node_names)):
            raise ConfigurationError(
                f"Forma de estados {states.shape} incompatible con {times.size} instantes "
                f"y {len(node_names)} nodos", key="states")
        self.times = times
        self.states = states
        self.node_names = list(node_names)

    def node(self, name: str) -> np.ndarray:
        try:
            return self.states[:, self.node_names.index(name)]
        except ValueError:
            raise ConfigurationError(
                f"Nodo desconocido '{name}' (válidos: {', '.join(self.node_names)})", key="probe")

    @property
    def span(self) -> float:
        return float(self.times[-1] - self.times[0])

    def is_uniform(self) -> bool:
        steps = np.diff(self.times)
        return bool(np.allclose(steps, steps[0], rtol=1e-9, atol=0.0))

    def is_valid(self) -> bool:
        return bool(np.all(np.isfinite(self.states)))

    def rows(self) -> List[List[Any]]:
        rows: List[List[Any]] = [["time"] + self.node_names]
        for t, x in zip(self.times, self.states):
            rows.append([float(t)] + [float(v) for v in x])
        return rows

    def to_dict(self) -> Dict[str, Any]:
        return {"times": self.times.tolist(), "states": self.states.tolist(), "node_names": self.node_names}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'Trajectory':
        return cls(data["times"], np.asarray(data["states"]), data["node_names"])


def _rk4_step(model: OscModel, t: float, x: np.ndarray, h: float,
              relay: Optional[np.ndarray]) -> np.ndarray:
    k1 = model.derivatives(t, x, relay)
    k2 = model.derivatives(t + h / 2, x + h / 2 * k1, relay)
    k3 = model.derivatives(t + h / 2, x + h / 2 * k2, relay)
    k4 = model.derivatives(t + h, x + h * k3, relay)
    return x + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


def _crosses(before: np.ndarray, after: np.ndarray) -> bool:
    return bool(np.any((before * after < 0.0) | ((after == 0.0) & (before != 0.0))))


def _relay_drive(model: OscModel, t: float, x: np.ndarray,
                 previous: Optional[np.ndarray]) -> np.ndarray:
    """
    Salidas de relé para el estado x. Una entrada justo en el umbral toma la
    salida del lado hacia el que se mueve; si está parada conserva la anterior.
    """
    idx = model.relay_inputs
    inputs = x[idx]
    drive = np.asarray(model.relay_outputs(inputs), dtype=float)
    at_threshold = inputs == 0.0
    if not np.any(at_threshold):
        return drive
    held = drive if previous is None else previous
    heading = np.sign(model.derivatives(t, x, held)[idx])
    ahead = np.asarray(model.relay_outputs(heading), dtype=float)
    return np.where(at_threshold, np.where(heading != 0.0, ahead, held), drive)


def _relay_step(model: OscModel, t: float, x: np.ndarray, dt: float,
                relay: Optional[np.ndarray] = None) -> Tuple[np.ndarray, np.ndarray]:
    """
    Paso de longitud dt con salidas de relé congeladas; cada cruce por cero
    de una entrada se localiza por bisección y las salidas se recalculan
    con el estado posterior al cruce.
    """
    idx = model.relay_inputs
    tol = EVENT_TOLERANCE * model.time_scale
    remaining = dt
    while remaining > 0.0:
        relay = _relay_drive(model, t, x, relay)
        trial = _rk4_step(model, t, x, remaining, relay)
        if not _crosses(x[idx], trial[idx]):
            return trial, relay
        lo, hi = 0.0, remaining
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if _crosses(x[idx], _rk4_step(model, t, x, mid, relay)[idx]):
                hi = mid
            else:
                lo = mid
        x = _rk4_step(model, t, x, hi, relay)
        t += hi
        remaining -= hi
        logging.debug(f"Conmutación de relé en t={t!r}")
    return x, relay


def _integrate_rk4(model: OscModel, x0: np.ndarray, dt: float, n_steps: int) -> np.ndarray:
    states = np.empty((n_steps + 1, x0.size))
    states[0] = x0
    x = x0.copy()
    switching = model.relay_inputs is not None
    relay = None
    for k in range(n_steps):
        t = k * dt
        if switching:
            x, relay = _relay_step(model, t, x, dt, relay)
        else:
            x = _rk4_step(model, t, x, dt, None)
        if not np.all(np.isfinite(x)):
            raise IntegrationError(f"Estado no finito en t={t + dt!r}", time=t + dt)
        states[k + 1] = x
    return states


def _integrate_rk45(model: OscModel, x0: np.ndarray, times: np.ndarray,
                    rtol: float, atol: float) -> np.ndarray:
    sol = solve_ivp(lambda t, x: model.derivatives(t, x), (times[0], times[-1]), x0,
                    method="RK45", t_eval=times, rtol=rtol, atol=atol)
    if sol.status != 0:
        when = float(sol.t[-1]) if sol.t.size else 0.0
        raise IntegrationError(f"RK45 falló en t={when!r}: {sol.message}", time=when)
    states = sol.y.T
    if not np.all(np.isfinite(states)):
        bad = int(np.argmax(~np.all(np.isfinite(states), axis=1)))
        raise IntegrationError(f"Estado no finito en t={times[bad]!r}", time=float(times[bad]))
    return states


def integrate(model: OscModel, x0: Optional[Sequence[float]] = None, dt: float = 1e-5,
              t_max: float = 0.1, method: str = "rk4", rtol: Optional[float] = None,
              atol: Optional[float] = None) -> Trajectory:
    """
    Integra el modelo desde x0 y devuelve la trayectoria sobre la rejilla
    uniforme k·dt. rk4 es de paso fijo; rk45 usa solve_ivp con control de
    error y muestrea la solución en la misma rejilla.
    """
    if method not in METHODS:
        raise ConfigurationError(f"Método de integración desconocido: '{method}'", key="method")
    if not (dt > 0.0 and math.isfinite(dt)):
        raise ConfigurationError("dt debe ser > 0", key="dt")
    if not (t_max > dt and math.isfinite(t_max)):
        raise ConfigurationError("t_max debe ser mayor que dt", key="t_max")

    x0 = model.default_initial_state() if x0 is None else np.asarray(x0, dtype=float)
    if x0.shape != (model.dimension,):
        raise ConfigurationError(
            f"x0 debe tener {model.dimension} componentes para '{model.preset}'", key="x0")

    n_steps = int(round(t_max / dt))
    times = np.arange(n_steps + 1) * dt

    config = get_config()
    if method == "rk45" and model.relay_inputs is not None:
        logging.warning(f"'{model.preset}' tiene relés ideales; se integra con rk4 y localización de conmutaciones")
        method = "rk4"

    logging.info(f"Integrando '{model.preset}' con {method}: {n_steps} pasos de {dt!r}")
    if method == "rk4":
        states = _integrate_rk4(model, x0, dt, n_steps)
    else:
        states = _integrate_rk45(model, x0, times,
                                 rtol if rtol is not None else config.get("simulation", "rtol", 1e-8),
                                 atol if atol is not None else config.get("simulation", "atol", 1e-10))
    return Trajectory(times, states, model.node_names)
