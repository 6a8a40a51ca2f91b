# src/spec/presets.py

import copy
import logging
from typing import Any, Callable, Dict, List

from ..errors import ConfigurationError


def _ring(kind: str, nl: Dict[str, Any], sim_params: Dict[str, float], dt: float,
          t_max: float, expected_inaccurate: bool) -> Dict[str, Any]:
    tau = sim_params["tau"]
    return {
        "name": kind,
        "loop": {"sign": 1, "bias_mode": "off"},
        # Dos etapas agrupadas como retardo de 2/3 del periodo sobre la rama ω < 0
        "linear": {"num": [1.0], "den": [1.0, tau], "rho": 2.0 / 3.0, "branch": -1},
        "nonlinearity": nl,
        "predict": {"A_range": [1e-3, 1e2], "omega_range": [10.0, 1e6],
                    "probes": ["v1", "v2", "v3"]},
        "simulate": {"preset": kind, "params": dict(sim_params), "method": "rk4",
                     "dt": dt, "t_max": t_max, "probe": "v1"},
        "compare": {"amplitude_tol": 0.1, "period_tol": 0.1,
                    "expected_inaccurate": expected_inaccurate},
    }


def ring_relay() -> Dict[str, Any]:
    return _ring("ring_relay", {"kind": "relay", "M": 1.0, "scale": -1.0},
                 {"n": 3, "tau": 1e-3, "V_dd": 1.0}, 2e-6, 0.09, True)


def ring_tanh() -> Dict[str, Any]:
    return _ring("ring_tanh", {"kind": "tanh_inverter", "A_hat": 1.0, "k": 3.0},
                 {"n": 3, "tau": 1e-3, "A_hat": 1.0, "k": 3.0}, 2e-6, 0.07, False)


def series_rlc_negres() -> Dict[str, Any]:
    R, L, C = 1.0, 1e-3, 1e-6
    return {
        "name": "series_rlc_negres",
        "loop": {"sign": -1, "bias_mode": "off"},
        # Admitancia serie sC/(LCs² + RCs + 1)
        "linear": {"num": [0.0, C], "den": [1.0, R * C, L * C]},
        "nonlinearity": {"kind": "tanh_resistor", "V_max": 1.0, "R_max": 2.0},
        "predict": {"A_range": [1e-3, 1e2], "omega_range": [1e2, 1e7], "probes": ["i"]},
        "simulate": {"preset": "series_rlc_negres",
                     "params": {"R": R, "L": L, "C": C, "V_max": 1.0, "R_max": 2.0},
                     "method": "rk4", "dt": 1e-6, "t_max": 0.04, "probe": "i"},
        "compare": {"amplitude_tol": 0.1, "period_tol": 0.1, "expected_inaccurate": False},
    }


def _relaxation(kind: str, linear: Dict[str, Any], k1: float, t_max: float) -> Dict[str, Any]:
    params = {"tau_f": 2.5e-4, "tau_s": 1e-3, "k1": k1, "k2": 6.25, "k3": 0.4}
    return {
        "name": kind,
        "loop": {"sign": 1, "bias_mode": "off"},
        "linear": linear,
        "nonlinearity": {"kind": "tanh_relaxation", "k1": k1, "k2": 6.25, "k3": 0.4},
        "predict": {"A_range": [1e-3, 1e2], "omega_range": [1.0, 1e6], "probes": ["vo"]},
        "simulate": {"preset": kind, "params": params, "method": "rk4",
                     "dt": 2e-6, "t_max": t_max, "probe": "vo"},
        "compare": {"amplitude_tol": 0.1, "period_tol": 0.1, "expected_inaccurate": False},
    }


def relaxation_two_tau() -> Dict[str, Any]:
    tau_f, tau_s = 2.5e-4, 1e-3
    return _relaxation("relaxation_two_tau",
                       {"num": [1.0, tau_s], "den": [1.0, tau_f, tau_f * tau_s]}, 2.0, 0.08)


def harmonic_relaxation() -> Dict[str, Any]:
    tau_f, tau_s = 2.5e-4, 1e-3
    # Etapa lenta integradora: τ_s·s/(τ_f·τ_s·s² + 1). El tanque sin pérdidas
    # solo necesita un exceso pequeño de conductancia negativa: f'(0) = 0.1
    return _relaxation("harmonic_relaxation",
                       {"num": [0.0, tau_s], "den": [1.0, 0.0, tau_f * tau_s]}, 2.4, 0.12)


def fitzhugh_nagumo() -> Dict[str, Any]:
    tau = 12.5
    return {
        "name": "fitzhugh_nagumo",
        "loop": {"sign": 1, "bias_mode": "off"},
        # Bloque lineal normalizado (b = 1) de la ecuación lenta
        "linear": {"num": [1.0, tau], "den": [1.0, 1.0, tau]},
        "nonlinearity": {"kind": "cubic_fn", "I_ext": 0.5},
        "predict": {"A_range": [1e-2, 10.0], "omega_range": [1e-3, 10.0], "probes": ["v"]},
        "simulate": {"preset": "fitzhugh_nagumo",
                     "params": {"a": 0.7, "b": 0.8, "tau": tau, "I_ext": 0.5},
                     "method": "rk4", "dt": 0.05, "t_max": 1000.0, "probe": "v"},
        "compare": {"amplitude_tol": 0.1, "period_tol": 0.1, "expected_inaccurate": True},
    }


def repressilator() -> Dict[str, Any]:
    beta = 0.2
    return {
        "name": "repressilator",
        # Desplazamiento de p estimado para la lectura agrupada de un solo bloque
        "loop": {"sign": 1, "bias_mode": "fixed", "bias": 38.0},
        "linear": {"num": [beta], "den": [beta, 1.0], "rho": 2.0 / 3.0, "branch": -1},
        "nonlinearity": {"kind": "hill", "alpha": 300.0, "alpha0": 0.03, "n": 2.0},
        # Por encima de A = 60 el valle de p cae muy por debajo de cero
        "predict": {"A_range": [1e-2, 60.0], "omega_range": [1e-3, 10.0],
                    "probes": ["p1", "m2", "p2"]},
        "simulate": {"preset": "repressilator",
                     "params": {"alpha": 300.0, "alpha0": 0.03, "n": 2.0, "beta": beta},
                     "method": "rk45", "dt": 0.1, "t_max": 1500.0, "probe": "p1"},
        "compare": {"amplitude_tol": 0.1, "period_tol": 0.1, "expected_inaccurate": True},
    }


# Nodos del modelo temporal expresados en el vocabulario de sondas del lazo
PROBE_ALIASES: Dict[str, Dict[str, str]] = {
    "ring_relay": {"v1": "input", "v2": "linear_output_nodelay", "v3": "linear_output"},
    "ring_tanh": {"v1": "input", "v2": "linear_output_nodelay", "v3": "linear_output"},
    "series_rlc_negres": {"i": "input"},
    "relaxation_two_tau": {"vo": "input"},
    "harmonic_relaxation": {"vo": "input"},
    "fitzhugh_nagumo": {"v": "input"},
    "repressilator": {"p1": "input", "m2": "nl_output", "p2": "linear_output_nodelay"},
}


class PresetCatalog:
    """Registro de los osciladores de referencia con sus parámetros exactos"""

    def __init__(self):
        self._presets: Dict[str, Callable[[], Dict[str, Any]]] = {}

    def register(self, name: str, builder: Callable[[], Dict[str, Any]]) -> None:
        self._presets[name] = builder
        logging.debug(f"Preset '{name}' registrado")

    def names(self) -> List[str]:
        return list(self._presets)

    def get(self, name: str) -> Dict[str, Any]:
        """Descripción del preset en forma de diccionario (copia independiente)"""
        builder = self._presets.get(name)
        if builder is None:
            raise ConfigurationError(
                f"Preset desconocido: '{name}' (disponibles: {', '.join(self._presets)})", key="preset")
        return copy.deepcopy(builder())


presets = PresetCatalog()
for _builder in (ring_relay, ring_tanh, series_rlc_negres, relaxation_two_tau,
                 harmonic_relaxation, fitzhugh_nagumo, repressilator):
    presets.register(_builder.__name__, _builder)


def probe_aliases(simulation_preset: str) -> Dict[str, str]:
    return dict(PROBE_ALIASES.get(simulation_preset, {}))
