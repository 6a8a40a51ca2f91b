# src/spec/oscillator_spec.py

import math
from typing import Any, Dict, List, Optional, Tuple

from ..errors import ConfigurationError
from ..linear.linear_block import LinearBlock
from ..nonlinearities.nonlinearity import Nonlinearity
from ..prediction.loop import LoopSpec
from ..simulation.integrator import METHODS

DEFAULT_A_RANGE = (1e-3, 1e3)
DEFAULT_OMEGA_RANGE = (1e-3, 1e6)


def _positive_range(value: Any, key: str) -> Tuple[float, float]:
    try:
        lo, hi = (float(v) for v in value)
    except (TypeError, ValueError):
        raise ConfigurationError(f"'{key}' debe ser una lista [min, max]", key=key)
    if not (0.0 < lo < hi) or not math.isfinite(hi):
        raise ConfigurationError(f"'{key}' debe cumplir 0 < min < max", key=key)
    return lo, hi


def _optional_positive(value: Any, key: str, kind=float):
    if value is None:
        return None
    try:
        number = kind(value)
    except (TypeError, ValueError):
        raise ConfigurationError(f"'{key}' debe ser numérico", key=key)
    if not number > 0:
        raise ConfigurationError(f"'{key}' debe ser > 0", key=key)
    return number


class PredictSettings:
    """Rangos de búsqueda, rejillas, tolerancias y sondas de la predicción"""

    KEYS = ("A_range", "omega_range", "grid", "tol", "n_samples", "bias_range", "probes")

    def __init__(self, A_range=DEFAULT_A_RANGE, omega_range=DEFAULT_OMEGA_RANGE,
                 grid: Optional[int] = None, tol: Optional[float] = None,
                 n_samples: Optional[int] = None, bias_range=None,
                 probes: Optional[List[str]] = None):
        self.A_range = _positive_range(A_range, "A_range")
        self.omega_range = _positive_range(omega_range, "omega_range")
        self.grid = _optional_positive(grid, "grid", int)
        self.tol = _optional_positive(tol, "tol")
        self.n_samples = _optional_positive(n_samples, "n_samples", int)
        if bias_range is not None:
            lo, hi = (float(v) for v in bias_range)
            if not lo < hi:
                raise ConfigurationError("'bias_range' debe cumplir min < max", key="bias_range")
            bias_range = (lo, hi)
        self.bias_range = bias_range
        self.probes = [str(p) for p in (probes or ["input"])]

    def to_dict(self) -> Dict[str, Any]:
        data = {"A_range": list(self.A_range), "omega_range": list(self.omega_range),
                "probes": list(self.probes)}
        for key in ("grid", "tol", "n_samples"):
            if getattr(self, key) is not None:
                data[key] = getattr(self, key)
        if self.bias_range is not None:
            data["bias_range"] = list(self.bias_range)
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'PredictSettings':
        return cls(**{k: v for k, v in data.items() if k in cls.KEYS})


class SimulateSettings:
    """Modelo temporal, integrador y nodo medido"""

    KEYS = ("preset", "params", "x0", "method", "dt", "t_max", "rtol", "atol", "probe")

    def __init__(self, preset: str, dt: float, t_max: float, params: Optional[Dict[str, float]] = None,
                 x0: Optional[List[float]] = None, method: str = "rk4",
                 rtol: Optional[float] = None, atol: Optional[float] = None,
                 probe: Optional[str] = None):
        if method not in METHODS:
            raise ConfigurationError(f"Método de integración desconocido: '{method}'", key="method")
        self.preset = str(preset)
        self.dt = _optional_positive(dt, "dt")
        self.t_max = _optional_positive(t_max, "t_max")
        if self.dt is None or self.t_max is None:
            raise ConfigurationError("[simulate] necesita 'dt' y 't_max'", key="dt")
        self.params = {k: float(v) for k, v in (params or {}).items()}
        self.x0 = None if x0 is None else [float(v) for v in x0]
        self.method = method
        self.rtol = _optional_positive(rtol, "rtol")
        self.atol = _optional_positive(atol, "atol")
        self.probe = probe

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"preset": self.preset, "method": self.method,
                                "dt": self.dt, "t_max": self.t_max, "params": dict(self.params)}
        for key in ("x0", "rtol", "atol", "probe"):
            if getattr(self, key) is not None:
                data[key] = getattr(self, key)
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'SimulateSettings':
        missing = [k for k in ("preset", "dt", "t_max") if k not in data]
        if missing:
            raise ConfigurationError(f"Falta '{missing[0]}' en [simulate]", key=missing[0])
        return cls(**{k: v for k, v in data.items() if k in cls.KEYS})


class CompareSettings:
    """Tolerancias relativas de la comparación predicción/simulación"""

    KEYS = ("amplitude_tol", "period_tol", "expected_inaccurate")

    def __init__(self, amplitude_tol: float = 0.1, period_tol: float = 0.1,
                 expected_inaccurate: bool = False):
        self.amplitude_tol = _optional_positive(amplitude_tol, "amplitude_tol")
        self.period_tol = _optional_positive(period_tol, "period_tol")
        self.expected_inaccurate = bool(expected_inaccurate)

    def to_dict(self) -> Dict[str, Any]:
        return {"amplitude_tol": self.amplitude_tol, "period_tol": self.period_tol,
                "expected_inaccurate": self.expected_inaccurate}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'CompareSettings':
        return cls(**{k: v for k, v in data.items() if k in cls.KEYS})


class OscillatorSpec:
    """
    Descripción completa de un oscilador: lazo (G, f, signo), ajustes de
    predicción y, opcionalmente, de simulación y comparación.
    `origin` guarda el preset del que se expandió (no forma parte del valor).
    """

    def __init__(self, name: str, loop: LoopSpec, predict: Optional[PredictSettings] = None,
                 simulate: Optional[SimulateSettings] = None,
                 compare: Optional[CompareSettings] = None, origin: Optional[str] = None):
        self.name = name
        self.loop = loop
        self.predict = predict or PredictSettings()
        self.simulate = simulate
        self.compare = compare or CompareSettings()
        self.origin = origin

    def is_valid(self) -> bool:
        return self.loop is not None and self.predict is not None

    def to_dict(self) -> Dict[str, Any]:
        data = {
            "name": self.name,
            "loop": {"sign": self.loop.sign, "bias_mode": self.loop.bias_mode},
            "linear": self.loop.G.to_dict(),
            "nonlinearity": self.loop.nl.to_dict(),
            "predict": self.predict.to_dict(),
            "compare": self.compare.to_dict(),
        }
        if self.loop.bias_mode == "fixed":
            data["loop"]["bias"] = self.loop.bias
        if self.simulate is not None:
            data["simulate"] = self.simulate.to_dict()
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any], origin: Optional[str] = None) -> 'OscillatorSpec':
        predict = PredictSettings.from_dict(data.get("predict", {}))
        loop_data = data.get("loop", {})
        loop = LoopSpec(LinearBlock.from_dict(data["linear"]),
                        Nonlinearity.from_dict(data["nonlinearity"]),
                        loop_data.get("sign", -1), loop_data.get("bias_mode", "off"),
                        predict.bias_range, loop_data.get("bias", 0.0))
        simulate = SimulateSettings.from_dict(data["simulate"]) if data.get("simulate") else None
        compare = CompareSettings.from_dict(data.get("compare", {}))
        return cls(data.get("name", "oscillator"), loop, predict, simulate, compare, origin)

    def __eq__(self, other) -> bool:
        if not isinstance(other, OscillatorSpec):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    def __repr__(self) -> str:
        return f"OscillatorSpec({self.name!r})"
