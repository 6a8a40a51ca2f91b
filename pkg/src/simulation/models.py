# src/simulation/models.py

from abc import ABC, abstractmethod
import math
import logging
from typing import Any, Dict, List, Optional, Type

import numpy as np

from ..errors import ConfigurationError
from ..nonlinearities.catalog import make_nonlinearity
from ..nonlinearities.nonlinearity import Nonlinearity


class OscModel(ABC):
    """
    Modelo de oscilador en el dominio del tiempo: dx/dt = derivatives(t, x).

    Cada subclase declara `preset`, los parámetros por defecto y los nombres
    de los nodos del estado. Los modelos con relés ideales exponen
    `relay_inputs` (índices de estado que alimentan cada relé); el integrador
    congela sus salidas dentro de cada paso y localiza las conmutaciones.
    """

    preset: str = ""
    DEFAULTS: Dict[str, float] = {}
    POSITIVE: tuple = ()

    def __init__(self, params: Optional[Dict[str, Any]] = None):
        params = dict(params or {})
        for key in params:
            if key not in self.DEFAULTS:
                raise ConfigurationError(
                    f"Parámetro desconocido '{key}' para el modelo '{self.preset}'", key=key)

        self.params: Dict[str, float] = {}
        for key, default in self.DEFAULTS.items():
            value = params.get(key, default)
            try:
                value = float(value)
            except (TypeError, ValueError):
                raise ConfigurationError(f"El parámetro '{key}' debe ser un número real", key=key)
            if not math.isfinite(value):
                raise ConfigurationError(f"El parámetro '{key}' debe ser finito", key=key)
            self.params[key] = value
        for key in self.POSITIVE:
            if not self.params[key] > 0.0:
                raise ConfigurationError(f"El parámetro '{key}' debe ser > 0", key=key)
        self._setup()

    def _setup(self) -> None:
        pass

    @property
    @abstractmethod
    def node_names(self) -> List[str]:
        pass

    @property
    def dimension(self) -> int:
        return len(self.node_names)

    @property
    def time_scale(self) -> float:
        """Constante de tiempo característica (para tolerancias de eventos)"""
        return 1.0

    @property
    def relay_inputs(self) -> Optional[List[int]]:
        return None

    def relay_outputs(self, inputs: np.ndarray) -> Optional[np.ndarray]:
        return None

    @abstractmethod
    def derivatives(self, t: float, x: np.ndarray, relay: Optional[np.ndarray] = None) -> np.ndarray:
        pass

    def default_initial_state(self) -> np.ndarray:
        """Perturbación pequeña y asimétrica: el nodo i empieza en 0.01·(i+1)"""
        return 0.01 * (np.arange(self.dimension) + 1.0)

    def node_index(self, name: str) -> int:
        try:
            return self.node_names.index(name)
        except ValueError:
            raise ConfigurationError(
                f"Nodo desconocido '{name}' en '{self.preset}' (válidos: {', '.join(self.node_names)})",
                key="probe")

    def to_dict(self) -> Dict[str, Any]:
        return {"preset": self.preset, "params": dict(self.params)}

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.params!r})"


class _RingModel(OscModel):
    """Anillo de n etapas: τ·dvᵢ/dt = f(v_{i-1}) - vᵢ"""

    POSITIVE = ("n", "tau")

    def _setup(self):
        n = self.params["n"]
        if n != int(n) or n < 3 or int(n) % 2 == 0:
            raise ConfigurationError("El anillo necesita un número impar de etapas >= 3", key="n")
        self.stages = int(n)
        self.nl = self._make_stage()

    @abstractmethod
    def _make_stage(self) -> Nonlinearity:
        pass

    @property
    def node_names(self):
        return [f"v{i + 1}" for i in range(self.stages)]

    @property
    def time_scale(self):
        return self.params["tau"]

    def _stage_inputs(self, x: np.ndarray) -> np.ndarray:
        return np.roll(x, 1)

    def derivatives(self, t, x, relay=None):
        drive = relay if relay is not None else self.nl(self._stage_inputs(x))
        return (drive - x) / self.params["tau"]


class RingRelayModel(_RingModel):
    preset = "ring_relay"
    DEFAULTS = {"n": 3, "tau": 1e-3, "V_dd": 1.0}
    POSITIVE = ("n", "tau", "V_dd")

    def _make_stage(self):
        return make_nonlinearity("relay", {"M": self.params["V_dd"], "scale": -1.0})

    @property
    def relay_inputs(self):
        return [(i - 1) % self.stages for i in range(self.stages)]

    def relay_outputs(self, inputs):
        return self.nl(inputs)


class RingTanhModel(_RingModel):
    preset = "ring_tanh"
    DEFAULTS = {"n": 3, "tau": 1e-3, "A_hat": 1.0, "k": 3.0}
    POSITIVE = ("n", "tau", "A_hat", "k")

    def _make_stage(self):
        return make_nonlinearity("tanh_inverter", {"A_hat": self.params["A_hat"], "k": self.params["k"]})


class SeriesRLCModel(OscModel):
    """L·di/dt = -R·i - v_C - f(i), C·dv_C/dt = i, con f la resistencia negativa tanh"""

    preset = "series_rlc_negres"
    DEFAULTS = {"R": 1.0, "L": 1e-3, "C": 1e-6, "V_max": 1.0, "R_max": 2.0}
    POSITIVE = ("R", "L", "C", "V_max", "R_max")

    def _setup(self):
        self.nl = make_nonlinearity("tanh_resistor", {"V_max": self.params["V_max"],
                                                      "R_max": self.params["R_max"]})

    @property
    def node_names(self):
        return ["i", "vc"]

    @property
    def time_scale(self):
        return math.sqrt(self.params["L"] * self.params["C"])

    def derivatives(self, t, x, relay=None):
        p = self.params
        i, vc = x
        di = (-p["R"] * i - vc - float(self.nl(i))) / p["L"]
        return np.array([di, i / p["C"]])

    def default_initial_state(self):
        return np.array([0.01, 0.0])


class RelaxationModel(OscModel):
    """
    Oscilador de relajación con dos constantes de tiempo:
    τ_f·dv_o/dt = f(v_o) - v_i y τ_s·dv_i/dt = v_o - v_i.
    """

    preset = "relaxation_two_tau"
    DEFAULTS = {"tau_f": 2.5e-4, "tau_s": 1e-3, "k1": 2.0, "k2": 6.25, "k3": 0.4}
    POSITIVE = ("tau_f", "tau_s", "k3")

    def _setup(self):
        p = self.params
        self.nl = make_nonlinearity("tanh_relaxation", {"k1": p["k1"], "k2": p["k2"], "k3": p["k3"]})

    @property
    def node_names(self):
        return ["vo", "vi"]

    @property
    def time_scale(self):
        return self.params["tau_f"]

    def _slow(self, vo, vi):
        return vo - vi

    def derivatives(self, t, x, relay=None):
        p = self.params
        vo, vi = x
        return np.array([(float(self.nl(vo)) - vi) / p["tau_f"], self._slow(vo, vi) / p["tau_s"]])


class HarmonicRelaxationModel(RelaxationModel):
    """
    Variante con integrador ideal en la etapa lenta: τ_s·dv_i/dt = v_o (tanque LC).
    Por defecto k1 = 2.4, con lo que f'(0) = 0.1.
    """

    preset = "harmonic_relaxation"
    DEFAULTS = {**RelaxationModel.DEFAULTS, "k1": 2.4}

    def _slow(self, vo, vi):
        return vo


class FitzHughNagumoModel(OscModel):
    """dv/dt = v - v³/3 - w + I_ext, τ·dw/dt = v + a - b·w"""

    preset = "fitzhugh_nagumo"
    DEFAULTS = {"a": 0.7, "b": 0.8, "tau": 12.5, "I_ext": 0.5}
    POSITIVE = ("tau",)

    @property
    def node_names(self):
        return ["v", "w"]

    @property
    def time_scale(self):
        return self.params["tau"]

    def derivatives(self, t, x, relay=None):
        p = self.params
        v, w = x
        return np.array([v - v ** 3 / 3.0 - w + p["I_ext"], (v + p["a"] - p["b"] * w) / p["tau"]])


class RepressilatorModel(OscModel):
    """
    Represilador de tres genes:
    dmᵢ/dt = -mᵢ + α/(1 + p_{i-1}ⁿ) + α₀, dpᵢ/dt = -β·(pᵢ - mᵢ).
    """

    preset = "repressilator"
    DEFAULTS = {"alpha": 300.0, "alpha0": 0.03, "n": 2.0, "beta": 0.2}
    POSITIVE = ("alpha", "beta")

    def _setup(self):
        p = self.params
        self.hill = make_nonlinearity("hill", {"alpha": p["alpha"], "alpha0": p["alpha0"], "n": p["n"]})

    @property
    def node_names(self):
        return ["m1", "m2", "m3", "p1", "p2", "p3"]

    @property
    def time_scale(self):
        return 1.0 / self.params["beta"]

    def derivatives(self, t, x, relay=None):
        m, p = x[:3], x[3:]
        dm = -m + self.hill(np.roll(p, 1))
        dp = -self.params["beta"] * (p - m)
        return np.concatenate((dm, dp))

    def default_initial_state(self):
        return np.array([1.0, 1.0, 1.2, 1.0, 1.0, 1.0])


class ModelCatalog:
    """Registro de modelos temporales por nombre de preset"""

    def __init__(self):
        self._models: Dict[str, Type[OscModel]] = {}

    def register(self, cls: Type[OscModel]) -> None:
        self._models[cls.preset] = cls
        logging.debug(f"Modelo '{cls.preset}' registrado")

    def presets(self) -> List[str]:
        return list(self._models)

    def build(self, preset: str, params: Optional[Dict[str, Any]] = None) -> OscModel:
        cls = self._models.get(preset)
        if cls is None:
            raise ConfigurationError(f"Preset de simulación desconocido: '{preset}'", key="preset")
        return cls(params)


models = ModelCatalog()
for _cls in (RingRelayModel, RingTanhModel, SeriesRLCModel, RelaxationModel,
             HarmonicRelaxationModel, FitzHughNagumoModel, RepressilatorModel):
    models.register(_cls)


def build_model(preset: str, params: Optional[Dict[str, Any]] = None) -> OscModel:
    """Construye el modelo del preset; los parámetros ausentes toman el valor por defecto"""
    return models.build(preset, params)
