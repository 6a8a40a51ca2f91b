# src/nonlinearities/classic.py

from typing import List, Optional

import numpy as np

from .nonlinearity import Nonlinearity, StatefulNonlinearity


class Saturation(Nonlinearity):
    """Saturación: pendiente K dentro de |x| < a, K·a fuera"""

    kind = "saturation"
    PARAMS = ("K", "a")

    def _validate(self):
        self._require_positive("K", "a")

    def _f(self, x):
        a = self.params["a"]
        return self.params["K"] * np.clip(x, -a, a)

    def breakpoints(self) -> List[float]:
        a = self.params["a"]
        return [-a, a]

    def output_bound(self) -> Optional[float]:
        return abs(self.scale) * self.params["K"] * self.params["a"]


class Relay(Nonlinearity):
    """Relé ideal ±M; en x = 0 devuelve 0"""

    kind = "relay"
    PARAMS = ("M",)

    def _validate(self):
        self._require_positive("M")

    def _f(self, x):
        return self.params["M"] * np.sign(x)

    def breakpoints(self) -> List[float]:
        return [0.0]

    def output_bound(self) -> Optional[float]:
        return abs(self.scale) * self.params["M"]


class DeadZone(Nonlinearity):
    """Zona muerta de semiancho delta y pendiente K"""

    kind = "dead_zone"
    PARAMS = ("K", "delta")

    def _validate(self):
        self._require_positive("K", "delta")

    def _f(self, x):
        excess = np.maximum(np.abs(x) - self.params["delta"], 0.0)
        return self.params["K"] * np.sign(x) * excess

    def breakpoints(self) -> List[float]:
        d = self.params["delta"]
        return [-d, d]


class RelayHysteresis(StatefulNonlinearity):
    """
    Relé con histéresis (Schmitt): pasa a +M cuando x >= h, a -M cuando
    x <= -h y mantiene la salida previa en la banda intermedia.
    """

    kind = "relay_hysteresis"
    PARAMS = ("M", "h")

    def _validate(self):
        self._require_positive("M", "h")

    def _step(self, x: float, state: int) -> int:
        h = self.params["h"]
        if x >= h:
            return 1
        if x <= -h:
            return -1
        return state

    def _output(self, state: int) -> float:
        return self.params["M"] * state

    def breakpoints(self) -> List[float]:
        h = self.params["h"]
        return [-h, h]

    def output_bound(self) -> Optional[float]:
        return abs(self.scale) * self.params["M"]
