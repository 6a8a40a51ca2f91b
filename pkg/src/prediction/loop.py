# src/prediction/loop.py

import math
from typing import Any, Dict, List, Optional, Tuple

from ..errors import ConfigurationError
from ..linear.linear_block import LinearBlock
from ..nonlinearities.nonlinearity import Nonlinearity

STABLE = "stable"
UNSTABLE = "unstable"
MARGINAL = "marginal-undetermined"

# off: B = 0; fixed: B dado por el usuario; dc_balance: B resuelto con la ecuación de continua
BIAS_MODES = ("off", "fixed", "dc_balance")


class LoopSpec:
    """
    Lazo de realimentación G(s) con la no linealidad f.
    La ecuación de balance armónico es G(jω)·N(A) = sign.
    """

    def __init__(self, G: LinearBlock, nl: Nonlinearity, sign: int = -1,
                 bias_mode: str = "off", bias_range: Optional[Tuple[float, float]] = None,
                 bias: float = 0.0):
        if sign not in (1, -1):
            raise ConfigurationError("El signo del lazo debe ser +1 o -1", key="sign")
        if bias_mode not in BIAS_MODES:
            raise ConfigurationError(f"bias_mode desconocido: '{bias_mode}'", key="bias_mode")
        if bias_range is not None:
            lo, hi = float(bias_range[0]), float(bias_range[1])
            if not (lo < hi) or not (math.isfinite(lo) and math.isfinite(hi)):
                raise ConfigurationError(f"bias_range inválido: [{lo!r}, {hi!r}]", key="bias_range")
            bias_range = (lo, hi)
        bias = float(bias)
        if not math.isfinite(bias):
            raise ConfigurationError(f"bias inválido: {bias!r}", key="bias")
        if bias != 0.0 and bias_mode != "fixed":
            raise ConfigurationError("'bias' solo se admite con bias_mode = \"fixed\"", key="bias")

        self.G = G
        self.nl = nl
        self.sign = int(sign)
        self.bias_mode = bias_mode
        self.bias_range = bias_range
        self.bias = bias

    @property
    def uses_bias(self) -> bool:
        return self.bias_mode == "dc_balance"

    @property
    def held_bias(self) -> float:
        """Sesgo constante de la entrada (0 salvo en el modo fixed)"""
        return self.bias if self.bias_mode == "fixed" else 0.0

    def scaled(self, factor: float) -> 'LoopSpec':
        """Mismo lazo con G multiplicado por factor y f dividida por factor"""
        data = self.nl.to_dict()
        data["scale"] = self.nl.scale / factor
        return LoopSpec(self.G.scaled(factor), Nonlinearity.from_dict(data),
                        self.sign, self.bias_mode, self.bias_range, self.bias)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "linear": self.G.to_dict(),
            "nonlinearity": self.nl.to_dict(),
            "sign": self.sign,
            "bias_mode": self.bias_mode,
            "bias_range": list(self.bias_range) if self.bias_range else None,
            "bias": self.bias,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'LoopSpec':
        return cls(LinearBlock.from_dict(data["linear"]),
                   Nonlinearity.from_dict(data["nonlinearity"]),
                   data.get("sign", -1), data.get("bias_mode", "off"),
                   data.get("bias_range"), data.get("bias", 0.0))


class PredictedOscillation:
    """Intersección pulida de la ecuación de lazo"""

    HEADER = ["A_star", "omega_star", "period", "stability", "residual", "bias"]

    def __init__(self, A_star: float, omega: float, residual: float,
                 stability: str = MARGINAL, bias: Optional[float] = None):
        if not A_star > 0.0:
            raise ConfigurationError("A_star debe ser > 0", key="A_star")
        self.A_star = float(A_star)
        # Se conserva el signo de ω con el que se resolvió; se informa |ω|
        self.omega_signed = float(omega)
        self.residual = float(residual)
        self.stability = stability
        self.bias = None if bias is None else float(bias)

    @property
    def omega_star(self) -> float:
        return abs(self.omega_signed)

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.omega_star

    @property
    def frequency_hz(self) -> float:
        return self.omega_star / (2.0 * math.pi)

    @property
    def negative_branch(self) -> bool:
        return self.omega_signed < 0.0

    def is_valid(self, tolerance: float) -> bool:
        return self.residual <= tolerance and self.A_star > 0.0

    def row(self) -> List[Any]:
        return [self.A_star, self.omega_star, self.period, self.stability, self.residual,
                "" if self.bias is None else self.bias]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "A_star": self.A_star,
            "omega_star": self.omega_star,
            "omega_signed": self.omega_signed,
            "period": self.period,
            "stability": self.stability,
            "residual": self.residual,
            "bias": self.bias,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'PredictedOscillation':
        omega = data.get("omega_signed", data["omega_star"])
        return cls(data["A_star"], omega, data.get("residual", 0.0),
                   data.get("stability", MARGINAL), data.get("bias"))

    def __repr__(self) -> str:
        return (f"PredictedOscillation(A*={self.A_star:.6g}, ω*={self.omega_star:.6g}, "
                f"{self.stability}, residual={self.residual:.2e})")
