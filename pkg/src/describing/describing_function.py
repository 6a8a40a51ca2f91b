# src/describing/describing_function.py

from typing import Any, Dict, List, Optional

import numpy as np

from ..errors import ConfigurationError
from ..nonlinearities.nonlinearity import Nonlinearity


class DFSample:
    """Una muestra de la función descriptiva: amplitud, sesgo, a0 y N(A)"""

    def __init__(self, A: float, bias: float, a0: float, N: complex):
        if not A > 0.0:
            raise ConfigurationError("La amplitud A debe ser > 0", key="A")
        self.A = float(A)
        self.bias = float(bias)
        self.a0 = float(a0)
        self.N = complex(N)

    def to_dict(self) -> Dict[str, Any]:
        return {"A": self.A, "bias": self.bias, "a0": self.a0,
                "ReN": self.N.real, "ImN": self.N.imag}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'DFSample':
        return cls(A=data["A"], bias=data.get("bias", 0.0), a0=data.get("a0", 0.0),
                   N=complex(data["ReN"], data.get("ImN", 0.0)))

    def __repr__(self) -> str:
        return f"DFSample(A={self.A!r}, bias={self.bias!r}, a0={self.a0!r}, N={self.N!r})"


class DFCurve:
    """Barrido A -> (a0, N(A)) con amplitudes estrictamente crecientes"""

    def __init__(self, samples: List[DFSample], nl_descriptor: Optional[Nonlinearity] = None):
        if len(samples) < 2:
            raise ConfigurationError("Una curva necesita al menos dos muestras", key="n_points")
        amplitudes = np.array([s.A for s in samples])
        if np.any(np.diff(amplitudes) <= 0.0):
            raise ConfigurationError("Las amplitudes de la curva deben ser crecientes", key="A")
        self.samples = list(samples)
        self.nl_descriptor = nl_descriptor

    @property
    def amplitudes(self) -> np.ndarray:
        return np.array([s.A for s in self.samples])

    @property
    def values(self) -> np.ndarray:
        return np.array([s.N for s in self.samples])

    @property
    def dc_terms(self) -> np.ndarray:
        return np.array([s.a0 for s in self.samples])

    def __len__(self) -> int:
        return len(self.samples)

    def is_valid(self) -> bool:
        return len(self.samples) >= 2 and bool(np.all(np.isfinite(self.values)))

    def rows(self) -> List[List[Any]]:
        """Filas para CSV: A, a0, ReN, ImN (con cabecera)"""
        rows: List[List[Any]] = [["A", "a0", "ReN", "ImN"]]
        for s in self.samples:
            rows.append([s.A, s.a0, s.N.real, s.N.imag])
        return rows

    def to_dict(self) -> Dict[str, Any]:
        return {
            "nonlinearity": self.nl_descriptor.to_dict() if self.nl_descriptor else None,
            "samples": [s.to_dict() for s in self.samples],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'DFCurve':
        nl = data.get("nonlinearity")
        return cls([DFSample.from_dict(s) for s in data.get("samples", [])],
                   Nonlinearity.from_dict(nl) if nl else None)
