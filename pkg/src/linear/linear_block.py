# src/linear/linear_block.py

import math
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np
from numpy.polynomial import polynomial as P

from ..errors import ConfigurationError, SingularityError


def _coefficients(values: Sequence[float], key: str) -> List[float]:
    try:
        coeffs = [float(v) for v in values]
    except (TypeError, ValueError):
        raise ConfigurationError(f"'{key}' debe ser una lista de reales", key=key)
    if not coeffs or not np.all(np.isfinite(coeffs)):
        raise ConfigurationError(f"'{key}' debe contener reales finitos", key=key)
    # Ceros en los grados altos no aportan nada
    while len(coeffs) > 1 and coeffs[-1] == 0.0:
        coeffs.pop()
    return coeffs


class LinearBlock:
    """
    G(s) = num(s)/den(s) con coeficientes ascendentes, multiplicado por un
    retardo expresado como fracción rho del periodo de oscilación.

    En la fundamental el retardo es el fasor exp(-j·2π·rho·branch·sign(ω)).
    `branch` indica el signo de ω en el que se mide rho: -1 reproduce la
    lectura del retardo sobre la rama de frecuencias negativas.
    """

    def __init__(self, num: Sequence[float], den: Sequence[float],
                 rho: float = 0.0, branch: int = 1):
        self.num = _coefficients(num, "num")
        self.den = _coefficients(den, "den")
        if self.den == [0.0]:
            raise ConfigurationError("El denominador no puede ser idénticamente nulo", key="den")

        try:
            rho = float(rho)
        except (TypeError, ValueError):
            raise ConfigurationError("'rho' debe ser un número real", key="rho")
        if not math.isfinite(rho) or rho < 0.0:
            raise ConfigurationError("'rho' debe ser un real >= 0", key="rho")
        self.rho = rho % 1.0

        if branch not in (1, -1):
            raise ConfigurationError("'branch' debe ser +1 o -1", key="branch")
        self.branch = int(branch)

    def has_delay(self) -> bool:
        return self.rho != 0.0

    def delay_phasor(self, omega):
        omega = np.asarray(omega, dtype=float)
        return np.exp(-2j * math.pi * self.rho * self.branch * np.sign(omega))

    def response(self, omega):
        """Respuesta vectorizada G(jω); lanza SingularityError en un polo"""
        omega = np.asarray(omega, dtype=float)
        s = 1j * omega
        num = P.polyval(s, self.num)
        den = P.polyval(s, self.den)
        size = P.polyval(np.abs(omega), np.abs(self.den))
        hit = np.abs(den) <= 1e-14 * size
        if np.any(hit):
            where = float(np.ravel(omega)[np.argmax(np.ravel(hit))])
            raise SingularityError(f"Polo de G en ω={where!r}", where=where)
        return num / den * self.delay_phasor(omega)

    def without_delay(self) -> 'LinearBlock':
        return LinearBlock(self.num, self.den)

    def scaled(self, factor: float) -> 'LinearBlock':
        return LinearBlock([factor * c for c in self.num], self.den, self.rho, self.branch)

    def magnitude_polynomials(self) -> Tuple[np.ndarray, np.ndarray]:
        """Polinomios reales en ω de |num(jω)|² y |den(jω)|²"""
        def squared(coeffs):
            c = np.asarray(coeffs, dtype=complex) * (1j ** np.arange(len(coeffs)))
            return P.polymul(c, np.conj(c)).real
        return squared(self.num), squared(self.den)

    def to_dict(self) -> Dict[str, Any]:
        return {"num": list(self.num), "den": list(self.den), "rho": self.rho, "branch": self.branch}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'LinearBlock':
        return cls(data["num"], data["den"], data.get("rho", 0.0), data.get("branch", 1))

    def __eq__(self, other) -> bool:
        if not isinstance(other, LinearBlock):
            return NotImplemented
        return self.to_dict() == other.to_dict()

    def __repr__(self) -> str:
        return f"LinearBlock(num={self.num!r}, den={self.den!r}, rho={self.rho!r}, branch={self.branch})"


class FrequencyGrid:
    """Rejilla de frecuencias angulares estrictamente creciente (rad/s)"""

    def __init__(self, values: Sequence[float]):
        values = np.asarray(values, dtype=float)
        if values.ndim != 1 or values.size == 0:
            raise ConfigurationError("La rejilla de frecuencias no puede estar vacía", key="omega")
        if not np.all(np.isfinite(values)):
            raise ConfigurationError("La rejilla de frecuencias debe ser finita", key="omega")
        if np.any(np.diff(values) <= 0.0):
            raise ConfigurationError("La rejilla de frecuencias debe ser creciente", key="omega")
        self.values = values

    @classmethod
    def logspace(cls, omega_min: float, omega_max: float, n: int,
                 symmetric: bool = False) -> 'FrequencyGrid':
        if not (0.0 < omega_min < omega_max):
            raise ConfigurationError(f"Rango de frecuencias inválido: [{omega_min!r}, {omega_max!r}]",
                                     key="omega_range")
        positive = np.geomspace(omega_min, omega_max, int(n))
        if symmetric:
            return cls(np.concatenate((-positive[::-1], positive)))
        return cls(positive)

    def __len__(self) -> int:
        return int(self.values.size)


def eval_response(G: LinearBlock, omega: float) -> complex:
    """G(jω) en un punto"""
    return complex(G.response(float(omega)))


def nyquist(G: LinearBlock, grid: FrequencyGrid) -> List[Tuple[float, complex]]:
    """Lugar de Nyquist muestreado sobre la rejilla"""
    values = G.response(grid.values)
    return [(float(w), complex(v)) for w, v in zip(grid.values, values)]


def bode(G: LinearBlock, grid: FrequencyGrid) -> List[Tuple[float, float, float]]:
    """Magnitud en dB y fase en grados, desenvuelta a lo largo de la rejilla"""
    values = G.response(grid.values)
    with np.errstate(divide="ignore"):
        mag_db = 20.0 * np.log10(np.abs(values))
    phase = np.degrees(np.unwrap(np.angle(values)))
    return [(float(w), float(m), float(p)) for w, m, p in zip(grid.values, mag_db, phase)]
