# src/prediction/newton.py

import logging
from typing import Callable, Optional, Sequence

import numpy as np

from ..errors import NumericalError, SingularityError

# Paso relativo de las diferencias finitas del jacobiano
FD_STEP = 1e-7


def _jacobian(func: Callable[[np.ndarray], np.ndarray], x: np.ndarray,
              fx: np.ndarray) -> np.ndarray:
    jac = np.empty((fx.size, x.size))
    for i in range(x.size):
        h = FD_STEP * max(abs(x[i]), 1e-8)
        xp = x.copy()
        xp[i] += h
        jac[:, i] = (func(xp) - fx) / h
    return jac


def damped_newton(func: Callable[[np.ndarray], np.ndarray], x0: Sequence[float],
                  tol: float = 1e-9, max_iter: int = 60, halvings: int = 20,
                  admissible: Optional[Callable[[np.ndarray], bool]] = None) -> np.ndarray:
    """
    Newton amortiguado con jacobiano por diferencias finitas.

    El paso se divide a la mitad (hasta `halvings` veces) mientras la norma
    del residuo no baje o el punto no sea admisible. Termina cuando la norma
    del residuo es <= tol; si se estanca por encima lanza NumericalError.
    """
    x = np.asarray(x0, dtype=float).copy()
    fx = func(x)
    norm = float(np.linalg.norm(fx))
    target = 1e-3 * tol

    for iteration in range(max_iter):
        if norm <= target:
            break
        try:
            step = np.linalg.solve(_jacobian(func, x, fx), -fx)
        except np.linalg.LinAlgError:
            raise SingularityError(f"Jacobiano singular en x={x.tolist()!r}")

        lam = 1.0
        for _ in range(halvings + 1):
            trial = x + lam * step
            if admissible is None or admissible(trial):
                try:
                    f_trial = func(trial)
                except NumericalError:
                    f_trial = None
                if f_trial is not None and np.all(np.isfinite(f_trial)):
                    trial_norm = float(np.linalg.norm(f_trial))
                    if trial_norm < norm:
                        break
            lam *= 0.5
        else:
            # Sin descenso posible: se acepta el punto si ya cumple la tolerancia
            if norm <= tol:
                break
            raise NumericalError(f"Newton estancado con residuo {norm:.3e} tras {iteration} iteraciones")

        x, fx, norm = trial, f_trial, trial_norm
    else:
        if norm > tol:
            raise NumericalError(f"Newton no converge en {max_iter} iteraciones (residuo {norm:.3e})")

    logging.debug(f"Newton: residuo {norm:.3e} en x={x.tolist()!r}")
    return x
