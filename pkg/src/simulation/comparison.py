# src/simulation/comparison.py

from typing import Any, Dict, List, Optional

from ..prediction.loop import PredictedOscillation
from .waveform import WaveformMetrics


class ComparisonRow:
    HEADER = ["quantity", "predicted", "simulated", "rel_error", "tolerance", "passed", "expected_inaccurate"]

    def __init__(self, quantity: str, predicted: float, simulated: float, tolerance: float,
                 expected_inaccurate: bool = False):
        self.quantity = quantity
        self.predicted = float(predicted)
        self.simulated = float(simulated)
        self.tolerance = float(tolerance)
        self.expected_inaccurate = expected_inaccurate
        if self.simulated == self.predicted:
            self.rel_error = 0.0
        elif self.simulated == 0.0:
            self.rel_error = float("inf")
        else:
            self.rel_error = abs(self.predicted - self.simulated) / abs(self.simulated)

    @property
    def passed(self) -> bool:
        return self.rel_error <= self.tolerance

    def row(self) -> List[Any]:
        return [self.quantity, self.predicted, self.simulated, self.rel_error, self.tolerance,
                "yes" if self.passed else "no", "yes" if self.expected_inaccurate else "no"]

    def to_dict(self) -> Dict[str, Any]:
        return dict(zip(self.HEADER, self.row()))


class ComparisonReport:
    """Predicción frente a simulación para un mismo nodo"""

    def __init__(self, node: str, rows: List[ComparisonRow]):
        self.node = node
        self.rows = rows

    def get(self, quantity: str) -> ComparisonRow:
        for row in self.rows:
            if row.quantity == quantity:
                return row
        raise KeyError(quantity)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    def csv_rows(self) -> List[List[Any]]:
        return [["node"] + ComparisonRow.HEADER] + [[self.node] + r.row() for r in self.rows]

    def text(self) -> str:
        lines = [f"Comparación en el nodo '{self.node}':"]
        for r in self.rows:
            verdict = "OK" if r.passed else "FUERA DE TOLERANCIA"
            if r.expected_inaccurate and not r.passed:
                verdict += " (imprecisión esperada)"
            lines.append(f"  {r.quantity}: predicho {r.predicted:.6g}, simulado {r.simulated:.6g}, "
                         f"error {100 * r.rel_error:.2f} % [{verdict}]")
        return "\n".join(lines)


def compare(prediction: PredictedOscillation, metrics: WaveformMetrics,
            predicted_amplitude: Optional[float] = None, amplitude_tol: float = 0.1,
            period_tol: float = 0.1, expected_inaccurate: bool = False) -> ComparisonReport:
    """
    Errores relativos (respecto a la simulación) de amplitud, periodo y
    frecuencia. Nunca falla por discrepancia: solo informa.
    `predicted_amplitude` es la amplitud propagada al nodo medido, si no es A*.
    """
    amplitude = prediction.A_star if predicted_amplitude is None else predicted_amplitude
    rows = [
        ComparisonRow("amplitude", amplitude, metrics.amplitude, amplitude_tol, expected_inaccurate),
        ComparisonRow("period", prediction.period, metrics.period, period_tol, expected_inaccurate),
        ComparisonRow("frequency_hz", prediction.frequency_hz, metrics.frequency_hz, period_tol,
                      expected_inaccurate),
    ]
    return ComparisonReport(metrics.node, rows)
