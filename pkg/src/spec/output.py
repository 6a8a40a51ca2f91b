# src/spec/output.py

import os
import csv
import math
import logging
import tempfile
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from ..errors import ConfigurationError, OscillatorToolError
from ..prediction.loop import PredictedOscillation
from ..prediction.report import PredictionReport
from ..simulation.comparison import ComparisonReport
from ..simulation.waveform import WaveformMetrics


def _cell(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        # repr es la representación más corta que recupera el mismo float
        return repr(value) if math.isfinite(value) else str(value)
    if isinstance(value, complex):
        return repr(value)
    return str(value)


def _write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=str(path.parent))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit_csv(rows: Sequence[Sequence[Any]], path) -> None:
    """
    Escribe filas (cabecera primero) como CSV con fin de línea '\\n' y floats
    en su representación más corta. La escritura es atómica: archivo
    temporal en el mismo directorio y renombrado.
    """
    rows = list(rows)
    if not rows:
        raise ConfigurationError("emit_csv necesita al menos la fila de cabecera", key="rows")
    width = len(rows[0])
    for i, row in enumerate(rows):
        if len(row) != width:
            raise ConfigurationError(f"Fila {i} con {len(row)} columnas (se esperaban {width})", key="rows")

    lines: List[str] = []

    class _Sink:
        def write(self, s):
            lines.append(s)

    writer = csv.writer(_Sink(), lineterminator="\n")
    for row in rows:
        writer.writerow([_cell(v) for v in row])

    path = Path(path)
    try:
        _write_atomic(path, "".join(lines))
    except OSError as e:
        raise OscillatorToolError(f"No se puede escribir {path}: {e}")
    logging.info(f"CSV escrito: {path} ({len(rows) - 1} filas)")


def write_text(text: str, path) -> None:
    path = Path(path)
    try:
        _write_atomic(path, text if text.endswith("\n") else text + "\n")
    except OSError as e:
        raise OscillatorToolError(f"No se puede escribir {path}: {e}")


class RunReport:
    """Resultado de una ejecución: predicciones, métricas, comparaciones y avisos"""

    def __init__(self, spec_name: str):
        self.spec_name = spec_name
        self.predictions: List[PredictionReport] = []
        self.metrics: List[WaveformMetrics] = []
        self.comparisons: List[ComparisonReport] = []
        self.warnings: List[str] = []

    def add_prediction(self, report: PredictionReport) -> None:
        self.predictions.append(report)
        self.warnings.extend(report.notes)

    def add_metrics(self, metrics: WaveformMetrics) -> None:
        self.metrics.append(metrics)
        if not metrics.steady:
            self.warnings.append(f"nodo '{metrics.node}' no estacionario "
                                 f"(dispersión del periodo {metrics.dispersion:.2e})")

    def add_comparison(self, comparison: ComparisonReport) -> None:
        self.comparisons.append(comparison)

    def warn(self, message: str) -> None:
        self.warnings.append(message)

    def prediction_rows(self) -> List[List[Any]]:
        return [list(PredictedOscillation.HEADER)] + [r.osc.row() for r in self.predictions]

    def metrics_rows(self) -> List[List[Any]]:
        return [list(WaveformMetrics.HEADER)] + [m.row() for m in self.metrics]

    def comparison_rows(self) -> List[List[Any]]:
        rows: List[List[Any]] = []
        for comparison in self.comparisons:
            block = comparison.csv_rows()
            rows.extend(block if not rows else block[1:])
        return rows

    def to_dict(self) -> Dict[str, Any]:
        return {
            "spec": self.spec_name,
            "predictions": [r.to_dict() for r in self.predictions],
            "metrics": [m.to_dict() for m in self.metrics],
            "comparisons": [[r.to_dict() for r in c.rows] for c in self.comparisons],
            "warnings": list(self.warnings),
        }

    def text(self) -> str:
        lines = [f"Oscilador: {self.spec_name}"]
        if not self.predictions:
            lines.append("Predicción: sin oscilación")
        for i, report in enumerate(self.predictions, start=1):
            lines.append(f"Predicción {i}:")
            lines.extend("  " + line for line in report.text().splitlines())
        for m in self.metrics:
            lines.append(f"Simulación ({m.node}): amplitud {m.amplitude:.6g}, offset {m.offset:.6g}, "
                         f"periodo {m.period:.6g}, THD {m.thd:.4g}")
        for c in self.comparisons:
            lines.append(c.text())
        for w in self.warnings:
            lines.append(f"aviso: {w}")
        return "\n".join(lines)
