# src/main.py

import sys
import logging
import argparse
import traceback
from pathlib import Path
from typing import List, Optional

import dotenv

from .config import Config, get_config, reset_config
from .describing.numeric import df_curve
from .errors import ConfigurationError, NoOscillationError, OscillatorToolError
from .linear.frequency_finders import magnitude_peak
from .linear.linear_block import FrequencyGrid, bode, nyquist
from .prediction.report import report
from .prediction.solver import solve_loop
from .simulation.comparison import compare
from .simulation.integrator import integrate
from .simulation.models import build_model
from .simulation.waveform import waveform_metrics
from .spec.oscillator_spec import OscillatorSpec
from .spec.output import RunReport, emit_csv, write_text
from .spec.parser import parse_spec
from .spec.presets import presets, probe_aliases

COMMANDS = ("df", "nyquist", "bode", "predict", "simulate", "compare", "catalog")


def configure_logging(level: str = "INFO", log_file: Optional[str] = None):
    """Configura el sistema de registro (diagnósticos por stderr)"""
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if log_file:
        Path(log_file).expanduser().parent.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(log_file))

    logging.basicConfig(
        level=getattr(logging, str(level).upper(), logging.INFO),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=handlers
    )


def exception_hook(exc_type, exc_value, exc_traceback):
    """Maneja excepciones no capturadas"""
    logging.error("Excepción no capturada:",
                  exc_info=(exc_type, exc_value, exc_traceback))
    traceback.print_exception(exc_type, exc_value, exc_traceback)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dfosc",
        description="Predicción de ciclos límite con funciones descriptivas y validación por simulación")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--spec", help="archivo de especificación del oscilador")
    parser.add_argument("--out", default=".", help="directorio de salida")
    parser.add_argument("--format", choices=("csv", "text"), default=None)
    parser.add_argument("--seed", type=int, default=None, help="aceptado e ignorado (todo es determinista)")
    parser.add_argument("--samples", type=int, default=None, help="muestras por ciclo de la cuadratura DF")
    parser.add_argument("--tol", type=float, default=None, help="tolerancia del residuo del lazo")
    return parser


def _load_spec(path: Optional[str]) -> OscillatorSpec:
    if not path:
        raise ConfigurationError("Falta --spec", key="spec")
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigurationError(f"No se puede leer la especificación {path}: {e}", key="spec")
    return parse_spec(text)


def _apply_overrides(config: Config, spec: Optional[OscillatorSpec], args) -> None:
    if spec is not None:
        if spec.predict.grid is not None:
            config.override("prediction", "grid_A", spec.predict.grid)
            config.override("prediction", "grid_omega", spec.predict.grid)
        if spec.predict.tol is not None:
            config.override("prediction", "tolerance", spec.predict.tol)
        if spec.predict.n_samples is not None:
            config.override("describing", "n_samples", spec.predict.n_samples)
    if args.samples is not None:
        config.override("describing", "n_samples", args.samples)
    if args.tol is not None:
        if not args.tol > 0.0:
            raise ConfigurationError("--tol debe ser > 0", key="tol")
        config.override("prediction", "tolerance", args.tol)


def _predict(spec: OscillatorSpec, run: RunReport) -> None:
    config = get_config()
    oscillations = solve_loop(spec.loop, spec.predict.A_range, spec.predict.omega_range,
                              config.get("prediction", "tolerance"))
    aliases = probe_aliases(spec.simulate.preset) if spec.simulate else {}
    for osc in oscillations:
        run.add_prediction(report(spec.loop, osc, spec.predict.probes, aliases))
    if not oscillations:
        peak = magnitude_peak(spec.loop.G, spec.predict.omega_range)
        if peak.interior:
            run.warn(f"sin intersección; pico de |G| = {peak.magnitude:.6g} en ω = {peak.omega:.6g} rad/s")


def _simulate(spec: OscillatorSpec, run: RunReport, out: Path):
    if spec.simulate is None:
        raise ConfigurationError("La especificación no tiene sección [simulate]", key="simulate")
    sim = spec.simulate
    model = build_model(sim.preset, sim.params)
    probe = sim.probe or model.node_names[0]
    model.node_index(probe)
    traj = integrate(model, sim.x0, sim.dt, sim.t_max, sim.method, sim.rtol, sim.atol)
    emit_csv(traj.rows(), out / "trajectory.csv")

    probe_metrics = None
    for node in model.node_names:
        try:
            metrics = waveform_metrics(traj, node)
        except NoOscillationError as e:
            run.warn(str(e))
            continue
        run.add_metrics(metrics)
        if node == probe:
            probe_metrics = metrics
    emit_csv(run.metrics_rows(), out / "metrics.csv")
    if probe_metrics is None:
        raise NoOscillationError(f"El nodo '{probe}' no oscila en la simulación")
    return probe, probe_metrics


def _execute(args, run: RunReport, out: Path, output_format: str) -> int:
    if args.command == "catalog":
        for name in presets.names():
            print(name)
        return 0

    spec = _load_spec(args.spec)
    _apply_overrides(get_config(), spec, args)
    run.spec_name = spec.name
    config = get_config()

    if args.command == "df":
        lo, hi = spec.predict.A_range
        curve = df_curve(spec.loop.nl, lo, hi, int(config.get("describing", "curve_points", 200)))
        emit_csv(curve.rows(), out / "df_curve.csv")
        return 0

    if args.command in ("nyquist", "bode"):
        lo, hi = spec.predict.omega_range
        grid = FrequencyGrid.logspace(lo, hi, int(config.get("prediction", "grid_omega", 200)))
        if args.command == "nyquist":
            rows = [["omega", "re", "im"]] + [[w, g.real, g.imag] for w, g in nyquist(spec.loop.G, grid)]
            emit_csv(rows, out / "nyquist.csv")
        else:
            emit_csv([["omega", "mag_db", "phase_deg"]] + [list(r) for r in bode(spec.loop.G, grid)],
                     out / "bode.csv")
        return 0

    if args.command == "predict":
        _predict(spec, run)
        emit_csv(run.prediction_rows(), out / "prediction.csv")
        if output_format == "text":
            write_text(run.text(), out / "prediction.txt")
        if not run.predictions:
            logging.warning("No se encontró ninguna oscilación")
            return 1
        return 0

    if args.command == "simulate":
        _simulate(spec, run, out)
        return 0

    # compare
    _predict(spec, run)
    emit_csv(run.prediction_rows(), out / "prediction.csv")
    if not run.predictions:
        write_text(run.text(), out / "comparison.txt")
        logging.warning("Sin predicción que comparar")
        return 1
    probe, metrics = _simulate(spec, run, out)

    chosen = next((r for r in run.predictions if r.osc.stability == "stable"), run.predictions[0])
    aliases = probe_aliases(spec.simulate.preset)
    predicted = report(spec.loop, chosen.osc, [probe], aliases).probe(probe).amplitude \
        if probe in aliases else chosen.osc.A_star
    settings = spec.compare
    run.add_comparison(compare(chosen.osc, metrics, predicted, settings.amplitude_tol,
                               settings.period_tol, settings.expected_inaccurate))
    emit_csv(run.comparison_rows(), out / "comparison.csv")
    write_text(run.text(), out / "comparison.txt")
    return 0


def run_command(argv: List[str]) -> int:
    """Ejecuta un subcomando y devuelve el código de salida (0, 1, 2 o 3)"""
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return 0 if e.code in (0, None) else 2

    reset_config(Config())
    config = get_config()
    output_format = args.format or config.get("output", "format", "csv")
    out = Path(args.out)
    run = RunReport("")

    try:
        code = _execute(args, run, out, output_format)
    except NoOscillationError as e:
        logging.warning(f"Sin oscilación: {e}")
        code = e.exit_code
    except ConfigurationError as e:
        logging.error(f"Error de configuración: {e}")
        code = e.exit_code
    except OscillatorToolError as e:
        logging.error(f"Fallo numérico: {e}")
        code = e.exit_code
    finally:
        reset_config(None)

    for warning in run.warnings:
        logging.warning(warning)
    return code


def main():
    """Función principal"""
    # Cargar variables de entorno
    dotenv.load_dotenv()

    config = Config()
    configure_logging(config.get("logging", "level", "INFO"), config.get("logging", "file") or None)

    # Configurar manejo de excepciones
    sys.excepthook = exception_hook

    return run_command(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
