# src/prediction/report.py

import logging
from typing import Any, Dict, List, Optional, Sequence

from ..describing.analytic import df_taylor, solve_taylor_amplitude
from ..describing.numeric import df_eval
from ..errors import ConfigurationError
from ..nonlinearities.smooth import TanhFamily
from .loop import LoopSpec, PredictedOscillation, MARGINAL

PROBE_NODES = ("input", "nl_output", "linear_output", "linear_output_nodelay")


class ProbeAmplitude:
    def __init__(self, node: str, gain: float, amplitude: float):
        self.node = node
        self.gain = gain
        self.amplitude = amplitude

    @property
    def swing(self) -> float:
        return 2.0 * self.amplitude

    def to_dict(self) -> Dict[str, Any]:
        return {"node": self.node, "gain": self.gain, "amplitude": self.amplitude, "swing": self.swing}


class PredictionReport:
    """Resumen legible de una oscilación predicha"""

    def __init__(self, osc: PredictedOscillation, probes: List[ProbeAmplitude],
                 notes: Optional[List[str]] = None):
        self.osc = osc
        self.probes = probes
        self.notes = list(notes or [])

    def probe(self, node: str) -> ProbeAmplitude:
        for p in self.probes:
            if p.node == node:
                return p
        raise ConfigurationError(f"Nodo de sonda no incluido en el informe: '{node}'", key="probes")

    def to_dict(self) -> Dict[str, Any]:
        data = self.osc.to_dict()
        data["frequency_hz"] = self.osc.frequency_hz
        data["probes"] = [p.to_dict() for p in self.probes]
        data["notes"] = list(self.notes)
        return data

    def text(self) -> str:
        o = self.osc
        lines = [
            f"A* = {o.A_star:.6g}",
            f"omega* = {o.omega_star:.6g} rad/s  (f* = {o.frequency_hz:.6g} Hz)",
            f"T* = {o.period:.6g} s",
            f"estabilidad: {o.stability}",
            f"residuo: {o.residual:.3e}",
        ]
        if o.bias is not None:
            lines.append(f"sesgo B* = {o.bias:.6g}")
        for p in self.probes:
            lines.append(f"  {p.node}: amplitud {p.amplitude:.6g}, excursión {p.swing:.6g}")
        for note in self.notes:
            lines.append(f"nota: {note}")
        return "\n".join(lines)


def probe_gain(spec: LoopSpec, osc: PredictedOscillation, node: str) -> float:
    """Ganancia desde la entrada de la no linealidad hasta el nodo a ω*"""
    if node == "input":
        return 1.0
    N = df_eval(spec.nl, osc.A_star, osc.bias if osc.bias is not None else spec.held_bias).N
    if node == "nl_output":
        return abs(N)
    if node == "linear_output":
        return abs(N * complex(spec.G.response(osc.omega_signed)))
    if node == "linear_output_nodelay":
        return abs(N * complex(spec.G.without_delay().response(osc.omega_signed)))
    raise ConfigurationError(f"Nodo de sonda desconocido: '{node}' (válidos: {', '.join(PROBE_NODES)})",
                             key="probes")


def _taylor_note(spec: LoopSpec, osc: PredictedOscillation) -> Optional[str]:
    """Contraste con la amplitud que daría la serie de Taylor (orden 4, o 2 si no llega)"""
    if not isinstance(spec.nl, TanhFamily) or osc.bias:
        return None
    target = df_eval(spec.nl, osc.A_star, 0.0).N.real
    for order in (4, 2):
        A_taylor = solve_taylor_amplitude(spec.nl, target, order)
        if A_taylor is not None:
            break
    else:
        return f"la serie de Taylor no alcanza N = {target:.6g}"
    series = df_taylor(spec.nl, A_taylor, order)
    if not series.inaccurate:
        return None
    return (f"serie de Taylor de orden {order} poco fiable: daría A = {A_taylor:.6g} "
            f"frente a A* = {osc.A_star:.6g} (cociente {series.ratio:.3g})")


def report(spec: LoopSpec, osc: PredictedOscillation,
           probe_nodes: Sequence[str] = ("input",),
           aliases: Optional[Dict[str, str]] = None) -> PredictionReport:
    """
    Propaga A* a los nodos pedidos. `aliases` traduce nombres de nodos del
    circuito (v1, vo, ...) al vocabulario de sondas del lazo.
    """
    aliases = aliases or {}
    probes = []
    for node in probe_nodes:
        gain = probe_gain(spec, osc, aliases.get(node, node))
        probes.append(ProbeAmplitude(node, gain, gain * osc.A_star))

    notes = []
    if osc.negative_branch:
        notes.append("intersección en la rama ω < 0; se informa |ω|")
    if spec.nl.stateful:
        notes.append("N(A) compleja: candidatos obtenidos por exploración de la rejilla A×ω")
    if osc.stability == MARGINAL:
        notes.append(f"estabilidad no determinada para A* = {osc.A_star:.6g}")
    taylor = _taylor_note(spec, osc)
    if taylor:
        notes.append(taylor)
    logging.debug(f"Informe de predicción con {len(probes)} sondas")
    return PredictionReport(osc, probes, notes)
