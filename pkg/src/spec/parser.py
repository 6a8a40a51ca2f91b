# src/spec/parser.py

import re
import logging
from typing import Any, Dict, List, Optional, Tuple

from ..errors import ConfigurationError, SpecSyntaxError
from ..simulation.models import build_model
from .oscillator_spec import CompareSettings, OscillatorSpec, PredictSettings, SimulateSettings
from .presets import presets

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<comment>\#.*)
  | (?P<number>[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)(?![\w.])
  | (?P<string>"(?:[^"\\]|\\.)*")
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*(?:\.[A-Za-z_][A-Za-z0-9_]*)?)
  | (?P<punct>[\[\],=])
""", re.VERBOSE)

SECTION_KEYS: Dict[str, Optional[Tuple[str, ...]]] = {
    "": ("name", "preset"),
    "loop": ("sign", "bias_mode", "bias"),
    "linear": ("num", "den", "rho", "branch"),
    "nonlinearity": None,
    "predict": PredictSettings.KEYS,
    "simulate": tuple(k for k in SimulateSettings.KEYS if k != "params"),
    "simulate.params": None,
    "compare": CompareSettings.KEYS,
}
EXPLICIT_SECTIONS = ("loop", "linear", "nonlinearity")


def _tokenize(line: str, lineno: int) -> List[Tuple[str, str, int]]:
    tokens, pos = [], 0
    while pos < len(line):
        match = _TOKEN.match(line, pos)
        if match is None:
            raise SpecSyntaxError(f"símbolo inesperado {line[pos]!r}", lineno, pos + 1)
        kind = match.lastgroup
        if kind == "comment":
            break
        if kind != "ws":
            tokens.append((kind, match.group(), pos + 1))
        pos = match.end()
    return tokens


def _scalar(token: Tuple[str, str, int], lineno: int) -> Any:
    kind, text, col = token
    if kind == "number":
        if re.fullmatch(r"[+-]?\d+", text):
            return int(text)
        return float(text)
    if kind == "string":
        return re.sub(r"\\(.)", r"\1", text[1:-1])
    if kind == "ident" and text in ("true", "false"):
        return text == "true"
    raise SpecSyntaxError(f"valor inválido {text!r}", lineno, col)


def _value(tokens: List[Tuple[str, str, int]], lineno: int) -> Any:
    if not tokens:
        raise SpecSyntaxError("falta el valor tras '='", lineno, 1)
    if tokens[0][1] != "[":
        if len(tokens) > 1:
            raise SpecSyntaxError(f"contenido inesperado {tokens[1][1]!r}", lineno, tokens[1][2])
        return _scalar(tokens[0], lineno)

    if tokens[-1][1] != "]":
        raise SpecSyntaxError("lista sin cerrar", lineno, tokens[-1][2])
    inner = tokens[1:-1]
    items = []
    expect_item = True
    for token in inner:
        if expect_item:
            if token[1] in ("[", "]", ","):
                raise SpecSyntaxError(f"se esperaba un valor y se encontró {token[1]!r}", lineno, token[2])
            items.append(_scalar(token, lineno))
        elif token[1] != ",":
            raise SpecSyntaxError(f"se esperaba ',' y se encontró {token[1]!r}", lineno, token[2])
        expect_item = not expect_item
    if inner and expect_item:
        raise SpecSyntaxError("coma final en la lista", lineno, tokens[-1][2])
    return items


def _read(text: str) -> Tuple[Dict[str, Dict[str, Any]], Dict[Tuple[str, str], int]]:
    """Texto -> secciones {nombre: {clave: valor}} y línea de cada clave"""
    sections: Dict[str, Dict[str, Any]] = {"": {}}
    lines: Dict[Tuple[str, str], int] = {}
    current = ""
    for lineno, line in enumerate(text.splitlines(), start=1):
        tokens = _tokenize(line, lineno)
        if not tokens:
            continue
        if tokens[0][1] == "[":
            if len(tokens) != 3 or tokens[1][0] != "ident" or tokens[2][1] != "]":
                raise SpecSyntaxError("cabecera de sección mal formada", lineno, tokens[0][2])
            current = tokens[1][1]
            if current not in SECTION_KEYS or current == "":
                raise SpecSyntaxError(f"sección desconocida [{current}]", lineno, tokens[1][2])
            if current in sections:
                raise SpecSyntaxError(f"sección [{current}] repetida", lineno, tokens[1][2])
            sections[current] = {}
            lines[(current, "")] = lineno
            continue

        if tokens[0][0] != "ident" or len(tokens) < 2 or tokens[1][1] != "=":
            raise SpecSyntaxError("se esperaba 'clave = valor'", lineno, tokens[0][2])
        key = tokens[0][1]
        allowed = SECTION_KEYS[current]
        if allowed is not None and key not in allowed:
            where = f"[{current}]" if current else "el nivel superior"
            raise SpecSyntaxError(f"clave desconocida '{key}' en {where}", lineno, tokens[0][2])
        if key in sections[current]:
            raise SpecSyntaxError(f"clave '{key}' repetida", lineno, tokens[0][2])
        sections[current][key] = _value(tokens[2:], lineno)
        lines[(current, key)] = lineno
    return sections, lines


def _expand_preset(name: str, sections: Dict[str, Dict[str, Any]]) -> Dict[str, Any]:
    data = presets.get(name)
    data["predict"].update(sections.get("predict", {}))
    simulate = data.setdefault("simulate", {})
    simulate.update(sections.get("simulate", {}))
    simulate.setdefault("params", {}).update(sections.get("simulate.params", {}))
    data.setdefault("compare", {}).update(sections.get("compare", {}))
    if "name" in sections[""]:
        data["name"] = sections[""]["name"]
    return data


def _explicit(sections: Dict[str, Dict[str, Any]]) -> Dict[str, Any]:
    for required in ("linear", "nonlinearity"):
        if required not in sections:
            raise ConfigurationError(f"Falta la sección [{required}] (o un 'preset')", key=required)
    nonlinearity = dict(sections["nonlinearity"])
    if "kind" not in nonlinearity:
        raise ConfigurationError("Falta 'kind' en [nonlinearity]", key="kind")
    data: Dict[str, Any] = {
        "name": sections[""].get("name", "oscillator"),
        "loop": sections.get("loop", {}),
        "linear": sections["linear"],
        "nonlinearity": nonlinearity,
        "predict": sections.get("predict", {}),
        "compare": sections.get("compare", {}),
    }
    if "simulate" in sections:
        simulate = dict(sections["simulate"])
        simulate["params"] = sections.get("simulate.params", {})
        data["simulate"] = simulate
    elif "simulate.params" in sections:
        raise ConfigurationError("[simulate.params] requiere una sección [simulate]", key="simulate")
    return data


def parse_spec(text: str) -> OscillatorSpec:
    """
    Analiza la gramática de especificación: cabeceras `[sección]`, pares
    `clave = valor`, listas entre corchetes y cadenas entre comillas.
    `preset = "<nombre>"` en el nivel superior expande un oscilador de
    referencia; [predict], [simulate] y [compare] pueden sobrescribirlo.
    """
    sections, lines = _read(text)
    preset = sections[""].get("preset")

    if preset is not None:
        explicit = [s for s in EXPLICIT_SECTIONS if s in sections]
        if explicit:
            line = lines[(explicit[0], "")]
            raise ConfigurationError(
                f"línea {line}: 'preset' es incompatible con la sección explícita [{explicit[0]}]",
                key=explicit[0])
        data = _expand_preset(str(preset), sections)
    else:
        data = _explicit(sections)

    try:
        spec = OscillatorSpec.from_dict(data, origin=preset)
        if spec.simulate is not None:
            build_model(spec.simulate.preset, spec.simulate.params)
    except ConfigurationError as e:
        line = next((n for (section, key), n in lines.items() if key and key == e.key), None)
        if line is None:
            raise
        raise ConfigurationError(f"línea {line}: {e}", key=e.key) from e

    logging.info(f"Especificación '{spec.name}' analizada")
    return spec


def _format(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, str):
        return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_format(v) for v in value) + "]"
    raise ConfigurationError(f"Valor no serializable: {value!r}")


def _block(name: str, items: Dict[str, Any]) -> List[str]:
    return [f"[{name}]"] + [f"{key} = {_format(value)}" for key, value in items.items()] + [""]


def serialize_spec(spec: OscillatorSpec) -> str:
    """Especificación con todas las secciones explícitas (sin 'preset')"""
    data = spec.to_dict()
    out = [f"name = {_format(data['name'])}", ""]
    out += _block("loop", data["loop"])
    out += _block("linear", data["linear"])
    out += _block("nonlinearity", data["nonlinearity"])
    out += _block("predict", data["predict"])
    if "simulate" in data:
        simulate = dict(data["simulate"])
        params = simulate.pop("params")
        out += _block("simulate", simulate)
        out += _block("simulate.params", params)
    out += _block("compare", data["compare"])
    return "\n".join(out)
