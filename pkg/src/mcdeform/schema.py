"""JSON input documents and report serialization (schema "mcdeform/1").

Documents are JSON objects::

    {"schema": "mcdeform/1", "kind": "dgla" | "complex" | "artinian",
     "field": "Q",
     "generators": [{"name": "x", "degree": 0}, ...],
     "differential": {"x": {"y": "1/2"}},
     "bracket": [{"pair": ["x", "y"], "value": {"y": "1"}}],        # dgla
     "algebra": {"unit": "1", "m_basis": ["e"],                     # artinian
                 "products": [{"pair": ["e", "e"], "value": {}}]}}

Scalars are strings "p/q" (integers are tolerated). Floats are rejected.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Any, Dict, Mapping

from .artin import ArtinianLocalDGA
from .dgla import DGLA, BaseDGLA
from .errors import ParseError, ShapeMismatch
from .forms import SullivanForm, format_form
from .graded import ChainComplex

SCHEMA = "mcdeform/1"
KINDS = ("dgla", "complex", "artinian")


class _FloatLiteral(Exception):
    def __init__(self, text):
        self.text = text


def _refuse_float(text):
    raise _FloatLiteral(text)


class Source:
    """Raw text of a document, used to point errors at a line and column."""

    def __init__(self, text: str, name: str = "<input>"):
        self.text = text
        self.name = name

    def locate(self, needle: str):
        pos = self.text.find(needle)
        if pos < 0:
            return 0, 0
        line = self.text.count("\n", 0, pos) + 1
        col = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        return line, col

    def error(self, message: str, token=None) -> ParseError:
        line, col = self.locate(json.dumps(token)) if token is not None else (0, 0)
        return ParseError(f"{self.name}: {message}", line, col)


def parse_json(text: str, name: str = "<input>"):
    src = Source(text, name)
    try:
        return json.loads(text, parse_float=_refuse_float, parse_constant=_refuse_float), src
    except json.JSONDecodeError as exc:
        raise ParseError(f"{name}: {exc.msg}", exc.lineno, exc.colno) from None
    except _FloatLiteral as exc:
        m = re.search(r"(?<![\w\"])" + re.escape(exc.text), text)
        line, col = src.locate(m.group(0)) if m else (0, 0)
        raise ParseError(f"{name}: float literal {exc.text} is not exact; write it as a string \"p/q\"",
                         line, col) from None


def read_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    return parse_json(text, path)


def rational(value, src: Source, where: str) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise src.error(f"{where}: scalar must be a string \"p/q\" or an integer", value)
    try:
        return Fraction(value.strip()) if isinstance(value, str) else Fraction(value)
    except (ValueError, ZeroDivisionError):
        raise src.error(f"{where}: {value!r} is not a rational number", value) from None


def _combination(obj, src: Source, where: str, known) -> Dict[str, Fraction]:
    if not isinstance(obj, dict):
        raise src.error(f"{where}: expected an object of label -> scalar", None)
    out = {}
    for lab, v in obj.items():
        if lab not in known:
            raise src.error(f"{where}: undeclared label {lab!r}", lab)
        c = rational(v, src, where)
        if c:
            out[lab] = c
    return out


def _pairs(items, src: Source, where: str, known):
    if not isinstance(items, list):
        raise src.error(f"{where}: expected a list of {{\"pair\": [a, b], \"value\": {{...}}}}", where)
    out = {}
    for k, item in enumerate(items):
        if not isinstance(item, dict) or set(item) != {"pair", "value"}:
            raise src.error(f"{where}[{k}]: expected keys 'pair' and 'value'", where)
        pair = item["pair"]
        if not (isinstance(pair, list) and len(pair) == 2):
            raise src.error(f"{where}[{k}]: 'pair' must list two labels", where)
        for lab in pair:
            if lab not in known:
                raise src.error(f"{where}[{k}]: undeclared label {lab!r}", lab)
        key = tuple(pair)
        if key in out:
            raise src.error(f"{where}: pair {pair} listed twice", where)
        out[key] = _combination(item["value"], src, f"{where}[{k}]", known)
    return out


def build_document(doc: Any, src: Source):
    """Turn a parsed document into a DGLA, ChainComplex or ArtinianLocalDGA."""
    if not isinstance(doc, dict):
        raise src.error("document must be a JSON object")
    if doc.get("schema") != SCHEMA:
        raise src.error(f"schema must be {SCHEMA!r}", "schema")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise src.error(f"kind must be one of {', '.join(KINDS)}", "kind")
    if doc.get("field", "Q") != "Q":
        raise src.error("only the field 'Q' is supported", doc.get("field"))
    allowed = {"schema", "kind", "field", "generators", "differential", "name", "description"}
    allowed |= {"bracket"} if kind == "dgla" else set()
    allowed |= {"algebra"} if kind == "artinian" else set()
    extra = sorted(set(doc) - allowed)
    if extra:
        raise src.error(f"unexpected section {extra[0]!r} for kind {kind}", extra[0])

    gens = doc.get("generators")
    if not isinstance(gens, list):
        raise src.error("'generators' must be a list", "generators")
    labels, degrees = [], {}
    for k, g in enumerate(gens):
        if not isinstance(g, dict) or not isinstance(g.get("name"), str) or isinstance(g.get("degree"), bool) \
                or not isinstance(g.get("degree"), int):
            raise src.error(f"generators[{k}] needs a string 'name' and an integer 'degree'", "generators")
        if g["name"] in degrees:
            raise src.error(f"generator {g['name']!r} declared twice", g["name"])
        labels.append(g["name"])
        degrees[g["name"]] = g["degree"]
    known = set(labels)

    diff_obj = doc.get("differential", {})
    if not isinstance(diff_obj, dict):
        raise src.error("'differential' must be an object", "differential")
    differential = {}
    for lab, img in diff_obj.items():
        if lab not in known:
            raise src.error(f"differential of undeclared label {lab!r}", lab)
        differential[lab] = _combination(img, src, f"differential[{lab}]", known)

    if kind == "dgla":
        brackets = _pairs(doc.get("bracket", []), src, "bracket", known)
        return DGLA(labels, degrees, differential, brackets)

    if kind == "complex":
        comps: Dict[int, list] = {}
        for lab in labels:
            comps.setdefault(degrees[lab], []).append(lab)
        return ChainComplex.from_maps(comps, {(degrees[a], a): img for a, img in differential.items()})

    alg = doc.get("algebra")
    if not isinstance(alg, dict):
        raise src.error("artinian documents need an 'algebra' section", "artinian")
    unit = alg.get("unit")
    if unit not in known:
        raise src.error(f"unit {unit!r} is not a declared generator", "unit")
    m_basis = alg.get("m_basis", [lab for lab in labels if lab != unit])
    if not isinstance(m_basis, list) or any(m not in known for m in m_basis):
        raise src.error("'m_basis' must list declared generators", "m_basis")
    products = _pairs(alg.get("products", []), src, "products", known)
    return ArtinianLocalDGA(labels, degrees, unit, m_basis, products, differential)


def load_document(path: str):
    doc, src = read_json(path)
    try:
        return build_document(doc, src)
    except ShapeMismatch as exc:
        raise src.error(str(exc)) from None


# ---------------------------------------------------------------- elements

def label_table(host: BaseDGLA) -> Dict[str, Any]:
    table = getattr(host, "_label_table", None)
    if table is None:
        table = {host.format_label(lab): lab for lab in host.basis()}
        host._label_table = table
    return table


def parse_element(obj, host: BaseDGLA, src: Source, where: str = "element") -> dict:
    """``{"c*x": "p/q", ...}`` with keys as printed by the host."""
    if not isinstance(obj, dict):
        raise src.error("expected an object of basis label -> scalar")
    table = label_table(host)
    out = {}
    for key, v in obj.items():
        if key not in table:
            raise src.error(f"unknown basis element {key!r}", key)
        c = rational(v, src, key)
        if c:
            out[table[key]] = out.get(table[key], 0) + c
    return out


def parse_element_arg(arg: str, host: BaseDGLA, where: str) -> dict:
    """An element given inline as JSON text or as a path to a JSON file."""
    text = arg.strip()
    if text.startswith("{"):
        obj, src = parse_json(text, where)
    else:
        obj, src = read_json(arg)
    return parse_element(obj, host, src, where)


def parse_simplex(obj, host, src: Source, where: str = "simplex"):
    """``{"n": 1, "components": {"c*x": [{"t": [..], "dt": [..], "c": "p/q"}]}}``

    ``host`` is the dgla whose elements are tensored with forms; returns
    (n, element of Omega_n (x) host).
    """
    if not isinstance(obj, dict) or not isinstance(obj.get("n"), int) or isinstance(obj.get("n"), bool):
        raise src.error("expected an object with integer 'n' and 'components'", "n")
    n = obj["n"]
    comps = obj.get("components")
    if not isinstance(comps, dict):
        raise src.error(f"'components' must be an object", "components")
    table = label_table(host)
    out = {}
    for key, terms in comps.items():
        if key not in table:
            raise src.error(f"unknown basis element {key!r}", key)
        if not isinstance(terms, list):
            raise src.error(f"terms of {key!r} must be a list", key)
        for term in terms:
            if not isinstance(term, dict) or "c" not in term:
                raise src.error(f"each term needs 't', 'dt' and 'c'", key)
            exps = term.get("t", [0] * n)
            word = term.get("dt", [])
            if not (isinstance(exps, list) and len(exps) == n and all(isinstance(e, int) and e >= 0 for e in exps)):
                raise src.error(f"'t' must list {n} non-negative exponents", key)
            if not (isinstance(word, list) and word == sorted(set(word)) and all(isinstance(i, int) and 1 <= i <= n for i in word)):
                raise src.error(f"'dt' must be strictly increasing indices in 1..{n}", key)
            mono = (tuple(exps), tuple(word))
            c = rational(term["c"], src, key)
            lab = (mono, table[key])
            out[lab] = out.get(lab, 0) + c
    return n, {k: v for k, v in out.items() if v}


def parse_simplex_arg(arg: str, host, where: str):
    text = arg.strip()
    obj, src = parse_json(text, where) if text.startswith("{") else read_json(arg)
    return parse_simplex(obj, host, src, where)


# ---------------------------------------------------------------- output

def fmt_q(c) -> str:
    return str(Fraction(c))


def element_json(host: BaseDGLA, x: Mapping) -> Dict[str, str]:
    return {host.format_label(lab): fmt_q(v) for lab, v in x.items() if v}


def forms_element_json(inner: BaseDGLA, Z: Mapping, n: int) -> Dict[str, list]:
    """Group an element of Omega_n (x) inner by inner label."""
    groups: Dict[str, list] = {}
    for ((exps, word), x), c in Z.items():
        if c:
            groups.setdefault(inner.format_label(x), []).append(
                {"t": list(exps), "dt": list(word), "c": fmt_q(c)})
    for terms in groups.values():
        terms.sort(key=lambda t: (t["dt"], t["t"]))
    return groups


def forms_element_text(inner: BaseDGLA, Z: Mapping, n: int) -> Dict[str, str]:
    groups: Dict[Any, dict] = {}
    for (mono, x), c in Z.items():
        groups.setdefault(x, {})[mono] = c
    return {inner.format_label(x): format_form(SullivanForm(n, t, 10 ** 6)) for x, t in groups.items()}


def dumps_report(report: Mapping, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    lines = []
    _text_lines(report, "", lines)
    return "\n".join(lines) + "\n"


def _text_lines(obj, indent: str, lines: list):
    if isinstance(obj, dict):
        for k in sorted(obj, key=str):
            v = obj[k]
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{indent}{k}:")
                _text_lines(v, indent + "  ", lines)
            else:
                lines.append(f"{indent}{k}: {_scalar(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{indent}-")
                _text_lines(v, indent + "  ", lines)
            else:
                lines.append(f"{indent}- {_scalar(v)}")
    else:
        lines.append(f"{indent}{_scalar(obj)}")


def _scalar(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "null"
    if isinstance(v, (dict, list)):
        return "{}" if isinstance(v, dict) else "[]"
    return str(v)
