"""JSON documents for every domain object.

Each document is a JSON object with a ``kind`` tag:

``distribution``  ``{"factors": [{"label": "f", "weight": 0.7}, ...]}``
``table``         ``{"attributes": [{"name": "H", "values": ["no", "yes"]}],
                  "entries": [{"state": ["yes", "no"], "utility": 2}, ...]}``
                  (a state may also be an object keyed by attribute name)
``network``       ``{"variables": [...], "edges": [["A", "B"]],
                  "cuts": [{"variable": "B", "parents": ["A"], "rows": [[p0, p1], ...]}]}``
                  plus optional ``"semantics": "utility" | "probability"``
``binetwork``     ``{"pnet": "p.json", "unet": "u.json",
                  "bridges": [{"p_event": {"A": 1}, "u_event": {"B": 1}}]}``
                  (paths are relative to the binetwork document; an event is
                  a partial assignment or a list of them)
``query``         ``{"command": "dist", "target": "cars.json", "args": [...],
                  "options": {"tol": 1e-9}}`` (a stored CLI invocation)

Syntax errors carry line and column; schema errors carry a JSON path.
Floats are written with ``repr`` so documents round-trip exactly.
"""
from __future__ import annotations

import json
import os
from pathlib import Path

from .binet import BiNetwork, Bridge, ProbabilityNetwork
from .errors import UtilityError, ValidationError
from .factors import UtilityDistribution
from .maut import AttributeSpace, TabulatedUtility
from .unet import CUT, UEvent, UtilityNetwork

__all__ = ["DocumentError", "Query", "loads", "load", "dumps", "dump", "event_to_json", "event_from_json"]

KINDS = ("distribution", "table", "network", "binetwork", "query")


class DocumentError(ValidationError):
    def __init__(self, message, *, line=None, column=None, path=None, source=None):
        self.line, self.column, self.path, self.source = line, column, path, source
        where = []
        if source:
            where.append(str(source))
        if line is not None:
            where.append(f"line {line}, column {column}")
        if path:
            where.append(path)
        super().__init__(f"{': '.join(where)}: {message}" if where else message)


class Query:
    """A stored CLI invocation (``kind: query``)."""

    __slots__ = ("command", "target", "args", "options")

    def __init__(self, command, target, args=(), options=None):
        self.command = command
        self.target = target
        self.args = tuple(args)
        self.options = dict(options or {})

    def __eq__(self, other):
        return isinstance(other, Query) and (
            self.command, self.target, self.args, self.options
        ) == (other.command, other.target, other.args, other.options)

    def __repr__(self):
        return f"Query({self.command!r}, {self.target!r}, {list(self.args)!r}, {self.options!r})"


def _get(obj, key, path, kind=None):
    if not isinstance(obj, dict):
        raise DocumentError("expected an object", path=path)
    if key not in obj:
        raise DocumentError(f"missing field {key!r}", path=path)
    val = obj[key]
    if kind is not None and not isinstance(val, kind):
        raise DocumentError(f"field {key!r} has the wrong type", path=f"{path}.{key}")
    return val


def _number(v, path):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise DocumentError("expected a number", path=path)
    return float(v)


def event_from_json(obj, path="$") -> UEvent:
    terms = obj if isinstance(obj, list) else [obj]
    for i, t in enumerate(terms):
        if not isinstance(t, dict):
            raise DocumentError("event terms must be objects", path=f"{path}[{i}]")
    try:
        return UEvent(terms)
    except ValidationError as exc:
        raise DocumentError(str(exc), path=path) from None


def event_to_json(e: UEvent):
    terms = [dict(t) for t in e.terms]
    return terms[0] if len(terms) == 1 else terms


def _distribution(doc):
    factors = _get(doc, "factors", "$", list)
    pairs = []
    for i, f in enumerate(factors):
        p = f"$.factors[{i}]"
        label = _get(f, "label", p, str)
        pairs.append((label, _number(_get(f, "weight", p), p + ".weight")))
    return UtilityDistribution(pairs)


def _table(doc):
    attrs = _get(doc, "attributes", "$", list)
    space = AttributeSpace(
        (_get(a, "name", f"$.attributes[{i}]", str), _get(a, "values", f"$.attributes[{i}]", list))
        for i, a in enumerate(attrs)
    )
    entries = []
    for i, e in enumerate(_get(doc, "entries", "$", list)):
        p = f"$.entries[{i}]"
        state = _get(e, "state", p, (list, dict))
        util = _number(_get(e, "utility", p), p + ".utility")
        entries.append((state, util))
    try:
        return TabulatedUtility.from_entries(space, entries)
    except ValidationError as exc:
        raise DocumentError(str(exc), path="$.entries") from None


def _network(doc):
    variables = _get(doc, "variables", "$", list)
    edges = []
    for i, e in enumerate(_get(doc, "edges", "$", list)):
        if not (isinstance(e, list) and len(e) == 2):
            raise DocumentError("an edge is a [parent, child] pair", path=f"$.edges[{i}]")
        edges.append(tuple(e))
    cuts = []
    for i, c in enumerate(_get(doc, "cuts", "$", list)):
        p = f"$.cuts[{i}]"
        rows = _get(c, "rows", p, list)
        for r, row in enumerate(rows):
            if not isinstance(row, list):
                raise DocumentError("a row is a list of two numbers", path=f"{p}.rows[{r}]")
            for k, x in enumerate(row):
                _number(x, f"{p}.rows[{r}][{k}]")
        try:
            cuts.append(CUT(_get(c, "variable", p, str), _get(c, "parents", p, list), rows))
        except ValidationError as exc:
            raise DocumentError(str(exc), path=p) from None
    semantics = doc.get("semantics", "utility")
    cls = {"utility": UtilityNetwork, "probability": ProbabilityNetwork}.get(semantics)
    if cls is None:
        raise DocumentError("semantics must be 'utility' or 'probability'", path="$.semantics")
    return cls(variables, edges, cuts)


def _binetwork(doc, base):
    pnet = load(base / _get(doc, "pnet", "$", str))
    unet = load(base / _get(doc, "unet", "$", str))
    for net, field in ((pnet, "pnet"), (unet, "unet")):
        if not isinstance(net, UtilityNetwork):
            raise DocumentError("must reference a network document", path=f"$.{field}")
    if type(pnet) is UtilityNetwork:
        pnet = ProbabilityNetwork(pnet.variables, pnet.edges, pnet.cuts.values())
    bridges = []
    for i, b in enumerate(_get(doc, "bridges", "$", list)):
        p = f"$.bridges[{i}]"
        bridges.append(
            Bridge(
                event_from_json(_get(b, "p_event", p), p + ".p_event"),
                event_from_json(_get(b, "u_event", p), p + ".u_event"),
            )
        )
    return BiNetwork(pnet, unet, bridges)


def _query(doc):
    return Query(
        _get(doc, "command", "$", str),
        _get(doc, "target", "$", str),
        [str(a) for a in doc.get("args", [])],
        doc.get("options", {}),
    )


def loads(text: str, base_dir=".", source=None):
    """Parse a document string into its domain object."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(exc.msg, line=exc.lineno, column=exc.colno, source=source) from None
    kind = _get(doc, "kind", "$", str) if isinstance(doc, dict) else None
    if kind not in KINDS:
        raise DocumentError(f"kind must be one of {', '.join(KINDS)}", path="$.kind", source=source)
    try:
        if kind == "distribution":
            return _distribution(doc)
        if kind == "table":
            return _table(doc)
        if kind == "network":
            return _network(doc)
        if kind == "binetwork":
            return _binetwork(doc, Path(base_dir))
        return _query(doc)
    except DocumentError as exc:
        if exc.source is None and source is not None:
            raise DocumentError(str(exc), path=None, source=source) from None
        raise
    except UtilityError as exc:
        raise DocumentError(str(exc), source=source) from None


def load(path):
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DocumentError(f"cannot read document: {exc.strerror}", source=path) from None
    return loads(text, base_dir=path.parent, source=path)


def _to_json(obj, pnet_path=None, unet_path=None):
    if isinstance(obj, UtilityDistribution):
        return {
            "kind": "distribution",
            "factors": [{"label": k, "weight": w} for k, w in obj.weights.items()],
        }
    if isinstance(obj, TabulatedUtility):
        return {
            "kind": "table",
            "attributes": [{"name": n, "values": list(d)} for n, d in obj.space],
            "entries": [{"state": list(s), "utility": v} for s, v in obj.items()],
        }
    if isinstance(obj, UtilityNetwork):
        return {
            "kind": "network",
            "semantics": obj.kind,
            "variables": list(obj.variables),
            "edges": [list(e) for e in obj.edges],
            "cuts": [
                {"variable": c.variable, "parents": list(c.parents), "rows": c.rows.tolist()}
                for c in obj.cuts.values()
            ],
        }
    if isinstance(obj, BiNetwork):
        if pnet_path is None or unet_path is None:
            raise ValueError("a binetwork document needs the paths of its two networks")
        return {
            "kind": "binetwork",
            "pnet": str(pnet_path),
            "unet": str(unet_path),
            "bridges": [
                {"p_event": event_to_json(b.p_event), "u_event": event_to_json(b.u_event)}
                for b in obj.bridges
            ],
        }
    if isinstance(obj, Query):
        return {
            "kind": "query",
            "command": obj.command,
            "target": obj.target,
            "args": list(obj.args),
            "options": obj.options,
        }
    raise TypeError(f"no document kind for {type(obj).__name__}")


def dumps(obj, *, pnet_path=None, unet_path=None) -> str:
    """Serialize a domain object; binetworks need the paths of their networks."""
    return json.dumps(_to_json(obj, pnet_path, unet_path), indent=2) + "\n"


def dump(obj, path, **kw):
    Path(path).write_text(dumps(obj, **kw), encoding="utf-8")
    return os.fspath(path)
