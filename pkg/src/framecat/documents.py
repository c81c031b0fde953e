"""The workbench file format.

UTF-8 JSON with a top-level "kind" discriminator and index-based tables.
Canonical serialization sorts keys and arrays-of-sets, so parse o serialize
is the identity on canonical bytes.  Parse errors carry a line/column
(syntax) or a field path (semantics).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Optional

import numpy as np

from .bits import iter_bits, mask_of
from .crm import CompleteRestrictionMonoid, make_crm
from .order import (FiniteFrame, FiniteLattice, FinitePoset)
from .quantale import EhresmannQuantale, FiniteQuantale, make_eq
from .reports import WorkbenchError
from .topcat import FiniteCategory, FiniteTopCategory, Topology, make_category

KINDS = ("poset", "frame", "quantale", "rqf", "category", "topcategory",
         "crm", "morphism", "functor")


class ParseError(WorkbenchError):
    def __init__(self, message: str, path: str = "", line: Optional[int] = None,
                 column: Optional[int] = None):
        self.path = path
        self.line = line
        self.column = column
        where = path or (f"line {line}, column {column}" if line else "")
        super().__init__(f"{message}" + (f" at {where}" if where else ""))


@dataclass
class WorkbenchDocument:
    kind: str
    name: str
    obj: object
    expected: Optional[dict] = None


# ---------------------------------------------------------------------------
# field readers

def _need(d: dict, key: str, path: str) -> Any:
    if key not in d:
        raise ParseError(f"missing field '{key}'", path)
    return d[key]


def _int_in_range(v, lo: int, hi: int, path: str) -> int:
    if not isinstance(v, int) or isinstance(v, bool) or not (lo <= v < hi):
        raise ParseError(f"expected integer in [{lo},{hi})", path)
    return v


def _int_matrix(v, n: int, m: int, hi: int, path: str) -> np.ndarray:
    if not isinstance(v, list) or len(v) != n:
        raise ParseError(f"expected {n} rows", path)
    out = np.zeros((n, m), dtype=np.int64)
    for i, row in enumerate(v):
        if not isinstance(row, list) or len(row) != m:
            raise ParseError(f"expected {m} entries", f"{path}[{i}]")
        for j, x in enumerate(row):
            out[i, j] = _int_in_range(x, -1 if hi < 0 else 0, abs(hi), f"{path}[{i}][{j}]")
    return out


def _bool_matrix(v, n: int, path: str) -> np.ndarray:
    if not isinstance(v, list) or len(v) != n:
        raise ParseError(f"expected {n} rows", path)
    out = np.zeros((n, n), dtype=bool)
    for i, row in enumerate(v):
        if not isinstance(row, list) or len(row) != n:
            raise ParseError(f"expected {n} entries", f"{path}[{i}]")
        for j, x in enumerate(row):
            if x not in (0, 1, True, False):
                raise ParseError("expected 0/1", f"{path}[{i}][{j}]")
            out[i, j] = bool(x)
    return out


def _int_vector(v, n: int, hi: int, path: str) -> np.ndarray:
    if not isinstance(v, list) or len(v) != n:
        raise ParseError(f"expected {n} entries", path)
    return np.array([_int_in_range(x, 0, hi, f"{path}[{i}]") for i, x in enumerate(v)],
                    dtype=np.int64)


# ---------------------------------------------------------------------------
# per-kind parsing

def _parse_poset(p: dict, path: str) -> FinitePoset:
    n = _int_in_range(_need(p, "n", path), 0, 1 << 20, f"{path}.n")
    leq = _bool_matrix(_need(p, "leq", path), n, f"{path}.leq")
    return FinitePoset.from_leq(leq)


def _parse_frame(p: dict, path: str) -> FiniteFrame:
    poset = _parse_poset(p, path)
    n = poset.n
    meet = _int_matrix(_need(p, "meet", path), n, n, n, f"{path}.meet")
    join = _int_matrix(_need(p, "join", path), n, n, n, f"{path}.join")
    bottom = _int_in_range(_need(p, "bottom", path), 0, n, f"{path}.bottom")
    top = _int_in_range(_need(p, "top", path), 0, n, f"{path}.top")
    for a in (meet, join):
        a.flags.writeable = False
    return FiniteFrame(FiniteLattice(poset, meet, join, bottom, top))


def _parse_quantale(p: dict, path: str) -> FiniteQuantale:
    frame = _parse_frame(p, path)
    n = frame.n
    mul = _int_matrix(_need(p, "mul", path), n, n, n, f"{path}.mul")
    unit = _int_in_range(_need(p, "unit", path), 0, n, f"{path}.unit")
    mul.flags.writeable = False
    return FiniteQuantale(frame, mul, unit)


def _parse_rqf(p: dict, path: str) -> EhresmannQuantale:
    quantale = _parse_quantale(p, path)
    n = quantale.n
    star = _int_vector(_need(p, "star", path), n, n, f"{path}.star")
    plus = _int_vector(_need(p, "plus", path), n, n, f"{path}.plus")
    return make_eq(quantale.frame, quantale.mul, quantale.unit, star, plus)


def _parse_category(p: dict, path: str) -> FiniteCategory:
    n = _int_in_range(_need(p, "arrows", path), 0, 1 << 20, f"{path}.arrows")
    ids_raw = _need(p, "identities", path)
    if not isinstance(ids_raw, list):
        raise ParseError("expected a list", f"{path}.identities")
    ids = [_int_in_range(x, 0, max(n, 1), f"{path}.identities[{i}]")
           for i, x in enumerate(ids_raw)]
    d = _int_vector(_need(p, "d", path), n, max(n, 1), f"{path}.d")
    r = _int_vector(_need(p, "r", path), n, max(n, 1), f"{path}.r")
    comp_raw = _need(p, "comp", path)
    if not isinstance(comp_raw, list):
        raise ParseError("expected a list of [a, b, ab] triples", f"{path}.comp")
    entries = []
    for i, t in enumerate(comp_raw):
        if not isinstance(t, list) or len(t) != 3:
            raise ParseError("expected [a, b, ab]", f"{path}.comp[{i}]")
        entries.append(tuple(_int_in_range(x, 0, n, f"{path}.comp[{i}][{j}]")
                             for j, x in enumerate(t)))
    return make_category(n, ids, d, r, comp_entries=entries)


def _parse_topology(v, n: int, path: str) -> Topology:
    if v == "discrete":
        return Topology(n, None)
    if not isinstance(v, list):
        raise ParseError("expected \"discrete\" or a list of opens", path)
    opens = set()
    for i, o in enumerate(v):
        if not isinstance(o, list):
            raise ParseError("expected a list of arrow indices", f"{path}[{i}]")
        opens.add(mask_of(_int_in_range(x, 0, max(n, 1), f"{path}[{i}][{j}]")
                          for j, x in enumerate(o)))
    return Topology(n, frozenset(opens))


def _parse_topcategory(p: dict, path: str) -> FiniteTopCategory:
    cat = _parse_category(p, path)
    top = _parse_topology(_need(p, "topology", path), cat.n, f"{path}.topology")
    return FiniteTopCategory(cat, top)


def _parse_crm(p: dict, path: str) -> CompleteRestrictionMonoid:
    n = _int_in_range(_need(p, "n", path), 1, 1 << 20, f"{path}.n")
    leq = _bool_matrix(_need(p, "leq", path), n, f"{path}.leq")
    mul = _int_matrix(_need(p, "mul", path), n, n, n, f"{path}.mul")
    unit = _int_in_range(_need(p, "unit", path), 0, n, f"{path}.unit")
    zero = _int_in_range(_need(p, "zero", path), 0, n, f"{path}.zero")
    star = _int_vector(_need(p, "star", path), n, n, f"{path}.star")
    plus = _int_vector(_need(p, "plus", path), n, n, f"{path}.plus")
    meet = _int_matrix(_need(p, "meet", path), n, n, n, f"{path}.meet")
    return make_crm(n, leq, mul, unit, zero, star, plus, meet)


@dataclass
class StructMorphism:
    """A map between two embedded structures; flavor follows the source kind."""
    flavor: str  # "rqf" | "crm" | "functor"
    source: object
    target: object
    map: np.ndarray


def _parse_morphism(p: dict, path: str) -> StructMorphism:
    src_doc = _need(p, "source", path)
    dst_doc = _need(p, "target", path)
    if not isinstance(src_doc, dict) or not isinstance(dst_doc, dict):
        raise ParseError("expected embedded documents", f"{path}.source")
    skind = _need(src_doc, "kind", f"{path}.source")
    dkind = _need(dst_doc, "kind", f"{path}.target")
    if skind != dkind or skind not in ("rqf", "crm"):
        raise ParseError("morphism endpoints must both be rqf or both crm", f"{path}.source.kind")
    parse = _parse_rqf if skind == "rqf" else _parse_crm
    src = parse(_need(src_doc, "payload", f"{path}.source"), f"{path}.source.payload")
    dst = parse(_need(dst_doc, "payload", f"{path}.target"), f"{path}.target.payload")
    m = _int_vector(_need(p, "map", path), src.n, dst.n, f"{path}.map")
    return StructMorphism(flavor=skind, source=src, target=dst, map=m)


def _parse_functor(p: dict, path: str) -> StructMorphism:
    src_doc = _need(p, "source", path)
    dst_doc = _need(p, "target", path)
    for which, doc in (("source", src_doc), ("target", dst_doc)):
        if not isinstance(doc, dict) or doc.get("kind") != "topcategory":
            raise ParseError("functor endpoints must be topcategory documents",
                             f"{path}.{which}.kind")
    src = _parse_topcategory(_need(src_doc, "payload", f"{path}.source"),
                             f"{path}.source.payload")
    dst = _parse_topcategory(_need(dst_doc, "payload", f"{path}.target"),
                             f"{path}.target.payload")
    m = _int_vector(_need(p, "map", path), src.n, max(dst.n, 1), f"{path}.map")
    return StructMorphism(flavor="functor", source=src, target=dst, map=m)


_PARSERS = {
    "poset": _parse_poset,
    "frame": _parse_frame,
    "quantale": _parse_quantale,
    "rqf": _parse_rqf,
    "category": _parse_category,
    "topcategory": _parse_topcategory,
    "crm": _parse_crm,
    "morphism": _parse_morphism,
    "functor": _parse_functor,
}


def parse_document(text: str) -> WorkbenchDocument:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}", line=e.lineno, column=e.colno) from e
    if not isinstance(raw, dict):
        raise ParseError("document must be a JSON object", "$")
    kind = _need(raw, "kind", "$")
    if kind not in KINDS:
        raise ParseError(f"unknown kind '{kind}'", "$.kind")
    name = raw.get("name", "")
    if not isinstance(name, str):
        raise ParseError("expected a string", "$.name")
    payload = _need(raw, "payload", "$")
    if not isinstance(payload, dict):
        raise ParseError("expected an object", "$.payload")
    obj = _PARSERS[kind](payload, "$.payload")
    expected = raw.get("expected")
    if expected is not None and not isinstance(expected, dict):
        raise ParseError("expected an object", "$.expected")
    return WorkbenchDocument(kind=kind, name=name, obj=obj, expected=expected)


# ---------------------------------------------------------------------------
# serialization

def _poset_payload(p: FinitePoset) -> dict:
    return {"n": p.n, "leq": [[int(x) for x in row] for row in p.leq]}


def _frame_payload(f: FiniteFrame) -> dict:
    out = _poset_payload(f.lattice.poset)
    out.update({
        "meet": [[int(x) for x in row] for row in f.meet],
        "join": [[int(x) for x in row] for row in f.join],
        "bottom": f.bottom,
        "top": f.top,
    })
    return out


def _quantale_payload(q: FiniteQuantale) -> dict:
    out = _frame_payload(q.frame)
    out.update({"mul": [[int(x) for x in row] for row in q.mul], "unit": q.unit})
    return out


def _rqf_payload(q: EhresmannQuantale) -> dict:
    out = _quantale_payload(q.quantale)
    out.update({"star": [int(x) for x in q.star], "plus": [int(x) for x in q.plus]})
    return out


def _category_payload(c: FiniteCategory) -> dict:
    comp = [[int(a), int(b), int(c.comp[a, b])]
            for a in range(c.n) for b in range(c.n) if c.comp[a, b] >= 0]
    return {
        "arrows": c.n,
        "identities": sorted(c.identities()),
        "d": [int(x) for x in c.d],
        "r": [int(x) for x in c.r],
        "comp": comp,
    }


def _topology_payload(t: Topology):
    if t.opens is None:
        return "discrete"
    return [sorted(iter_bits(o)) for o in sorted(t.opens)]


def _topcategory_payload(tc: FiniteTopCategory) -> dict:
    out = _category_payload(tc.cat)
    out["topology"] = _topology_payload(tc.topology)
    return out


def _crm_payload(s: CompleteRestrictionMonoid) -> dict:
    return {
        "n": s.n,
        "leq": [[int(x) for x in row] for row in s.leq],
        "mul": [[int(x) for x in row] for row in s.mul],
        "unit": s.unit,
        "zero": s.zero,
        "star": [int(x) for x in s.star],
        "plus": [int(x) for x in s.plus],
        "meet": [[int(x) for x in row] for row in s.meet],
    }


def payload_of(kind: str, obj) -> dict:
    if kind == "poset":
        return _poset_payload(obj)
    if kind == "frame":
        return _frame_payload(obj)
    if kind == "quantale":
        return _quantale_payload(obj)
    if kind == "rqf":
        return _rqf_payload(obj)
    if kind == "category":
        return _category_payload(obj)
    if kind == "topcategory":
        return _topcategory_payload(obj)
    if kind == "crm":
        return _crm_payload(obj)
    if kind == "morphism":
        m: StructMorphism = obj
        sub = "rqf" if m.flavor == "rqf" else "crm"
        return {
            "source": {"kind": sub, "payload": payload_of(sub, m.source)},
            "target": {"kind": sub, "payload": payload_of(sub, m.target)},
            "map": [int(x) for x in m.map],
        }
    if kind == "functor":
        m = obj
        return {
            "source": {"kind": "topcategory", "payload": _topcategory_payload(m.source)},
            "target": {"kind": "topcategory", "payload": _topcategory_payload(m.target)},
            "map": [int(x) for x in m.map],
        }
    raise WorkbenchError(f"cannot serialize kind '{kind}'")


def serialize_document(doc: WorkbenchDocument) -> str:
    raw: dict[str, Any] = {
        "kind": doc.kind,
        "name": doc.name,
        "payload": payload_of(doc.kind, doc.obj),
    }
    if doc.expected is not None:
        raw["expected"] = doc.expected
    return json.dumps(raw, sort_keys=True, indent=1, separators=(",", ": ")) + "\n"
