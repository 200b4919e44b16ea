"""JSON documents for groups, structures, tangent vectors and words.

Rationals travel as ``"num/den"`` strings and vertices as ``"p/q"`` with
``"1/0"`` for infinity, so every document round-trips exactly.
"""

from __future__ import annotations

import json
import re
from decimal import Decimal, InvalidOperation, localcontext
from fractions import Fraction

from .farey import FareyVertex, Moebius, vertex
from .modgroup import ModularWord, build_word
from .structures import DecoratedStructure
from .subgroup import (
    Subgroup, commutator_subgroup, from_permutations, full_group, principal_congruence,
)
from .tesselation import NotAnEdge, TlcTesselation, history_over, replay, remark

_RATIONAL = re.compile(r"^\s*-?\d+(\s*/\s*-?\d+)?\s*$")


class SchemaError(ValueError):
    """A document does not follow its schema."""


def fmt_rational(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def fmt_decimal(x, digits: int = 16) -> str:
    x = Fraction(x)
    with localcontext() as ctx:
        ctx.prec = digits
        return str(Decimal(x.numerator) / Decimal(x.denominator))


def parse_rational(text, approx: int | None = None) -> Fraction:
    """``"num/den"`` or an integer; decimal strings only when ``approx`` digits are given."""
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    if not isinstance(text, str):
        raise SchemaError(f"rational must be a string, got {text!r}")
    if _RATIONAL.match(text):
        num, _, den = text.partition("/")
        den = int(den) if den.strip() else 1
        if den == 0:
            raise SchemaError(f"zero denominator in {text!r}")
        return Fraction(int(num), den)
    if approx is not None:
        try:
            with localcontext() as ctx:
                ctx.prec = approx
                d = +Decimal(text)
        except InvalidOperation:
            raise SchemaError(f"malformed number {text!r}") from None
        if d.is_finite():
            return Fraction(d)
    raise SchemaError(f"malformed rational {text!r}")


def parse_vertex(text) -> FareyVertex:
    if not isinstance(text, str):
        raise SchemaError(f"vertex must be a string, got {text!r}")
    try:
        return vertex(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(str(exc)) from None


def parse_edge(obj) -> tuple:
    if not isinstance(obj, list) or len(obj) != 2:
        raise SchemaError(f"edge must be a two-element array, got {obj!r}")
    return parse_vertex(obj[0]), parse_vertex(obj[1])


def edge_doc(e) -> list:
    return [str(e[0]), str(e[1])]


# ---------------------------------------------------------------------------
# groups


def group_doc(k: Subgroup) -> dict:
    if k.degree == 1:
        return {"type": "full"}
    if k == commutator_subgroup():
        return {"type": "commutator"}
    if k.name and k.name.startswith("Gamma("):
        n = int(k.name[6:-1])
        if principal_congruence(n) == k:
            return {"type": "congruence", "level": n}
    return {"type": "perm", "degree": k.degree, "s": list(k.perm_s), "u": list(k.perm_u)}


def parse_group(doc) -> Subgroup:
    if not isinstance(doc, dict) or "type" not in doc:
        raise SchemaError("group must be an object with a 'type'")
    kind = doc["type"]
    try:
        if kind == "full":
            return full_group()
        if kind == "commutator":
            return commutator_subgroup()
        if kind == "congruence":
            n = doc["level"]
            if not isinstance(n, int) or n < 1:
                raise SchemaError("congruence level must be a positive integer")
            return principal_congruence(n)
        if kind == "perm":
            s, u = doc["s"], doc["u"]
            if "degree" in doc and doc["degree"] != len(s):
                raise SchemaError("degree does not match the permutations")
            return from_permutations(s, u)
    except KeyError as exc:
        raise SchemaError(f"group is missing {exc}") from None
    except (TypeError, ValueError) as exc:
        if isinstance(exc, SchemaError):
            raise
        raise SchemaError(str(exc)) from None
    raise SchemaError(f"unknown group type {kind!r}")


# ---------------------------------------------------------------------------
# structures


def tesselation_flips(t: TlcTesselation) -> list:
    """Single-group flip list that replays to ``t`` (without its marking)."""
    if all(g == t.group for g, _ in t.flips):
        return [e for _, e in t.flips]
    return history_over(t, t.group)


def structure_doc(s: DecoratedStructure) -> dict:
    t = s.tess
    flips = tesselation_flips(t)
    doc = {
        "group": group_doc(s.group),
        "flips": [edge_doc(e) for e in flips],
        "lambda": [{"edge": edge_doc(o.representative), "value": fmt_rational(v)}
                   for o, v in s.items()],
    }
    if replay(flips, s.group).doe != t.doe:
        doc["doe"] = edge_doc(t.doe)
    return doc


def _tesselation(doc) -> TlcTesselation:
    k = parse_group(doc.get("group"))
    flips = doc.get("flips", [])
    if not isinstance(flips, list):
        raise SchemaError("'flips' must be an array of edges")
    try:
        t = replay([parse_edge(e) for e in flips], k)
        if "doe" in doc:
            t = remark(t, parse_edge(doc["doe"]))
    except (NotAnEdge, KeyError):
        raise SchemaError("flip or marking is not an edge of the tesselation") from None
    except ValueError as exc:
        if isinstance(exc, SchemaError):
            raise
        raise SchemaError(str(exc)) from None
    return t


def _orbit_values(t: TlcTesselation, entries, approx, what: str, positive: bool) -> dict:
    if not isinstance(entries, list):
        raise SchemaError(f"'{what}' must be an array")
    out = {}
    for item in entries:
        if not isinstance(item, dict) or "edge" not in item or "value" not in item:
            raise SchemaError(f"each {what} entry needs 'edge' and 'value'")
        e = parse_edge(item["edge"])
        if not t.has_edge(*e):
            raise SchemaError(f"{item['edge']} is not an edge of the tesselation")
        key = t.ukey(*e)
        if key in out:
            raise SchemaError(f"orbit of {item['edge']} given twice")
        val = parse_rational(item["value"], approx)
        if positive and val <= 0:
            raise SchemaError(f"value {item['value']} is not positive")
        out[key] = val
    missing = set(t.edge_keys()) - set(out)
    if missing:
        raise SchemaError(f"{len(missing)} orbit(s) have no value")
    return out


def parse_structure(doc, approx: int | None = None) -> DecoratedStructure:
    if not isinstance(doc, dict):
        raise SchemaError("structure must be an object")
    t = _tesselation(doc)
    return DecoratedStructure(t, _orbit_values(t, doc.get("lambda"), approx, "lambda", True))


# ---------------------------------------------------------------------------
# tangent vectors


def vector_doc(s: DecoratedStructure, u) -> list:
    return [{"edge": edge_doc(o.representative), "value": fmt_rational(u.get(o.key, 0))}
            for o in s.tess.orbits()]


def parse_vector(s: DecoratedStructure, doc, approx: int | None = None) -> dict:
    return _orbit_values(s.tess, doc, approx, "vector", False)


# ---------------------------------------------------------------------------
# words


def word_doc(w: ModularWord) -> dict:
    return {"base": [list(r) for r in w.base.rows()],
            "word": [{"group": group_doc(g.group), "edge": edge_doc(g.edge)} for g in w.word]}


def parse_word(doc) -> ModularWord:
    if not isinstance(doc, dict) or "base" not in doc:
        raise SchemaError("word must be an object with a 'base'")
    rows = doc["base"]
    try:
        (a, b), (c, d) = rows
        if not all(isinstance(x, int) for x in (a, b, c, d)):
            raise TypeError
        base = Moebius.from_rows(rows)
    except (TypeError, ValueError):
        raise SchemaError("base must be an integer 2x2 matrix of determinant 1") from None
    steps = []
    for item in doc.get("word", []):
        if not isinstance(item, dict) or "group" not in item or "edge" not in item:
            raise SchemaError("each word entry needs 'group' and 'edge'")
        steps.append((parse_group(item["group"]), parse_edge(item["edge"])))
    try:
        return build_word(base, steps)
    except (NotAnEdge, KeyError):
        raise SchemaError("a word step is not an edge of the current tesselation") from None


# ---------------------------------------------------------------------------
# files


def load(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON ({exc.msg})") from None


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"
