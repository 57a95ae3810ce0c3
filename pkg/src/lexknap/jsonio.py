"""JSON encoding for instances, hulls and reports, plus bundled fixtures.

Everything is exact: integers stay JSON numbers, non-integer rationals
become "p/q" strings, floats are never produced or accepted.  ``dumps``
sorts keys and fixes separators so equal objects always serialize to
identical bytes.
"""
from __future__ import annotations

import json
from fractions import Fraction
from importlib import resources
from typing import Any, Sequence

from .core import KnapsackInstance, Sense
from .facets import FacetCertificate, HPolytope, LinearInequality


def encode_number(v) -> int | str:
    """An int as-is; any other exact rational as "p/q"."""
    if isinstance(v, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(v, int):
        return v
    f = Fraction(v)
    if f.denominator == 1:
        return int(f)
    return f"{f.numerator}/{f.denominator}"


def decode_number(v) -> int | Fraction:
    if isinstance(v, bool) or isinstance(v, float):
        raise ValueError(f"exact number expected, got {v!r}")
    if isinstance(v, int):
        return v
    if isinstance(v, str):
        f = Fraction(v)
        return int(f) if f.denominator == 1 else f
    raise ValueError(f"exact number expected, got {v!r}")


def dumps(obj: Any) -> str:
    """Deterministic JSON text (sorted keys, two-space indent, newline)."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def instance_to_dict(inst: KnapsackInstance) -> dict:
    return {
        "a": list(inst.a),
        "u": list(inst.u),
        "b": inst.b,
        "sense": inst.sense.value,
    }


def instance_from_dict(d: dict) -> KnapsackInstance:
    return KnapsackInstance(
        tuple(d["a"]), tuple(d["u"]), d["b"], Sense(d.get("sense", "le"))
    )


def row_to_dict(row: LinearInequality) -> dict:
    return {
        "coeffs": list(row.coeffs),
        "rhs": row.rhs,
        "sense": row.sense.value,
        "tag": row.tag,
    }


def row_from_dict(d: dict) -> LinearInequality:
    return LinearInequality(
        tuple(d["coeffs"]), d["rhs"], Sense(d["sense"]), d.get("tag", "ROW")
    )


def hull_to_dict(h: HPolytope) -> dict:
    return {
        "dim": h.dim,
        "relaxation": h.relaxation,
        "rows": [row_to_dict(r) for r in h.ineqs],
    }


def hull_from_dict(d: dict) -> HPolytope:
    return HPolytope(
        d["dim"],
        tuple(row_from_dict(r) for r in d["rows"]),
        bool(d.get("relaxation", False)),
    )


def certificate_to_dict(cert: FacetCertificate) -> dict:
    return {
        "j": cert.j,
        "row": row_to_dict(cert.inequality),
        "points": [list(p) for p in cert.points],
        "rank": cert.rank,
        "verified": cert.verified,
    }


def point_to_list(p: Sequence) -> list:
    return [encode_number(v) for v in p]


def point_from_list(vals: Sequence) -> tuple:
    return tuple(decode_number(v) for v in vals)


def load_fixture(name: str) -> dict:
    """A bundled example by file stem, e.g. ``example21_841``."""
    text = resources.files("lexknap").joinpath(f"fixtures/{name}.json").read_text()
    return json.loads(text)


def fixture_names() -> tuple[str, ...]:
    root = resources.files("lexknap").joinpath("fixtures")
    return tuple(
        sorted(p.name[: -len(".json")] for p in root.iterdir() if p.name.endswith(".json"))
    )
