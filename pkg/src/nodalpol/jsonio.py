"""JSON schemas for curves, polarizations, sheaf data and polytopes.

Rationals travel as strings ``"p/q"`` with positive denominator and
``gcd(p, q) = 1`` after normalization; integers drop the denominator.
Serialization is canonical (sorted keys, fixed separators), so parsing and
re-serializing any accepted document is idempotent.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from pathlib import Path
from typing import Any

from .curve import CurveGraph
from .errors import SchemaError
from .polarization import Polarization, StabilityPolytope
from .sheafdata import SheafDatum

_RATIONAL_RE = re.compile(r"^(-?\d+)(?:/(-?\d+))?$")


def parse_rational(text: object) -> Fraction:
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise SchemaError(f"expected a rational string, got {text!r}")
    m = _RATIONAL_RE.match(text.strip())
    if not m:
        raise SchemaError(f"malformed rational {text!r}; use \"p/q\" or \"p\"")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den <= 0:
        raise SchemaError(f"rational {text!r} needs a positive denominator")
    return Fraction(num, den)


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def canonical_dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from None


# -- curves ---------------------------------------------------------------


def curve_from_obj(obj: Any) -> CurveGraph:
    if not isinstance(obj, dict):
        raise SchemaError("curve document must be a JSON object")
    for key in ("vertices", "edges"):
        if key not in obj:
            raise SchemaError(f"curve document is missing \"{key}\"")
        if not isinstance(obj[key], list):
            raise SchemaError(f"\"{key}\" must be a list")
    vertices = []
    for pos, item in enumerate(obj["vertices"]):
        if not isinstance(item, dict) or "id" not in item or "genus" not in item:
            raise SchemaError(
                f"vertices[{pos}] must be an object with \"id\" and \"genus\""
            )
        if not isinstance(item["id"], int) or not isinstance(item["genus"], int):
            raise SchemaError(f"vertices[{pos}]: id and genus must be integers")
        vertices.append((item["id"], item["genus"]))
    edges = []
    for pos, item in enumerate(obj["edges"]):
        if not isinstance(item, dict) or "id" not in item or "ends" not in item:
            raise SchemaError(
                f"edges[{pos}] must be an object with \"id\" and \"ends\""
            )
        ends = item["ends"]
        if (
            not isinstance(ends, list)
            or len(ends) != 2
            or not all(isinstance(x, int) for x in ends)
        ):
            raise SchemaError(f"edges[{pos}].ends must be a pair of vertex ids")
        if not isinstance(item["id"], int):
            raise SchemaError(f"edges[{pos}].id must be an integer")
        edges.append((item["id"], (ends[0], ends[1])))
    return CurveGraph(vertices, edges)


def curve_to_obj(curve: CurveGraph) -> dict:
    return {
        "vertices": [
            {"id": vid, "genus": g}
            for vid, g in zip(curve.vertex_ids, curve.genera)
        ],
        "edges": [
            {"id": eid, "ends": [min(a, b), max(a, b)]}
            for eid, (a, b) in zip(curve.edge_ids, curve.edge_ends)
        ],
    }


# -- polarizations --------------------------------------------------------


def polarization_from_obj(obj: Any) -> Polarization:
    if not isinstance(obj, dict) or "weights" not in obj:
        raise SchemaError("polarization document must be an object with \"weights\"")
    if not isinstance(obj["weights"], list) or not obj["weights"]:
        raise SchemaError("\"weights\" must be a non-empty list")
    return Polarization(tuple(parse_rational(w) for w in obj["weights"]))


def polarization_to_obj(w: Polarization) -> dict:
    return {"weights": [format_rational(x) for x in w.weights]}


# -- sheaf data -----------------------------------------------------------


def sheaf_from_obj(curve: CurveGraph, obj: Any) -> SheafDatum:
    if not isinstance(obj, dict):
        raise SchemaError("sheaf document must be a JSON object")
    for key, size in (
        ("ranks", curve.gamma),
        ("degrees", curve.gamma),
        ("stalk_free", curve.delta),
    ):
        if key not in obj:
            raise SchemaError(f"sheaf document is missing \"{key}\"")
        val = obj[key]
        if not isinstance(val, list) or not all(isinstance(x, int) for x in val):
            raise SchemaError(f"\"{key}\" must be a list of integers")
        if len(val) != size:
            raise SchemaError(f"\"{key}\" must have {size} entries, got {len(val)}")
    return SheafDatum(
        ranks=tuple(obj["ranks"]),
        degrees=tuple(obj["degrees"]),
        stalk_free=tuple(obj["stalk_free"]),
    )


def sheaf_to_obj(e: SheafDatum) -> dict:
    return {
        "ranks": list(e.ranks),
        "degrees": list(e.degrees),
        "stalk_free": list(e.stalk_free),
    }


# -- polytopes ------------------------------------------------------------


def polytope_to_obj(p: StabilityPolytope) -> dict:
    return {
        "windows": [
            {
                "B": list(win.subcurve.member_ids),
                "lower": format_rational(win.lower),
                "upper": format_rational(win.upper),
            }
            for win in p.windows
        ],
        "witness": None if p.witness is None else polarization_to_obj(p.witness),
    }


# -- round trips ----------------------------------------------------------


def round_trip(text: str) -> str:
    """Parse a curve/polarization/sheaf document and re-serialize it
    canonically; applying this twice equals applying it once."""
    obj = _loads(text)
    if isinstance(obj, dict) and "vertices" in obj:
        return canonical_dumps(curve_to_obj(curve_from_obj(obj)))
    if isinstance(obj, dict) and "weights" in obj:
        return canonical_dumps(polarization_to_obj(polarization_from_obj(obj)))
    if isinstance(obj, dict) and "ranks" in obj:
        # Structural normalization only; curve-dependent bounds are not
        # checkable without the curve.
        for key in ("ranks", "degrees", "stalk_free"):
            if key not in obj or not isinstance(obj[key], list):
                raise SchemaError(f"sheaf document is missing \"{key}\"")
        return canonical_dumps(
            {k: obj[k] for k in ("ranks", "degrees", "stalk_free")}
        )
    raise SchemaError("unrecognized document; expected a curve, polarization or sheaf")


def load_curve(path: str | Path) -> CurveGraph:
    return curve_from_obj(_loads(Path(path).read_text(encoding="utf-8")))


def load_polarization(path: str | Path) -> Polarization:
    return polarization_from_obj(_loads(Path(path).read_text(encoding="utf-8")))


def load_sheaf(curve: CurveGraph, path: str | Path) -> SheafDatum:
    return sheaf_from_obj(curve, _loads(Path(path).read_text(encoding="utf-8")))
