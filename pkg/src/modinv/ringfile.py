"""JSON ring-file format: serialization and parsing of fusion-ring data.

Exact fields cross the boundary as strings ("p/q" rationals) or structured
cyclotomic serializations; no decimals are accepted for exact data. The
fusion tensor is stored sparsely as [l, m, n, multiplicity] quadruples.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Optional, Union

from .cyclo import Cyclotomic
from .fusion import FusionRing, make_ring, validate


class RingFileError(ValueError):
    """Malformed or inconsistent ring file."""


def ring_to_json(ring: FusionRing) -> dict:
    n = ring.size
    quads = [
        [l, m, nu, ring.N(l, m, nu)]
        for l in range(n)
        for m in range(n)
        for nu in range(n)
        if ring.N(l, m, nu)
    ]
    data = {
        "name": ring.name,
        "labels": list(ring.names),
        "fusion": quads,
        "dual": list(ring.dual),
        "twists": [_format_fraction(h) for h in ring.twists],
        "dims": [d.to_json() for d in ring.dims] if ring.dims is not None else "auto",
    }
    if ring.central_charge_hint is not None:
        data["central_charge"] = _format_fraction(ring.central_charge_hint)
    return data


def ring_from_json(data: dict) -> FusionRing:
    """Parse a ring file dict; structural errors raise RingFileError naming
    the offending field. Axioms are not checked here (see load_ring)."""
    try:
        labels = [str(s) for s in data["labels"]]
    except (KeyError, TypeError) as exc:
        raise RingFileError(f"missing or malformed 'labels': {exc}")
    n = len(labels)
    if n == 0:
        raise RingFileError("'labels' is empty")
    fusion = [[[0] * n for _ in range(n)] for _ in range(n)]
    for q, quad in enumerate(data.get("fusion", [])):
        if not (isinstance(quad, (list, tuple)) and len(quad) == 4):
            raise RingFileError(f"fusion entry {q} is not a quadruple")
        l, m, nu, mult = quad
        for v, nm in ((l, "l"), (m, "m"), (nu, "n")):
            if not isinstance(v, int) or not 0 <= v < n:
                raise RingFileError(f"fusion entry {q}: index {nm}={v} out of range")
        if not isinstance(mult, int) or mult < 0:
            raise RingFileError(f"fusion entry {q}: multiplicity {mult} invalid")
        fusion[l][m][nu] = mult
    dual = data.get("dual")
    if not (isinstance(dual, list) and len(dual) == n and all(isinstance(x, int) for x in dual)):
        raise RingFileError(f"'dual' must be a list of {n} integers")
    twists_raw = data.get("twists")
    if not (isinstance(twists_raw, list) and len(twists_raw) == n):
        raise RingFileError(f"'twists' must be a list of {n} rational strings")
    twists = [_parse_fraction(s, f"twists[{i}]") for i, s in enumerate(twists_raw)]
    dims_raw = data.get("dims", "auto")
    dims: Optional[list[Cyclotomic]]
    if dims_raw == "auto":
        dims = None
    elif isinstance(dims_raw, list) and len(dims_raw) == n:
        try:
            dims = [Cyclotomic.from_json(d) for d in dims_raw]
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise RingFileError(f"malformed 'dims': {exc}")
    else:
        raise RingFileError(f"'dims' must be \"auto\" or a list of {n} cyclotomic values")
    hint = None
    if "central_charge" in data:
        hint = _parse_fraction(data["central_charge"], "central_charge")
    return make_ring(
        names=labels,
        fusion=fusion,
        dual=dual,
        twists=twists,
        dims=dims,
        name=str(data.get("name", "")),
        central_charge_hint=hint,
    )


def load_ring(path: str, check_axioms: bool = True) -> FusionRing:
    """Load and parse a ring file; with check_axioms, reject rings that fail
    validation, quoting the report."""
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise RingFileError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}")
    ring = ring_from_json(data)
    if check_axioms:
        report = validate(ring)
        if report:
            raise RingFileError(f"{path}: ring fails validation: " + "; ".join(report))
    return ring


def dump_ring(ring: FusionRing) -> str:
    return json.dumps(ring_to_json(ring), indent=2, sort_keys=True)


def _format_fraction(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def _parse_fraction(s: Union[str, int], where: str) -> Fraction:
    if isinstance(s, int):
        return Fraction(s)
    if not isinstance(s, str):
        raise RingFileError(f"{where}: expected a rational string, got {s!r}")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise RingFileError(f"{where}: cannot parse rational {s!r}")
