"""Deterministic report assembly for the invariants and classify pipelines.

The machine format is a plain JSON-able dict; the human rendering is
markdown built from the same dict. Exact values appear in full (cyclotomic
serializations, "p/q" rationals) alongside 12-digit numeric shadows, so both
forms carry the complete result.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Optional, Sequence

from .classify import (
    Classification,
    in_rational_span,
    rational_span_dimension,
    span_relations,
)
from .commutant import CouplingMatrix
from .cyclo import Cyclotomic
from .modular import ModularData, display_charge

NUMERIC_DIGITS = 12


def fmt_complex(x: complex) -> str:
    return f"{x.real:.{NUMERIC_DIGITS}g}{x.imag:+.{NUMERIC_DIGITS}g}j"


def fmt_fraction(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)


def _exact_entry(v: Cyclotomic) -> dict:
    return {"exact": v.to_json(), "text": repr(v), "numeric": fmt_complex(v.embed())}


def modular_summary(md: ModularData) -> dict:
    out = {
        "exact": md.exact,
        "degenerates": sorted(md.degenerates),
        "nondegenerate": md.nondegenerate,
        "central_charge": fmt_fraction(display_charge(md)) if md.c is not None else None,
    }
    if md.exact:
        out["z"] = _exact_entry(md.z)
        out["w"] = _exact_entry(md.w)
    if md.S_numeric is not None:
        out["S_numeric"] = [[fmt_complex(x) for x in row] for row in md.S_numeric]
    if md.T_numeric is not None:
        out["T_numeric"] = [[fmt_complex(x) for x in row] for row in md.T_numeric]
    return out


def invariant_summary(Z: CouplingMatrix) -> dict:
    return {
        "matrix": [list(row) for row in Z.Z],
        "trace": Z.trace,
        "vacuum_column": list(Z.vacuum_column),
        "vacuum_row": list(Z.vacuum_row),
        "vacuum_symmetric": Z.vacuum_symmetric,
        "verified": Z.verified,
        "exact": Z.exact,
    }


def span_summary(pool: Sequence[CouplingMatrix]) -> dict:
    """Rational span of the invariant list: dimension, the integer relation
    basis, and for each asymmetric invariant whether it lies in the span of
    the symmetric ones."""
    sym = [Z for Z in pool if Z.vacuum_symmetric]
    asym = {
        i: in_rational_span(Z, sym)
        for i, Z in enumerate(pool)
        if not Z.vacuum_symmetric
    }
    return {
        "count": len(pool),
        "span_dimension": rational_span_dimension(pool) if pool else 0,
        "relations": [list(r) for r in span_relations(pool)] if pool else [],
        "asymmetric_in_symmetric_span": {str(k): v for k, v in sorted(asym.items())},
    }


def classification_summary(cls: Classification) -> dict:
    out = {
        "index": cls.index,
        "kind": cls.kind,
        "type_two": cls.type_two,
        "vacuum_symmetric": cls.vacuum_symmetric,
        "trace": cls.Z.trace,
        "matrix": [list(row) for row in cls.Z.Z],
        "global_indices": {
            "w": _exact_entry(cls.indices.w),
            "w_plus": _exact_entry(cls.indices.w_plus),
            "w_alpha": _exact_entry(cls.indices.w_alpha),
            "w_zero": _exact_entry(cls.indices.w_zero),
        },
        "factorizations": [
            {
                "block_count": b.block_count,
                "B": [list(row) for row in b.B],
                "block_twists": [fmt_fraction(h) for h in b.block_twists],
                "block_dims": [_exact_entry(d) for d in b.block_dims],
            }
            for b in cls.factorizations
        ],
        "parent_plus": cls.parent_plus,
        "parent_minus": cls.parent_minus,
        "bijection": list(cls.bijection) if cls.bijection is not None else None,
        "bijection_count": cls.bijection_count,
        "automorphism": list(cls.automorphism) if cls.automorphism is not None else None,
        "automorphism_preserves_extended": cls.automorphism_preserves_extended,
        "extended_error": cls.extended_error,
        "branching_failures": cls.branching_failures,
        "notes": list(cls.notes),
    }
    if cls.extended is not None:
        out["extended"] = {
            "Yext": [[_exact_entry(v) for v in row] for row in cls.extended.Yext],
            "twists": [fmt_fraction(h) for h in cls.extended.Text_twists],
            "z0": _exact_entry(cls.extended.z0),
            "consistent": cls.extended.consistent,
            "failures": list(cls.extended.failures),
        }
    else:
        out["extended"] = None
    return out


def build_report(
    md: ModularData,
    pool: Sequence[CouplingMatrix],
    classifications: Optional[Sequence[Classification]] = None,
    budget_exhausted: bool = False,
) -> dict:
    ring = md.ring
    report = {
        "ring": {
            "name": ring.name,
            "size": ring.size,
            "labels": list(ring.names),
            "conductor": ring.conductor,
            "exact_dims": ring.dims is not None,
        },
        "modular": modular_summary(md),
        "invariants": [invariant_summary(Z) for Z in pool],
        "span": span_summary(pool),
        "budget_exhausted": budget_exhausted,
    }
    if budget_exhausted:
        report["warning"] = "node budget exhausted; invariant list may be incomplete"
    if classifications is not None:
        report["classifications"] = [classification_summary(c) for c in classifications]
    return report


def render_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def render_markdown(report: dict) -> str:
    lines: list[str] = []
    r = report["ring"]
    lines.append(f"# Modular invariants for {r['name'] or 'ring'}")
    lines.append("")
    lines.append(f"- labels: {', '.join(r['labels'])} ({r['size']} sectors)")
    lines.append(f"- global conductor: {r['conductor']}")
    lines.append(f"- exact dims: {r['exact_dims']}")
    m = report["modular"]
    lines.append(f"- central charge (mod 8 rep or hint): {m['central_charge']}")
    lines.append(f"- degenerate labels: {m['degenerates']} (nondegenerate: {m['nondegenerate']})")
    if "z" in m:
        lines.append(f"- Gauss sum z = {m['z']['text']} = {m['z']['numeric']}")
        lines.append(f"- global index w = {m['w']['text']}")
    if report.get("warning"):
        lines.append("")
        lines.append(f"**WARNING: {report['warning']}**")
    lines.append("")
    lines.append(f"## Invariants ({len(report['invariants'])})")
    for i, inv in enumerate(report["invariants"]):
        lines.append("")
        lines.append(f"### Invariant {i} (trace {inv['trace']})")
        lines.append("")
        for row in inv["matrix"]:
            lines.append("    " + "  ".join(str(v) for v in row))
        lines.append("")
        lines.append(
            f"- vacuum column {inv['vacuum_column']}, row {inv['vacuum_row']}, "
            f"symmetric: {inv['vacuum_symmetric']}"
        )
        lines.append(f"- exactly verified: {inv['verified']}")
    sp = report["span"]
    lines.append("")
    lines.append("## Rational span")
    lines.append("")
    lines.append(f"- span dimension: {sp['span_dimension']} over {sp['count']} invariants")
    for rel in sp["relations"]:
        lines.append(f"- relation: {rel} (coefficients over the invariant list)")
    for k, v in sp["asymmetric_in_symmetric_span"].items():
        lines.append(f"- invariant {k} in rational span of symmetric invariants: {v}")
    for cls in report.get("classifications", []):
        lines.append("")
        lines.append(f"## Classification of invariant {cls['index']}: {cls['kind']}")
        lines.append("")
        lines.append(f"- trace: {cls['trace']}; vacuum symmetric: {cls['vacuum_symmetric']}")
        gi = cls["global_indices"]
        lines.append(
            "- global indices: w = {}, w+ = {}, w_alpha = {}, w0 = {}".format(
                gi["w"]["text"], gi["w_plus"]["text"], gi["w_alpha"]["text"], gi["w_zero"]["text"]
            )
        )
        lines.append(f"- parents (plus side): {cls['parent_plus']}; (minus side): {cls['parent_minus']}")
        if cls["bijection"] is not None:
            lines.append(
                f"- block bijection: {cls['bijection']} ({cls['bijection_count']} total)"
            )
        if cls["automorphism"] is not None:
            lines.append(
                f"- block automorphism: {cls['automorphism']} "
                f"(preserves extended data: {cls['automorphism_preserves_extended']})"
            )
        for f in cls["factorizations"]:
            lines.append(f"- factorization into {f['block_count']} blocks:")
            for tau, row in enumerate(f["B"]):
                lines.append(
                    f"    block {tau}: b = {row}, twist {f['block_twists'][tau]}, "
                    f"dim {f['block_dims'][tau]['text']}"
                )
        ext = cls["extended"]
        if ext is not None:
            lines.append(
                f"- extended data: z0 = {ext['z0']['text']}, twists {ext['twists']}, "
                f"consistent: {ext['consistent']}"
            )
            for row in ext["Yext"]:
                lines.append("    Yext: " + "  ".join(v["text"] for v in row))
            for fail in ext["failures"]:
                lines.append(f"    failure: {fail}")
        if cls["extended_error"]:
            lines.append(f"- extended data unavailable: {cls['extended_error']}")
            lines.append(f"- branching identities checked, failures: {cls['branching_failures']}")
        for note in cls["notes"]:
            lines.append(f"- note: {note}")
    lines.append("")
    return "\n".join(lines)
