#!/usr/bin/env python3
"""Run the full pipeline on a selection of built-in rings and print a
compact taxonomy table.

Usage: python scripts/classify_builtins.py [--markdown] [--levels 1-8]
"""

import argparse
import time
from fractions import Fraction

from modinv.classify import classify_all
from modinv.commutant import commutant_basis, enumerate_invariants, twist_sparsity
from modinv.fusion import builtin_cyclic, builtin_so_level1, builtin_su2
from modinv.modular import compute_modular_data, display_charge
from modinv.report import build_report, render_markdown


def parse_levels(spec: str) -> list[int]:
    lo, _, hi = spec.partition("-")
    return list(range(int(lo), int(hi or lo) + 1))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--markdown", action="store_true", help="emit full markdown reports")
    ap.add_argument("--levels", default="1-16", help="su2 level range, e.g. 1-8")
    args = ap.parse_args()

    rings = [builtin_su2(k) for k in parse_levels(args.levels)]
    rings += [builtin_so_level1(16), builtin_so_level1(32)]
    rings += [builtin_cyclic(n, [Fraction(0)] * n) for n in (1, 2)]

    for ring in rings:
        t0 = time.perf_counter()
        md = compute_modular_data(ring)
        basis = commutant_basis(md, twist_sparsity(ring))
        pool = enumerate_invariants(md, basis)
        cls = classify_all(md, pool)
        dt = time.perf_counter() - t0
        if args.markdown:
            print(render_markdown(build_report(md, pool, cls)))
            continue
        kinds = ", ".join(f"{c.kind}(tr {c.Z.trace})" for c in cls)
        print(
            f"{ring.name:<14} n={ring.size:<3} c={display_charge(md)!s:<6} "
            f"kernel dim {basis.dimension:<3} invariants {len(pool):<3} "
            f"[{kinds}]  {dt:.2f}s"
        )


if __name__ == "__main__":
    main()
