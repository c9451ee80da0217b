"""Exact commutant {Z : YZ = ZY, Omega Z = Z Omega} and exhaustive
enumeration of its non-negative integer points with Z[0,0] = 1.

The T-commutation constraint is imposed structurally as a sparsity pattern
(entries vanish off equal twists); the Y-commutation constraint is expanded
coordinate-wise in the cyclotomic power basis, giving an integer homogeneous
linear system whose kernel is computed by fraction-free elimination. The
integer points are then enumerated by depth-first search over the kernel's
pivot entries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence, Union

import numpy as np

from .cyclo import csum, phi
from .fusion import FusionRing, dims_numeric
from .modular import ModularData, TOL


class SearchBudgetExceeded(RuntimeError):
    def __init__(self, budget: int, partial: list["CouplingMatrix"]):
        super().__init__(
            f"enumeration exceeded the node budget of {budget}; "
            f"{len(partial)} invariants found before the cutoff"
        )
        self.budget = budget
        self.partial = partial


class InvariantRejected(ValueError):
    """A candidate matrix violates one of the coupling-matrix constraints."""


@dataclass(frozen=True)
class SparsityPattern:
    allowed: frozenset[tuple[int, int]]

    def __contains__(self, pair: tuple[int, int]) -> bool:
        return pair in self.allowed


@dataclass
class CommutantBasis:
    positions: list[tuple[int, int]]  # allowed entries, row-major
    basis: list[list[Fraction]]  # reduced echelon rows over the positions
    pivot_positions: list[tuple[int, int]]
    pivot_indices: list[int]  # indices into positions
    exact: bool

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def matrix(self, i: int, n: int) -> list[list[Fraction]]:
        out = [[Fraction(0)] * n for _ in range(n)]
        for (l, m), v in zip(self.positions, self.basis[i]):
            out[l][m] = v
        return out


@dataclass(frozen=True)
class CouplingMatrix:
    Z: tuple[tuple[int, ...], ...]
    verified: bool
    exact: bool

    @property
    def size(self) -> int:
        return len(self.Z)

    @property
    def trace(self) -> int:
        return sum(self.Z[l][l] for l in range(self.size))

    @property
    def vacuum_column(self) -> tuple[int, ...]:
        return tuple(row[0] for row in self.Z)

    @property
    def vacuum_row(self) -> tuple[int, ...]:
        return self.Z[0]

    @property
    def vacuum_symmetric(self) -> bool:
        return self.vacuum_column == self.vacuum_row

    def is_identity(self) -> bool:
        return all(
            self.Z[l][m] == (1 if l == m else 0)
            for l in range(self.size)
            for m in range(self.size)
        )

    def is_permutation(self) -> bool:
        n = self.size
        return all(sum(self.Z[l]) == 1 for l in range(n)) and all(
            sum(self.Z[l][m] for l in range(n)) == 1 for m in range(n)
        )

    def transpose(self) -> "CouplingMatrix":
        n = self.size
        return CouplingMatrix(
            Z=tuple(tuple(self.Z[l][m] for l in range(n)) for m in range(n)),
            verified=self.verified,
            exact=self.exact,
        )


def twist_sparsity(ring: FusionRing) -> SparsityPattern:
    """Allowed entries (l, m) with h_l = h_m mod 1 (T-commutation)."""
    n = ring.size
    h = ring.twists
    return SparsityPattern(
        allowed=frozenset((l, m) for l in range(n) for m in range(n) if h[l] == h[m])
    )


# -- exact kernel ------------------------------------------------------------


def commutant_basis(md: ModularData, pattern: SparsityPattern) -> CommutantBasis:
    """Rational kernel of Z -> YZ - ZY restricted to the sparsity pattern,
    as a reduced-echelon basis with respect to row-major entry order."""
    n = md.size
    positions = sorted(pattern.allowed)
    index = {p: j for j, p in enumerate(positions)}
    if not md.exact:
        return _commutant_basis_numeric(md, positions)

    M = md.ring.conductor
    deg = phi(M)
    Ycoords: list[list[dict[int, Fraction]]] = [
        [md.Y[l][m].to_conductor(M).coeffs for m in range(n)] for l in range(n)
    ]

    elim = _IntRowEliminator(len(positions))
    for l in range(n):
        for m in range(n):
            # (YZ - ZY)_{l,m} = sum_{(a,b)} (Y[l,a] delta_{b,m} - delta_{a,l} Y[b,m]) Z_{a,b}
            per_coord: dict[int, dict[int, Fraction]] = {}
            for a in range(n):
                j = index.get((a, m))
                if j is not None:
                    for e, c in Ycoords[l][a].items():
                        per_coord.setdefault(e, {})
                        per_coord[e][j] = per_coord[e].get(j, Fraction(0)) + c
                j = index.get((l, a))
                if j is not None:
                    for e, c in Ycoords[a][m].items():
                        per_coord.setdefault(e, {})
                        per_coord[e][j] = per_coord[e].get(j, Fraction(0)) - c
            for row in per_coord.values():
                elim.add_sparse(row)

    kernel = elim.kernel_rref()
    basis = [list(v) for v in kernel]
    pivot_indices = [_leading_index(v) for v in basis]
    cb = CommutantBasis(
        positions=positions,
        basis=basis,
        pivot_positions=[positions[i] for i in pivot_indices],
        pivot_indices=pivot_indices,
        exact=True,
    )
    _reverify_basis(md, cb)
    return cb


def _leading_index(v: Sequence[Fraction]) -> int:
    for i, x in enumerate(v):
        if x:
            return i
    raise AssertionError("zero kernel basis vector")


def _reverify_basis(md: ModularData, cb: CommutantBasis) -> None:
    n = md.size
    for i in range(cb.dimension):
        B = cb.matrix(i, n)
        for l in range(n):
            for m in range(n):
                lhs = csum(md.Y[l][a] * B[a][m] for a in range(n) if B[a][m])
                rhs = csum(md.Y[a][m] * B[l][a] for a in range(n) if B[l][a])
                if lhs != rhs:
                    raise AssertionError(
                        f"internal error: commutant basis element {i} fails YZ=ZY at ({l},{m})"
                    )


class _IntRowEliminator:
    """Incremental fraction-free row reduction over the integers.

    Maintains a row-echelon set of integer rows (gcd-normalized, positive
    leading entry); the rational kernel is extracted at the end.
    """

    def __init__(self, width: int):
        self.width = width
        self.rows: dict[int, list[int]] = {}  # pivot column -> row

    def add_sparse(self, entries: dict[int, Fraction]) -> None:
        if not entries:
            return
        den = 1
        for c in entries.values():
            den = den * c.denominator // gcd(den, c.denominator)
        row = [0] * self.width
        for j, c in entries.items():
            row[j] = int(c * den)
        self.add(row)

    def add(self, row: list[int]) -> None:
        for col in range(self.width):
            a = row[col]
            if a == 0:
                continue
            piv = self.rows.get(col)
            if piv is None:
                g = 0
                for v in row:
                    g = gcd(g, v)
                row = [v // g for v in row]
                if row[col] < 0:
                    row = [-v for v in row]
                self.rows[col] = row
                return
            p = piv[col]
            g = gcd(a, p)
            fa, fp = p // g, a // g
            row = [fa * rv - fp * pv for rv, pv in zip(row, piv)]

    def kernel_rref(self) -> list[list[Fraction]]:
        """Reduced-echelon basis of the kernel, pivots strictly increasing."""
        # Back-substitute the echelon rows into RREF over Q.
        cols = sorted(self.rows)
        rref: dict[int, list[Fraction]] = {}
        for col in sorted(cols, reverse=True):
            row = [Fraction(v) for v in self.rows[col]]
            for c2 in cols:
                if c2 > col and row[c2]:
                    f = row[c2]
                    row = [v - f * rv for v, rv in zip(row, rref[c2])]
            p = row[col]
            rref[col] = [v / p for v in row]
        free = [j for j in range(self.width) if j not in rref]
        kernel = []
        for f in free:
            v = [Fraction(0)] * self.width
            v[f] = Fraction(1)
            for col, row in rref.items():
                v[col] = -row[f]
            kernel.append(v)
        return _rref_rows(kernel)


def _rref_rows(rows: list[list[Fraction]]) -> list[list[Fraction]]:
    rows = [list(r) for r in rows]
    width = len(rows[0]) if rows else 0
    out: list[list[Fraction]] = []
    pivots: list[int] = []
    for col in range(width):
        sel = None
        for i, r in enumerate(rows):
            if r[col]:
                sel = i
                break
        if sel is None:
            continue
        row = rows.pop(sel)
        row = [v / row[col] for v in row]
        for r in rows:
            if r[col]:
                f = r[col]
                for j in range(width):
                    r[j] -= f * row[j]
        for r in out:
            if r[col]:
                f = r[col]
                for j in range(width):
                    r[j] -= f * row[j]
        out.append(row)
        pivots.append(col)
        if not rows:
            break
    order = sorted(range(len(out)), key=lambda i: pivots[i])
    return [out[i] for i in order]


def _commutant_basis_numeric(md: ModularData, positions: list[tuple[int, int]]) -> CommutantBasis:
    """Float kernel with rational reconstruction; flagged exact-unverified."""
    n = md.size
    rows = []
    for l in range(n):
        for m in range(n):
            row = np.zeros(len(positions), dtype=complex)
            for j, (a, b) in enumerate(positions):
                if b == m:
                    row[j] += md.Y_numeric[l][a]
                if a == l:
                    row[j] -= md.Y_numeric[b][m]
            rows.append(row)
    A = np.array(rows)
    _, s, vh = np.linalg.svd(A)
    rank = int(np.sum(s > 1e-9 * max(1.0, s[0] if len(s) else 1.0)))
    ns = vh[rank:].conj()
    # Numeric RREF over the row-major position order, then rationalize.
    basis_f = _numeric_rref(ns.real if np.allclose(ns.imag, 0, atol=1e-9) else ns)
    basis = [[Fraction(float(x.real)).limit_denominator(10**6) for x in row] for row in basis_f]
    pivot_indices = [_leading_index(row) for row in basis]
    return CommutantBasis(
        positions=positions,
        basis=basis,
        pivot_positions=[positions[i] for i in pivot_indices],
        pivot_indices=pivot_indices,
        exact=False,
    )


def _numeric_rref(rows: np.ndarray, tol: float = 1e-8) -> np.ndarray:
    rows = np.array(rows, dtype=complex)
    nr, nc = rows.shape
    r = 0
    for col in range(nc):
        if r >= nr:
            break
        sel = r + int(np.argmax(np.abs(rows[r:, col])))
        if abs(rows[sel, col]) < tol:
            rows[:, col][np.abs(rows[:, col]) < tol] = 0
            continue
        rows[[r, sel]] = rows[[sel, r]]
        rows[r] = rows[r] / rows[r, col]
        for i in range(nr):
            if i != r and abs(rows[i, col]) > 0:
                rows[i] = rows[i] - rows[i, col] * rows[r]
        r += 1
    rows[np.abs(rows) < tol] = 0
    return rows[:r]


# -- enumeration -------------------------------------------------------------


def enumerate_invariants(
    md: ModularData,
    basis: CommutantBasis,
    bound_scale: Union[Fraction, float, int] = 1,
    node_budget: Optional[int] = None,
    workers: int = 1,
) -> list[CouplingMatrix]:
    """All non-negative integer matrices in the commutant with Z[0,0] = 1.

    Depth-first search over the kernel's pivot entries; every entry (pivot or
    completed) is bounded by ceil(bound_scale * d_l * d_m). Entries finalized
    along the way must be non-negative integers within their bound, and
    partial dimension-weighted column sums
    are pruned against the targets fixed by row 0 (a consequence of YZ = ZY
    applied to the vacuum row). Output is canonically sorted and exactly
    re-verified.
    """
    if node_budget is None:
        node_budget = 10_000_000
    n = md.size
    if basis.dimension == 0 or basis.positions[0] != (0, 0):
        return []
    if basis.pivot_indices[0] != 0:
        return []  # every kernel element vanishes at (0,0); Z[0,0]=1 unreachable

    d = dims_numeric(md.ring)
    positions = basis.positions
    npos = len(positions)
    scale = float(bound_scale)
    bounds = [max(0, math.ceil(scale * d[l] * d[m] - 1e-9)) for (l, m) in positions]
    pivots = basis.pivot_indices
    bvecs = basis.basis
    k = len(pivots)
    seg_end = [pivots[i + 1] if i + 1 < k else npos for i in range(k)]
    r0_len = sum(1 for (l, _m) in positions if l == 0)
    Ynum = md.Y_numeric

    results: list[tuple[tuple[int, ...], ...]] = []
    nodes = 0
    budget_hit = False

    def targets_from_row0(acc: list[Fraction]) -> Optional[list[float]]:
        row0 = {positions[j][1]: float(acc[j]) for j in range(r0_len)}
        t = []
        for m in range(n):
            val = sum(z * Ynum[a][m] for a, z in row0.items() if z)
            if abs(val.imag) > 1e-6:
                return None
            t.append(val.real)
        return t

    def dfs(
        i: int,
        acc: list[Fraction],
        col_sum: list[float],
        targets: Optional[list[float]],
        depth1_filter: Optional[frozenset[int]],
    ):
        nonlocal nodes, budget_hit
        if budget_hit:
            return
        lo, hi = (1, 1) if i == 0 else (0, bounds[pivots[i]])
        vec = bvecs[i]
        for v in range(lo, hi + 1):
            if i == 1 and depth1_filter is not None and v not in depth1_filter:
                continue
            nodes += 1
            if nodes > node_budget:
                budget_hit = True
                return
            new_acc = [a + v * b for a, b in zip(acc, vec)] if v else list(acc)
            new_cols = list(col_sum)
            new_targets = targets
            ok = True
            for j in range(pivots[i], seg_end[i]):
                x = new_acc[j]
                if x < 0 or x.denominator != 1 or x > bounds[j]:
                    ok = False
                    break
                l, m = positions[j]
                if x:
                    new_cols[m] += d[l] * float(x)
                if new_targets is not None and new_cols[m] > new_targets[m] + 1e-6 * (
                    1 + abs(new_targets[m])
                ):
                    ok = False
                    break
                if j == r0_len - 1:
                    new_targets = targets_from_row0(new_acc)
                    if new_targets is None:
                        ok = False
                        break
                    if any(
                        new_cols[mm] > new_targets[mm] + 1e-6 * (1 + abs(new_targets[mm]))
                        for mm in range(n)
                    ):
                        ok = False
                        break
            if not ok:
                continue
            if i + 1 < k:
                dfs(i + 1, new_acc, new_cols, new_targets, depth1_filter)
            else:
                Z = [[0] * n for _ in range(n)]
                for j, (l, m) in enumerate(positions):
                    Z[l][m] = int(new_acc[j])
                results.append(tuple(tuple(row) for row in Z))

    # Deterministic worker split at the first unfixed pivot: partition its
    # value range round-robin; the merged output is canonically sorted, so
    # the report is byte-identical for any worker count.
    if workers <= 1 or k < 2:
        dfs(0, [Fraction(0)] * npos, [0.0] * n, None, None)
    else:
        hi1 = bounds[pivots[1]]
        for wk in range(workers):
            part = frozenset(v for v in range(0, hi1 + 1) if v % workers == wk)
            if part:
                dfs(0, [Fraction(0)] * npos, [0.0] * n, None, part)

    unique = sorted(set(results))
    out = [verify_invariant(md, Z) for Z in unique]
    if budget_hit:
        raise SearchBudgetExceeded(node_budget, out)
    return out


def verify_invariant(md: ModularData, Z: Sequence[Sequence[int]]) -> CouplingMatrix:
    """Exactly verify a candidate coupling matrix; raises InvariantRejected
    naming the first failing constraint."""
    n = md.size
    if len(Z) != n or any(len(row) != n for row in Z):
        raise InvariantRejected(f"expected a {n}x{n} matrix")
    for l in range(n):
        for m in range(n):
            v = Z[l][m]
            if not isinstance(v, int) or v < 0:
                raise InvariantRejected(f"entry Z[{l},{m}] = {v} is not a non-negative integer")
    if Z[0][0] != 1:
        raise InvariantRejected(f"Z[0,0] = {Z[0][0]}, must be 1")
    h = md.ring.twists
    for l in range(n):
        for m in range(n):
            if Z[l][m] and h[l] != h[m]:
                raise InvariantRejected(
                    f"Omega Z != Z Omega: Z[{l},{m}] != 0 but h[{l}] != h[{m}]"
                )
    frozen = tuple(tuple(int(v) for v in row) for row in Z)
    if md.exact:
        for l in range(n):
            for m in range(n):
                lhs = csum(md.Y[l][a] * frozen[a][m] for a in range(n) if frozen[a][m])
                rhs = csum(md.Y[a][m] * frozen[l][a] for a in range(n) if frozen[l][a])
                if lhs != rhs:
                    raise InvariantRejected(f"YZ != ZY at ({l},{m})")
        return CouplingMatrix(Z=frozen, verified=True, exact=True)
    Zf = np.array(frozen, dtype=float)
    if np.max(np.abs(md.Y_numeric @ Zf - Zf @ md.Y_numeric)) > TOL * max(
        1.0, float(np.max(np.abs(md.Y_numeric)))
    ):
        raise InvariantRejected("YZ != ZY (numeric)")
    return CouplingMatrix(Z=frozen, verified=False, exact=False)
