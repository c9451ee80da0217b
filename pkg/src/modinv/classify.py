"""Taxonomy of coupling matrices: block factorizations Z = B^T B, parent
pairs (Z+, Z-), block bijections, extended modular data and global indices.

Every identity used here is checked in exact cyclotomic arithmetic; nothing
is classified on numeric evidence alone. A matrix that fits none of the
recognized kinds is reported as unresolved rather than forced into one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

from .cyclo import Cyclotomic, csum, divide, root_of_unity
from .commutant import CouplingMatrix
from .modular import ModularData


class RankDeficientBranching(ValueError):
    """Branching rows are linearly dependent over Q."""


@dataclass
class BranchingData:
    block_count: int
    B: tuple[tuple[int, ...], ...]  # rows indexed by blocks, columns by labels
    block_twists: tuple[Fraction, ...]
    block_dims: tuple[Cyclotomic, ...]

    def row(self, tau: int) -> tuple[int, ...]:
        return self.B[tau]


@dataclass
class GlobalIndices:
    w: Cyclotomic
    w_plus: Cyclotomic
    w_alpha: Cyclotomic
    w_zero: Cyclotomic

    def check(self) -> list[str]:
        report = []
        if self.w_zero * self.w_alpha != self.w_plus * self.w_plus:
            report.append("w_zero * w_alpha != w_plus^2")
        vals = [self.w_zero, self.w_plus, self.w_alpha, self.w]
        names = ["w_zero", "w_plus", "w_alpha", "w"]
        nums = []
        for v, nm in zip(vals, names):
            if not v.is_real():
                report.append(f"{nm} is not real")
                return report
            nums.append(v.embed().real)
        if not (1 - 1e-9 <= nums[0] <= nums[1] <= nums[2] <= nums[3] + 1e-9):
            report.append("index chain 1 <= w_zero <= w_plus <= w_alpha <= w violated")
        return report


@dataclass
class ExtendedModularData:
    Yext: list[list[Cyclotomic]]
    Text_twists: tuple[Fraction, ...]
    z0: Cyclotomic
    consistent: bool
    failures: list[str] = field(default_factory=list)


@dataclass
class Classification:
    index: int
    Z: CouplingMatrix
    kind: str  # diagonal | permutation | type_I | type_II | heterotic | unresolved
    vacuum_symmetric: bool
    indices: GlobalIndices
    factorizations: list[BranchingData] = field(default_factory=list)
    parent_plus: list[int] = field(default_factory=list)  # pool indices
    parent_minus: list[int] = field(default_factory=list)
    bijection: Optional[tuple[int, ...]] = None
    bijection_count: int = 0
    automorphism: Optional[tuple[int, ...]] = None
    automorphism_preserves_extended: Optional[bool] = None
    extended: Optional[ExtendedModularData] = None
    extended_error: Optional[str] = None
    branching_failures: Optional[list[str]] = None
    notes: list[str] = field(default_factory=list)

    @property
    def type_two(self) -> bool:
        """Coinciding type I parents joined by a block automorphism; the
        permutation kind is the special case of a permutation matrix."""
        return self.kind in ("type_II", "permutation") and self.automorphism is not None


def vacuum_profile(Z: CouplingMatrix) -> tuple[tuple[int, ...], tuple[int, ...], bool]:
    col, row = Z.vacuum_column, Z.vacuum_row
    return col, row, col == row


def global_indices(md: ModularData, Z: CouplingMatrix) -> GlobalIndices:
    """w = sum d^2; w_plus = w / sum_l d_l Z_{l,0};
    w_alpha = w / sum over degenerate l of Z_{0,l} d_l; w_zero = w_plus^2 / w_alpha."""
    d = md.ring.dims
    n = md.size
    col_sum = csum(d[l] * Z.Z[l][0] for l in range(n) if Z.Z[l][0])
    deg_sum = csum(d[l] * Z.Z[0][l] for l in sorted(md.degenerates) if Z.Z[0][l])
    if col_sum.is_zero() or deg_sum.is_zero():
        raise AssertionError("internal error: zero denominator in global indices")
    w_plus = divide(md.w, col_sum)
    w_alpha = divide(md.w, deg_sum)
    w_zero = divide(w_plus * w_plus, w_alpha)
    return GlobalIndices(w=md.w, w_plus=w_plus, w_alpha=w_alpha, w_zero=w_zero)


def factorize_type_one(md: ModularData, Z: CouplingMatrix) -> list[BranchingData]:
    """All decompositions Z = B^T B over non-negative integers with
    b_{tau,0} = delta_{tau,0}.

    Block 0's row is forced to the vacuum column of Z. Remaining rows have a
    zero vacuum entry and are produced in non-increasing lexicographic order,
    which kills permutation duplicates. Empty list means not of this form.
    """
    n = md.size
    mat = Z.Z
    if any(mat[l][m] != mat[m][l] for l in range(n) for m in range(l + 1, n)):
        return []
    b0 = Z.vacuum_column
    resid = [[mat[l][m] - b0[l] * b0[m] for m in range(n)] for l in range(n)]
    if any(resid[l][m] < 0 for l in range(n) for m in range(n)):
        return []
    results: list[list[tuple[int, ...]]] = []
    top = tuple([0] + [max(0, _isqrt_floor(mat[l][l])) for l in range(1, n)])

    def candidate_rows(R, ceiling):
        """Rows b <= ceiling (lex) with b_0 = 0, b_l b_m <= R_{l,m}, b != 0."""
        out: list[tuple[int, ...]] = []
        row = [0] * n

        def extend(pos: int, tight: bool):
            if pos == n:
                if any(row):
                    out.append(tuple(row))
                return
            hi = _isqrt_floor(R[pos][pos])
            if tight:
                hi = min(hi, ceiling[pos])
            for v in range(hi, -1, -1):
                ok = all(v * row[j] <= R[pos][j] for j in range(1, pos) if row[j])
                if not ok:
                    continue
                row[pos] = v
                extend(pos + 1, tight and v == ceiling[pos])
                row[pos] = 0

        extend(1, True)
        return out  # already in decreasing lexicographic order

    def search(R, prev, rows):
        if all(R[l][l] == 0 for l in range(n)):
            if any(R[l][m] != 0 for l in range(n) for m in range(n)):
                return
            results.append(list(rows))
            return
        first = next(l for l in range(n) if R[l][l] > 0)
        for b in candidate_rows(R, prev):
            if b[first] == 0:
                # Rows are non-increasing, so label `first` can never be
                # covered once skipped at this depth.
                continue
            R2 = [[R[l][m] - b[l] * b[m] for m in range(n)] for l in range(n)]
            if any(R2[l][m] < 0 for l in range(n) for m in range(n)):
                continue
            rows.append(b)
            search(R2, b, rows)
            rows.pop()

    search(resid, top, [])
    return [_branching_from_rows(md, [b0] + rows) for rows in results]


def _isqrt_floor(x: int) -> int:
    return math.isqrt(x) if x >= 0 else -1


def _branching_from_rows(md: ModularData, rows: list[tuple[int, ...]]) -> BranchingData:
    n = md.size
    h = md.ring.twists
    d = md.ring.dims
    twists = []
    for tau, b in enumerate(rows):
        support = [l for l in range(n) if b[l]]
        vals = {h[l] for l in support}
        if len(vals) != 1:
            raise AssertionError(
                f"internal error: block {tau} mixes twists {sorted(vals)}"
            )
        twists.append(vals.pop())
    # d_tau = (w_plus / w) * sum_l b_{tau,l} d_l with w/w_plus = sum_l d_l b_{0,l}.
    chiral = csum(d[l] * rows[0][l] for l in range(n) if rows[0][l])
    dims = [
        divide(csum(d[l] * b[l] for l in range(n) if b[l]), chiral) for b in rows
    ]
    return BranchingData(
        block_count=len(rows),
        B=tuple(rows),
        block_twists=tuple(twists),
        block_dims=tuple(dims),
    )


def find_parents(
    md: ModularData, Z: CouplingMatrix, pool: Sequence[CouplingMatrix]
) -> tuple[list[int], list[int]]:
    """Pool indices of type I matrices matching Z's vacuum column (parents
    on the plus side) and vacuum row (minus side), in canonical pool order."""
    plus, minus = [], []
    for i, W in enumerate(pool):
        if not factorize_type_one(md, W):
            continue
        if W.vacuum_column == Z.vacuum_column:
            plus.append(i)
        if W.vacuum_column == Z.vacuum_row:
            minus.append(i)
    return plus, minus


def find_block_bijection(
    plus: BranchingData, minus: BranchingData, Z: CouplingMatrix
) -> Optional[tuple[tuple[int, ...], int]]:
    """First bijection theta (in lexicographic order) with
    Z_{l,m} = sum_tau bplus_{tau,l} bminus_{theta(tau),m}, plus the count of
    all solutions; None when block counts differ or no bijection exists.

    Candidates are pruned by matching block twists and exact block dims.
    """
    t = plus.block_count
    if minus.block_count != t:
        return None
    n = len(Z.Z)
    compatible = [
        [
            s
            for s in range(t)
            if plus.block_twists[tau] == minus.block_twists[s]
            and plus.block_dims[tau] == minus.block_dims[s]
        ]
        for tau in range(t)
    ]
    found: list[tuple[int, ...]] = []

    def matches(theta: tuple[int, ...]) -> bool:
        for l in range(n):
            for m in range(n):
                s = sum(plus.B[tau][l] * minus.B[theta[tau]][m] for tau in range(t))
                if s != Z.Z[l][m]:
                    return False
        return True

    def assign(tau: int, theta: list[int], used: set[int]):
        if tau == t:
            cand = tuple(theta)
            if matches(cand):
                found.append(cand)
            return
        for s in compatible[tau]:
            if s not in used:
                theta.append(s)
                used.add(s)
                assign(tau + 1, theta, used)
                used.discard(s)
                theta.pop()

    assign(0, [], set())
    if not found:
        return None
    found.sort()
    return found[0], len(found)


def extended_modular_data(
    md: ModularData, branching: BranchingData, indices: GlobalIndices
) -> ExtendedModularData:
    """Yext = (w_plus/w) (B Y B^T) (B B^T)^{-1}, exact over the cyclotomic
    field with a rational Gram inverse; consistency collects the exact
    residual checks."""
    t = branching.block_count
    n = md.size
    B = branching.B
    gram = [[sum(B[a][l] * B[b][l] for l in range(n)) for b in range(t)] for a in range(t)]
    ginv = _invert_rational(gram)
    if ginv is None:
        dep = _dependent_rows(gram)
        raise RankDeficientBranching(f"branching rows linearly dependent: rows {dep}")
    BY = [
        [csum(md.Y[l][m] * B[a][l] for l in range(n) if B[a][l]) for m in range(n)]
        for a in range(t)
    ]
    BYBt = [
        [csum(BY[a][l] * B[b][l] for l in range(n) if B[b][l]) for b in range(t)]
        for a in range(t)
    ]
    ratio = divide(indices.w_plus, md.w)
    Yext = [
        [ratio * csum(BYBt[a][k] * ginv[k][b] for k in range(t)) for b in range(t)]
        for a in range(t)
    ]
    failures: list[str] = []
    # (w/w_plus) Yext B = B Y, i.e. Yext B = ratio * (B Y).
    for a in range(t):
        for m in range(n):
            lhs = csum(Yext[a][b] * B[b][m] for b in range(t) if B[b][m])
            if lhs != ratio * BY[a][m]:
                failures.append(f"intertwining fails at block {a}, label {m}")
    for a in range(t):
        for b in range(a + 1, t):
            if Yext[a][b] != Yext[b][a]:
                failures.append(f"Yext not symmetric at ({a},{b})")
    for a in range(t):
        h_a = branching.block_twists[a]
        for l in range(n):
            if B[a][l] and md.ring.twists[l] != h_a:
                failures.append(f"twist intertwining fails at block {a}, label {l}")
    om = [root_of_unity(h) for h in branching.block_twists]
    z0 = csum(branching.block_dims[a] * branching.block_dims[a] * om[a] for a in range(t))
    if z0 != ratio * md.z:
        failures.append("z0 != (w_plus/w) z")
    if md.nondegenerate:
        for a in range(t):
            for b in range(t):
                s = csum(Yext[a][k] * Yext[b][k].conjugate() for k in range(t))
                want = indices.w_zero if a == b else None
                if want is None:
                    if not s.is_zero():
                        failures.append(f"Yext Yext^dagger not diagonal at ({a},{b})")
                elif s != want:
                    failures.append(f"(Yext Yext^dagger)[{a},{a}] != w_zero")
    return ExtendedModularData(
        Yext=Yext,
        Text_twists=branching.block_twists,
        z0=z0,
        consistent=not failures,
        failures=failures,
    )


def branching_checks(
    md: ModularData, branching: BranchingData, indices: GlobalIndices
) -> list[str]:
    """Exact identities that depend on the branching data alone, without the
    Gram inverse: block dims, twist intertwining, the extended Gauss sum
    z0 = (w_plus/w) z and w_zero w_alpha = w_plus^2. Used in full when the
    branching rows are dependent and Yext is not determined."""
    n = md.size
    t = branching.block_count
    d = md.ring.dims
    failures: list[str] = []
    ratio = divide(indices.w_plus, md.w)
    for a in range(t):
        h_a = branching.block_twists[a]
        for l in range(n):
            if branching.B[a][l] and md.ring.twists[l] != h_a:
                failures.append(f"twist intertwining fails at block {a}, label {l}")
        lhs = csum(d[l] * branching.B[a][l] for l in range(n) if branching.B[a][l])
        if ratio * lhs != branching.block_dims[a]:
            failures.append(f"block dim identity fails at block {a}")
    om = [root_of_unity(h) for h in branching.block_twists]
    z0 = csum(branching.block_dims[a] * branching.block_dims[a] * om[a] for a in range(t))
    if z0 != ratio * md.z:
        failures.append("z0 != (w_plus/w) z")
    if indices.w_zero * indices.w_alpha != indices.w_plus * indices.w_plus:
        failures.append("w_zero * w_alpha != w_plus^2")
    return failures


def _invert_rational(M: list[list[int]]) -> Optional[list[list[Fraction]]]:
    t = len(M)
    A = [[Fraction(M[i][j]) for j in range(t)] + [Fraction(1 if j == i else 0) for j in range(t)] for i in range(t)]
    for col in range(t):
        piv = next((r for r in range(col, t) if A[r][col]), None)
        if piv is None:
            return None
        A[col], A[piv] = A[piv], A[col]
        p = A[col][col]
        A[col] = [x / p for x in A[col]]
        for r in range(t):
            if r != col and A[r][col]:
                f = A[r][col]
                A[r] = [x - f * y for x, y in zip(A[r], A[col])]
    return [row[t:] for row in A]


def _dependent_rows(M: list[list[int]]) -> list[int]:
    t = len(M)
    rows = [[Fraction(x) for x in row] for row in M]
    dep = []
    pivots: list[tuple[int, list[Fraction]]] = []
    for i, row in enumerate(rows):
        r = list(row)
        for col, pv in pivots:
            if r[col]:
                f = r[col]
                r = [x - f * y for x, y in zip(r, pv)]
        lead = next((j for j, x in enumerate(r) if x), None)
        if lead is None:
            dep.append(i)
        else:
            pivots.append((lead, [x / r[lead] for x in r]))
    return dep


def rational_span_dimension(mats: Sequence[CouplingMatrix]) -> int:
    rows = [[Fraction(v) for row in m.Z for v in row] for m in mats]
    return len(_row_reduce(rows))


def in_rational_span(target: CouplingMatrix, mats: Sequence[CouplingMatrix]) -> bool:
    rows = [[Fraction(v) for row in m.Z for v in row] for m in mats]
    base = rational_span_dimension(mats)
    rows.append([Fraction(v) for row in target.Z for v in row])
    return len(_row_reduce(rows)) == base


def span_relations(mats: Sequence[CouplingMatrix]) -> list[tuple[int, ...]]:
    """Integer basis of the rational relations sum_i c_i Z_i = 0 among the
    given matrices, each normalized to coprime entries with positive lead."""
    k = len(mats)
    width = len(mats[0].Z) ** 2 if mats else 0
    # Kernel of the k x width coefficient matrix (rows = flattened matrices).
    rows = [[Fraction(v) for row in m.Z for v in row] + [Fraction(1 if j == i else 0) for j in range(k)] for i, m in enumerate(mats)]
    reduced = _row_reduce(rows)
    out = []
    for r in reduced:
        if all(x == 0 for x in r[:width]):
            den = 1
            for x in r[width:]:
                den = den * x.denominator // gcd(den, x.denominator)
            ints = [int(x * den) for x in r[width:]]
            g = 0
            for v in ints:
                g = gcd(g, v)
            ints = [v // g for v in ints]
            lead = next(v for v in ints if v)
            if lead < 0:
                ints = [-v for v in ints]
            out.append(tuple(ints))
    return out


def _row_reduce(rows: list[list[Fraction]]) -> list[list[Fraction]]:
    rows = [list(r) for r in rows]
    out = []
    pivots: list[int] = []
    for row in rows:
        r = list(row)
        for col, pv in zip(pivots, out):
            if r[col]:
                f = r[col]
                r = [x - f * y for x, y in zip(r, pv)]
        lead = next((j for j, x in enumerate(r) if x), None)
        if lead is None:
            continue
        out.append([x / r[lead] for x in r])
        pivots.append(lead)
    return out


def classify_all(md: ModularData, pool: Sequence[CouplingMatrix]) -> list[Classification]:
    """Classify every matrix in a complete enumeration.

    Kind precedence: diagonal, heterotic (asymmetric vacuum), type I (admits
    a block factorization), permutation (non-identity permutation matrix
    realizing a block automorphism of its parents), type II (coinciding
    parents with an automorphism), unresolved.
    """
    facts = [factorize_type_one(md, Z) for Z in pool]
    out = []
    for i, Z in enumerate(pool):
        _, _, sym = vacuum_profile(Z)
        idx = global_indices(md, Z)
        cls = Classification(
            index=i, Z=Z, kind="unresolved", vacuum_symmetric=sym, indices=idx
        )
        bad = idx.check()
        if bad:
            cls.notes.extend(bad)
        cls.factorizations = facts[i]
        cls.parent_plus, cls.parent_minus = find_parents(md, Z, pool)
        _attach_bijection(md, cls, pool, facts)
        if Z.is_identity():
            cls.kind = "diagonal"
        elif not sym:
            cls.kind = "heterotic"
        elif facts[i]:
            cls.kind = "type_I"
        elif cls.automorphism is not None:
            cls.kind = "permutation" if Z.is_permutation() else "type_II"
        if facts[i]:
            try:
                cls.extended = extended_modular_data(md, facts[i][0], idx)
            except RankDeficientBranching as exc:
                cls.extended_error = str(exc)
                cls.branching_failures = branching_checks(md, facts[i][0], idx)
                cls.notes.append(
                    "extended Y not determined by the branching (dependent rows); "
                    "Gram-free identities checked instead"
                )
        out.append(cls)
    return out


def _attach_bijection(
    md: ModularData,
    cls: Classification,
    pool: Sequence[CouplingMatrix],
    facts: list[list[BranchingData]],
) -> None:
    """Find a block bijection between some factorization of a plus parent and
    one of a minus parent; record the automorphism when the parents coincide."""
    for ip in cls.parent_plus:
        for im in cls.parent_minus:
            for bp in facts[ip]:
                for bm in facts[im]:
                    res = find_block_bijection(bp, bm, cls.Z)
                    if res is None:
                        continue
                    theta, count = res
                    cls.bijection = theta
                    cls.bijection_count = count
                    if ip == im:
                        cls.automorphism = theta
                        idx_parent = global_indices(md, pool[ip])
                        try:
                            ext = extended_modular_data(md, bp, idx_parent)
                            cls.automorphism_preserves_extended = _permutation_preserves(
                                ext, bp, theta
                            )
                        except RankDeficientBranching:
                            # Yext is not determined; twist and dim matching
                            # were already enforced per block pair.
                            cls.automorphism_preserves_extended = None
                        if len(facts[ip]) > 1:
                            cls.notes.append(
                                "coinciding parents admit multiple distinct factorizations"
                            )
                    return


def _permutation_preserves(
    ext: ExtendedModularData, branching: BranchingData, theta: tuple[int, ...]
) -> bool:
    t = branching.block_count
    for a in range(t):
        if branching.block_twists[theta[a]] != branching.block_twists[a]:
            return False
        for b in range(t):
            if ext.Yext[theta[a]][theta[b]] != ext.Yext[a][b]:
                return False
    return True
