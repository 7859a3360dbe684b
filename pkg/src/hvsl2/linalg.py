"""Exact dense and sparse linear algebra over Scalar entries.

Forward elimination is division free (cross-multiplication) with row
canonicalization and rational-content normalization after each update;
scalar inversions happen only at back substitution.  This keeps the swell
of exact cyclotomic entries under control.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .scalars import RootData, Scalar


class SingularSystemError(ArithmeticError):
    pass


def _normalize_row(row: list[Scalar]) -> list[Scalar]:
    row = [v.canonical() if v.is_exact else v for v in row]
    num_gcd, den_lcm = 0, 1
    for v in row:
        c = v.content() if v.is_exact else None
        if c is None:
            if v.is_exact:
                continue  # zero entry
            return row  # floating entries: skip rescaling
        num_gcd = gcd(num_gcd, c.numerator)
        den_lcm = den_lcm // gcd(den_lcm, c.denominator) * c.denominator
    if num_gcd in (0, 1) and den_lcm == 1:
        return row
    scale = Fraction(den_lcm, num_gcd)
    return [v * scale for v in row]


def _canon(v: Scalar) -> Scalar:
    return v.canonical() if v.is_exact else v


def _eliminate(M: list[list[Scalar]], ncols: int):
    """In-place forward elimination with unit pivots; returns pivot columns
    (pivot of row r sits at M[r][pivots[r]])."""
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        piv = None
        for i in range(r, len(M)):
            if not M[i][col].is_zero():
                piv = i
                break
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = M[r][col].inv()
        M[r] = [_canon(v * inv) for v in M[r]]
        for i in range(r + 1, len(M)):
            f = M[i][col]
            if not f.is_zero():
                M[i] = [_canon(vi - f * vr) for vi, vr in zip(M[i], M[r])]
        pivots.append(col)
        r += 1
        if r == len(M):
            break
    return pivots


def solve_square(A: list[list[Scalar]], b: list[Scalar], ring: RootData) -> list[Scalar]:
    """Solve A x = b exactly; raises SingularSystemError if A is singular."""
    n = len(A)
    M = [_normalize_row(A[i][:] + [b[i]]) for i in range(n)]
    pivots = _eliminate(M, n)
    if len(pivots) != n:
        raise SingularSystemError(f"singular system (rank {len(pivots)} < {n})")
    x: list[Scalar] = [ring.zero] * n
    for r in range(n - 1, -1, -1):
        col = pivots[r]
        s = M[r][n]
        for j in range(col + 1, n):
            if not M[r][j].is_zero():
                s = s - M[r][j] * x[j]
        x[col] = _canon(s)
    return x


def nullspace(A: list[list[Scalar]], ring: RootData, ncols: int | None = None) -> list[list[Scalar]]:
    """Basis of the right kernel of A (rows = equations)."""
    if ncols is None:
        ncols = len(A[0]) if A else 0
    M = [_normalize_row(row[:]) for row in A]
    pivots = _eliminate(M, ncols)
    nr = len(pivots)
    # eliminate above the (unit) pivots to reach reduced form
    for r in range(nr - 1, -1, -1):
        for i in range(r):
            f = M[i][pivots[r]]
            if not f.is_zero():
                M[i] = [_canon(vi - f * vr) for vi, vr in zip(M[i], M[r])]
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [ring.zero] * ncols
        vec[fc] = ring.one
        for i, pc in enumerate(pivots):
            vec[pc] = _canon(-M[i][fc])
        basis.append(vec)
    return basis


def mat_mul(A, B, ring: RootData):
    n, k, m = len(A), len(B), len(B[0]) if B else 0
    out = [[ring.zero] * m for _ in range(n)]
    for i in range(n):
        Ai = A[i]
        for t in range(k):
            a = Ai[t]
            if a.is_zero():
                continue
            Bt = B[t]
            row = out[i]
            for j in range(m):
                bt = Bt[j]
                if bt.is_zero():
                    continue
                row[j] = row[j] + a * bt
    return out


def mat_vec(A, x, ring: RootData):
    out = []
    for row in A:
        s = ring.zero
        for a, v in zip(row, x):
            s = s + a * v
        out.append(s)
    return out


def identity_matrix(ring: RootData, n: int):
    return [[ring.one if i == j else ring.zero for j in range(n)] for i in range(n)]


def scalar_matrix(ring: RootData, n: int, s: Scalar):
    return [[s if i == j else ring.zero for j in range(n)] for i in range(n)]


def mat_trace(A, ring: RootData) -> Scalar:
    s = ring.zero
    for i in range(len(A)):
        s = s + A[i][i]
    return s


def mat_eq(A, B) -> bool:
    return all((a - b).is_zero() for ra, rb in zip(A, B) for a, b in zip(ra, rb))


class SparseEchelon:
    """Incremental echelon form for sparse vectors keyed by arbitrary hashables."""

    def __init__(self, ring: RootData):
        self.ring = ring
        self.rows: dict = {}  # pivot key -> normalized sparse row (dict)

    def residual(self, vec: dict) -> dict:
        v = {k: c for k, c in vec.items() if not c.is_zero()}
        changed = True
        while changed:
            changed = False
            for k in list(v):
                row = self.rows.get(k)
                if row is not None:
                    f = v[k]
                    for rk, rc in row.items():
                        nc = v.get(rk, self.ring.zero) - f * rc
                        if nc.is_zero():
                            v.pop(rk, None)
                        else:
                            v[rk] = nc
                    changed = True
                    break
        return v

    def add(self, vec: dict) -> bool:
        """Insert vec into the span; returns True if the rank grew."""
        v = self.residual(vec)
        if not v:
            return False
        pivot = next(iter(v))
        inv = v[pivot].inv()
        self.rows[pivot] = {k: c * inv for k, c in v.items()}
        return True

    @property
    def rank(self) -> int:
        return len(self.rows)
