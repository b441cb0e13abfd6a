"""Exact integer and rational linear algebra.

Smith normal form with unimodular transforms, an incremental Hermite
(echelon) basis for sublattices of ``Z^n`` with membership tests, and a
few rational helpers (inverse, null space, Fourier-Motzkin feasibility)
used for fan validation.  Matrices are lists of lists of Python ints so
entries never overflow.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

__all__ = [
    "SnfResult",
    "smith_normal_form",
    "matmul",
    "identity",
    "determinant",
    "xgcd",
    "HermiteLattice",
    "rational_inverse",
    "integer_inverse",
    "nullspace",
    "rank",
    "strictly_separable",
    "transpose",
]


def identity(n: int) -> list:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A, B) -> list:
    if not A:
        return []
    inner = len(B)
    cols = len(B[0]) if B else 0
    return [[sum(A[i][k] * B[k][j] for k in range(inner)) for j in range(cols)] for i in range(len(A))]


def transpose(A) -> list:
    return [list(r) for r in zip(*A)]


def determinant(A) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(A)
    if n == 0:
        return 1
    M = [list(r) for r in A]
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[-1][-1]


def xgcd(a: int, b: int):
    """``(g, x, y)`` with ``g = gcd(a, b) >= 0`` and ``x a + y b = g``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


@dataclass(frozen=True)
class SnfResult:
    U: list
    D: list
    V: list

    @property
    def diagonal(self) -> list:
        k = min(len(self.D), len(self.D[0]) if self.D else 0)
        return [self.D[i][i] for i in range(k)]

    @property
    def invariant_factors(self) -> list:
        return [d for d in self.diagonal if d]

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)


def smith_normal_form(M) -> SnfResult:
    """``U M V = D`` with ``U``, ``V`` unimodular and ``d_1 | d_2 | ...``.

    Pivot rule: smallest absolute value nonzero entry of the remaining block,
    first by row then by column; rows are cleared before columns.
    """
    m = len(M)
    n = len(M[0]) if m else 0
    A = [list(map(int, r)) for r in M]
    U = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        if i != j:
            A[i], A[j] = A[j], A[i]
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        if i != j:
            for r in A:
                r[i], r[j] = r[j], r[i]
            for r in V:
                r[i], r[j] = r[j], r[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        A[dst] = [a + q * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        for r in A:
            r[dst] += q * r[src]
        for r in V:
            r[dst] += q * r[src]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            p = A[t][t]
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
            rest = [(abs(A[i][t]), i, "r") for i in range(t + 1, m) if A[i][t]]
            rest += [(abs(A[t][j]), j, "c") for j in range(t + 1, n) if A[t][j]]
            if rest:
                _, k, kind = min(rest)
                if kind == "r":
                    swap_rows(t, k)
                else:
                    swap_cols(t, k)
                continue
            bad = next(
                ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
        t += 1
    return SnfResult(U, A, V)


class HermiteLattice:
    """Sublattice of ``Z^n`` kept as an echelon basis, rows as sparse dicts.

    Inserting a vector merges it into the basis with extended-gcd row
    operations, so ``contains`` is exact: a vector lies in the lattice iff
    it reduces to zero against the pivots in column order.
    """

    def __init__(self):
        self.pivots = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def add(self, vec) -> None:
        vec = {c: v for c, v in (vec.items() if isinstance(vec, dict) else enumerate(vec)) if v}
        while vec:
            c = min(vec)
            row = self.pivots.get(c)
            if row is None:
                if vec[c] < 0:
                    vec = {k: -v for k, v in vec.items()}
                self.pivots[c] = vec
                return
            a, b = vec[c], row[c]
            if a % b == 0:
                vec = _axpy(vec, row, -(a // b))
                continue
            g, x, y = xgcd(b, a)
            new_row = _combine(row, x, vec, y)
            vec = _combine(vec, b // g, row, -(a // g))
            self.pivots[c] = new_row

    def reduce(self, vec) -> dict:
        vec = {c: v for c, v in (vec.items() if isinstance(vec, dict) else enumerate(vec)) if v}
        while vec:
            c = min(vec)
            row = self.pivots.get(c)
            if row is None or vec[c] % row[c]:
                return vec
            vec = _axpy(vec, row, -(vec[c] // row[c]))
        return vec

    def contains(self, vec) -> bool:
        return not self.reduce(vec)


def _axpy(x: dict, y: dict, q: int) -> dict:
    out = dict(x)
    for k, v in y.items():
        s = out.get(k, 0) + q * v
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def _combine(x: dict, a: int, y: dict, b: int) -> dict:
    out = {}
    for k in set(x) | set(y):
        s = a * x.get(k, 0) + b * y.get(k, 0)
        if s:
            out[k] = s
    return out


def rank(rows) -> int:
    """Rank over Q of an integer matrix."""
    lat = HermiteLattice()
    for r in rows:
        lat.add(r)
    return lat.rank


# -- rational helpers --------------------------------------------------------


def _rref(M):
    A = [[Fraction(x) for x in r] for r in M]
    rows = len(A)
    cols = len(A[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if A[i][c]), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(rows):
            if i != r and A[i][c]:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return A, pivots


def rational_inverse(M) -> list:
    n = len(M)
    aug = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(M)]
    R, pivots = _rref(aug)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return [r[n:] for r in R]


def integer_inverse(M) -> list:
    inv = rational_inverse(M)
    if any(x.denominator != 1 for r in inv for x in r):
        raise ValueError("matrix is not unimodular")
    return [[int(x) for x in r] for r in inv]


def nullspace(M, n: int) -> list:
    """Basis (rational vectors of length ``n``) of ``{u : M u = 0}``."""
    if not M:
        return [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    R, pivots = _rref(M)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        u = [Fraction(0)] * n
        u[f] = Fraction(1)
        for row, p in zip(R, pivots):
            u[p] = -row[f]
        basis.append(u)
    return basis


def _fm_feasible(ineqs, nvars) -> bool:
    """Decide ``exists w: a.w >= b`` for all ``(a, b)`` by Fourier-Motzkin."""
    system = [(list(a), Fraction(b)) for a, b in ineqs]
    for k in range(nvars):
        pos, neg, zero = [], [], []
        for a, b in system:
            (pos if a[k] > 0 else neg if a[k] < 0 else zero).append((a, b))
        new = zero
        for ap, bp in pos:
            for an, bn in neg:
                lp, ln = ap[k], -an[k]
                a = [ln * x + lp * y for x, y in zip(ap, an)]
                a[k] = Fraction(0)
                new.append((a, ln * bp + lp * bn))
        system = _dedupe(new)
    return all(b <= 0 for _, b in system)


def _dedupe(system):
    seen = {}
    for a, b in system:
        scale = next((abs(x) for x in a if x), None)
        if scale:
            key = tuple(x / scale for x in a)
            b = b / scale
        else:
            key = tuple(a)
        if key not in seen or seen[key] < b:
            seen[key] = b
    return [(list(k), b) for k, b in seen.items()]


def strictly_separable(positive, negative, zero, n: int) -> bool:
    """Is there a rational functional ``u`` with ``u.p > 0`` on ``positive``,
    ``u.q < 0`` on ``negative`` and ``u.z = 0`` on ``zero``?  Decided exactly
    (scale so the strict inequalities read ``>= 1``)."""
    B = nullspace([list(z) for z in zero], n)
    if not B:
        return not (positive or negative)
    r = len(B)
    ineqs = []
    for p in positive:
        ineqs.append(([sum(B[k][i] * p[i] for i in range(n)) for k in range(r)], 1))
    for q in negative:
        ineqs.append(([-sum(B[k][i] * q[i] for i in range(n)) for k in range(r)], 1))
    return _fm_feasible(ineqs, r)
