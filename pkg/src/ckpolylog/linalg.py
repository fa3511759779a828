"""Exact rational linear algebra and p-adic epsilon-independence certificates."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

Vector = list[Fraction]


class LinalgError(ValueError):
    pass


class Inconsistent(LinalgError):
    """A linear system has no solution."""


class RationalMatrix:
    """Dense matrix of Fractions."""

    def __init__(self, rows: Sequence[Sequence], ncols: int | None = None):
        self.rows: list[list[Fraction]] = [[Fraction(x) for x in r] for r in rows]
        if ncols is None:
            ncols = len(self.rows[0]) if self.rows else 0
        if any(len(r) != ncols for r in self.rows):
            raise LinalgError("ragged matrix")
        self.ncols = ncols

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), self.ncols

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n)

    @classmethod
    def zeros(cls, m: int, n: int) -> "RationalMatrix":
        return cls([[0] * n for _ in range(m)], n)

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix([list(c) for c in zip(*self.rows)], len(self.rows)) if self.rows else RationalMatrix([], 0)

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.ncols != len(other.rows):
            raise LinalgError("dimension mismatch")
        cols = list(zip(*other.rows)) if other.rows else []
        return RationalMatrix([[sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in cols] for r in self.rows], other.ncols)

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalMatrix) and self.shape == other.shape and self.rows == other.rows

    def rank(self) -> int:
        return len(rref(self.rows, self.ncols)[1])

    def __repr__(self) -> str:
        return f"RationalMatrix({[[str(x) for x in r] for r in self.rows]})"


def rref(rows: Sequence[Sequence[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    m = [list(map(Fraction, r)) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    if not rows:
        return 0
    return len(rref(rows, len(rows[0]))[1])


def kernel_basis(M: RationalMatrix | Sequence[Sequence]) -> list[Vector]:
    """Basis of {x : M x = 0}, one vector per free column (reduced echelon form)."""
    if not isinstance(M, RationalMatrix):
        M = RationalMatrix(M) if M else RationalMatrix([], 0)
    n = M.ncols
    red, pivots = rref(M.rows, n)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, pc in zip(red, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def solve(M: RationalMatrix | Sequence[Sequence], b: Sequence) -> Vector:
    """One solution of M x = b (free variables set to 0); raises Inconsistent."""
    if not isinstance(M, RationalMatrix):
        M = RationalMatrix(M)
    if len(b) != len(M.rows):
        raise LinalgError("dimension mismatch")
    n = M.ncols
    aug = [r + [Fraction(x)] for r, x in zip(M.rows, b)]
    red, pivots = rref(aug, n + 1)
    if n in pivots:
        raise Inconsistent("inconsistent system")
    x = [Fraction(0)] * n
    for row, pc in zip(red, pivots):
        x[pc] = row[n]
    return x


def solve_many(M: Sequence[Sequence], rhs: Sequence[Sequence]) -> list[Vector]:
    """Solve M x = b for each b in ``rhs`` with a single elimination."""
    if not M:
        return [[] for _ in rhs]
    n = len(M[0])
    k = len(rhs)
    aug = [list(map(Fraction, r)) + [Fraction(b[i]) for b in rhs] for i, r in enumerate(M)]
    red, pivots = rref(aug, n)
    out = []
    for j in range(k):
        x = [Fraction(0)] * n
        for row, pc in zip(red, pivots):
            x[pc] = row[n + j]
        # verify consistency on rows that vanished
        for i, r in enumerate(M):
            if sum((a * b for a, b in zip(r, x)), Fraction(0)) != rhs[j][i]:
                raise Inconsistent("inconsistent system")
        out.append(x)
    return out


def determinant(rows: Sequence[Sequence[Fraction]]) -> Fraction:
    m = [list(map(Fraction, r)) for r in rows]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        inv = 1 / m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] * inv
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return det


# --- p-adic absolute values on Q -------------------------------------------


def padic_valuation(x, p: int) -> float | int:
    """v_p of a rational; +inf for zero."""
    x = Fraction(x)
    if x == 0:
        return float("inf")
    v, num, den = 0, x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def padic_abs(x, p: int) -> Fraction:
    v = padic_valuation(x, p)
    if v == float("inf"):
        return Fraction(0)
    return Fraction(p) ** (-v)


@dataclass(frozen=True)
class EpsilonContext:
    """Arithmetic precision eps = p^(-N) for the p-adic absolute value on Q."""

    p: int
    N: int

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("N must be >= 1 so that eps <= 1/p")

    @property
    def eps(self) -> Fraction:
        return Fraction(1, self.p ** self.N)

    def abs(self, x) -> Fraction:
        return padic_abs(x, self.p)


def max_minor_abs(vectors: Sequence[Sequence], p: int) -> tuple[Fraction, list[int]]:
    """Largest p-adic absolute value of a d x d minor, and columns realising it.

    Full pivoting on minimal valuation is unimodular over Z_p, so the product
    of the pivots' absolute values is the maximum over all minors.
    """
    m = [list(map(Fraction, v)) for v in vectors]
    d = len(m)
    if d == 0:
        return Fraction(1), []
    n = len(m[0])
    cols = list(range(n))
    total = Fraction(1)
    chosen: list[int] = []
    for k in range(d):
        best = None
        for i in range(k, d):
            for j in range(k, n):
                if m[i][j] != 0:
                    v = padic_valuation(m[i][j], p)
                    if best is None or v < best[0]:
                        best = (v, i, j)
        if best is None:
            return Fraction(0), []
        v, i, j = best
        m[k], m[i] = m[i], m[k]
        for row in m:
            row[k], row[j] = row[j], row[k]
        cols[k], cols[j] = cols[j], cols[k]
        chosen.append(cols[k])
        total *= Fraction(p) ** (-v)
        piv = m[k][k]
        for i2 in range(k + 1, d):
            if m[i2][k] != 0:
                f = m[i2][k] / piv
                m[i2] = [a - f * b for a, b in zip(m[i2], m[k])]
    return total, sorted(chosen)


def minors_lex(vectors: Sequence[Sequence]):
    """Yield (columns, determinant) for all d x d minors in lexicographic column order."""
    d = len(vectors)
    n = len(vectors[0]) if d else 0
    for cols in combinations(range(n), d):
        yield cols, determinant([[v[c] for c in cols] for v in vectors])


def eps_linearly_independent(vectors: Sequence[Sequence], ctx: EpsilonContext, method: str = "pivot") -> bool:
    """True iff some d x d minor has p-adic absolute value > eps.

    ``method="enumerate"`` walks minors in lexicographic column order with
    early exit; ``"pivot"`` computes the maximal minor directly.
    """
    d = len(vectors)
    if d == 0:
        return True
    n = len(vectors[0])
    if d > n:
        raise LinalgError(f"{d} vectors in dimension {n} cannot be independent")
    if method == "enumerate":
        return any(ctx.abs(det) > ctx.eps for _, det in minors_lex(vectors))
    best, _ = max_minor_abs(vectors, ctx.p)
    return best > ctx.eps


def _sup_norm(rows: Sequence[Sequence], p: int) -> Fraction:
    return max((padic_abs(x, p) for r in rows for x in r), default=Fraction(0))


def perturbation_threshold(vectors: Sequence[Sequence], ctx: EpsilonContext) -> Fraction:
    """A radius eps' such that any family entrywise within eps' stays independent.

    Restrict to a d x d minor with |det| > eps.  The norm of every partial
    determinant functional is at most R^(d-1), where R = max(1, sup |v~_ij|)
    bounds all entries of the perturbed family; then
    |det v - det v~| <= d * R^(d-1) * eps', and eps' is chosen so that this is
    at most eps/2.
    """
    d = len(vectors)
    if d == 0:
        raise LinalgError("empty family")
    if not eps_linearly_independent(vectors, ctx):
        raise LinalgError("vectors are not eps-linearly independent")
    p = ctx.p
    _, cols = max_minor_abs(vectors, p)
    sub = [[Fraction(v[c]) for c in cols] for v in vectors]
    R = max(Fraction(1), _sup_norm(sub, p))
    # Delta_i: norms of the partial determinant functionals of the unperturbed family
    deltas = []
    for i in range(d):
        cof = []
        for j in range(d):
            minor = [[sub[r][c] for c in range(d) if c != j] for r in range(d) if r != i]
            cof.append(padic_abs(determinant(minor), p) if minor else Fraction(1))
        deltas.append(max(cof))
    big = max(max(deltas), R ** (d - 1))
    return min(Fraction(1), ctx.eps / (2 * d * big))


def project_coefficients(target: Sequence, spanning: Sequence[Sequence]) -> Vector:
    """Coordinates of the orthogonal projection of ``target`` onto span(spanning).

    Solves the Gram system G c = (<target, v_j>)_j with G_ij = <v_i, v_j>.
    """
    if not spanning:
        return []
    gram = [[sum((Fraction(a) * b for a, b in zip(u, v)), Fraction(0)) for v in spanning] for u in spanning]
    rhs = [sum((Fraction(a) * b for a, b in zip(target, v)), Fraction(0)) for v in spanning]
    if rank(gram) < len(spanning):
        raise LinalgError("spanning vectors are linearly dependent")
    return solve(gram, rhs)


def _min_val(values, p: int) -> int:
    vals = [padic_valuation(x, p) for x in values if x != 0]
    return min(vals) if vals else 0


def padic_solve(rows: Sequence[Sequence], target: Sequence, p: int, prec: int | None = None) -> tuple[Vector, int | None]:
    """Coefficients y with sum_i y_i rows[i] = target, for data known modulo p^prec.

    ``prec=None`` means exact data: an exact solve with a consistency check.
    Otherwise a d x d minor of maximal p-adic size is solved by Cramer's rule and
    the returned precision is prec + (d-1)*min(0, min v(rows)) + min(0, min v(y)) - v(det);
    the remaining equations must hold to that precision.
    """
    d = len(rows)
    if d == 0:
        if any(Fraction(x) for x in target) and prec is None:
            raise Inconsistent("nonzero target with no rows")
        return [], prec
    cols_all = len(rows[0])
    if prec is None:
        M = RationalMatrix([[rows[i][c] for i in range(d)] for c in range(cols_all)], d)
        return solve(M, list(target)), None
    best, cols = max_minor_abs(rows, p)
    if best == 0:
        raise LinalgError("rows are dependent")
    sq = [[Fraction(rows[i][c]) for i in range(d)] for c in cols]
    y = solve(sq, [Fraction(target[c]) for c in cols])
    det_val = padic_valuation(determinant(sq), p)
    loss = det_val - (d - 1) * min(0, _min_val([x for r in rows for x in r], p)) - min(0, _min_val(y, p))
    out_prec = prec - loss
    for c in range(cols_all):
        r = sum((y[i] * Fraction(rows[i][c]) for i in range(d)), Fraction(0)) - Fraction(target[c])
        if r != 0 and padic_valuation(r, p) < out_prec:
            raise Inconsistent(f"residual of valuation {padic_valuation(r, p)} exceeds precision {out_prec}")
    return y, out_prec
