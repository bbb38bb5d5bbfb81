"""Exact rational linear algebra on lists of :class:`~fractions.Fraction`.

Vectors are lists, matrices are lists of rows.  Pivoting picks the first
row (by index) with a nonzero entry; there is no magnitude pivoting.
"""

from __future__ import annotations

from collections import deque
from fractions import Fraction
from typing import Sequence

Vector = list
Matrix = list


def to_fractions(mat) -> Matrix:
    return [[Fraction(x) for x in row] for row in mat]


def _axpy(v: Vector, f, row: Vector, support: Sequence[int]) -> None:
    """``v -= f·row`` in place, touching only the nonzero positions of ``row``."""
    for j in support:
        v[j] -= f * row[j]


def _support(row: Vector) -> list[int]:
    return [j for j, x in enumerate(row) if x]


def rref(mat: Sequence[Sequence]) -> tuple[Matrix, list[int], int]:
    """Reduced row echelon form, pivot columns and rank."""
    a = to_fractions(mat)
    rows = len(a)
    cols = len(a[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        k = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if k is None:
            continue
        a[r], a[k] = a[k], a[r]
        piv = a[r][c]
        if piv != 1:
            a[r] = [x / piv for x in a[r]]
        prow = a[r]
        support = _support(prow)
        for i in range(rows):
            if i != r and a[i][c] != 0:
                _axpy(a[i], a[i][c], prow, support)
        pivots.append(c)
        r += 1
    return a, pivots, len(pivots)


def rank(mat) -> int:
    if not mat:
        return 0
    return rref(mat)[2]


def solve(mat: Sequence[Sequence], rhs: Sequence) -> Vector | None:
    """One exact solution of ``mat·y = rhs`` (free variables 0), or ``None``."""
    if len(mat) != len(rhs):
        raise ValueError(f"{len(mat)} equations but {len(rhs)} right-hand sides")
    if not mat:
        return []
    cols = len(mat[0])
    if any(len(row) != cols for row in mat):
        raise ValueError("ragged matrix")
    aug = [list(row) + [b] for row, b in zip(mat, rhs)]
    red, pivots, _ = rref(aug)
    if cols in pivots:
        return None
    y = [Fraction(0)] * cols
    for i, c in enumerate(pivots):
        y[c] = red[i][cols]
    return y


def kernel_basis(mat: Sequence[Sequence]) -> list[Vector]:
    """Basis of ``{v : mat·v = 0}``, one vector per free column in ascending order."""
    if not mat:
        return []
    cols = len(mat[0])
    red, pivots, _ = rref(mat)
    pivot_set = set(pivots)
    basis = []
    for f in range(cols):
        if f in pivot_set:
            continue
        v = [Fraction(0)] * cols
        v[f] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -red[i][f]
        basis.append(v)
    return basis


def transpose(mat: Sequence[Sequence]) -> Matrix:
    return [list(col) for col in zip(*mat)]


def dot(x: Sequence, y: Sequence):
    return sum((a * b for a, b in zip(x, y)), Fraction(0))


def mat_vec(mat, vec) -> Vector:
    if hasattr(mat, "matvec"):
        return mat.matvec(vec)
    return [dot(row, vec) for row in mat]


def vec_mat(vec, mat) -> Vector:
    if hasattr(mat, "vecmul"):
        return mat.vecmul(vec)
    n = len(mat[0])
    out = [Fraction(0)] * n
    for x, row in zip(vec, mat):
        if x:
            for j in range(n):
                out[j] += x * row[j]
    return out


class EchelonBasis:
    """Basis kept in reduced echelon form; ``add`` rejects vectors in the span."""

    def __init__(self, dim: int):
        self.dim = dim
        self.rows: list[Vector] = []
        self.pivots: list[int] = []
        self._supports: list[list[int]] = []

    def __len__(self) -> int:
        return len(self.rows)

    def reduce(self, vec: Sequence) -> Vector:
        v = [Fraction(x) for x in vec]
        for row, c, support in zip(self.rows, self.pivots, self._supports):
            f = v[c]
            if f:
                _axpy(v, f, row, support)
        return v

    def contains(self, vec: Sequence) -> bool:
        return not any(self.reduce(vec))

    def add(self, vec: Sequence) -> bool:
        v = self.reduce(vec)
        c = next((j for j, x in enumerate(v) if x), None)
        if c is None:
            return False
        piv = v[c]
        v = [x / piv for x in v]
        support = _support(v)
        for i, row in enumerate(self.rows):
            f = row[c]
            if f:
                _axpy(row, f, v, support)
                self._supports[i] = _support(row)
        at = next((i for i, p in enumerate(self.pivots) if p > c), len(self.pivots))
        self.rows.insert(at, v)
        self.pivots.insert(at, c)
        self._supports.insert(at, support)
        return True

    def vectors(self) -> list[Vector]:
        return [list(r) for r in self.rows]


def span_closure(seeds: Sequence[Sequence], operators: Sequence, side: str = "right") -> list[Vector]:
    """Basis of the least space containing ``seeds`` and closed under the operators.

    ``side="right"`` treats vectors as rows multiplied on the right (``v·A``);
    ``side="left"`` treats them as columns multiplied on the left (``A·v``).
    """
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', not {side!r}")
    if not seeds:
        return []
    basis = EchelonBasis(len(seeds[0]))
    queue = deque()
    for s in seeds:
        if basis.add(s):
            queue.append([Fraction(x) for x in s])
    while queue:
        v = queue.popleft()
        for op in operators:
            w = vec_mat(v, op) if side == "right" else mat_vec(op, v)
            if basis.add(w):
                queue.append(w)
    return basis.vectors()


def subspace_dim(vectors: Sequence[Sequence]) -> int:
    return rank(vectors) if vectors else 0


def in_span(vec: Sequence, vectors: Sequence[Sequence]) -> bool:
    basis = EchelonBasis(len(vec))
    for v in vectors:
        basis.add(v)
    return basis.contains(vec)


def orthogonal_complement(vectors: Sequence[Sequence], dim: int) -> list[Vector]:
    if not vectors:
        return [[Fraction(int(i == j)) for j in range(dim)] for i in range(dim)]
    return kernel_basis(vectors)


def format_fraction(x) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def format_vector(vec) -> list[str]:
    return [format_fraction(x) for x in vec]
