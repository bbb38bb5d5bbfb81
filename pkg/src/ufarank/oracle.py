"""Brute-force ground truth for small automata.

Everything here enumerates the monoid or its columns explicitly, so it only
scales to desk-sized instances.  It deliberately shares no rank code with
:mod:`ufarank.linalg`: matrix ranks are computed by fraction-free integer
elimination.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from .automaton import Automaton, BoolMatrix, is_strongly_connected, states_of
from .errors import InputError
from .linalg import EchelonBasis, format_fraction, span_closure
from .rank import analyse_component, u_basis


class CapExceeded(InputError):
    pass


@dataclass
class MonoidTable:
    elements: dict  # BoolMatrix -> shortest witness word
    cap: int
    truncated: bool

    @property
    def has_zero(self) -> bool:
        return any(m.is_zero() for m in self.elements)

    def __len__(self) -> int:
        return len(self.elements)


def enumerate_monoid(aut: Automaton, cap: int = 20000) -> MonoidTable:
    """BFS closure of ``{I}`` under right multiplication by the generators."""
    ident = BoolMatrix.identity(aut.n)
    elements = {ident: ()}
    queue = deque([ident])
    while queue:
        mat = queue.popleft()
        word = elements[mat]
        for a, gen in zip(aut.alphabet, aut.matrices):
            nxt = mat.checked_mul(gen)
            if nxt in elements:
                continue
            if len(elements) >= cap:
                return MonoidTable(elements, cap, True)
            elements[nxt] = word + (a,)
            queue.append(nxt)
    return MonoidTable(elements, cap, False)


def integer_rank(rows: list[list[int]]) -> int:
    """Rank over ℚ by Bareiss elimination on integers."""
    a = [list(r) for r in rows if any(r)]
    if not a:
        return 0
    ncols = len(a[0])
    r = 0
    prev = 1
    for c in range(ncols):
        k = next((i for i in range(r, len(a)) if a[i][c]), None)
        if k is None:
            continue
        a[r], a[k] = a[k], a[r]
        piv = a[r][c]
        for i in range(r + 1, len(a)):
            for j in range(c + 1, ncols):
                a[i][j] = (piv * a[i][j] - a[i][c] * a[r][j]) // prev
            a[i][c] = 0
        prev = piv
        r += 1
        if r == len(a):
            break
    return r


def matrix_real_rank(mat: BoolMatrix) -> int:
    distinct = sorted({r for r in mat.rows if r})
    return integer_rank([[(r >> j) & 1 for j in range(mat.n)] for r in distinct])


def distinct_nonzero_columns(mat: BoolMatrix) -> int:
    return len({c for c in mat.columns() if c})


def min_rank_brute(table: MonoidTable) -> tuple[int, int]:
    """Minimum real rank and minimum number of distinct nonzero columns."""
    if table.truncated:
        raise CapExceeded(f"monoid enumeration stopped at the cap of {table.cap} elements")
    cache: dict = {}
    best_rank = best_cols = None
    for mat in table.elements:
        key = frozenset(r for r in mat.rows if r)
        rk = cache.get(key)
        if rk is None:
            rk = cache[key] = matrix_real_rank(mat)
        cols = distinct_nonzero_columns(mat)
        if best_rank is None or rk < best_rank:
            best_rank = rk
        if best_cols is None or cols < best_cols:
            best_cols = cols
    return best_rank, best_cols


@dataclass
class ColumnTable:
    columns: dict  # bitmask -> (word, state)
    truncated: bool
    mcol: list = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.columns)


def enumerate_columns(aut: Automaton, cap: int = 10 ** 6) -> ColumnTable:
    """All columns ``M(w)[q]`` by BFS under pre-multiplication, and the ⊆-maximal ones."""
    columns: dict = {}
    queue = deque()
    for q in range(aut.n):
        col = 1 << q
        if col not in columns:
            columns[col] = ((), q)
            queue.append(col)
    truncated = False
    while queue and not truncated:
        col = queue.popleft()
        word, q = columns[col]
        for a, gen in zip(aut.alphabet, aut.matrices):
            nxt = 0
            for i, r in enumerate(gen.rows):
                if r & col:
                    nxt |= 1 << i
            if nxt in columns:
                continue
            if len(columns) >= cap:
                truncated = True
                break
            columns[nxt] = ((a,) + word, q)
            queue.append(nxt)
    nonzero = [c for c in columns if c]
    mcol = sorted(c for c in nonzero if not any(d != c and d & c == c for d in nonzero))
    return ColumnTable(columns, truncated, mcol)


def _vec(mask: int, n: int) -> list[Fraction]:
    return [Fraction((mask >> i) & 1) for i in range(n)]


def _dim(vectors) -> int:
    basis = EchelonBasis(len(vectors[0]) if vectors else 0)
    for v in vectors:
        basis.add(v)
    return len(basis)


def _subspace(small, big) -> bool:
    basis = EchelonBasis(len(big[0]) if big else 0)
    for v in big:
        basis.add(v)
    return all(basis.contains(v) for v in small)


def forward_spaces(aut: Automaton, alpha, beta) -> tuple[list, list]:
    """Bases of ``V = span{M(w)β}`` and ``W = span{α^T M(w)}``."""
    V = span_closure([list(beta)], aut.matrices, side="left")
    W = span_closure([list(alpha)], aut.matrices, side="right")
    return V, W


@dataclass
class CriterionReport:
    n: int
    monoid_size: int | None
    has_zero: bool | None
    min_real_rank: int | None
    min_distinct_columns: int | None
    rank: int
    mcol: list
    mrow: list
    dim_v: int
    dim_w: int
    dim_span_mcol: int
    dim_span_mrow: int
    dim_u: int
    dim_u_perp: int
    is_total_dfa: bool
    checks: dict = field(default_factory=dict)
    inconclusive: bool = False

    @property
    def passed(self) -> bool:
        return not self.inconclusive and all(self.checks.values())

    def to_dict(self) -> dict:
        return {
            "states": self.n,
            "monoid_size": self.monoid_size,
            "has_zero": self.has_zero,
            "min_real_rank": self.min_real_rank,
            "min_distinct_columns": self.min_distinct_columns,
            "rank": self.rank,
            "mcol": [[s + 1 for s in states_of(c)] for c in self.mcol],
            "mrow": [[s + 1 for s in states_of(c)] for c in self.mrow],
            "dim_V": self.dim_v,
            "dim_W": self.dim_w,
            "dim_span_MCol": self.dim_span_mcol,
            "dim_span_MRow": self.dim_span_mrow,
            "dim_U": self.dim_u,
            "dim_U_perp": self.dim_u_perp,
            "total_dfa": self.is_total_dfa,
            "inconclusive": self.inconclusive,
            "checks": dict(self.checks),
        }


def criterion_report(aut: Automaton, max_monoid: int | None = 20000) -> CriterionReport:
    """Evaluate the span criteria relating ``V``, ``W``, ``span MCol`` and the rank.

    ``max_monoid=None`` skips monoid enumeration (and the brute-force rank checks).
    """
    if not is_strongly_connected(aut):
        raise InputError("criterion report needs a strongly connected automaton")
    comp = analyse_component(aut)
    if not comp.complete:
        raise InputError("criterion report needs a complete automaton")
    n = aut.n
    w = comp.weights
    r = comp.rank
    cols = enumerate_columns(aut)
    rows = enumerate_columns(aut.transposed())
    V, W = forward_spaces(aut, w.alpha, w.beta)
    mcol_vecs = [_vec(c, n) for c in cols.mcol]
    mrow_vecs = [_vec(c, n) for c in rows.mcol]
    U = u_basis(aut, w.alpha)
    dim_mcol = _dim(mcol_vecs)
    dim_mrow = _dim(mrow_vecs)

    checks = {}
    checks["col_a: V ⊆ span MCol"] = _subspace(V, mcol_vecs)
    checks["col_b: dim V + r - 1 ≤ dim span MCol"] = len(V) + r - 1 <= dim_mcol
    v_eq = checks["col_a: V ⊆ span MCol"] and len(V) == dim_mcol
    checks["col_c: V = span MCol ⇔ r = 1"] = v_eq == (r == 1)
    checks["row_a: W ⊆ span MRow"] = _subspace(W, mrow_vecs)
    checks["row_b: dim W + r - 1 ≤ dim span MRow"] = len(W) + r - 1 <= dim_mrow
    w_eq = checks["row_a: W ⊆ span MRow"] and len(W) == dim_mrow
    checks["row_c: W = span MRow ⇔ r = 1"] = w_eq == (r == 1)
    checks["r ≤ dim span MCol ≤ dim U^⊥"] = r <= dim_mcol <= n - len(U)
    checks["MCol ⊆ U^⊥"] = all(
        sum(g[i] for i in states_of(c)) == 0 for c in cols.mcol for g in U
    )
    weights = {sum((w.alpha[i] for i in states_of(c)), Fraction(0)) for c in cols.mcol}
    checks["every maximal column has weight mcw"] = weights == {w.mcw}
    checks["non-maximal columns weigh less than mcw"] = all(
        sum((w.alpha[i] for i in states_of(c)), Fraction(0)) < w.mcw
        for c in cols.columns
        if c and c not in set(cols.mcol)
    )
    if aut.is_total_dfa:
        checks["dfa: W = ℝ^Q ⇔ r = 1"] = (len(W) == n) == (r == 1)

    report = CriterionReport(
        n=n,
        monoid_size=None,
        has_zero=None,
        min_real_rank=None,
        min_distinct_columns=None,
        rank=r,
        mcol=cols.mcol,
        mrow=rows.mcol,
        dim_v=len(V),
        dim_w=len(W),
        dim_span_mcol=dim_mcol,
        dim_span_mrow=dim_mrow,
        dim_u=len(U),
        dim_u_perp=n - len(U),
        is_total_dfa=aut.is_total_dfa,
        checks=checks,
        inconclusive=cols.truncated or rows.truncated,
    )
    if max_monoid is not None:
        table = enumerate_monoid(aut, max_monoid)
        report.monoid_size = len(table)
        if table.truncated:
            report.inconclusive = True
        else:
            report.has_zero = table.has_zero
            report.min_real_rank, report.min_distinct_columns = min_rank_brute(table)
            checks["brute-force rank agrees"] = (
                report.min_real_rank == r == report.min_distinct_columns
            )
            checks["no zero matrix in a complete monoid"] = not table.has_zero
    return report


def format_checks(checks: dict) -> list[str]:
    return [f"{'PASS' if ok else 'FAIL'}  {name}" for name, ok in checks.items()]


def fraction_str(x) -> str:
    return format_fraction(x)
