"""Construction of minimum-rank words encoded as straight-line programs.

The pipeline for a complete, strongly connected unambiguous automaton:

1. ``merge_words``: a set-SLP with, for each ``q ∈ Mer(p)``, a word ``w_q``
   with ``p ∈ p·w_q`` and ``p ∈ q·w_q``, read off a BFS tree of the square
   automaton rooted at ``(p, p)``.
2. ``maximal_column_word``: concatenate merge words until every column
   ``q ∈ Mer(p) \\ {p}`` is zero, which makes column ``p`` maximal.
3. ``min_rank_word``: pump that column into every nonzero column, repeat on
   the transposed automaton for rows, and square the product.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence

from .automaton import (
    Automaton,
    BoolMatrix,
    PairGraph,
    check_unambiguous,
    lowest_state,
    scc_decompose,
    shortest_path_word,
    states_of,
)
from .errors import AmbiguityError, InvariantError, PreconditionError
from .linalg import dot, rank as exact_rank
from .rank import WeightData, analyse_component, mer_map
from .slp import Slp, SlpBuilder, compose, eval_slp_matrix, merge_programs, simplify


@dataclass(frozen=True)
class CesariDecomposition:
    """``M = Σ [C_i][R_i]^T`` with the ``C_i`` and the ``R_i`` pairwise disjoint."""

    rectangles: tuple[tuple[int, int], ...]

    def __len__(self) -> int:
        return len(self.rectangles)

    def matrix(self, n: int) -> BoolMatrix:
        rows = [0] * n
        for c, r in self.rectangles:
            for i in states_of(c):
                rows[i] |= r
        return BoolMatrix(n, tuple(rows))

    def to_list(self) -> list[dict]:
        return [
            {"columns": [s + 1 for s in states_of(c)], "rows": [s + 1 for s in states_of(r)]}
            for c, r in self.rectangles
        ]


class NotRectangleSum(InvariantError):
    pass


def cesari_decompose(mat: BoolMatrix) -> CesariDecomposition:
    by_column: dict[int, int] = {}
    for j, col in enumerate(mat.columns()):
        if col:
            by_column[col] = by_column.get(col, 0) | (1 << j)
    seen = 0
    for col in by_column:
        if seen & col:
            raise NotRectangleSum("distinct nonzero columns overlap")
        seen |= col
    decomp = CesariDecomposition(tuple(by_column.items()))
    if decomp.matrix(mat.n) != mat:
        raise NotRectangleSum("rectangles do not reconstruct the matrix")
    return decomp


# merge words


def _bool_builder(aut: Automaton) -> SlpBuilder:
    return SlpBuilder(aut.alphabet, aut.matrix, BoolMatrix.identity(aut.n), BoolMatrix.checked_mul)


def _dfa_builder(aut: Automaton) -> SlpBuilder:
    images = {a: tuple(lowest_state(r) for r in mat.rows) for a, mat in zip(aut.alphabet, aut.matrices)}
    return SlpBuilder(aut.alphabet, images.__getitem__, tuple(range(aut.n)), compose)


def _merge_tree(aut: Automaton, p: int, mer: int, root: int):
    """BFS tree towards ``(root, root)``; returns parent map and chosen vertex per state of ``mer``."""
    graph = PairGraph(aut)
    start = (root, root)
    parent: dict = {start: None}
    order = {start: 0}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for a, u in graph.predecessors(v):
            if u not in parent:
                parent[u] = (a, v)
                order[u] = len(order)
                queue.append(u)
    chosen = {}
    for q in states_of(mer):
        cands = [v for v in ((p, q), (q, p)) if v in parent]
        if not cands:
            raise PreconditionError(
                f"state {q + 1} ∈ Mer({p + 1}) has no path to ({root + 1},{root + 1})"
            )
        chosen[q] = min(cands, key=order.__getitem__)
    return parent, order, chosen


def _merge_rules(builder: SlpBuilder, aut: Automaton, p: int, mer: int, root: int) -> dict[int, str]:
    parent, order, chosen = _merge_tree(aut, p, mer, root)
    start = (root, root)
    kept: dict = {}
    for v in chosen.values():
        u = v
        while u is not None and u not in kept:
            kept[u] = 0
            u = parent[u][1] if parent[u] else None
    for v in kept:
        if parent[v] is not None:
            kept[parent[v][1]] += 1
    breaks = {start} | set(chosen.values()) | {v for v, c in kept.items() if c >= 2}
    # one branch per breakpoint, emitted nearest-to-root first so rules precede their users
    symbol: dict = {}
    for v in sorted(breaks, key=order.__getitem__):
        if v == start:
            continue
        letters = []
        u = v
        while True:
            a, u = parent[u]
            letters.append(a)
            if u in breaks:
                break
        branch = builder.rule("u", letters)
        tail = symbol.get(u)
        symbol[v] = builder.rule("c", (branch,) if tail is None else (branch, tail))
    names = {}
    for q in states_of(mer):
        v = chosen[q]
        rhs = () if v == start else (symbol[v],)
        names[q] = builder.rule("w", rhs)
    return names


def merge_words(aut: Automaton, p: int, root: int | None = None, mer: int | None = None) -> tuple[Slp, dict[int, str]]:
    """Set-SLP with one initial ``w_q`` per ``q ∈ Mer(p)``.

    With the default ``root = p`` each ``w_q`` satisfies ``p ∈ p·w_q`` and
    ``p ∈ q·w_q``.  Another root ``t`` gives ``t ∈ p·w_q`` and ``t ∈ q·w_q``.
    """
    if mer is None:
        mer = mer_map(aut)[p]
    builder = _bool_builder(aut)
    names = _merge_rules(builder, aut, p, mer, p if root is None else root)
    initials = [names[q] for q in states_of(mer)]
    return builder.build(initials), names


# maximal column


def _column_nonzero_bool(value: BoolMatrix, q: int) -> bool:
    return bool(value.column(q))


def _column_nonzero_dfa(value: tuple[int, ...], q: int) -> bool:
    return q in value


def _max_column_rules(builder: SlpBuilder, aut: Automaton, p: int, mer: int, nonzero) -> str | None:
    names = _merge_rules(builder, aut, p, mer, p)
    others = [q for q in states_of(mer) if q != p]
    current = None
    for _ in range(aut.n):
        value = builder.identity if current is None else builder.values[current]
        q = next((q for q in others if nonzero(value, q)), None)
        if q is None:
            return current
        rhs = (names[q],) if current is None else (current, names[q])
        current = builder.rule("m", rhs)
    raise InvariantError(f"maximal column for state {p + 1} not reached within {aut.n} steps")


def maximal_column_word(aut: Automaton, p: int, weights: WeightData | None = None) -> Slp:
    """SLP for a word ``w`` such that column ``p`` of ``M(w)`` is a maximal column.

    With ``weights`` the column's weight is checked against ``mcw``.
    """
    builder = _bool_builder(aut)
    top = _max_column_rules(builder, aut, p, mer_map(aut)[p], _column_nonzero_bool)
    start = builder.rule("W", () if top is None else (top,))
    if weights is not None:
        col = builder.values[start].column(p)
        if dot(weights.alpha, [(col >> i) & 1 for i in range(aut.n)]) != weights.mcw:
            raise InvariantError(f"column {p + 1} does not have maximum weight")
    return builder.build([start])


# minimum rank word


def _pumped_rules(builder: SlpBuilder, aut: Automaton, p: int, nonzero, preimage) -> str | None:
    """Rules for ``x`` such that every nonzero column of ``M(x)`` is maximal."""
    mer = mer_map(aut)[p]
    col_word = _max_column_rules(builder, aut, p, mer, nonzero)
    paths: dict[int, str | None] = {}
    current = None
    for qi in range(aut.n):
        value = builder.identity if current is None else builder.values[current]
        if not nonzero(value, qi):
            continue
        q = preimage(value, qi)
        if q not in paths:
            u = shortest_path_word(aut, p, q)
            paths[q] = builder.rule("path", u) if u else None
        rhs = [s for s in (col_word, paths[q], current) if s is not None]
        current = builder.rule("x", rhs)
    return current


def _check_input(aut: Automaton, check: bool) -> None:
    if check:
        diamond = check_unambiguous(aut)
        if diamond is not None:
            raise AmbiguityError(diamond)
    if len(scc_decompose(aut)) != 1:
        raise PreconditionError("witness construction needs a strongly connected automaton")


@dataclass(frozen=True)
class MinRankWitness:
    slp: Slp
    matrix: BoolMatrix
    cesari: CesariDecomposition
    rank: int


def min_rank_word(aut: Automaton, p: int = 0, check: bool = True) -> MinRankWitness:
    """SLP for a word of minimum rank, its matrix and its rectangle decomposition."""
    _check_input(aut, check)
    report = analyse_component(aut)
    if not report.complete:
        raise PreconditionError("automaton is not complete (its monoid contains 0)")
    w = report.weights

    builder = _bool_builder(aut)
    x = _pumped_rules(
        builder, aut, p, _column_nonzero_bool, lambda m, q: lowest_state(m.column(q))
    )
    col_prog = builder.build([builder.rule("X", () if x is None else (x,))])

    tr = aut.transposed()
    tbuilder = _bool_builder(tr)
    y = _pumped_rules(
        tbuilder, tr, p, _column_nonzero_bool, lambda m, q: lowest_state(m.column(q))
    )
    row_prog = tbuilder.build([tbuilder.rule("Y", () if y is None else (y,))]).reversed()

    extra, names = merge_programs(col_prog, row_prog, "r")
    top = ("z", (col_prog.initial, names[row_prog.initial]) * 2)
    slp = simplify(Slp(aut.alphabet, col_prog.rules + tuple(extra) + (top,), ("z",)))

    mat = eval_slp_matrix(aut, slp, "z")
    _verify_min_rank(mat, report.rank, w.alpha, w.beta, w.mcw, w.mrw)
    return MinRankWitness(slp, mat, cesari_decompose(mat), report.rank)


def _verify_min_rank(mat: BoolMatrix, r: int, alpha, beta, mcw, mrw) -> None:
    n = mat.n
    if exact_rank(mat.to_lists()) != r:
        raise InvariantError("witness matrix does not have minimum rank")
    cols = {c for c in mat.columns() if c}
    rows = {x for x in mat.rows if x}
    if len(cols) != r or len(rows) != r:
        raise InvariantError("witness matrix has the wrong number of distinct columns/rows")
    for c in cols:
        if dot(alpha, [(c >> i) & 1 for i in range(n)]) != mcw:
            raise InvariantError("witness column is not of maximum weight")
    for x in rows:
        if dot(beta, [(x >> i) & 1 for i in range(n)]) != mrw:
            raise InvariantError("witness row is not of maximum weight")


def dfa_min_rank_word(
    aut: Automaton, p: int = 0, expected_rank: int | None = None
) -> tuple[Slp, tuple[int, ...]]:
    """Total-DFA variant working on transformations; returns the SLP and ``z``'s transformation."""
    if not aut.is_total_dfa:
        raise PreconditionError("automaton is not a total DFA")
    if len(scc_decompose(aut)) != 1:
        raise PreconditionError("witness construction needs a strongly connected automaton")
    builder = _dfa_builder(aut)
    x = _pumped_rules(
        builder, aut, p, _column_nonzero_dfa, lambda t, q: t.index(q)
    )
    rhs = () if x is None else (x, x)
    z = builder.rule("z", rhs)
    image = builder.values[z]
    if expected_rank is not None and len(set(image)) != expected_rank:
        raise InvariantError(
            f"image of the witness has {len(set(image))} states, expected {expected_rank}"
        )
    return builder.build([z]), image
