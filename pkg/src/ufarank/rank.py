"""Minimum rank of an unambiguous automaton by linear algebra.

For a complete, strongly connected component the rank is ``1/(mcw·mrw)``,
where the maximum column weight ``mcw`` is read off any solution of a linear
system built from the space ``U = span{α^T M(w) - α^T}`` and the mergeability
sets ``Mer(q)``.  The maximum row weight ``mrw`` is the same computation on
the transposed automaton.  Components are combined by summing their ranks,
incomplete components contributing zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .automaton import (
    Automaton,
    PairGraph,
    backward_search,
    check_unambiguous,
    scc_decompose,
)
from .errors import AmbiguityError, InvariantError
from .linalg import dot, format_fraction, format_vector, kernel_basis, solve, span_closure, transpose

MerMap = tuple  # tuple of bitmasks, one per state


def average_matrix(aut: Automaton) -> list[list[Fraction]]:
    n, m = aut.n, aut.m
    out = [[Fraction(0)] * n for _ in range(n)]
    for mat in aut.matrices:
        for i, r in enumerate(mat.rows):
            for j in range(n):
                if (r >> j) & 1:
                    out[i][j] += 1
    return [[x / m for x in row] for row in out]


def _shifted(aut: Automaton) -> list[list[Fraction]]:
    avg = average_matrix(aut)
    for i in range(aut.n):
        avg[i][i] -= 1
    return avg


def _positive_generator(kernel: list[list[Fraction]], what: str) -> list[Fraction]:
    if len(kernel) != 1:
        raise InvariantError(f"{what}: eigenvalue 1 has a {len(kernel)}-dimensional eigenspace")
    v = kernel[0]
    if all(x < 0 for x in v):
        v = [-x for x in v]
    if not all(x > 0 for x in v):
        raise InvariantError(f"{what}: Perron vector is not strictly positive")
    return v


def completeness_check(aut: Automaton) -> bool:
    """Whether a strongly connected unambiguous automaton is complete (1 is an eigenvalue of Ā)."""
    kernel = kernel_basis(_shifted(aut))
    if not kernel:
        return False
    _positive_generator(kernel, "completeness")
    return True


def perron_vectors(aut: Automaton) -> tuple[list[Fraction], list[Fraction]]:
    """Positive ``α, β`` with ``α^T Ā = α^T``, ``Ā β = β`` and ``α^T β = 1``.

    ``β`` is scaled so its first entry is 1, which gives ``β = [Q]`` for total DFAs.
    """
    shifted = _shifted(aut)
    beta = _positive_generator(kernel_basis(shifted), "right eigenvector")
    alpha = _positive_generator(kernel_basis(transpose(shifted)), "left eigenvector")
    beta = [x / beta[0] for x in beta]
    s = dot(alpha, beta)
    alpha = [x / s for x in alpha]
    return alpha, beta


def mer_map(aut: Automaton) -> MerMap:
    """``Mer(q)`` for every state, from one backward search off the diagonal."""
    reached = backward_search(PairGraph(aut), [(s, s) for s in range(aut.n)])
    mer = [0] * aut.n
    for p, q in reached:
        mer[p] |= 1 << q
    return tuple(mer)


def u_basis(aut: Automaton, alpha: Sequence[Fraction]) -> list[list[Fraction]]:
    seeds = []
    for mat in aut.matrices:
        moved = mat.vecmul(alpha)
        seeds.append([x - y for x, y in zip(moved, alpha)])
    return span_closure(seeds, aut.matrices, side="right")


def max_pseudo_column(
    aut: Automaton,
    ubasis: Sequence[Sequence[Fraction]],
    q: int,
    mer: MerMap | None = None,
) -> list[Fraction]:
    """A solution ``y`` of: ``γ^T y = 0`` for γ in the basis, ``y(q) = 1``, ``y(q') = 0`` off ``Mer(q)``."""
    if mer is None:
        mer = mer_map(aut)
    n = aut.n
    rows = [list(g) for g in ubasis]
    rhs = [Fraction(0)] * len(rows)
    unit = [Fraction(0)] * n
    unit[q] = Fraction(1)
    rows.append(unit)
    rhs.append(Fraction(1))
    for s in range(n):
        if not (mer[q] >> s) & 1:
            e = [Fraction(0)] * n
            e[s] = Fraction(1)
            rows.append(e)
            rhs.append(Fraction(0))
    y = solve(rows, rhs)
    if y is None:
        raise InvariantError(f"pseudo-column system for state {q + 1} is infeasible")
    return y


def max_column_weight(aut: Automaton, alpha: Sequence[Fraction], pivot: int = 0) -> Fraction:
    basis = u_basis(aut, alpha)
    y = max_pseudo_column(aut, basis, pivot)
    return dot(alpha, y)


def mcw_mrw(
    aut: Automaton,
    alpha: Sequence[Fraction],
    beta: Sequence[Fraction],
    dfa_shortcut: bool = True,
) -> tuple[Fraction, Fraction]:
    mcw = max_column_weight(aut, alpha)
    if dfa_shortcut and aut.is_total_dfa:
        # rows of a total DFA are singletons and β = [Q]
        mrw = Fraction(1)
    else:
        mrw = max_column_weight(aut.transposed(), beta)
    return mcw, mrw


@dataclass(frozen=True)
class WeightData:
    alpha: list
    beta: list
    mcw: Fraction
    mrw: Fraction

    @property
    def rank(self) -> Fraction:
        return 1 / (self.mcw * self.mrw)

    def to_dict(self) -> dict:
        return {
            "alpha": format_vector(self.alpha),
            "beta": format_vector(self.beta),
            "mcw": format_fraction(self.mcw),
            "mrw": format_fraction(self.mrw),
        }


@dataclass(frozen=True)
class ComponentReport:
    states: tuple[int, ...]
    complete: bool
    rank: int
    weights: WeightData | None = None
    u_dim: int | None = None

    def to_dict(self) -> dict:
        d = {
            "states": [s + 1 for s in self.states],
            "complete": self.complete,
            "rank": self.rank,
        }
        if self.weights is not None:
            d.update(self.weights.to_dict())
            d["u_dim"] = self.u_dim
        return d


@dataclass(frozen=True)
class RankReport:
    components: tuple[ComponentReport, ...] = field(default_factory=tuple)

    @property
    def total(self) -> int:
        return sum(c.rank for c in self.components)

    def to_dict(self) -> dict:
        return {"rank": self.total, "components": [c.to_dict() for c in self.components]}


def analyse_component(sub: Automaton, states: Sequence[int] | None = None) -> ComponentReport:
    """Rank data for a strongly connected unambiguous automaton."""
    states = tuple(range(sub.n)) if states is None else tuple(states)
    if not completeness_check(sub):
        return ComponentReport(states, False, 0)
    alpha, beta = perron_vectors(sub)
    basis = u_basis(sub, alpha)
    mcw = dot(alpha, max_pseudo_column(sub, basis, 0))
    if sub.is_total_dfa:
        mrw = Fraction(1)
    else:
        mrw = max_column_weight(sub.transposed(), beta)
    r = 1 / (mcw * mrw)
    if r.denominator != 1 or r < 1:
        raise InvariantError(f"1/(mcw·mrw) = {r} is not a positive integer")
    return ComponentReport(states, True, int(r), WeightData(alpha, beta, mcw, mrw), len(basis))


def component_rank(sub: Automaton) -> int:
    return analyse_component(sub).rank


def rank(aut: Automaton, check: bool = True) -> RankReport:
    """Minimum rank of ``M(Σ*)`` as the sum over strongly connected components."""
    if check:
        diamond = check_unambiguous(aut)
        if diamond is not None:
            raise AmbiguityError(diamond)
    scc = scc_decompose(aut)
    reports = []
    for comp in scc.components:
        reports.append(analyse_component(aut.restrict(comp), comp))
    return RankReport(tuple(reports))
