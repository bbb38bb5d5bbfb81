from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ufarank import generators
from ufarank.linalg import (
    EchelonBasis,
    dot,
    format_fraction,
    in_span,
    kernel_basis,
    orthogonal_complement,
    rank,
    rref,
    solve,
    span_closure,
    subspace_dim,
)
from ufarank.oracle import integer_rank
from ufarank.rank import perron_vectors


def int_matrices(max_rows=5, max_cols=5):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(
                st.lists(st.integers(-3, 3), min_size=c, max_size=c), min_size=r, max_size=r
            )
        )
    )


def apply(mat, y):
    return [sum(Fraction(a) * b for a, b in zip(row, y)) for row in mat]


@given(int_matrices())
def test_rank_matches_bareiss(mat):
    assert rank(mat) == integer_rank(mat)


@given(int_matrices())
def test_rref_is_reduced(mat):
    red, pivots, r = rref(mat)
    assert r == len(pivots)
    for k, c in enumerate(pivots):
        assert red[k][c] == 1
        assert all(red[i][c] == 0 for i in range(len(red)) if i != k)
    assert all(not any(row) for row in red[r:])


@given(int_matrices(), st.data())
def test_solve_is_exact(mat, data):
    cols = len(mat[0])
    x = data.draw(st.lists(st.integers(-2, 2), min_size=cols, max_size=cols))
    rhs = apply(mat, x)
    y = solve(mat, rhs)
    assert y is not None
    assert apply(mat, y) == rhs


def test_solve_infeasible_and_free_variables():
    assert solve([[1, 1], [1, 1]], [1, 2]) is None
    # free variable set to 0
    assert solve([[1, 1]], [3]) == [3, 0]
    with pytest.raises(ValueError):
        solve([[1]], [1, 2])
    assert solve([], []) == []


@given(int_matrices())
def test_kernel_basis(mat):
    ker = kernel_basis(mat)
    assert len(ker) == len(mat[0]) - integer_rank(mat)
    for v in ker:
        assert apply(mat, v) == [0] * len(mat)
    assert subspace_dim(ker) == len(ker)


def test_echelon_basis_incremental():
    b = EchelonBasis(3)
    assert b.add([1, 2, 3])
    assert not b.add([2, 4, 6])
    assert b.add([0, 1, 0])
    assert b.contains([1, 0, 3])
    assert not b.contains([0, 0, 1])
    assert len(b) == 2


def test_u_basis_of_ex44():
    aut = generators.ex44()
    alpha = [Fraction(1, 4)] * 4
    seeds = [[x - y for x, y in zip(m.vecmul(alpha), alpha)] for m in aut.matrices]
    basis = span_closure(seeds, aut.matrices, side="right")
    assert len(basis) == 1
    assert in_span([1, -1, 1, -1], basis)


def test_span_closure_left_and_right():
    # one-letter cyclic shift on 3 states
    aut = generators.from_functions(3, {"a": [1, 2, 0]})
    assert len(span_closure([[1, 0, 0]], aut.matrices, side="right")) == 3
    assert len(span_closure([[1, 1, 1]], aut.matrices, side="left")) == 1
    with pytest.raises(ValueError):
        span_closure([[1, 0, 0]], aut.matrices, side="up")


@settings(max_examples=50)
@given(int_matrices(max_rows=3, max_cols=5))
def test_orthogonal_complement(vectors):
    comp = orthogonal_complement(vectors, len(vectors[0]))
    assert len(comp) + integer_rank(vectors) == len(vectors[0])
    for c in comp:
        for v in vectors:
            assert dot(c, v) == 0


def test_format_fraction():
    assert format_fraction(Fraction(1, 2)) == "1/2"
    assert format_fraction(Fraction(4, 2)) == "2"
    assert format_fraction(Fraction(-3, 9)) == "-1/3"


def test_perron_vectors_are_exact_eigenvectors():
    aut = generators.fig4()
    alpha, beta = perron_vectors(aut)
    m = aut.m
    avg_alpha = [sum(mat.vecmul(alpha)[j] for mat in aut.matrices) / m for j in range(aut.n)]
    avg_beta = [sum(mat.matvec(beta)[i] for mat in aut.matrices) / m for i in range(aut.n)]
    assert avg_alpha == alpha
    assert avg_beta == beta
    assert dot(alpha, beta) == 1
