from __future__ import annotations

from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from conftest import FIXTURES
from ufarank import generators
from ufarank.automaton import Automaton, BoolMatrix, mask_of, states_of, word_matrix
from ufarank.errors import PreconditionError
from ufarank.linalg import dot
from ufarank.oracle import enumerate_monoid, integer_rank
from ufarank.rank import analyse_component, mer_map, rank
from ufarank.slp import (
    Slp,
    SlpError,
    eval_slp_matrix,
    eval_slp_transformation,
    eval_slp_word,
    expanded_length,
    simplify,
)
from ufarank.witness import (
    NotRectangleSum,
    cesari_decompose,
    dfa_min_rank_word,
    maximal_column_word,
    merge_words,
    min_rank_word,
)

FIG4_SLP = Slp.from_rules(
    ("a", "b"),
    {
        "w1": ["u1"],
        "w3": ["u3", "u2"],
        "w5": ["u2"],
        "u1": list("aab"),
        "u2": list("aab"),
        "u3": list("aaba"),
    },
    ["w1", "w3", "w5"],
)


def word(s: str) -> tuple[str, ...]:
    return tuple(s)


def expand(slp: Slp) -> tuple[str, ...]:
    return eval_slp_word(slp, slp.initial)


# straight-line programs


def test_fig4_slp_words():
    assert eval_slp_word(FIG4_SLP, "w3") == word("aabaaab")
    assert eval_slp_word(FIG4_SLP, "w1") == word("aab")
    assert eval_slp_word(FIG4_SLP, "w5") == word("aab")
    assert FIG4_SLP.length == 1 + 2 + 1 + 3 + 3 + 4
    FIG4_SLP.validate()


def test_fig4_slp_matrices_over_fig4():
    aut = generators.fig4()
    for s in FIG4_SLP.initials:
        assert eval_slp_matrix(aut, FIG4_SLP, s) == word_matrix(aut, eval_slp_word(FIG4_SLP, s))


def test_trivial_programs():
    aut = generators.ex44()
    single = Slp(("a", "b"), (("s", ("a",)),), ("s",))
    assert eval_slp_word(single, "s") == ("a",)
    empty = Slp(("a", "b"), (("s", ()),), ("s",))
    assert eval_slp_matrix(aut, empty, "s") == BoolMatrix.identity(4)
    nested = Slp(("a", "b"), (("t", ("a",)), ("s", ("t", "t"))), ("s",))
    a = aut.matrix("a")
    assert eval_slp_matrix(aut, nested, "s") == a @ a


def test_cycles_and_bad_programs_are_rejected():
    with pytest.raises(SlpError):
        Slp.from_rules(("a",), {"s": ["t"], "t": ["s"]}, ["s"])
    cyclic = Slp(("a",), (("s", ("t",)), ("t", ("s", "a"))), ("s",))
    with pytest.raises(SlpError):
        eval_slp_word(cyclic, "s")
    with pytest.raises(SlpError):
        cyclic.validate()
    with pytest.raises(SlpError):
        Slp(("a",), (("a", ("a",)),), ("a",)).validate()
    with pytest.raises(SlpError):
        FIG4_SLP.initial


def test_json_round_trip_and_reversal():
    again = Slp.from_dict(FIG4_SLP.to_dict())
    assert again == FIG4_SLP
    rev = FIG4_SLP.reversed()
    for s in FIG4_SLP.initials:
        assert eval_slp_word(rev, s) == tuple(reversed(eval_slp_word(FIG4_SLP, s)))


@st.composite
def random_slps(draw):
    k = draw(st.integers(1, 8))
    rules = []
    for i in range(k):
        pool = ["a", "b"] + [f"v{j}" for j in range(i)]
        rhs = draw(st.lists(st.sampled_from(pool), max_size=4))
        rules.append((f"v{i}", tuple(rhs)))
    initials = tuple(sorted(set(draw(st.lists(st.sampled_from([r[0] for r in rules]), min_size=1)))))
    return Slp(("a", "b"), tuple(rules), initials)


@settings(max_examples=100)
@given(random_slps())
def test_simplify_preserves_words(slp):
    small = simplify(slp)
    small.validate()
    assert small.length <= slp.length
    for s in slp.initials:
        w = eval_slp_word(slp, s)
        assert eval_slp_word(small, s) == w
        assert expanded_length(small, s) == len(w)


@settings(max_examples=100)
@given(random_slps())
def test_matrix_and_transformation_evaluation_agree_with_expansion(slp):
    aut = generators.cerny(4)
    dfa = aut
    for s in slp.initials:
        w = eval_slp_word(slp, s)
        assert eval_slp_matrix(aut, slp, s) == word_matrix(aut, w)
        image = eval_slp_transformation(dfa, slp, s)
        mat = word_matrix(dfa, w)
        assert all(mat[i, image[i]] == 1 for i in range(dfa.n))


# Cesari decomposition


def test_cesari_of_ex44_a():
    dec = cesari_decompose(generators.ex44().matrix("a"))
    assert sorted(dec.rectangles) == sorted([(mask_of([0, 3]), mask_of([0])), (mask_of([1, 2]), mask_of([2]))])
    assert dec.to_list()[0] == {"columns": [1, 4], "rows": [1]}


def test_cesari_trivial_cases():
    assert len(cesari_decompose(BoolMatrix.identity(5))) == 5
    ones = BoolMatrix.from_lists([[1, 1], [1, 1]])
    assert cesari_decompose(ones).rectangles == ((0b11, 0b11),)


def test_cesari_rejects_non_rectangle_sums():
    with pytest.raises(NotRectangleSum):
        cesari_decompose(BoolMatrix.from_lists([[1, 1], [0, 1]]))


# merge words


def image_of(aut, w, s):
    return word_matrix(aut, w).rows[s]


def check_merge_contract(aut, p, root=None):
    t = p if root is None else root
    slp, names = merge_words(aut, p, root=root)
    assert set(names) == set(states_of(mer_map(aut)[p]))
    for q, name in names.items():
        w = eval_slp_word(slp, name)
        assert image_of(aut, w, p) >> t & 1, (p, q, w)
        assert image_of(aut, w, q) >> t & 1, (p, q, w)
    return slp, names


def test_merge_words_contract_on_fixtures(fixture_aut):
    n = fixture_aut.n
    for p in range(n):
        slp, _ = check_merge_contract(fixture_aut, p)
        assert slp.length <= n * n + 2 * n


def test_merge_words_ex44_state_2():
    _, names = check_merge_contract(generators.ex44(), 1)
    assert sorted(names) == [0, 1, 2]


def test_merge_words_fig4_tree_rooted_at_44():
    # the hand-built merge tree for p = 7 is rooted at (4,4)
    aut = generators.fig4()
    slp, names = check_merge_contract(aut, 6, root=3)
    assert sorted(names) == [0, 2, 4, 6]
    assert eval_slp_word(slp, names[0]) == word("aab")  # u1, path ρ1
    assert eval_slp_word(slp, names[4]) == word("aab")  # u2, path ρ2
    assert eval_slp_word(slp, names[6]) == word("aab")  # (7,7) → (8,8) → (1,1) → (4,4)
    check_merge_contract(aut, 6)


def test_merge_words_one_state():
    aut = Automaton.from_transitions(1, ("a",), [("a", 0, 0)])
    slp, names = merge_words(aut, 0)
    assert eval_slp_word(slp, names[0]) == ()


def test_merge_words_contract_on_pool(pool):
    for seed, kind, aut in pool[:80]:
        check_merge_contract(aut, 0)


# maximal column word


def column_weight(aut, w, p, alpha):
    col = word_matrix(aut, w).column(p)
    return sum((alpha[i] for i in states_of(col)), F(0))


def test_maximal_column_word_examples():
    ex44 = generators.ex44()
    w = expand(maximal_column_word(ex44, 0))
    assert column_weight(ex44, w, 0, [F(1, 4)] * 4) == F(1, 2)
    ex46 = generators.ex46()
    w = expand(maximal_column_word(ex46, 0))
    assert word_matrix(ex46, w).column(0) == mask_of([0, 1])
    one = Automaton.from_transitions(1, ("a",), [("a", 0, 0)])
    assert expand(maximal_column_word(one, 0)) == ()


def test_maximal_column_word_is_stable(fixture_aut):
    weights = analyse_component(fixture_aut).weights
    for p in range(fixture_aut.n):
        slp = maximal_column_word(fixture_aut, p, weights)
        assert slp.length <= 8 * fixture_aut.n ** 2
        m = eval_slp_matrix(fixture_aut, slp, slp.initial)
        assert dot(weights.alpha, [(m.column(p) >> i) & 1 for i in range(fixture_aut.n)]) == weights.mcw
        for g in fixture_aut.matrices:
            col = (g @ m).column(p)
            assert sum((weights.alpha[i] for i in states_of(col)), F(0)) == weights.mcw


# minimum-rank word


def test_min_rank_word_ex44():
    aut = generators.ex44()
    wit = min_rank_word(aut)
    assert wit.rank == 2
    assert integer_rank(wit.matrix.to_lists()) == 2
    assert len({c for c in wit.matrix.columns() if c}) == 2
    # a and b are minimum-rank words themselves
    for a in "ab":
        assert integer_rank(aut.matrix(a).to_lists()) == 2


def test_min_rank_word_cerny3():
    wit = min_rank_word(generators.cerny(3))
    assert len({c for c in wit.matrix.columns() if c}) == 1
    # oracle: some monoid element has one distinct nonzero column
    table = enumerate_monoid(generators.cerny(3))
    assert min(len({c for c in m.columns() if c}) for m in table.elements) == 1


def test_min_rank_word_one_state():
    aut = Automaton.from_transitions(1, ("a",), [("a", 0, 0)])
    wit = min_rank_word(aut)
    assert wit.matrix == BoolMatrix.identity(1) and wit.rank == 1


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_min_rank_word_expands_to_its_matrix(name):
    aut = FIXTURES[name]()
    wit = min_rank_word(aut)
    top = wit.slp.initial
    assert expanded_length(wit.slp, top) <= 10 ** 4
    assert word_matrix(aut, eval_slp_word(wit.slp, top)) == wit.matrix
    dec = wit.cesari
    assert {c for c, _ in dec.rectangles} == {c for c in wit.matrix.columns() if c}


def test_min_rank_word_every_pivot(fixture_aut):
    r = rank(fixture_aut).total
    for p in range(fixture_aut.n):
        assert min_rank_word(fixture_aut, p).rank == r


def test_lemma_45_squares_reach_minimum_rank(pool):
    # whenever all nonzero columns and rows of M(v) are maximal, M(vv) has minimum rank
    for seed, kind, aut in pool[:40]:
        report = analyse_component(aut)
        w = report.weights
        for m in enumerate_monoid(aut).elements:
            cols = {c for c in m.columns() if c}
            rows = {x for x in m.rows if x}
            if all(sum((w.alpha[i] for i in states_of(c)), F(0)) == w.mcw for c in cols) and all(
                sum((w.beta[i] for i in states_of(x)), F(0)) == w.mrw for x in rows
            ):
                assert integer_rank((m @ m).to_lists()) == report.rank, seed


def test_min_rank_word_preconditions():
    with pytest.raises(PreconditionError):
        min_rank_word(generators.flower())
    split = Automaton.from_transitions(2, ("a",), [("a", 0, 1), ("a", 1, 1)])
    with pytest.raises(PreconditionError):
        min_rank_word(split)


# total-DFA path


def test_dfa_path_examples():
    _, image = dfa_min_rank_word(generators.ex44(), expected_rank=2)
    assert len(set(image)) == 2
    _, image = dfa_min_rank_word(generators.cerny(3))
    assert len(set(image)) == 1
    perm = generators.from_functions(4, {"a": [1, 2, 3, 0], "b": [0, 1, 2, 3]})
    _, image = dfa_min_rank_word(perm)
    assert len(set(image)) == 4


def test_dfa_path_transformation_matches_slp(fixture_aut):
    if not fixture_aut.is_total_dfa:
        with pytest.raises(PreconditionError):
            dfa_min_rank_word(fixture_aut)
        return
    slp, image = dfa_min_rank_word(fixture_aut)
    assert eval_slp_transformation(fixture_aut, slp, slp.initial) == image
    assert len(set(image)) == rank(fixture_aut).total
