"""Fixture automata and random families."""

from __future__ import annotations

import random as _random
from typing import Sequence

from .automaton import Automaton, BoolMatrix, check_unambiguous, scc_decompose
from .errors import InputError
from .rank import completeness_check

FIG1_CODE = ("aa", "aab", "aba", "abab")


def ex44() -> Automaton:
    """Four-state DFA of rank 2 whose maximal columns span a 3-dimensional space."""
    return Automaton.from_matrices({
        "a": [[1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 1, 0], [1, 0, 0, 0]],
        "b": [[0, 1, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 0, 1]],
    })


def ex46() -> Automaton:
    """Three-letter DFA where span(MCol) is strictly smaller than U^⊥."""
    return Automaton.from_matrices({
        "a": [[1, 0, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 1, 0]],
        "b": [[0, 1, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 0, 1]],
        "c": [[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]],
    })


def fig2() -> Automaton:
    return Automaton.from_matrices({
        "a": [[1, 0, 1, 0], [1, 0, 1, 0], [0, 0, 0, 0], [0, 0, 0, 0]],
        "b": [[0, 0, 0, 0], [0, 0, 0, 0], [0, 1, 0, 1], [0, 1, 0, 1]],
    })


def fig4() -> Automaton:
    edges = [
        ("a", 1, 2),
        ("a", 2, 3), ("b", 2, 3),
        ("a", 3, 4), ("b", 3, 4),
        ("a", 4, 5), ("b", 4, 5),
        ("a", 5, 6), ("b", 5, 6),
        ("b", 6, 7),
        ("a", 7, 8), ("b", 7, 8),
        ("a", 8, 1), ("b", 8, 1),
        ("b", 1, 4),
        ("a", 6, 3),
    ]
    return Automaton.from_transitions(8, ("a", "b"), [(a, p - 1, q - 1) for a, p, q in edges])


def flower(code: Sequence[str] = FIG1_CODE, alphabet: Sequence[str] | None = None) -> Automaton:
    """Flower automaton: state 1 is the centre, each codeword is a petal through it."""
    if not code or any(not x for x in code):
        raise InputError("flower automaton needs nonempty codewords")
    if alphabet is None:
        alphabet = sorted({a for x in code for a in x})
    transitions = []
    n = 1
    for x in code:
        prev = 0
        for k, a in enumerate(x):
            if k == len(x) - 1:
                nxt = 0
            else:
                nxt = n
                n += 1
            transitions.append((a, prev, nxt))
            prev = nxt
    return Automaton.from_transitions(n, tuple(alphabet), transitions)


def cerny(n: int) -> Automaton:
    """Classical Černý automaton: ``a`` rotates, ``b`` sends state 1 to state 2."""
    if n < 1:
        raise InputError("cerny needs n ≥ 1")
    a = [(i + 1) % n for i in range(n)]
    b = [1 % n if i == 0 else i for i in range(n)]
    return from_functions(n, {"a": a, "b": b})


def from_functions(n: int, funcs: dict[str, Sequence[int]]) -> Automaton:
    mats = tuple(BoolMatrix(n, tuple(1 << f[i] for i in range(n))) for f in funcs.values())
    return Automaton(n, tuple(funcs), mats)


def _letters(m: int) -> tuple[str, ...]:
    return tuple("abcdefghijklmnopqrstuvwxyz"[k] if m <= 26 else f"x{k}" for k in range(m))


def random_dfa(n: int, m: int, rng: _random.Random, strongly_connected: bool = True) -> Automaton:
    """Random total DFA; with ``strongly_connected`` it is resampled until strongly connected."""
    alphabet = _letters(m)
    while True:
        aut = from_functions(n, {a: [rng.randrange(n) for _ in range(n)] for a in alphabet})
        if not strongly_connected or len(scc_decompose(aut)) == 1:
            return aut


def random_closed_dfa(n: int, m: int, rng: _random.Random) -> Automaton:
    """Strongly connected DFA with at most ``n`` states: a sink component of a random DFA."""
    alphabet = _letters(m)
    aut = from_functions(n, {a: [rng.randrange(n) for _ in range(n)] for a in alphabet})
    last = scc_decompose(aut).components[-1]
    return aut.restrict(last)


def random_ufa(
    n: int,
    m: int,
    density: float,
    rng: _random.Random,
    max_tries: int = 200_000,
    require_complete: bool = True,
) -> Automaton:
    """Rejection-sample sparse generators until unambiguous, strongly connected and complete.

    With ``require_complete=False`` the completeness test is skipped.
    """
    alphabet = _letters(m)
    for _ in range(max_tries):
        rows = [
            [sum(1 << j for j in range(n) if rng.random() < density) for _ in range(n)]
            for _ in alphabet
        ]
        aut = Automaton(n, alphabet, tuple(BoolMatrix(n, tuple(r)) for r in rows))
        if len(scc_decompose(aut)) != 1:
            continue
        if check_unambiguous(aut) is not None:
            continue
        if not require_complete or completeness_check(aut):
            return aut
    raise InputError(f"no strongly connected UFA found in {max_tries} samples")


def out_split(aut: Automaton, state: int, group: set[tuple[str, int]]) -> Automaton:
    """Split ``state`` in two: the copy ``n`` keeps the outgoing edges in ``group``.

    Every edge into ``state`` is duplicated into the new copy.  Paths of the
    split automaton project bijectively onto paths of ``aut`` once their
    endpoints are fixed, so unambiguity and completeness carry over.
    """
    n = aut.n
    out = [(a, q) for a, p, q in aut.transitions() if p == state]
    if not group or len(group) >= len(out):
        raise InputError("both copies of a split state need an outgoing edge")
    transitions = []
    for a, p, q in aut.transitions():
        src = n if p == state and (a, q) in group else p
        transitions.append((a, src, q))
        if q == state:
            transitions.append((a, src, n))
    return Automaton.from_transitions(n + 1, aut.alphabet, transitions)


def random_split_ufa(n: int, m: int, rng: _random.Random) -> Automaton:
    """Nondeterministic complete strongly connected UFA from repeated out-splits of a random DFA.

    The start DFA is transposed half of the time, which turns out-splits
    into in-splits of a DFA.
    """
    if n < 2:
        return random_dfa(n, m, rng)
    aut = random_dfa(rng.randint(max(1, n // 2), n - 1), m, rng)
    if rng.random() < 0.5:
        aut = aut.transposed()
    while aut.n < n:
        candidates = [
            p for p in range(aut.n) if len([1 for _, s, _ in aut.transitions() if s == p]) >= 2
        ]
        if not candidates:
            break
        p = rng.choice(candidates)
        out = [(a, q) for a, s, q in aut.transitions() if s == p]
        rng.shuffle(out)
        aut = out_split(aut, p, set(out[: rng.randint(1, len(out) - 1)]))
    return aut


def random_automaton(
    n: int, m: int, density: float, seed: int, kind: str = "ufa"
) -> Automaton:
    rng = _random.Random(seed)
    if kind == "ufa":
        return random_ufa(n, m, density, rng)
    if kind == "dfa":
        return random_dfa(n, m, rng)
    if kind == "codfa":
        return random_dfa(n, m, rng).transposed()
    if kind == "split":
        return random_split_ufa(n, m, rng)
    raise InputError(f"unknown random kind {kind!r}")


FAMILIES = ("ex44", "ex46", "fig2", "fig4", "flower", "cerny", "random")


def generate(family: str, **params) -> Automaton:
    if family == "ex44":
        return ex44()
    if family == "ex46":
        return ex46()
    if family == "fig2":
        return fig2()
    if family == "fig4":
        return fig4()
    if family == "flower":
        code = params.get("code")
        return flower(code) if code else flower()
    if family == "cerny":
        return cerny(params.get("n", 4))
    if family == "random":
        return random_automaton(
            params.get("n", 5),
            params.get("m", 2),
            params.get("density", 0.3),
            params.get("seed", 0),
            params.get("kind", "ufa"),
        )
    raise InputError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
