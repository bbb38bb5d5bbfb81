"""Straight-line programs over an automaton's alphabet.

An :class:`Slp` has one rule per nonterminal and a tuple of initial
nonterminals (a single initial gives an ordinary SLP, several give a set-SLP).
Rules are stored in definition order and every right-hand side only refers to
earlier nonterminals, which is the acyclicity order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .automaton import Automaton, BoolMatrix


class SlpError(ValueError):
    pass


@dataclass(frozen=True)
class Slp:
    terminals: tuple[str, ...]
    rules: tuple[tuple[str, tuple[str, ...]], ...]
    initials: tuple[str, ...]

    @property
    def rule_map(self) -> dict[str, tuple[str, ...]]:
        return dict(self.rules)

    @property
    def initial(self) -> str:
        if len(self.initials) != 1:
            raise SlpError(f"program has {len(self.initials)} initial symbols")
        return self.initials[0]

    @property
    def length(self) -> int:
        """Total length of all right-hand sides."""
        return sum(len(rhs) for _, rhs in self.rules)

    def validate(self) -> None:
        """Raise :class:`SlpError` unless the rule order witnesses acyclicity."""
        seen: set[str] = set()
        terms = set(self.terminals)
        for lhs, rhs in self.rules:
            if lhs in terms:
                raise SlpError(f"nonterminal {lhs!r} clashes with a terminal")
            if lhs in seen:
                raise SlpError(f"nonterminal {lhs!r} has two rules")
            for s in rhs:
                if s not in terms and s not in seen:
                    raise SlpError(f"rule {lhs!r} uses {s!r} before its definition")
            seen.add(lhs)
        for s in self.initials:
            if s not in seen:
                raise SlpError(f"initial symbol {s!r} has no rule")

    def to_dict(self) -> dict:
        return {
            "terminals": list(self.terminals),
            "rules": [{"lhs": lhs, "rhs": list(rhs)} for lhs, rhs in self.rules],
            "initials": list(self.initials),
        }

    @classmethod
    def from_dict(cls, doc: dict) -> Slp:
        return cls(
            tuple(doc["terminals"]),
            tuple((r["lhs"], tuple(r["rhs"])) for r in doc["rules"]),
            tuple(doc["initials"]),
        )

    @classmethod
    def from_rules(
        cls, terminals: Iterable[str], rules: dict[str, Sequence[str]], initials: Sequence[str]
    ) -> Slp:
        """Build from rules in any order; they are sorted topologically."""
        terms = set(terminals)
        ordered: list[tuple[str, tuple[str, ...]]] = []
        state: dict[str, int] = {}

        def visit(v: str) -> None:
            if state.get(v) == 2:
                return
            if state.get(v) == 1:
                raise SlpError(f"cycle through nonterminal {v!r}")
            if v not in rules:
                raise SlpError(f"no rule for {v!r}")
            state[v] = 1
            for s in rules[v]:
                if s not in terms:
                    visit(s)
            state[v] = 2
            ordered.append((v, tuple(rules[v])))

        for v in rules:
            visit(v)
        return cls(tuple(terminals), tuple(ordered), tuple(initials))

    def reversed(self) -> Slp:
        """Program for the mirror images of the encoded words."""
        return Slp(
            self.terminals,
            tuple((lhs, tuple(reversed(rhs))) for lhs, rhs in self.rules),
            self.initials,
        )


def _evaluate(slp: Slp, leaf: Callable, identity, mul: Callable, targets: Iterable[str]) -> dict:
    rules = slp.rule_map
    terms = set(slp.terminals)
    values: dict = {}
    state: dict[str, int] = {}
    for target in targets:
        stack = [target]
        while stack:
            v = stack[-1]
            if v in values:
                stack.pop()
                continue
            if v not in rules:
                raise SlpError(f"no rule for {v!r}")
            if state.get(v) != 1:
                state[v] = 1
                pending = [s for s in rules[v] if s not in terms and s not in values]
                for s in pending:
                    if state.get(s) == 1:
                        raise SlpError(f"cycle through nonterminal {s!r}")
                stack.extend(pending)
                continue
            acc = identity
            for s in rules[v]:
                acc = mul(acc, leaf(s) if s in terms else values[s])
            values[v] = acc
            state[v] = 2
            stack.pop()
    return values


def expanded_length(slp: Slp, initial: str) -> int:
    return _evaluate(slp, lambda a: 1, 0, lambda x, y: x + y, [initial])[initial]


def eval_slp_word(slp: Slp, initial: str) -> tuple[str, ...]:
    return _evaluate(slp, lambda a: (a,), (), lambda x, y: x + y, [initial])[initial]


def eval_slp_matrix(aut: Automaton, slp: Slp, initial: str) -> BoolMatrix:
    """``M`` of the encoded word, one checked product per right-hand-side symbol."""
    return _evaluate(
        slp,
        aut.matrix,
        BoolMatrix.identity(aut.n),
        BoolMatrix.checked_mul,
        [initial],
    )[initial]


def compose(f: tuple[int, ...], g: tuple[int, ...]) -> tuple[int, ...]:
    """Transformation of ``uv`` from those of ``u`` (``f``) and ``v`` (``g``)."""
    return tuple(g[x] for x in f)


def eval_slp_transformation(aut: Automaton, slp: Slp, initial: str) -> tuple[int, ...]:
    letters = {a: tuple(r.bit_length() - 1 for r in mat.rows) for a, mat in zip(aut.alphabet, aut.matrices)}
    return _evaluate(slp, letters.__getitem__, tuple(range(aut.n)), compose, [initial])[initial]


class SlpBuilder:
    """Accumulates rules in definition order and tracks the value of each symbol.

    ``leaf``/``identity``/``mul`` describe the monoid the values live in
    (matrices, transformations, ...).
    """

    def __init__(self, terminals: Sequence[str], leaf: Callable, identity, mul: Callable):
        self.terminals = tuple(terminals)
        self._terms = set(terminals)
        self.leaf = leaf
        self.identity = identity
        self.mul = mul
        self.rules: dict[str, tuple[str, ...]] = {}
        self.values: dict = {}
        self._counters: dict[str, int] = {}

    def fresh(self, prefix: str) -> str:
        while True:
            k = self._counters.get(prefix, 0) + 1
            self._counters[prefix] = k
            name = f"{prefix}{k}"
            if name not in self._terms and name not in self.rules:
                return name

    def value(self, symbol: str):
        if symbol in self._terms:
            return self.leaf(symbol)
        return self.values[symbol]

    def value_of(self, rhs: Sequence[str]):
        acc = self.identity
        for s in rhs:
            acc = self.mul(acc, self.value(s))
        return acc

    def rule(self, prefix: str, rhs: Sequence[str]) -> str:
        name = self.fresh(prefix)
        rhs = tuple(rhs)
        for s in rhs:
            if s not in self._terms and s not in self.rules:
                raise SlpError(f"{s!r} used before its definition")
        self.rules[name] = rhs
        self.values[name] = self.value_of(rhs)
        return name

    def build(self, initials: Sequence[str]) -> Slp:
        return simplify(Slp(self.terminals, tuple(self.rules.items()), tuple(initials)))


def simplify(slp: Slp) -> Slp:
    """Inline non-initial nonterminals whose right-hand side has length ≤ 1 and drop unused rules."""
    keep = set(slp.initials)
    terms = set(slp.terminals)
    subst: dict[str, tuple[str, ...]] = {}
    rules: list[tuple[str, tuple[str, ...]]] = []
    for lhs, rhs in slp.rules:
        new = []
        for s in rhs:
            new.extend(subst.get(s, (s,)))
        new = tuple(new)
        if lhs not in keep and len(new) <= 1:
            subst[lhs] = new
        else:
            rules.append((lhs, new))
    used = set(keep)
    for lhs, rhs in reversed(rules):
        if lhs in used:
            used.update(s for s in rhs if s not in terms)
    return Slp(slp.terminals, tuple(r for r in rules if r[0] in used), slp.initials)


def merge_programs(base: Slp, other: Slp, prefix: str) -> tuple[list[tuple[str, tuple[str, ...]]], dict[str, str]]:
    """Rules of ``other`` renamed with ``prefix`` so they can be appended to ``base``."""
    taken = {lhs for lhs, _ in base.rules} | set(base.terminals)
    terms = set(other.terminals)
    names: dict[str, str] = {}
    for lhs, _ in other.rules:
        name = prefix + lhs
        while name in taken:
            name += "'"
        names[lhs] = name
        taken.add(name)
    rules = [
        (names[lhs], tuple(s if s in terms else names[s] for s in rhs))
        for lhs, rhs in other.rules
    ]
    return rules, names
