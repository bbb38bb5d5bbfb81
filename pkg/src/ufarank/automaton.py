"""Automata over zero-one matrices.

An :class:`Automaton` is a semi-automaton given by one zero-one matrix per
letter.  Matrices are stored as bit-packed rows: bit ``j`` of ``rows[i]`` is
the entry ``(i, j)``.  State sets use the same encoding (an ``int`` bitmask).

States are 0-indexed in the Python API.  Every text/JSON surface (files,
reports, CLI) uses 1-indexed states.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import AmbiguityViolation, ParseError, UnreachableError

Word = tuple  # tuple of letter symbols


def mask_of(states: Iterable[int]) -> int:
    mask = 0
    for s in states:
        mask |= 1 << s
    return mask


def states_of(mask: int) -> list[int]:
    """Ascending 0-indexed states in ``mask``."""
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def lowest_state(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


def format_word(word: Sequence[str]) -> str:
    if not word:
        return "ε"
    if all(len(a) == 1 for a in word):
        return "".join(word)
    return " ".join(word)


@dataclass(frozen=True)
class BoolMatrix:
    """Square zero-one matrix with bit-packed rows."""

    n: int
    rows: tuple[int, ...]

    @classmethod
    def identity(cls, n: int) -> BoolMatrix:
        return cls(n, tuple(1 << i for i in range(n)))

    @classmethod
    def zero(cls, n: int) -> BoolMatrix:
        return cls(n, (0,) * n)

    @classmethod
    def from_lists(cls, entries: Sequence[Sequence[int]]) -> BoolMatrix:
        n = len(entries)
        rows = []
        for i, row in enumerate(entries):
            if len(row) != n:
                raise ValueError(f"row {i} has length {len(row)}, expected {n}")
            bits = 0
            for j, x in enumerate(row):
                if x not in (0, 1):
                    raise ValueError(f"entry ({i},{j}) = {x} is not 0/1")
                if x:
                    bits |= 1 << j
            rows.append(bits)
        return cls(n, tuple(rows))

    def to_lists(self) -> list[list[int]]:
        return [[(r >> j) & 1 for j in range(self.n)] for r in self.rows]

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return (self.rows[i] >> j) & 1

    def row(self, i: int) -> int:
        return self.rows[i]

    def column(self, j: int) -> int:
        bit = 1 << j
        mask = 0
        for i, r in enumerate(self.rows):
            if r & bit:
                mask |= 1 << i
        return mask

    def columns(self) -> list[int]:
        return [self.column(j) for j in range(self.n)]

    def transpose(self) -> BoolMatrix:
        return BoolMatrix(self.n, tuple(self.columns()))

    def is_zero(self) -> bool:
        return not any(self.rows)

    def ones(self) -> int:
        return sum(bin(r).count("1") for r in self.rows)

    def bool_mul(self, other: BoolMatrix) -> BoolMatrix:
        """Boolean product (OR of ANDs); never detects overflow."""
        out = []
        orows = other.rows
        for r in self.rows:
            acc = 0
            while r:
                low = r & -r
                acc |= orows[low.bit_length() - 1]
                r ^= low
            out.append(acc)
        return BoolMatrix(self.n, tuple(out))

    def checked_mul(self, other: BoolMatrix) -> BoolMatrix:
        """Integer product; raises if some entry would exceed 1."""
        out = []
        orows = other.rows
        for i, r in enumerate(self.rows):
            acc = 0
            while r:
                low = r & -r
                nxt = orows[low.bit_length() - 1]
                if acc & nxt:
                    j = lowest_state(acc & nxt)
                    raise AmbiguityViolation(
                        f"product entry ({i + 1},{j + 1}) is at least 2"
                    )
                acc |= nxt
                r ^= low
            out.append(acc)
        return BoolMatrix(self.n, tuple(out))

    __matmul__ = checked_mul

    def vecmul(self, vec):
        """Row vector times matrix, over any numeric entries."""
        out = [0] * self.n
        for i, r in enumerate(self.rows):
            x = vec[i]
            if not x:
                continue
            while r:
                low = r & -r
                out[low.bit_length() - 1] += x
                r ^= low
        return out

    def matvec(self, vec):
        """Matrix times column vector, over any numeric entries."""
        out = []
        for r in self.rows:
            s = 0
            while r:
                low = r & -r
                s += vec[low.bit_length() - 1]
                r ^= low
            out.append(s)
        return out

    def __str__(self) -> str:
        return "\n".join(
            " ".join(str((r >> j) & 1) for j in range(self.n)) for r in self.rows
        )


@dataclass(frozen=True)
class Automaton:
    """Semi-automaton ``(Q, Σ, Δ)`` given by its letter matrices."""

    n: int
    alphabet: tuple[str, ...]
    matrices: tuple[BoolMatrix, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("automaton needs at least one state")
        if not self.alphabet:
            raise ValueError("alphabet is empty")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError("alphabet symbols must be distinct")
        if any(not a for a in self.alphabet):
            raise ValueError("alphabet symbols must be nonempty")
        if len(self.matrices) != len(self.alphabet):
            raise ValueError("one matrix per letter required")
        limit = 1 << self.n
        for mat in self.matrices:
            if mat.n != self.n or len(mat.rows) != self.n:
                raise ValueError("matrix dimension does not match state count")
            if any(r < 0 or r >= limit for r in mat.rows):
                raise ValueError("matrix row out of range")

    @classmethod
    def from_transitions(
        cls, n: int, alphabet: Sequence[str], transitions: Iterable[tuple[str, int, int]]
    ) -> Automaton:
        """Build from 0-indexed ``(letter, source, target)`` triples."""
        index = {a: k for k, a in enumerate(alphabet)}
        rows = [[0] * n for _ in alphabet]
        for a, p, q in transitions:
            rows[index[a]][p] |= 1 << q
        return cls(n, tuple(alphabet), tuple(BoolMatrix(n, tuple(r)) for r in rows))

    @classmethod
    def from_matrices(cls, mats: dict[str, Sequence[Sequence[int]]]) -> Automaton:
        alphabet = tuple(mats)
        matrices = tuple(BoolMatrix.from_lists(mats[a]) for a in alphabet)
        return cls(matrices[0].n, alphabet, matrices)

    @property
    def m(self) -> int:
        return len(self.alphabet)

    @property
    def is_total_dfa(self) -> bool:
        return all(
            r and not (r & (r - 1)) for mat in self.matrices for r in mat.rows
        )

    def matrix(self, letter: str) -> BoolMatrix:
        return self.matrices[self.alphabet.index(letter)]

    def transitions(self) -> Iterator[tuple[str, int, int]]:
        for a, mat in zip(self.alphabet, self.matrices):
            for p, r in enumerate(mat.rows):
                for q in states_of(r):
                    yield a, p, q

    def successors(self, p: int) -> int:
        """Union over letters of ``p·a``."""
        mask = 0
        for mat in self.matrices:
            mask |= mat.rows[p]
        return mask

    def transposed(self) -> Automaton:
        return Automaton(self.n, self.alphabet, tuple(m.transpose() for m in self.matrices))

    def restrict(self, states: Sequence[int]) -> Automaton:
        """Sub-automaton on ``states`` keeping only internal transitions."""
        pos = {s: k for k, s in enumerate(states)}
        mats = []
        for mat in self.matrices:
            rows = []
            for s in states:
                bits = 0
                for t in states_of(mat.rows[s]):
                    if t in pos:
                        bits |= 1 << pos[t]
                rows.append(bits)
            mats.append(BoolMatrix(len(states), tuple(rows)))
        return Automaton(len(states), self.alphabet, tuple(mats))

    # serialisation (1-indexed states)

    def to_text(self) -> str:
        lines = [f"states {self.n}", "alphabet " + " ".join(self.alphabet)]
        for a, p, q in self.transitions():
            lines.append(f"trans {a} {p + 1} {q + 1}")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "states": self.n,
            "alphabet": list(self.alphabet),
            "transitions": [[a, p + 1, q + 1] for a, p, q in self.transitions()],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def parse_automaton(text: str) -> Automaton:
    """Parse the line format or its JSON alternative (detected by a leading ``{``)."""
    if text.lstrip().startswith("{"):
        return _parse_json(text)
    n = None
    alphabet: list[str] | None = None
    transitions = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if n is None:
            if parts[0] != "states" or len(parts) != 2:
                raise ParseError("expected 'states <n>'", lineno)
            try:
                n = int(parts[1])
            except ValueError:
                raise ParseError(f"bad state count {parts[1]!r}", lineno) from None
            if n < 1:
                raise ParseError("state count must be positive", lineno)
        elif alphabet is None:
            if parts[0] != "alphabet" or len(parts) < 2:
                raise ParseError("expected 'alphabet <sym> ...'", lineno)
            alphabet = parts[1:]
            if len(set(alphabet)) != len(alphabet):
                raise ParseError("duplicate alphabet symbol", lineno)
        else:
            if parts[0] != "trans" or len(parts) != 4:
                raise ParseError("expected 'trans <sym> <from> <to>'", lineno)
            transitions.add(_check_transition(parts[1], parts[2], parts[3], n, alphabet, lineno))
    if n is None:
        raise ParseError("missing 'states' line", 0)
    if alphabet is None:
        raise ParseError("missing 'alphabet' line", 0)
    return Automaton.from_transitions(n, alphabet, sorted(transitions))


def _check_transition(a, p, q, n, alphabet, lineno):
    if a not in alphabet:
        raise ParseError(f"unknown letter {a!r}", lineno)
    try:
        p, q = int(p), int(q)
    except (TypeError, ValueError):
        raise ParseError("state indices must be integers", lineno) from None
    for s in (p, q):
        if not 1 <= s <= n:
            raise ParseError(f"state {s} out of range 1..{n}", lineno)
    return a, p - 1, q - 1


def _parse_json(text: str) -> Automaton:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno) from None
    try:
        n = doc["states"]
        alphabet = doc["alphabet"]
        triples = doc.get("transitions", [])
    except (KeyError, TypeError):
        raise ParseError("JSON automaton needs 'states' and 'alphabet'", 0) from None
    if not isinstance(n, int) or n < 1:
        raise ParseError("state count must be a positive integer", 0)
    if not alphabet or not all(isinstance(a, str) and a for a in alphabet):
        raise ParseError("alphabet must be a nonempty list of strings", 0)
    if len(set(alphabet)) != len(alphabet):
        raise ParseError("duplicate alphabet symbol", 0)
    transitions = set()
    for k, t in enumerate(triples):
        if not isinstance(t, list) or len(t) != 3:
            raise ParseError(f"transition #{k + 1} is not a [symbol, from, to] triple", 0)
        transitions.add(_check_transition(t[0], t[1], t[2], n, alphabet, 0))
    return Automaton.from_transitions(n, alphabet, sorted(transitions))


def word_matrix(aut: Automaton, word: Sequence[str]) -> BoolMatrix:
    """``M(word)`` via checked integer products."""
    mat = BoolMatrix.identity(aut.n)
    for a in word:
        mat = mat.checked_mul(aut.matrix(a))
    return mat


# square automaton


@dataclass(frozen=True)
class PairGraph:
    """Square automaton on ``Q×Q``; edges are generated from the letter matrices."""

    aut: Automaton

    @property
    def n(self) -> int:
        return self.aut.n

    def vertices(self) -> Iterator[tuple[int, int]]:
        n = self.aut.n
        for p in range(n):
            for q in range(n):
                yield p, q

    @staticmethod
    def is_diagonal(v: tuple[int, int]) -> bool:
        return v[0] == v[1]

    def successors(self, v: tuple[int, int]) -> Iterator[tuple[str, tuple[int, int]]]:
        p, q = v
        for a, mat in zip(self.aut.alphabet, self.aut.matrices):
            rp, rq = mat.rows[p], mat.rows[q]
            if not (rp and rq):
                continue
            qs = states_of(rq)
            for p2 in states_of(rp):
                for q2 in qs:
                    yield a, (p2, q2)

    def predecessors(self, v: tuple[int, int]) -> Iterator[tuple[str, tuple[int, int]]]:
        p, q = v
        for a, mat in zip(self.aut.alphabet, self.aut.matrices):
            cp, cq = mat.column(p), mat.column(q)
            if not (cp and cq):
                continue
            qs = states_of(cq)
            for p2 in states_of(cp):
                for q2 in qs:
                    yield a, (p2, q2)

    def edges(self) -> list[tuple[tuple[int, int], str, tuple[int, int]]]:
        if self.aut.n ** 2 > 10 ** 4:
            raise ValueError("explicit edge list only built for n² ≤ 10⁴")
        return [(v, a, w) for v in self.vertices() for a, w in self.successors(v)]


def square_graph(aut: Automaton) -> PairGraph:
    return PairGraph(aut)


def backward_search(
    graph: PairGraph, sources: Iterable[tuple[int, int]]
) -> dict[tuple[int, int], tuple[str, tuple[int, int]] | None]:
    """BFS against edge direction; maps each reached vertex to ``(letter, next)``
    where ``v --letter--> next`` is the first edge of a shortest path to a source."""
    nxt: dict = {}
    queue = deque()
    for s in sources:
        if s not in nxt:
            nxt[s] = None
            queue.append(s)
    while queue:
        v = queue.popleft()
        for a, u in graph.predecessors(v):
            if u not in nxt:
                nxt[u] = (a, v)
                queue.append(u)
    return nxt


@dataclass(frozen=True)
class Diamond:
    """Two distinct paths ``p --w1--> t1 --w2--> q`` and ``p --w1--> t2 --w2--> q``."""

    p: int
    q: int
    t1: int
    t2: int
    word1: Word
    word2: Word

    @property
    def word(self) -> Word:
        return self.word1 + self.word2

    def describe(self) -> str:
        return (
            f"states {self.p + 1} and {self.q + 1} are joined by two paths labelled "
            f"{format_word(self.word)} (via {self.t1 + 1} and {self.t2 + 1})"
        )


def check_unambiguous(aut: Automaton) -> Diamond | None:
    """``None`` if the automaton is diamond-free, otherwise a counterexample."""
    graph = PairGraph(aut)
    diagonal = [(s, s) for s in range(aut.n)]
    coreach = backward_search(graph, diagonal)
    parent: dict = {d: None for d in diagonal}
    queue = deque(diagonal)
    while queue:
        v = queue.popleft()
        for a, w in graph.successors(v):
            if w in parent:
                continue
            parent[w] = (a, v)
            if w[0] != w[1] and w in coreach:
                return _diamond(w, parent, coreach)
            queue.append(w)
    return None


def _diamond(v, parent, coreach) -> Diamond:
    w1 = []
    u = v
    while parent[u] is not None:
        a, u = parent[u]
        w1.append(a)
    w1.reverse()
    p = u[0]
    w2 = []
    u = v
    while coreach[u] is not None:
        a, u = coreach[u]
        w2.append(a)
    return Diamond(p, u[0], v[0], v[1], tuple(w1), tuple(w2))


# strongly connected components


@dataclass(frozen=True)
class SccDecomposition:
    """Components in topological order of the condensation."""

    components: tuple[tuple[int, ...], ...]
    index: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.components)

    def sub_automaton(self, aut: Automaton, k: int) -> Automaton:
        return aut.restrict(self.components[k])


def scc_decompose(aut: Automaton) -> SccDecomposition:
    n = aut.n
    succ = [states_of(aut.successors(p)) for p in range(n)]
    order = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    found: list[tuple[int, ...]] = []
    counter = 0
    for root in range(n):
        if order[root] != -1:
            continue
        work = [(root, 0)]
        order[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, i = work[-1]
            if i < len(succ[v]):
                work[-1] = (v, i + 1)
                w = succ[v][i]
                if order[w] == -1:
                    order[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], order[w])
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == order[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                found.append(tuple(sorted(comp)))
    # Tarjan emits sinks first
    found.reverse()
    index = [0] * n
    for k, comp in enumerate(found):
        for s in comp:
            index[s] = k
    return SccDecomposition(tuple(found), tuple(index))


def is_strongly_connected(aut: Automaton) -> bool:
    return len(scc_decompose(aut)) == 1


def shortest_path_word(aut: Automaton, p: int, q: int) -> Word:
    """Lexicographically least among the shortest words ``u`` with ``q ∈ p·u``."""
    if p == q:
        return ()
    parent = {p: None}
    frontier = [p]
    while frontier:
        nxt = []
        for s in frontier:
            for a, mat in zip(aut.alphabet, aut.matrices):
                for t in states_of(mat.rows[s]):
                    if t in parent:
                        continue
                    parent[t] = (a, s)
                    if t == q:
                        word = []
                        while parent[t] is not None:
                            a, t = parent[t]
                            word.append(a)
                        return tuple(reversed(word))
                    nxt.append(t)
        frontier = nxt
    raise UnreachableError(f"state {q + 1} is not reachable from state {p + 1}")
