"""Minimum rank of unambiguous finite automata."""

from .automaton import Automaton, BoolMatrix, check_unambiguous, parse_automaton, scc_decompose
from .errors import AmbiguityError, InputError, InvariantError
from .rank import RankReport, rank
from .witness import cesari_decompose, dfa_min_rank_word, min_rank_word

__all__ = [
    "AmbiguityError",
    "Automaton",
    "BoolMatrix",
    "InputError",
    "InvariantError",
    "RankReport",
    "cesari_decompose",
    "check_unambiguous",
    "dfa_min_rank_word",
    "min_rank_word",
    "parse_automaton",
    "rank",
    "scc_decompose",
]
