"""Nondeterministic finite automata and the D1/D2/D3/careful synchronization tests.

States are numbered 1..n, symbols 0..alphabet_size-1.  The transition
function is set-valued and may be empty for a (state, symbol) pair, so DFAs
and partial automata are the special cases where every set has size <= 1.

All operations are pure; an `Nfa` is immutable after construction and safe
to share between threads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

Word = Sequence[int]
StateSet = frozenset[int]


@dataclass(frozen=True)
class Nfa:
    """NFA with states 1..n and symbols 0..alphabet_size-1.

    `delta[q-1][s]` is the sorted tuple of successor states of state q under
    symbol s; an empty tuple means the action of s is undefined at q.
    """

    n: int
    alphabet_size: int
    delta: tuple[tuple[tuple[int, ...], ...], ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"need at least one state, got n={self.n}")
        if self.alphabet_size < 2:
            raise ValueError(f"need a binary-or-larger alphabet, got {self.alphabet_size}")
        if len(self.delta) != self.n:
            raise ValueError(f"delta has {len(self.delta)} rows, expected {self.n}")
        for q, row in enumerate(self.delta, start=1):
            if len(row) != self.alphabet_size:
                raise ValueError(f"state {q}: {len(row)} symbol entries, expected {self.alphabet_size}")
            for s, succs in enumerate(row):
                if len(set(succs)) != len(succs):
                    raise ValueError(f"duplicate successors in delta({q},{s})")
                if tuple(sorted(succs)) != tuple(succs):
                    raise ValueError(f"unsorted successors in delta({q},{s})")
                for p in succs:
                    if not 1 <= p <= self.n:
                        raise ValueError(f"delta({q},{s}) contains out-of-range state {p}")

    @staticmethod
    def build(n: int, alphabet_size: int, transitions: Iterable[Iterable[Iterable[int]]]) -> "Nfa":
        """Construct from any nested iterable, canonicalizing successor order."""
        delta = tuple(
            tuple(tuple(sorted(set(succs))) for succs in row) for row in transitions
        )
        return Nfa(n, alphabet_size, delta)

    @property
    def m(self) -> int:
        """Total transition count: sum of |delta(q,s)| over all pairs."""
        return sum(len(succs) for row in self.delta for succs in row)

    def successors(self, q: int, s: int) -> tuple[int, ...]:
        return self.delta[q - 1][s]

    @property
    def states(self) -> range:
        return range(1, self.n + 1)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "alphabet": self.alphabet_size,
            "delta": [[list(succs) for succs in row] for row in self.delta],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Nfa":
        try:
            n, alphabet, delta = obj["n"], obj["alphabet"], obj["delta"]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed NFA JSON: missing {exc}") from exc
        return cls.build(int(n), int(alphabet), delta)

    @classmethod
    def from_json_file(cls, path) -> "Nfa":
        with open(path) as fh:
            return cls.from_json(json.load(fh))


def _check_symbol(nfa: Nfa, s: int) -> None:
    if not 0 <= s < nfa.alphabet_size:
        raise ValueError(f"symbol {s} out of range 0..{nfa.alphabet_size - 1}")


def apply_symbol(nfa: Nfa, xs: Iterable[int], s: int) -> StateSet:
    """Image of a state set under one symbol: union of delta(q,s) over q in xs."""
    _check_symbol(nfa, s)
    out: set[int] = set()
    for q in xs:
        out.update(nfa.delta[q - 1][s])
    return frozenset(out)


def apply_word(nfa: Nfa, xs: Iterable[int], w: Word) -> StateSet:
    """Image of a state set under a word, folding apply_symbol left to right.

    The empty word returns xs unchanged.
    """
    cur = frozenset(xs)
    for s in w:
        cur = apply_symbol(nfa, cur, s)
    return cur


def is_d3_word(nfa: Nfa, w: Word) -> bool:
    """True iff the images q.w of all states share a common state."""
    common: Optional[StateSet] = None
    for q in nfa.states:
        img = apply_word(nfa, (q,), w)
        common = img if common is None else common & img
        if not common:
            return False
    return bool(common)


def is_d2_word(nfa: Nfa, w: Word) -> bool:
    """True iff every q.w is nonempty and equal to Q.w."""
    images = [apply_word(nfa, (q,), w) for q in nfa.states]
    total = frozenset().union(*images)
    return all(img and img == total for img in images)


def is_d1_word(nfa: Nfa, w: Word) -> bool:
    """True iff every q.w is the same singleton."""
    images = [apply_word(nfa, (q,), w) for q in nfa.states]
    total = frozenset().union(*images)
    return len(total) == 1 and all(len(img) == 1 for img in images)


def is_carefully_sync_word(nfa: Nfa, w: Word) -> bool:
    """True iff applying w from the full state set never hits an undefined
    transition and ends in a singleton.

    The empty word qualifies only in the degenerate one-state case.
    """
    cur = frozenset(nfa.states)
    for s in w:
        if any(not nfa.delta[q - 1][s] for q in cur):
            return False
        cur = apply_symbol(nfa, cur, s)
    return len(cur) == 1


def everywhere_defined_symbol(nfa: Nfa) -> Optional[int]:
    """Smallest symbol whose action is defined at every state, or None."""
    for s in range(nfa.alphabet_size):
        if all(nfa.delta[q - 1][s] for q in nfa.states):
            return s
    return None


def preimages(nfa: Nfa, q: int, s: int) -> StateSet:
    """States p with q in delta(p,s)."""
    _check_symbol(nfa, s)
    if not 1 <= q <= nfa.n:
        raise ValueError(f"state {q} out of range 1..{nfa.n}")
    return frozenset(p for p in nfa.states if q in nfa.delta[p - 1][s])


def symbol_matrix(nfa: Nfa, s: int) -> np.ndarray:
    """Boolean transition matrix of one symbol; entry (q-1, p-1) is True iff
    p in delta(q,s)."""
    _check_symbol(nfa, s)
    mat = np.zeros((nfa.n, nfa.n), dtype=bool)
    for q in nfa.states:
        for p in nfa.delta[q - 1][s]:
            mat[q - 1, p - 1] = True
    return mat


def word_matrix(nfa: Nfa, w: Word) -> np.ndarray:
    """Boolean matrix product of the symbol matrices of w (identity for the
    empty word), with OR/AND arithmetic over {0,1}."""
    mat = np.eye(nfa.n, dtype=bool)
    for s in w:
        mat = (mat.astype(np.uint8) @ symbol_matrix(nfa, s).astype(np.uint8)) > 0
    return mat


def d3_by_matrix(nfa: Nfa, w: Word) -> bool:
    """Matrix formulation of the D3 test: some column of word_matrix is all ones."""
    return bool(np.any(np.all(word_matrix(nfa, w), axis=0)))
