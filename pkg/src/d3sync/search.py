"""Minimal D3-synchronizing word length via encode-solve and binary search.

Binary search is sound because SAT-at-length is monotone for NFAs with an
everywhere-defined symbol s0: appending s0 to a D3 word keeps it D3 (pick
p in the common intersection; any successor of p under s0 is common to all
images one step later).  NFAs without such a symbol are not binary-searchable
and are routed to the linear scan.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Callable, Optional

from .automata import Nfa, Word, everywhere_defined_symbol, is_d3_word
from .encoding import (
    Cnf,
    EncodingError,
    decode_word,
    encode,
    forced_zero_applicable,
    write_dimacs,
)
from .solver import SAT, UNSAT, SolveResult, solve_internal

DEFAULT_HARD_CAP = 1024

Probe = tuple[int, str, bool]  # (length, SAT/UNSAT, answered from cache)


def default_cap(nfa: Nfa, hard_cap: int = DEFAULT_HARD_CAP) -> int:
    """Length bound certifying non-synchronization: every D3-synchronizing
    NFA has a D3 word of length at most 2^n, clamped to a practical cap."""
    if nfa.n >= hard_cap.bit_length():
        return hard_cap
    return min(2 ** nfa.n, hard_cap)


@dataclass
class SearchOutcome:
    length: Optional[int] = None  # minimal length, when synchronizing
    witness: Optional[tuple[int, ...]] = None
    not_sync_up_to: Optional[int] = None  # certified bound, when not
    trace: list[Probe] = field(default_factory=list)
    queries: int = 0  # solver calls for length probes
    witness_queries: int = 0  # extra calls to extract a witness
    mode_used: str = ""
    variant: str = "basic"

    @property
    def synchronizing(self) -> bool:
        return self.length is not None


class _Prober:
    """Memoized 'is there a D3 word of length ell' solver frontend.

    The letter-free clause set over-approximates: it is satisfiable exactly
    when some state is reachable from every state in ell steps with the two
    symbols' transitions pooled, which can happen before any single word
    synchronizes.  Its UNSAT answers are therefore trusted (no word can exist
    then) but its SAT answers are confirmed with a basic-encoding solve at
    the same length, whose model also supplies the witness.
    """

    def __init__(self, nfa, variant, solve, emit_dimacs_dir):
        self.nfa = nfa
        self.variant = variant
        self.solve = solve
        self.emit_dir = emit_dimacs_dir
        self.cache: dict[int, SolveResult] = {}
        self.outcome = SearchOutcome(variant=variant)

    def _solve_variant(self, ell: int, variant: str) -> SolveResult:
        cnf, vm = encode(self.nfa, ell, variant)
        if self.emit_dir:
            path = os.path.join(self.emit_dir, f"probe_{variant}_l{ell}.cnf")
            write_dimacs(cnf, path, vm)
        self.outcome.queries += 1
        return self.solve(cnf)

    def status(self, ell: int) -> str:
        cached = ell in self.cache
        if not cached:
            res = self._solve_variant(ell, self.variant)
            if self.variant == "letterfree" and res.status == SAT:
                res = self._solve_variant(ell, "basic")
            self.cache[ell] = res
        self.outcome.trace.append((ell, self.cache[ell].status, cached))
        return self.cache[ell].status

    def witness(self, ell: int) -> tuple[int, ...]:
        # for letterfree the cached SAT result is the confirming basic solve
        variant = "basic" if self.variant == "letterfree" else self.variant
        _, vm = encode(self.nfa, ell, variant)
        return decode_word(vm, self.cache[ell].model)


def find_min_length(
    nfa: Nfa,
    l0: Optional[int] = None,
    variant: str = "basic",
    mode: str = "binary",
    solve: Optional[Callable[[Cnf], SolveResult]] = None,
    cap: Optional[int] = None,
    emit_dimacs_dir: Optional[str] = None,
) -> SearchOutcome:
    """Minimal D3-synchronizing word length for a binary-alphabet NFA.

    mode="binary" follows the bracket [l_min, l_max] discipline: start at
    l = l0 with l_max = 2*l0; on SAT stop if l == l_min else shrink
    l_max := l, l := floor((l_min+l_max)/2); on UNSAT stop if l == l_max else
    raise l_min := l+1, l := ceil((l_min+l_max)/2).  Repeat probes are
    answered from cache.  With an explicit l0 the search ends at l_max = 2*l0
    exactly; when l0 is defaulted (max(2, ceil(log2 n))) an UNSAT bracket is
    retried with doubled l0 until the cap is reached, fast-forwarding l_min
    past lengths the previous bracket excluded.

    mode="linear" scans ell = 1, 2, ... up to cap; it needs no monotonicity
    and serves as the reference mode.  NFAs failing the defined-everywhere
    filter cannot be binary-searched and are routed to linear automatically.

    Witnesses are decoded from the final model and re-verified with
    is_d3_word before being returned.
    """
    if mode not in ("binary", "linear"):
        raise ValueError(f"unknown mode {mode!r}")
    if variant == "forced0" and not forced_zero_applicable(nfa):
        if forced_zero_applicable(_swap_symbols(nfa)):
            outcome = find_min_length(
                _swap_symbols(nfa), l0, variant, mode, solve, cap, emit_dimacs_dir
            )
            if outcome.witness is not None:
                outcome.witness = tuple(1 - s for s in outcome.witness)
                _check_witness(nfa, outcome)
            return outcome
        # surface the precise applicability failure
        encode(nfa, 1, "forced0")
        raise AssertionError("unreachable")

    solve = solve or solve_internal
    cap = cap if cap is not None else default_cap(nfa)
    prober = _Prober(nfa, variant, solve, emit_dimacs_dir)
    outcome = prober.outcome

    filtered = everywhere_defined_symbol(nfa) is not None
    if mode == "binary" and not filtered:
        mode = "linear"
    outcome.mode_used = mode

    if mode == "linear":
        for ell in range(1, cap + 1):
            if prober.status(ell) == SAT:
                outcome.length = ell
                break
        else:
            outcome.not_sync_up_to = cap
    else:
        explicit_l0 = l0 is not None
        if l0 is None:
            l0 = max(2, (nfa.n - 1).bit_length() or 1)
        if l0 < 1:
            raise ValueError(f"need l0 >= 1, got {l0}")
        l_min = 1
        while True:
            l_max = 2 * l0
            ell = min(l0, l_max)
            found, unsat_at_max = _binary_bracket(prober, l_min, ell, l_max)
            if found is not None:
                outcome.length = found
                break
            if explicit_l0 or unsat_at_max >= cap:
                outcome.not_sync_up_to = unsat_at_max
                break
            # everything <= unsat_at_max is excluded by monotonicity
            l_min = unsat_at_max + 1
            l0 = min(2 * l0, (cap + 1) // 2)

    if outcome.length is not None:
        outcome.witness = prober.witness(outcome.length)
        _check_witness(nfa, outcome)
    return outcome


def _binary_bracket(prober: _Prober, l_min: int, ell: int, l_max: int):
    """One bracketed binary search; returns (minimal length, None) on success
    or (None, l_max) after UNSAT at the top of the bracket."""
    ell = max(ell, l_min)
    while True:
        if prober.status(ell) == SAT:
            if ell == l_min:
                return ell, None
            l_max = ell
            ell = (l_min + l_max) // 2
        else:
            if ell == l_max:
                return None, l_max
            l_min = ell + 1
            ell = (l_min + l_max + 1) // 2


def _check_witness(nfa: Nfa, outcome: SearchOutcome) -> None:
    w = outcome.witness
    if w is None or len(w) != outcome.length or not is_d3_word(nfa, w):
        raise RuntimeError(f"witness verification failed for {w!r} at length {outcome.length}")


def _swap_symbols(nfa: Nfa) -> Nfa:
    return Nfa(nfa.n, 2, tuple((row[1], row[0]) for row in nfa.delta))


def enumerate_d3_words_via_sat(
    nfa: Nfa,
    ell: int,
    variant: str = "basic",
    solve: Optional[Callable[[Cnf], SolveResult]] = None,
) -> list[tuple[int, ...]]:
    """All D3-synchronizing words of length exactly ell, by repeatedly
    blocking the letter restriction of each model found.  Needs a variant
    with letter variables."""
    if variant == "letterfree":
        raise EncodingError("cannot enumerate words without letter variables")
    solve = solve or solve_internal
    cnf, vm = encode(nfa, ell, variant)
    clauses = list(cnf.clauses)
    words: list[tuple[int, ...]] = []
    while True:
        res = solve(Cnf(cnf.num_vars, tuple(clauses)))
        if res.status != SAT:
            return words
        words.append(decode_word(vm, res.model))
        blocking = tuple(
            -vm.x(t) if res.model[vm.x(t)] else vm.x(t) for t in vm.letter_steps
        )
        if not blocking:  # no free letters (forced0 at ell=1): unique word
            return words
        clauses.append(blocking)
