import math
import os
import random

import pytest

from conftest import random_corpus
from d3sync.automata import Nfa, is_d3_word
from d3sync.oracle import shortest_d3_bfs
from d3sync.randomnfa import ModelSpec, generate, passes_filter
from d3sync.search import (
    DEFAULT_HARD_CAP,
    default_cap,
    enumerate_d3_words_via_sat,
    find_min_length,
)


def test_bin3_binary_trace(bin3):
    out = find_min_length(bin3, l0=2)
    assert out.length == 2 and out.witness == (0, 0)
    assert [(l, s) for l, s, _ in out.trace] == [(2, "SAT"), (1, "UNSAT"), (2, "SAT")]
    assert out.trace[-1][2] is True  # final probe answered from cache
    assert out.queries == 2


def test_single_state_both_loops():
    one = Nfa.build(1, 2, [[[1], [1]]])
    out = find_min_length(one, l0=1)
    assert out.length == 1 and out.witness in ((0,), (1,))


def test_default_cap():
    assert default_cap(Nfa.build(3, 2, [[[1], []]] * 3)) == 8
    n20 = Nfa.build(20, 2, [[[q], []] for q in range(1, 21)])
    assert default_cap(n20) == DEFAULT_HARD_CAP
    assert default_cap(n20, hard_cap=64) == 64


def test_linear_equals_binary_on_corpus():
    for nfa in random_corpus(30, seed=11, n_lo=3, n_hi=6):
        if not passes_filter(nfa):
            continue
        cap = default_cap(nfa)
        a = find_min_length(nfa, mode="binary", cap=cap)
        b = find_min_length(nfa, mode="linear", cap=cap)
        assert a.length == b.length
        assert a.not_sync_up_to == b.not_sync_up_to


def test_matches_bfs_oracle_all_variants():
    for nfa in random_corpus(25, seed=23, n_lo=3, n_hi=6):
        if not passes_filter(nfa):
            continue
        ref = shortest_d3_bfs(nfa)
        want = ref[0] if ref else None
        variants = ["basic", "letterfree"]
        if all(nfa.delta[q - 1][0] for q in nfa.states) != all(nfa.delta[q - 1][1] for q in nfa.states):
            variants.append("forced0")
        for variant in variants:
            out = find_min_length(nfa, variant=variant)
            assert out.length == want, (nfa, variant)
            if want is not None:
                assert is_d3_word(nfa, out.witness) and len(out.witness) == want


def test_witness_always_reverified():
    for nfa in random_corpus(20, seed=29, n_lo=3, n_hi=5):
        if not passes_filter(nfa):
            continue
        out = find_min_length(nfa)
        if out.length is not None:
            assert is_d3_word(nfa, out.witness)
            assert len(out.witness) == out.length


def test_query_count_bound():
    # binary mode with an explicit bracket: at most ceil(log2(2*l0)) + 2 calls
    for nfa in random_corpus(20, seed=37, n_lo=3, n_hi=6):
        if not passes_filter(nfa):
            continue
        ref = shortest_d3_bfs(nfa)
        if ref is None:
            continue
        l0 = max(ref[0], 2)  # bracket guaranteed to contain the answer
        out = find_min_length(nfa, l0=l0)
        assert out.length == ref[0]
        assert out.queries <= math.ceil(math.log2(2 * l0)) + 2


def test_monotone_traces():
    # no SAT below an UNSAT in any trace (binary search soundness witness)
    for nfa in random_corpus(25, seed=41, n_lo=3, n_hi=5):
        if not passes_filter(nfa):
            continue
        out = find_min_length(nfa)
        sat_lengths = [l for l, s, _ in out.trace if s == "SAT"]
        unsat_lengths = [l for l, s, _ in out.trace if s == "UNSAT"]
        if sat_lengths and unsat_lengths:
            assert max(unsat_lengths) < min(sat_lengths)


def test_explicit_l0_gives_up_at_double():
    # fig2-like sparse case: min length 4, bracket [1,2] cannot see it
    fig2 = Nfa.build(5, 2, [[[1, 2], [3, 4]], [[3], [2]], [[4], []], [[4], [5]], [[1], [2]]])
    out = find_min_length(fig2, l0=1)
    assert out.length is None and out.not_sync_up_to == 2
    out = find_min_length(fig2)  # heuristic restarts find it
    assert out.length == 4


def test_non_synchronizing_certificate():
    dead = Nfa.build(2, 2, [[[], []], [[1], [2]]])  # fails the filter
    out = find_min_length(dead, mode="binary")
    assert out.mode_used == "linear"  # binary refused without the filter
    assert out.length is None and out.not_sync_up_to == default_cap(dead)

    # filter-passing but still not synchronizing: two parts never meet
    split = Nfa.build(2, 2, [[[1], [1]], [[2], [2]]])
    out = find_min_length(split)
    assert out.length is None and out.not_sync_up_to >= default_cap(split)


def test_forced0_symbol_renaming():
    # symbol 1 total, symbol 0 partial: search renames and un-renames
    nfa = Nfa.build(2, 2, [[[], [2]], [[2], [2]]])
    ref = shortest_d3_bfs(nfa)
    out = find_min_length(nfa, variant="forced0")
    assert ref == (1, (1,)) and out.length == 1
    assert out.witness[0] == 1  # first symbol is the total one
    assert is_d3_word(nfa, out.witness)


def test_forced0_rejected_when_both_total():
    both = Nfa.build(2, 2, [[[1], [2]], [[2], [1]]])
    from d3sync.encoding import EncodingError

    with pytest.raises(EncodingError):
        find_min_length(both, variant="forced0")


def test_emit_dimacs(tmp_path, bin3):
    out = find_min_length(bin3, l0=2, emit_dimacs_dir=str(tmp_path))
    files = sorted(os.listdir(tmp_path))
    assert files == ["probe_basic_l1.cnf", "probe_basic_l2.cnf"]
    assert out.length == 2


def test_enumerate_words_matches_brute_force():
    from itertools import product

    for nfa in random_corpus(15, seed=53, n_lo=3, n_hi=5):
        for ell in (1, 2, 3):
            got = sorted(enumerate_d3_words_via_sat(nfa, ell))
            want = sorted(w for w in product((0, 1), repeat=ell) if is_d3_word(nfa, w))
            assert got == want


def test_enumerate_rejects_letterfree(bin3):
    from d3sync.encoding import EncodingError

    with pytest.raises(EncodingError):
        enumerate_d3_words_via_sat(bin3, 2, variant="letterfree")


def test_search_respects_custom_solve(bin3):
    calls = []
    from d3sync.solver import solve_internal

    def counting(cnf):
        calls.append(cnf.num_clauses)
        return solve_internal(cnf)

    out = find_min_length(bin3, l0=2, solve=counting)
    assert out.length == 2 and len(calls) == out.queries == 2
