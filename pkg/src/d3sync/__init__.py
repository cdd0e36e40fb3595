"""Minimum-length D3-synchronizing words for NFAs via SAT.

The pipeline: represent a binary-alphabet NFA, reduce "has a D3-synchronizing
word of length ell" to CNF, decide it with a CDCL solver (compiled core when
available), and binary-search the minimal length.  Random NFA models, an
exact subset-BFS oracle, and an experiment harness round things out.
"""

from .automata import (
    Nfa,
    apply_symbol,
    apply_word,
    d3_by_matrix,
    everywhere_defined_symbol,
    is_carefully_sync_word,
    is_d1_word,
    is_d2_word,
    is_d3_word,
    preimages,
    symbol_matrix,
    word_matrix,
)
from .encoding import (
    Cnf,
    EncodingError,
    VarMap,
    decode_word,
    encode,
    encode_basic,
    encode_forced_first_zero,
    encode_letter_free,
    to_dimacs,
    write_dimacs,
)
from .oracle import run_game, shortest_d3_bfs, shortest_d3_exhaustive, step_tokens
from .randomnfa import ModelSpec, generate, passes_filter, prob_filter_poisson, prob_filter_uniform
from .search import SearchOutcome, default_cap, find_min_length
from .solver import BACKEND, SolveResult, solve_internal
from .solver.external import solve_external

__version__ = "0.1.0"
