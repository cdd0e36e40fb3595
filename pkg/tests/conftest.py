import random

import pytest

from d3sync.automata import Nfa
from d3sync.randomnfa import ModelSpec, generate


@pytest.fixture
def fig1r() -> Nfa:
    """3-state NFA over {a,b,c} (symbols 0,1,2): a is total, b/c partial.
    Classic example separating the D1/D2/D3/careful notions."""
    return Nfa.build(3, 3, [
        [[1], [2, 3], []],      # state 1: a->1, b->{2,3}
        [[1, 2], [], [1]],      # state 2: a->{1,2}, c->1
        [[1, 3], [], [1]],      # state 3: a->{1,3}, c->1
    ])


@pytest.fixture
def fig2() -> Nfa:
    """5-state binary NFA used for the token-game walkthroughs."""
    return Nfa.build(5, 2, [
        [[1, 2], [3, 4]],
        [[3], [2]],
        [[4], []],
        [[4], [5]],
        [[1], [2]],
    ])


@pytest.fixture
def bin3() -> Nfa:
    """3-state binary NFA with unique shortest D3 word 00."""
    return Nfa.build(3, 2, [
        [[2], [1]],
        [[3], []],
        [[3], [3]],
    ])


@pytest.fixture
def self1() -> Nfa:
    """Single state, 0-loop, 1 undefined; the smallest nontrivial instance."""
    return Nfa.build(1, 2, [[[1], []]])


def random_corpus(count, seed, n_lo=3, n_hi=5, kinds=("uniform", "poisson")):
    """Deterministic mixed corpus of random binary NFAs."""
    rng = random.Random(seed)
    out = []
    for i in range(count):
        n = rng.randint(n_lo, n_hi)
        kind = rng.choice(list(kinds))
        lam = rng.choice([1.0, 2.0]) if kind == "poisson" else None
        out.append(generate(ModelSpec(kind, n, seed * 100_000 + i, lam=lam)))
    return out
