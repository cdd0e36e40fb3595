"""Independent ground truth for D3 synchronization.

Three unrelated formulations live here so that the SAT pipeline can be
cross-checked against machinery that shares none of its code:

* the token game (tokens slide along edges, multiply, and disappear),
* an exact shortest-word computation by BFS over state subsets,
* plain exhaustive enumeration of all words up to a cap.
"""

from __future__ import annotations

from collections import deque
from typing import Optional

from .automata import Nfa, Word

# TokenConfig: entry j-1 is the set of tokens currently held by state q_j.
TokenConfig = tuple[frozenset[int], ...]

BFS_STATE_LIMIT = 15  # subset BFS explores n * 2^n nodes


def identity_config(nfa: Nfa) -> TokenConfig:
    """Initial position: each state holds exactly its own token."""
    return tuple(frozenset((q,)) for q in nfa.states)


def step_tokens(nfa: Nfa, cfg: TokenConfig, s: int) -> TokenConfig:
    """One move of the token game with symbol s.

    A token held by q slides to every state in delta(q,s); it disappears if
    delta(q,s) is empty.  So after the move, state p holds token i iff some
    state q with p in delta(q,s) held i before.
    """
    nxt = [set() for _ in range(nfa.n)]
    for q in nfa.states:
        held = cfg[q - 1]
        if not held:
            continue
        for p in nfa.delta[q - 1][s]:
            nxt[p - 1].update(held)
    return tuple(frozenset(t) for t in nxt)


def run_game(nfa: Nfa, w: Word) -> TokenConfig:
    """Play the whole word from the identity position.

    Row i of the result (the states holding token i) equals q_i.w.
    """
    cfg = identity_config(nfa)
    for s in w:
        cfg = step_tokens(nfa, cfg, s)
    return cfg


def token_rows(cfg: TokenConfig, n: int) -> list[frozenset[int]]:
    """Transpose a config into per-token rows: row i = states holding token i."""
    return [frozenset(j for j in range(1, n + 1) if i in cfg[j - 1]) for i in range(1, n + 1)]


def shortest_d3_bfs(nfa: Nfa) -> Optional[tuple[int, tuple[int, ...]]]:
    """Exact minimal D3-synchronizing word length (and a witness) by BFS.

    Works backwards from the meeting state: for a target p and suffix v, the
    set of states from which some path labeled v reaches p is R(v,p), with
    R(empty, p) = {p} and prepending s mapping X to {q : delta(q,s) meets X}.
    A word w of length k is D3-synchronizing iff R(w,p) = Q for some p, so a
    multi-source BFS over subsets X (sources: all singletons) finds the
    minimum positive k reaching the full set.  The witness is read off the
    parent chain in reverse.  Ties prefer smaller symbols, so among all
    shortest witnesses a lexicographically early one is produced.

    Returns None when no nonempty word synchronizes.  The search space is
    n * 2^n subsets, so n is capped at BFS_STATE_LIMIT.
    """
    n = nfa.n
    if n > BFS_STATE_LIMIT:
        raise ValueError(f"subset BFS limited to n <= {BFS_STATE_LIMIT}, got n={n}")
    if n == 1:
        # The singleton source is already the full set; only nonempty words
        # count, so just look for a defined symbol (necessarily a loop).
        for s in range(nfa.alphabet_size):
            if nfa.delta[0][s]:
                return 1, (s,)
        return None
    succ_mask = [
        [_mask(nfa.delta[q - 1][s]) for q in nfa.states] for s in range(nfa.alphabet_size)
    ]
    full = (1 << n) - 1
    parent: dict[int, tuple[int, int]] = {}  # subset -> (previous subset, symbol)
    seen = set()
    queue = deque()
    for p in nfa.states:
        src = 1 << (p - 1)
        if src not in seen:
            seen.add(src)
            queue.append((src, 0))
    while queue:
        x, dist = queue.popleft()
        for s in range(nfa.alphabet_size):
            masks = succ_mask[s]
            nx = 0
            for q in range(n):
                if masks[q] & x:
                    nx |= 1 << q
            if nx in seen:
                continue
            seen.add(nx)
            parent[nx] = (x, s)
            if nx == full:
                return dist + 1, _read_word(parent, full)
            queue.append((nx, dist + 1))
    return None


def _mask(states) -> int:
    out = 0
    for p in states:
        out |= 1 << (p - 1)
    return out


def _read_word(parent, node) -> tuple[int, ...]:
    # Edges were prepends, so walking back to the source spells the word
    # front to back already.
    word = []
    while node in parent:
        node, s = parent[node]
        word.append(s)
    return tuple(word)


def shortest_d3_exhaustive(nfa: Nfa, cap: int) -> Optional[tuple[int, tuple[int, ...]]]:
    """Smallest length <= cap admitting a D3 word, by trying every word.

    Enumerates length by length in lexicographic symbol order, so the witness
    is the lexicographically least one of minimal length.  Costs
    alphabet^cap image computations; keep cap small.
    """
    from .automata import is_d3_word

    for ell in range(1, cap + 1):
        for w in _words(nfa.alphabet_size, ell):
            if is_d3_word(nfa, w):
                return ell, w
    return None


def _words(alphabet_size: int, ell: int):
    w = [0] * ell
    while True:
        yield tuple(w)
        i = ell - 1
        while i >= 0 and w[i] == alphabet_size - 1:
            w[i] = 0
            i -= 1
        if i < 0:
            return
        w[i] += 1


def first_token_layer(nfa: Nfa, s: int) -> TokenConfig:
    """Token position after one move with symbol s from the identity position."""
    return step_tokens(nfa, identity_config(nfa), s)
