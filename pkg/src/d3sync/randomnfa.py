"""Random NFA generation: uniform and truncated-Poisson out-degree models.

For every (state, symbol) pair a cardinality k in {0..n} is drawn, then a
uniformly random k-subset of the states becomes delta(q,s).  The uniform
model draws k uniformly; the Poisson model draws k < n with probability
exp(-lam) lam^k / k! and lumps the whole tail onto k = n.

Randomness discipline: one PCG64 stream per NFA, seeded through
SeedSequence([seed]), consumed in a fixed documented order -- the 2n
cardinalities in one batch (state-major, symbol-minor), then every partial
Fisher-Yates swap offset in one batch, laid out pair after pair in the same
order.  A given spec therefore always yields the same NFA.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .automata import Nfa, everywhere_defined_symbol

ALPHABET = 2  # both models are defined for two input symbols


@dataclass(frozen=True)
class ModelSpec:
    kind: str  # "uniform" | "poisson"
    n: int
    seed: int
    lam: Optional[float] = None

    def __post_init__(self):
        if self.kind not in ("uniform", "poisson"):
            raise ValueError(f"unknown model kind {self.kind!r}")
        if self.n < 1:
            raise ValueError(f"need n >= 1, got {self.n}")
        if self.kind == "poisson":
            if self.lam is None or self.lam <= 0:
                raise ValueError("Poisson model needs lambda > 0")
        elif self.lam is not None:
            raise ValueError("uniform model takes no lambda")


def _poisson_cdf(n: int, lam: float) -> list[float]:
    """cdf[k] = P(K <= k) for k = 0..n-1 of Poisson(lam); the remaining mass
    goes to k = n.  Terms are evaluated in log space so large lam cannot
    overflow lam^k or underflow exp(-lam) prematurely."""
    cdf = []
    total = 0.0
    log_lam = math.log(lam)
    for k in range(n):
        total += math.exp(-lam + k * log_lam - math.lgamma(k + 1))
        cdf.append(min(total, 1.0))
    return cdf


def _draw_cardinalities(rng: np.random.Generator, spec: ModelSpec, pairs: int) -> np.ndarray:
    if spec.kind == "uniform":
        return rng.integers(0, spec.n + 1, size=pairs)
    # smallest k with u < cdf[k]; indices beyond the table mean k = n
    cdf = _poisson_cdf(spec.n, spec.lam)
    return np.searchsorted(cdf, rng.random(pairs), side="right")


def _fisher_yates_prefix(n: int, offsets) -> tuple[int, ...]:
    # first k entries of a Fisher-Yates shuffle of 1..n: uniform k-subset
    pool = list(range(1, n + 1))
    idx = 0
    for off in offsets:
        j = idx + off
        pool[idx], pool[j] = pool[j], pool[idx]
        idx += 1
    return tuple(sorted(pool[:idx]))


def _assemble(rng: np.random.Generator, n: int, ks: list[int]) -> Nfa:
    """Build the NFA for the given per-pair cardinalities (state-major,
    symbol-minor), drawing every swap offset from rng in one batch."""
    # swap offset idx of a pair with cardinality k ranges over [0, n - idx)
    ranges = np.arange(n, 0, -1)
    highs = np.concatenate([ranges[:k] for k in ks]) if sum(ks) else None
    offsets = rng.integers(0, highs).tolist() if highs is not None else []
    delta = []
    pos = 0
    for pair in range(n * ALPHABET):
        k = ks[pair]
        subset = _fisher_yates_prefix(n, offsets[pos:pos + k])
        pos += k
        if pair % ALPHABET == 0:
            delta.append([subset])
        else:
            delta[-1].append(subset)
    return Nfa(n, ALPHABET, tuple(tuple(row) for row in delta))


def generate(spec: ModelSpec) -> Nfa:
    """Draw an NFA from the model; deterministic for a fixed spec."""
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([spec.seed])))
    ks = [int(k) for k in _draw_cardinalities(rng, spec, spec.n * ALPHABET)]
    return _assemble(rng, spec.n, ks)


def sample_filtered(
    kind: str,
    n: int,
    count: int,
    lam: Optional[float] = None,
    seed: int = 0,
    batch: int = 4096,
) -> list[Nfa]:
    """Draw `count` filter-passing NFAs by rejection sampling on one stream.

    The filter (some symbol defined at every state) depends only on the
    per-pair cardinalities, so candidates are rejected before their subsets
    are materialized; that makes regimes with pass rates around 1e-6 (sparse
    Poisson at larger n) tractable.  Cardinalities are drawn in batches of
    `batch` candidates, then the survivors' subsets in candidate order, all
    from a single PCG64 stream; results are deterministic for fixed
    (seed, batch).
    """
    probe = ModelSpec(kind, n, 0, lam=lam)  # validates kind/lam
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed])))
    out: list[Nfa] = []
    while len(out) < count:
        ks = np.asarray(
            _draw_cardinalities(rng, probe, batch * n * ALPHABET)
        ).reshape(batch, n, ALPHABET)
        passing = (ks[:, :, 0] > 0).all(axis=1) | (ks[:, :, 1] > 0).all(axis=1)
        for row in np.nonzero(passing)[0]:
            out.append(_assemble(rng, n, [int(k) for k in ks[row].reshape(-1)]))
            if len(out) == count:
                break
    return out


def passes_filter(nfa: Nfa) -> bool:
    """Necessary condition for D3-synchronizability: some symbol is defined
    at every state."""
    return everywhere_defined_symbol(nfa) is not None


def prob_filter_uniform(n: int) -> float:
    """Probability that a uniform-model NFA passes the filter:
    2(1 - 1/(n+1))^n - (1 - 1/(n+1))^(2n)."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    p = (1.0 - 1.0 / (n + 1)) ** n
    return 2.0 * p - p * p


def prob_filter_poisson(n: int, lam: float) -> float:
    """Probability that a Poisson-model NFA passes the filter:
    2(1 - e^-lam)^n - (1 - e^-lam)^(2n)."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if lam <= 0:
        raise ValueError(f"need lambda > 0, got {lam}")
    p = (1.0 - math.exp(-lam)) ** n
    return 2.0 * p - p * p


def derive_seed(*parts: int) -> int:
    """Stable 64-bit seed derived from integer parts (campaign bookkeeping)."""
    return int(np.random.SeedSequence(list(parts)).generate_state(1, np.uint64)[0])
