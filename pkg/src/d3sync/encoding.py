"""CNF encodings of "this NFA has a D3-synchronizing word of length ell".

The bounded problem for a binary-alphabet NFA is reduced to SAT over three
variable blocks:

* letter variables  x_t           -- the symbol chosen at step t (1 = symbol 1),
* token variables   y(i,j,t)      -- token i sits on state q_j after t steps,
* synchronization variables z_j   -- q_j is the common meeting state.

Three encoding variants are provided:

* ``basic``      -- letter + token + synchronization blocks,
* ``letterfree`` -- token + synchronization blocks only.  Beware: dropping
                    the letter variables decouples the tokens' moves, so this
                    variant over-approximates (see its docstring); UNSAT is
                    conclusive, SAT is not.
* ``forced0``    -- for NFAs where symbol 0 is total and symbol 1 is not:
                    every D3 word must then begin with 0, so the first token
                    layer is fixed to the position after that move, saving a
                    letter variable and one token layer.

Clause emission order is fixed so DIMACS output is reproducible byte for
byte.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from typing import Sequence

from .automata import Nfa, apply_symbol

Clause = tuple[int, ...]

VARIANTS = ("basic", "letterfree", "forced0")


class EncodingError(ValueError):
    """Instance cannot be encoded (wrong alphabet, inapplicable variant, ...)."""


@dataclass(frozen=True)
class Cnf:
    """Clause database: positive/negative integer literals, 1-based variables."""

    num_vars: int
    clauses: tuple[Clause, ...]

    def __post_init__(self):
        for c in self.clauses:
            if not c:
                raise ValueError("empty clause")
            for lit in c:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise ValueError(f"literal {lit} out of range for {self.num_vars} variables")

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)


@dataclass(frozen=True)
class VarMap:
    """Bijection between encoding variables and contiguous DIMACS indices.

    ``ell`` is always the length of the encoded word.  Free letter steps and
    token layers depend on the variant:

    * basic:      x block 1..ell, then token layers t = 0..ell, then z block;
    * letterfree: token layers t = 0..ell (no x block), then z block;
    * forced0:    x block for t = 2..ell, token layers t = 1..ell (layer 1 is
                  the fixed post-0 position), then z block.

    Layer index t always means "after t symbols of the word", so token layout
    is y(i,j,t) = offset + layer*n^2 + (i-1)*n + j throughout.
    """

    n: int
    ell: int
    variant: str = "basic"

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.n < 1 or self.ell < 1:
            raise ValueError(f"need n >= 1 and ell >= 1, got n={self.n}, ell={self.ell}")

    @property
    def num_letters(self) -> int:
        if self.variant == "basic":
            return self.ell
        if self.variant == "forced0":
            return self.ell - 1
        return 0

    @property
    def first_layer(self) -> int:
        return 1 if self.variant == "forced0" else 0

    @property
    def num_layers(self) -> int:
        return self.ell + 1 - self.first_layer

    @property
    def num_vars(self) -> int:
        return self.num_letters + self.n * self.n * self.num_layers + self.n

    @property
    def letter_steps(self) -> range:
        """Steps t whose symbol is a free letter variable."""
        start = 2 if self.variant == "forced0" else 1
        return range(start, self.ell + 1) if self.variant != "letterfree" else range(0)

    def x(self, t: int) -> int:
        if self.variant == "letterfree":
            raise EncodingError("letter-free encoding has no letter variables")
        if t not in self.letter_steps:
            raise ValueError(f"no letter variable for step {t}")
        return t if self.variant == "basic" else t - 1

    def y(self, i: int, j: int, t: int) -> int:
        if not (1 <= i <= self.n and 1 <= j <= self.n):
            raise ValueError(f"token variable y({i},{j},{t}) out of range")
        if not self.first_layer <= t <= self.ell:
            raise ValueError(f"no token layer {t}")
        layer = t - self.first_layer
        return self.num_letters + layer * self.n * self.n + (i - 1) * self.n + j

    def z(self, j: int) -> int:
        if not 1 <= j <= self.n:
            raise ValueError(f"synchronization variable z({j}) out of range")
        return self.num_letters + self.num_layers * self.n * self.n + j


def _require_binary(nfa: Nfa) -> None:
    if nfa.alphabet_size != 2:
        raise EncodingError(
            f"encoding is defined for binary alphabets only, got {nfa.alphabet_size} symbols"
        )


def _preimage_lists(nfa: Nfa) -> tuple[list[list[int]], list[list[int]]]:
    """pre[s][j-1] = sorted states p with q_j in delta(p, s)."""
    pre0 = [[] for _ in range(nfa.n)]
    pre1 = [[] for _ in range(nfa.n)]
    for p in nfa.states:
        for j in nfa.delta[p - 1][0]:
            pre0[j - 1].append(p)
        for j in nfa.delta[p - 1][1]:
            pre1[j - 1].append(p)
    return pre0, pre1


def initial_clauses(vm: VarMap) -> list[Clause]:
    """Unit clauses pinning layer 0 to the identity position: token i sits
    exactly on q_i.  n^2 clauses: the n positive diagonal units first, then
    the negated off-diagonal units in row-major order."""
    out: list[Clause] = [(vm.y(i, i, 0),) for i in range(1, vm.n + 1)]
    for i in range(1, vm.n + 1):
        for j in range(1, vm.n + 1):
            if i != j:
                out.append((-vm.y(i, j, 0),))
    return out


def fixed_layer_clauses(nfa: Nfa, vm: VarMap, t: int, s: int) -> list[Clause]:
    """Unit clauses pinning layer t to the token position reached from the
    identity by one move with symbol s (used by the forced-first-symbol
    variant).  Same ordering discipline as initial_clauses."""
    rows = [apply_symbol(nfa, (i,), s) for i in nfa.states]
    out: list[Clause] = []
    for i in range(1, vm.n + 1):
        for j in range(1, vm.n + 1):
            lit = vm.y(i, j, t)
            out.append((lit,) if j in rows[i - 1] else (-lit,))
    return out


def transition_clauses_basic(nfa: Nfa, vm: VarMap, t: int) -> list[Clause]:
    """Clauses tying token layer t to layer t-1 through the letter variable.

    Per token i and state j, writing P0/P1 for the preimages of q_j:

      long:   -y(i,j,t) v  x_t v OR_{h in P0} y(i,h,t-1)
              -y(i,j,t) v -x_t v OR_{k in P1} y(i,k,t-1)
      short:   y(i,j,t) v -x_t v -y(i,k,t-1)   for each k in P1
               y(i,j,t) v  x_t v -y(i,h,t-1)   for each h in P0

    Empty preimage sets drop their disjunction from the long clauses and
    contribute no short clauses.  At most n*(m + 2n) clauses.
    """
    _require_binary(nfa)
    pre0, pre1 = _preimage_lists(nfa)
    xt = vm.x(t)
    out: list[Clause] = []
    for i in range(1, vm.n + 1):
        for j in range(1, vm.n + 1):
            yt = vm.y(i, j, t)
            p0 = [vm.y(i, h, t - 1) for h in pre0[j - 1]]
            p1 = [vm.y(i, k, t - 1) for k in pre1[j - 1]]
            out.append((-yt, xt, *p0))
            out.append((-yt, -xt, *p1))
            for yk in p1:
                out.append((yt, -xt, -yk))
            for yh in p0:
                out.append((yt, xt, -yh))
    return out


def transition_clauses_letter_free(nfa: Nfa, vm: VarMap, t: int) -> list[Clause]:
    """Letter-free counterpart of transition_clauses_basic.

    Per token i and state j:

      long:   -y(i,j,t) v OR_{h in P0} y(i,h,t-1) v OR_{k in P1} y(i,k,t-1)
      short:   y(i,j,t) v -y(i,h,t-1) v -y(i,k,t-1)  for (h,k) in P0 x P1

    One long clause per (i,j), |P0|*|P1| short clauses.  These are the
    per-(i,j) resolvents of the basic clauses on x_t; without the letter
    variable, nothing correlates the moves of distinct tokens, so the CNF is
    satisfiable exactly when some state is reachable from every state in t
    steps with both symbols' transitions pooled per step.  That makes SAT a
    relaxation of word existence, while UNSAT remains conclusive.
    """
    _require_binary(nfa)
    pre0, pre1 = _preimage_lists(nfa)
    out: list[Clause] = []
    for i in range(1, vm.n + 1):
        for j in range(1, vm.n + 1):
            yt = vm.y(i, j, t)
            p0 = [vm.y(i, h, t - 1) for h in pre0[j - 1]]
            p1 = [vm.y(i, k, t - 1) for k in pre1[j - 1]]
            # states that are preimages under both symbols appear once
            out.append((-yt, *p0, *(yk for yk in p1 if yk not in p0)))
            for yh in p0:
                for yk in p1:
                    out.append((yt, -yh) if yh == yk else (yt, -yh, -yk))
    return out


def synchronization_clauses(vm: VarMap) -> list[Clause]:
    """The n^2 + 1 clauses demanding a state that holds every token at the end:
    one clause OR_j z_j, then -z_j v y(i,j,ell) grouped by j."""
    out: list[Clause] = [tuple(vm.z(j) for j in range(1, vm.n + 1))]
    for j in range(1, vm.n + 1):
        for i in range(1, vm.n + 1):
            out.append((-vm.z(j), vm.y(i, j, vm.ell)))
    return out


def encode_basic(nfa: Nfa, ell: int) -> tuple[Cnf, VarMap]:
    """CNF satisfiable iff nfa has a D3-synchronizing word of length exactly ell."""
    _require_binary(nfa)
    if ell < 1:
        raise EncodingError(f"word length must be positive, got {ell}")
    vm = VarMap(nfa.n, ell, "basic")
    clauses = initial_clauses(vm)
    for t in range(1, ell + 1):
        clauses.extend(transition_clauses_basic(nfa, vm, t))
    clauses.extend(synchronization_clauses(vm))
    return Cnf(vm.num_vars, tuple(clauses)), vm


def encode_letter_free(nfa: Nfa, ell: int) -> tuple[Cnf, VarMap]:
    """Like encode_basic but without letter variables.  UNSAT implies no
    length-ell D3 word exists; SAT does not imply one does (and no word can
    be read off a model) -- see transition_clauses_letter_free."""
    _require_binary(nfa)
    if ell < 1:
        raise EncodingError(f"word length must be positive, got {ell}")
    vm = VarMap(nfa.n, ell, "letterfree")
    clauses = initial_clauses(vm)
    for t in range(1, ell + 1):
        clauses.extend(transition_clauses_letter_free(nfa, vm, t))
    clauses.extend(synchronization_clauses(vm))
    return Cnf(vm.num_vars, tuple(clauses)), vm


def forced_zero_applicable(nfa: Nfa) -> bool:
    """True iff symbol 0 is defined everywhere and symbol 1 is not."""
    total0 = all(nfa.delta[q - 1][0] for q in nfa.states)
    total1 = all(nfa.delta[q - 1][1] for q in nfa.states)
    return total0 and not total1


def encode_forced_first_zero(nfa: Nfa, ell: int) -> tuple[Cnf, VarMap]:
    """CNF for D3 words of length ell that begin with symbol 0.

    Applicable when 0 is everywhere defined and 1 is not; every D3 word of
    such an NFA must start with 0 (a word starting with a partial symbol
    empties some image), so satisfiability agrees with encode_basic at the
    same length.  The game starts from the position after the first 0-move,
    which saves n^2 token variables and one letter variable.
    """
    _require_binary(nfa)
    if ell < 1:
        raise EncodingError(f"word length must be positive, got {ell}")
    if not all(nfa.delta[q - 1][0] for q in nfa.states):
        raise EncodingError("forced-first-zero needs symbol 0 defined at every state")
    if all(nfa.delta[q - 1][1] for q in nfa.states):
        raise EncodingError(
            "forced-first-zero needs symbol 1 undefined somewhere; "
            "with both symbols total the first letter is unconstrained"
        )
    vm = VarMap(nfa.n, ell, "forced0")
    clauses = fixed_layer_clauses(nfa, vm, 1, 0)
    for t in range(2, ell + 1):
        clauses.extend(transition_clauses_basic(nfa, vm, t))
    clauses.extend(synchronization_clauses(vm))
    return Cnf(vm.num_vars, tuple(clauses)), vm


def encode(nfa: Nfa, ell: int, variant: str = "basic") -> tuple[Cnf, VarMap]:
    if variant == "basic":
        return encode_basic(nfa, ell)
    if variant == "letterfree":
        return encode_letter_free(nfa, ell)
    if variant == "forced0":
        return encode_forced_first_zero(nfa, ell)
    raise EncodingError(f"unknown variant {variant!r}")


def decode_word(vm: VarMap, model: Sequence[bool]) -> tuple[int, ...]:
    """Read the encoded word off a total satisfying assignment.

    ``model`` is indexed by variable (entry 0 unused).  The forced-first-zero
    variant contributes its fixed leading 0.  The letter-free variant carries
    no word and cannot be decoded.
    """
    if vm.variant == "letterfree":
        raise EncodingError("letter-free models carry no letter variables to decode")
    bits = tuple(1 if model[vm.x(t)] else 0 for t in vm.letter_steps)
    return ((0,) + bits) if vm.variant == "forced0" else bits


# -- DIMACS ------------------------------------------------------------------

def to_dimacs(cnf: Cnf, vm: VarMap | None = None) -> str:
    """Serialize to DIMACS CNF.  When a VarMap is given, its layout is
    recorded in comment lines so a model can be decoded from solver output
    alone (see varmap_from_dimacs)."""
    buf = io.StringIO()
    if vm is not None:
        buf.write(f"c d3sync n={vm.n} l={vm.ell} variant={vm.variant}\n")
        buf.write(
            f"c d3sync letters={vm.num_letters} layers={vm.num_layers} vars={vm.num_vars}\n"
        )
    buf.write(f"p cnf {cnf.num_vars} {cnf.num_clauses}\n")
    for clause in cnf.clauses:
        buf.write(" ".join(str(lit) for lit in clause))
        buf.write(" 0\n")
    return buf.getvalue()


def write_dimacs(cnf: Cnf, path, vm: VarMap | None = None) -> None:
    with open(path, "w") as fh:
        fh.write(to_dimacs(cnf, vm))


def varmap_from_dimacs(text: str) -> VarMap:
    """Reconstruct the VarMap recorded in the comment lines of a DIMACS file."""
    for line in text.splitlines():
        if line.startswith("c d3sync ") and "variant=" in line:
            fields = dict(item.split("=", 1) for item in line[len("c d3sync "):].split())
            return VarMap(int(fields["n"]), int(fields["l"]), fields["variant"])
        if line.startswith("p "):
            break
    raise ValueError("no d3sync layout comment found")


def parse_dimacs(text: str) -> Cnf:
    """Parse DIMACS CNF text (comments ignored, clauses 0-terminated)."""
    num_vars = None
    clauses: list[Clause] = []
    cur: list[int] = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"bad problem line: {line!r}")
            num_vars = int(parts[2])
            continue
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                clauses.append(tuple(cur))
                cur = []
            else:
                cur.append(lit)
    if cur:
        raise ValueError("unterminated final clause")
    if num_vars is None:
        num_vars = max((abs(l) for c in clauses for l in c), default=0)
    return Cnf(num_vars, tuple(clauses))
