"""Pure-Python CDCL solver core.

MiniSat-style architecture: two-watched-literal propagation, first-UIP
conflict analysis, VSIDS variable activities with deterministic index
tie-breaking, and Luby-scheduled restarts.  This module is the fallback for
(and the reference twin of) the compiled core in _cdcl.pyx; keep the two in
step when touching either.

Literals are encoded internally as (var << 1) | sign with sign 1 for
negative, so negation is ``p ^ 1``.
"""

from __future__ import annotations

from heapq import heapify, heappop, heappush

DEFAULT_CONFLICT_BUDGET = 10_000_000
RESTART_FIRST = 100
VAR_DECAY = 0.95
RESCALE_LIMIT = 1e100

SAT, UNSAT, UNKNOWN = "SAT", "UNSAT", "UNKNOWN"


def _luby(y: int, x: int) -> float:
    # Size of the x-th term of the Luby restart sequence, base y.
    size, seq = 1, 0
    while size < x + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != x:
        size = (size - 1) >> 1
        seq -= 1
        x = x % size
    return y ** seq


class _Solver:
    def __init__(self, num_vars: int):
        nv = num_vars
        self.num_vars = nv
        self.clauses: list[list[int]] = []
        self.watches: list[list[int]] = [[] for _ in range(2 * nv + 2)]
        self.assigns = bytearray(nv + 1)  # 0 undef, 1 true, 2 false
        self.level = [0] * (nv + 1)
        self.reason = [-1] * (nv + 1)
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.activity = [0.0] * (nv + 1)
        self.var_inc = 1.0
        self.heap = [(0.0, v) for v in range(1, nv + 1)]
        self.ok = True
        self.decisions = 0
        self.propagations = 0
        self.conflicts = 0
        self.restarts = 0

    # -- assignment ------------------------------------------------------

    def _lit_value(self, p: int) -> int:
        # 1 true, 2 false, 0 undef for the literal p
        a = self.assigns[p >> 1]
        if a == 0:
            return 0
        return a if (p & 1) == 0 else 3 - a

    def _enqueue(self, p: int, reason: int) -> None:
        v = p >> 1
        self.assigns[v] = 2 if (p & 1) else 1
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(p)

    # -- clause management -------------------------------------------------

    def add_clause(self, lits: list[int]) -> None:
        """Add a problem clause (internal literal encoding), at level 0."""
        if not self.ok:
            return
        seen: set[int] = set()
        cleaned: list[int] = []
        for p in lits:
            if p ^ 1 in seen:
                return  # tautology
            if p not in seen:
                seen.add(p)
                cleaned.append(p)
        cleaned = [p for p in cleaned if self._lit_value(p) != 2]
        if any(self._lit_value(p) == 1 for p in cleaned):
            return
        if not cleaned:
            self.ok = False
        elif len(cleaned) == 1:
            self._enqueue(cleaned[0], -1)
            if self._propagate() != -1:
                self.ok = False
        else:
            self._attach(cleaned)

    def _attach(self, lits: list[int]) -> int:
        cref = len(self.clauses)
        self.clauses.append(lits)
        self.watches[lits[0] ^ 1].append(cref)
        self.watches[lits[1] ^ 1].append(cref)
        return cref

    # -- search ------------------------------------------------------------

    def _propagate(self) -> int:
        """Propagate queued assignments; return conflicting cref or -1."""
        trail = self.trail
        watches = self.watches
        clauses = self.clauses
        assigns = self.assigns
        confl = -1
        while self.qhead < len(trail):
            p = trail[self.qhead]
            self.qhead += 1
            self.propagations += 1
            ws = watches[p]
            i = j = 0
            nws = len(ws)
            while i < nws:
                cref = ws[i]
                i += 1
                c = clauses[cref]
                false_lit = p ^ 1
                if c[0] == false_lit:
                    c[0] = c[1]
                    c[1] = false_lit
                first = c[0]
                a = assigns[first >> 1]
                if a != 0 and (a == 1) == ((first & 1) == 0):
                    ws[j] = cref  # first watch already true
                    j += 1
                    continue
                for k in range(2, len(c)):
                    q = c[k]
                    aq = assigns[q >> 1]
                    if aq == 0 or (aq == 1) == ((q & 1) == 0):
                        c[1] = q
                        c[k] = false_lit
                        watches[q ^ 1].append(cref)
                        break
                else:
                    ws[j] = cref
                    j += 1
                    if a != 0:  # first watch false: conflict
                        while i < nws:
                            ws[j] = ws[i]
                            i += 1
                            j += 1
                        confl = cref
                        self.qhead = len(trail)
                        break
                    self._enqueue(first, cref)
            del ws[j:]
            if confl != -1:
                return confl
        return -1

    def _analyze(self, confl: int) -> tuple[list[int], int]:
        """First-UIP conflict analysis: learnt clause (asserting literal
        first) and the level to backtrack to."""
        learnt = [0]
        seen = bytearray(self.num_vars + 1)
        cur_level = len(self.trail_lim)
        path = 0
        p = -1
        index = len(self.trail) - 1
        while True:
            lits = self.clauses[confl]
            for k in range(0 if p == -1 else 1, len(lits)):
                q = lits[k]
                v = q >> 1
                if not seen[v] and self.level[v] > 0:
                    seen[v] = 1
                    self._bump(v)
                    if self.level[v] >= cur_level:
                        path += 1
                    else:
                        learnt.append(q)
            while not seen[self.trail[index] >> 1]:
                index -= 1
            p = self.trail[index]
            v = p >> 1
            confl = self.reason[v]
            seen[v] = 0
            path -= 1
            index -= 1
            if path == 0:
                break
        learnt[0] = p ^ 1
        if len(learnt) == 1:
            return learnt, 0
        # watch a literal of the backjump level at position 1
        mi = 1
        for k in range(2, len(learnt)):
            if self.level[learnt[k] >> 1] > self.level[learnt[mi] >> 1]:
                mi = k
        learnt[1], learnt[mi] = learnt[mi], learnt[1]
        return learnt, self.level[learnt[1] >> 1]

    def _bump(self, v: int) -> None:
        act = self.activity[v] + self.var_inc
        self.activity[v] = act
        if act > RESCALE_LIMIT:
            scale = 1.0 / RESCALE_LIMIT
            for u in range(1, self.num_vars + 1):
                self.activity[u] *= scale
            self.var_inc *= scale
            self.heap = [
                (-self.activity[u], u)
                for u in range(1, self.num_vars + 1)
                if self.assigns[u] == 0
            ]
            heapify(self.heap)
        else:
            heappush(self.heap, (-act, v))

    def _backtrack(self, lvl: int) -> None:
        if len(self.trail_lim) <= lvl:
            return
        bound = self.trail_lim[lvl]
        heap = self.heap
        for idx in range(len(self.trail) - 1, bound - 1, -1):
            v = self.trail[idx] >> 1
            self.assigns[v] = 0
            heappush(heap, (-self.activity[v], v))
        del self.trail[bound:]
        del self.trail_lim[lvl:]
        self.qhead = bound

    def _decide(self) -> bool:
        heap = self.heap
        while heap:
            act, v = heappop(heap)
            if self.assigns[v] == 0 and -act == self.activity[v]:
                self.decisions += 1
                self.trail_lim.append(len(self.trail))
                self._enqueue((v << 1) | 1, -1)  # default polarity: false
                return True
        return False

    def solve(self, conflict_budget: int) -> tuple[str, list[bool] | None]:
        if not self.ok:
            return UNSAT, None
        restart_limit = RESTART_FIRST * _luby(2, self.restarts)
        conflicts_here = 0
        while True:
            confl = self._propagate()
            if confl != -1:
                self.conflicts += 1
                conflicts_here += 1
                if not self.trail_lim:
                    return UNSAT, None
                learnt, bt = self._analyze(confl)
                self._backtrack(bt)
                if len(learnt) == 1:
                    self._enqueue(learnt[0], -1)
                else:
                    self._enqueue(learnt[0], self._attach(learnt))
                self.var_inc /= VAR_DECAY
                if self.conflicts >= conflict_budget:
                    return UNKNOWN, None
                if conflicts_here >= restart_limit:
                    self.restarts += 1
                    restart_limit = RESTART_FIRST * _luby(2, self.restarts)
                    conflicts_here = 0
                    self._backtrack(0)
            else:
                if len(self.trail) == self.num_vars:
                    model = [False] * (self.num_vars + 1)
                    for v in range(1, self.num_vars + 1):
                        model[v] = self.assigns[v] == 1
                    return SAT, model
                if not self._decide():
                    # assigns and trail disagree only if a var was never used;
                    # the heap covers all vars, so this is unreachable
                    raise AssertionError("no decision candidate but trail incomplete")


def solve_cdcl(
    num_vars: int,
    clauses,
    conflict_budget: int = DEFAULT_CONFLICT_BUDGET,
) -> tuple[str, list[bool] | None, dict]:
    """Decide satisfiability of the clause list (DIMACS-signed literals).

    Returns (status, model, stats); the model is a bool list indexed by
    variable (entry 0 unused) and present only for SAT.  Status UNKNOWN means
    the conflict budget was exhausted.  Fully deterministic.
    """
    s = _Solver(num_vars)
    for clause in clauses:
        s.add_clause([(abs(l) << 1) | (l < 0) for l in clause])
        if not s.ok:
            break
    status, model = s.solve(conflict_budget)
    stats = {
        "decisions": s.decisions,
        "propagations": s.propagations,
        "conflicts": s.conflicts,
        "restarts": s.restarts,
    }
    return status, model, stats
