# distutils: language = c++
# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled CDCL solver core.

Algorithmic twin of cdcl_py (two-watched-literal propagation, first-UIP
learning, VSIDS with index tie-breaking, Luby restarts); keep the two in
step when touching either.  Literals are (var << 1) | sign internally.
"""

from libcpp.vector cimport vector

ctypedef signed char schar
ctypedef long long int64

cdef double VAR_DECAY = 0.95
cdef double RESCALE_LIMIT = 1e100
cdef int RESTART_FIRST = 100

cdef int ST_SAT = 1
cdef int ST_UNSAT = 0
cdef int ST_UNKNOWN = 2


cdef double _luby(int y, int x):
    cdef int size = 1
    cdef int seq = 0
    while size < x + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != x:
        size = (size - 1) >> 1
        seq -= 1
        x = x % size
    cdef double r = 1.0
    while seq > 0:
        r *= y
        seq -= 1
    return r


cdef class _Core:
    cdef int num_vars
    cdef vector[vector[int]] clauses
    cdef vector[vector[int]] watches
    cdef vector[schar] assigns      # 0 undef, 1 true, 2 false
    cdef vector[schar] mark         # scratch for add_clause / analyze
    cdef vector[int] level
    cdef vector[int] reason
    cdef vector[int] trail
    cdef vector[int] trail_lim
    cdef int qhead
    cdef vector[double] activity
    cdef double var_inc
    cdef vector[double] heap_act
    cdef vector[int] heap_var
    cdef bint ok
    cdef public int64 decisions
    cdef public int64 propagations
    cdef public int64 conflicts
    cdef public int64 restarts

    def __cinit__(self, int num_vars):
        cdef int v
        self.num_vars = num_vars
        self.watches.resize(2 * num_vars + 2)
        self.assigns.assign(num_vars + 1, 0)
        self.mark.assign(2 * num_vars + 2, 0)
        self.level.assign(num_vars + 1, 0)
        self.reason.assign(num_vars + 1, -1)
        self.activity.assign(num_vars + 1, 0.0)
        self.var_inc = 1.0
        self.qhead = 0
        self.ok = True
        self.decisions = 0
        self.propagations = 0
        self.conflicts = 0
        self.restarts = 0
        self.heap_act.reserve(num_vars)
        self.heap_var.reserve(num_vars)
        for v in range(1, num_vars + 1):
            self._heap_push(0.0, v)

    # -- heap: max by activity, ties to the smallest variable index ---------

    cdef inline bint _heap_before(self, double a1, int v1, double a2, int v2):
        return a1 > a2 or (a1 == a2 and v1 < v2)

    cdef void _heap_push(self, double act, int v):
        cdef size_t i = self.heap_act.size()
        cdef size_t parent
        self.heap_act.push_back(act)
        self.heap_var.push_back(v)
        while i > 0:
            parent = (i - 1) >> 1
            if self._heap_before(act, v, self.heap_act[parent], self.heap_var[parent]):
                self.heap_act[i] = self.heap_act[parent]
                self.heap_var[i] = self.heap_var[parent]
                i = parent
            else:
                break
        self.heap_act[i] = act
        self.heap_var[i] = v

    cdef int _heap_pop(self):
        # pops entries until a fresh unassigned one appears; -1 if exhausted
        cdef double act, last_act
        cdef int v, last_var
        cdef size_t i, child, size
        while self.heap_act.size() > 0:
            act = self.heap_act[0]
            v = self.heap_var[0]
            size = self.heap_act.size() - 1
            last_act = self.heap_act[size]
            last_var = self.heap_var[size]
            self.heap_act.pop_back()
            self.heap_var.pop_back()
            if size > 0:
                i = 0
                while True:
                    child = 2 * i + 1
                    if child >= size:
                        break
                    if child + 1 < size and self._heap_before(
                        self.heap_act[child + 1], self.heap_var[child + 1],
                        self.heap_act[child], self.heap_var[child],
                    ):
                        child += 1
                    if self._heap_before(
                        self.heap_act[child], self.heap_var[child], last_act, last_var
                    ):
                        self.heap_act[i] = self.heap_act[child]
                        self.heap_var[i] = self.heap_var[child]
                        i = child
                    else:
                        break
                self.heap_act[i] = last_act
                self.heap_var[i] = last_var
            if self.assigns[v] == 0 and act == self.activity[v]:
                return v
        return -1

    # -- assignment ----------------------------------------------------------

    cdef inline int _lit_value(self, int p):
        # 1 true, 2 false, 0 undef
        cdef schar a = self.assigns[p >> 1]
        if a == 0:
            return 0
        if (p & 1) == 0:
            return a
        return 3 - a

    cdef inline void _enqueue(self, int p, int reason):
        # no ternary on the RHS: assigning one through vector::operator[]
        # makes Cython materialize a dangling element reference
        cdef int v = p >> 1
        if p & 1:
            self.assigns[v] = 2
        else:
            self.assigns[v] = 1
        self.level[v] = <int> self.trail_lim.size()
        self.reason[v] = reason
        self.trail.push_back(p)

    # -- clauses ---------------------------------------------------------------

    cdef int _attach(self, vector[int]& lits):
        cdef int cref = <int> self.clauses.size()
        self.clauses.push_back(lits)
        self.watches[lits[0] ^ 1].push_back(cref)
        self.watches[lits[1] ^ 1].push_back(cref)
        return cref

    def add_clause(self, clause):
        """Add one problem clause of DIMACS-signed Python ints."""
        if not self.ok:
            return
        cdef vector[int] cleaned
        cdef int p, q, val, k, sz
        cdef bint taut = False
        cdef bint satisfied = False
        for lit in clause:
            q = lit
            if q < 0:
                p = ((-q) << 1) | 1
            else:
                p = q << 1
            if self.mark[p ^ 1]:
                taut = True
                break
            if not self.mark[p]:
                self.mark[p] = 1
                cleaned.push_back(p)
        sz = <int> cleaned.size()
        for k in range(sz):
            self.mark[cleaned[k]] = 0
        if taut:
            return
        cdef vector[int] final
        for k in range(sz):
            val = self._lit_value(cleaned[k])
            if val == 1:
                satisfied = True
                break
            if val == 0:
                final.push_back(cleaned[k])
        if satisfied:
            return
        if final.size() == 0:
            self.ok = False
        elif final.size() == 1:
            self._enqueue(final[0], -1)
            if self._propagate() != -1:
                self.ok = False
        else:
            self._attach(final)

    # -- search ------------------------------------------------------------------

    cdef int _propagate(self):
        cdef int p, cref, first, q, false_lit, confl
        cdef size_t i, j, k, nws
        cdef schar a, aq
        cdef vector[int]* ws
        cdef vector[int]* c
        confl = -1
        while self.qhead < <int> self.trail.size():
            p = self.trail[self.qhead]
            self.qhead += 1
            self.propagations += 1
            ws = &self.watches[p]
            i = 0
            j = 0
            nws = ws[0].size()
            while i < nws:
                cref = ws[0][i]
                i += 1
                c = &self.clauses[cref]
                false_lit = p ^ 1
                if c[0][0] == false_lit:
                    c[0][0] = c[0][1]
                    c[0][1] = false_lit
                first = c[0][0]
                a = self.assigns[first >> 1]
                if a != 0 and (a == 1) == ((first & 1) == 0):
                    ws[0][j] = cref
                    j += 1
                    continue
                k = 2
                while k < c[0].size():
                    q = c[0][k]
                    aq = self.assigns[q >> 1]
                    if aq == 0 or (aq == 1) == ((q & 1) == 0):
                        c[0][1] = q
                        c[0][k] = false_lit
                        self.watches[q ^ 1].push_back(cref)
                        break
                    k += 1
                else:
                    ws[0][j] = cref
                    j += 1
                    if a != 0:
                        while i < nws:
                            ws[0][j] = ws[0][i]
                            i += 1
                            j += 1
                        confl = cref
                        self.qhead = <int> self.trail.size()
                        break
                    self._enqueue(first, cref)
            ws[0].resize(j)
            if confl != -1:
                return confl
        return -1

    cdef void _bump(self, int v):
        cdef double act = self.activity[v] + self.var_inc
        cdef double scale
        cdef int u
        self.activity[v] = act
        if act > RESCALE_LIMIT:
            scale = 1.0 / RESCALE_LIMIT
            for u in range(1, self.num_vars + 1):
                self.activity[u] *= scale
            self.var_inc *= scale
            self.heap_act.clear()
            self.heap_var.clear()
            for u in range(1, self.num_vars + 1):
                if self.assigns[u] == 0:
                    self._heap_push(self.activity[u], u)
        else:
            self._heap_push(act, v)

    cdef int _analyze(self, int confl, vector[int]& learnt):
        # first-UIP; fills learnt (asserting literal first), returns backjump level
        cdef int cur_level = <int> self.trail_lim.size()
        cdef int path = 0
        cdef int p = -1
        cdef int index = <int> self.trail.size() - 1
        cdef int q, v, start, mi, tmp, k, sz
        cdef vector[int]* lits
        learnt.clear()
        learnt.push_back(0)
        while True:
            lits = &self.clauses[confl]
            start = 0 if p == -1 else 1
            sz = <int> lits[0].size()
            for k in range(start, sz):
                q = lits[0][k]
                v = q >> 1
                if not self.mark[v] and self.level[v] > 0:
                    self.mark[v] = 1
                    self._bump(v)
                    if self.level[v] >= cur_level:
                        path += 1
                    else:
                        learnt.push_back(q)
            while not self.mark[self.trail[index] >> 1]:
                index -= 1
            p = self.trail[index]
            v = p >> 1
            confl = self.reason[v]
            self.mark[v] = 0
            path -= 1
            index -= 1
            if path == 0:
                break
        learnt[0] = p ^ 1
        sz = <int> learnt.size()
        for k in range(1, sz):
            self.mark[learnt[k] >> 1] = 0
        if sz == 1:
            return 0
        mi = 1
        for k in range(2, sz):
            if self.level[learnt[k] >> 1] > self.level[learnt[mi] >> 1]:
                mi = k
        tmp = learnt[1]
        learnt[1] = learnt[mi]
        learnt[mi] = tmp
        return self.level[learnt[1] >> 1]

    cdef void _backtrack(self, int lvl):
        cdef int bound, idx, v
        if <int> self.trail_lim.size() <= lvl:
            return
        bound = self.trail_lim[lvl]
        idx = <int> self.trail.size() - 1
        while idx >= bound:
            v = self.trail[idx] >> 1
            self.assigns[v] = 0
            self._heap_push(self.activity[v], v)
            idx -= 1
        self.trail.resize(bound)
        self.trail_lim.resize(lvl)
        self.qhead = bound

    cdef bint _decide(self):
        cdef int v = self._heap_pop()
        if v == -1:
            return False
        self.decisions += 1
        self.trail_lim.push_back(<int> self.trail.size())
        self._enqueue((v << 1) | 1, -1)  # default polarity: false
        return True

    def solve(self, long long conflict_budget):
        cdef int confl, bt
        cdef vector[int] learnt
        cdef double restart_limit
        cdef int64 conflicts_here = 0
        if not self.ok:
            return ST_UNSAT
        restart_limit = RESTART_FIRST * _luby(2, <int> self.restarts)
        while True:
            confl = self._propagate()
            if confl != -1:
                self.conflicts += 1
                conflicts_here += 1
                if self.trail_lim.size() == 0:
                    return ST_UNSAT
                bt = self._analyze(confl, learnt)
                self._backtrack(bt)
                if learnt.size() == 1:
                    self._enqueue(learnt[0], -1)
                else:
                    self._enqueue(learnt[0], self._attach(learnt))
                self.var_inc /= VAR_DECAY
                if self.conflicts >= conflict_budget:
                    return ST_UNKNOWN
                if conflicts_here >= restart_limit:
                    self.restarts += 1
                    restart_limit = RESTART_FIRST * _luby(2, <int> self.restarts)
                    conflicts_here = 0
                    self._backtrack(0)
            else:
                if <int> self.trail.size() == self.num_vars:
                    return ST_SAT
                if not self._decide():
                    raise AssertionError("no decision candidate but trail incomplete")

    def model(self):
        cdef int v
        out = [False] * (self.num_vars + 1)
        for v in range(1, self.num_vars + 1):
            out[v] = self.assigns[v] == 1
        return out

    def debug_state(self):
        cdef size_t i
        return {
            "assigns": [self.assigns[i] for i in range(self.assigns.size())],
            "trail": [self.trail[i] for i in range(self.trail.size())],
            "qhead": self.qhead,
            "nclauses": self.clauses.size(),
            "ok": self.ok,
        }


def solve_cdcl(num_vars, clauses, conflict_budget=10_000_000):
    """Decide satisfiability of the clause list (DIMACS-signed literals).

    Same contract as cdcl_py.solve_cdcl: (status, model, stats), model a bool
    list indexed by variable, status UNKNOWN when the budget is exhausted.
    """
    core = _Core(num_vars)
    for clause in clauses:
        core.add_clause(clause)
    code = core.solve(conflict_budget)
    stats = {
        "decisions": core.decisions,
        "propagations": core.propagations,
        "conflicts": core.conflicts,
        "restarts": core.restarts,
    }
    if code == ST_SAT:
        return "SAT", core.model(), stats
    if code == ST_UNSAT:
        return "UNSAT", None, stats
    return "UNKNOWN", None, stats
