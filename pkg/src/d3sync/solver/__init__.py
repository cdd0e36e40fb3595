"""SAT backend: compiled CDCL core when built, pure-Python core otherwise.

Every SAT answer is re-verified against the clause list before being
returned, for both the internal cores and external solver processes.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional, Sequence

from ..encoding import Cnf
from . import cdcl_py
from .cdcl_py import DEFAULT_CONFLICT_BUDGET, SAT, UNKNOWN, UNSAT

try:
    from . import _cdcl  # compiled twin of cdcl_py

    _IMPL = _cdcl
    BACKEND = "compiled"
except ImportError:
    _IMPL = cdcl_py
    BACKEND = "pure-python"


class SolverError(RuntimeError):
    """Solver produced no usable answer (bad model, malformed output, ...)."""


class ConflictBudgetExceeded(SolverError):
    """Conflict budget hit: the result is unknown, not UNSAT."""


@dataclass
class SolveResult:
    status: str  # SAT or UNSAT
    model: Optional[list[bool]] = None  # indexed by variable, entry 0 unused
    stats: dict = field(default_factory=dict)

    @property
    def is_sat(self) -> bool:
        return self.status == SAT


def verify_model(cnf: Cnf, model: Sequence[bool]) -> bool:
    """Check that every clause has a satisfied literal."""
    if len(model) < cnf.num_vars + 1:
        return False
    return all(
        any(model[lit] if lit > 0 else not model[-lit] for lit in clause)
        for clause in cnf.clauses
    )


def solve_internal(
    cnf: Cnf,
    conflict_budget: int = DEFAULT_CONFLICT_BUDGET,
    core=None,
) -> SolveResult:
    """Decide the CNF with the built-in CDCL core.

    SAT models are total and verified here before returning; UNKNOWN (budget
    exhausted) raises ConflictBudgetExceeded rather than masquerading as
    UNSAT.
    """
    impl = core if core is not None else _IMPL
    start = time.perf_counter()
    status, model, stats = impl.solve_cdcl(cnf.num_vars, cnf.clauses, conflict_budget)
    stats["wall_time"] = time.perf_counter() - start
    if status == UNKNOWN:
        raise ConflictBudgetExceeded(
            f"conflict budget {conflict_budget} exhausted after {stats['conflicts']} conflicts"
        )
    if status == SAT:
        if model is None or not verify_model(cnf, model):
            raise SolverError("internal solver returned an invalid model")
        return SolveResult(SAT, model, stats)
    return SolveResult(UNSAT, None, stats)


def unit_propagate(
    cnf: Cnf, assumptions: Sequence[int] = ()
) -> Optional[dict[int, bool]]:
    """Run unit propagation alone (no decisions) from the given assumption
    literals; returns the forced partial assignment as {var: value}, or None
    on conflict.

    Deliberately independent of the CDCL cores: a plain counter-based scheme
    over the clause list, used to check which variables propagation alone
    pins down.
    """
    value: dict[int, bool] = {}
    for lit in assumptions:
        var, val = abs(lit), lit > 0
        if value.setdefault(var, val) != val:
            return None
    # fixpoint sweep; quadratic, fine for the diagnostic sizes this serves
    progressed = True
    while progressed:
        progressed = False
        for c in cnf.clauses:
            unassigned = []
            satisfied = False
            for lit in c:
                var = abs(lit)
                if var in value:
                    if value[var] == (lit > 0):
                        satisfied = True
                        break
                else:
                    unassigned.append(lit)
            if satisfied:
                continue
            if not unassigned:
                return None
            if len(unassigned) == 1:
                lit = unassigned[0]
                value[abs(lit)] = lit > 0
                progressed = True
    return value
