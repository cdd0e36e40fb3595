"""Bridge to external DIMACS-speaking SAT solver processes.

Two invocation styles are supported:

* ``cmd FILE`` printing a SAT-competition style result to stdout
  ("s SATISFIABLE" / "s UNSATISFIABLE" with "v ..." model lines), and
* command templates with ``{cnf}`` / ``{out}`` placeholders for solvers that
  write a result file ("SAT" / "UNSAT" on the first line followed by the
  model), MiniSat style.

Claimed models are always verified against the CNF; a SAT claim with a bad
model is an error, never silently accepted.
"""

from __future__ import annotations

import os
import shlex
import subprocess
import tempfile
import time
from typing import Optional

from ..encoding import Cnf, to_dimacs
from . import SAT, UNSAT, SolveResult, SolverError, verify_model

SOLVER_ENV = "D3SYNC_SOLVER"
TIMEOUT_ENV = "D3SYNC_SOLVER_TIMEOUT_S"


class ExternalSolverError(SolverError):
    pass


def default_command() -> Optional[str]:
    return os.environ.get(SOLVER_ENV)


def default_timeout() -> Optional[float]:
    raw = os.environ.get(TIMEOUT_ENV)
    return float(raw) if raw else None


def solve_external(
    cnf: Cnf,
    command: Optional[str] = None,
    timeout: Optional[float] = None,
) -> SolveResult:
    """Run an external solver on the CNF and return its verified result."""
    command = command or default_command()
    if not command:
        raise ExternalSolverError(f"no external solver configured (set {SOLVER_ENV})")
    timeout = timeout if timeout is not None else default_timeout()

    with tempfile.TemporaryDirectory(prefix="d3sync-") as tmp:
        cnf_path = os.path.join(tmp, "instance.cnf")
        out_path = os.path.join(tmp, "result.txt")
        with open(cnf_path, "w") as fh:
            fh.write(to_dimacs(cnf))
        argv = shlex.split(command)
        if any("{cnf}" in a or "{out}" in a for a in argv):
            argv = [a.replace("{cnf}", cnf_path).replace("{out}", out_path) for a in argv]
        else:
            argv = argv + [cnf_path]
        start = time.perf_counter()
        try:
            proc = subprocess.run(argv, capture_output=True, text=True, timeout=timeout)
        except FileNotFoundError as exc:
            raise ExternalSolverError(f"cannot spawn solver: {exc}") from exc
        except subprocess.TimeoutExpired as exc:
            raise ExternalSolverError(f"solver timed out after {timeout}s") from exc
        elapsed = time.perf_counter() - start
        output = proc.stdout
        if os.path.exists(out_path):
            with open(out_path) as fh:
                output = fh.read()

    status, lits = _parse_output(output)
    stats = {"wall_time": elapsed, "returncode": proc.returncode}
    if status == UNSAT:
        return SolveResult(UNSAT, None, stats)
    model = _total_model(cnf.num_vars, lits)
    if not verify_model(cnf, model):
        raise ExternalSolverError("external solver claimed SAT but the model fails a clause")
    return SolveResult(SAT, model, stats)


def _parse_output(output: str) -> tuple[str, list[int]]:
    status = None
    lits: list[int] = []
    model_tokens: list[str] = []
    for line in output.splitlines():
        stripped = line.strip()
        if not stripped or stripped.startswith("c"):
            continue
        if stripped.startswith("s ") or stripped in ("SAT", "UNSAT", "SATISFIABLE", "UNSATISFIABLE"):
            word = stripped[2:].strip() if stripped.startswith("s ") else stripped
            if word in ("SATISFIABLE", "SAT"):
                status = SAT
            elif word in ("UNSATISFIABLE", "UNSAT"):
                status = UNSAT
            else:
                raise ExternalSolverError(
                    f"unrecognized status line {stripped!r}; full output:\n{output}"
                )
        elif stripped.startswith("v "):
            model_tokens.extend(stripped[2:].split())
        elif status == SAT and _all_ints(stripped.split()):
            model_tokens.extend(stripped.split())
    if status is None:
        raise ExternalSolverError(f"no status line in solver output:\n{output}")
    if status == SAT:
        try:
            lits = [int(t) for t in model_tokens if int(t) != 0]
        except ValueError as exc:
            raise ExternalSolverError(f"bad model literal in solver output: {exc}") from exc
        if not lits:
            raise ExternalSolverError(f"SAT claimed but no model line found:\n{output}")
    return status, lits


def _all_ints(tokens: list[str]) -> bool:
    try:
        for t in tokens:
            int(t)
    except ValueError:
        return False
    return bool(tokens)


def _total_model(num_vars: int, lits: list[int]) -> list[bool]:
    model = [False] * (num_vars + 1)
    for lit in lits:
        var = abs(lit)
        if var > num_vars:
            raise ExternalSolverError(f"model literal {lit} exceeds variable count {num_vars}")
        model[var] = lit > 0
    return model
