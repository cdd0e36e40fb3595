import random
import stat
import sys
from itertools import product

import pytest

from conftest import random_corpus
from d3sync.encoding import Cnf, encode_basic
from d3sync.solver import (
    BACKEND,
    ConflictBudgetExceeded,
    SolverError,
    cdcl_py,
    solve_internal,
    unit_propagate,
    verify_model,
)
from d3sync.solver.external import ExternalSolverError, solve_external

try:
    from d3sync.solver import _cdcl
except ImportError:
    _cdcl = None

needs_compiled = pytest.mark.skipif(_cdcl is None, reason="compiled core not built")


def brute_force_sat(cnf: Cnf) -> bool:
    for bits in product([False, True], repeat=cnf.num_vars):
        model = (False,) + bits
        if all(any(model[l] if l > 0 else not model[-l] for l in c) for c in cnf.clauses):
            return True
    return False


def random_cnf(rng, max_vars=8, max_clauses=30) -> Cnf:
    nv = rng.randint(1, max_vars)
    clauses = []
    for _ in range(rng.randint(1, max_clauses)):
        width = rng.randint(1, min(4, nv))
        vs = rng.sample(range(1, nv + 1), width)
        clauses.append(tuple(v if rng.random() < 0.5 else -v for v in vs))
    return Cnf(nv, tuple(clauses))


def test_empty_cnf_is_sat():
    res = solve_internal(Cnf(3, ()))
    assert res.status == "SAT" and len(res.model) == 4


def test_contradiction_is_unsat():
    assert solve_internal(Cnf(1, ((1,), (-1,)))).status == "UNSAT"


def test_self1_instance(self1):
    cnf, _ = encode_basic(self1, 1)
    res = solve_internal(cnf)
    assert res.status == "SAT" and res.model[1] is False


def test_models_are_total_and_verified():
    rng = random.Random(1)
    for _ in range(200):
        cnf = random_cnf(rng)
        try:
            res = solve_internal(cnf)
        except ConflictBudgetExceeded:
            pytest.fail("budget hit on a tiny instance")
        assert (res.status == "SAT") == brute_force_sat(cnf)
        if res.status == "SAT":
            assert len(res.model) == cnf.num_vars + 1
            assert verify_model(cnf, res.model)


def test_tautologies_and_duplicates_handled():
    cnf = Cnf(2, ((1, -1), (2, 2), (-2, 1, -2, 1)))
    res = solve_internal(cnf)
    assert res.status == "SAT" and res.model[2] is True


def test_determinism():
    rng = random.Random(4)
    for _ in range(20):
        cnf = random_cnf(rng, max_vars=12, max_clauses=50)
        first = solve_internal(cnf)
        second = solve_internal(cnf)
        assert first.status == second.status
        assert first.model == second.model
        for key in ("decisions", "propagations", "conflicts"):
            assert first.stats[key] == second.stats[key]


def test_budget_reports_unknown_not_unsat():
    # pigeonhole 7->6 takes a few hundred conflicts; a tiny budget must
    # raise instead of answering
    holes = 6
    var = lambda p, h: p * holes + h + 1
    clauses = [tuple(var(p, h) for h in range(holes)) for p in range(holes + 1)]
    for h in range(holes):
        for p1 in range(holes + 1):
            for p2 in range(p1 + 1, holes + 1):
                clauses.append((-var(p1, h), -var(p2, h)))
    cnf = Cnf((holes + 1) * holes, tuple(clauses))
    with pytest.raises(ConflictBudgetExceeded):
        solve_internal(cnf, conflict_budget=10)
    assert solve_internal(cnf).status == "UNSAT"


@needs_compiled
def test_backends_agree_and_match_brute_force():
    rng = random.Random(77)
    for _ in range(300):
        cnf = random_cnf(rng)
        s1, m1, st1 = cdcl_py.solve_cdcl(cnf.num_vars, cnf.clauses)
        s2, m2, st2 = _cdcl.solve_cdcl(cnf.num_vars, cnf.clauses)
        assert s1 == s2 == ("SAT" if brute_force_sat(cnf) else "UNSAT")
        assert m1 == m2 and st1 == st2


@needs_compiled
def test_backends_identical_on_encodings():
    for nfa in random_corpus(15, seed=42, n_lo=3, n_hi=5):
        for ell in (1, 2, 3):
            cnf, _ = encode_basic(nfa, ell)
            s1, m1, st1 = cdcl_py.solve_cdcl(cnf.num_vars, cnf.clauses)
            s2, m2, st2 = _cdcl.solve_cdcl(cnf.num_vars, cnf.clauses)
            assert (s1, m1, st1) == (s2, m2, st2)


def test_backend_is_reported():
    assert BACKEND in ("compiled", "pure-python")


# -- unit propagation --------------------------------------------------------------

def test_unit_propagate_chains():
    cnf = Cnf(3, ((-1, 2), (-2, 3)))
    assert unit_propagate(cnf, [1]) == {1: True, 2: True, 3: True}


def test_unit_propagate_conflict():
    cnf = Cnf(2, ((-1, 2), (-1, -2)))
    assert unit_propagate(cnf, [1]) is None


def test_unit_propagate_leaves_free_vars():
    cnf = Cnf(3, ((1, 2, 3),))
    assert unit_propagate(cnf) == {}


# -- external solver bridge ----------------------------------------------------------

FAKE_COMPETITION = """#!{python}
import sys
sys.path.insert(0, {pkgroot!r})
from d3sync.encoding import parse_dimacs
from d3sync.solver import cdcl_py
cnf = parse_dimacs(open(sys.argv[1]).read())
status, model, _ = cdcl_py.solve_cdcl(cnf.num_vars, cnf.clauses)
if status == "SAT":
    print("s SATISFIABLE")
    lits = [v if model[v] else -v for v in range(1, cnf.num_vars + 1)]
    print("v " + " ".join(map(str, lits)) + " 0")
else:
    print("s UNSATISFIABLE")
"""

FAKE_FILE_STYLE = """#!{python}
import sys
sys.path.insert(0, {pkgroot!r})
from d3sync.encoding import parse_dimacs
from d3sync.solver import cdcl_py
cnf = parse_dimacs(open(sys.argv[1]).read())
status, model, _ = cdcl_py.solve_cdcl(cnf.num_vars, cnf.clauses)
with open(sys.argv[2], "w") as fh:
    if status == "SAT":
        lits = [v if model[v] else -v for v in range(1, cnf.num_vars + 1)]
        fh.write("SAT\\n" + " ".join(map(str, lits)) + " 0\\n")
    else:
        fh.write("UNSAT\\n")
"""


def _write_fake(tmp_path, name, template):
    import os

    import d3sync

    pkgroot = os.path.dirname(os.path.dirname(d3sync.__file__))
    script = tmp_path / name
    script.write_text(template.format(python=sys.executable, pkgroot=pkgroot))
    script.chmod(script.stat().st_mode | stat.S_IEXEC)
    return str(script)


def test_external_competition_style(tmp_path, bin3):
    solver = _write_fake(tmp_path, "fake1.py", FAKE_COMPETITION)
    cnf, _ = encode_basic(bin3, 2)
    res = solve_external(cnf, solver)
    assert res.status == "SAT" and verify_model(cnf, res.model)
    cnf1, _ = encode_basic(bin3, 1)
    assert solve_external(cnf1, solver).status == "UNSAT"


def test_external_file_style(tmp_path, bin3):
    solver = _write_fake(tmp_path, "fake2.py", FAKE_FILE_STYLE) + " {cnf} {out}"
    cnf, _ = encode_basic(bin3, 2)
    res = solve_external(cnf, solver)
    assert res.status == "SAT" and verify_model(cnf, res.model)


def test_external_agrees_with_internal(tmp_path):
    solver = _write_fake(tmp_path, "fake3.py", FAKE_COMPETITION)
    for nfa in random_corpus(8, seed=70, n_lo=3, n_hi=4):
        for ell in (1, 2):
            cnf, _ = encode_basic(nfa, ell)
            assert solve_external(cnf, solver).status == solve_internal(cnf).status


def test_external_malformed_output(tmp_path, bin3):
    script = tmp_path / "bad.py"
    script.write_text(f"#!{sys.executable}\nprint('SATISFIABLE?')\n")
    script.chmod(script.stat().st_mode | stat.S_IEXEC)
    cnf, _ = encode_basic(bin3, 1)
    with pytest.raises(ExternalSolverError, match="SATISFIABLE\\?"):
        solve_external(cnf, str(script))


def test_external_lying_solver_is_caught(tmp_path, bin3):
    script = tmp_path / "liar.py"
    script.write_text(f"#!{sys.executable}\nprint('s SATISFIABLE')\nprint('v 1 0')\n")
    script.chmod(script.stat().st_mode | stat.S_IEXEC)
    cnf, _ = encode_basic(bin3, 1)  # actually UNSAT
    with pytest.raises(ExternalSolverError, match="model fails"):
        solve_external(cnf, str(script))


def test_external_missing_binary(bin3):
    cnf, _ = encode_basic(bin3, 1)
    with pytest.raises(ExternalSolverError):
        solve_external(cnf, "/nonexistent/solver/binary")


def test_external_unconfigured(bin3, monkeypatch):
    monkeypatch.delenv("D3SYNC_SOLVER", raising=False)
    cnf, _ = encode_basic(bin3, 1)
    with pytest.raises(ExternalSolverError, match="D3SYNC_SOLVER"):
        solve_external(cnf)
