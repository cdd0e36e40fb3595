import json

import pytest

from d3sync.cli import main


def _nfa_file(tmp_path, nfa):
    path = tmp_path / "nfa.json"
    path.write_text(json.dumps(nfa.to_json()))
    return str(path)


def test_minlen_synchronizing(tmp_path, bin3, capsys):
    code = main(["minlen", _nfa_file(tmp_path, bin3), "--l0", "2"])
    out = json.loads(capsys.readouterr().out)
    assert code == 0
    assert out["synchronizing"] is True
    assert out["length"] == 2 and out["witness"] == [0, 0]
    assert out["trace"][0] == {"l": 2, "status": "SAT", "cached": False}


def test_minlen_not_synchronizing(tmp_path, capsys):
    from d3sync.automata import Nfa

    split = Nfa.build(2, 2, [[[1], [1]], [[2], [2]]])
    code = main(["minlen", _nfa_file(tmp_path, split)])
    out = json.loads(capsys.readouterr().out)
    assert code == 3
    assert out["synchronizing"] is False and out["not_sync_up_to"] >= 4


def test_minlen_error_exit(tmp_path, capsys):
    code = main(["minlen", str(tmp_path / "missing.json")])
    assert code == 1
    assert "error" in capsys.readouterr().err


def test_minlen_emit_dimacs(tmp_path, bin3):
    outdir = tmp_path / "cnfs"
    code = main(["minlen", _nfa_file(tmp_path, bin3), "--l0", "2", "--emit-dimacs", str(outdir)])
    assert code == 0
    assert sorted(p.name for p in outdir.iterdir()) == ["probe_basic_l1.cnf", "probe_basic_l2.cnf"]


def test_minlen_variants_and_modes(tmp_path, fig2, capsys):
    path = _nfa_file(tmp_path, fig2)
    for extra in (["--variant", "forced0"], ["--variant", "letterfree"], ["--mode", "linear"]):
        code = main(["minlen", path, *extra])
        out = json.loads(capsys.readouterr().out)
        assert code == 0 and out["length"] == 4


def test_oracle_bfs(tmp_path, fig1r, capsys):
    code = main(["oracle", _nfa_file(tmp_path, fig1r)])
    out = json.loads(capsys.readouterr().out)
    assert code == 0
    assert out == {"synchronizing": True, "length": 1, "witness": [0]}


def test_oracle_exhaustive_cap(tmp_path, bin3, capsys):
    code = main(["oracle", _nfa_file(tmp_path, bin3), "--method", "exhaustive", "--cap", "1"])
    out = json.loads(capsys.readouterr().out)
    assert code == 3 and out["synchronizing"] is False


def test_gen_writes_files_and_manifest(tmp_path, capsys):
    outdir = tmp_path / "nfas"
    code = main([
        "gen", "--model", "poisson", "--lambda", "1.0", "--n", "5",
        "--count", "4", "--seed", "9", "--out", str(outdir),
    ])
    assert code == 0
    manifest = json.loads((outdir / "manifest.json").read_text())
    assert manifest["model"] == "poisson" and len(manifest["files"]) == 4
    from d3sync.automata import Nfa

    for entry in manifest["files"]:
        nfa = Nfa.from_json_file(outdir / entry["file"])
        assert nfa.n == 5


def test_gen_deterministic(tmp_path):
    out1, out2 = tmp_path / "a", tmp_path / "b"
    args = ["gen", "--model", "uniform", "--n", "4", "--count", "3", "--seed", "2"]
    assert main(args + ["--out", str(out1)]) == 0
    assert main(args + ["--out", str(out2)]) == 0
    for name in ("nfa_00000.json", "nfa_00002.json"):
        assert (out1 / name).read_text() == (out2 / name).read_text()


def test_encode_subcommand(tmp_path, bin3, capsys):
    cnf_path = tmp_path / "out.cnf"
    code = main(["encode", _nfa_file(tmp_path, bin3), "-l", "2", "-o", str(cnf_path)])
    assert code == 0
    text = cnf_path.read_text()
    assert text.startswith("c d3sync n=3 l=2 variant=basic\n")
    from d3sync.encoding import parse_dimacs, varmap_from_dimacs

    cnf = parse_dimacs(text)
    assert cnf.num_vars == 2 + 9 * 3 + 3
    assert varmap_from_dimacs(text).ell == 2


def test_experiment_subcommand(tmp_path, capsys):
    config = {
        "model": "uniform", "n_list": [3, 4], "count_per_n": 3,
        "seed": 11, "mode": "binary", "oracle_check": True,
    }
    cfg_path = tmp_path / "exp.json"
    cfg_path.write_text(json.dumps(config))
    outdir = tmp_path / "results"
    code = main(["experiment", "--config", str(cfg_path), "--out", str(outdir)])
    assert code == 0
    assert (outdir / "records.csv").exists()
    assert (outdir / "histograms.json").exists()
    assert (outdir / "fits.json").exists()


def test_external_solver_flag(tmp_path, bin3, capsys):
    import stat
    import sys

    import d3sync
    import os

    pkgroot = os.path.dirname(os.path.dirname(d3sync.__file__))
    script = tmp_path / "mysolver.py"
    script.write_text(
        f"#!{sys.executable}\n"
        "import sys\n"
        f"sys.path.insert(0, {pkgroot!r})\n"
        "from d3sync.encoding import parse_dimacs\n"
        "from d3sync.solver import cdcl_py\n"
        "cnf = parse_dimacs(open(sys.argv[1]).read())\n"
        "status, model, _ = cdcl_py.solve_cdcl(cnf.num_vars, cnf.clauses)\n"
        "if status == 'SAT':\n"
        "    print('s SATISFIABLE')\n"
        "    print('v ' + ' '.join(str(v if model[v] else -v) for v in range(1, cnf.num_vars + 1)) + ' 0')\n"
        "else:\n"
        "    print('s UNSATISFIABLE')\n"
    )
    script.chmod(script.stat().st_mode | stat.S_IEXEC)
    code = main(["minlen", _nfa_file(tmp_path, bin3), "--l0", "2", "--solver", str(script)])
    out = json.loads(capsys.readouterr().out)
    assert code == 0 and out["length"] == 2


def test_bench_runs(capsys):
    assert main(["bench", "--length", "1", "--repeat", "1"]) == 0
    assert "ms" in capsys.readouterr().out
