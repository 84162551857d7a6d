"""Exit-code contract and output determinism of the command-line front end."""
import json
import re

import numpy as np
import pytest

from caligeo import pde
from caligeo.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_structures_passes(capsys):
    code, out, _ = run(capsys, "verify", "structures")
    assert code == 0
    assert "[PASS] g2-stabilizer" in out


def test_analyze_packaged_config(capsys):
    code, out, _ = run(capsys, "orbifold", "analyze", "configs/ex31.toml")
    assert code == 0
    assert "12 components" in out


def test_analyze_missing_config(capsys):
    code, _, err = run(capsys, "orbifold", "analyze", "no-such-file.toml")
    assert code == 2
    assert "config file not found" in err


def test_fixed_element_and_errors(capsys):
    code, out, _ = run(capsys, "orbifold", "fixed", "ex31.toml", "--element", "alpha")
    assert code == 0
    assert "16 components" in out
    code, _, err = run(capsys, "orbifold", "fixed", "ex31.toml", "--element", "delta")
    assert code == 2
    assert "delta" in err


def test_betti_routes(capsys):
    code, out, _ = run(capsys, "orbifold", "betti", "ex31.toml")
    assert code == 0
    assert "(1, 0, 0, 7, 7, 0, 0, 1)" in out


def test_index_examples(capsys):
    code, out, _ = run(capsys, "pde", "index", "--tau", "0", "--chi", "0", "--self-int", "0")
    assert code == 0
    code, _, err = run(capsys, "pde", "index", "--tau", "0", "--chi", "3", "--self-int", "0")
    assert code == 2
    assert "odd" in err
    code, out, _ = run(capsys, "pde", "index", "--tau", "-16", "--chi", "24", "--self-int", "0")
    assert code == 0
    assert "-28" in out


def test_usage_error_is_exit_2(capsys):
    with pytest.raises(SystemExit) as ei:
        main(["pde", "index", "--tau", "0"])  # missing required flags
    assert ei.value.code == 2
    with pytest.raises(SystemExit) as ei:
        main(["no-such-command"])
    assert ei.value.code == 2


def test_comass_json_deterministic(capsys):
    args = ("comass", "--form", "g2-phi", "--restarts", "15", "--seed", "3", "--format", "json")
    _, out1, _ = run(capsys, *args)
    _, out2, _ = run(capsys, *args)
    strip = lambda s: re.sub(r'"elapsed_s": [0-9.]+', '"elapsed_s": X', s)
    assert strip(out1) == strip(out2)
    payload = json.loads(out1)
    assert payload["checks"][0]["status"] == "pass"


def test_plane_classify_files(tmp_path, capsys):
    good = tmp_path / "assoc.txt"
    rows = np.zeros((7, 3))
    rows[0, 0] = rows[1, 1] = rows[2, 2] = 1.0
    np.savetxt(good, rows)
    code, out, _ = run(capsys, "plane", "classify", "--frame", str(good))
    assert code == 0
    assert "associative" in out

    bad = tmp_path / "generic.txt"
    np.savetxt(bad, np.random.default_rng(0).normal(size=(7, 3)))
    code, out, _ = run(capsys, "plane", "classify", "--frame", str(bad))
    assert code == 1
    assert "none" in out

    code, _, err = run(capsys, "plane", "classify", "--frame", str(tmp_path / "nope.txt"))
    assert code == 2


def test_pde_residual_jet_file(tmp_path, capsys):
    jet = pde.Jet1.zero("assoc")
    path = tmp_path / "jet.json"
    path.write_text(jet.to_json())
    code, out, _ = run(capsys, "pde", "residual", "--kind", "assoc", "--jet", str(path))
    assert code == 0
    assert "plane-agreement" in out
    code, _, err = run(capsys, "pde", "residual", "--kind", "cayley", "--jet", str(path))
    assert code == 2
    assert "does not match" in err
    (tmp_path / "junk.json").write_text("{not json")
    code, _, err = run(capsys, "pde", "residual", "--kind", "assoc", "--jet", str(tmp_path / "junk.json"))
    assert code == 2


def test_pde_solve_writes_trace(tmp_path, capsys):
    trace = tmp_path / "trace.csv"
    code, out, _ = run(
        capsys, "pde", "solve", "--kind", "assoc", "--grid", "8", "--trace", str(trace)
    )
    assert code == 0
    lines = trace.read_text().strip().splitlines()
    assert lines[0] == "iteration,residual,step"
    assert len(lines) >= 2


def test_pde_mclean_comma_sweep(capsys):
    code, out, _ = run(
        capsys, "pde", "mclean", "--grid", "8", "--eps-sweep", "1e-2,1e-3", "--samples", "1"
    )
    assert code == 0
    assert "sample,eps,rel_error" in out


def test_wps_check_example(capsys):
    code, out, _ = run(capsys, "wps", "check-example")
    assert code == 0
    assert "18/18 checks passed" in out
