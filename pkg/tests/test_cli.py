import csv
import io
import json
from collections import defaultdict

import pytest

import closed_forms
from closed_forms import boundary_conjectures_hold
from main import main, verification_cells


@pytest.fixture(autouse=True)
def serial(monkeypatch):
    monkeypatch.setenv("CRYPTOHERM_THREADS", "1")


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_reference_spectrum(capsys):
    code, out, _ = run(capsys, "spectrum", "--N", "6", "--a", "1.0")
    assert code == 0
    energies = json.loads(out)["spectra"][0]["energies"]
    assert len(energies) == 6
    assert energies[0] == pytest.approx(0.5276681217, rel=1e-9)
    assert energies[-1] == pytest.approx(17.64596355, rel=1e-9)


def test_small_spectra(capsys):
    _, out, _ = run(capsys, "spectrum", "--N", "1", "2", "--a", "2")
    spectra = json.loads(out)["spectra"]
    assert spectra[0] == {"N": 1, "a": "2", "energies": [3.0]}
    assert spectra[1]["energies"] == [2.0, 6.0]


def test_spectrum_csv(capsys):
    code, out, _ = run(capsys, "spectrum", "--N", "6", "9", "--a", "1.0", "2.0", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0
    assert rows[0] == ["N", "a"] + [f"E_{n}" for n in range(9)]
    assert len(rows) == 1 + 4
    assert all(len(row) == 11 for row in rows)
    assert rows[1][:3] == ["6", "1", "0.5276681217"]
    assert rows[1][8:] == ["", "", ""]
    assert rows[3][:2] == ["9", "1"]
    assert "" not in rows[3]


def test_output_is_deterministic(capsys):
    first = run(capsys, "spectrum", "--N", "9", "--a", "3.0")[1]
    assert run(capsys, "spectrum", "--N", "9", "--a", "3.0")[1] == first


def test_verified_closed_metric(capsys):
    code, out, err = run(capsys, "metric", "--N", "5", "--a", "1", "--k", "2", "--source", "closed", "--verify")
    assert code == 0
    assert "residual: 0 (exact)" in err
    data = json.loads(out)
    assert data["verification"]["residual"] == "0"
    assert data["verification"]["solver_equivalent"] is True
    assert data["P"][2]["provenance"][0][4] == "conjecture1"
    assert data["P"][1]["provenance"] == [["lemma2-corrected"] * 5, ["lemma2"] * 4]


def test_solver_corner_element(capsys):
    code, out, _ = run(capsys, "metric", "--N", "9", "--a", "1", "--k", "2", "--source", "oracle")
    assert code == 0
    data = json.loads(out)
    assert data["P"][2]["bands"][0][8] == "49/3"


def test_heptadiagonal_corner(capsys):
    _, out, _ = run(capsys, "metric", "--N", "4", "--a", "1", "--k", "3", "--source", "closed")
    assert json.loads(out)["P"][3]["bands"][0][3] == "-16/3"


def test_assembled_metric_and_file_output(capsys, tmp_path):
    target = tmp_path / "metric.json"
    code, out, _ = run(capsys, "metric", "--N", "3", "--a", "1", "--k", "1", "--alpha", "1/2", "--out", str(target))
    assert code == 0
    assert out == ""
    data = json.loads(target.read_text(encoding="utf-8"))
    assert data["alphas"] == ["1/2"]
    assert data["theta"]["bands"] == [["1", "0", "-1/3"], ["1/2", "1/2"]]


def test_closed_forms_stop_at_degree_three(capsys):
    code, _, err = run(capsys, "metric", "--N", "6", "--a", "1", "--k", "4")
    assert code == 2
    assert "oracle" in err
    assert run(capsys, "metric", "--N", "6", "--a", "1", "--k", "4", "--source", "oracle")[0] == 0


def test_float_backend_verification(capsys):
    code, _, err = run(capsys, "metric", "--N", "7", "--a", "2.5", "--k", "3", "--backend", "float", "--verify")
    assert code == 0
    assert "(float)" in err


@pytest.mark.parametrize("argv", [
    ["metric", "--N", "4", "--a", "abc"],
    ["metric", "--N", "4", "--a", "-1"],
    ["metric", "--N", "4", "--a", "1", "--k", "2", "--alpha", "1"],
    ["metric", "--N", "4"],
    ["spectrum", "--N", "0", "--a", "1"],
    ["metric", "--hamiltonian", "lattice.json", "--k", "1"],
    ["metric", "--hamiltonian", "lattice.json", "--N", "4", "--a", "1", "--source", "oracle"],
    ["analyze", "--hamiltonian", "lattice.json", "--source", "oracle"],
])
def test_configuration_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_analyze_diagonal_metric(capsys):
    code, out, _ = run(capsys, "analyze", "--N", "4", "--a", "1", "--k", "0")
    assert code == 0
    report = json.loads(out)
    assert report["positivity"] == "positive-definite"
    assert len(report["kappa2"]) == 4
    assert all(weight > 0 for weight in report["kappa2"])


def test_analyze_ray(capsys):
    code, out, _ = run(capsys, "analyze", "--N", "4", "--a", "1", "--k", "1", "--ray", "+1")
    assert code == 0
    (boundary,) = json.loads(out)["alpha_max"]
    assert boundary["ray"] == [1.0]
    assert not boundary["capped"]
    assert 0 < boundary["alpha_max"] < 10


def test_analyze_random_rays(capsys):
    argv = ["analyze", "--N", "5", "--a", "2", "--k", "2", "--random-rays", "3", "--seed", "4"]
    code, out, _ = run(capsys, *argv)
    assert code == 0
    boundaries = json.loads(out)["alpha_max"]
    assert len(boundaries) == 3
    assert all(0 < entry["alpha_max"] for entry in boundaries)
    assert run(capsys, *argv)[1] == out


def test_evolution_csv(capsys):
    code, out, _ = run(capsys, "analyze", "--N", "6", "--a", "2", "--k", "1", "--alpha", "0.05",
                       "--evolve", "--init", "e1", "--tmax", "10", "--steps", "100", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 101 * 6
    totals = defaultdict(float)
    for row in rows:
        totals[row["t"]] += float(row["rho"])
    assert len(totals) == 101
    assert all(total == pytest.approx(1.0, abs=1e-8) for total in totals.values())


def test_evolution_in_json_report(capsys):
    code, out, _ = run(capsys, "analyze", "--N", "3", "--a", "1", "--evolve", "--init", "psi0", "--steps", "4")
    assert code == 0
    trajectory = json.loads(out)["trajectory"]
    assert len(trajectory) == 5 * 3
    assert set(trajectory[0]) == {"t", "s", "re_psi", "im_psi", "rho"}


def test_evolution_needs_positive_metric(capsys):
    code, _, err = run(capsys, "analyze", "--N", "4", "--a", "1", "--k", "1", "--alpha", "10", "--evolve")
    assert code == 4
    assert "indefinite" in err


def test_bad_initial_state(capsys):
    assert run(capsys, "analyze", "--N", "4", "--a", "1", "--evolve", "--init", "e9")[0] == 2
    assert run(capsys, "analyze", "--N", "4", "--a", "1", "--evolve", "--init", "1,2")[0] == 2


def test_verification_ledger(capsys):
    code, out, err = run(capsys, "verify-paper", "--max-N", "6")
    assert code == 0, err
    ledger = json.loads(out)
    assert ledger["passed"]
    checks = {record["check"] for record in ledger["checks"]}
    assert checks == {"spectrum", "residual", "solver", "exceptional"}
    assert "checks passed" in err


def test_verification_grid_order():
    cells = verification_cells(12)
    assert cells == verification_cells(12)
    assert cells[0][0] == "spectrum"
    assert ("residual", 3, 12, "5/2") in cells
    assert ("solver", 3, 11, "1") not in cells


def test_thread_variable_is_validated(capsys, monkeypatch):
    monkeypatch.setenv("CRYPTOHERM_THREADS", "zero")
    assert run(capsys, "verify-paper", "--max-N", "3")[0] == 2


def test_wrong_boundary_formula_fails_the_run(capsys, monkeypatch):
    boundary_conjectures_hold.cache_clear()
    monkeypatch.setattr(closed_forms, "exceptional_nn", lambda params, j: 12345)
    try:
        code, out, err = run(capsys, "metric", "--N", "6", "--a", "1", "--k", "2")
        assert code == 4
        assert out == ""
        assert "conjecture1" in err
        assert run(capsys, "analyze", "--N", "6", "--a", "1.0", "--k", "2")[0] == 4
    finally:
        boundary_conjectures_hold.cache_clear()


def test_metric_of_a_hamiltonian_file(capsys, tmp_path):
    lattice = tmp_path / "lattice.json"
    lattice.write_text(json.dumps({
        "n": 4,
        "diag": ["1/2", "-3", "2", "7/3"],
        "super": ["2", "1/3", "5"],
        "sub": ["3", "1/2", "4"],
    }), encoding="utf-8")
    argv = ["metric", "--hamiltonian", str(lattice), "--k", "1", "--alpha", "1/2", "--source", "oracle", "--verify"]
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    data = json.loads(out)
    assert (data["N"], data["a"]) == (4, None)
    assert data["P"][0]["bands"] == [["1", "2/3", "4/9", "5/9"]]
    assert "provenance" not in data["P"][0]
    assert data["verification"] == {"residual": "0", "exact": True, "residual_ok": True, "solver_equivalent": None}


def test_unreadable_hamiltonian_file(capsys, tmp_path):
    broken = tmp_path / "broken.json"
    broken.write_text("{", encoding="utf-8")
    assert run(capsys, "metric", "--hamiltonian", str(broken), "--source", "oracle")[0] == 2
    missing = tmp_path / "missing.json"
    assert run(capsys, "metric", "--hamiltonian", str(missing), "--source", "oracle")[0] == 2


def test_analyze_with_solver_pseudometrics(capsys):
    argv = ["analyze", "--N", "5", "--a", "2", "--k", "2", "--ray", "1,-1"]
    closed = json.loads(run(capsys, *argv)[1])
    oracle = json.loads(run(capsys, *argv, "--source", "oracle")[1])
    assert oracle["alpha_max"] == closed["alpha_max"]
    assert oracle["kappa2"] == closed["kappa2"]
