import csv
import io
import json

import pytest

from ndbound.bounds import lower_bound
from ndbound.cli import AnalysisOptions, analyze_topology, main
from ndbound.core import NetworkTopology, TimeModel, validate
from ndbound.expectation import expected_discovery_time, expected_time_quadrature, slotted_expected_time
from ndbound.simulator import simulate_discovery


def run(argv, stdin=None, monkeypatch=None):
    out = io.StringIO()
    if stdin is not None:
        monkeypatch.setattr("sys.stdin", io.StringIO(stdin))
    code = main(argv, out)
    return code, out.getvalue()


def topo(**nodes):
    return NetworkTopology({k: validate(v) for k, v in nodes.items()})


def test_analyze_single_node():
    (row,) = analyze_topology(topo(a=[0.5]))
    assert (row["node_id"], row["exact"], row["bound"], row["gap"]) == ("a", 2.0, 2.0, 0.0)


def test_analyze_two_nodes_sorted():
    rows = analyze_topology(topo(b=[0.5, 0.5, 0.5], a=[0.2, 0.5]))
    assert [r["node_id"] for r in rows] == ["a", "b"]
    assert rows[0]["exact"] == pytest.approx(5.5714, abs=1e-4)
    assert rows[1]["exact"] == pytest.approx(3.6667, abs=1e-4)
    assert rows[0]["bound"] == pytest.approx(4.2857, abs=1e-4)
    assert rows[1]["bound"] == pytest.approx(3.6667, abs=1e-4)
    assert all(r["gap"] >= -1e-12 for r in rows)


def test_analyze_over_cap_keeps_bound():
    rows = analyze_topology(topo(big=[0.5] * 30, small=[0.5]), AnalysisOptions(max_exact_n=24))
    big = rows[0]
    assert "TooManyNeighbors" in big["error"]
    assert big["exact"] is None and big["gap"] is None
    assert big["bound"] == lower_bound([0.5] * 30, with_exact=False).bound
    assert rows[1]["error"] is None and rows[1]["exact"] == 2.0


def test_analyze_with_simulation():
    opts = AnalysisOptions(simulate=True, model=TimeModel.SLOTTED_GEOMETRIC, reps=1000, seed=3)
    (row,) = analyze_topology(topo(a=[0.5, 0.5]), opts)
    sim = simulate_discovery([0.5, 0.5], "slotted", 1000, 3)
    assert (row["sim_mean"], row["ci95_low"], row["ci95_high"]) == (sim.mean, sim.ci95_low, sim.ci95_high)


def test_exact_json_bit_identical():
    code, out = run(["exact", "0.2", "0.5", "0.9", "--format", "json"])
    assert code == 0
    (row,) = json.loads(out)
    assert row["value"] == expected_discovery_time([0.2, 0.5, 0.9]).value
    assert row["method"] == "inclusion-exclusion"


def test_exact_variants():
    _, out = run(["exact", "0.5", "0.5", "--model", "slotted", "--format", "json"])
    assert json.loads(out)[0]["value"] == slotted_expected_time([0.5, 0.5]).value
    _, out = run(["exact", "0.2", "0.5", "--quadrature", "--format", "json"])
    assert json.loads(out)[0]["value"] == expected_time_quadrature([0.2, 0.5], 1e-9).value


def test_csv_is_rfc4180_with_17_digits():
    code, out = run(["bound", "0.2", "0.5", "--format", "csv"])
    assert code == 0
    assert out.endswith("\r\n") and out.count("\r\n") == 2
    header, row = list(csv.DictReader(io.StringIO(out))), None
    row = header[0]
    rep = lower_bound([0.2, 0.5])
    assert float(row["exact"]) == rep.exact
    assert float(row["bound"]) == rep.bound
    assert row["bound"] == format(rep.bound, ".17g")


def test_table_output():
    code, out = run(["bound", "0.5"])
    assert code == 0
    assert out.splitlines()[0].split() == ["harmonic", "mean_probability", "bound", "exact", "gap"]


def test_simulate_matches_library():
    _, out = run(["simulate", "0.2", "0.5", "--reps", "2000", "--seed", "9", "--format", "json"])
    row = json.loads(out)[0]
    assert row == simulate_discovery([0.2, 0.5], "exponential", 2000, 9).to_json()


def test_converge_trace():
    code, out = run(["converge", "0.1", "0.4", "0.7", "--tol", "1e-10"])
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["iteration", "max_deviation"]
    assert [int(r[0]) for r in rows[1:]] == list(range(len(rows) - 1))
    assert float(rows[-1][1]) <= 1e-10
    assert float(rows[1][1]) == pytest.approx(0.3)


def test_converge_no_convergence_exit_code():
    code, out = run(["converge", "0", "1", "2", "3", "4", "5", "--max-iters", "2"])
    assert code == 2
    assert len(out.strip().splitlines()) == 4


def test_analyze_from_stdin(monkeypatch):
    doc = '{"nodes": {"n1": {"probabilities": [0.2, 0.5]}, "n0": {"probabilities": [0.5]}}}'
    code, out = run(["analyze", "-", "--format", "json"], stdin=doc, monkeypatch=monkeypatch)
    assert code == 0
    rows = json.loads(out)
    assert [r["node_id"] for r in rows] == ["n0", "n1"]
    assert rows[1]["exact"] == expected_discovery_time([0.2, 0.5]).value


def test_analyze_from_file(tmp_path):
    path = tmp_path / "topo.json"
    path.write_text(json.dumps({"nodes": {"x": {"probabilities": [0.25, 0.75]}}}), encoding="utf-8")
    code, out = run(["analyze", str(path), "--format", "csv", "--no-exact"])
    assert code == 0
    row = next(csv.DictReader(io.StringIO(out)))
    assert row["exact"] == "" and float(row["bound"]) == 1.5 / 0.5


@pytest.mark.parametrize(
    "argv",
    [
        ["exact", "0.2", "0"],
        ["exact"],
        ["exact", "0.5", "--model", "poisson"],
        ["simulate", "0.5", "--reps", "10"],
        ["nonsense"],
        ["analyze", "/nonexistent/topology.json"],
        ["exact"] + ["0.5"] * 25,
    ],
)
def test_input_errors_exit_1(argv, capsys):
    code, out = run(argv)
    assert code == 1
    assert out == ""
    assert capsys.readouterr().err


def test_bad_topology_exit_1(monkeypatch):
    code, _ = run(["analyze", "-"], stdin='{"nodes": {"a": {"probabilities": [2]}}}', monkeypatch=monkeypatch)
    assert code == 1


def test_verify_passes_small_sweep():
    code, out = run(["verify", "--instances", "20", "--format", "json"])
    assert code == 0
    checks = json.loads(out)
    assert {c["check"] for c in checks} >= {"convexity", "z-nonnegative", "decomposition", "doubly-stochastic"}
    assert all(c["passed"] for c in checks)


def test_verify_exit_2_on_violation():
    # 100 sweeps are far too few for n = 25 to come within 1e-8 of uniform
    code, _ = run(["verify", "--instances", "5", "--limit-power", "100"])
    assert code == 2
