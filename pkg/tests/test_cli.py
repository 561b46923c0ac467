import json
import subprocess
import sys

import pytest

from conftest import DATA
from ddfrac.cli import EXIT_FAILED, EXIT_NODE_LIMIT, EXIT_OK, EXIT_PARSE, EXIT_TIMEOUT, main, truncated

JSON_KEYS = {
    "instance", "n", "m", "mode", "dd_nodes", "dd_arcs", "dd_time_s", "chi_f", "chi_lb", "chi_ub",
    "dsatur_ub", "ilp_status", "solve_time_s", "error",
}


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_truncated_decimal():
    from fractions import Fraction as F

    assert truncated(F(29, 10)) == "2.90"
    assert truncated(F(2, 3)) == "0.66"
    assert truncated(F(4)) == "4.00"


def test_bounds_myciel3_both(capsys):
    code, out, _ = run(capsys, "bounds", DATA / "myciel3.col", "--mode", "both")
    assert code == EXIT_OK
    fields = dict(line.split(None, 1) for line in out.replace("dd nodes", "dd_nodes").splitlines() if line.strip())
    assert fields["lb"].strip() == "4" and fields["ub"].strip() == "4"
    assert int(fields["dd_nodes"]) > 0
    assert "29/10 (2.90)" in out


@pytest.mark.parametrize("name, num, den", [("k4", 4, 1), ("c5", 5, 2)])
def test_bounds_lp_json(capsys, name, num, den):
    code, out, _ = run(capsys, "bounds", DATA / f"{name}.col", "--mode", "lp", "--json")
    assert code == EXIT_OK
    rep = json.loads(out)
    assert set(rep) == JSON_KEYS
    assert rep["chi_f"] == {"num": num, "den": den}
    assert rep["instance"] == name


def test_bounds_k4_text_shows_p_over_q(capsys):
    _, out, _ = run(capsys, "bounds", DATA / "k4.col", "--mode", "lp")
    assert "4/1" in out


def test_json_is_stable_apart_from_timings(capsys):
    reps = []
    for _ in range(2):
        _, out, _ = run(capsys, "bounds", DATA / "diamond.col", "--json")
        rep = json.loads(out)
        for k in ("dd_time_s", "solve_time_s"):
            rep.pop(k)
        reps.append(rep)
    assert reps[0] == reps[1]
    assert reps[0]["chi_lb"] == reps[0]["chi_ub"] == 3


def test_parse_error_exit_code(capsys, tmp_path):
    bad = tmp_path / "bad.col"
    bad.write_text("p edge 2 1\ne 1 5\n")
    code, _, err = run(capsys, "bounds", bad)
    assert code == EXIT_PARSE and "line 2" in err
    assert run(capsys, "color", tmp_path / "missing.col")[0] == EXIT_PARSE


def test_node_limit_exit_code_still_reports_dsatur(capsys):
    code, out, _ = run(capsys, "bounds", DATA / "queen5_5.col", "--node-limit", "10", "--json")
    assert code == EXIT_NODE_LIMIT
    rep = json.loads(out)
    assert rep["dsatur_ub"] == 5 and rep["error"]
    code, out, _ = run(capsys, "color", DATA / "queen5_5.col", "--node-limit", "10")
    assert code == EXIT_NODE_LIMIT
    assert "c colors" in out


def test_timeout_exit_code(capsys):
    code, out, _ = run(capsys, "bounds", DATA / "queen6_6.col", "--mode", "ilp", "--time-limit", "0", "--json")
    assert code == EXIT_TIMEOUT
    rep = json.loads(out)
    assert rep["ilp_status"] == "timeout"
    assert rep["chi_lb"] <= 7 <= rep["chi_ub"]
    code, out, _ = run(capsys, "color", DATA / "queen6_6.col", "--time-limit", "0")
    assert code == EXIT_TIMEOUT
    assert "not optimal" in out.lower() or "non-optimal" in out.lower()


def test_color_outputs_verified_coloring(capsys):
    code, out, _ = run(capsys, "color", DATA / "diamond.col")
    assert code == EXIT_OK
    lines = out.splitlines()
    assert "c colors 3" in lines
    colors = {int(v): int(c) for _, v, c in (ln.split() for ln in lines if ln.startswith("s "))}
    assert colors[1] == colors[4] and len(set(colors.values())) == 3
    code, out, _ = run(capsys, "color", DATA / "edgeless5.col")
    assert code == EXIT_OK and "c colors 1" in out


def test_check_runs_and_is_deterministic(capsys):
    code, out1, _ = run(capsys, "check", "--max-n", "8", "--trials", "6", "--seed", "7", "--verbose")
    assert code == EXIT_OK and "passed 6/6" in out1
    _, out2, _ = run(capsys, "check", "--max-n", "8", "--trials", "6", "--seed", "7", "--verbose")
    assert out1 == out2


def test_check_vacuous_and_with_file(capsys):
    code, out, _ = run(capsys, "check", "--trials", "0")
    assert code == EXIT_OK and "passed 0/0" in out
    code, out, _ = run(capsys, "check", DATA / "c5.col", "--trials", "0")
    assert code == EXIT_OK and "passed 1/1" in out
    assert run(capsys, "check", "--max-n", "40")[0] == EXIT_FAILED


def test_check_reports_counterexample(capsys, monkeypatch):
    import ddfrac.checks as checks

    real = checks.check_graph

    def broken(g, ordering="identity"):
        r = real(g, ordering)
        r.failures.append("injected")
        return r

    monkeypatch.setattr(checks, "check_graph", broken)
    code, out, _ = run(capsys, "check", "--max-n", "6", "--trials", "2", "--seed", "1")
    assert code == EXIT_FAILED
    assert "passed 0/2" in out and "injected" in out
    assert "p edge" in out


def test_verify_cover_command(capsys, tmp_path):
    good = tmp_path / "good.cover"
    good.write_text("w=1/1 S={1,4}\nw=1/1 S={2}\nw=1/1 S={3}\n")
    code, out, _ = run(capsys, "verify-cover", DATA / "diamond.col", good)
    assert code == EXIT_OK and "total=3/1" in out
    bad = tmp_path / "bad.cover"
    bad.write_text("w=1/1 S={2,3}\n")
    code, out, _ = run(capsys, "verify-cover", DATA / "diamond.col", bad)
    assert code == EXIT_FAILED and "not stable" in out


def test_dump_command(capsys):
    code, out, _ = run(capsys, "dump", DATA / "diamond.col")
    assert code == EXIT_OK
    assert sum(ln.startswith("node ") for ln in out.splitlines()) == 9
    assert sum(ln.startswith("arc ") for ln in out.splitlines()) == 12


def test_console_script_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "ddfrac.cli", "bounds", str(DATA / "c5.col"), "--mode", "lp", "--json"],
        capture_output=True, text=True, check=True,
    )
    assert json.loads(out.stdout)["chi_f"] == {"num": 5, "den": 2}
