import json
import subprocess
import sys

import numpy as np
import pytest

from approxtaylor.cli import main
from approxtaylor.convergence import convergence_study
from approxtaylor.integrator import exact_taylor_linear_step, integrate
from approxtaylor.problems import PROBLEMS, ProblemSpec, make_problem, parse_matrix
from approxtaylor.tableau import stage_count


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def usage_error(capsys, *argv):
    with pytest.raises(SystemExit) as info:
        main(list(argv))
    capsys.readouterr()
    return info.value.code


@pytest.mark.parametrize("name", sorted(PROBLEMS))
def test_library_exact_matches_initial_state(name):
    prob = make_problem(name)
    assert prob.exact is not None
    assert np.max(np.abs(prob.exact(0.0) - prob.u0)) == 0


def test_library_overrides():
    prob = make_problem(ProblemSpec("linear-system", u0=(1.0, 0.0), params={"A": "0,1;-1,0"}))
    np.testing.assert_allclose(prob.exact(np.pi / 2), [0.0, -1.0], atol=1e-12)
    assert make_problem(ProblemSpec("decay", params={"lam": "2"})).rhs(np.array([1.0]))[0] == -2.0
    with pytest.raises(KeyError):
        make_problem("nope")
    with pytest.raises(ValueError):
        parse_matrix("1,2;3")


@pytest.mark.parametrize("name", ["decay", "riccati", "oscillator", "nonautonomous-demo"])
def test_library_problems_converge(name):
    # R=4 is avoided: its leading error term nearly cancels at t=1 for the
    # non-autonomous demo
    rep = convergence_study(make_problem(name), 3, 0.1, 4, 1.0)
    assert abs(rep.rows[-1].observed_order - 3) < 0.3


def test_linear_system_is_q_power():
    prob = make_problem("linear-system")
    A = parse_matrix("-1,2;-2,-1")
    h, n, R = 0.05, 20, 5
    traj = integrate(prob, h, n, R)
    ref = prob.u0
    for _ in range(n):
        ref = exact_taylor_linear_step(A, ref, h, R)
    np.testing.assert_allclose(traj[-1][1], ref, rtol=1e-12, atol=0)


def test_integrate_decay(capsys):
    code, out, _ = run(capsys, "integrate", "--problem", "decay", "--order", "4", "--h", "0.1", "--t-end", "1")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "t,u_1"
    assert len(lines) == 1 + 11
    t, u = map(float, lines[-1].split(","))
    assert t == pytest.approx(1.0) and abs(u - np.exp(-1)) < 1e-6


def test_integrate_json_and_file(capsys, tmp_path):
    out = tmp_path / "traj.json"
    code, _, _ = run(capsys, "integrate", "--problem", "oscillator", "-R", "3", "--h", "0.5",
                     "--t-end", "1", "--format", "json", "--out", str(out))
    assert code == 0
    rows = json.loads(out.read_text())
    assert len(rows) == 3 and len(rows[0]["u"]) == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["integrate", "--problem", "decay", "-R", "2", "--h", "0", "--t-end", "1"],
        ["integrate", "--problem", "decay", "-R", "2", "--h", "-0.1", "--t-end", "1"],
        ["integrate", "--problem", "unknown", "-R", "2", "--h", "0.1"],
        ["integrate", "--problem", "decay", "-R", "0", "--h", "0.1"],
        ["integrate", "--problem", "decay", "-R", "2", "--h", "0.3", "--t-end", "1"],
        ["convergence", "--problem", "decay", "-R", "2", "--h", "0.1", "--levels", "1"],
        ["tableau", "-R", "13"],
        ["tableau", "-R", "0"],
        ["stability", "-R", "2", "--re", "1", "1"],
        ["stability", "-R", "2", "--resolution", "5000"],
        ["stencil", "-p", "0", "-q", "1"],
        ["stencil", "-p", "1", "-q", "0"],
    ],
)
def test_usage_errors(capsys, argv):
    assert usage_error(capsys, *argv) == 2


def test_integrate_step_failure_exit_code(capsys, tmp_path):
    # riccati with u0 = -1 blows up at t = 1
    out = tmp_path / "t.csv"
    code, _, err = run(capsys, "integrate", "--problem", "riccati", "-R", "2", "--h", "0.25",
                       "--t-end", "5", "--u0", "-1", "--out", str(out))
    assert code == 1
    assert "failed" in err
    assert len(out.read_text().splitlines()) >= 2


def test_riccati_second_order(capsys):
    def final_error(h):
        code, out, _ = run(capsys, "integrate", "--problem", "riccati", "--order", "2", "--h", h, "--t-end", "0.5")
        assert code == 0
        t, u = map(float, out.splitlines()[-1].split(","))
        return abs(u - 1 / (1 + t))

    ratio = final_error("0.01") / final_error("0.005")
    assert abs(ratio - 4) < 0.2


def test_convergence_report(capsys, tmp_path):
    stem = tmp_path / "conv"
    code, out, _ = run(capsys, "convergence", "--problem", "decay", "-R", "3", "--h", "0.1",
                       "--levels", "5", "--format", "json", "--out", str(stem))
    assert code == 0
    doc = json.loads(out)
    rows = doc["rows"]
    assert [r["h"] for r in rows] == [0.1 / 2**k for k in range(5)]
    assert rows[0]["observed_order"] is None
    for r in rows[-3:]:
        assert 2.7 <= r["observed_order"] <= 3.3
    for r in rows:
        assert r["rhs_evaluations"] == r["n_steps"] * stage_count(3)
    assert (tmp_path / "conv.csv").read_text().startswith("h,n_steps,error,observed_order,rhs_evaluations\n")
    assert json.loads((tmp_path / "conv.json").read_text()) == doc


def test_convergence_linear_system_matches_closed_form(capsys):
    code, out, _ = run(capsys, "convergence", "--problem", "linear-system", "-R", "3", "--h", "0.1",
                       "--levels", "2", "--format", "json")
    assert code == 0
    A = parse_matrix("-1,2;-2,-1")
    prob = make_problem("linear-system")
    for row in json.loads(out)["rows"]:
        v = prob.u0
        for _ in range(row["n_steps"]):
            v = exact_taylor_linear_step(A, v, row["h"], 3)
        expected = np.max(np.abs(v - prob.exact(1.0)))
        assert row["error"] == pytest.approx(expected, rel=1e-9, abs=1e-12)


def test_tableau_command(capsys, tmp_path):
    code, out, _ = run(capsys, "tableau", "-R", "1")
    doc = json.loads(out)
    assert doc["stages"] == 1 and doc["b"][0]["exact"] == "1/1"
    path = tmp_path / "t3.json"
    code, out, _ = run(capsys, "tableau", "-R", "3", "--format", "text", "--out", str(path))
    assert code == 0
    assert "nilpotency_index: 3" in out and "rank: 2" in out
    doc = json.loads(path.read_text())
    assert doc["stages"] == 5 and doc["report"]["nilpotency_index"] == 3
    _, out, _ = run(capsys, "tableau", "-R", "4")
    assert json.loads(out)["stages"] == 11


def test_stability_command(capsys, tmp_path):
    code, out, _ = run(capsys, "stability", "-R", "1", "--out", str(tmp_path / "s1"))
    assert code == 0
    assert out.strip().endswith("-2.00000000")
    _, out, _ = run(capsys, "stability", "-R", "4", "--out", str(tmp_path / "s4"))
    assert abs(float(out.split()[-1]) + 2.78529356) < 1e-6
    code, _, _ = run(capsys, "stability", "-R", "3", "--re", "-4", "2", "--im", "-4", "4",
                     "--resolution", "201", "--out", str(tmp_path / "s3"))
    rows = (tmp_path / "s3" / "raster.csv").read_text().splitlines()[1:]
    flags = np.array([int(r.split(",")[2]) for r in rows]).reshape(201, 201)
    assert np.array_equal(flags, flags[:, ::-1])
    assert (tmp_path / "s3" / "boundary.csv").read_text().startswith("re,im\n")


def test_stencil_command(capsys):
    code, out, _ = run(capsys, "stencil", "-p", "1", "-q", "1")
    assert code == 0 and out.strip() == "-1: -1/2, 0: 0, 1: 1/2"
    _, out, _ = run(capsys, "stencil", "-p", "2", "-q", "2")
    assert out.strip() == "-2: -1/12, -1: 4/3, 0: -5/2, 1: 4/3, 2: -1/12"


def test_outputs_are_deterministic(tmp_path):
    def once(tag):
        argv = [sys.executable, "-m", "approxtaylor", "convergence", "--problem", "riccati",
                "-R", "4", "--h", "0.1", "--levels", "3", "--out", str(tmp_path / tag)]
        res = subprocess.run(argv, capture_output=True, check=True)
        return res.stdout, (tmp_path / f"{tag}.json").read_bytes()

    assert once("a") == once("b")
