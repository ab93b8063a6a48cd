import io
import json
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qwalk.cli import EXIT_DOMAIN, EXIT_OK, EXIT_UNSUPPORTED, EXIT_USAGE, RunConfig, format_value, main, parse_coin, read_csv, write_csv


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows_of(text):
    return read_csv(io.StringIO(text))


def test_simulate_two_steps(capsys):
    code, out, _ = run(capsys, "simulate", "--coin", "hadamard", "--alpha", "0", "--beta", "0", "--local", "--steps", "2")
    assert code == EXIT_OK
    assert out.splitlines()[0] == "t,mean_j,variance,A,re_gamma,im_gamma,entropy"
    rows = rows_of(out)
    assert [r["t"] for r in rows] == [0, 1, 2]
    assert rows[-1]["entropy"] == pytest.approx(0.81128, abs=1e-5)
    assert rows[-1]["re_gamma"] == pytest.approx(0.25)


def test_simulate_zero_steps_gaussian(capsys):
    code, out, _ = run(capsys, "simulate", "--gaussian", "--sigma0", "10", "--steps", "0")
    rows = rows_of(out)
    assert code == 0 and len(rows) == 1
    assert abs(rows[0]["variance"] - 100.0) < 0.1


def test_simulate_fourier_gaussian_stride(capsys):
    code, out, _ = run(capsys, "simulate", "--coin", "fourier", "--gaussian", "--sigma0", "10", "--steps", "60", "--stride", "25")
    rows = rows_of(out)
    assert code == 0 and [r["t"] for r in rows] == [0, 25, 50, 60]
    assert all(0 <= r["A"] <= 1 and 0 <= r["entropy"] <= 1 for r in rows)


def test_asymptotics_maximal_local(capsys):
    code, out, _ = run(capsys, "asymptotics", "--alpha", "2.35619", "--beta", "0", "--coin", "hadamard", "--local")
    r = rows_of(out)[0]
    assert code == 0
    assert abs(r["Delta"]) < 1e-9 and r["S_E_bar"] == pytest.approx(1.0, abs=1e-6) and abs(r["u"]) < 1e-5
    assert r["regime"] == "local"


def test_asymptotics_methods_agree(capsys):
    base = ["asymptotics", "--alpha", "1.1", "--beta", "2.3", "--coin", "0.5,0.4,1.3", "--local"]
    _, a, _ = run(capsys, *base, "--method", "closed")
    _, b, _ = run(capsys, *base, "--method", "quadrature")
    ra, rb = rows_of(a)[0], rows_of(b)[0]
    for key in ("I", "R", "A_bar", "re_gamma_bar", "im_gamma_bar", "Delta", "S_E_bar", "u", "var_rate"):
        assert abs(ra[key] - rb[key]) < 1e-6


def test_asymptotics_gaussian_fourier(capsys):
    code, out, _ = run(capsys, "asymptotics", "--gaussian", "--sigma0", "50", "--coin", "fourier", "--beta", "1.5708")
    r = rows_of(out)[0]
    assert code == 0 and r["S_E_bar"] == pytest.approx(1.0, abs=1e-6)
    assert r["regime"] == "gaussian-asymptotic"


@pytest.mark.parametrize(
    "argv, code",
    [
        (["asymptotics", "--coin", "0.3,0,0"], EXIT_UNSUPPORTED),
        (["simulate", "--alpha", "4"], EXIT_DOMAIN),
        (["simulate", "--gaussian", "--sigma0", "0.5"], EXIT_DOMAIN),
        (["simulate", "--coin", "1.5,0,0"], EXIT_DOMAIN),
        (["bogus"], EXIT_USAGE),
        (["figure", "7"], EXIT_USAGE),
        (["simulate", "--steps", "-1"], EXIT_USAGE),
        (["simulate", "--coin", "sideways"], EXIT_USAGE),
        (["simulate", "--local", "--gaussian"], EXIT_USAGE),
        ([], EXIT_USAGE),
    ],
)
def test_exit_codes(capsys, argv, code):
    got, out, err = run(capsys, *argv)
    assert got == code
    assert out == "" and err.startswith("qwalk:")


def test_unsupported_message_names_restriction(capsys):
    _, _, err = run(capsys, "asymptotics", "--coin", "0.3,0,0")
    assert "q = 1/2" in err


def test_determinism(capsys):
    argv = ["simulate", "--coin", "0.5,0.3,1.1", "--alpha", "1", "--beta", "2", "--steps", "30"]
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]


def test_csv_round_trip(capsys, tmp_path):
    path = tmp_path / "s.csv"
    code, out, _ = run(capsys, "simulate", "--alpha", "0.7", "--beta", "0.1", "--steps", "20", "--out", str(path))
    assert code == 0 and out == ""
    rows = read_csv(open(path))
    buf = io.StringIO()
    write_csv(rows, buf)
    assert buf.getvalue() == path.read_text()


@given(st.floats(allow_nan=True, allow_infinity=True))
def test_format_value_round_trips(x):
    s = format_value(x)
    y = float(s)
    assert (math.isnan(x) and math.isnan(y)) or y == x


def test_dump_config_and_precedence(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"coin": "fourier", "alpha": 1.0, "steps": 7, "sigma0": 4.0}))
    code, out, _ = run(capsys, "simulate", "--config", str(cfg), "--alpha", "2.0", "--dump-config")
    assert code == 0
    d = json.loads(out)
    assert d["alpha"] == 2.0 and d["coin"] == "fourier" and d["steps"] == 7 and d["sigma0"] == 4.0
    assert d["beta"] == RunConfig().beta and d["command"] == "simulate"


def test_config_errors(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"colour": "red"}))
    assert run(capsys, "simulate", "--config", str(bad))[0] == EXIT_USAGE
    assert run(capsys, "simulate", "--config", str(tmp_path / "missing.json"))[0] == EXIT_USAGE


def test_parse_coin():
    c = parse_coin("0.5, 0.2, 0.4")
    assert (c.q, c.theta, c.phi) == (0.5, 0.2, 0.4)
    assert parse_coin("Hadamard").theta == 0.0
    assert parse_coin("fourier").phi == pytest.approx(math.pi / 2)


def test_sweep_command(capsys):
    code, out, _ = run(capsys, "sweep", "--grid-step", "1.0", "--coin", "hadamard", "--steps", "100")
    rows = rows_of(out)
    assert code == 0 and len(rows) == 4 * 7
    assert {"alpha", "beta", "S_E_bar", "sim_var_rate", "sim_entropy"} <= set(rows[0])


def test_figure1(capsys):
    code, out, _ = run(capsys, "figure", "1")
    rows = rows_of(out)
    local = [r["var_rate"] for r in rows if r["series"] == "local"]
    assert code == 0 and all(abs(v - 0.228553) < 1e-6 for v in local)
    assert {r["sigma0"] for r in rows if r["series"] == "gaussian"} == {1.0, 2.0, 3.0, 10.0}
    assert len({r["delta"] for r in rows if r["series"] == "inset"}) == 5


def test_figure2(capsys):
    rows = rows_of(run(capsys, "figure", "2")[1])
    first, mid = rows[0], min(rows, key=lambda r: abs(r["delta"] - math.pi / 2))
    assert first["var_rate"] == pytest.approx(0.3125, abs=1e-12) and abs(first["S_E_bar"] - 0.688) < 0.003
    assert abs(mid["var_rate"]) < 1e-12 and abs(mid["S_E_bar"] - 0.793) < 0.003


def test_figure3_small(capsys):
    rows = rows_of(run(capsys, "figure", "3", "--steps", "20", "--subsample", "200", "--stride", "10")[1])
    assert {r["coin"] for r in rows} == {"hadamard", "fourier"}
    assert [r["t"] for r in rows if r["coin"] == "hadamard"] == [0, 10, 20]
    assert {"var_rate", "var_rate_offset", "entropy", "n_qubits"} <= set(rows[0])


def test_figure4_fourier_entropy(capsys):
    rows = rows_of(run(capsys, "figure", "4")[1])
    fourier = [r for r in rows if abs(r["delta"] - math.pi / 2) < 1e-12]
    assert fourier and all(abs(r["S_E_bar"] - 0.87) < 0.005 for r in fourier)


def test_figure5_uses_near_singular_phase(capsys):
    rows = rows_of(run(capsys, "figure", "5")[1])
    assert max(r["delta"] for r in rows) == pytest.approx(0.4995 * math.pi, abs=1e-15)
