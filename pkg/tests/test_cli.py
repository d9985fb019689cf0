import json
import math

import numpy as np
import pytest

from rdrisk.cli import _parse_n_grid, _parse_p, main
from rdrisk.mc import rng_stream


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def parse_csv(text):
    meta, header, rows = {}, None, []
    for line in text.splitlines():
        if line.startswith("# "):
            key, _, value = line[2:].partition("=")
            meta[key] = value
        elif header is None:
            header = line.split(",")
        else:
            rows.append(dict(zip(header, line.split(","))))
    return meta, rows


def test_parse_p():
    assert _parse_p("1") == 1.0
    assert _parse_p("2.5") == 2.5
    assert math.isinf(_parse_p("inf"))
    from rdrisk.cli import UsageError

    with pytest.raises(UsageError):
        _parse_p("0.3")
    with pytest.raises(UsageError):
        _parse_p("two")


def test_parse_n_grid():
    assert _parse_n_grid("100") == [100]
    assert _parse_n_grid("10,100,1000") == [10, 100, 1000]
    grid = _parse_n_grid("1:1000:10log")
    assert grid[0] == 1 and grid[-1] == 1000
    assert all(b > a for a, b in zip(grid, grid[1:]))
    from rdrisk.cli import UsageError

    with pytest.raises(UsageError):
        _parse_n_grid("100,10")
    with pytest.raises(UsageError):
        _parse_n_grid("0,5")
    with pytest.raises(UsageError):
        _parse_n_grid("1:100:xlog")


def test_bounds_categorical_fixture(capsys):
    code, out, _ = run_cli(capsys, "bounds", "--family", "categorical",
                           "--gamma", "1,1", "--p", "1", "--n-grid", "100")
    assert code == 0
    meta, rows = parse_csv(out)
    assert meta["family"] == "categorical"
    assert meta["mi_method"] == "clarke_barron_asymptotic"
    assert len(rows) == 1
    assert float(rows[0]["rd_lower_risk"]) == pytest.approx(0.04610685044478946, rel=1e-15)
    assert float(rows[0]["mi"]) == pytest.approx(1.383646559789373, rel=1e-15)
    assert rows[0]["simulated_mean"] == ""


def test_bounds_zero_error_mi_column(capsys):
    code, out, _ = run_cli(capsys, "bounds", "--family", "zero-error",
                           "--n-grid", "1:1000:10log", "--p", "1")
    assert code == 0
    _, rows = parse_csv(out)
    from rdrisk.specfun import harmonic

    for row in rows:
        n = int(row["n"])
        assert float(row["mi"]) == pytest.approx(harmonic(n + 1) - 1.0, rel=1e-13)


def test_bounds_single_n_shorthand(capsys):
    code, out, _ = run_cli(capsys, "bounds", "--family", "zero-error", "--n", "10")
    assert code == 0
    _, rows = parse_csv(out)
    assert len(rows) == 1 and rows[0]["n"] == "10"
    code2, _, err = run_cli(capsys, "bounds", "--family", "zero-error")
    assert code2 == 1
    assert "--n" in err


def test_bounds_missing_family_param(capsys):
    code, _, err = run_cli(capsys, "bounds", "--family", "categorical",
                           "--n-grid", "100")
    assert code == 1
    assert "gamma" in err


def test_bounds_usage_error_unknown_flag(capsys):
    code, _, err = run_cli(capsys, "bounds", "--family", "categorical",
                           "--gamma", "1,1", "--n-grid", "100", "--bogus")
    assert code == 1


def test_gaussian_requires_l1(capsys):
    code, _, err = run_cli(capsys, "bounds", "--family", "gaussian", "--d", "2",
                           "--sigma2", "1", "--p", "2", "--n-grid", "10")
    assert code == 1
    assert "L1" in err


def test_simulate_deterministic_bytes(tmp_path, capsys):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for path in paths:
        code, _, _ = run_cli(capsys, "simulate", "--family", "zero-error",
                             "--n-grid", "1,4", "--trials", "2000",
                             "--seed", "5", "--output", str(path))
        assert code == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


@pytest.mark.parametrize("threads", ["1", "4", "8"])
def test_simulate_thread_invariance(tmp_path, capsys, threads):
    base = tmp_path / "t1.csv"
    run_cli(capsys, "simulate", "--family", "categorical", "--gamma", "1,1",
            "--n-grid", "10", "--trials", "1000", "--seed", "3",
            "--threads", "1", "--output", str(base))
    other = tmp_path / f"t{threads}.csv"
    run_cli(capsys, "simulate", "--family", "categorical", "--gamma", "1,1",
            "--n-grid", "10", "--trials", "1000", "--seed", "3",
            "--threads", threads, "--output", str(other))
    assert base.read_bytes() == other.read_bytes()


def test_simulate_zero_error_estimator_value(capsys):
    code, out, _ = run_cli(capsys, "simulate", "--family", "zero-error",
                           "--n-grid", "1", "--trials", "100000", "--seed", "8")
    assert code == 0
    _, rows = parse_csv(out)
    mean = float(rows[0]["simulated_mean"])
    stderr = float(rows[0]["simulated_stderr"])
    # simulated column reports E|theta - thetahat|, the size-biased law 1/6
    assert abs(mean - 1.0 / 6.0) < 3 * stderr


def test_simulate_rejects_small_trials(capsys):
    code, _, err = run_cli(capsys, "simulate", "--family", "zero-error",
                           "--n-grid", "1", "--trials", "10")
    assert code == 1


def test_compare_ok_and_negative_control(capsys):
    args = ["compare", "--family", "categorical", "--gamma", "1,1",
            "--n-grid", "10,100", "--trials", "1000", "--seed", "11"]
    code, out, err = run_cli(capsys, *args)
    assert code == 0
    assert "0 violation(s)" in err
    code2, _, err2 = run_cli(capsys, *args, "--inflate-bound", "10")
    assert code2 == 2
    assert "violation" in err2


def test_bounds_categorical_p_inf(capsys):
    code, out, _ = run_cli(capsys, "bounds", "--family", "categorical",
                           "--gamma", "1,1", "--p", "inf", "--n-grid", "100")
    assert code == 0
    _, rows = parse_csv(out)
    assert float(rows[0]["printed_bound"]) == pytest.approx(
        float(rows[0]["rd_lower_risk"]), rel=1e-14)


def test_simulate_multinomial_requires_l1(capsys):
    code, _, err = run_cli(capsys, "simulate", "--family", "multinomial",
                           "--d", "2", "--k", "1", "--gamma", "1,1",
                           "--p", "2", "--n-grid", "10", "--trials", "200")
    assert code == 1
    assert "L1" in err


def test_compare_gaussian_ok(capsys):
    code, out, err = run_cli(capsys, "compare", "--family", "gaussian",
                             "--d", "2", "--sigma2", "1", "--n-grid", "10,100",
                             "--trials", "400", "--test-points", "200",
                             "--seed", "13")
    assert code == 0
    assert "0 violation(s)" in err


def test_compare_json_metadata(capsys):
    code, out, _ = run_cli(capsys, "compare", "--family", "zero-error",
                           "--n-grid", "2", "--trials", "2000", "--seed", "1",
                           "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["metadata"]["violations"] == 0
    assert payload["rows"][0]["n"] == 2
    assert payload["rows"][0]["printed_bound"] is None


def test_mi_exact_gaussian(capsys):
    code, out, _ = run_cli(capsys, "mi", "--family", "gaussian", "--d", "2",
                           "--sigma2", "1", "--n", "100", "--method", "exact")
    assert code == 0
    payload = json.loads(out)
    assert payload["method"] == "exact"
    assert payload["value"] == pytest.approx(math.log(51.0), rel=1e-14)


def test_mi_monte_carlo_zero_error(capsys):
    code, out, _ = run_cli(capsys, "mi", "--family", "zero-error", "--n", "1",
                           "--method", "monte-carlo", "--trials", "1e5",
                           "--seed", "2")
    assert code == 0
    payload = json.loads(out)
    assert payload["method"] == "monte_carlo"
    assert abs(payload["value"] - 0.5) < 3 * payload["stderr"]


def test_mi_rejects_exact_for_categorical(capsys):
    code, _, err = run_cli(capsys, "mi", "--family", "categorical",
                           "--gamma", "1,1", "--n", "10", "--method", "exact")
    assert code == 1


def test_entropy_command(tmp_path, capsys):
    path = tmp_path / "normal.csv"
    x = rng_stream(901, 0).normal(size=100_000)
    np.savetxt(path, x[:, None], delimiter=",")
    code, out, _ = run_cli(capsys, "entropy", "--input", str(path), "--k", "4")
    assert code == 0
    payload = json.loads(out)
    assert payload["method"] == "knn"
    assert abs(payload["value"] - 0.5 * math.log(2 * math.pi * math.e)) < 0.05


def test_entropy_missing_file(capsys):
    code, _, err = run_cli(capsys, "entropy", "--input", "/nonexistent.csv")
    assert code == 1


def test_csv_float_full_precision(capsys):
    _, out, _ = run_cli(capsys, "bounds", "--family", "categorical",
                        "--gamma", "1,1", "--n-grid", "100")
    _, rows = parse_csv(out)
    text = rows[0]["rd_lower_risk"]
    from rdrisk.categorical import DirichletPrior, bayes_risk_lower

    assert float(text) == bayes_risk_lower(100, DirichletPrior((1.0, 1.0)), 1.0)
