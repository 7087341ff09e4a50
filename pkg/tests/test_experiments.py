"""Scenario constructions, the n* estimator, and experiment orchestration."""

import json
from fractions import Fraction

import numpy as np
import pytest

from comparelearn import (
    BinaryModel,
    ConfigError,
    Dataset,
    Domain,
    class_error,
    corr_partial,
    correlation,
    estimate_sample_complexity,
    goal_satisfied,
    mutual_vc,
    regression_loss,
    rng_stream,
    run_experiment,
    scenario,
    wilson_interval,
)
from comparelearn.experiments import (
    _validate_config,
    c4_correlations_exact,
    default_learner_factory,
)


# --- scenario constructions ----------------------------------------------------


def test_figure1_exact_zero_sample():
    spec = scenario("figure1", 3)
    assert spec.source.domain.size == 6
    assert mutual_vc(spec.source, spec.benchmark).value == 0
    f = spec.baseline_model
    for mu in spec.mu_family:
        assert goal_satisfied(spec, f, mu)  # epsilon = 0


def test_c1_forward_exact_quarter():
    spec = scenario("c1", 1)
    f = spec.baseline_model
    assert f.values.tolist() == [-1] * 4
    for mu in spec.mu_family:
        err = class_error(f, mu)
        best = min(
            class_error(spec.benchmark.member(i), mu) for i in range(len(spec.benchmark))
        )
        assert err == pytest.approx(0.25, abs=1e-12)
        assert best == pytest.approx(0.25, abs=1e-12)


def test_c2_forward_exact():
    spec = scenario("c2", 2)
    f = spec.baseline_model
    for mu in spec.mu_family:
        assert goal_satisfied(spec, f, mu)


def test_c3_forward_exact():
    spec = scenario("c3", 3)
    f = spec.baseline_model
    for mu in spec.mu_family:
        loss_f = regression_loss(f, spec.loss, mu)
        best = min(
            regression_loss(spec.benchmark.member(i), spec.loss, mu)
            for i in range(len(spec.benchmark))
        )
        assert loss_f == pytest.approx(1.0, abs=1e-12)
        assert best == pytest.approx(1.0, abs=1e-12)


def test_c4_invariance_and_value_formula():
    m = 3
    spec = scenario("c4", m)
    table = c4_correlations_exact(spec)
    assert len(table) == len(spec.benchmark) == 4**m
    for bi, per_source in enumerate(table):
        assert len(set(per_source)) == 1  # independent of the source, exactly
        # value = (1/(8m)) * (4/3) * sum_j (p_j + r_j)
        brow = spec.benchmark.matrix[bi]
        p_sum = sum(int(brow[1 + m + j]) for j in range(m))  # row a_{2j} holds p_j
        r_sum = sum(int(brow[1 + j]) for j in range(m))  # row a_{1j} holds r_j
        expected = Fraction(1, 8 * m) * Fraction(4, 3) * (p_sum + r_sum)
        assert per_source[0] == expected


def test_scenario_validation():
    with pytest.raises(ConfigError):
        scenario("nope", 1)
    with pytest.raises(ConfigError):
        scenario("c1", 0)
    with pytest.raises(Exception):
        scenario("c2", 8)  # hard guard


def test_c1_subclass_mode_beyond_guard():
    spec = scenario("c1", 5, "forward")
    assert spec.meta["exhaustive"] is False
    assert spec.mu_family is None  # enumeration replaced by the seeded subfamily
    assert len(spec.source) == 512 and len(spec.benchmark) == 512
    rng = rng_stream(1, 2)
    mu = spec.draw_mu(rng)
    assert goal_satisfied(spec, spec.baseline_model, mu)
    # deterministic subclass: rebuilding gives the same classes
    again = scenario("c1", 5, "forward")
    assert again.source == spec.source and again.benchmark == spec.benchmark


# --- estimator -------------------------------------------------------------------


def test_estimate_adversarial_zero_for_c1_forward():
    spec = scenario("c1", 1, "forward", epsilon=0.0, delta=0.0)
    report = estimate_sample_complexity(
        spec,
        lambda s: (lambda data, rng: s.baseline_model),
        [0],
        trials=1,
        seed=5,
        adversarial=True,
    )
    assert report.n_star == 0
    assert report.successes == [1]


def test_estimate_impossible_goal_reports_failure_curve():
    spec = scenario("c1", 1, "reversed", epsilon=0.0, delta=0.0)
    # constant model cannot hit epsilon = 0 against every source
    report = estimate_sample_complexity(
        spec,
        lambda s: (lambda data, rng: BinaryModel.constant(s.source.domain, 1)),
        [0],
        trials=8,
        seed=5,
    )
    assert report.n_star is None
    assert len(report.successes) == 1


def test_estimate_monotone_in_n_for_erm():
    spec = scenario("c1", 1, "reversed", epsilon=0.1, delta=0.25)
    report = estimate_sample_complexity(
        spec, default_learner_factory, [0, 2, 4, 8, 16, 32], trials=60, seed=11
    )
    assert report.monotonicity_violations(tol_se=2.0) == []
    assert report.n_star is not None and report.n_star >= 1


def test_wilson_interval_basics():
    lo, hi = wilson_interval(50, 100)
    assert lo < 0.5 < hi
    assert wilson_interval(0, 0) == (0.0, 1.0)
    lo, hi = wilson_interval(100, 100)
    assert hi == pytest.approx(1.0) and lo > 0.9


# --- orchestration ------------------------------------------------------------------


SMALL_CONFIG = {
    "seed": 99,
    "experiments": [
        {
            "scenario": "c1",
            "m": 1,
            "direction": "forward",
            "epsilon": 0.0,
            "delta": 0.0,
            "grid": [0],
            "trials": 1,
            "mode": "adversarial",
        },
        {
            "scenario": "c1",
            "m": 1,
            "direction": "reversed",
            "epsilon": 0.1,
            "delta": 0.25,
            "grid": [0, 4, 16],
            "trials": 20,
            "mode": "sampled",
        },
        {"scenario": "c4", "m": 2},
    ],
}


def test_run_experiment_outputs_and_replay(tmp_path):
    out1 = tmp_path / "run1"
    out2 = tmp_path / "run2"
    run_experiment(SMALL_CONFIG, out1)
    run_experiment(SMALL_CONFIG, out2)
    csv1 = (out1 / "results.csv").read_bytes()
    csv2 = (out2 / "results.csv").read_bytes()
    assert csv1 == csv2  # byte-identical replay
    header = csv1.decode().splitlines()[0]
    assert header == "scenario,direction,m,n,trials,successes,wilson_lo,wilson_hi,seed,millis"
    summary = json.loads((out1 / "summary.json").read_text())
    assert summary["seed"] == 99
    assert "toolkit_hash" in summary
    assert (out1 / "curves").is_dir()
    dats = list((out1 / "curves").glob("*.dat"))
    assert dats


def test_run_experiment_rejects_bad_config(tmp_path):
    bad = {"seed": 1, "experiments": [{"scenario": "c9", "m": 1}]}
    out = tmp_path / "bad"
    with pytest.raises(ConfigError):
        run_experiment(bad, out)
    assert not out.exists()  # no partial outputs
    with pytest.raises(ConfigError):
        run_experiment({"experiments": []}, out)
    with pytest.raises(ConfigError):
        run_experiment({"seed": 1, "experiments": [{"scenario": "c1", "m": 1, "grid": [-1]}]}, out)


def test_paper_suite_config_validates():
    import importlib.resources as res

    blob = res.files("comparelearn").joinpath("data/paper_suite.json").read_text()
    cfg = json.loads(blob)
    assert _validate_config(cfg) is cfg
    names = {e["scenario"] for e in cfg["experiments"]}
    assert names == {"figure1", "c1", "c2", "c3", "c4"}


def test_millis_column_zero_by_default(tmp_path):
    out = tmp_path / "m"
    run_experiment(SMALL_CONFIG, out)
    lines = (out / "results.csv").read_text().splitlines()[1:]
    assert all(line.rsplit(",", 1)[1] == "0" for line in lines)
    cfg = dict(SMALL_CONFIG)
    cfg["record_millis"] = True
    cfg["experiments"] = [SMALL_CONFIG["experiments"][0]]
    out2 = tmp_path / "m2"
    run_experiment(cfg, out2)
    lines2 = (out2 / "results.csv").read_text().splitlines()[1:]
    assert lines2  # millis recorded (possibly 0 on a fast machine)
