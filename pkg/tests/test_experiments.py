import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from chirplab.errors import ConfigError, InsufficientPoints, NonPositiveValues
from chirplab.experiments import (
    ExperimentConfig,
    GrowthSeries,
    fit_log_affine,
    fit_log_exponent,
    hilbert_pv_reference,
    phase_quadratic_and_mixed,
    run_counterexample_experiment,
    run_identity_check,
    run_lower_bound_experiment,
    run_n4k2_fresnel_experiment,
    run_oracle_crosscheck,
    run_upper_bound_experiment,
)
from chirplab.geometry import support_polytope
from chirplab.integrate import sinprod_over_polytope
from chirplab.phase import sample_generic_alphas, solve_phase

NS = (1e2, 3e2, 1e3, 3e3, 1e4)


def synthetic(c, p, Ns=NS):
    return GrowthSeries(tuple((N, c * math.log(N) ** p) for N in Ns))


# --- fitting ----------------------------------------------------------------

def test_fit_exact_power_law():
    fit = fit_log_exponent(synthetic(3.0, 2.0))
    assert fit.exponent == pytest.approx(2.0, abs=1e-12)
    assert fit.constant == pytest.approx(3.0, rel=1e-12)
    assert fit.r_squared == pytest.approx(1.0, abs=1e-12)


def test_fit_constant_series():
    fit = fit_log_exponent(synthetic(5.0, 0.0))
    assert fit.exponent == pytest.approx(0.0, abs=1e-12)
    assert fit.r_squared == 1.0


@settings(max_examples=50, deadline=None)
@given(st.sampled_from([0, 1, 2, 3]), st.floats(0.01, 100.0))
def test_fit_recovers_synthetic_exponents(p, c):
    fit = fit_log_exponent(synthetic(c, float(p)))
    assert fit.exponent == pytest.approx(p, abs=1e-9)
    assert fit.r_squared == pytest.approx(1.0, abs=1e-12)


def test_fit_excludes_small_N():
    pts = [(20.0, 1e6)] + [(N, math.log(N)) for N in NS]
    fit = fit_log_exponent(GrowthSeries(tuple(pts)), fit_min_N=100.0)
    assert fit.points_used == 5
    assert fit.exponent == pytest.approx(1.0, abs=1e-12)


def test_fit_needs_four_points():
    with pytest.raises(InsufficientPoints):
        fit_log_exponent(synthetic(1.0, 1.0, NS[:3]))


def test_fit_needs_positive_values():
    s = GrowthSeries(tuple((N, -1.0) for N in NS))
    with pytest.raises(NonPositiveValues):
        fit_log_exponent(s)


def test_affine_fit_exact():
    s = GrowthSeries(tuple((N, 2.0 * math.log(N) - 3.0) for N in NS))
    A, B = fit_log_affine(s)
    assert A == pytest.approx(2.0) and B == pytest.approx(-3.0)


def test_series_validation():
    with pytest.raises(ValueError):
        GrowthSeries(((10.0, 1.0), (5.0, 1.0)))
    with pytest.raises(ValueError):
        GrowthSeries(((10.0, float("nan")),))


# --- config -----------------------------------------------------------------

def test_config_round_trip():
    cfg = ExperimentConfig(k=3, n=19, N_list=(100, 1000))
    assert ExperimentConfig.from_dict(cfg.to_dict()) == cfg


def test_config_rejects_unknown_keys():
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({"kk": 2})
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({"quad": {"tolerance": 1}})


@pytest.mark.parametrize("bad", [
    {"N_list": [100, 50, 200]},
    {"N_list": [5, 100]},
    {"x_points": [0.2]},
    {"k": 0},
    {"quad": {"outer_points_per_unit_oscillation": 2}},
])
def test_config_rejects_bad_values(bad):
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict(bad)


# --- runners ----------------------------------------------------------------

def test_lower_bound_k1_limit():
    r = run_lower_bound_experiment(1, (1e2, 1e3, 1e4, 1e5, 1e6))
    assert r.verdict
    assert abs(r.details["limit_value"] - math.pi) <= 1e-3
    assert abs(r.fit.exponent) < 0.05


def test_lower_bound_k2_exponent():
    r = run_lower_bound_experiment(2, NS)
    assert r.verdict
    assert 0.85 <= r.fit.exponent <= 1.15


def test_lower_bound_k3_exponent():
    r = run_lower_bound_experiment(3, NS)
    assert r.verdict
    assert abs(r.fit.exponent - 2.0) <= 0.2


def test_upper_bound_k2():
    r = run_upper_bound_experiment(ExperimentConfig())
    assert r.verdict
    assert r.fit.exponent <= 0.3


def test_upper_bound_rejects_small_n():
    with pytest.raises(ConfigError):
        run_upper_bound_experiment(ExperimentConfig(n=4))


def test_counterexample_values_and_window():
    cfg = ExperimentConfig()
    r = run_counterexample_experiment(cfg)
    vals = r.series.values
    assert np.all(vals > 0)
    # eventually increasing on the reference seed
    assert np.all(np.diff(vals) > 0)
    # x = 0 and x = +-0.03 N differ by a bounded amount (reference run: < 0.05)
    assert r.details["max_spread_over_x"] <= 0.5
    assert r.details["mixed_coefficient"] == pytest.approx(1.0)
    assert abs(r.details["quadratic_coefficient"]) <= 1e-9


def test_counterexample_matches_direct_evaluation():
    cfg = ExperimentConfig(N_list=(100.0, 200.0, 300.0, 400.0), x_points=(0.0,))
    r = run_counterexample_experiment(cfg)
    a = sample_generic_alphas(2, 5, cfg.seed)
    direct = abs(sinprod_over_polytope(support_polytope(0.0, a, 200.0), method="slice")) / math.pi**2
    assert r.series.values[1] == pytest.approx(direct, abs=1e-8)


def test_counterexample_n4_runs():
    r = run_counterexample_experiment(ExperimentConfig(n=4))
    assert np.all(r.series.values > 0)


def test_counterexample_deterministic():
    cfg = ExperimentConfig(N_list=(100.0, 200.0, 300.0, 400.0))
    a, b = run_counterexample_experiment(cfg), run_counterexample_experiment(cfg)
    assert a.series == b.series and a.fit == b.fit


def test_counterexample_threads_do_not_change_values():
    cfg = ExperimentConfig(N_list=(100.0, 200.0, 300.0, 400.0))
    assert run_counterexample_experiment(cfg, threads=3).series == run_counterexample_experiment(cfg).series


def test_fresnel_growth():
    r = run_n4k2_fresnel_experiment(ExperimentConfig())
    assert r.verdict
    assert abs(r.fit.exponent - 1.0) <= 0.25


def test_identity_k2_and_k3():
    assert run_identity_check(2, (4.0,)).verdict
    assert run_identity_check(3, (2.0,)).verdict


def test_identity_k1_is_twice_si():
    r = run_identity_check(1, (3.0,))
    assert r.verdict
    assert r.rows[0][1] == pytest.approx(2 * float(mpmath.si(3.0)), abs=1e-13)


def test_identity_rejects_large_N():
    with pytest.raises(ConfigError):
        run_identity_check(2, (16.0,))


def test_hilbert_reference_closed_form():
    # p.v. int_lo^hi dt/t = ln(hi/|lo|)
    N, x, a = 4.0, 0.3, 2.5
    lo, hi = max(-N - x, (-N - x) / a), min(N - x, (N - x) / a)
    assert hilbert_pv_reference(a, N, x) == pytest.approx(1j / math.pi * math.log(hi / -lo), abs=1e-12)


def test_oracle_k1():
    r = run_oracle_crosscheck(ExperimentConfig(k=1, n=2))
    assert r.verdict
    assert r.details["relative_gap"] <= 1e-3


def test_oracle_k2_n4():
    r = run_oracle_crosscheck(ExperimentConfig(n=4))
    assert r.verdict
    assert r.details["lower_bound_gap"] == pytest.approx(r.details["reference_gap"], rel=0.1)


def test_phase_quadratic_and_mixed_k2_n5():
    a = sample_generic_alphas(2, 5, 1)
    q, m = phase_quadratic_and_mixed(solve_phase(a).theta, a)
    assert abs(q) <= 1e-9 and m == pytest.approx(1.0)
