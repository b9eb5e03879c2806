"""Acceptance criteria, each at its stated tolerance and runtime budget.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the PASS/FAIL
lines as they happen; they are also repeated in the terminal summary.
"""

import math
import time

import numpy as np
import sympy

from chirplab.experiments import (
    ExperimentConfig,
    GrowthSeries,
    fit_log_affine,
    fit_log_exponent,
    run_counterexample_experiment,
    run_identity_check,
    run_lower_bound_experiment,
    run_n4k2_fresnel_experiment,
    run_oracle_crosscheck,
    run_upper_bound_experiment,
    chirps_from_phase,
)
from chirplab.geometry import circumscribed_box, inscribed_cube_side, support_polytope
from chirplab.integrate import ASYMPTOTIC_SWITCH, ChirpSpec, QuadSpec, pv_tensor_oracle, sinprod_over_polytope, sinprod_positive_orthant
from chirplab.geometry import Strip, SupportPolytope
from chirplab.osc1d import sici, sici_dual
from chirplab.phase import (
    MultiIndex,
    enumerate_multi_indices,
    expand_polynomial_oracle,
    mixed_index,
    riesz_monomials,
    sample_generic_alphas,
    solve_phase,
    solve_phase_n4k2,
    xk_index,
)


class Clock:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0


def test_criterion_1a_monomial_counts(acceptance):
    with Clock() as c:
        counts = [len(enumerate_multi_indices(k + 1, k)) for k in range(1, 6)]
    ok = counts == [2, 6, 20, 70, 252] and c.elapsed < 1
    acceptance("1a (C(2k,k) monomials, k=1..5)", ok, f"counts {counts}, {c.elapsed:.3f}s")


def test_criterion_1b_riesz_quadratic_counts(acceptance):
    with Clock() as c:
        counts = [len(riesz_monomials(d)) for d in (1, 2, 3)]
        # independent count: distinct monomials of (x + t + s)^2 expanded by sympy
        ref = []
        for d in (1, 2, 3):
            v = sympy.symbols(f"v0:{2 * d + 1}")
            ref.append(len(sympy.Poly(sympy.expand(sum(v) ** 2), *v).monoms()))
    target = [2 * d * d + 2 * d + 1 for d in (1, 2, 3)]
    ok = counts == target and c.elapsed < 1
    acceptance(
        "1b (Riesz quadratic monomials 2d^2+2d+1)",
        ok,
        f"enumerated {counts}, sympy {ref}, required {target}, {c.elapsed:.3f}s",
    )


def test_criterion_2_phase_residuals(acceptance):
    worst_rel = 0.0
    worst_mixed = 0.0
    worst_solver = 0.0
    with Clock() as c:
        for k, n in ((2, 5), (2, 6), (2, 8), (3, 19), (2, 4)):
            keep = {xk_index(k), mixed_index(k)}
            if (k, n) == (2, 4):
                keep = {xk_index(2), mixed_index(2), MultiIndex((0, 2, 0))}
            for seed in range(100):
                a = sample_generic_alphas(k, n, seed)
                pv = solve_phase_n4k2(a).phase if (k, n) == (2, 4) else solve_phase(a)
                scale = np.linalg.norm(pv.theta)
                coeffs = expand_polynomial_oracle(pv.theta, a)
                res = max(abs(v) for m, v in coeffs.items() if m not in keep)
                worst_rel = max(worst_rel, res / scale)
                # |.| because the n = 4 reflection s -> -s may leave ts at -1 in the raw expansion
                worst_mixed = max(worst_mixed, abs(abs(coeffs[mixed_index(k)]) - 1.0) / scale)
                worst_solver = max(worst_solver, abs(pv.mixed_coefficient - 1.0))
    ok = worst_rel <= 1e-9 and worst_mixed <= 1e-9 and worst_solver <= 1e-12 and c.elapsed < 10
    acceptance("2 (phase residuals, 500 alpha matrices)", ok,
               f"max residual/|theta| {worst_rel:.2e}, oracle mixed gap/|theta| {worst_mixed:.1e}, "
               f"solver mixed gap {worst_solver:.1e}, {c.elapsed:.1f}s")


def test_criterion_3_identity(acceptance):
    with Clock() as c:
        r2 = run_identity_check(2, (2.0, 4.0, 8.0))
        r3 = run_identity_check(3, (2.0,))
    worst = max(r2.details["max_relative_gap"], r3.details["max_relative_gap"])
    ok = r2.verdict and r3.verdict and worst <= 1e-2 and c.elapsed < 60
    acceptance("3 (cube identity vs tensor rule)", ok, f"max relative gap {worst:.2e}, {c.elapsed:.1f}s")


def test_criterion_4_lower_bound(acceptance):
    Ns = (1e2, 3e2, 1e3, 3e3, 1e4)
    with Clock() as c:
        r2 = run_lower_bound_experiment(2, Ns)
        r3 = run_lower_bound_experiment(3, Ns)
        r1 = run_lower_bound_experiment(1, (1e2, 1e3, 1e4, 1e5, 1e6))
    err = r1.details["limit_error"]
    ok = (abs(r2.fit.exponent - 1) <= 0.2 and abs(r3.fit.exponent - 2) <= 0.2 and err <= 1e-3 and c.elapsed < 60)
    acceptance("4 (lower bound growth)", ok,
               f"k=2 exponent {r2.fit.exponent:.3f}, k=3 exponent {r3.fit.exponent:.3f}, "
               f"k=1 |I(1e6)-pi| {err:.1e}, {c.elapsed:.1f}s")


def test_criterion_5_upper_bound(acceptance):
    with Clock() as c:
        r2 = run_upper_bound_experiment(ExperimentConfig(k=2, n=5, N_list=(100, 200, 300, 500, 1000)))
        cfg3 = ExperimentConfig(
            k=3, n=19, N_list=(100, 200, 500, 1000),
            quad=QuadSpec(abs_tol=1e-3, asymptotic_switch=ASYMPTOTIC_SWITCH),
        )
        r3 = run_upper_bound_experiment(cfg3)
    A, B = fit_log_affine(r3.series)
    ok = r2.fit.exponent <= 0.3 and r3.fit.exponent <= 1.3 and c.elapsed < 300
    acceptance("5 (complement growth)", ok,
               f"k=2 exponent {r2.fit.exponent:.3f} (<= 0.3), k=3 exponent {r3.fit.exponent:.3f} (<= 1.3), "
               f"k=3 values {[round(float(v), 1) for v in r3.series.values]}, affine {A:.1f} ln N {B:+.1f}, {c.elapsed:.0f}s")


def test_criterion_6_counterexample(acceptance):
    # the three named N values plus 200 and 500: the fit needs at least four points
    cfg = ExperimentConfig(k=2, n=5, N_list=(100, 200, 300, 500, 1000), x_points=(0.0, 0.03, -0.03))
    with Clock() as c:
        r = run_counterexample_experiment(cfg)
    A, B = fit_log_affine(r.series)
    pos = bool(np.all(r.series.values > 0))
    ok = pos and abs(r.fit.exponent - 1) <= 0.25 and r.fit.r_squared >= 0.9 and c.elapsed < 300
    acceptance("6 (end-to-end counterexample, k=2 n=5)", ok,
               f"all positive {pos}, exponent {r.fit.exponent:.3f} (1 +- 0.25), r^2 {r.fit.r_squared:.4f}, "
               f"affine {A:.4f} ln N {B:+.3f}, {c.elapsed:.1f}s")


def test_criterion_7_fresnel(acceptance):
    with Clock() as c:
        r = run_n4k2_fresnel_experiment(ExperimentConfig(Lambda_list=(1e2, 3e2, 1e3, 3e3, 1e4)))
    ok = abs(r.fit.exponent - 1) <= 0.25 and c.elapsed < 60
    acceptance("7 (k=2 n=4 truncated Fresnel growth)", ok, f"exponent {r.fit.exponent:.3f}, {c.elapsed:.1f}s")


def test_criterion_8_oracle(acceptance):
    with Clock() as c:
        cfg = ExperimentConfig(n=4)
        r = run_oracle_crosscheck(cfg)
        # dilation and multilinearity on the same construction
        a = sample_generic_alphas(2, 4, cfg.seed)
        theta = solve_phase_n4k2(a).phase.theta
        N, lam, res = cfg.oracle_N, 2.0, cfg.oracle_resolution
        base = pv_tensor_oracle(2, a, chirps_from_phase(theta, 2, N), 0.0, res)
        scaled = pv_tensor_oracle(2, a, chirps_from_phase(theta / lam**2, 2, lam * N), 0.0, res)
        dil = abs(scaled - base) / abs(base)
        ch = chirps_from_phase(theta, 2, N)
        ch[1] = ChirpSpec(ch[1].phase_coefficient, 2, N, amplitude=3.0)
        lin = abs(pv_tensor_oracle(2, a, ch, 0.0, res) - 3.0 * base) / abs(base)
    d = r.details
    ok = r.verdict and dil <= 1e-6 and lin <= 1e-6 and c.elapsed < 120
    acceptance("8 (kernel oracle cross-check)", ok,
               f"|oracle| {d['oracle_abs']:.6f} vs sin part {d['sin_part_scaled']:.6f}, gap {d['lower_bound_gap']:+.6f} "
               f"(reference {d['reference_gap']:+.6f}), dilation {dil:.1e}, multilinearity {lin:.1e}, {c.elapsed:.1f}s")


def test_criterion_9_property_suites(acceptance):
    rng = np.random.default_rng(2024)
    with Clock() as c:
        x = np.concatenate([rng.uniform(-20, 20, 500), rng.uniform(-1e5, 1e5, 500)])
        odd = float(np.max(np.abs(sici(-x)[0] + sici(x)[0])))
        acc = float(np.max(np.abs(sici(x)[0] - sici_dual(x)[0])))

        box = SupportPolytope(2, (Strip(np.array([1.0, 0.0]), -7.0, 7.0), Strip(np.array([0.0, 1.0]), -3.0, 3.0)))
        spec = QuadSpec(abs_tol=1e-10)
        even = abs(sinprod_over_polytope(box, spec, "slice") - 4 * sinprod_positive_orthant(box, spec))

        violations = 0
        for k, n in ((2, 4), (2, 5), (3, 19)):
            P = support_polytope(0.3, sample_generic_alphas(k, n, 1), 10.0)
            pts = rng.uniform(-10, 10, (10_000, k))
            inside = P.contains(pts)
            every = np.all([s.contains(pts) for s in P.strips], axis=0)
            b = circumscribed_box(P)
            in_box = np.all((pts >= b[:, 0] - 1e-9) & (pts <= b[:, 1] + 1e-9), axis=1)
            violations += int(np.sum(inside != every)) + int(np.sum(inside & ~in_box))
            cube = inscribed_cube_side(P)
            corners = np.array(np.meshgrid(*[[-1.0, 1.0]] * k)).reshape(k, -1).T
            violations += int(not P.contains(corners * cube * (1 - 1e-9)).all())
            violations += int(P.contains(corners * cube * (1 + 1e-6)).all())

        Ns = (1e2, 3e2, 1e3, 3e3, 1e4)
        fits = [fit_log_exponent(GrowthSeries(tuple((N, 2.5 * math.log(N) ** p) for N in Ns))) for p in range(4)]
        fit_err = max(abs(f.exponent - p) for p, f in enumerate(fits))
        r2_err = max(abs(f.r_squared - 1) for f in fits)
    ok = odd == 0 and acc <= 1e-12 and even <= 1e-8 and violations == 0 and fit_err <= 1e-9 and r2_err <= 1e-12 and c.elapsed < 30
    acceptance("9 (property suites)", ok,
               f"Si odd gap {odd:.1e}, Si vs dual {acc:.1e}, evenness {even:.1e}, membership/cube violations {violations}, "
               f"fit exponent error {fit_err:.1e}, r^2 error {r2_err:.1e}, {c.elapsed:.1f}s")
