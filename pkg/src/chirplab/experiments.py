"""End-to-end runs: build a counterexample, sweep N, fit growth, decide.

Every threshold a verdict uses lives on :class:`ExperimentConfig`.
"""

from __future__ import annotations

import dataclasses
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

import numpy as np
from scipy import integrate as sp_integrate

from .errors import ConfigError, InsufficientPoints, NonPositiveValues
from .geometry import inscribed_cube_side, support_polytope
from .integrate import (
    ChirpSpec,
    QuadSpec,
    chirp_sin_part,
    complement_integral,
    pv_tensor_oracle,
    sinprod_over_polytope,
    truncated_fresnel,
)
from .osc1d import brute_force_cube_integral, cube_integral
from .reference import REFERENCE_CROSSCHECK_GAP
from .phase import (
    AlphaMatrix,
    MultiIndex,
    coefficient_row,
    linearity_threshold,
    mixed_index,
    sample_generic_alphas,
    solve_phase,
    solve_phase_n4k2,
)


@dataclass(frozen=True)
class ExperimentConfig:
    """Inputs and verdict thresholds.

    ``x_points`` are fractions of N: the evaluation points are ``x = f N``
    and each ``|f|`` must be at most ``c_tilde``.
    """

    k: int = 2
    n: int = 5
    seed: int = 1
    delta: float = 0.05
    N_list: tuple[float, ...] = (100.0, 200.0, 300.0, 500.0, 1000.0)
    x_points: tuple[float, ...] = (0.0, 0.03, -0.03)
    c_tilde: float = 0.05
    tol_phase: float = 1e-9
    quad: QuadSpec = field(default_factory=QuadSpec)
    fit_min_N: float = 100.0
    # verdict thresholds
    lower_band: float = 0.2
    upper_slack: float = 0.3
    counterexample_band: float = 0.25
    min_r_squared: float = 0.9
    fresnel_band: float = 0.25
    Lambda_list: tuple[float, ...] = (100.0, 300.0, 1000.0, 3000.0, 10000.0)
    identity_rtol: float = 1e-2
    k1_limit_N: float = 1e6
    k1_limit_tol: float = 1e-3
    oracle_N: float = 10.0
    oracle_resolution: int = 1280
    # signed gap (1/pi^2)|sin part| - |oracle| from the reference run (k=2, n=4, seed 1, N=10)
    crosscheck_reference_gap: float = REFERENCE_CROSSCHECK_GAP
    crosscheck_gap_rtol: float = 0.1
    crosscheck_rel_gap: float = 0.3
    k1_oracle_tol: float = 1e-3

    def __post_init__(self):
        object.__setattr__(self, "N_list", tuple(float(v) for v in self.N_list))
        object.__setattr__(self, "x_points", tuple(float(v) for v in self.x_points))
        object.__setattr__(self, "Lambda_list", tuple(float(v) for v in self.Lambda_list))
        if isinstance(self.quad, dict):
            object.__setattr__(self, "quad", QuadSpec(**self.quad))
        if self.k < 1 or self.n < 1:
            raise ConfigError("k and n must be positive")
        if any(b <= a for a, b in zip(self.N_list, self.N_list[1:])):
            raise ConfigError("N_list must be strictly increasing")
        if self.N_list and self.N_list[0] < 10:
            raise ConfigError("N_list must start at N >= 10")
        if any(abs(f) > self.c_tilde for f in self.x_points):
            raise ConfigError(f"x_points must lie in [-c_tilde, c_tilde] = [-{self.c_tilde}, {self.c_tilde}]")
        if any(b <= a for a, b in zip(self.Lambda_list, self.Lambda_list[1:])):
            raise ConfigError("Lambda_list must be strictly increasing")

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        data = dict(data)
        if "quad" in data:
            if not isinstance(data["quad"], dict):
                raise ConfigError("quad must be a mapping")
            qknown = {f.name for f in dataclasses.fields(QuadSpec)}
            qunknown = sorted(set(data["quad"]) - qknown)
            if qunknown:
                raise ConfigError(f"unknown quad keys: {', '.join(qunknown)}")
        try:
            return cls(**data)
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc

    def to_dict(self) -> dict:
        out = dataclasses.asdict(self)
        for key in ("N_list", "x_points", "Lambda_list"):
            out[key] = list(out[key])
        return out


@dataclass(frozen=True)
class GrowthSeries:
    points: tuple[tuple[float, float], ...]

    def __post_init__(self):
        pts = tuple((float(N), float(v)) for N, v in self.points)
        object.__setattr__(self, "points", pts)
        Ns = [p[0] for p in pts]
        if any(b <= a for a, b in zip(Ns, Ns[1:])):
            raise ValueError("GrowthSeries N must be strictly increasing")
        if not all(math.isfinite(v) for _, v in pts):
            raise ValueError("GrowthSeries values must be finite")

    @property
    def N(self) -> np.ndarray:
        return np.array([p[0] for p in self.points])

    @property
    def values(self) -> np.ndarray:
        return np.array([p[1] for p in self.points])


@dataclass(frozen=True)
class FitResult:
    exponent: float
    constant: float
    r_squared: float
    points_used: int = 0


@dataclass
class ExperimentResult:
    name: str
    verdict: bool
    series: GrowthSeries | None = None
    fit: FitResult | None = None
    rows: list[tuple[float, float, float, float]] = field(default_factory=list)
    details: dict[str, Any] = field(default_factory=dict)

    @property
    def verdict_label(self) -> str:
        return "PASS" if self.verdict else "FAIL"


def fit_log_exponent(series: GrowthSeries, fit_min_N: float = 100.0) -> FitResult:
    """Least squares of ``ln value`` on ``ln ln N`` over points with ``N >= fit_min_N``."""
    N, v = series.N, series.values
    keep = N >= fit_min_N
    N, v = N[keep], v[keep]
    if N.size < 4:
        raise InsufficientPoints(f"need >= 4 points with N >= {fit_min_N}, have {N.size}")
    if np.any(v <= 0):
        raise NonPositiveValues("fit needs strictly positive values")
    if np.any(N <= math.e):
        raise InsufficientPoints("fit needs N > e so that ln ln N is defined")
    x = np.log(np.log(N))
    y = np.log(v)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(((y - y.mean()) ** 2).sum())
    ss_res = float((resid**2).sum())
    # a constant series is fitted exactly by slope 0
    r2 = 1.0 if ss_tot <= 1e-28 * max(1.0, float((y**2).sum())) else max(0.0, 1.0 - ss_res / ss_tot)
    return FitResult(float(slope), float(math.exp(intercept)), float(min(r2, 1.0)), int(N.size))


def fit_log_affine(series: GrowthSeries, fit_min_N: float = 100.0) -> tuple[float, float]:
    """Diagnostic: ``value ~ A ln N + B``; returns ``(A, B)``."""
    N, v = series.N, series.values
    keep = N >= fit_min_N
    if keep.sum() < 2:
        return float("nan"), float("nan")
    A, B = np.polyfit(np.log(N[keep]), v[keep], 1)
    return float(A), float(B)


def _map(fn: Callable, items: Sequence, threads: int) -> list:
    if threads <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _rows(series: GrowthSeries, power: int) -> list[tuple[float, float, float, float]]:
    rows = []
    for N, v in series.points:
        ln = math.log(N)
        rows.append((N, v, ln, v / ln**power))
    return rows


def _in_band(p: float, target: float, band: float) -> bool:
    return target - band <= p <= target + band


# ---------------------------------------------------------------------------


def run_lower_bound_experiment(k: int, N_list: Sequence[float], config: ExperimentConfig | None = None,
                               threads: int = 1) -> ExperimentResult:
    """Cube integrals against ``(ln N)^{k-1}``."""
    config = config or ExperimentConfig()
    if not 1 <= k <= 4:
        raise ConfigError("lower-bound experiment supports k in 1..4")
    N_list = [float(v) for v in N_list]
    values = _map(lambda N: cube_integral(k, N), N_list, threads)
    series = GrowthSeries(tuple(zip(N_list, values)))
    fit = fit_log_exponent(series, config.fit_min_N)
    verdict = all(v > 0 for v in values) and _in_band(fit.exponent, k - 1, config.lower_band)
    details: dict[str, Any] = {"target_exponent": k - 1, "band": config.lower_band}
    if k == 1:
        limit = cube_integral(1, config.k1_limit_N)
        details.update(limit_N=config.k1_limit_N, limit_value=limit, limit_error=abs(limit - math.pi))
        verdict = verdict and abs(limit - math.pi) <= config.k1_limit_tol
    return ExperimentResult("lower-bound", verdict, series, fit, _rows(series, k - 1), details)


def run_upper_bound_experiment(config: ExperimentConfig, threads: int = 1) -> ExperimentResult:
    """Complement integrals ``D_0 minus its inscribed cube`` against ``(ln N)^{k-2}``."""
    k = config.k
    if k not in (2, 3):
        raise ConfigError("upper-bound experiment supports k in {2, 3}")
    if config.n < linearity_threshold(k):
        raise ConfigError(f"n must be >= {linearity_threshold(k)} for k = {k}")
    alphas = sample_generic_alphas(k, config.n, config.seed, config.delta)
    polys = [support_polytope(0.0, alphas, N) for N in config.N_list]
    values = _map(lambda P: abs(complement_integral(P, config.quad)), polys, threads)
    series = GrowthSeries(tuple(zip(config.N_list, values)))
    fit = fit_log_exponent(series, config.fit_min_N)
    verdict = fit.exponent <= (k - 2) + config.upper_slack
    A, B = fit_log_affine(series, config.fit_min_N)
    details = {
        "max_exponent": (k - 2) + config.upper_slack,
        "inscribed_fraction": inscribed_cube_side(polys[0]) / config.N_list[0],
        "affine_slope_per_lnN": A,
        "affine_intercept": B,
        "alphas": alphas.entries.tolist(),
    }
    return ExperimentResult("upper-bound", verdict, series, fit, _rows(series, k - 2), details)


def phase_quadratic_and_mixed(theta: np.ndarray, alphas: AlphaMatrix) -> tuple[float, float]:
    """Coefficients of ``t_1^2`` and ``t_1 t_2`` in the combined k = 2 phase."""
    quad = float(coefficient_row(MultiIndex((0, 2, 0)), alphas) @ theta)
    mixed = float(coefficient_row(mixed_index(2), alphas) @ theta)
    return quad, mixed


def _solve_for(config: ExperimentConfig, alphas: AlphaMatrix):
    if config.k == 2 and config.n == 4:
        sol = solve_phase_n4k2(alphas, config.tol_phase)
        return sol.phase.theta, sol.phase.residual
    sol = solve_phase(alphas, config.tol_phase)
    return sol.theta, sol.residual


def run_counterexample_experiment(config: ExperimentConfig, threads: int = 1) -> ExperimentResult:
    """``(1/pi^2) min_x |int_{D_x} sin(ts)/(ts)|`` over the N sweep (k = 2)."""
    if config.k != 2 or config.n < 4:
        raise ConfigError("counterexample experiment needs k = 2 and n >= 4")
    alphas = sample_generic_alphas(2, config.n, config.seed, config.delta)
    theta, residual = _solve_for(config, alphas)
    quad, mixed = phase_quadratic_and_mixed(theta, alphas)
    jobs = [(N, f) for N in config.N_list for f in config.x_points]

    def one(job):
        N, f = job
        P = support_polytope(f * N, alphas, N)
        if config.n == 4:
            # the t^2 term survives for n = 4; keep it in the sine part
            return abs(chirp_sin_part(P, quad, mixed, config.quad)) / math.pi**2
        return abs(sinprod_over_polytope(P, config.quad)) / math.pi**2

    raw = _map(one, jobs, threads)
    per_x: dict[float, list[float]] = {f: [] for f in config.x_points}
    for (N, f), v in zip(jobs, raw):
        per_x[f].append(v)
    values = [min(per_x[f][i] for f in config.x_points) for i in range(len(config.N_list))]
    series = GrowthSeries(tuple(zip(config.N_list, values)))
    fit = fit_log_exponent(series, config.fit_min_N)
    verdict = (
        all(v > 0 for v in values)
        and _in_band(fit.exponent, 1.0, config.counterexample_band)
        and fit.r_squared >= config.min_r_squared
    )
    A, B = fit_log_affine(series, config.fit_min_N)
    details = {
        "phase_residual": residual,
        "theta": list(map(float, theta)),
        "quadratic_coefficient": quad,
        "mixed_coefficient": mixed,
        "values_by_x_fraction": {str(f): per_x[f] for f in config.x_points},
        "max_spread_over_x": max(
            max(per_x[f][i] for f in config.x_points) - values[i] for i in range(len(values))
        ),
        "affine_slope_per_lnN": A,
        "affine_intercept": B,
        "alphas": alphas.entries.tolist(),
    }
    return ExperimentResult("counterexample", verdict, series, fit, _rows(series, 1), details)


def run_n4k2_fresnel_experiment(config: ExperimentConfig, threads: int = 1) -> ExperimentResult:
    """``(4/pi^2) |int_0^L exp(i a t^2) Si(|b| t L)/t dt|`` against ``ln L``."""
    alphas = sample_generic_alphas(2, 4, config.seed, config.delta)
    sol = solve_phase_n4k2(alphas, config.tol_phase)
    a, b = sol.alpha_coef, sol.beta_coef
    values = _map(lambda L: 4.0 / math.pi**2 * abs(truncated_fresnel(a, b, L, config.quad)), config.Lambda_list, threads)
    series = GrowthSeries(tuple(zip(config.Lambda_list, values)))
    fit = fit_log_exponent(series, config.fit_min_N)
    verdict = _in_band(fit.exponent, 1.0, config.fresnel_band)
    A, B = fit_log_affine(series, config.fit_min_N)
    details = {
        "alpha_coef": a,
        "beta_coef": b,
        "reflect_s": sol.reflect_s,
        "affine_slope_per_lnN": A,
        "affine_intercept": B,
        "alphas": alphas.entries.tolist(),
    }
    return ExperimentResult("fresnel", verdict, series, fit, _rows(series, 1), details)


def brute_force_resolution(k: int, N: float) -> int:
    """Twice the minimum resolution the midpoint oracle accepts, at least 256."""
    return max(256, int(math.ceil(8 * N**k)))


def run_identity_check(k: int, N_list: Sequence[float], config: ExperimentConfig | None = None) -> ExperimentResult:
    """Iterated-average reduction against the tensor midpoint rule."""
    config = config or ExperimentConfig()
    if k not in (1, 2, 3):
        raise ConfigError("identity check supports k in {1, 2, 3}")
    if any(N > 8 for N in N_list):
        raise ConfigError("identity check needs N <= 8")
    rows = []
    ok = True
    worst = 0.0
    for N in N_list:
        lhs = cube_integral(k, N)
        rhs = brute_force_cube_integral(k, N, brute_force_resolution(k, N))
        rel = abs(lhs - rhs) / abs(rhs)
        worst = max(worst, rel)
        ok = ok and rel <= config.identity_rtol
        rows.append((float(N), lhs, math.log(N), rel))
    return ExperimentResult("identity", ok, None, None, rows, {"max_relative_gap": worst, "rtol": config.identity_rtol})


def chirps_from_phase(theta: np.ndarray, k: int, N: float) -> list[ChirpSpec]:
    return [ChirpSpec(float(t), k, N) for t in theta]


def hilbert_pv_reference(alpha: float, N: float, x: float = 0.0) -> complex:
    """``(i/pi) p.v. int chi_N(x+t) chi_N(x+alpha t) dt/t`` by a Cauchy-weight rule."""
    lo = max(-N - x, min((-N - x) / alpha, (N - x) / alpha))
    hi = min(N - x, max((-N - x) / alpha, (N - x) / alpha))
    if not lo < 0 < hi:
        raise ValueError("origin must be inside the support")
    val = sp_integrate.quad(lambda t: 1.0, lo, hi, weight="cauchy", wvar=0.0)[0]
    return 1j / math.pi * val


def run_oracle_crosscheck(config: ExperimentConfig) -> ExperimentResult:
    """Direct kernel oracle against the sine-part reduction at small N."""
    k = config.k
    N = config.oracle_N
    if k not in (1, 2):
        raise ConfigError("oracle crosscheck supports k in {1, 2}")
    if N > 20:
        raise ConfigError("oracle crosscheck needs N <= 20")
    if k == 1:
        alphas = sample_generic_alphas(1, 2, config.seed, config.delta)
        chirps = [ChirpSpec(0.0, 1, N), ChirpSpec(0.0, 1, N)]
        res = max(config.oracle_resolution, 1 << 16)
        # at x = 0 the support is symmetric and both sides vanish; use the window edge
        x = config.c_tilde * N
        oracle = pv_tensor_oracle(1, alphas, chirps, x, res)
        ref = hilbert_pv_reference(float(alphas.entries[0, 0]), N, x)
        rel = abs(oracle - ref) / abs(ref)
        details = {"oracle": [oracle.real, oracle.imag], "reference": [ref.real, ref.imag], "relative_gap": rel,
                   "resolution": res, "x": x}
        return ExperimentResult("oracle", rel <= config.k1_oracle_tol, None, None, [(N, abs(oracle), math.log(N), rel)], details)
    alphas = sample_generic_alphas(2, config.n, config.seed, config.delta)
    theta, _ = _solve_for(config, alphas)
    quad, mixed = phase_quadratic_and_mixed(theta, alphas)
    chirps = chirps_from_phase(theta, 2, N)
    # a resolution below oracle_min_resolution raises ResolutionTooCoarse
    res = config.oracle_resolution
    oracle = pv_tensor_oracle(2, alphas, chirps, 0.0, res)
    P = support_polytope(0.0, alphas, N)
    sin_part = abs(chirp_sin_part(P, quad, mixed, config.quad)) / math.pi**2
    gap = sin_part - abs(oracle)
    ref = config.crosscheck_reference_gap
    # |oracle| >= sin part - slack, slack = the recorded gap when positive
    allowed = max(ref, 0.0) * (1 + config.crosscheck_gap_rtol)
    rel_gap = abs(abs(oracle) - sin_part) / sin_part
    reproduced = abs(gap - ref) <= config.crosscheck_gap_rtol * abs(ref)
    verdict = gap <= allowed and reproduced and rel_gap <= config.crosscheck_rel_gap
    details = {
        "oracle": [oracle.real, oracle.imag],
        "oracle_abs": abs(oracle),
        "sin_part_scaled": sin_part,
        "lower_bound_gap": gap,
        "allowed_gap": allowed,
        "reference_gap": ref,
        "gap_reproduced": reproduced,
        "relative_gap": rel_gap,
        "resolution": res,
        "quadratic_coefficient": quad,
        "mixed_coefficient": mixed,
    }
    return ExperimentResult("oracle", verdict, None, None, [(N, abs(oracle), math.log(N), gap)], details)
