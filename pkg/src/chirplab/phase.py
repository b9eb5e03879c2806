"""Chirp phase vectors.

Plugging ``f(y) = exp(i th_0 y^k)`` and ``f_j(y) = exp(i th_j y^k)`` into the
k-fold kernel turns the phase into

    th_0 (x + t_1 + ... + t_k)^k + sum_j th_j (x + a_1j t_1 + ... + a_kj t_k)^k,

a homogeneous degree-k polynomial in ``x, t_1, ..., t_k``.  Each monomial's
coefficient is a linear functional of ``theta``; we pick ``theta`` in the
common kernel of all of them except the ``x^k`` and ``t_1...t_k`` ones and
normalise the latter to 1.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateMixed, DegenerateQuadratic, GenericityFailure, RankDeficient

TOL_PHASE = 1e-9
RANK_RTOL = 1e-10
SAMPLE_LOW, SAMPLE_HIGH = 2.0, 10.0
MAX_REJECTIONS = 1000


@dataclass(frozen=True, order=True)
class MultiIndex:
    exponents: tuple[int, ...]

    def __post_init__(self):
        if any(a < 0 for a in self.exponents):
            raise ValueError(f"negative exponent in {self.exponents}")

    @property
    def degree(self) -> int:
        return sum(self.exponents)

    def __len__(self) -> int:
        return len(self.exponents)

    def label(self, names=None) -> str:
        if names is None:
            names = ["x"] + [f"t{i}" for i in range(1, len(self.exponents))]
        parts = []
        for name, a in zip(names, self.exponents):
            if a == 1:
                parts.append(name)
            elif a > 1:
                parts.append(f"{name}^{a}")
        return "*".join(parts) or "1"


@dataclass(frozen=True)
class AlphaMatrix:
    """k direction vectors; row i holds (a_i1, ..., a_i,n-1)."""

    entries: np.ndarray

    def __post_init__(self):
        e = np.array(self.entries, dtype=float)
        if e.ndim != 2 or e.shape[0] < 1 or e.shape[1] < 1:
            raise ValueError("alpha entries must be a k x (n-1) matrix")
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)

    @property
    def k(self) -> int:
        return self.entries.shape[0]

    @property
    def n(self) -> int:
        return self.entries.shape[1] + 1

    def column(self, j: int) -> np.ndarray:
        """Normal vector of the j-th strip (j = 1..n-1)."""
        return self.entries[:, j - 1]

    def margins_ok(self, delta: float) -> bool:
        e = self.entries
        if np.any(np.abs(e) < delta) or np.any(np.abs(e - 1.0) < delta):
            return False
        for row in e:
            gaps = np.abs(row[:, None] - row[None, :])
            np.fill_diagonal(gaps, np.inf)
            if np.any(gaps < delta):
                return False
        return True


@dataclass(frozen=True)
class PhaseVector:
    theta: np.ndarray
    mixed_coefficient: float
    xk_coefficient: float
    residual: float
    rank: int


@dataclass(frozen=True)
class N4K2Phase:
    """Phase for k=2, n=4: only x^2, t^2 and ts survive.

    ``alpha_coef`` is the t^2 coefficient and ``beta_coef`` the ts coefficient
    after normalisation.  When the sign flip needed for ``alpha_coef > 0`` makes
    the raw ts coefficient -1, ``reflect_s`` is set: the substitution s -> -s
    (which leaves ``ds/s`` invariant) restores ``beta_coef = 1``.
    """

    phase: PhaseVector
    alpha_coef: float
    beta_coef: float
    reflect_s: bool


@dataclass(frozen=True)
class RieszPhaseSpec:
    d: int
    n: int
    A: np.ndarray
    B: np.ndarray

    def __post_init__(self):
        A = np.asarray(self.A, dtype=float)
        B = np.asarray(self.B, dtype=float)
        if A.shape != (self.d, self.n) or B.shape != (self.d, self.n):
            raise ValueError("A and B must be d x n")
        if self.n < riesz_min_n(self.d):
            raise ValueError(f"n must be >= {riesz_min_n(self.d)} for d={self.d}")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)


@dataclass(frozen=True)
class RieszPhase:
    theta: np.ndarray
    residual: float
    rank: int
    diagonal_coefficients: np.ndarray  # coefficients of t_i s_i


def enumerate_multi_indices(num_vars: int, degree: int) -> list[MultiIndex]:
    """All exponent tuples of the given total degree, x-heavy first.

    For three variables and degree 2 this yields x^2, xt, xs, t^2, ts, s^2.
    """
    if num_vars < 1:
        raise ValueError("num_vars must be >= 1")
    if degree < 0:
        raise ValueError("degree must be >= 0")

    def rec(remaining_vars, remaining_deg):
        if remaining_vars == 1:
            yield (remaining_deg,)
            return
        for a in range(remaining_deg, -1, -1):
            for tail in rec(remaining_vars - 1, remaining_deg - a):
                yield (a,) + tail

    return [MultiIndex(e) for e in rec(num_vars, degree)]


def monomial_count(k: int) -> int:
    """(2k)!/(k!)^2: number of degree-k monomials in k+1 variables."""
    return math.comb(2 * k, k)


def linearity_threshold(k: int) -> int:
    """Smallest n for which the generic phase system has a solution."""
    return monomial_count(k) - 1


def multinomial(index: MultiIndex) -> int:
    out = math.factorial(index.degree)
    for a in index.exponents:
        out //= math.factorial(a)
    if out > np.iinfo(np.int64).max:
        raise OverflowError(f"multinomial of {index.exponents} exceeds int64")
    return out


def _linear_form_row(index: MultiIndex, forms: np.ndarray) -> np.ndarray:
    # forms[v, j] = coefficient of variable v in the j-th linear form
    powers = np.prod(forms ** np.asarray(index.exponents)[:, None], axis=0)
    return multinomial(index) * powers


def _forms(alphas: AlphaMatrix) -> np.ndarray:
    k, n = alphas.k, alphas.n
    forms = np.ones((k + 1, n))
    forms[1:, 1:] = alphas.entries
    return forms


def coefficient_row(index: MultiIndex, alphas: AlphaMatrix) -> np.ndarray:
    """Row r with r . theta = coefficient of the monomial ``index``."""
    if index.degree != alphas.k or len(index) != alphas.k + 1:
        raise ValueError(
            f"index {index.exponents} does not match k={alphas.k} ({alphas.k + 1} variables, degree {alphas.k})"
        )
    return _linear_form_row(index, _forms(alphas))


def xk_index(k: int) -> MultiIndex:
    return MultiIndex((k,) + (0,) * k)


def mixed_index(k: int) -> MultiIndex:
    return MultiIndex((0,) + (1,) * k)


@dataclass(frozen=True)
class ConstraintSystem:
    matrix: np.ndarray
    indices: list[MultiIndex]
    mixed_row: np.ndarray
    xk_row: np.ndarray


def build_constraint_matrix(alphas: AlphaMatrix) -> ConstraintSystem:
    """Rows for every monomial except x^k and t_1...t_k."""
    k = alphas.k
    keep = {xk_index(k), mixed_index(k)}
    indices = [a for a in enumerate_multi_indices(k + 1, k) if a not in keep]
    forms = _forms(alphas)
    rows = [_linear_form_row(a, forms) for a in indices]
    matrix = np.array(rows).reshape(len(indices), alphas.n)
    return ConstraintSystem(
        matrix=matrix,
        indices=indices,
        mixed_row=_linear_form_row(mixed_index(k), forms),
        xk_row=_linear_form_row(xk_index(k), forms),
    )


def numerical_rank(matrix: np.ndarray, rtol: float = RANK_RTOL) -> int:
    if matrix.size == 0:
        return 0
    s = np.linalg.svd(matrix, compute_uv=False)
    return int(np.sum(s > rtol * s[0])) if s[0] > 0 else 0


def nullspace(matrix: np.ndarray, n: int, rtol: float = RANK_RTOL) -> tuple[np.ndarray, int]:
    """Orthonormal nullspace basis (rows) and the numerical rank."""
    if matrix.shape[0] == 0:
        return np.eye(n), 0
    _, s, vt = np.linalg.svd(matrix, full_matrices=True)
    rank = int(np.sum(s > rtol * s[0])) if s[0] > 0 else 0
    return vt[rank:], rank


def _pick(basis: np.ndarray, score_rows: np.ndarray, tol: float) -> np.ndarray:
    # basis vector maximising the smallest |score|; ties go to the lowest index
    scores = np.abs(basis @ score_rows.T)
    scores = scores.min(axis=1) if scores.ndim == 2 else scores
    best = int(np.argmax(scores))
    if scores[best] < tol:
        raise DegenerateMixed(f"retained coefficient {scores[best]:.3e} below tolerance {tol:.1e}")
    return basis[best]


def solve_phase(alphas: AlphaMatrix, tol_phase: float = TOL_PHASE) -> PhaseVector:
    """Phase vector killing every monomial but x^k and t_1...t_k (set to 1)."""
    k, n = alphas.k, alphas.n
    system = build_constraint_matrix(alphas)
    m = system.matrix.shape[0]
    basis, rank = nullspace(system.matrix, n)
    if n < linearity_threshold(k) and basis.shape[0] == 0:
        raise RankDeficient(
            f"n={n} is below the threshold {linearity_threshold(k)} for k={k}: the {m}x{n} constraint "
            "system has only the zero solution (k=2, n=4 has a dedicated solver)"
        )
    if rank < m:
        raise RankDeficient(f"constraint matrix has rank {rank} < {m}; alphas are not generic")
    if basis.shape[0] == 0:
        raise RankDeficient(f"constraint matrix {m}x{n} has a trivial nullspace")
    v = _pick(basis, system.mixed_row[None, :], tol_phase)
    theta = v / float(system.mixed_row @ v)
    residual = float(np.max(np.abs(system.matrix @ theta))) if m else 0.0
    return PhaseVector(
        theta=theta,
        mixed_coefficient=float(system.mixed_row @ theta),
        xk_coefficient=float(system.xk_row @ theta),
        residual=residual,
        rank=rank,
    )


N4K2_CONSTRAINED = (MultiIndex((1, 1, 0)), MultiIndex((1, 0, 1)), MultiIndex((0, 0, 2)))
N4K2_QUADRATIC = MultiIndex((0, 2, 0))


def solve_phase_n4k2(alphas: AlphaMatrix, tol_phase: float = TOL_PHASE) -> N4K2Phase:
    """k=2, n=4: kill xt, xs, s^2; keep x^2, t^2 (alpha > 0) and ts (beta = 1)."""
    if alphas.k != 2 or alphas.n != 4:
        raise ValueError("solve_phase_n4k2 needs a 2 x 3 alpha matrix")
    forms = _forms(alphas)
    matrix = np.array([_linear_form_row(a, forms) for a in N4K2_CONSTRAINED])
    basis, rank = nullspace(matrix, 4)
    if rank < 3:
        raise RankDeficient(f"the xt, xs, s^2 rows have rank {rank} < 3")
    v = basis[0]
    mixed_row = _linear_form_row(mixed_index(2), forms)
    quad_row = _linear_form_row(N4K2_QUADRATIC, forms)
    beta = float(mixed_row @ v)
    alpha = float(quad_row @ v)
    if abs(beta) < tol_phase:
        raise DegenerateMixed(f"ts coefficient {beta:.3e} below tolerance")
    if abs(alpha) < tol_phase:
        raise DegenerateQuadratic(f"t^2 coefficient {alpha:.3e} below tolerance")
    theta = v / beta
    alpha /= beta
    reflect = alpha < 0
    if reflect:
        theta = -theta
        alpha = -alpha
    residual = float(np.max(np.abs(matrix @ theta)))
    phase = PhaseVector(
        theta=theta,
        mixed_coefficient=1.0,
        xk_coefficient=float(_linear_form_row(xk_index(2), forms) @ theta),
        residual=residual,
        rank=rank,
    )
    return N4K2Phase(phase=phase, alpha_coef=alpha, beta_coef=1.0, reflect_s=reflect)


def _generic_certificate(alphas: AlphaMatrix) -> bool:
    k, n = alphas.k, alphas.n
    if (k, n) == (2, 4):
        forms = _forms(alphas)
        rows = np.array([_linear_form_row(a, forms) for a in N4K2_CONSTRAINED])
        return numerical_rank(rows) == 3
    system = build_constraint_matrix(alphas)
    m = system.matrix.shape[0]
    return numerical_rank(system.matrix) == min(m, n)


def sample_generic_alphas(k: int, n: int, seed: int, delta: float = 0.05) -> AlphaMatrix:
    """Seeded alpha matrix with entries in [2, 10], margin checks and a rank certificate."""
    if k < 1 or n < 2:
        raise ValueError("need k >= 1 and n >= 2")
    rng = np.random.default_rng(seed)
    rejections = 0
    # rows are redrawn independently; each redraw counts against the budget
    rows = [None] * k
    while rejections <= MAX_REJECTIONS:
        for i in range(k):
            while rows[i] is None:
                row = rng.uniform(SAMPLE_LOW, SAMPLE_HIGH, size=(1, n - 1))
                if AlphaMatrix(row).margins_ok(delta):
                    rows[i] = row[0]
                else:
                    rejections += 1
                    if rejections > MAX_REJECTIONS:
                        break
            if rejections > MAX_REJECTIONS:
                break
        else:
            alphas = AlphaMatrix(np.array(rows))
            if _generic_certificate(alphas):
                return alphas
            rejections += 1
            rows = [None] * k
    raise GenericityFailure(f"no generic alpha matrix after {MAX_REJECTIONS} draws (delta={delta})")


# ---------------------------------------------------------------------------
# Quadratic phases for the product of two d-dimensional Riesz kernels.


def riesz_monomials(d: int) -> list[MultiIndex]:
    """Degree-2 monomials in x, t_1..t_d, s_1..s_d."""
    return enumerate_multi_indices(2 * d + 1, 2)


def riesz_retained(d: int) -> list[MultiIndex]:
    out = [MultiIndex((2,) + (0,) * (2 * d))]
    for i in range(d):
        e = [0] * (2 * d + 1)
        e[1 + i] = 1
        e[1 + d + i] = 1
        out.append(MultiIndex(tuple(e)))
    return out


def riesz_min_n(d: int) -> int:
    return len(riesz_monomials(d)) - len(riesz_retained(d)) + 1


def riesz_forms(spec: RieszPhaseSpec) -> np.ndarray:
    # variable coefficients of x - a_j.t - b_j.s
    return np.vstack([np.ones((1, spec.n)), -spec.A, -spec.B])


def solve_riesz_phase(spec: RieszPhaseSpec, tol_phase: float = TOL_PHASE) -> RieszPhase:
    """theta killing every quadratic monomial except x^2 and t_i s_i.

    Normalised so the t_1 s_1 coefficient is 1.
    """
    forms = riesz_forms(spec)
    retained = riesz_retained(spec.d)
    constrained = [a for a in riesz_monomials(spec.d) if a not in set(retained)]
    matrix = np.array([_linear_form_row(a, forms) for a in constrained])
    basis, rank = nullspace(matrix, spec.n)
    if rank < len(constrained):
        raise RankDeficient(f"rank {rank} < {len(constrained)}")
    if basis.shape[0] == 0:
        raise RankDeficient("trivial nullspace")
    diag_rows = np.array([_linear_form_row(a, forms) for a in retained[1:]])
    v = _pick(basis, diag_rows, tol_phase)
    theta = v / float(diag_rows[0] @ v)
    return RieszPhase(
        theta=theta,
        residual=float(np.max(np.abs(matrix @ theta))),
        rank=rank,
        diagonal_coefficients=diag_rows @ theta,
    )


def expand_polynomial_oracle(theta, alphas: AlphaMatrix) -> dict[MultiIndex, float]:
    """Coefficients of the phase polynomial by brute-force expansion.

    Multiplies out each k-th power factor by factor (every ordered choice of
    one variable per factor), with no multinomial formula involved.
    """
    theta = np.asarray(theta, dtype=float)
    k, n = alphas.k, alphas.n
    if theta.shape != (n,):
        raise ValueError("theta must have length n")
    coeffs: dict[MultiIndex, float] = {a: 0.0 for a in enumerate_multi_indices(k + 1, k)}
    for j in range(n):
        lin = [1.0] + ([1.0] * k if j == 0 else list(alphas.entries[:, j - 1]))
        for choice in itertools.product(range(k + 1), repeat=k):
            e = [0] * (k + 1)
            c = theta[j]
            for v in choice:
                e[v] += 1
                c *= lin[v]
            coeffs[MultiIndex(tuple(e))] += c
    return coeffs
