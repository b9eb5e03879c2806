"""Integrals of ``sin(t_1...t_k)/(t_1...t_k)`` over strip polytopes.

Two routes share one closed form, ``int_0^Z sin(u)/u du = Si(Z)``:

* ``slice``: fix all but the last coordinate; with ``P = t_1...t_{k-1}`` the
  last coordinate integrates to ``(Si(P b) - Si(P a)) / P`` over the slice
  ``[a, b]``.  Outer coordinates are integrated adaptively.
* ``radial``: write ``t = r w`` with ``w`` on a face of the unit sup-norm
  sphere.  Then ``dt = r^{k-1} dr dw`` and the ray integral up to the exit
  radius ``R(w)`` is ``Si(c R^k) / (k c)`` with ``c = prod(w)``.  This leaves
  a (k-1)-dimensional integral whose only fast structure is a ridge along
  the coordinate hyperplanes, handled by geometric breakpoints.

Both are written in terms of ``S(z) = Si(z)/z`` so every removable
singularity is evaluated at its limit.

The module also holds the direct principal-value oracle for the kernel
representation of the multilinear operator (tensor midpoint grid).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.spatial import ConvexHull

from .errors import OriginNotInterior, ResolutionTooCoarse
from .geometry import (
    SupportPolytope,
    Strip,
    circumscribed_box,
    inscribed_cube_side,
    slice_intervals,
)
from .osc1d import cube_integral, si_over_x, sici
from .phase import AlphaMatrix
from .quadrature import adaptive_gk, adaptive_gk_batch

ASYMPTOTIC_SWITCH = 318.5 * math.pi
_RIDGE_FLOOR = 1e-2  # geometric refinement stops at this multiple of the ridge width


@dataclass(frozen=True)
class QuadSpec:
    """Accuracy controls for the polytope integrators.

    ``outer_points_per_unit_oscillation`` sets the initial panel density
    (points per 2*pi of phase) before adaptive bisection; the number of
    initial panels per segment is capped at ``initial_panel_cap``.

    ``asymptotic_switch`` (radial route only): for ``|z|`` above it,
    ``Si(z)/z`` is replaced by ``(pi/2)/|z|``, dropping the oscillatory
    remainder ``O(cos z / z)``.  ``None`` (the default) keeps every term;
    ``ASYMPTOTIC_SWITCH`` sits at a zero of ``cos`` so the switch is
    continuous to ``O(Z0^-3)``, and shifts results by about 1e-6.
    """

    outer_points_per_unit_oscillation: int = 16
    abs_tol: float = 1e-8
    max_subdivisions: int = 400_000
    rel_tol: float = 1e-10
    initial_panel_cap: int = 2048
    asymptotic_switch: float | None = None

    def __post_init__(self):
        if int(self.outer_points_per_unit_oscillation) < 8:
            raise ValueError("outer_points_per_unit_oscillation must be >= 8")
        if not (self.abs_tol > 0 and self.max_subdivisions > 0 and self.rel_tol >= 0 and self.initial_panel_cap > 0):
            raise ValueError("QuadSpec fields must be positive")
        if self.asymptotic_switch is not None and self.asymptotic_switch <= 0:
            raise ValueError("asymptotic_switch must be positive or None")


@dataclass(frozen=True)
class ChirpSpec:
    """``amplitude * chi_N(y) * exp(i * phase_coefficient * y**degree)`` with a sharp cutoff."""

    phase_coefficient: float
    degree: int
    N: float
    amplitude: complex = 1.0

    def __post_init__(self):
        if not self.N > 0:
            raise ValueError("chirp cutoff N must be positive")
        if self.degree < 1:
            raise ValueError("chirp degree must be >= 1")

    def __call__(self, y):
        y = np.asarray(y, dtype=float)
        inside = np.abs(y) <= self.N
        return self.amplitude * inside * np.exp(1j * self.phase_coefficient * y**self.degree)


# ---------------------------------------------------------------------------
# shared helpers


def _ray_exit(G: np.ndarray, h: np.ndarray, dirs: np.ndarray) -> np.ndarray:
    """Exit radius along each row of ``dirs`` for ``{G t <= h}`` with h > 0."""
    # maximise (g . w)/h over rows; the exit radius is its reciprocal
    return 1.0 / (dirs @ (G / h[:, None]).T).max(axis=-1)


def _si_ratio(z: np.ndarray, switch: float | None) -> np.ndarray:
    """``Si(z)/z``, or its non-oscillatory part ``(pi/2)/|z|`` beyond ``switch``."""
    if switch is None:
        return si_over_x(z)
    out = np.empty_like(z)
    far = np.abs(z) > switch
    out[far] = (0.5 * math.pi) / np.abs(z[far])
    out[~far] = si_over_x(z[~far])
    return out


def _geometric(lo: float, hi: float = 1.0) -> np.ndarray:
    """Powers of ten in ``[lo, hi]`` (always includes hi)."""
    if lo >= hi:
        return np.array([hi])
    j = np.arange(0, int(math.ceil(math.log10(hi / lo))) + 1)
    return hi * 10.0 ** (-j)


def _refine(breaks: np.ndarray, rate: float, spec: QuadSpec) -> np.ndarray:
    """Split segments so each 15-point panel sees ~ppo points per 2*pi of phase."""
    breaks = np.unique(breaks)
    out = [breaks[:1]]
    for a, b in zip(breaks[:-1], breaks[1:]):
        m = int(math.ceil((b - a) * rate / (2 * math.pi) * spec.outer_points_per_unit_oscillation / 15.0))
        m = min(max(m, 1), spec.initial_panel_cap)
        out.append(np.linspace(a, b, m + 1)[1:])
    return np.concatenate(out)


def _check_k(polytope: SupportPolytope, allowed: Sequence[int]):
    if polytope.k not in allowed:
        raise ValueError(f"k must be one of {tuple(allowed)}, got {polytope.k}")


def _faces(k: int):
    for m in range(k):
        for sigma in (1.0, -1.0):
            yield m, sigma, [i for i in range(k) if i != m]


def _face_coordinates(vertices: np.ndarray, m: int, sigma: float, others) -> np.ndarray:
    """Coordinates on face (m, sigma) of the directions of ``vertices``."""
    if vertices.size == 0:
        return np.zeros((0, len(others)))
    sup = np.abs(vertices).max(axis=1)
    on = (sigma * vertices[:, m] >= sup * (1 - 1e-12)) & (sup > 0)
    v = vertices[on]
    return v[:, others] / (sigma * v[:, m])[:, None]


# ---------------------------------------------------------------------------
# radial route


def _radial_integrand(k: int, G, h, inner_side: float | None, switch: float | None):
    """``R^k S(c R^k)`` minus the same for the cube of half-side ``inner_side``."""

    def value(dirs: np.ndarray) -> np.ndarray:
        c = np.prod(dirs, axis=-1)
        Rk = _ray_exit(G, h, dirs) ** k
        out = Rk * _si_ratio(c * Rk, switch)
        if inner_side is not None:
            ck = inner_side**k
            out = out - ck * _si_ratio(c * ck, switch)
        return out

    return value


def _radial(polytope: SupportPolytope, spec: QuadSpec, inner_side: float | None = None) -> float:
    k = polytope.k
    G, h = polytope.halfspaces()
    if np.any(h <= 0):
        raise OriginNotInterior("radial route needs the origin strictly inside every strip")
    verts = polytope.vertices()
    Rk_max = float(np.abs(verts).max()) ** k if verts.size else 0.0
    if Rk_max == 0.0:
        return 0.0
    value = _radial_integrand(k, G, h, inner_side, spec.asymptotic_switch)
    ridge = _geometric(_RIDGE_FLOOR / Rk_max)
    # t -> -t maps face (m, +) onto (m, -) and leaves the integrand unchanged
    symmetric = polytope.is_centrally_symmetric()
    total = 0.0
    for m, sigma, others in _faces(k):
        if symmetric and sigma < 0:
            continue
        kinks = _face_coordinates(verts, m, sigma, others)
        if k == 2:
            def f(p, m=m, sigma=sigma, others=others):
                dirs = np.empty((p.size, 2))
                dirs[:, m] = sigma
                dirs[:, others[0]] = p
                return value(dirs)

            breaks = np.concatenate([[-1.0, 0.0, 1.0], ridge, -ridge, kinks[:, 0]])
            breaks = _refine(breaks[(breaks >= -1) & (breaks <= 1)], Rk_max, spec)
            res = adaptive_gk(f, breaks, spec.abs_tol / 4, spec.rel_tol, spec.max_subdivisions)
            total += float(res.value)
        else:
            total += _radial_face_3d(value, m, sigma, others, kinks, Rk_max, ridge, spec)
    return (2.0 if symmetric else 1.0) * total / k


def _radial_face_3d(value, m, sigma, others, kinks, Rk_max, ridge, spec: QuadSpec) -> float:
    template = np.concatenate([-ridge, [0.0], ridge[::-1]])  # ascending from -1 to 1
    inner_tol = spec.abs_tol / 8

    def F(p: np.ndarray) -> np.ndarray:
        # per-node ridge width in q is 1 / (|p| R^k); drop finer breakpoints
        floor = _RIDGE_FLOOR / np.maximum(np.abs(p) * Rk_max, 1e-300)
        tb = np.where(np.abs(template)[None, :] >= np.minimum(floor, 1.0)[:, None], template[None, :], 0.0)
        tb[:, 0], tb[:, -1] = -1.0, 1.0
        a = tb[:, :-1].ravel()
        b = tb[:, 1:].ravel()
        owner = np.repeat(np.arange(p.size), template.size - 1)

        def g(own, q):
            dirs = np.empty((q.size, 3))
            dirs[:, m] = sigma
            dirs[:, others[0]] = p[own]
            dirs[:, others[1]] = q
            return value(dirs)

        vals, _ = adaptive_gk_batch(g, a, b, owner, p.size, inner_tol, spec.rel_tol, 5 * spec.max_subdivisions)
        return vals

    breaks = np.concatenate([[-1.0, 0.0, 1.0], ridge, -ridge, kinks[:, 0]])
    breaks = np.unique(breaks[(breaks >= -1) & (breaks <= 1)])
    res = adaptive_gk(F, breaks, spec.abs_tol / 4, spec.rel_tol, spec.max_subdivisions)
    return float(res.value)


# ---------------------------------------------------------------------------
# slice route


def _slice_closure(lo: np.ndarray, hi: np.ndarray, P: np.ndarray, mixed: float = 1.0) -> np.ndarray:
    """``int_lo^hi sin(mixed P s)/(P s) ds`` written as ``mixed (hi S(mixed P hi) - lo S(mixed P lo))``."""
    empty = ~(hi > lo)
    lo = np.where(empty, 0.0, lo)
    hi = np.where(empty, 0.0, hi)
    return mixed * (hi * si_over_x(mixed * P * hi) - lo * si_over_x(mixed * P * lo))


def _slice_2d(polytope: SupportPolytope, spec: QuadSpec, positive_orthant: bool = False,
              quadratic: float = 0.0, mixed: float = 1.0):
    verts = polytope.vertices()
    if verts.size == 0:
        return 0.0
    t_lo, t_hi = verts[:, 0].min(), verts[:, 0].max()
    if positive_orthant:
        t_lo = max(t_lo, 0.0)
    R = float(np.abs(verts).max())
    ridge = _geometric(_RIDGE_FLOOR / R, R)
    complex_out = quadratic != 0.0

    def f(t):
        lo, hi = slice_intervals(polytope, t[:, None])
        if positive_orthant:
            lo = np.maximum(lo, 0.0)
        out = _slice_closure(lo, hi, t, mixed)
        if complex_out:
            out = out * np.exp(1j * quadratic * t * t)
        return out

    breaks = np.concatenate([[t_lo, t_hi, 0.0], ridge, -ridge, verts[:, 0]])
    breaks = breaks[(breaks >= t_lo) & (breaks <= t_hi)]
    rate = abs(mixed) * R + 2 * abs(quadratic) * R
    breaks = _refine(breaks, rate, spec)
    res = adaptive_gk(f, breaks, spec.abs_tol / 2, spec.rel_tol, spec.max_subdivisions)
    return res.value if complex_out else float(res.value)


def _projection_halfplanes(verts: np.ndarray) -> SupportPolytope:
    """The (t1, t2) shadow of a 3-D polytope as a 2-D polytope."""
    hull = ConvexHull(verts[:, :2])
    eq = hull.equations  # a t1 + b t2 + c <= 0
    strips = []
    for a, b, c in eq:
        # one-sided constraints as strips with a huge opposite bound
        strips.append(Strip(np.array([a, b]), -1e300, -c))
    return SupportPolytope(2, tuple(strips))


def _slice_3d(polytope: SupportPolytope, spec: QuadSpec, positive_orthant: bool = False) -> float:
    verts = polytope.vertices()
    if verts.size == 0:
        return 0.0
    shadow = _projection_halfplanes(verts)
    R = float(np.abs(verts).max())
    t1_lo, t1_hi = verts[:, 0].min(), verts[:, 0].max()
    if positive_orthant:
        t1_lo = max(t1_lo, 0.0)
    ridge = _geometric(_RIDGE_FLOOR / R**2, R)
    template = np.concatenate([-ridge, [0.0], ridge[::-1]])
    inner_tol = spec.abs_tol / (8 * max(t1_hi - t1_lo, 1.0))

    def F(t1):
        lo2, hi2 = slice_intervals(shadow, t1[:, None])
        if positive_orthant:
            lo2 = np.maximum(lo2, 0.0)
        hi2 = np.maximum(hi2, lo2)
        tb = np.clip(template[None, :], lo2[:, None], hi2[:, None])
        a = tb[:, :-1].ravel()
        b = tb[:, 1:].ravel()
        owner = np.repeat(np.arange(t1.size), template.size - 1)

        def g(own, t2):
            pre = np.stack([t1[own], t2], axis=1)
            lo, hi = slice_intervals(polytope, pre)
            if positive_orthant:
                lo = np.maximum(lo, 0.0)
            return _slice_closure(lo, hi, t1[own] * t2)

        vals, _ = adaptive_gk_batch(g, a, b, owner, t1.size, inner_tol, spec.rel_tol, 5 * spec.max_subdivisions)
        return vals

    breaks = np.concatenate([[t1_lo, t1_hi, 0.0], ridge, -ridge, verts[:, 0]])
    breaks = np.unique(breaks[(breaks >= t1_lo) & (breaks <= t1_hi)])
    res = adaptive_gk(F, breaks, spec.abs_tol / 4, spec.rel_tol, spec.max_subdivisions)
    return float(res.value)


# ---------------------------------------------------------------------------
# public operations


def sinprod_over_polytope(polytope: SupportPolytope, spec: QuadSpec | None = None, method: str = "auto") -> float:
    """``int_D sin(t_1...t_k)/(t_1...t_k) dt`` for k in {1, 2, 3}.

    ``method`` is ``"slice"`` (closed-form innermost coordinate, adaptive
    outer ones), ``"radial"`` (closed-form ray integrals, needs the origin
    inside), or ``"auto"`` (radial when the origin is interior, else slice).
    An empty polytope integrates to 0.
    """
    spec = spec or QuadSpec()
    _check_k(polytope, (1, 2, 3))
    if method not in ("auto", "slice", "radial"):
        raise ValueError(f"unknown method {method!r}")
    if polytope.k == 1:
        verts = polytope.vertices()
        if verts.size == 0:
            return 0.0
        return float(_slice_closure(np.array([verts.min()]), np.array([verts.max()]), np.array([1.0]))[0])
    if method == "auto":
        method = "radial" if polytope.origin_interior() else "slice"
    if method == "radial":
        return _radial(polytope, spec)
    if polytope.k == 2:
        return _slice_2d(polytope, spec)
    return _slice_3d(polytope, spec)


def sinprod_positive_orthant(polytope: SupportPolytope, spec: QuadSpec | None = None) -> float:
    """Same integral restricted to ``t_i >= 0`` (slice route)."""
    spec = spec or QuadSpec()
    _check_k(polytope, (2, 3))
    if polytope.k == 2:
        return _slice_2d(polytope, spec, positive_orthant=True)
    return _slice_3d(polytope, spec, positive_orthant=True)


def chirp_sin_part(polytope: SupportPolytope, quadratic: float, mixed: float, spec: QuadSpec | None = None) -> complex:
    """``int_D exp(i q t^2) sin(m t s)/(t s) dt ds`` for k = 2 (slice route).

    This is the sine half of the kernel integral when the combined phase is
    ``q t^2 + m t s``; with ``q = 0`` and ``m = 1`` it equals
    :func:`sinprod_over_polytope`.
    """
    spec = spec or QuadSpec()
    _check_k(polytope, (2,))
    return complex(_slice_2d(polytope, spec, quadratic=quadratic, mixed=mixed))


def complement_integral(polytope: SupportPolytope, spec: QuadSpec | None = None) -> float:
    """Integral over ``D`` minus the integral over its inscribed cube.

    Evaluated as one radial integral of the difference of the two ray
    closures, which avoids cancelling two large numbers.  Equal to
    ``sinprod_over_polytope(D) - cube_integral(k, c)`` with ``c`` the
    inscribed half-side.
    """
    spec = spec or QuadSpec()
    _check_k(polytope, (2, 3))
    c = inscribed_cube_side(polytope)
    return _radial(polytope, spec, inner_side=c)


def complement_integral_direct(polytope: SupportPolytope, spec: QuadSpec | None = None) -> float:
    """The literal difference ``sinprod_over_polytope(D) - cube_integral(k, c)``."""
    spec = spec or QuadSpec()
    _check_k(polytope, (2, 3))
    c = inscribed_cube_side(polytope)
    return sinprod_over_polytope(polytope, spec) - cube_integral(polytope.k, c)


def dyadic_shell_decomposition(polytope: SupportPolytope, spec: QuadSpec | None = None) -> list[tuple[int, float]]:
    """Split ``D`` into ``D`` cut to the unit sup-norm ball (label -1) and the
    dyadic shells ``2^d < |t|_inf <= 2^{d+1}`` (label d).

    Shell integrals are differences of box-truncated integrals; the pieces
    sum to the whole integral.
    """
    spec = spec or QuadSpec()
    _check_k(polytope, (2, 3))
    R = float(np.abs(circumscribed_box(polytope)).max())
    top = max(int(math.ceil(math.log2(R))), 0) if R > 1 else 0
    prev = sinprod_over_polytope(polytope.with_box(1.0), spec)
    pieces = [(-1, prev)]
    for d in range(top):
        cur = sinprod_over_polytope(polytope.with_box(2.0 ** (d + 1)), spec)
        pieces.append((d, cur - prev))
        prev = cur
    return pieces


# ---------------------------------------------------------------------------
# principal-value oracle


def _chirp_polytope(k: int, alphas: AlphaMatrix, chirps: Sequence[ChirpSpec], x: float) -> SupportPolytope:
    normals = [np.ones(k)] + [alphas.column(j) for j in range(1, alphas.n)]
    strips = tuple(Strip(b, -c.N - x, c.N - x) for b, c in zip(normals, chirps))
    return SupportPolytope(k, strips, float(x), float(max(c.N for c in chirps)), alphas)


def oracle_max_spacing(k: int, chirps: Sequence[ChirpSpec], half_width: float) -> float:
    """Largest grid spacing the oracle accepts for box half-width ``C_1 N``."""
    fastest = max(abs(c.phase_coefficient) for c in chirps)
    if fastest == 0:
        return 0.25
    return min(0.25 / (k * fastest * half_width ** (k - 1)), 0.25)


def oracle_min_resolution(k: int, alphas: AlphaMatrix, chirps: Sequence[ChirpSpec], x: float = 0.0) -> int:
    half = float(np.abs(circumscribed_box(_chirp_polytope(k, alphas, chirps, x))).max())
    return int(math.ceil(half / oracle_max_spacing(k, chirps, half)))


def pv_tensor_oracle(
    k: int,
    alphas: AlphaMatrix,
    chirps: Sequence[ChirpSpec],
    x: float,
    resolution: int,
    chunk: int = 1 << 21,
) -> complex:
    """Principal-value kernel sum ``(-1)^k/(i pi)^k sum f_0(x + sum t) prod_j f_j(x + alpha_j . t) / prod t``.

    The grid is the midpoint grid with ``resolution`` nodes per half-axis
    over the circumscribed box of the cutoff supports, symmetric about 0
    and with no node at 0, so each ``1/t_i`` is sampled antisymmetrically.
    """
    if k not in (1, 2):
        raise ValueError("pv_tensor_oracle supports k in {1, 2}")
    if alphas.k != k or len(chirps) != alphas.n:
        raise ValueError("need one chirp per strip (n chirps) and a k-row alpha matrix")
    if resolution < 1:
        raise ResolutionTooCoarse("resolution must be at least 1")
    poly = _chirp_polytope(k, alphas, chirps, x)
    half = float(np.abs(circumscribed_box(poly)).max())
    h = half / resolution
    if h > oracle_max_spacing(k, chirps, half) * (1 + 1e-12):
        raise ResolutionTooCoarse(
            f"spacing {h:.3e} exceeds {oracle_max_spacing(k, chirps, half):.3e}; "
            f"need resolution >= {int(math.ceil(half / oracle_max_spacing(k, chirps, half)))}"
        )
    nodes = (np.arange(-resolution, resolution) + 0.5) * h
    A = np.vstack([np.ones(k)] + [alphas.column(j) for j in range(1, alphas.n)])  # (n, k)
    prefactor = (-1) ** k / (1j * math.pi) ** k
    if k == 1:
        y = x + A[:, 0][:, None] * nodes[None, :]
        prod = np.ones(nodes.size, dtype=complex)
        for c, row in zip(chirps, y):
            prod *= c(row)
        return complex(prefactor * (prod / nodes).sum() * h)
    total = 0.0 + 0.0j
    rows = max(1, chunk // nodes.size)
    for start in range(0, nodes.size, rows):
        t = nodes[start:start + rows][:, None]
        s = nodes[None, :]
        prod = np.ones((t.shape[0], nodes.size), dtype=complex)
        for c, (a1, a2) in zip(chirps, A):
            prod *= c(x + a1 * t + a2 * s)
        total += (prod / (t * s)).sum()
    return complex(prefactor * total * h * h)


# ---------------------------------------------------------------------------
# k = 2, n = 4: the Fresnel-type integral left after the inner closed form


def _fresnel_split(alpha: float) -> float:
    # e^{i alpha t^2} makes ~200 turns on [0, split]
    return math.sqrt(2 * math.pi * 200 / abs(alpha))


def truncated_fresnel(alpha: float, beta: float, cutoff: float, spec: QuadSpec | None = None) -> complex:
    """``J = int_0^L exp(i alpha t^2) sgn(beta) Si(|beta| t L) / t dt`` with ``L = cutoff``.

    This is what remains of ``int int_{[-L, L]^2} exp(i alpha t^2 + i beta t s) dt/t ds/s``
    after the inner principal value ``p.v. int exp(i beta t s) ds/s = 2i sgn(beta t) Si(|beta t| L)``;
    the double integral equals ``4i J``.

    ``[0, T]`` with ``T = min(L, sqrt(400 pi/|alpha|))`` is integrated directly.
    On ``[T, L]``, ``Si`` is replaced by ``pi/2`` and the rest has the closed form
    ``(pi/4) [E1-type difference]``; the dropped remainder is ``O(1/(|beta| L^2 T))``.
    """
    spec = spec or QuadSpec()
    if alpha == 0:
        raise ValueError("alpha must be nonzero")
    if beta == 0 or cutoff <= 0:
        return 0j
    b = abs(beta)
    sgn = math.copysign(1.0, beta)
    T = min(cutoff, _fresnel_split(alpha))

    def f(t):
        return np.exp(1j * alpha * t * t) * b * cutoff * si_over_x(b * cutoff * t)

    ridge = _geometric(_RIDGE_FLOOR / (b * cutoff), T)
    breaks = _refine(np.concatenate([[0.0, T], ridge]), 2 * abs(alpha) * T, spec)
    head = adaptive_gk(f, breaks, spec.abs_tol, spec.rel_tol, spec.max_subdivisions).value
    tail = 0j
    if cutoff > T:
        lo, hi = abs(alpha) * T * T, abs(alpha) * cutoff * cutoff
        si_hi, ci_hi = sici(hi)
        si_lo, ci_lo = sici(lo)
        # int_T^L e^{i|alpha| t^2}/t dt = (1/2) int e^{iv}/v dv = (1/2)[Ci + i Si]
        part = 0.5 * complex(ci_hi - ci_lo, si_hi - si_lo)
        if alpha < 0:
            part = part.conjugate()
        tail = 0.5 * math.pi * part
    return complex(sgn * (head + tail))


def truncated_fresnel_direct(alpha: float, beta: float, cutoff: float, spec: QuadSpec | None = None) -> complex:
    """Same integral with no asymptotic replacement (for moderate ``alpha * cutoff^2``)."""
    spec = spec or QuadSpec()
    b = abs(beta)

    def f(t):
        return np.exp(1j * alpha * t * t) * b * cutoff * si_over_x(b * cutoff * t)

    ridge = _geometric(_RIDGE_FLOOR / (b * cutoff), cutoff)
    breaks = _refine(np.concatenate([[0.0, cutoff], ridge]), 2 * abs(alpha) * cutoff + b * cutoff, spec)
    return complex(math.copysign(1.0, beta) * adaptive_gk(f, breaks, spec.abs_tol, spec.rel_tol, spec.max_subdivisions).value)
