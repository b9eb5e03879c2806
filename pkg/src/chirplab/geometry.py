"""Strips and their intersections in R^k.

The sharp cutoffs of the counterexample restrict the kernel integral to
``D_x = {t : -N <= x + beta . t <= N for every strip normal beta}``, an
intersection of n strips.  Vertex enumeration is exhaustive, which is fine
for k <= 3.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import OriginNotInterior, Unbounded
from .phase import AlphaMatrix


@dataclass(frozen=True)
class Strip:
    beta: np.ndarray
    lower: float
    upper: float

    def __post_init__(self):
        beta = np.array(self.beta, dtype=float).ravel()
        beta.setflags(write=False)
        object.__setattr__(self, "beta", beta)
        if not self.lower < self.upper:
            raise ValueError(f"strip bounds must satisfy lower < upper, got [{self.lower}, {self.upper}]")

    def contains(self, points: np.ndarray) -> np.ndarray:
        v = np.asarray(points, dtype=float) @ self.beta
        return (v >= self.lower) & (v <= self.upper)


@dataclass(frozen=True)
class SupportPolytope:
    k: int
    strips: tuple[Strip, ...]
    x: float = 0.0
    N: float = 0.0
    alphas: AlphaMatrix | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "strips", tuple(self.strips))
        for s in self.strips:
            if s.beta.size != self.k:
                raise ValueError("strip dimension does not match k")

    @property
    def normals(self) -> np.ndarray:
        return np.array([s.beta for s in self.strips])

    @property
    def lowers(self) -> np.ndarray:
        return np.array([s.lower for s in self.strips])

    @property
    def uppers(self) -> np.ndarray:
        return np.array([s.upper for s in self.strips])

    def halfspaces(self) -> tuple[np.ndarray, np.ndarray]:
        """``(G, h)`` with the polytope equal to ``{t : G t <= h}``."""
        B = self.normals
        return np.vstack([B, -B]), np.concatenate([self.uppers, -self.lowers])

    def contains(self, points) -> np.ndarray:
        p = np.atleast_2d(np.asarray(points, dtype=float))
        v = p @ self.normals.T
        return np.all((v >= self.lowers) & (v <= self.uppers), axis=1)

    def origin_interior(self) -> bool:
        return bool(np.all(self.lowers < 0) and np.all(self.uppers > 0))

    def is_centrally_symmetric(self) -> bool:
        return bool(np.allclose(self.lowers, -self.uppers))

    def with_box(self, radius: float) -> "SupportPolytope":
        """Intersection with the sup-norm ball ``[-radius, radius]^k``."""
        extra = tuple(Strip(np.eye(self.k)[i], -radius, radius) for i in range(self.k))
        return replace(self, strips=self.strips + extra)

    def section(self, t1: float) -> "SupportPolytope | None":
        """The (k-1)-dimensional slice at fixed first coordinate, or None if empty."""
        strips = []
        for s in self.strips:
            rest = s.beta[1:]
            lo, hi = s.lower - s.beta[0] * t1, s.upper - s.beta[0] * t1
            if np.all(rest == 0):
                if lo > 0 or hi < 0:
                    return None
                continue
            if not lo < hi:
                return None
            strips.append(Strip(rest, lo, hi))
        poly = SupportPolytope(self.k - 1, tuple(strips), self.x, self.N)
        if self.k - 1 >= 1 and poly.vertices().size == 0:
            return None
        return poly

    def vertices(self) -> np.ndarray:
        return _vertices(self)


def support_polytope(x: float, alphas: AlphaMatrix, N: float) -> SupportPolytope:
    """Support of the cutoff product at evaluation point x.

    One strip with normal (1, ..., 1) from ``chi_N(x + t_1 + ... + t_k)`` and
    one per column of the alpha matrix, all with bounds ``[-N - x, N - x]``.
    """
    if N <= 0:
        raise ValueError("N must be positive")
    normals = [np.ones(alphas.k)] + [alphas.column(j) for j in range(1, alphas.n)]
    strips = tuple(Strip(b, -N - x, N - x) for b in normals)
    return SupportPolytope(alphas.k, strips, float(x), float(N), alphas)


def cube_polytope(k: int, half_side: float) -> SupportPolytope:
    return SupportPolytope(k, tuple(Strip(np.eye(k)[i], -half_side, half_side) for i in range(k)), 0.0, half_side)


def slice_interval(polytope: SupportPolytope, prefix) -> tuple[float, float] | None:
    """Interval of the last coordinate with the first k-1 fixed, or None."""
    prefix = np.asarray(prefix, dtype=float).reshape(1, -1)
    if prefix.shape[1] != polytope.k - 1:
        raise ValueError("prefix must fix exactly k-1 coordinates")
    lo, hi = slice_intervals(polytope, prefix)
    if lo[0] > hi[0]:
        return None
    return float(lo[0]), float(hi[0])


def slice_intervals(polytope: SupportPolytope, prefixes: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised :func:`slice_interval`; empty slices have ``lo > hi``."""
    prefixes = np.asarray(prefixes, dtype=float)
    B = polytope.normals
    head = prefixes @ B[:, :-1].T if polytope.k > 1 else np.zeros((prefixes.shape[0], B.shape[0]))
    last = B[:, -1]
    a = polytope.lowers - head
    b = polytope.uppers - head
    lo = np.full(prefixes.shape[0], -np.inf)
    hi = np.full(prefixes.shape[0], np.inf)
    for j, c in enumerate(last):
        if c > 0:
            lo = np.maximum(lo, a[:, j] / c)
            hi = np.minimum(hi, b[:, j] / c)
        elif c < 0:
            lo = np.maximum(lo, b[:, j] / c)
            hi = np.minimum(hi, a[:, j] / c)
        else:
            bad = (a[:, j] > 0) | (b[:, j] < 0)
            lo = np.where(bad, np.inf, lo)
            hi = np.where(bad, -np.inf, hi)
    return lo, hi


def inscribed_cube_side(polytope: SupportPolytope) -> float:
    """Largest c with [-c, c]^k inside every strip: min over strips of min(-a, b)/|beta|_1."""
    if not polytope.origin_interior():
        raise OriginNotInterior("origin is not interior to every strip")
    l1 = np.abs(polytope.normals).sum(axis=1)
    return float(np.min(np.minimum(-polytope.lowers, polytope.uppers) / l1))


def _vertices(polytope: SupportPolytope) -> np.ndarray:
    k = polytope.k
    B = polytope.normals
    if np.linalg.matrix_rank(B) < k:
        raise Unbounded("strip normals do not span R^k; the intersection is unbounded")
    G, h = polytope.halfspaces()
    combos = np.array(list(itertools.combinations(range(G.shape[0]), k)))
    A = G[combos]
    rhs = h[combos]
    det = np.linalg.det(A)
    scale = np.prod(np.linalg.norm(A, axis=2), axis=1)
    ok = np.abs(det) > 1e-12 * scale
    if not ok.any():
        return np.zeros((0, k))
    pts = np.linalg.solve(A[ok], rhs[ok][..., None])[..., 0]
    slack = 1e-9 * (1.0 + np.abs(h).max())
    feasible = np.all(pts @ G.T <= h + slack, axis=1)
    pts = pts[feasible]
    if pts.size == 0:
        return pts.reshape(0, k)
    pts = np.unique(np.round(pts, 9), axis=0)
    return pts


def circumscribed_box(polytope: SupportPolytope) -> np.ndarray:
    """Per-coordinate ``[min, max]`` over the polytope, shape (k, 2)."""
    v = polytope.vertices()
    if v.size == 0:
        raise Unbounded("empty polytope has no bounding box")
    return np.stack([v.min(axis=0), v.max(axis=0)], axis=1)
