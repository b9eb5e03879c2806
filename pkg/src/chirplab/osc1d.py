"""One-dimensional oscillatory machinery.

Sine and cosine integrals, the averaging operator ``H f(x) = (1/x) int_0^x f``
applied repeatedly to ``F(u) = sin(u)/u``, and the reduction of the cube
integral of ``sin(t_1...t_k)/(t_1...t_k)`` to ``2^k int_0^{N^k} H^{k-1}F``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import special
from scipy.interpolate import CubicSpline

from .errors import GridTooCoarse, ResolutionTooCoarse
from .quadrature import gauss_legendre

EULER_GAMMA = 0.57721566490153286061
HALF_PI = 0.5 * math.pi

_SERIES_CUTOFF = 4.0
_SERIES_TERMS = 30
_CF_MAX_ITER = 400


def sinc(u):
    """sin(u)/u with sinc(0) = 1 (unnormalised, unlike ``numpy.sinc``)."""
    u = np.asarray(u, dtype=float)
    out = np.sinc(u / math.pi)
    return out if out.ndim else float(out)


def _sici_series(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # x > 0, x <= _SERIES_CUTOFF
    x2 = x * x
    si = np.zeros_like(x)
    ci = np.zeros_like(x)
    term = x.copy()  # x^(2n+1)/(2n+1)!
    cterm = np.ones_like(x)  # x^(2n)/(2n)!
    for n in range(_SERIES_TERMS):
        si += (-1) ** n * term / (2 * n + 1)
        if n:
            ci += (-1) ** n * cterm / (2 * n)
        term = term * x2 / ((2 * n + 2) * (2 * n + 3))
        cterm = cterm * x2 / ((2 * n + 1) * (2 * n + 2))
    with np.errstate(divide="ignore"):
        ci += EULER_GAMMA + np.log(x)
    return si, ci


def _sici_cf(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # x > 2: modified Lentz evaluation of the continued fraction for E1(ix)
    tiny = 1e-300
    b = 1.0 + 1j * x
    c = np.full(x.shape, 1.0 / tiny, dtype=complex)
    d = 1.0 / b
    h = d.copy()
    active = np.arange(x.size)
    for i in range(1, _CF_MAX_ITER):
        if not active.size:
            break
        a = -float(i * i)
        b[active] += 2.0
        d[active] = 1.0 / (a * d[active] + b[active])
        c[active] = b[active] + a / c[active]
        delta = c[active] * d[active]
        h[active] *= delta
        active = active[np.abs(delta - 1.0) > 1e-16]
    h = h * (np.cos(x) - 1j * np.sin(x))
    return HALF_PI + h.imag, -h.real


def sici_dual(x):
    """Independent ``(Si(x), Ci(|x|))``: power series below ``|x| = 4``,
    continued fraction of ``E1(ix)`` above.  Used to cross-check :func:`sici`.
    """
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    ax = np.abs(np.atleast_1d(x)).ravel()
    si = np.zeros_like(ax)
    ci = np.full_like(ax, -np.inf)
    small = (ax > 0) & (ax <= _SERIES_CUTOFF)
    big = ax > _SERIES_CUTOFF
    if small.any():
        si[small], ci[small] = _sici_series(ax[small])
    if big.any():
        si[big], ci[big] = _sici_cf(ax[big])
    si = np.copysign(si, np.atleast_1d(x).ravel())
    si = si.reshape(np.shape(x))
    ci = ci.reshape(np.shape(x))
    if scalar:
        return float(si), float(ci)
    return si, ci


def sici(x):
    """Return ``(Si(x), Ci(|x|))``; Si is odd, Ci is evaluated at ``|x|``."""
    x = np.asarray(x, dtype=float)
    si, ci = special.sici(np.abs(x))
    si = np.copysign(si, x)
    if x.ndim == 0:
        return float(si), float(ci)
    return si, ci


def sine_integral(x):
    """Si(x) = int_0^x sin(u)/u du."""
    return sici(x)[0]


def cosine_integral(x):
    """Ci(|x|) = gamma + ln|x| + int_0^|x| (cos u - 1)/u du."""
    return sici(x)[1]


def si_over_x(z):
    """Si(z)/z, continuous at z = 0 (value 1)."""
    z = np.asarray(z, dtype=float)
    out = np.ones_like(z)
    small = np.abs(z) < 1e-4
    zs = z[small]
    out[small] = 1.0 - zs * zs / 18.0
    zb = z[~small]
    out[~small] = sine_integral(zb) / zb
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# int_0^x Si(u)/u du, the cumulative integral of H F.

_G_SPLIT = 256.0
_G_PANEL = 0.5
_G_ORDER = 12


def _si_log_tail_antiderivative(u):
    # antiderivative of (f(u) cos u + g(u) sin u)/u from the asymptotic
    # expansions of the auxiliary functions; truncation error O(u^-6)
    s, c = np.sin(u), np.cos(u)
    u2 = u * u
    return s * (1.0 / u2 - 11.0 / (u2 * u2)) + c * (-3.0 / (u2 * u) + 50.0 / (u2 * u2 * u))


@lru_cache(maxsize=1)
def _g_split_value() -> float:
    return float(_g_direct(np.array([_G_SPLIT]))[0])


def _g_direct(x: np.ndarray) -> np.ndarray:
    # one cumulative sweep of Gauss-Legendre panels (width <= _G_PANEL) over [0, max x]
    x = np.asarray(x, dtype=float)
    if x.size == 0:
        return np.zeros(0)
    nodes, weights = gauss_legendre(_G_ORDER)
    top = float(x.max())
    grid = np.linspace(0.0, top, max(1, int(math.ceil(top / _G_PANEL))) + 1)
    edges = np.unique(np.concatenate([grid, x]))
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    u = mid[:, None] + half[:, None] * nodes[None, :]
    panel = (si_over_x(u) * weights).sum(axis=1) * half
    cum = np.concatenate([[0.0], np.cumsum(panel)])
    return cum[np.searchsorted(edges, x)]


def si_log_integral(x):
    """G(x) = int_0^x Si(u)/u du for x >= 0 (so H^2 F(x) = G(x)/x)."""
    x = np.asarray(x, dtype=float)
    xs = np.atleast_1d(x).ravel()
    out = np.empty_like(xs)
    lo = xs <= _G_SPLIT
    if lo.any():
        out[lo] = _g_direct(xs[lo])
    if (~lo).any():
        u = xs[~lo]
        out[~lo] = (
            _g_split_value()
            + HALF_PI * np.log(u / _G_SPLIT)
            - (_si_log_tail_antiderivative(u) - _si_log_tail_antiderivative(_G_SPLIT))
        )
    out = out.reshape(np.shape(x))
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# Iterated averages on a logarithmic grid.

X_MIN = 1e-3
DEFAULT_POINTS_PER_DECADE = 64
MAX_LEVEL = 7
_PANEL_ORDER = 8


def _series_values(level: int, x: np.ndarray) -> np.ndarray:
    # H^l F(x) = sum_n (-1)^n x^(2n) / ((2n+1)! (2n+1)^l)
    out = np.zeros_like(x)
    term = np.ones_like(x)
    for n in range(12):
        out += (-1) ** n * term / (2 * n + 1) ** level
        term = term * x * x / ((2 * n + 2) * (2 * n + 3))
    return out


def _series_integral(level: int, x: np.ndarray) -> np.ndarray:
    # int_0^x H^l F = x * H^(l+1) F(x)
    return x * _series_values(level + 1, x)


@dataclass(frozen=True)
class IteratedAverageTable:
    """Samples of H^l F on a log grid plus their running integrals.

    ``integrals[i]`` is int_0^{grid[i]} H^l F(u) du.
    """

    level: int
    grid: np.ndarray
    values: np.ndarray
    integrals: np.ndarray
    _spline: CubicSpline = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_spline", CubicSpline(np.log(self.grid), self.values))

    def __call__(self, x):
        """Piecewise-cubic (in ln x) interpolant; Taylor series below the grid."""
        x = np.asarray(x, dtype=float)
        out = np.where(
            x < self.grid[0],
            _series_values(self.level, np.minimum(x, self.grid[0])),
            self._spline(np.log(np.clip(x, self.grid[0], self.grid[-1]))),
        )
        return out if out.ndim else float(out)


def log_grid(x_max: float, points_per_decade: int, x_min: float = X_MIN) -> np.ndarray:
    if points_per_decade < 16:
        raise GridTooCoarse(f"points_per_decade={points_per_decade} < 16")
    x_max = max(float(x_max), x_min * 10)
    m = max(2, int(math.ceil(math.log10(x_max / x_min) * points_per_decade)) + 1)
    grid = np.exp(np.linspace(math.log(x_min), math.log(x_max), m))
    grid[0], grid[-1] = x_min, x_max
    return grid


def _cumulative(grid: np.ndarray, values: np.ndarray, level: int, exact=None) -> np.ndarray:
    """Running integral of H^l F over the grid, Gauss-Legendre per panel in ln x.

    ``exact`` (a callable) is integrated when available; otherwise the cubic
    spline of ``values`` in ln x is.
    """
    s = np.log(grid)
    fn = exact if exact is not None else (lambda u, sp=CubicSpline(s, values): sp(np.log(u)))
    nodes, weights = gauss_legendre(_PANEL_ORDER)
    half = 0.5 * np.diff(s)
    mid = 0.5 * (s[1:] + s[:-1])
    si = mid[:, None] + half[:, None] * nodes[None, :]
    u = np.exp(si)
    panel = (fn(u.ravel()).reshape(u.shape) * u * weights).sum(axis=1) * half
    head = _series_integral(level, grid[:1])
    return np.concatenate([head, head + np.cumsum(panel)])


@lru_cache(maxsize=64)
def _tables(max_level: int, x_max: float, points_per_decade: int) -> tuple[IteratedAverageTable, ...]:
    grid = log_grid(x_max, points_per_decade)
    si = sine_integral(grid)
    tables = []
    values = sinc(grid)
    integrals = si
    for level in range(max_level + 1):
        if level == 1:
            values = si / grid
            integrals = si_log_integral(grid)
        elif level >= 2:
            values = integrals / grid
            exact = (lambda u: si_log_integral(u) / u) if level == 2 else None
            integrals = _cumulative(grid, values, level, exact)
        tables.append(IteratedAverageTable(level, grid, values, integrals))
    return tuple(tables)


def iterated_average(l: int, x_max: float, points_per_decade: int = DEFAULT_POINTS_PER_DECADE) -> IteratedAverageTable:
    """Table of H^l F on ``[1e-3, x_max]``.

    Levels 0 and 1 come from closed forms (sinc and Si(x)/x) and level 2 from
    the closed form of int Si(u)/u; deeper levels integrate the previous
    level's interpolant panel by panel.
    """
    if l < 0 or l > MAX_LEVEL:
        raise ValueError(f"level must be in [0, {MAX_LEVEL}], got {l}")
    if x_max < 1:
        raise ValueError("x_max must be >= 1")
    return _tables(l, float(x_max), int(points_per_decade))[l]


def cube_integral(k: int, N: float, points_per_decade: int = DEFAULT_POINTS_PER_DECADE) -> float:
    """int over [-N, N]^k of sin(t_1...t_k)/(t_1...t_k), as 2^k int_0^{N^k} H^{k-1}F."""
    if k < 1 or k > 6:
        raise ValueError("k must be in 1..6")
    if N <= 0:
        return 0.0
    T = float(N) ** k
    if T < 1:
        return float(2**k * _series_integral(k - 1, np.array([T]))[0])
    table = iterated_average(k - 1, T, points_per_decade)
    return float(2**k * table.integrals[-1])


def brute_force_cube_integral(k: int, N: float, resolution: int = 1024, chunk: int = 1 << 22) -> float:
    """Midpoint tensor rule for 2^k int_{[0,N]^k} sin(prod t)/prod t."""
    if k not in (1, 2, 3):
        raise ValueError("brute force supports k in {1, 2, 3}")
    if N <= 0:
        return 0.0
    h = N / resolution
    if h > 0.25 / N ** (k - 1):
        raise ResolutionTooCoarse(f"spacing {h:.3g} exceeds 0.25/N^(k-1) = {0.25 / N ** (k - 1):.3g}")
    t = (np.arange(resolution) + 0.5) * h
    if k == 1:
        return float(2 * sinc(t).sum() * h)
    # iterate over the first axis in blocks, vectorise over the rest
    rest = t
    if k == 3:
        rest = np.multiply.outer(t, t).ravel()
    step = max(1, chunk // rest.size)
    total = 0.0
    for i in range(0, resolution, step):
        prod = np.multiply.outer(t[i : i + step], rest)
        total += float(sinc(prod).sum())
    return 2**k * total * h**k


def lower_bound_series(k: int, N_list, points_per_decade: int = DEFAULT_POINTS_PER_DECADE):
    """Rows ``(N, cube_integral(k, N), cube_integral / (ln N)^(k-1))``."""
    N_list = [float(n) for n in N_list]
    if any(b <= a for a, b in zip(N_list, N_list[1:])):
        raise ValueError("N_list must be strictly increasing")
    if N_list and N_list[0] < 10:
        raise ValueError("N_list must start at N >= 10")
    rows = []
    for N in N_list:
        v = cube_integral(k, N, points_per_decade)
        rows.append((N, v, v / math.log(N) ** (k - 1)))
    return rows
