import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import linprog

from chirplab.errors import OriginNotInterior, Unbounded
from chirplab.geometry import (
    Strip,
    SupportPolytope,
    circumscribed_box,
    cube_polytope,
    inscribed_cube_side,
    slice_interval,
    slice_intervals,
    support_polytope,
)
from chirplab.phase import sample_generic_alphas


def lp_box(poly):
    """Per-coordinate bounds by linear programming (independent of vertex enumeration)."""
    G, h = poly.halfspaces()
    out = []
    for i in range(poly.k):
        c = np.zeros(poly.k)
        c[i] = 1
        lo = linprog(c, A_ub=G, b_ub=h, bounds=[(None, None)] * poly.k).fun
        hi = -linprog(-c, A_ub=G, b_ub=h, bounds=[(None, None)] * poly.k).fun
        out.append((lo, hi))
    return np.array(out)


def test_symmetric_at_zero():
    P = support_polytope(0.0, sample_generic_alphas(2, 5, seed=1), 7.0)
    assert np.all(P.lowers == -7.0) and np.all(P.uppers == 7.0)
    assert P.is_centrally_symmetric()


def test_origin_interior_n4():
    assert support_polytope(0.0, sample_generic_alphas(2, 4, seed=1), 10.0).origin_interior()


@pytest.mark.parametrize("frac", [0.05, -0.05, 0.03])
def test_window_points_keep_cube(frac):
    P = support_polytope(frac * 100, sample_generic_alphas(2, 5, seed=1), 100.0)
    assert inscribed_cube_side(P) > 0


def test_nonpositive_N_rejected():
    with pytest.raises(ValueError):
        support_polytope(0.0, sample_generic_alphas(2, 5, seed=1), 0.0)


def test_strip_bounds_validated():
    with pytest.raises(ValueError):
        Strip(np.array([1.0, 0.0]), 1.0, 1.0)


def test_slice_single_strip():
    P = SupportPolytope(2, (Strip(np.array([1.0, 1.0]), -10, 10),))
    assert slice_interval(P, [3.0]) == (-13.0, 7.0)


def test_slice_outside_box_empty():
    P = support_polytope(0.0, sample_generic_alphas(2, 5, seed=1), 10.0)
    box = circumscribed_box(P)
    assert slice_interval(P, [box[0, 1] + 1.0]) is None


def test_slice_at_origin_contains_zero():
    P = support_polytope(0.0, sample_generic_alphas(3, 19, seed=1), 10.0)
    lo, hi = slice_interval(P, [0.0, 0.0])
    assert lo < 0 < hi


def test_slice_prefix_length_checked():
    with pytest.raises(ValueError):
        slice_interval(cube_polytope(3, 1.0), [0.0])


def test_inscribed_single_strip():
    P = SupportPolytope(2, (Strip(np.array([1.0, 1.0]), -10, 10),))
    assert inscribed_cube_side(P) == 5.0


def test_inscribed_generic_by_corner_sampling():
    P = support_polytope(0.0, sample_generic_alphas(2, 4, seed=1), 10.0)
    c = inscribed_cube_side(P)
    assert 0 < c <= 10
    rng = np.random.default_rng(0)
    signs = rng.choice([-1.0, 1.0], size=(2000, 2))
    assert P.contains(signs * c * (1 - 1e-9)).all()
    # rejection sampling for the largest certified side, independent of the formula
    sides = np.linspace(0, 10, 20001)
    corners = np.array([[a, b] for a in (-1, 1) for b in (-1, 1)])
    ok = [s for s in sides if P.contains(corners * s).all()]
    assert max(ok) == pytest.approx(c, abs=1e-3)


def test_inscribed_scales_with_N():
    a = sample_generic_alphas(2, 5, seed=3)
    assert inscribed_cube_side(support_polytope(0, a, 20.0)) == pytest.approx(2 * inscribed_cube_side(support_polytope(0, a, 10.0)))


def test_inscribed_requires_interior_origin():
    P = SupportPolytope(2, (Strip(np.array([1.0, 0.0]), 1, 2), Strip(np.array([0.0, 1.0]), -1, 1)))
    with pytest.raises(OriginNotInterior):
        inscribed_cube_side(P)


def test_box_k1():
    P = SupportPolytope(1, (Strip(np.array([1.0]), -4, 4), Strip(np.array([2.0]), -4, 4)))
    assert np.allclose(circumscribed_box(P), [[-2, 2]])


@pytest.mark.parametrize("k,n", [(2, 4), (2, 5), (3, 19)])
def test_box_matches_lp(k, n):
    P = support_polytope(0.37, sample_generic_alphas(k, n, seed=2), 10.0)
    assert np.allclose(circumscribed_box(P), lp_box(P), atol=1e-8)


def test_box_bounded_by_recorded_C1():
    # reference run: seed 1, N = 10 gives half-widths 2.18 and 2.43
    box = circumscribed_box(support_polytope(0.0, sample_generic_alphas(2, 4, seed=1), 10.0))
    assert np.abs(box).max() <= 0.25 * 10


def test_parallel_strips_unbounded():
    b = np.array([1.0, 1.0])
    P = SupportPolytope(2, (Strip(b, -1, 1), Strip(b, -1, 1)))
    with pytest.raises(Unbounded):
        circumscribed_box(P)


def test_section_of_cube():
    sec = cube_polytope(3, 2.0).section(0.5)
    assert sec.k == 2
    assert np.allclose(circumscribed_box(sec), [[-2, 2], [-2, 2]])
    assert cube_polytope(3, 2.0).section(3.0) is None


def test_with_box_truncates():
    P = support_polytope(0.0, sample_generic_alphas(2, 5, seed=1), 100.0).with_box(1.0)
    assert np.abs(circumscribed_box(P)).max() <= 1.0 + 1e-12


# --- properties -------------------------------------------------------------

@settings(max_examples=20, deadline=None)
@given(st.integers(0, 1000), st.sampled_from([(2, 4), (2, 5), (3, 19)]), st.floats(-0.05, 0.05))
def test_membership_consistency(seed, kn, frac):
    k, n = kn
    N = 10.0
    P = support_polytope(frac * N, sample_generic_alphas(k, n, seed=seed), N)
    pts = np.random.default_rng(seed).uniform(-N, N, size=(10_000, k))
    inside = P.contains(pts)
    every = np.all([s.contains(pts) for s in P.strips], axis=0)
    assert np.array_equal(inside, every)
    box = circumscribed_box(P)
    in_box = np.all((pts >= box[:, 0] - 1e-9) & (pts <= box[:, 1] + 1e-9), axis=1)
    assert np.all(in_box[inside])


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 1000), st.sampled_from([(2, 4), (2, 5), (3, 19)]), st.floats(-0.05, 0.05))
def test_inscribed_cube_certified(seed, kn, frac):
    k, n = kn
    N = 10.0
    P = support_polytope(frac * N, sample_generic_alphas(k, n, seed=seed), N)
    c = inscribed_cube_side(P)
    corners = np.array(np.meshgrid(*[[-1.0, 1.0]] * k)).reshape(k, -1).T
    assert P.contains(corners * c * (1 - 1e-9)).all()
    assert not P.contains(corners * c * (1 + 1e-6)).all()


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 1000), st.sampled_from([(2, 5), (3, 19)]))
def test_slice_consistency(seed, kn):
    k, n = kn
    N = 10.0
    P = support_polytope(0.2, sample_generic_alphas(k, n, seed=seed), N)
    box = circumscribed_box(P)
    rng = np.random.default_rng(seed)
    prefixes = rng.uniform(box[:-1, 0], box[:-1, 1], size=(200, k - 1))
    lo, hi = slice_intervals(P, prefixes)
    for p, a, b in zip(prefixes, lo, hi):
        if a > b:
            continue
        mid = np.append(p, 0.5 * (a + b))
        assert P.contains(mid)[0]
        assert not P.contains(np.append(p, b + 1e-9 * N))[0]
        assert not P.contains(np.append(p, a - 1e-9 * N))[0]


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 1000), st.floats(0.1, 20.0))
def test_linearity_in_N(seed, lam):
    a = sample_generic_alphas(2, 5, seed=seed)
    P1, P2 = support_polytope(0, a, 10.0), support_polytope(0, a, 10.0 * lam)
    assert inscribed_cube_side(P2) == pytest.approx(lam * inscribed_cube_side(P1), rel=1e-12)
    assert np.allclose(circumscribed_box(P2), lam * circumscribed_box(P1), rtol=1e-8, atol=1e-8 * lam)
