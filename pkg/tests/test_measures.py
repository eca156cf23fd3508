import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import hull_volume
from logmink.errors import DimensionMismatch, SubspaceNotComplementary
from logmink.geometry import (
    ConvexBody,
    Subspace,
    apply_linear_map,
    make_box,
    make_segment,
    minkowski_sum,
)
from logmink.measures import (
    DiscreteMeasure,
    cone_volume_measure,
    measures_equal,
    product_cone_volume,
    subspace_concentration_check,
    surface_area_measure,
    transform_cone_volume_measure,
    transform_surface_measure,
)
from logmink.sampling import random_linear_map, random_polytope, rng_for

seeds = st.integers(0, 2**31 - 1)
dims = st.sampled_from([2, 3])
AXES = np.vstack([np.eye(3), -np.eye(3)])


def weights_by_direction(mu):
    return {tuple(np.round(u, 9)): w for u, w in zip(mu.directions, mu.weights)}


# -- the measure type -------------------------------------------------------


def test_merging_dropping_and_validation():
    mu = DiscreteMeasure([[1, 0], [1, 1e-12], [0, 1], [0, -1]], [1.0, 2.0, 1.0, 1e-14])
    assert len(mu) == 2
    assert mu.weight_at([1, 0]) == pytest.approx(3.0)
    assert mu.total() == pytest.approx(4.0)
    with pytest.raises(ValueError):
        DiscreteMeasure([[1, 0]], [-1.0])
    with pytest.raises(ValueError):
        DiscreteMeasure([[1, 0]], [1.0], kind="volume")
    with pytest.raises(ValueError):
        DiscreteMeasure([[1, 0], [0, 1]], [1.0])


def test_evenness_and_symmetrization():
    mu = DiscreteMeasure([[1, 0], [-1, 0], [0, 1]], [1.0, 1.0, 2.0])
    assert not mu.is_even()
    sym = mu.symmetrized()
    assert sym.is_even()
    assert sym.total() == pytest.approx(mu.total())
    assert sym.weight_at([0, -1]) == pytest.approx(1.0)


def test_normalized_and_scaled():
    mu = cone_volume_measure(make_box(1, 1, 1))
    assert mu.normalized().total() == pytest.approx(1.0)
    assert mu.scaled(3.0).total() == pytest.approx(24.0)


# -- surface-area measure ----------------------------------------------------


def test_surface_area_examples(cube, octahedron):
    S = surface_area_measure(cube)
    assert len(S) == 6 and np.allclose(S.weights, 4.0) and S.total() == pytest.approx(24.0)
    box = weights_by_direction(surface_area_measure(make_box(2, 1, 1)))
    assert box[(1.0, 0.0, 0.0)] == pytest.approx(4.0)
    assert box[(0.0, -1.0, 0.0)] == pytest.approx(8.0)
    assert box[(0.0, 0.0, 1.0)] == pytest.approx(8.0)
    So = surface_area_measure(octahedron)
    # area of the triangle e1, e2, e3 from its vertices
    tri = 0.5 * np.linalg.norm(np.cross(np.eye(3)[1] - np.eye(3)[0], np.eye(3)[2] - np.eye(3)[0]))
    assert np.allclose(So.weights, tri) and tri == pytest.approx(np.sqrt(3) / 2)
    assert So.total() == pytest.approx(4 * np.sqrt(3))


# -- cone-volume measure ------------------------------------------------------


def test_cone_volume_examples(cube, octahedron):
    V = cone_volume_measure(cube)
    assert np.allclose(V.weights, 4.0 / 3.0) and V.total() == pytest.approx(8.0)
    a, b, c = 0.7, 1.9, 3.1
    Vb = cone_volume_measure(make_box(a, b, c))
    assert len(Vb) == 6 and np.allclose(Vb.weights, 4 * a * b * c / 3)
    Vo = cone_volume_measure(octahedron)
    assert len(Vo) == 8 and np.allclose(Vo.weights, 1.0 / 6.0)
    # each atom is h * area / 3 with h = 1/sqrt(3), area = sqrt(3)/2
    assert 1.0 / 6.0 == pytest.approx((1 / np.sqrt(3)) * (np.sqrt(3) / 2) / 3)


@given(seeds, dims)
def test_cone_volume_total_equals_volume(seed, n):
    K = random_polytope(rng_for(seed), n)
    V = cone_volume_measure(K)
    assert abs(V.total() - hull_volume(K.vertices)) / K.volume < 1e-9
    assert V.is_even()
    assert surface_area_measure(K).is_even()


# -- linear images -------------------------------------------------------------


def test_transform_surface_examples(cube):
    S = surface_area_measure(cube)
    same, _ = measures_equal(transform_surface_measure(S, np.eye(3)), S)
    assert same
    stretched = weights_by_direction(transform_surface_measure(S, np.diag([2.0, 1.0, 1.0])))
    assert stretched[(-1.0, 0.0, 0.0)] == pytest.approx(4.0)
    assert stretched[(0.0, 1.0, 0.0)] == pytest.approx(8.0)
    c, s = np.cos(0.3), np.sin(0.3)
    Ssq = surface_area_measure(make_box(1, 1))
    rot = transform_surface_measure(Ssq, [[c, -s], [s, c]])
    assert rot.total() == pytest.approx(Ssq.total())
    assert rot.weight_at([c, s]) == pytest.approx(2.0)
    with pytest.raises(DimensionMismatch):
        transform_surface_measure(S, np.eye(2))


@given(seeds, dims)
def test_transform_consistency_against_rehulled_body(seed, n):
    rng = rng_for(seed)
    K = random_polytope(rng, n)
    T = random_linear_map(rng, n)
    # oracle body: hull of T applied to the vertices, computed from scratch
    TK = ConvexBody.from_vertices(T(K.vertices))
    ok, report = measures_equal(transform_surface_measure(surface_area_measure(K), T), surface_area_measure(TK))
    assert ok, report
    ok, report = measures_equal(transform_cone_volume_measure(cone_volume_measure(K), T), cone_volume_measure(TK))
    assert ok, report
    assert surface_area_measure(apply_linear_map(K, T)).total() == pytest.approx(surface_area_measure(TK).total())


# -- product bodies ----------------------------------------------------------


def test_product_cube_example():
    plane, line = Subspace(np.eye(3)[:2]), Subspace(np.eye(3)[2:])
    mu = product_cone_volume(make_box(1, 1), plane, make_segment(1.0), line)
    assert mu.weight_at([0, 0, 1]) == pytest.approx(4.0 / 3.0)
    assert mu.weight_at([1, 0, 0]) == pytest.approx(4.0 / 3.0)
    assert mu.total() == pytest.approx(8.0)
    ok, _ = measures_equal(mu, cone_volume_measure(make_box(1, 1, 1)))
    assert ok


@pytest.mark.parametrize("a", [0.5, 1.0, 2.0])
def test_product_cap_weight(a):
    base = random_polytope(rng_for(11), 2, 7)
    plane, line = Subspace(np.eye(3)[:2]), Subspace(np.eye(3)[2:])
    mu = product_cone_volume(base, plane, make_segment(a), line)
    assert mu.weight_at([0, 0, 1]) == pytest.approx(a * base.volume / 3, rel=1e-12)


def test_product_planar_parallelogram():
    x, y = Subspace([[1.0, 0.0]]), Subspace([[0.0, 1.0]])
    mu = product_cone_volume(make_segment(2.0), x, make_segment(0.5), y)
    direct = cone_volume_measure(make_box(2.0, 0.5))
    # (1/2)|K2| * (weights of K1) = (1/2) * 1 * 2 at +-e1
    assert mu.weight_at([1, 0]) == pytest.approx(1.0)
    assert measures_equal(mu, direct)[0]


def test_product_rejects_bad_subspaces():
    plane = Subspace(np.eye(3)[:2])
    with pytest.raises(SubspaceNotComplementary):
        product_cone_volume(make_box(1, 1), plane, make_segment(1.0), Subspace([[1.0, 0, 0]]))
    with pytest.raises(SubspaceNotComplementary):
        product_cone_volume(make_box(1, 1), plane, make_segment(1.0), Subspace([[0.0, 0.6, 0.8]]))
    with pytest.raises(SubspaceNotComplementary):
        product_cone_volume(make_segment(1.0), Subspace([[1.0, 0, 0]]), make_segment(1.0), Subspace([[0, 1.0, 0]]))


@given(seeds)
def test_product_matches_direct_measure(seed):
    rng = rng_for(seed)
    Q, _ = np.linalg.qr(rng.normal(size=(3, 3)))
    plane, line = Subspace(Q[:2]), Subspace(Q[2:])
    base = random_polytope(rng, 2, 8)
    seg = make_segment(rng.uniform(0.3, 3.0))
    mu = product_cone_volume(base, plane, seg, line)
    K = minkowski_sum(plane.embed(base.vertices), line.embed(seg.vertices))
    ok, report = measures_equal(mu, cone_volume_measure(K), tol=1e-8)
    assert ok, report
    # every atom lies in one of the two subspaces
    assert np.all(plane.contains(mu.directions) | line.contains(mu.directions))


# -- comparison -----------------------------------------------------------------


def test_measures_equal_examples(cube, octahedron):
    V = cone_volume_measure(cube)
    assert measures_equal(V, V)[0]
    a, b = 0.5, 2.5
    assert measures_equal(V, cone_volume_measure(make_box(a, b, 1 / (a * b))))[0]
    ok, report = measures_equal(V, cone_volume_measure(octahedron))
    assert not ok
    assert report["matched"] == 0 and len(report["unmatched_nu"]) == 8


# -- subspace concentration ----------------------------------------------------


def test_scc_cube_equality_on_axes(cube):
    res = subspace_concentration_check(cone_volume_measure(cube))
    assert res.status == "equality"
    lines = [xi for xi in res.equality_on if xi.dim == 1]
    assert sorted(tuple(np.abs(xi.basis[0]).round(12)) for xi in lines) == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]
    # coordinate planes hold 16/3 = (2/3) * 8 as well
    assert sum(xi.dim == 2 for xi in res.equality_on) == 3
    assert not res.violated_on and res.max_ratio == pytest.approx(1.0)


def test_scc_octahedron_strict(octahedron):
    res = subspace_concentration_check(cone_volume_measure(octahedron))
    assert res.strict and not res.equality_on
    # a line through two opposite normals holds 1/3 against the bound (1/3)(4/3) = 4/9
    assert res.max_ratio == pytest.approx(0.75)


def test_scc_violated_on_a_line():
    mu = DiscreteMeasure([[1, 0, 0], [-1, 0, 0]], [1.0, 1.0])
    res = subspace_concentration_check(mu)
    assert res.status == "violated"
    assert res.violated_on[0].dim == 1


@given(seeds)
def test_scc_random_polytopes_strict(seed):
    K = random_polytope(rng_for(seed), 3, 12)
    assert subspace_concentration_check(cone_volume_measure(K)).strict


def test_scc_segment_is_trivially_strict():
    assert subspace_concentration_check(cone_volume_measure(make_segment(1.0))).strict

