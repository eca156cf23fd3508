import numpy as np
import pytest
from hypothesis import given, strategies as st

from logmink.errors import DimensionMismatch, NonpositiveSupport
from logmink.geometry import (
    ConvexBody,
    Subspace,
    apply_linear_map,
    hausdorff_distance,
    make_box,
    make_segment,
    project,
)
from logmink.inequality import (
    are_dilatates,
    are_relative_cylinders,
    classify_equality,
    detect_cylinder,
    log_minkowski_lhs,
    log_minkowski_rhs,
    proven_regime,
    verify_log_minkowski,
)
from logmink.sampling import (
    prism,
    random_cylinder,
    random_linear_map,
    random_polytope,
    regular_polygon,
    rng_for,
)

seeds = st.integers(0, 2**31 - 1)


def relative_cylinder_pair(rng):
    """(K, L) = (T(B + a I), T(cB + b I)) for a random polygon B and map T."""
    base = random_polytope(rng, 2, 8).vertices
    T = random_linear_map(rng, 3)
    K = apply_linear_map(prism(base, rng.uniform(0.5, 2)), T)
    L = apply_linear_map(prism(rng.uniform(0.3, 3) * base, rng.uniform(0.5, 2)), T)
    return K, L


# -- the functional ---------------------------------------------------------


def test_lhs_rhs_examples(cube):
    K = random_polytope(rng_for(1), 3)
    assert log_minkowski_lhs(K, K.scaled(2.5)) == pytest.approx(np.log(2.5), abs=1e-12)
    assert log_minkowski_rhs(K, K.scaled(2.5)) == pytest.approx(np.log(2.5), abs=1e-12)
    box = make_box(2, 1, 1)
    assert log_minkowski_lhs(cube, box) == pytest.approx(np.log(2) / 3, abs=1e-15)
    assert log_minkowski_rhs(cube, box) == pytest.approx(np.log(2) / 3, abs=1e-15)
    for a, b in [(0.5, 3.0), (2.0, 0.1)]:
        K1, L1 = make_segment(a), make_segment(b)
        assert log_minkowski_lhs(K1, L1) == pytest.approx(np.log(b / a), abs=1e-15)
        assert log_minkowski_rhs(K1, L1) == pytest.approx(np.log(b / a), abs=1e-15)


def test_lhs_errors():
    square = make_box(1, 1)
    # a body that does not contain the origin (built directly, bypassing checks)
    off = ConvexBody([[0.5, -1.0], [1.0, -1.0], [1.0, 1.0], [0.5, 1.0]], [[1.0, 0.0]], [1.0], [2.0], [[0, 1]])
    with pytest.raises(NonpositiveSupport):
        log_minkowski_lhs(square, off)
    with pytest.raises(DimensionMismatch):
        log_minkowski_lhs(square, make_box(1, 1, 1))


@given(seeds, st.sampled_from([2, 3]))
def test_gl_invariance_of_both_sides(seed, n):
    rng = rng_for(seed)
    K, L = random_polytope(rng, n), random_polytope(rng, n)
    T = random_linear_map(rng, n)
    TK, TL = apply_linear_map(K, T), apply_linear_map(L, T)
    assert abs(log_minkowski_lhs(TK, TL) - log_minkowski_lhs(K, L)) < 1e-7
    assert abs(log_minkowski_rhs(TK, TL) - log_minkowski_rhs(K, L)) < 1e-9


# -- cylinders -----------------------------------------------------------------


def test_detect_cube_gives_three_segments(cube):
    split = detect_cylinder(cube)
    assert split.dims == [1, 1, 1]
    axes = [tuple(np.abs(xi.basis[0])) for xi, _ in split.factors]
    assert sorted(axes) == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]
    assert axes == sorted(axes, reverse=True)  # canonical lexicographic order


def test_detect_hexagonal_prism_keeps_hexagon():
    split = detect_cylinder(prism(regular_polygon(3), 0.8))
    assert split.dims == [2, 1]
    hexagon = split.factors[0][1]
    assert len(hexagon.vertices) == 6
    assert np.allclose(np.abs(split.factors[1][0].basis[0]), [0, 0, 1])


def test_detect_rejects_octahedron(octahedron):
    assert detect_cylinder(octahedron) is None


def test_detect_planar_and_linear():
    assert detect_cylinder(make_box(2, 1)).dims == [1, 1]
    assert detect_cylinder(random_polytope(rng_for(2), 2, 6)) is None
    assert detect_cylinder(make_segment(1.0)) is None


@given(seeds, st.booleans())
def test_detect_reassembles_random_cylinders(seed, oblique):
    K = random_cylinder(rng_for(seed), oblique=oblique)
    split = detect_cylinder(K)
    assert split is not None and sum(split.dims) == 3
    assert hausdorff_distance(split.reassemble(), K) < 1e-8 * max(1.0, K.circumradius)
    assert split.to_dict()["factors"][0]["dim"] == split.dims[0]


@given(seeds)
def test_detect_rejects_random_polytopes(seed):
    assert detect_cylinder(random_polytope(rng_for(seed), 3)) is None


# -- equality classes ---------------------------------------------------------


def test_classify_examples(cube, octahedron):
    K = random_polytope(rng_for(4), 3)
    assert classify_equality(K, K.scaled(3)) == "dilatates"
    assert classify_equality(cube, make_box(5, 1, 1)) == "relative_cylinders"
    assert classify_equality(cube, octahedron) is None
    assert are_dilatates(cube, cube.scaled(0.2))
    assert not are_relative_cylinders(octahedron, octahedron.scaled(2.0))
    with pytest.raises(DimensionMismatch):
        classify_equality(cube, make_box(1, 1))


@given(seeds)
def test_relative_cylinder_pairs_have_zero_gap(seed):
    K, L = relative_cylinder_pair(rng_for(seed))
    r = verify_log_minkowski(K, L)
    assert abs(r.gap) <= 1e-8
    assert r.equality_class in ("relative_cylinders", "dilatates")


@given(seeds)
def test_equality_iff_relative_cylinders(seed):
    rng = rng_for(seed)
    K = random_cylinder(rng, oblique=bool(rng.integers(2)))
    for L in (random_polytope(rng, 3), relative_cylinder_pair(rng)[1]):
        gap = verify_log_minkowski(K, L).gap
        assert gap >= -1e-9
        assert (abs(gap) <= 1e-7) == (classify_equality(K, L) is not None)


@given(seeds)
def test_equality_forces_product_volume(seed):
    rng = rng_for(seed)
    base = random_polytope(rng, 2, 8).vertices
    K = prism(base, rng.uniform(0.5, 2))
    L = prism(rng.uniform(0.3, 3) * base, rng.uniform(0.5, 2))
    assert abs(verify_log_minkowski(K, L).gap) <= 1e-9
    u0 = np.array([0.0, 0.0, 1.0])
    proj = project(L, Subspace(np.eye(3)[:2]))
    assert L.volume == pytest.approx(2 * L.support(u0) * proj.volume, rel=1e-6)


# -- the verifier ---------------------------------------------------------------


def test_verify_examples(cube, octahedron):
    r = verify_log_minkowski(make_box(1, 1), make_box(2, 1))
    assert abs(r.gap) < 1e-12 and r.equality_class == "relative_cylinders"
    assert r.lhs == pytest.approx(np.log(2) / 2)
    r = verify_log_minkowski(cube, octahedron)
    assert r.equality_class == "strict" and r.passed is True and not r.conjectural
    assert r.gap == pytest.approx(np.log(6) / 3, rel=1e-12)
    r = verify_log_minkowski(octahedron, octahedron)
    assert r.equality_class == "dilatates" and r.gap == 0.0
    assert r.conjectural and r.passed is None and r.regime == "conjectural"
    r = verify_log_minkowski(cube, make_box(2, 1, 1))
    assert abs(r.gap) < 1e-12 and r.equality_class == "relative_cylinders"
    d = r.to_dict()
    assert set(d) >= {"lhs", "rhs", "gap", "class", "conjectural", "tol"}


def test_proven_regimes(cube, octahedron):
    assert proven_regime(make_segment(1.0)) == "segment"
    assert proven_regime(make_box(1, 2)) == "planar"
    assert proven_regime(cube) == "cylinder"
    assert proven_regime(octahedron) is None


def test_pre_transform_leaves_report_unchanged():
    rng = rng_for(9)
    K, L = random_cylinder(rng), random_polytope(rng, 3)
    T = random_linear_map(rng, 3)
    plain = verify_log_minkowski(K, L)
    mapped = verify_log_minkowski(K, L, pre_transform=T)
    assert mapped.gap == pytest.approx(plain.gap, abs=1e-9)
    assert mapped.regime == plain.regime == "cylinder"


def test_strict_class_only_beyond_tolerance():
    rng = rng_for(5)
    K, L = random_polytope(rng, 2), random_polytope(rng, 2)
    r = verify_log_minkowski(K, L, tol=1e-9)
    assert r.equality_class == "strict" and r.gap > r.tol


@given(seeds)
def test_planar_theorem_holds(seed):
    rng = rng_for(seed)
    K, L = random_polytope(rng, 2), random_polytope(rng, 2)
    r = verify_log_minkowski(K, L)
    assert r.passed and r.gap >= -1e-9
    if classify_equality(K, L) is not None:
        assert r.gap <= 1e-9


def test_verify_dimension_mismatch(cube):
    with pytest.raises(DimensionMismatch):
        verify_log_minkowski(cube, make_box(1, 1))
