"""Origin-symmetric polytopes in dimensions 1-3 and their basic operations.

A :class:`ConvexBody` carries both representations at once: the vertex list
and the facet list (outward unit normal, support value, facet area).  Bodies
are immutable; every operation returns a new body.

Facet areas are (n-1)-dimensional Hausdorff measures: edge lengths for
polygons, polygon areas for polyhedra, and 1 (counting measure) for the two
endpoints of a segment.
"""

from functools import reduce
from types import MappingProxyType

import numpy as np
from scipy.spatial import cKDTree

from .errors import (
    AsymmetricInput,
    DegenerateShape,
    DimensionMismatch,
    SingularMap,
    UnboundedShape,
)
from .hull import FlatHull, dedupe, hull_planes

SUPPORT_TOL = 1e-9
DIRECTION_TOL = 1e-9
MIN_VOLUME = 1e-12


def unit(x):
    x = np.asarray(x, dtype=float)
    norm = np.linalg.norm(x, axis=-1, keepdims=True)
    if np.any(norm == 0):
        raise ValueError("zero vector has no direction")
    return x / norm


def canonical_sign(u, tol=1e-12):
    """Flip each row so that its first non-negligible coordinate is positive."""
    u = np.atleast_2d(np.asarray(u, dtype=float))
    lead = np.argmax(np.abs(u) > tol, axis=1)
    sign = np.sign(u[np.arange(len(u)), lead])
    sign[sign == 0] = 1.0
    return u * sign[:, None]


def merge_directions(directions, tol=DIRECTION_TOL):
    """Cluster unit vectors closer than ``tol``.

    Returns (representatives, labels) with representatives renormalized.
    """
    reps, labels = dedupe(directions, tol)
    return unit(reps), labels


class Subspace:
    """Linear subspace of R^n given by an orthonormal basis (rows)."""

    def __init__(self, basis):
        basis = np.atleast_2d(np.asarray(basis, dtype=float))
        gram = basis @ basis.T
        if not np.allclose(gram, np.eye(len(basis)), atol=1e-12):
            raise ValueError("basis is not orthonormal")
        self.basis = basis
        self.basis.setflags(write=False)

    @classmethod
    def span(cls, vectors, tol=1e-9):
        vectors = np.atleast_2d(np.asarray(vectors, dtype=float))
        _, s, vt = np.linalg.svd(vectors)
        rank = int(np.sum(s > tol * max(s[0], 1e-300)))
        if rank == 0:
            raise ValueError("vectors span the zero subspace")
        return cls(vt[:rank])

    @property
    def dim(self):
        return self.basis.shape[0]

    @property
    def ambient(self):
        return self.basis.shape[1]

    def complement(self):
        _, _, vt = np.linalg.svd(self.basis, full_matrices=True)
        return Subspace(vt[self.dim:])

    def coords(self, x):
        """Coordinates of (rows of) ``x`` projected into the basis."""
        return np.asarray(x, dtype=float) @ self.basis.T

    def embed(self, y):
        return np.asarray(y, dtype=float) @ self.basis

    def contains(self, x, tol=1e-9):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        resid = x - self.embed(self.coords(x))
        return np.linalg.norm(resid, axis=1) <= tol * np.maximum(1.0, np.linalg.norm(x, axis=1))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, basis={self.basis.tolist()})"


class LinearMap:
    """Invertible linear map x -> T x."""

    def __init__(self, matrix):
        matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
        if matrix.shape[0] != matrix.shape[1]:
            raise DimensionMismatch(f"matrix must be square, got {matrix.shape}")
        det = float(np.linalg.det(matrix))
        if abs(det) <= 1e-12:
            raise SingularMap(f"|det T| = {abs(det):.3g} is not above 1e-12")
        self.matrix = matrix
        self.det = det
        self.inverse = np.linalg.inv(matrix)
        for arr in (self.matrix, self.inverse):
            arr.setflags(write=False)

    @property
    def dim(self):
        return self.matrix.shape[0]

    @property
    def inverse_transpose(self):
        return self.inverse.T

    def __call__(self, points):
        return np.asarray(points, dtype=float) @ self.matrix.T

    def covector(self, u):
        """Rows of T^{-t} u."""
        return np.asarray(u, dtype=float) @ self.inverse


class SupportSamples:
    """Positive even function on a finite set of directions.

    Directions need not be unit length: a pair (x, v) is stored as
    (x/|x|, v/|x|), which describes the same halfspace.  Missing antipodes
    are added; repeated directions keep the smallest value.
    """

    def __init__(self, directions, values):
        directions = np.atleast_2d(np.asarray(directions, dtype=float))
        values = np.asarray(values, dtype=float).reshape(-1)
        if len(directions) != len(values):
            raise ValueError("directions and values differ in length")
        norms = np.linalg.norm(directions, axis=1)
        if np.any(norms == 0):
            raise ValueError("zero direction")
        directions = directions / norms[:, None]
        values = values / norms
        if np.any(~np.isfinite(values)) or np.any(values <= 0):
            raise ValueError("support samples must be strictly positive")
        both = np.vstack([directions, -directions])
        reps, labels = merge_directions(both)
        vals = np.full(len(reps), np.inf)
        m = len(directions)
        own = labels[:m]
        np.minimum.at(vals, own, values)
        # antipode consistency: f(u) and f(-u) must agree where both given
        anti = labels[m:]
        given = np.zeros(len(reps), dtype=bool)
        given[own] = True
        paired = given[anti]
        if np.any(paired):
            a, b = vals[own[paired]], vals[anti[paired]]
            if np.any(np.abs(a - b) > SUPPORT_TOL * np.maximum(a, b)):
                raise AsymmetricInput("f(u) and f(-u) differ")
        np.minimum.at(vals, anti, values)
        self.directions = reps
        self.values = vals
        self.directions.setflags(write=False)
        self.values.setflags(write=False)

    @classmethod
    def of(cls, body, directions):
        """Samples of the support function of ``body``."""
        directions = unit(np.atleast_2d(directions))
        return cls(directions, body.support(directions))

    @property
    def dim(self):
        return self.directions.shape[1]

    def __len__(self):
        return len(self.values)

    def scaled(self, c):
        return SupportSamples(self.directions, c * self.values)


def _facet_geometry(vertices, normals, supports, tol=SUPPORT_TOL):
    """Facet areas and ordered facet vertex lists for a vertex set.

    A vertex belongs to facet j when it lies on the plane x.u_j = h_j within
    ``tol`` (relative to the circumradius).  Facets with too few vertices
    to be (n-1)-dimensional get zero area.
    """
    n = vertices.shape[1]
    k = len(normals)
    radius = np.linalg.norm(vertices, axis=1).max()
    on = np.abs(vertices @ normals.T - supports[None, :]) <= tol * max(radius, 1e-300)
    counts = on.sum(axis=0)
    if n == 1:
        areas = (counts >= 1).astype(float)
        return areas, [np.flatnonzero(on[:, j]) for j in range(k)]
    if n == 2:
        tangent = np.column_stack([-normals[:, 1], normals[:, 0]])
        t = vertices @ tangent.T
        hi = np.where(on, t, -np.inf).max(axis=0)
        lo = np.where(on, t, np.inf).min(axis=0)
        areas = np.where(counts >= 2, hi - lo, 0.0)
        lists = []
        for j in range(k):
            idx = np.flatnonzero(on[:, j])
            lists.append(idx[np.argsort(t[idx, j])] if len(idx) else idx)
        return areas, lists
    # n == 3: order each facet's vertices by angle in a frame of its plane
    seed = np.eye(3)[np.argmin(np.abs(normals), axis=1)]
    e1 = unit(np.cross(normals, seed))
    e2 = np.cross(normals, e1)
    x, y = vertices @ e1.T, vertices @ e2.T
    safe = np.maximum(counts, 1)
    cx = np.where(on, x, 0.0).sum(axis=0) / safe
    cy = np.where(on, y, 0.0).sum(axis=0) / safe
    ang = np.where(on, np.arctan2(y - cy, x - cx), np.inf)
    order = np.argsort(ang, axis=0)
    xs = np.take_along_axis(x, order, axis=0)
    ys = np.take_along_axis(y, order, axis=0)
    pos = np.arange(len(vertices))[:, None]
    nxt = np.where(pos + 1 < counts[None, :], pos + 1, 0)
    xn = np.take_along_axis(xs, nxt, axis=0)
    yn = np.take_along_axis(ys, nxt, axis=0)
    valid = pos < counts[None, :]
    areas = 0.5 * np.abs(np.where(valid, xs * yn - xn * ys, 0.0).sum(axis=0))
    areas[counts < 3] = 0.0
    lists = [order[: counts[j], j] for j in range(k)]
    return areas, lists


class ConvexBody:
    """Origin-symmetric convex polytope in R^n, n in {1, 2, 3}.

    Use :meth:`from_vertices`, :func:`wulff_shape` or the ``make_*`` helpers
    rather than the constructor, which trusts its inputs.
    """

    def __init__(self, vertices, normals, supports, areas, facet_vertices, meta=None):
        self.vertices = np.asarray(vertices, dtype=float)
        self.normals = np.asarray(normals, dtype=float)
        self.supports = np.asarray(supports, dtype=float)
        self.areas = np.asarray(areas, dtype=float)
        self.facet_vertices = tuple(np.asarray(f, dtype=int) for f in facet_vertices)
        self.meta = MappingProxyType(dict(meta or {}))
        for arr in (self.vertices, self.normals, self.supports, self.areas):
            arr.setflags(write=False)
        self.volume = float(np.dot(self.supports, self.areas) / self.dim)
        if not self.volume > MIN_VOLUME:
            raise DegenerateShape(f"volume {self.volume:.3g} is not above {MIN_VOLUME}")

    @property
    def dim(self):
        return self.vertices.shape[1]

    @classmethod
    def from_vertices(cls, points, check_symmetric=True):
        """Convex hull of a point set in R^n."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if pts.shape[1] not in (1, 2, 3):
            raise DimensionMismatch(f"dimension {pts.shape[1]} not in 1..3")
        try:
            normals, offsets, vidx = hull_planes(pts)
        except FlatHull as exc:
            raise DegenerateShape(f"points do not span R^{pts.shape[1]}: {exc}") from exc
        radius = np.linalg.norm(pts, axis=1).max()
        verts, _ = dedupe(pts[vidx], 1e-12 * radius)
        if check_symmetric:
            _check_symmetric(verts)
        return _assemble(verts, normals, offsets)

    def with_meta(self, **meta):
        return ConvexBody(self.vertices, self.normals, self.supports, self.areas,
                          self.facet_vertices, {**self.meta, **meta})

    def support(self, x):
        """h_K(x) = max over vertices of x.v; accepts a vector or rows."""
        x = np.asarray(x, dtype=float)
        return (x @ self.vertices.T).max(axis=-1)

    def scaled(self, c):
        if c <= 0:
            raise ValueError("scale factor must be positive")
        return ConvexBody(
            c * self.vertices, self.normals, c * self.supports,
            c ** (self.dim - 1) * self.areas, self.facet_vertices,
        )

    @property
    def circumradius(self):
        return float(np.linalg.norm(self.vertices, axis=1).max())

    @property
    def surface_area(self):
        return float(self.areas.sum())

    @property
    def edges(self):
        """Vertex index pairs of the 1-dimensional faces (n >= 2)."""
        if self.dim == 2:
            return np.array([f[[0, -1]] for f in self.facet_vertices])
        pairs = set()
        for f in self.facet_vertices:
            for a, b in zip(f, np.roll(f, -1)):
                pairs.add((min(a, b), max(a, b)))
        return np.array(sorted(pairs))

    def __repr__(self):
        return (f"ConvexBody(dim={self.dim}, vertices={len(self.vertices)}, "
                f"facets={len(self.normals)}, volume={self.volume:.6g})")


def _check_symmetric(verts):
    radius = np.linalg.norm(verts, axis=1).max()
    dist, _ = cKDTree(verts).query(-verts)
    if np.any(dist > SUPPORT_TOL * max(radius, 1.0)):
        raise AsymmetricInput("vertex set is not origin-symmetric within 1e-9")


def _assemble(vertices, normals, supports, keep_tol=1e-12):
    areas, lists = _facet_geometry(vertices, normals, supports)
    total = areas.sum()
    keep = areas > keep_tol * max(total, 1e-300)
    return ConvexBody(
        vertices, normals[keep], supports[keep], areas[keep],
        [lst for lst, kept in zip(lists, keep) if kept],
    )


def wulff_vertices(directions, values, tol=SUPPORT_TOL):
    """Vertices of the intersection of halfspaces {x : x.u_i <= f_i}.

    The halfspaces are dualized to the points u_i / f_i; each facet of the
    hull of those points (plane w.y = c) is the dual of the vertex w / c.
    Vertices closer than ``tol`` times the circumradius are merged.  The
    default suits exact input; callers that need the volume to vary smoothly
    with ``values`` (the solver) pass a much smaller ``tol`` so that short
    edges are not collapsed.
    """
    directions = np.asarray(directions, dtype=float)
    values = np.asarray(values, dtype=float)
    n = directions.shape[1]
    if n == 1:
        pos, neg = values[directions[:, 0] > 0], values[directions[:, 0] < 0]
        if len(pos) == 0 or len(neg) == 0:
            raise UnboundedShape("directions do not positively span R^1")
        return np.array([[-neg.min()], [pos.min()]])
    dual = directions / values[:, None]
    try:
        w, c, _ = hull_planes(dual, angle_tol=min(tol, 1e-8))
    except FlatHull as exc:
        raise UnboundedShape(f"directions do not span R^{n}") from exc
    if c.min() <= 1e-12 * c.max():
        raise UnboundedShape(f"directions do not positively span R^{n}")
    verts = w / c[:, None]
    radius = np.linalg.norm(verts, axis=1).max()
    verts, _ = dedupe(verts, tol * radius)
    return verts


def wulff_areas(directions, values, tol=SUPPORT_TOL):
    """Vertices of [f] plus the facet area carried by every input atom.

    Inactive atoms (constraint not touching [f] in a facet) get area 0.
    """
    verts = wulff_vertices(directions, values, tol)
    areas, lists = _facet_geometry(verts, np.asarray(directions, float), np.asarray(values, float), tol)
    return verts, areas, lists


def wulff_shape(f):
    """Wulff shape [f] = intersection of {x : x.u <= f(u)} over the atoms of f."""
    if not isinstance(f, SupportSamples):
        raise TypeError("wulff_shape expects SupportSamples")
    verts = wulff_vertices(f.directions, f.values)
    return _assemble(verts, f.directions, f.values)


def support_eval(body, x):
    return body.support(x)


def apply_linear_map(body, T):
    """Image T K; facet data follow h_{TK}(x) = h_K(T^t x)."""
    if not isinstance(T, LinearMap):
        T = LinearMap(T)
    if T.dim != body.dim:
        raise DimensionMismatch(f"map is {T.dim}x{T.dim}, body has dimension {body.dim}")
    w = T.covector(body.normals)
    scale = np.linalg.norm(w, axis=1)
    return ConvexBody(
        T(body.vertices),
        w / scale[:, None],
        body.supports / scale,
        abs(T.det) * scale * body.areas,
        body.facet_vertices,
    )


def _points_of(summand):
    if isinstance(summand, ConvexBody):
        return summand.vertices
    pts = np.atleast_2d(np.asarray(summand, dtype=float))
    return pts


def minkowski_sum(*summands):
    """Minkowski sum of bodies and/or point sets (e.g. segment endpoints).

    Lower-dimensional summands are given by their vertex arrays; only the
    final sum must be full-dimensional.
    """
    if len(summands) < 2:
        raise ValueError("need at least two summands")
    point_sets = [_points_of(s) for s in summands]
    dims = {p.shape[1] for p in point_sets}
    if len(dims) != 1:
        raise DimensionMismatch(f"summands live in different dimensions {sorted(dims)}")

    def add(a, b):
        pts = (a[:, None, :] + b[None, :, :]).reshape(-1, a.shape[1])
        try:
            _, _, vidx = hull_planes(pts)
            return pts[vidx]
        except FlatHull:
            radius = np.linalg.norm(pts, axis=1).max()
            return dedupe(pts, 1e-12 * max(radius, 1.0))[0]

    return ConvexBody.from_vertices(reduce(add, point_sets))


def project(body, subspace):
    """Orthogonal projection K|xi, in the coordinates of the subspace basis."""
    if subspace.ambient != body.dim:
        raise DimensionMismatch("subspace and body live in different dimensions")
    return ConvexBody.from_vertices(subspace.coords(body.vertices))


def section(body, subspace):
    """K ∩ xi, in the coordinates of the subspace basis."""
    if subspace.ambient != body.dim:
        raise DimensionMismatch("subspace and body live in different dimensions")
    w = subspace.coords(body.normals)
    norm = np.linalg.norm(w, axis=1)
    live = norm > 1e-12
    return wulff_shape(SupportSamples(w[live], body.supports[live]))


def point_distance(body, points):
    """Euclidean distance from each point to the body (0 inside)."""
    p = np.atleast_2d(np.asarray(points, dtype=float))
    viol = (p @ body.normals.T - body.supports).max(axis=1)
    out = np.zeros(len(p))
    outside = viol > 0
    if not np.any(outside):
        return out
    q = p[outside]
    V = body.vertices
    if body.dim == 1:
        out[outside] = np.abs(q[:, 0]) - V[:, 0].max()
        return out
    best = np.linalg.norm(q[:, None, :] - V[None, :, :], axis=2).min(axis=1)
    E = body.edges
    a, b = V[E[:, 0]], V[E[:, 1]]
    ab = b - a
    t = np.einsum("qej,ej->qe", q[:, None, :] - a[None], ab) / np.einsum("ej,ej->e", ab, ab)
    t = np.clip(t, 0.0, 1.0)
    foot = a[None] + t[..., None] * ab[None]
    best = np.minimum(best, np.linalg.norm(q[:, None, :] - foot, axis=2).min(axis=1))
    if body.dim == 3:
        gap = q @ body.normals.T - body.supports
        radius = body.circumradius
        for j in range(len(body.normals)):
            proj = q - gap[:, j:j + 1] * body.normals[j]
            feasible = (proj @ body.normals.T - body.supports).max(axis=1) <= 1e-12 * radius
            cand = np.where(feasible & (gap[:, j] >= 0), gap[:, j], np.inf)
            best = np.minimum(best, cand)
    out[outside] = best
    return out


def hausdorff_distance(A, B):
    """Hausdorff distance between two polytopes of the same dimension.

    The distance to a convex set is a convex function, so its maximum over
    a polytope is attained at a vertex.
    """
    if A.dim != B.dim:
        raise DimensionMismatch(f"dimensions {A.dim} and {B.dim} differ")
    return float(max(point_distance(B, A.vertices).max(), point_distance(A, B.vertices).max()))


def make_box(*half_sides):
    half = np.asarray(half_sides, dtype=float).reshape(-1)
    if np.any(half <= 0):
        raise ValueError("half-sides must be positive")
    n = len(half)
    signs = np.array(np.meshgrid(*[[-1.0, 1.0]] * n, indexing="ij")).reshape(n, -1).T
    return ConvexBody.from_vertices(signs * half)


def make_polygon(vertices):
    pts = np.atleast_2d(np.asarray(vertices, dtype=float))
    if pts.shape[1] != 2:
        raise DimensionMismatch("polygon vertices must be planar")
    _check_symmetric(pts)
    return ConvexBody.from_vertices(pts)


def make_segment(a):
    if a <= 0:
        raise ValueError("segment half-length must be positive")
    return ConvexBody.from_vertices([[-a], [a]])


def segment_points(direction, a=1.0):
    """Endpoints of the centred segment [-a d, a d] as a point set."""
    d = np.asarray(direction, dtype=float)
    return np.array([-a * d, a * d])


def cross_polytope(n, r=1.0):
    eye = np.eye(n) * r
    return ConvexBody.from_vertices(np.vstack([eye, -eye]))
