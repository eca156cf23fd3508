"""Convex hull kernels for dimensions 1-3.

The 2D hull is Andrew's monotone chain.  The 3D hull delegates to qhull
(``scipy.spatial.ConvexHull``) and merges the triangulated output back into
planar facets: triangles whose outward normals agree within ``ANGLE_TOL`` and
whose offsets agree within ``OFFSET_TOL`` (relative) form one facet.
"""

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import ConvexHull, QhullError, cKDTree

ANGLE_TOL = 1e-8
OFFSET_TOL = 1e-9


class FlatHull(ValueError):
    """The point set does not span the ambient space."""


def cluster(points, tol):
    """Group points lying within ``tol`` of each other (transitively).

    Returns:
        labels: int array, one cluster label per point, labels ordered by
            first occurrence.
    """
    points = np.asarray(points, dtype=float)
    m = len(points)
    if m == 0:
        return np.zeros(0, dtype=int)
    # exact duplicates first (qhull repeats the plane of a merged facet for
    # each of its triangles), then tolerance clustering of what remains
    uniq, inv = np.unique(points, axis=0, return_inverse=True)
    inv = inv.reshape(-1)
    pairs = cKDTree(uniq).query_pairs(tol, output_type="ndarray")
    if len(pairs) == 0:
        raw = inv
    else:
        k = len(uniq)
        graph = coo_matrix((np.ones(len(pairs)), (pairs[:, 0], pairs[:, 1])), shape=(k, k))
        raw = connected_components(graph, directed=False)[1][inv]
    # relabel by first occurrence so output order follows input order
    _, first = np.unique(raw, return_index=True)
    order = np.argsort(first)
    relabel = np.empty_like(order)
    relabel[order] = np.arange(len(order))
    return relabel[raw]


def dedupe(points, tol):
    """Collapse near-coincident points; returns (representatives, labels)."""
    points = np.asarray(points, dtype=float)
    labels = cluster(points, tol)
    k = labels.max() + 1 if len(labels) else 0
    reps = np.zeros((k, points.shape[1]))
    counts = np.bincount(labels, minlength=k).astype(float)
    np.add.at(reps, labels, points)
    return reps / counts[:, None], labels


def monotone_chain(points):
    """Indices of the 2D convex hull in counter-clockwise order.

    Collinear boundary points are dropped.  Raises FlatHull when all points
    are collinear.
    """
    pts = np.asarray(points, dtype=float)
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    scale = max(np.abs(pts).max(), 1e-300)

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    eps = 1e-14 * scale * scale
    lower, upper = [], []
    for i in order:
        while len(lower) >= 2 and cross(pts[lower[-2]], pts[lower[-1]], pts[i]) <= eps:
            lower.pop()
        lower.append(i)
    for i in order[::-1]:
        while len(upper) >= 2 and cross(pts[upper[-2]], pts[upper[-1]], pts[i]) <= eps:
            upper.pop()
        upper.append(i)
    chain = lower[:-1] + upper[:-1]
    if len(chain) < 3:
        raise FlatHull("points are collinear")
    return np.array(chain)


def hull_planes(points, angle_tol=ANGLE_TOL):
    """Facet hyperplanes of the convex hull of ``points`` in R^n, n <= 3.

    Returns:
        normals: (k, n) outward unit normals, one per merged facet.
        offsets: (k,) values ``max_x normal . x`` over the points.
        vertex_index: indices of the points that are hull vertices.

    ``angle_tol`` controls the merge of coplanar triangles; the offset
    tolerance scales with it.
    """
    pts = np.asarray(points, dtype=float)
    n = pts.shape[1]
    if n == 1:
        lo, hi = int(np.argmin(pts[:, 0])), int(np.argmax(pts[:, 0]))
        if pts[hi, 0] - pts[lo, 0] <= 0:
            raise FlatHull("segment has zero length")
        normals = np.array([[1.0], [-1.0]])
        return normals, np.array([pts[hi, 0], -pts[lo, 0]]), np.array(sorted({lo, hi}))
    if n == 2:
        ring = monotone_chain(pts)
        a, b = pts[ring], pts[np.roll(ring, -1)]
        edge = b - a
        normals = np.column_stack([edge[:, 1], -edge[:, 0]])
        normals /= np.linalg.norm(normals, axis=1)[:, None]
        return normals, np.einsum("ij,ij->i", normals, a), ring
    if n != 3:
        raise ValueError(f"unsupported dimension {n}")
    try:
        hull = ConvexHull(pts)
    except QhullError as exc:
        raise FlatHull(str(exc).splitlines()[0]) from exc
    eq = hull.equations
    normals = eq[:, :3]
    offsets = -eq[:, 3]
    scale = max(np.abs(pts).max(), 1e-300)
    # joint tolerance on (normal, offset/scale); offsets are relative
    key = np.column_stack([normals, offsets / scale * (ANGLE_TOL / OFFSET_TOL)])
    labels = cluster(key, angle_tol)
    k = labels.max() + 1
    merged = np.zeros((k, 3))
    np.add.at(merged, labels, normals)
    merged /= np.linalg.norm(merged, axis=1)[:, None]
    verts = np.asarray(hull.vertices)
    return merged, (pts[verts] @ merged.T).max(axis=0), verts
