"""Direction sets and random test bodies.

All randomness goes through ``numpy.random.Generator`` (PCG64), whose
streams are identical across platforms for a given seed.
"""

import numpy as np

from .geometry import ConvexBody, LinearMap, apply_linear_map, minkowski_sum, segment_points

GOLDEN_ANGLE = np.pi * (3.0 - np.sqrt(5.0))


def rng_for(seed, index=None):
    return np.random.default_rng(seed if index is None else [seed, index])


def sphere_directions(n, count):
    """Quasi-uniform antipodally symmetric directions (``count`` is rounded
    up to an even number)."""
    half = (count + 1) // 2
    if n == 1:
        return np.array([[1.0], [-1.0]])
    if n == 2:
        theta = np.pi * np.arange(half) / half
        up = np.column_stack([np.cos(theta), np.sin(theta)])
    elif n == 3:
        k = np.arange(half)
        z = (k + 0.5) / half
        r = np.sqrt(1.0 - z * z)
        phi = k * GOLDEN_ANGLE
        up = np.column_stack([r * np.cos(phi), r * np.sin(phi), z])
    else:
        raise ValueError(f"unsupported dimension {n}")
    return np.vstack([up, -up])


def default_directions(n):
    return sphere_directions(n, {1: 2, 2: 256, 3: 512}[n])


def uniform_sphere(rng, n, m):
    x = rng.standard_normal((m, n))
    return x / np.linalg.norm(x, axis=1)[:, None]


def random_polytope(rng, n, m=20):
    """Symmetrized convex hull of m uniform points on S^{n-1}."""
    while True:
        pts = uniform_sphere(rng, n, m)
        try:
            return ConvexBody.from_vertices(np.vstack([pts, -pts]))
        except ValueError:  # degenerate draw; try again
            continue


def random_linear_map(rng, n, det_range=(0.1, 10.0), max_cond=20.0):
    while True:
        M = rng.standard_normal((n, n))
        det = abs(np.linalg.det(M))
        if det_range[0] <= det <= det_range[1] and np.linalg.cond(M) <= max_cond:
            return LinearMap(M)


def random_box(rng, n, low=0.25, high=4.0):
    return np.exp(rng.uniform(np.log(low), np.log(high), n))


def regular_polygon(k, r=1.0, phase=0.0):
    """Vertices of a regular 2k-gon (k antipodal pairs)."""
    theta = phase + np.pi * np.arange(2 * k) / k
    return r * np.column_stack([np.cos(theta), np.sin(theta)])


def prism(base_vertices, height):
    """Right prism: planar base in the xy-plane plus [-height, height] e3."""
    base = np.asarray(base_vertices, dtype=float)
    flat = np.column_stack([base, np.zeros(len(base))])
    return minkowski_sum(flat, segment_points([0.0, 0.0, 1.0], height))


def random_cylinder(rng, m=10, oblique=False):
    """Random polygon (m symmetric pairs) plus a segment along e3, optionally
    mapped by a random linear map so the split is no longer orthogonal."""
    pts = uniform_sphere(rng, 2, m) * rng.uniform(0.5, 2.0, (m, 1))
    base = np.vstack([pts, -pts])
    body = prism(base, rng.uniform(0.5, 2.0))
    if oblique:
        body = apply_linear_map(body, random_linear_map(rng, 3))
    return body
