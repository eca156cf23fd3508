import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from scipy.optimize import minimize
from scipy.spatial import ConvexHull

from logmink.geometry import cross_polytope, make_box

settings.register_profile(
    "repo",
    deadline=None,
    max_examples=25,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")


@pytest.fixture
def cube():
    return make_box(1, 1, 1)


@pytest.fixture
def octahedron():
    return cross_polytope(3)


def hull_volume(points):
    """Volume by qhull's own simplex decomposition (independent oracle)."""
    pts = np.asarray(points, dtype=float)
    if pts.shape[1] == 1:
        return float(pts.max() - pts.min())
    return float(ConvexHull(pts).volume)


def qp_distance(vertices, point):
    """Distance from a point to conv(vertices) by minimizing over convex weights."""
    V = np.asarray(vertices, dtype=float)
    m = len(V)
    cons = [{"type": "eq", "fun": lambda w: w.sum() - 1.0, "jac": lambda w: np.ones(m)}]
    res = minimize(
        lambda w: np.sum((w @ V - point) ** 2),
        np.full(m, 1.0 / m),
        jac=lambda w: 2 * V @ (w @ V - point),
        bounds=[(0, 1)] * m,
        constraints=cons,
        method="SLSQP",
        options={"ftol": 1e-15, "maxiter": 500},
    )
    return float(np.sqrt(max(res.fun, 0.0)))
