"""Discrete even measures on the sphere: surface-area and cone-volume measures.

For a polytope both measures are atomic, with one atom per facet normal.
The cone-volume atom at u is the volume of the cone from the origin over the
facet with normal u, i.e. ``support * area / n``.
"""

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import DimensionMismatch, SubspaceNotComplementary
from .geometry import LinearMap, Subspace, canonical_sign, merge_directions, unit

DROP_FRACTION = 1e-12
KINDS = ("surface", "cone-volume", "generic")


class DiscreteMeasure:
    """Finite Borel measure on S^{n-1} with atoms (direction, weight >= 0).

    Atoms closer than 1e-9 are merged by adding weights; atoms lighter than
    1e-12 of the total are dropped.
    """

    def __init__(self, directions, weights, kind="generic"):
        if kind not in KINDS:
            raise ValueError(f"unknown measure kind {kind!r}")
        directions = unit(np.atleast_2d(np.asarray(directions, dtype=float)))
        weights = np.asarray(weights, dtype=float).reshape(-1)
        if len(directions) != len(weights):
            raise ValueError("directions and weights differ in length")
        if np.any(weights < 0) or not np.all(np.isfinite(weights)):
            raise ValueError("weights must be finite and nonnegative")
        reps, labels = merge_directions(directions)
        merged = np.bincount(labels, weights=weights, minlength=len(reps))
        keep = merged > DROP_FRACTION * merged.sum()
        self.directions = reps[keep]
        self.weights = merged[keep]
        self.kind = kind
        self.directions.setflags(write=False)
        self.weights.setflags(write=False)

    @property
    def dim(self):
        return self.directions.shape[1]

    def __len__(self):
        return len(self.weights)

    def total(self):
        return float(self.weights.sum())

    def normalized(self):
        return DiscreteMeasure(self.directions, self.weights / self.total(), self.kind)

    def scaled(self, c):
        return DiscreteMeasure(self.directions, c * self.weights, self.kind)

    def weight_at(self, u, tol=1e-7):
        """Total weight of atoms within angle ``tol`` of u."""
        u = unit(np.asarray(u, dtype=float))
        close = np.linalg.norm(self.directions - u, axis=1) <= tol
        return float(self.weights[close].sum())

    def antipodal_weights(self):
        """Weight found at -u for every atom u (0 where -u is absent)."""
        diff = np.linalg.norm(self.directions[:, None, :] + self.directions[None, :, :], axis=2)
        match = diff <= 1e-7
        return np.where(match.any(axis=1), self.weights[match.argmax(axis=1)], 0.0)

    def is_even(self, tol=1e-9):
        other = self.antipodal_weights()
        return bool(np.all(np.abs(self.weights - other) <= tol * np.maximum(1.0, self.weights)))

    def symmetrized(self):
        both = np.vstack([self.directions, -self.directions])
        return DiscreteMeasure(both, 0.5 * np.concatenate([self.weights, self.weights]), self.kind)

    def __repr__(self):
        return f"DiscreteMeasure(kind={self.kind!r}, dim={self.dim}, atoms={len(self)}, total={self.total():.6g})"


def surface_area_measure(K):
    return DiscreteMeasure(K.normals, K.areas, "surface")


def cone_volume_measure(K):
    return DiscreteMeasure(K.normals, K.supports * K.areas / K.dim, "cone-volume")


def transform_surface_measure(S, T):
    """Surface-area measure of TK from that of K.

    The atom (u, a) moves to <T^{-t}u> with weight |det T| |T^{-t}u| a.
    """
    if not isinstance(T, LinearMap):
        T = LinearMap(T)
    if T.dim != S.dim:
        raise DimensionMismatch("map and measure dimensions differ")
    w = T.covector(S.directions)
    scale = np.linalg.norm(w, axis=1)
    return DiscreteMeasure(w, abs(T.det) * scale * S.weights, S.kind)


def transform_cone_volume_measure(V, T):
    """Cone-volume measure of TK from that of K: push the atoms forward
    along u -> <T^{-t}u> and multiply every weight by |det T|."""
    if not isinstance(T, LinearMap):
        T = LinearMap(T)
    if T.dim != V.dim:
        raise DimensionMismatch("map and measure dimensions differ")
    return DiscreteMeasure(T.covector(V.directions), abs(T.det) * V.weights, V.kind)


def product_cone_volume(K1, xi1, K2, xi2):
    """Cone-volume measure of K1 + K2 for bodies in orthogonal complementary
    subspaces, assembled from the factors' own measures.

    ``K1`` and ``K2`` are given in the coordinates of the bases of ``xi1`` and
    ``xi2``.  The result is (k1/n)|K2| V_{K1} + (k2/n)|K1| V_{K2}, with atoms
    embedded in R^n.
    """
    n = xi1.ambient
    if xi2.ambient != n or xi1.dim + xi2.dim != n:
        raise SubspaceNotComplementary("subspace dimensions do not add up to n")
    if np.abs(xi1.basis @ xi2.basis.T).max() > 1e-12:
        raise SubspaceNotComplementary("subspaces are not orthogonal")
    if K1.dim != xi1.dim or K2.dim != xi2.dim:
        raise DimensionMismatch("factor dimension differs from its subspace")
    V1, V2 = cone_volume_measure(K1), cone_volume_measure(K2)
    k1, k2 = xi1.dim, xi2.dim
    dirs = np.vstack([xi1.embed(V1.directions), xi2.embed(V2.directions)])
    weights = np.concatenate([
        k1 / n * K2.volume * V1.weights,
        k2 / n * K1.volume * V2.weights,
    ])
    return DiscreteMeasure(dirs, weights, "cone-volume")


def measures_equal(mu, nu, tol=1e-7, angle_tol=1e-7):
    """Atomwise comparison after aligning directions.

    Returns (equal, report) where report lists the largest matched deviation
    and the unmatched atoms of either side.
    """
    if mu.dim != nu.dim:
        raise DimensionMismatch("measures live on spheres of different dimension")
    dist = np.linalg.norm(mu.directions[:, None, :] - nu.directions[None, :, :], axis=2)
    close = dist <= angle_tol
    mu_hit = close.any(axis=1)
    nu_hit = close.any(axis=0)
    j = close.argmax(axis=1)
    a = mu.weights[mu_hit]
    b = nu.weights[j[mu_hit]]
    dev = np.abs(a - b)
    ok_matched = np.all(dev <= tol * (1.0 + a))
    lone = np.concatenate([mu.weights[~mu_hit], nu.weights[~nu_hit]])
    ok_lone = np.all(lone <= tol)
    report = {
        "matched": int(mu_hit.sum()),
        "max_deviation": float(dev.max()) if len(dev) else 0.0,
        "unmatched_mu": mu.directions[~mu_hit].tolist(),
        "unmatched_nu": nu.directions[~nu_hit].tolist(),
        "max_unmatched_weight": float(lone.max()) if len(lone) else 0.0,
    }
    return bool(ok_matched and ok_lone), report


@dataclass
class ConcentrationResult:
    """Outcome of the subspace concentration check.

    ``status`` is ``strict``, ``equality`` or ``violated``; ``equality_on``
    holds the subspaces where mu(xi) equals (dim xi / n) mu(S^{n-1}) and
    ``violated_on`` those where it exceeds it.
    """

    status: str
    equality_on: list = field(default_factory=list)
    violated_on: list = field(default_factory=list)
    max_ratio: float = 0.0

    @property
    def strict(self):
        return self.status == "strict"


def _candidate_subspaces(dirs):
    n = dirs.shape[1]
    reps, _ = merge_directions(canonical_sign(dirs), 1e-7)
    found = [Subspace(u[None, :]) for u in reps]
    if n == 3:
        normals = []
        for a, b in combinations(range(len(reps)), 2):
            c = np.cross(reps[a], reps[b])
            if np.linalg.norm(c) > 1e-7:
                normals.append(unit(c))
        if normals:
            plane_normals, _ = merge_directions(canonical_sign(np.array(normals)), 1e-7)
            for m in plane_normals:
                found.append(Subspace(Subspace(m[None, :]).complement().basis))
    return found


def subspace_concentration_check(mu, tol=1e-9):
    """Compare mu(xi ∩ S^{n-1}) with (dim xi / n) mu(S^{n-1}) over the proper
    subspaces spanned by support directions of mu."""
    n = mu.dim
    total = mu.total()
    result = ConcentrationResult("strict")
    if n == 1:
        return result
    for xi in _candidate_subspaces(mu.directions):
        mass = float(mu.weights[xi.contains(mu.directions, tol=1e-7)].sum())
        bound = xi.dim / n * total
        result.max_ratio = max(result.max_ratio, mass / bound)
        if mass > bound + tol * total:
            result.violated_on.append(xi)
        elif mass >= bound - tol * total:
            result.equality_on.append(xi)
    if result.violated_on:
        result.status = "violated"
    elif result.equality_on:
        result.status = "equality"
    return result
