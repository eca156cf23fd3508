"""The logarithmic Minkowski inequality and its equality cases.

For origin-symmetric K, L the inequality reads

    (1/V(K)) sum_u V_K(u) log(h_L(u)/h_K(u))  >=  (1/n) log(V(L)/V(K)),

the sum running over the facet normals of K.  It is a theorem for n <= 2
and for n = 3 when K is a cylinder; other inputs are evaluated but reported
as conjectural.  Equality holds exactly for dilatates and relative cylinders.
"""

from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import DimensionMismatch, NonpositiveSupport
from .geometry import (
    ConvexBody,
    LinearMap,
    Subspace,
    apply_linear_map,
    canonical_sign,
    hausdorff_distance,
    merge_directions,
    minkowski_sum,
    section,
    unit,
)

CYLINDER_TOL = 1e-8
DILATATE_TOL = 1e-8


def log_minkowski_lhs(K, L):
    """(1/V(K)) * integral of log(h_L/h_K) against the cone-volume measure of K."""
    if K.dim != L.dim:
        raise DimensionMismatch(f"dimensions {K.dim} and {L.dim} differ")
    hL = L.support(K.normals)
    if np.any(hL <= 0):
        raise NonpositiveSupport("h_L vanishes at a facet normal of K")
    cone = K.supports * K.areas / K.dim
    return float(np.dot(cone, np.log(hL / K.supports)) / K.volume)


def log_minkowski_rhs(K, L):
    return float(np.log(L.volume / K.volume) / K.dim)


@dataclass
class CylinderSplit:
    """K = sum of factors K_i, each a body in the coordinates of its subspace."""

    factors: list = field(default_factory=list)  # [(Subspace, ConvexBody)]

    @property
    def dims(self):
        return [xi.dim for xi, _ in self.factors]

    def embedded(self):
        return [xi.embed(body.vertices) for xi, body in self.factors]

    def reassemble(self):
        return minkowski_sum(*self.embedded())

    def to_dict(self):
        return {
            "factors": [
                {"dim": xi.dim, "basis": xi.basis.tolist(), "vertices": xi.embed(b.vertices).tolist()}
                for xi, b in self.factors
            ]
        }


def _segment_factor(direction, half_length):
    d = canonical_sign(unit(direction))[0]
    return Subspace(d[None, :]), ConvexBody.from_vertices([[-half_length], [half_length]])


def _factor_key(factor):
    xi, _ = factor
    if xi.dim == 1:
        key = xi.basis[0]
    else:
        key = canonical_sign(Subspace(xi.basis).complement().basis[0])[0]
    return (-xi.dim, tuple(-np.round(key, 12)))


def _split_parallelogram(P):
    """Two segment factors if the planar body P is a parallelogram."""
    if len(P.normals) != 4:
        return None
    V = P.vertices
    used, factors = set(), []
    for j, f in enumerate(P.facet_vertices):
        d = canonical_sign(unit(V[f[-1]] - V[f[0]]))[0]
        key = tuple(np.round(d, 9))
        if key in used:
            continue
        used.add(key)
        factors.append(_segment_factor(V[f[-1]] - V[f[0]], 0.5 * np.linalg.norm(V[f[-1]] - V[f[0]])))
    if len(factors) != 2:
        return None
    return factors


def _close(A, B, tol):
    return hausdorff_distance(A, B) <= tol * max(1.0, A.circumradius, B.circumradius)


def detect_cylinder(K, tol=CYLINDER_TOL):
    """Finest Minkowski splitting of K into factors in complementary subspaces.

    In the plane the only cylinders are parallelograms.  In space a prism
    over a planar section has facet normals that are either +-m (the caps) or
    orthogonal to the lateral edge direction d; every pair (m, d) of facet
    normal and edge direction passing that test is tried, the split is
    K = (K ∩ m^perp) + (K ∩ span d), and the base is split further when it is
    a parallelogram.  Returns None when K is not a cylinder.
    """
    n = K.dim
    if n == 1:
        return None
    if n == 2:
        factors = _split_parallelogram(K)
        return CylinderSplit(sorted(factors, key=_factor_key)) if factors else None
    N = K.normals
    normals, _ = merge_directions(canonical_sign(N), 1e-7)
    E = K.edges
    dirs, _ = merge_directions(canonical_sign(unit(K.vertices[E[:, 1]] - K.vertices[E[:, 0]])), 1e-7)
    orth = np.abs(N @ dirs.T) <= tol
    for m in normals:
        cap = np.abs(N @ m) >= 1.0 - tol
        ok = np.all(orth | cap[:, None], axis=0) & (np.abs(dirs @ m) > tol)
        for d in dirs[ok]:
            plane = Subspace(Subspace(m[None, :]).complement().basis)
            line = Subspace(d[None, :])
            base, seg = section(K, plane), section(K, line)
            split = CylinderSplit([(plane, base), (line, seg)])
            if not _close(split.reassemble(), K, tol):
                continue
            finer = _split_parallelogram(base)
            if finer:
                factors = [_segment_factor(plane.embed(xi.basis[0]), b.vertices.max()) for xi, b in finer]
                factors.append((line, seg))
            else:
                factors = [(plane, base), (line, seg)]
            return CylinderSplit(sorted(factors, key=_factor_key))
    return None


def are_dilatates(K, L, tol=DILATATE_TOL):
    if K.dim != L.dim:
        return False
    c = (L.volume / K.volume) ** (1.0 / K.dim)
    return _close(K.scaled(c), L, tol)


def are_relative_cylinders(K, L, tol=CYLINDER_TOL):
    """K and L split over the same subspaces with pairwise dilatate factors.

    The finest split of K is used: a coarser common split refines to it,
    because a dilatate of a cylinder factor splits the same way.  The split
    of K is always detected at CYLINDER_TOL; ``tol`` only governs how closely
    L has to match it, so an approximate L (a solver output, say) can be
    compared against an exact K.
    """
    if K.dim != L.dim:
        return False
    split = detect_cylinder(K)
    if split is None:
        return False
    pieces = []
    for xi, Ki in split.factors:
        try:
            Li = section(L, xi)
        except ValueError:
            return False
        if not are_dilatates(Ki, Li, tol):
            return False
        pieces.append(xi.embed(Li.vertices))
    return _close(minkowski_sum(*pieces), L, tol)


def classify_equality(K, L):
    """'dilatates', 'relative_cylinders' or None."""
    if K.dim != L.dim:
        raise DimensionMismatch(f"dimensions {K.dim} and {L.dim} differ")
    if are_dilatates(K, L):
        return "dilatates"
    if are_relative_cylinders(K, L):
        return "relative_cylinders"
    return None


@dataclass
class VerifyReport:
    lhs: float
    rhs: float
    gap: float
    equality_class: str
    conjectural: bool
    tol: float
    regime: str
    passed: object = None  # True/False in proven regimes, None otherwise

    def to_dict(self):
        out = asdict(self)
        out["class"] = out.pop("equality_class")
        return out


def proven_regime(K):
    """Name of the theorem covering K, or None."""
    if K.dim == 1:
        return "segment"
    if K.dim == 2:
        return "planar"
    if detect_cylinder(K) is not None:
        return "cylinder"
    return None


def verify_log_minkowski(K, L, tol=1e-9, pre_transform=None):
    """Evaluate both sides, check the sign of the gap where it is a theorem,
    and classify near-equality.

    ``pre_transform`` applies a common linear map to K and L first; both
    sides are invariant under it, but it can expose a cylinder split.
    """
    if K.dim != L.dim:
        raise DimensionMismatch(f"dimensions {K.dim} and {L.dim} differ")
    if pre_transform is not None:
        T = pre_transform if isinstance(pre_transform, LinearMap) else LinearMap(pre_transform)
        K, L = apply_linear_map(K, T), apply_linear_map(L, T)
    lhs, rhs = log_minkowski_lhs(K, L), log_minkowski_rhs(K, L)
    gap = lhs - rhs
    regime = proven_regime(K)
    if abs(gap) <= tol:
        cls = classify_equality(K, L) or "numerical_tie"
    elif gap > tol:
        cls = "strict"
    else:
        cls = "violated"
    return VerifyReport(
        lhs=lhs, rhs=rhs, gap=gap, equality_class=cls,
        conjectural=regime is None, tol=tol, regime=regime or "conjectural",
        passed=None if regime is None else bool(gap >= -tol),
    )
