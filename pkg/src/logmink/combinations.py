"""L_p and logarithmic Minkowski combinations of symmetric polytopes.

Both are Wulff shapes of a pointwise mean of support functions.  The mean is
sampled on the facet normals of K and L plus a quasi-uniform direction set;
dropping directions only removes halfspaces, so the result contains the exact
combination (it is an outer approximation).
"""

import numpy as np

from .errors import DimensionMismatch, InvalidP
from .geometry import SupportSamples, unit, wulff_shape
from .sampling import default_directions


def _check(K, L, lam):
    if K.dim != L.dim:
        raise DimensionMismatch(f"dimensions {K.dim} and {L.dim} differ")
    if not 0.0 < lam < 1.0:
        raise ValueError(f"lambda must lie in (0, 1), got {lam}")


def combination_directions(K, L, sample_dirs=None):
    extra = default_directions(K.dim) if sample_dirs is None else unit(np.atleast_2d(sample_dirs))
    return np.vstack([K.normals, L.normals, extra])


def lp_combination(K, L, lam, p, sample_dirs=None):
    """Wulff shape of ((1-lam) h_K^p + lam h_L^p)^(1/p)."""
    _check(K, L, lam)
    if not p > 0:
        raise InvalidP(f"p must be positive, got {p}")
    U = combination_directions(K, L, sample_dirs)
    hK, hL = K.support(U), L.support(U)
    # power mean in log space keeps large p from overflowing
    top = np.maximum(hK, hL)
    mean = top * ((1 - lam) * (hK / top) ** p + lam * (hL / top) ** p) ** (1.0 / p)
    body = wulff_shape(SupportSamples(U, mean))
    return body.with_meta(approximate=True, p=float(p), lam=float(lam), directions=len(U))


def log_combination(K, L, lam, sample_dirs=None):
    """Wulff shape of h_K^(1-lam) h_L^lam."""
    _check(K, L, lam)
    U = combination_directions(K, L, sample_dirs)
    hK, hL = K.support(U), L.support(U)
    values = np.exp((1 - lam) * np.log(hK) + lam * np.log(hL))
    body = wulff_shape(SupportSamples(U, values))
    return body.with_meta(approximate=True, p=0.0, lam=float(lam), directions=len(U))
