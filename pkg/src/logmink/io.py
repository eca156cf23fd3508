"""JSON artifacts for bodies, measures and reports.

Every file written here carries ``"schema": 1``.  On load a body may be
given by vertices or by halfspaces; halfspace normals and measure directions
need not be unit vectors and are normalized here.
"""

import json
import warnings

import numpy as np

from .errors import DimensionMismatch
from .geometry import ConvexBody, SupportSamples, wulff_shape
from .measures import DiscreteMeasure

SCHEMA = 1
ASYMMETRY_WARN = 1e-6


def _check_dim(data, arr):
    dim = data.get("dim")
    if dim is not None and arr.shape[1] != int(dim):
        raise DimensionMismatch(f"declared dim {dim}, data has {arr.shape[1]} coordinates")


def body_from_dict(data):
    if "vertices" in data:
        verts = np.atleast_2d(np.asarray(data["vertices"], dtype=float))
        _check_dim(data, verts)
        return ConvexBody.from_vertices(verts)
    if "halfspaces" in data:
        normals = np.atleast_2d(np.asarray([hs["normal"] for hs in data["halfspaces"]], dtype=float))
        supports = np.asarray([hs["support"] for hs in data["halfspaces"]], dtype=float)
        _check_dim(data, normals)
        return wulff_shape(SupportSamples(normals, supports))
    raise ValueError("body JSON needs 'vertices' or 'halfspaces'")


def body_to_dict(K, include_facets=True):
    out = {"schema": SCHEMA, "type": "body", "dim": K.dim, "vertices": K.vertices.tolist()}
    if include_facets:
        out["volume"] = K.volume
        out["halfspaces"] = [
            {"normal": u.tolist(), "support": float(h), "area": float(a)}
            for u, h, a in zip(K.normals, K.supports, K.areas)
        ]
    return out


def measure_from_dict(data):
    """Measure from JSON; an uneven input is replaced by its symmetrization,
    with a warning if it was off by more than 1e-6 relative."""
    dirs = np.atleast_2d(np.asarray([atom["u"] for atom in data["atoms"]], dtype=float))
    weights = np.asarray([atom["w"] for atom in data["atoms"]], dtype=float)
    _check_dim(data, dirs)
    mu = DiscreteMeasure(dirs, weights, data.get("kind", "generic"))
    deviation = np.abs(mu.weights - mu.antipodal_weights()).max()
    if deviation > 0:
        if deviation > ASYMMETRY_WARN * mu.weights.max():
            warnings.warn(f"measure is not even (deviation {deviation:.3g}); symmetrizing", UserWarning, stacklevel=2)
        mu = mu.symmetrized()
    return mu


def measure_to_dict(mu):
    return {
        "schema": SCHEMA,
        "type": "measure",
        "dim": mu.dim,
        "kind": mu.kind,
        "total": mu.total(),
        "atoms": [{"u": u.tolist(), "w": float(w)} for u, w in zip(mu.directions, mu.weights)],
    }


def read_json(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def load_body(path):
    return body_from_dict(read_json(path))


def load_measure(path):
    return measure_from_dict(read_json(path))


def _plain(o):
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"Object of type {type(o).__name__} is not JSON serializable")


def dumps(obj):
    """Deterministic JSON text (sorted keys, full float precision)."""
    return json.dumps({"schema": SCHEMA, **obj}, sort_keys=True, indent=2, default=_plain) + "\n"


def save_json(obj, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(obj))
