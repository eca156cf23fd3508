"""Recovering a body from its cone-volume measure by minimizing a functional.

For an even target measure mu with normalization mu_bar = mu / mu(S^{n-1})
and a positive even function h on a finite direction set U, let

    Phi(h) = sum_i mu_bar_i log h_i - (1/n) log V([h]),

where [h] is the Wulff shape of h.  Phi is invariant under h -> c h.  In the
chart t = log h its gradient is mu_bar_i - V_bar_i, V_bar being the
normalized cone-volume weight of [h] at u_i, so a stationary point is a body
whose normalized cone-volume measure is mu_bar.

The descent works on one variable per antipodal pair of directions (h stays
even), fixes the scale by sum_i mu_bar_i t_i = 0 after every step, and uses
a Barzilai-Borwein trial step with Armijo backtracking.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .errors import AsymmetricInput, DegenerateShape, LogMinkError, NoDescent
from .geometry import (
    SupportSamples,
    hausdorff_distance,
    merge_directions,
    unit,
    wulff_areas,
    wulff_shape,
)
from .inequality import are_relative_cylinders, detect_cylinder
from .measures import DiscreteMeasure, cone_volume_measure, subspace_concentration_check
from .sampling import sphere_directions

# Relative tolerance for merging Wulff vertices during the descent.  It has to
# be far below the geometry default so that short edges appearing near a
# non-simple vertex are resolved and Phi stays smooth at the 1e-16 level.
WULFF_TOL = 1e-13
# Phi is computed with a few ulp of rounding error.  Once the Armijo decrease
# drops below that, a step is accepted on its directional derivative instead
# (an approximate Wolfe test), provided Phi rises by at most this much.
PHI_NOISE = 1e-15
RESIDUAL_TOL = 1e-6
MAX_BACKTRACKS = 60


@dataclass
class ExtremumProblem:
    """Target measure plus descent options.

    ``directions`` adds explicit directions to the support of the target;
    ``enrich`` adds that many quasi-uniform directions.  Either way the set
    is closed under u -> -u.
    """

    target: DiscreteMeasure
    directions: object = None
    enrich: int = 0
    max_iters: int = 10000
    grad_tol: float = 1e-8
    step0: float = 1.0
    shrink: float = 0.5
    armijo: float = 1e-4
    stall_limit: int = 50

    def __post_init__(self):
        mu = self.target
        if mu.total() <= 0:
            raise ValueError("target measure has zero mass")
        if not mu.is_even():
            raise AsymmetricInput("target measure is not even")
        if not 0 < self.shrink < 1 or not 0 < self.armijo < 0.5:
            raise ValueError("need 0 < shrink < 1 and 0 < armijo < 1/2")

    @property
    def dim(self):
        return self.target.dim

    def direction_set(self):
        """(U, mu_bar on U, pair index of every direction)."""
        mu = self.target.normalized()
        n = mu.dim
        parts = [mu.directions, -mu.directions]
        if self.directions is not None:
            extra = unit(np.atleast_2d(np.asarray(self.directions, dtype=float)))
            parts += [extra, -extra]
        if self.enrich:
            parts.append(sphere_directions(n, int(self.enrich)))
        U, _ = merge_directions(np.vstack(parts))
        weights = np.zeros(len(U))
        _, idx = cKDTree(U).query(mu.directions)
        np.add.at(weights, idx, mu.weights)
        _, anti = cKDTree(U).query(-U)
        rep = np.minimum(np.arange(len(U)), anti)
        _, pair = np.unique(rep, return_inverse=True)
        return U, weights, pair.reshape(-1)


@dataclass
class SolverResult:
    body: object
    phi: float
    grad_norm: float
    stationarity_residual: float
    status: str
    scc: object
    iterations: int = 0
    trace: list = field(default_factory=list)  # (iteration, phi, grad_norm)
    support: object = None  # SupportSamples at the final iterate

    def to_dict(self):
        return {
            "status": self.status,
            "phi": self.phi,
            "grad_norm": self.grad_norm,
            "stationarity_residual": self.stationarity_residual,
            "iterations": self.iterations,
            "scc": self.scc.status,
            "trace": [list(row) for row in self.trace],
        }


def _evaluate(U, weights, h, tol=WULFF_TOL):
    """Phi and its log-coordinate gradient for arrays on U (h need not be even)."""
    n = U.shape[1]
    _, areas, _ = wulff_areas(U, h, tol)
    volume = float(h @ areas) / n
    if volume <= 1e-300:
        raise DegenerateShape("Wulff shape has zero volume")
    phi = float(weights @ np.log(h)) - np.log(volume) / n
    return phi, weights - h * areas / (n * volume)


def _weights_on(mu_bar, directions):
    """mu_bar expressed on the given directions; every atom must be present."""
    dist, idx = cKDTree(directions).query(mu_bar.directions)
    if np.any(dist > 1e-7):
        raise ValueError("target has atoms outside the direction set")
    weights = np.zeros(len(directions))
    np.add.at(weights, idx, mu_bar.weights / mu_bar.total())
    return weights


def phi_objective(mu_bar, h):
    """sum mu_bar_i log h_i - (1/n) log V([h]) for SupportSamples h."""
    return _evaluate(h.directions, _weights_on(mu_bar, h.directions), h.values)[0]


def phi_gradient(mu_bar, h):
    """Gradient of phi_objective in the coordinates t_i = log h_i.

    Component i is mu_bar_i - V_bar_i, V_bar_i the normalized cone-volume
    weight of [h] at u_i (zero when the constraint is inactive).
    """
    return _evaluate(h.directions, _weights_on(mu_bar, h.directions), h.values)[1]


def solve_extremum(problem):
    """Minimize Phi from h = 1 and return the Wulff shape of the minimizer.

    ``status`` is ``converged`` when the gradient norm is at most grad_tol
    and the stationarity residual at most 1e-6.  When the target fails the
    strict subspace concentration condition the minimizer need not exist or
    be unique, so the run is labelled ``degenerate_family`` instead (with a
    warning if the condition is violated outright).  Raises NoDescent, with
    the last iterate attached, after ``stall_limit`` consecutive failed line
    searches.
    """
    U, weights, pair = problem.direction_set()
    P = int(pair.max()) + 1
    scc = subspace_concentration_check(problem.target)
    if scc.status == "violated":
        warnings.warn(
            "target violates the subspace concentration condition; "
            "the descent is run but convergence is not claimed",
            RuntimeWarning,
            stacklevel=2,
        )

    def pair_grad(g):
        return np.bincount(pair, weights=g, minlength=P)

    tau = np.zeros(P)
    phi, g = _evaluate(U, weights, np.exp(tau[pair]))
    G = pair_grad(g)
    trace = [(0, phi, float(np.linalg.norm(g)))]
    prev = None
    stalls = 0
    it = 0

    def result(status):
        h = SupportSamples(U, np.exp(tau[pair]))
        return SolverResult(
            body=wulff_shape(h), phi=phi, grad_norm=float(np.linalg.norm(g)),
            stationarity_residual=float(np.abs(g).max()), status=status, scc=scc,
            iterations=it, trace=trace, support=h,
        )

    def is_stationary():
        return np.linalg.norm(g) <= problem.grad_tol and np.abs(g).max() <= RESIDUAL_TOL

    while it < problem.max_iters and not is_stationary():
        it += 1
        d = -G
        slope = float(G @ d)
        step = problem.step0
        if prev is not None:
            dt, dg = tau - prev[0], G - prev[1]
            curv = float(dt @ dg)
            if curv > 0:
                step = float(dt @ dt) / curv
        noise = PHI_NOISE * (1.0 + abs(phi))
        accepted = None
        for _ in range(MAX_BACKTRACKS):
            trial = tau + step * d
            trial -= weights @ trial[pair]
            with np.errstate(over="ignore"):
                h_trial = np.exp(trial[pair])
            if not np.all(np.isfinite(h_trial)):
                step *= problem.shrink
                continue
            try:
                p_new, g_new = _evaluate(U, weights, h_trial)
            except LogMinkError:
                step *= problem.shrink
                continue
            if p_new <= phi + problem.armijo * step * slope:
                accepted = (trial, p_new, g_new)
                break
            G_new = pair_grad(g_new)
            if p_new <= phi + noise and G_new @ d <= (2 * problem.armijo - 1) * slope:
                accepted = (trial, p_new, g_new)
                break
            step *= problem.shrink
        if accepted is None:
            stalls += 1
            prev = None
            if stalls >= problem.stall_limit:
                raise NoDescent(
                    f"line search stalled {stalls} consecutive times at iteration {it}",
                    partial=result("degenerate_family" if scc.status != "strict" else "max_iters"),
                )
            continue
        stalls = 0
        prev = (tau, G)
        tau, phi, g = accepted
        G = pair_grad(g)
        trace.append((it, phi, float(np.linalg.norm(g))))

    if scc.status != "strict":
        status = "degenerate_family"
    elif is_stationary():
        status = "converged"
    else:
        status = "max_iters"
    return result(status)


@dataclass
class RecoveryReport:
    """Outcome of solving for the cone-volume measure of a known body K.

    ``equal``: the result, rescaled to the volume of K, lies within
    ``tol`` * circumradius(K) of K in Hausdorff distance.
    ``relative_cylinder``: K is a cylinder and the result splits over the
    same subspaces with dilatate factors.
    ``verdict`` is ``relative_cylinders`` for cylinders satisfying the
    latter, ``equal`` for non-cylinders satisfying the former and
    ``neither`` otherwise.
    """

    verdict: str
    equal: bool
    relative_cylinder: bool
    hausdorff: float
    cylinder: bool
    result: SolverResult

    def to_dict(self):
        return {
            "verdict": self.verdict,
            "equal": self.equal,
            "relative_cylinder": self.relative_cylinder,
            "hausdorff": self.hausdorff,
            "cylinder": self.cylinder,
            "solver": self.result.to_dict(),
        }


def recover_and_compare(K, tol=1e-5, **options):
    """Solve for cone_volume_measure(K) and compare the minimizer with K."""
    result = solve_extremum(ExtremumProblem(cone_volume_measure(K), **options))
    L = result.body
    L = L.scaled((K.volume / L.volume) ** (1.0 / K.dim))
    dist = hausdorff_distance(K, L) / K.circumradius
    cylinder = detect_cylinder(K) is not None
    relative = cylinder and are_relative_cylinders(K, L, tol=tol)
    equal = bool(dist < tol)
    if cylinder:
        verdict = "relative_cylinders" if relative else "neither"
    else:
        verdict = "equal" if equal else "neither"
    return RecoveryReport(verdict, equal, bool(relative), float(dist), cylinder, result)
