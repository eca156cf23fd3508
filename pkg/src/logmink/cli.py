"""Command-line entry point: ``logmink <command> ...``.

Every command writes UTF-8 JSON (or CSV for sweeps) to ``--output`` or
stdout.  Errors are reported on stderr as ``{"error": code, "message": ...}``
with exit code 2; ``verify`` exits with 3 when the inequality fails in a
case where it is a theorem.
"""

import argparse
import csv
import io as _io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import __version__
from .combinations import log_combination, lp_combination
from .errors import LogMinkError, NoDescent
from .geometry import LinearMap, apply_linear_map, make_box, minkowski_sum
from .inequality import detect_cylinder, verify_log_minkowski
from .io import body_from_dict, body_to_dict, dumps, load_body, load_measure, measure_to_dict, read_json
from .measures import cone_volume_measure, surface_area_measure, transform_surface_measure
from .sampling import prism, random_box, random_cylinder, random_polytope, rng_for, uniform_sphere
from .solver import ExtremumProblem, solve_extremum

DEFAULT_SEED = 42
FAMILIES = ("planar-random", "cylinder3d-random", "boxes", "prisms")
SWEEP_COLUMNS = ["seed", "index", "volume_K", "volume_L", "lhs", "rhs", "gap", "class"]

EXIT_OK, EXIT_ERROR, EXIT_VIOLATION = 0, 2, 3


class CliError(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def resolve_seed(arg):
    """Explicit --seed wins, then LOGMINK_SEED, then the default 42."""
    if arg is not None:
        return arg
    env = os.environ.get("LOGMINK_SEED")
    if env:
        try:
            return int(env)
        except ValueError:
            raise CliError("InvalidSeed", f"LOGMINK_SEED={env!r} is not an integer") from None
    return DEFAULT_SEED


def parse_matrix(text):
    """A matrix from a JSON file ({"matrix": [...]} or a bare list) or an
    inline JSON list."""
    if os.path.exists(text):
        data = read_json(text)
    else:
        try:
            data = json.loads(text)
        except json.JSONDecodeError:
            raise CliError("InvalidInput", f"{text!r} is neither a file nor a JSON matrix") from None
    if isinstance(data, dict):
        data = data["matrix"]
    return LinearMap(np.asarray(data, dtype=float))


def emit(text, output):
    if output:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- commands ------------------------------------------------------------


def cmd_wulff(args):
    data = read_json(args.input)
    if "halfspaces" not in data:
        raise CliError("InvalidInput", "wulff input needs a 'halfspaces' list")
    K = body_from_dict({"dim": data.get("dim"), "halfspaces": data["halfspaces"]})
    emit(dumps(body_to_dict(K)), args.output)
    return EXIT_OK


def cmd_verify(args):
    K, L = load_body(args.K), load_body(args.L)
    T = parse_matrix(args.pre_transform) if args.pre_transform else None
    report = verify_log_minkowski(K, L, tol=args.tol, pre_transform=T)
    emit(dumps(report.to_dict()), args.output)
    return EXIT_VIOLATION if report.passed is False else EXIT_OK


def _sweep_pair(family, rng, m):
    if family == "planar-random":
        return random_polytope(rng, 2, m), random_polytope(rng, 2, m)
    if family == "cylinder3d-random":
        return random_cylinder(rng, oblique=bool(rng.integers(2))), random_polytope(rng, 3, m)
    if family == "boxes":
        return make_box(*random_box(rng, 3)), make_box(*random_box(rng, 3))
    if family == "prisms":
        base = random_polytope(rng, 2, 8).vertices
        K = prism(base, rng.uniform(0.5, 2.0))
        if rng.integers(2):
            # relative cylinder of K: dilated base, different height
            L = prism(rng.uniform(0.5, 2.0) * base, rng.uniform(0.5, 2.0))
        else:
            bump = 0.3 * uniform_sphere(rng, 3, 6)
            L = minkowski_sum(prism(random_polytope(rng, 2, 8).vertices, 1.0), np.vstack([bump, -bump]))
        return K, L
    raise CliError("UnknownFamily", f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")


def sweep_row(family, seed, index, m, tol):
    """One instance of a sweep; the stream depends only on (seed, index)."""
    K, L = _sweep_pair(family, rng_for(seed, index), m)
    r = verify_log_minkowski(K, L, tol=tol)
    return [seed, index, K.volume, L.volume, r.lhs, r.rhs, r.gap, r.equality_class]


def run_sweep(family, seed, count, m=20, tol=1e-9, jobs=1):
    if family not in FAMILIES:
        raise CliError("UnknownFamily", f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            futures = [pool.submit(sweep_row, family, seed, i, m, tol) for i in range(count)]
            return [f.result() for f in futures]
    return [sweep_row(family, seed, i, m, tol) for i in range(count)]


def format_csv(rows):
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    for row in rows:
        writer.writerow([f"{v:.17g}" if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def cmd_sweep(args):
    seed = resolve_seed(args.seed)
    rows = run_sweep(args.family, seed, args.count, m=args.m, tol=args.tol, jobs=args.jobs)
    if args.format == "csv":
        emit(format_csv(rows), args.output)
    else:
        emit(dumps({"family": args.family, "rows": [dict(zip(SWEEP_COLUMNS, r)) for r in rows]}), args.output)
    if args.figure:
        from .plotting import plot_gap_histogram

        plot_gap_histogram([r[6] for r in rows], args.figure, title=f"{args.family}, seed {seed}")
    return EXIT_OK


def cmd_solve(args):
    mu = load_measure(args.measure)
    problem = ExtremumProblem(mu, enrich=args.enrich, max_iters=args.iters, grad_tol=args.gtol)
    try:
        result = solve_extremum(problem)
    except NoDescent as exc:
        if exc.partial is not None:
            emit(dumps({**exc.partial.to_dict(), "body": body_to_dict(exc.partial.body)}), args.output)
        raise
    emit(dumps({**result.to_dict(), "body": body_to_dict(result.body)}), args.output)
    if args.figure:
        from .plotting import plot_solver_trace

        plot_solver_trace(result.trace, args.figure, title=f"status {result.status}")
    return EXIT_OK


def cmd_measure(args):
    K = load_body(args.body)
    mu = cone_volume_measure(K) if args.kind == "cone-volume" else surface_area_measure(K)
    emit(dumps(measure_to_dict(mu)), args.output)
    return EXIT_OK


def cmd_transform(args):
    K = load_body(args.body)
    T = parse_matrix(args.matrix)
    TK = apply_linear_map(K, T)
    S = transform_surface_measure(surface_area_measure(K), T)
    emit(dumps({"body": body_to_dict(TK), "surface_measure": measure_to_dict(S)}), args.output)
    return EXIT_OK


def cmd_detect(args):
    K = load_body(args.body)
    split = detect_cylinder(K)
    out = {"cylinder": split is not None}
    if split is not None:
        out.update(dims=split.dims, **split.to_dict())
    emit(dumps(out), args.output)
    return EXIT_OK


def cmd_combine(args):
    K, L = load_body(args.K), load_body(args.L)
    if args.p == 0:
        M = log_combination(K, L, args.lam)
    else:
        M = lp_combination(K, L, args.lam, args.p)
    emit(dumps({"p": args.p, "lambda": args.lam, "approximate": True, "body": body_to_dict(M)}), args.output)
    return EXIT_OK


# -- parser --------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(
        prog="logmink",
        description="Cone-volume measures, Wulff shapes and the logarithmic Minkowski inequality for symmetric polytopes.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def out(p):
        p.add_argument("-o", "--output", help="write here instead of stdout")

    p = sub.add_parser("wulff", help="intersect halfspaces from a JSON file")
    p.add_argument("input")
    out(p)
    p.set_defaults(func=cmd_wulff)

    p = sub.add_parser("verify", help="evaluate the inequality for bodies K and L")
    p.add_argument("K")
    p.add_argument("L")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--pre-transform", help="matrix (JSON file or inline list) applied to both bodies first")
    out(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="batch of random instances, one CSV row each")
    p.add_argument("--family", required=True, help=f"one of {', '.join(FAMILIES)}")
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int, default=None, help=f"base seed (default: $LOGMINK_SEED or {DEFAULT_SEED})")
    p.add_argument("--m", type=int, default=20, help="sphere points per random polytope")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--figure", help="also save a gap histogram (PNG/PDF)")
    out(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("solve", help="recover a body from a cone-volume measure")
    p.add_argument("--measure", required=True)
    p.add_argument("--iters", type=int, default=10000)
    p.add_argument("--gtol", type=float, default=1e-8)
    p.add_argument("--enrich", type=int, default=0, help="extra quasi-uniform directions")
    p.add_argument("--figure", help="also save the convergence trace")
    out(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("measure", help="surface-area or cone-volume measure of a body")
    p.add_argument("body")
    p.add_argument("--kind", choices=("cone-volume", "surface"), default="cone-volume")
    out(p)
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("transform", help="apply a linear map to a body and its surface measure")
    p.add_argument("body")
    p.add_argument("--matrix", required=True)
    out(p)
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("detect", help="split a body into cylinder factors")
    p.add_argument("body")
    out(p)
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("combine", help="L_p combination (p > 0) or log combination (p = 0)")
    p.add_argument("K")
    p.add_argument("L")
    p.add_argument("--p", type=float, default=0.0)
    p.add_argument("--lambda", dest="lam", type=float, default=0.5)
    out(p)
    p.set_defaults(func=cmd_combine)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (LogMinkError, CliError) as exc:
        code, message = exc.code, str(exc)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        code, message = "InvalidInput", f"{type(exc).__name__}: {exc}"
    sys.stderr.write(json.dumps({"error": code, "message": message}) + "\n")
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
