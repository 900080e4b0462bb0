"""Command-line front end.

Exit codes: 0 success / compatible, 1 error, 2 incompatible (``degree``,
``joint``), 3 simplex input to ``witness``.
"""

import argparse
import csv
import io
import json
import logging
import sys

from . import serialization as ser
from .compat import (construct_incompatible_pair, degree, degree_free_coin,
                     half_coin_joint, is_compatible, joint_from_p,
                     simplex_product_joint, verify_certificate)
from .config import RunConfig, default_tol
from .effects import AffineFunction, Effect, TwoOutcomeMeasurement
from .errors import BadShape, GptCompatError, SimplexInput
from .geometry import facets_at_vertex, is_simplex
from .shapes import make_polytope, parse_shape

EXIT_OK, EXIT_ERROR, EXIT_INCOMPATIBLE, EXIT_SIMPLEX = 0, 1, 2, 3
CSV_HEADER = ("param", "lambda", "mu", "violation")

log = logging.getLogger("gptcompat")


def _fmt(x):
    return f"{x:.9g}"


def _emit(obj, out):
    out.write(ser.dumps(obj) + "\n")


def _polytope(args, cfg):
    spec = parse_shape(args.shape, seed=args.seed)
    return make_polytope(spec, tol=cfg.tol)


def _load_measurement(K, path, cfg):
    return ser.measurement_from_json(K, ser.load_json(path), tol=cfg.tol)


def axes_pair(K):
    """``f_i = (1 + x_i) / 2`` for the first two ambient coordinates."""
    if K.ambient_dim < 2:
        raise BadShape("the axes pair needs at least two coordinates")
    pair = []
    for axis in (0, 1):
        lin = [0.0] * K.ambient_dim
        lin[axis] = 0.5
        pair.append(TwoOutcomeMeasurement(
            Effect.of(AffineFunction.from_ambient(K, lin, 0.5))))
    return tuple(pair)


def analyze_report(K):
    report = {
        "vertices": K.n_vertices,
        "ambient_dim": K.ambient_dim,
        "intrinsic_dim": K.intrinsic_dim,
        "facets": 0,
        "is_simplex": is_simplex(K),
        "per_vertex": [],
    }
    if K.intrinsic_dim >= 1:
        report["facets"] = len(K.facets)
        for v in range(K.n_vertices):
            on, off = facets_at_vertex(K, v)
            report["per_vertex"].append(
                {"vertex": v, "containing": len(on), "disjoint": len(off)})
        report["boundary_property"] = all(
            row["containing"] >= 1 and row["disjoint"] >= 1
            for row in report["per_vertex"])
    return report


def cmd_analyze(args, cfg, out):
    K = _polytope(args, cfg)
    if args.dump:
        with open(args.dump, "w") as fh:
            fh.write(ser.dumps(K.to_json()) + "\n")
    _emit(analyze_report(K), out)
    return EXIT_OK


def _degree(m1, m2, K, cfg, free_coin):
    if free_coin:
        return degree_free_coin(m1, m2, K, gap_tol=cfg.gap_tol)
    return degree(m1, m2, K, gap_tol=cfg.gap_tol)


def cmd_degree(args, cfg, out):
    K = _polytope(args, cfg)
    m1 = _load_measurement(K, args.m1, cfg)
    m2 = _load_measurement(K, args.m2, cfg)
    res = _degree(m1, m2, K, cfg, args.free_coin)
    if cfg.output == "csv":
        violation = res.certificate.violation if res.certificate else 0.0
        out.write(",".join(CSV_HEADER) + "\n")
        out.write(",".join([args.shape, _fmt(res.lam), _fmt(res.mu),
                            _fmt(violation)]) + "\n")
    else:
        _emit(ser.degree_result_to_json(res), out)
    return EXIT_OK if res.compatible else EXIT_INCOMPATIBLE


def cmd_witness(args, cfg, out):
    K = _polytope(args, cfg)
    try:
        m1, m2, res = construct_incompatible_pair(K)
    except SimplexInput as exc:
        print(f"error: {args.shape} is a simplex; {exc}", file=sys.stderr)
        return EXIT_SIMPLEX
    verified = verify_certificate(res.certificate, m1, m2, K)
    _emit({
        "m1": ser.measurement_to_json(m1),
        "m2": ser.measurement_to_json(m2),
        "degree": ser.degree_result_to_json(res),
        "verified_violation": float(verified),
    }, out)
    return EXIT_OK


def _family(text, seed):
    kind, _, rest = text.partition(":")
    try:
        nums = [int(p) for p in rest.split(":")] if rest else []
    except ValueError:
        raise BadShape(f"non-integer parameter in family {text!r}") from None
    if kind == "ngon":
        if len(nums) not in (2, 3):
            raise BadShape("ngon family is ngon:MIN:MAX[:STEP]")
        step = nums[2] if len(nums) == 3 else 1
        if step < 1:
            raise BadShape("step must be positive")
        for n in range(max(nums[0], 3), nums[1] + 1, step):
            yield n, f"ngon:{n}"
    elif kind == "random":
        if len(nums) != 3:
            raise BadShape("random family is random:D:N:COUNT")
        d, n, count = nums
        for s in range(seed, seed + count):
            yield s, f"random:{d}:{n}:{s}"
    else:
        raise BadShape(f"unknown family {kind!r}")


def cmd_sweep(args, cfg, out):
    rows = []
    for param, shape in _family(args.family, args.seed):
        K = make_polytope(parse_shape(shape), tol=cfg.tol)
        if args.m1 and args.m2:
            m1 = _load_measurement(K, args.m1, cfg)
            m2 = _load_measurement(K, args.m2, cfg)
        else:
            m1, m2 = axes_pair(K)
        res = _degree(m1, m2, K, cfg, args.free_coin)
        violation = res.certificate.violation if res.certificate else 0.0
        rows.append((param, res.lam, res.mu, violation))
        log.info("%s: lambda=%.9g", shape, res.lam)
    if cfg.output == "json":
        _emit([dict(zip(CSV_HEADER, r)) for r in rows], out)
        return EXIT_OK
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for param, lam, mu, violation in rows:
        writer.writerow([param, _fmt(lam), _fmt(mu), _fmt(violation)])
    out.write(buf.getvalue())
    return EXIT_OK


def cmd_joint(args, cfg, out):
    K = _polytope(args, cfg)
    m1 = _load_measurement(K, args.m1, cfg)
    m2 = _load_measurement(K, args.m2, cfg)
    if args.method == "product":
        joint = simplex_product_joint(m1, m2, K)
        _emit({"method": "product", "joint": ser.measurement_to_json(joint)},
              out)
        return EXIT_OK
    if args.method == "half-coin":
        joint = half_coin_joint(m1, m2, args.t1, args.t2)
        _emit({"method": "half-coin", "joint": ser.joint_to_json(joint)}, out)
        return EXIT_OK
    if args.p:
        p = ser.affine_from_json(K, ser.load_json(args.p))
        joint = joint_from_p(m1, m2, p, K)
    else:
        res = is_compatible(m1, m2, K)
        if not res.compatible:
            _emit({"method": "p", "compatible": False, "joint": None}, out)
            return EXIT_INCOMPATIBLE
        p, joint = res.p, res.joint
    _emit({"method": "p", "compatible": True, "p": ser.affine_to_json(p),
           "joint": ser.joint_to_json(joint)}, out)
    return EXIT_OK


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None,
                        help="geometric tolerance (default 1e-9 or "
                             "$GPTCOMPAT_TOL)")
    common.add_argument("--gap-tol", type=float, default=1e-7)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--output", choices=("json", "csv"), default=None)
    common.add_argument("-v", "--verbose", action="count", default=0)

    parser = argparse.ArgumentParser(
        prog="gptcompat",
        description="Compatibility of two-outcome measurements on "
                    "polytopal state spaces.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common],
                       help="vertices, facets and simplex test")
    p.add_argument("--shape", required=True)
    p.add_argument("--dump", help="write the pruned polytope JSON here")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("degree", parents=[common],
                       help="degree of compatibility of two measurements")
    p.add_argument("--shape", required=True)
    p.add_argument("--m1", required=True)
    p.add_argument("--m2", required=True)
    p.add_argument("--free-coin", action="store_true")
    p.set_defaults(func=cmd_degree)

    p = sub.add_parser("witness", parents=[common],
                       help="incompatible pair on a non-simplex")
    p.add_argument("--shape", required=True)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("sweep", parents=[common],
                       help="degree over a family of shapes, as CSV")
    p.add_argument("--family", required=True,
                   help="ngon:MIN:MAX[:STEP] or random:D:N:COUNT")
    p.add_argument("--pair", choices=("axes", "files"), default="axes")
    p.add_argument("--m1")
    p.add_argument("--m2")
    p.add_argument("--free-coin", action="store_true")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("joint", parents=[common],
                       help="print a joint measurement")
    p.add_argument("--shape", required=True)
    p.add_argument("--m1", required=True)
    p.add_argument("--m2", required=True)
    p.add_argument("--method", choices=("p", "product", "half-coin"),
                   default="p")
    p.add_argument("--p", help="affine function file for g11")
    p.add_argument("--t1", type=float, default=0.5)
    p.add_argument("--t2", type=float, default=0.5)
    p.set_defaults(func=cmd_joint)
    return parser


def main(argv=None, out=None):
    out = sys.stdout if out is None else out
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(levelname)s %(name)s: %(message)s")
    output = args.output or ("csv" if args.command == "sweep" else "json")
    try:
        cfg = RunConfig(tol=args.tol if args.tol is not None else default_tol(),
                        gap_tol=args.gap_tol, output=output,
                        verbosity=args.verbose)
        if args.command == "sweep" and args.pair == "files" and not (
                args.m1 and args.m2):
            raise BadShape("--pair files needs --m1 and --m2")
        if args.command == "sweep" and args.pair == "axes":
            args.m1 = args.m2 = None
        return args.func(args, cfg, out)
    except FileNotFoundError as exc:
        print(f"error: FileNotFound: {exc.filename}", file=sys.stderr)
    except json.JSONDecodeError as exc:
        print(f"error: ParseError: {exc}", file=sys.stderr)
    except (GptCompatError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
