"""Command line front end.

Subcommands ``ball``, ``solve``, ``verify`` and ``sweep`` emit CSV or JSON
on stdout. Exit codes: 0 success or pass, 1 verification failure (or a
non-converged solve under ``--strict``), 2 configuration or I/O error.
Column layouts are documented in FORMATS.md.
"""

import argparse
from concurrent.futures import ProcessPoolExecutor
import csv
import io
import json
import logging
import sys

import numpy as np

from .ball_spectrum import ball_spectrum, harmonic_sum_ball, theorem_l
from .hyperbolic_domain import DomainError, StarDomain, parse_domain
from .steklov_solver import IllConditionedError, MetricMode, solve_spectrum
from .symmetric_space import H2, Space
from .test_functions import VolumeConstraintError, verify_theorem

log = logging.getLogger("steklovkit")

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2
RESIDUAL_FLAG = 1e-6

BALL_COLUMNS = ["R", "g", "g_prime", "mu1", "l", "harmonic_sum"]
SPECTRUM_COLUMNS = ["index", "eigenvalue", "residual", "degree", "node_count", "mode"]
REPORT_COLUMNS = ["area", "R", "mu1", "mu2", "mu1_ball", "l", "lhs", "rhs", "gap",
                  "center_x", "center_y", "moment_residual", "qr_lower_residual",
                  "min_relative_slack", "convex", "verdict"]
SWEEP_COLUMNS = ["R0", "eps", "harmonic"] + REPORT_COLUMNS + ["error"]


class ConfigError(Exception):
    pass


def fmt(value):
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.17g}"
    if value is None:
        return ""
    return str(value)


def write_csv(rows, columns, out):
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([fmt(row.get(c)) for c in columns])


def write_json(payload, out):
    json.dump(_jsonable(payload), out, indent=2, sort_keys=True)
    out.write("\n")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def parse_range(text):
    """``a:b:steps`` -> ``steps`` evenly spaced values from a to b inclusive."""
    try:
        a, b, steps = text.split(":")
        a, b, steps = float(a), float(b), int(steps)
    except ValueError as exc:
        raise ConfigError(f"range must look like a:b:steps, got {text!r}") from exc
    if steps < 0:
        raise ConfigError("range step count must be nonnegative")
    return [float(v) for v in np.linspace(a, b, steps)]


def _space(args):
    try:
        return Space.parse(args.space)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _radii(args, required=True):
    if args.radius is not None and args.radius_range is not None:
        raise ConfigError("give either --radius or --radius-range, not both")
    if args.radius is not None:
        radii = [args.radius]
    elif args.radius_range is not None:
        radii = parse_range(args.radius_range)
    elif required:
        raise ConfigError("--radius or --radius-range is required")
    else:
        radii = []
    if any(not r > 0 for r in radii):
        raise ConfigError("radii must be positive")
    return radii


def _degree(args):
    if args.degree < 4:
        raise ConfigError("--degree must be at least 4")
    return args.degree


def read_domain(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read domain file: {exc}") from exc
    try:
        return parse_domain(text)
    except json.JSONDecodeError as exc:
        lines = text.splitlines()
        context = lines[exc.lineno - 1] if 0 < exc.lineno <= len(lines) else ""
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}\n    {context}\n"
                          f"    {' ' * (exc.colno - 1)}^") from exc
    except DomainError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def _require_h2(space):
    if space != H2:
        raise ConfigError("general domains are supported only in the hyperbolic plane "
                          "(--space 1,2); use 'ball' for other spaces")


# --- subcommands --------------------------------------------------------


def cmd_ball(args, out):
    space = _space(args)
    radii = _radii(args)
    l = theorem_l(space)
    rows = []
    for R in radii:
        b = ball_spectrum(space, R)
        rows.append({"R": R, "g": b.g_at_R, "g_prime": b.g_prime_at_R, "mu1": b.mu1,
                     "l": l, "harmonic_sum": harmonic_sum_ball(space, R, l)})
    if args.format == "csv":
        write_csv(rows, BALL_COLUMNS, out)
    else:
        write_json({"space": [space.k, space.n], "name": space.name, "rows": rows}, out)
    if args.plot and rows:
        from .plotting import plot_ball_mu1
        plot_ball_mu1(rows, args.plot, space.name)
    return EXIT_OK


def cmd_solve(args, out):
    mode = MetricMode(args.mode)
    if mode is MetricMode.HYPERBOLIC:
        _require_h2(_space(args))
    domain = read_domain(args.domain)
    degree = _degree(args)
    try:
        spec = solve_spectrum(domain, mode, degree, nodes=args.nodes)
    except (IllConditionedError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    flagged = spec.residual_estimate > RESIDUAL_FLAG
    count = min(args.count + 1, len(spec.eigenvalues))
    if args.format == "csv":
        rows = [{"index": i, "eigenvalue": float(spec.eigenvalues[i]),
                 "residual": float(spec.residuals[i]), "degree": degree,
                 "node_count": spec.node_count, "mode": mode.value} for i in range(count)]
        write_csv(rows, SPECTRUM_COLUMNS, out)
    else:
        payload = spec.to_dict(count)
        payload.update({"converged": not flagged, "domain": domain.to_dict()})
        write_json(payload, out)
    if args.plot:
        log.info("--plot is ignored by 'solve'")
    if flagged:
        log.warning("residual estimate %.3e exceeds %.0e; raise --degree",
                    spec.residual_estimate, RESIDUAL_FLAG)
        if args.strict:
            return EXIT_FAIL
    return EXIT_OK


def report_row(report):
    return {
        "area": report.area, "R": report.R, "mu1": report.mu_domain[0],
        "mu2": report.mu_domain[1], "mu1_ball": report.mu1_ball, "l": report.l,
        "lhs": report.lhs, "rhs": report.rhs, "gap": report.gap,
        "center_x": report.center[0], "center_y": report.center[1],
        "moment_residual": report.moment_residual,
        "qr_lower_residual": report.qr_lower_residual,
        "min_relative_slack": min(s.relative_slack for s in report.steps),
        "convex": report.convex, "verdict": report.verdict,
    }


def _verify_kwargs(args):
    return {"degree": _degree(args), "nodes": args.nodes, "seed": args.seed}


def cmd_verify(args, out):
    _require_h2(_space(args))
    domain = read_domain(args.domain)
    try:
        report = verify_theorem(domain, R=args.radius, domain_id=args.domain,
                                **_verify_kwargs(args))
    except VolumeConstraintError as exc:
        raise ConfigError(str(exc)) from exc
    if args.format == "csv":
        write_csv([report_row(report)], REPORT_COLUMNS, out)
    else:
        write_json(report.to_dict(), out)
    if not report.passed:
        log.warning("verification failed at: %s", ", ".join(report.failed_steps))
    return EXIT_OK if report.passed else EXIT_FAIL


def _sweep_instance(job):
    R0, eps, harmonic, kwargs = job
    row = {"R0": R0, "eps": eps, "harmonic": harmonic}
    try:
        domain = StarDomain.perturbed_ball(R0, eps, mode=harmonic)
        row.update(report_row(verify_theorem(domain, domain_id=f"R0={R0},eps={eps}", **kwargs)))
    except Exception as exc:  # recorded per instance, the batch continues
        row["error"] = f"{type(exc).__name__}: {exc}"
        row["verdict"] = "error"
    return row


def cmd_sweep(args, out):
    _require_h2(_space(args))
    radii = _radii(args)
    eps_values = parse_range(args.eps_range)
    if args.harmonic < 1:
        raise ConfigError("--harmonic must be a positive integer")
    if args.jobs < 1:
        raise ConfigError("--jobs must be positive")
    kwargs = _verify_kwargs(args)
    jobs = sorted(((R0, eps, args.harmonic, kwargs) for R0 in radii for eps in eps_values),
                  key=lambda j: (j[0], j[1]))
    if args.jobs == 1 or len(jobs) <= 1:
        rows = [_sweep_instance(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_sweep_instance, jobs))
    rows.sort(key=lambda r: (r["R0"], r["eps"]))
    if args.format == "csv":
        write_csv(rows, SWEEP_COLUMNS, out)
    else:
        write_json({"seed": args.seed, "degree": kwargs["degree"], "rows": rows}, out)
    if args.plot:
        from .plotting import plot_sweep_gap
        plot_sweep_gap(rows, args.plot)
    return EXIT_OK if all(r["verdict"] == "pass" for r in rows) else EXIT_FAIL


# --- parser -------------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--space", default="1,2", help="space selector k,n (default 1,2)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--plot", metavar="FILE.svg", help="write a static SVG plot")
    common.add_argument("--seed", type=int, default=0, help="seed for randomised frame checks")
    common.add_argument("--degree", type=int, default=32, help="harmonic basis degree N (>= 4)")
    common.add_argument("--nodes", type=int, default=512, help="boundary quadrature nodes")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(
        prog="steklovkit",
        description="Steklov eigenvalues of geodesic balls in rank-one symmetric spaces "
                    "and of star-shaped domains of the hyperbolic plane.",
        epilog="CSV columns per subcommand:\n"
               f"  ball:   {','.join(BALL_COLUMNS)}\n"
               f"  solve:  {','.join(SPECTRUM_COLUMNS)}\n"
               f"  verify: {','.join(REPORT_COLUMNS)}\n"
               f"  sweep:  {','.join(SWEEP_COLUMNS)}\n"
               "Floats carry 17 significant digits. Exit codes: 0 ok, 1 failure, 2 config/IO.",
        formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ball", parents=[common], help="ball spectrum table")
    p.add_argument("--radius", type=float)
    p.add_argument("--radius-range", metavar="A:B:STEPS")
    p.set_defaults(func=cmd_ball)

    p = sub.add_parser("solve", parents=[common], help="Steklov spectrum of a domain file")
    p.add_argument("--domain", required=True, metavar="FILE")
    p.add_argument("--mode", choices=[m.value for m in MetricMode], default="hyperbolic")
    p.add_argument("--count", type=int, default=8, help="nonzero eigenvalues to emit")
    p.add_argument("--strict", action="store_true", help="exit 1 if the residual flag is raised")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", parents=[common], help="check the harmonic-mean bound")
    p.add_argument("--domain", required=True, metavar="FILE")
    p.add_argument("--radius", type=float,
                   help="comparison ball radius; must match the domain's area")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", parents=[common],
                       help="verify r = R0 (1 + eps cos(m theta)) over a grid")
    p.add_argument("--radius", type=float, help="single R0")
    p.add_argument("--radius-range", metavar="A:B:STEPS", help="grid of R0")
    p.add_argument("--eps-range", required=True, metavar="A:B:STEPS")
    p.add_argument("--harmonic", type=int, default=2, help="perturbation harmonic m")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None, out=None):
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    buffer = io.StringIO()
    try:
        code = args.func(args, buffer)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    out.write(buffer.getvalue())
    return code


if __name__ == "__main__":
    raise SystemExit(main())
