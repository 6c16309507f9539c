"""Command-line front end.

Subcommands: verify (property suite), flow (reduced trajectories), duality
(apply S / S_inv / R), mapclass (generator words), polytope (moment-image
samples), map-point (parametrize a point and report its Lax data).
All angles are radians; --y additionally accepts the literal "pi/(2n)".
"""

import argparse
import csv
import json
import math
import sys

import numpy as np

from .coupling import Coupling
from .double import InvariantHamiltonian
from .errors import RSDualError
from .lax import global_lax
from .projective import (
    e_param,
    load_point,
    moment_J_full,
    point_to_json,
    random_point,
)
from .reduction import (
    action_variables,
    duality,
    mapclass_on_P,
    reduced_trajectory,
    section_F,
)
from .verify import SuiteConfig, run_suite


def _parse_y(text, n):
    text = text.strip().replace(" ", "")
    if text == "pi/(2n)":
        return math.pi / (2 * n)
    return float(text)


def _coupling(args):
    n = int(args.n)
    return Coupling(n, _parse_y(args.y, n))


def _matrix_json(m):
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m)]


def _emit(payload, out):
    text = json.dumps(payload, indent=2)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _point_from_args(args, c, rng_seed=0):
    if getattr(args, "point", None):
        return load_point(args.point, c)
    return random_point(c, np.random.default_rng(rng_seed))


def _parse_hamiltonian(text, side):
    name, _, idx = text.partition(":")
    index = int(idx) if idx else 1
    name = name.strip().lower()
    if name == "position":
        return InvariantHamiltonian("spectral", index, "second")
    if name == "action":
        return InvariantHamiltonian("spectral", index, "first")
    if name == "spectral":
        return InvariantHamiltonian("spectral", index, side or "first")
    if name == "retrace":
        return InvariantHamiltonian("re_trace", index, side or "first")
    if name == "imtrace":
        return InvariantHamiltonian("im_trace", index, side or "first")
    if name == "dehn":
        return InvariantHamiltonian("dehn", 1, side or "second")
    raise ValueError(f"unknown hamiltonian {text!r}")


def _point_summary(u, c):
    return {
        "point": point_to_json(u),
        "J": [float(x) for x in moment_J_full(u, c)[: c.n - 1]],
        "XiK": [float(x) for x in action_variables(u, c)],
    }


def cmd_verify(args):
    n_list = tuple(int(x) for x in args.n.split(","))
    if isinstance(args.y, str) and args.y.replace(" ", "") == "pi/(2n)":
        y_rule = "pi/(2n)"
    else:
        ys = [float(x) for x in args.y.split(",")]
        y_rule = ys if len(ys) > 1 else ys[0]
    tolerances = {}
    for item in args.tol or []:
        key, _, val = item.partition("=")
        if not val:
            raise ValueError(f"--tol expects name=value, got {item!r}")
        tolerances[key] = float(val)
    cfg = SuiteConfig(
        n_list=n_list,
        y_rule=y_rule,
        samples=args.samples,
        seed=args.seed,
        tolerances=tolerances,
        checks=tuple(args.checks.split(",")) if args.checks else (),
        jobs=args.jobs,
    )
    report = run_suite(cfg)
    _emit(report.to_json(), args.out)
    return 0 if report.all_passed else 1


def cmd_flow(args):
    c = _coupling(args)
    u = _point_from_args(args, c, rng_seed=args.seed)
    ham = _parse_hamiltonian(args.hamiltonian, args.side)
    rows = reduced_trajectory(u, ham, args.t, args.steps, c)
    header = ["step", "t"]
    for k in range(1, c.n + 1):
        header += [f"re_u{k}", f"im_u{k}"]
    header += [f"J{k}" for k in range(1, c.n)]
    header += [f"XiK{k}" for k in range(1, c.n)]
    sink = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        writer = csv.writer(sink)
        writer.writerow(header)
        last = None
        for k, t, ut, J, xiK in rows:
            row = [k, f"{t:.15g}"]
            for z in ut:
                row += [f"{z.real:.15g}", f"{z.imag:.15g}"]
            row += [f"{x:.15g}" for x in J]
            row += [f"{x:.15g}" for x in xiK]
            writer.writerow(row)
            last = ut
    finally:
        if args.out:
            sink.close()
    if args.final_point:
        with open(args.final_point, "w") as fh:
            json.dump(point_to_json(last), fh)
    return 0


def cmd_duality(args):
    c = _coupling(args)
    u = _point_from_args(args, c, rng_seed=args.seed)
    image = duality(args.which, u, c)
    payload = {
        "n": c.n,
        "y": c.y,
        "which": args.which,
        "before": _point_summary(u, c),
        "after": _point_summary(image, c),
    }
    payload["point"] = payload["before"]["point"]
    payload["image"] = payload["after"]["point"]
    _emit(payload, args.out)
    return 0


def cmd_mapclass(args):
    c = _coupling(args)
    u = _point_from_args(args, c, rng_seed=args.seed)
    word = args.word.split()
    image = mapclass_on_P(word, u, c)
    payload = {
        "n": c.n,
        "y": c.y,
        "word": word,
        "point": point_to_json(u),
        "image": point_to_json(image),
        "after": _point_summary(image, c),
    }
    _emit(payload, args.out)
    return 0


def cmd_polytope(args):
    c = _coupling(args)
    rng = np.random.default_rng(args.seed)
    header = [f"J{k}" for k in range(1, c.n)] + [f"XiK{k}" for k in range(1, c.n)]
    sink = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        writer = csv.writer(sink)
        writer.writerow(header)
        for _ in range(args.samples):
            u = random_point(c, rng)
            J = moment_J_full(u, c)[: c.n - 1]
            xiK = action_variables(u, c)
            writer.writerow([f"{x:.15g}" for x in J] + [f"{x:.15g}" for x in xiK])
    finally:
        if args.out:
            sink.close()
    return 0


def cmd_map_point(args):
    c = _coupling(args)
    xi = np.array([float(x) for x in args.xi.split(",")])
    theta = np.array([float(x) for x in args.tau.split(",")])
    u = e_param(xi, theta, c)
    p = section_F(u, c.n, c)
    payload = {
        "n": c.n,
        "y": c.y,
        **_point_summary(u, c),
        "K": _matrix_json(global_lax(u, c)),
        "F": {"A": _matrix_json(p.A), "B": _matrix_json(p.B)},
    }
    _emit(payload, args.out)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="rsdual",
        description="Compactified Ruijsenaars-Schneider system: verification and maps.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    pv = sub.add_parser("verify", help="run the property suite")
    pv.add_argument("--n", default="2,3", help="comma list of matrix sizes")
    pv.add_argument("--y", default="pi/(2n)", help="coupling(s); float list or pi/(2n)")
    pv.add_argument("--samples", type=int, default=50)
    pv.add_argument("--seed", type=int, default=0)
    pv.add_argument("--checks", default="", help="comma list of check selectors")
    pv.add_argument("--tol", action="append", help="override tolerance, name=value")
    pv.add_argument("--jobs", type=int, default=1)
    pv.add_argument("--out", default="", help="write report JSON here (default stdout)")
    pv.set_defaults(func=cmd_verify)

    def common(p, needs_point=True):
        p.add_argument("--n", required=True)
        p.add_argument("--y", default="pi/(2n)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default="")
        if needs_point:
            p.add_argument("--point", default="", help="point JSON file (random if omitted)")

    pf = sub.add_parser("flow", help="integrate a reduced Hamiltonian flow")
    common(pf)
    pf.add_argument("--hamiltonian", required=True, help="e.g. retrace:1, position:2, dehn")
    pf.add_argument("--side", choices=["first", "second"], default="")
    pf.add_argument("--t", type=float, required=True)
    pf.add_argument("--steps", type=int, default=100)
    pf.add_argument("--final-point", default="", help="also dump the final point JSON here")
    pf.set_defaults(func=cmd_flow)

    pd = sub.add_parser("duality", help="apply a duality map to a point")
    common(pd)
    pd.add_argument("--which", choices=["S", "S_inv", "R"], default="S")
    pd.set_defaults(func=cmd_duality)

    pm = sub.add_parser("mapclass", help="apply a mapping-class word")
    common(pm)
    pm.add_argument("--word", required=True, help='e.g. "T Ttilde T"')
    pm.set_defaults(func=cmd_mapclass)

    pp = sub.add_parser("polytope", help="sample (J, Xi o K) pairs to CSV")
    common(pp, needs_point=False)
    pp.add_argument("--samples", type=int, default=1000)
    pp.set_defaults(func=cmd_polytope)

    pmp = sub.add_parser("map-point", help="parametrize a point and report Lax data")
    pmp.add_argument("--n", required=True)
    pmp.add_argument("--y", default="pi/(2n)")
    pmp.add_argument("--xi", required=True, help="comma list of n-1 polytope coordinates")
    pmp.add_argument("--tau", required=True, help="comma list of n-1 torus angles")
    pmp.add_argument("--out", default="")
    pmp.set_defaults(func=cmd_map_point)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (RSDualError, ValueError) as exc:
        diag = {"error": type(exc).__name__, "message": str(exc)}
        print(json.dumps(diag), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
