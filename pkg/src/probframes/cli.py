"""Command-line front end.

Every subcommand reads JSON files, calls one library operation and prints a
single JSON document with a ``status`` field. Exit codes: 0 success, 1 domain
error (e.g. the measure is not a frame), 2 malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import duality, frame, potential, transport
from .errors import ProbFrameError
from .measure import AtomMap, Coupling, DiscreteMeasure, graph_coupling, pushforward, second_moment

EXIT_OK, EXIT_DOMAIN, EXIT_PARSE = 0, 1, 2


class InputError(Exception):
    """Malformed file or argument; maps to exit code 2."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def _read_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"{path}: {exc}") from None


def _load(kind, path: str):
    data = _read_json(path)
    try:
        return kind.from_dict(data)
    except (ProbFrameError, KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: {exc}") from None


def _vector(text: str) -> np.ndarray:
    try:
        return np.array([float(t) for t in text.split(",")], dtype=float)
    except ValueError:
        raise InputError(f"not a comma-separated list of reals: {text!r}") from None


def _coupling_dict(cert: duality.DualCertificate) -> dict:
    return {
        "coupling": cert.coupling.to_dict(),
        "residual": cert.residual,
        "trace_value": cert.trace_value,
        "symmetry_defect": cert.symmetry_defect,
        "valid": cert.valid,
    }


def cmd_info(args):
    mu = _load(DiscreteMeasure, args.measure)
    b = frame.frame_bounds(mu)
    return {
        "dim": mu.dim,
        "second_moment": second_moment(mu),
        "support_size": mu.support_size(),
        "frame_operator": frame.frame_operator(mu).entries.tolist(),
        "A": b.lower,
        "B": b.upper,
        "is_frame": b.is_frame,
        "tight": b.tight,
        "parseval": b.parseval,
        "frame_potential": frame.finite_frame_potential(mu),
    }


def cmd_canonical_dual(args):
    mu = _load(DiscreteMeasure, args.measure)
    fmap, nu = frame.canonical_dual(mu)
    b = frame.frame_bounds(nu)
    return {"map": fmap.to_dict(), "measure": nu.to_dict(), "A": b.lower, "B": b.upper}


def cmd_check_dual(args):
    gamma = _load(Coupling, args.coupling)
    return _coupling_dict(duality.check_dual(gamma))


def cmd_find_dual(args):
    mu = _load(DiscreteMeasure, args.mu)
    nu = _load(DiscreteMeasure, args.nu)
    cert = duality.find_dual_coupling(mu, nu)
    if cert is None:
        return {"status": "infeasible", "feasible": False}
    return {"feasible": True, **_coupling_dict(cert)}


def cmd_psi_h(args):
    mu = _load(DiscreteMeasure, args.mu)
    h = _load(AtomMap, args.h)
    psi = duality.psi_h_dual(mu, h)
    cert = duality.check_dual(graph_coupling(mu, psi))
    return {"map": psi.to_dict(), "measure": pushforward(mu, psi).to_dict(), "residual": cert.residual}


def cmd_pdfp(args):
    mu = _load(DiscreteMeasure, args.mu)
    if args.pushforward:
        target = _load(AtomMap, args.pushforward)
    elif args.nu:
        target = _load(DiscreteMeasure, args.nu)
    else:
        raise InputError("pdfp needs a dual measure or --pushforward")
    if args.p is not None and args.p != 1:
        report = potential.pdfp_2p(mu, target, args.p)
    elif isinstance(target, AtomMap):
        report = potential.pdfp_pushforward(mu, target)
    else:
        report = potential.pdfp(mu, target)
    return report.to_dict()


def cmd_esssup(args):
    mu = _load(DiscreteMeasure, args.mu)
    nu = _load(DiscreteMeasure, args.nu)
    return {
        "esssup": potential.esssup_potential(mu, nu, args.p),
        "lower_bound": potential.esssup_lower_bound(mu, nu, args.p),
    }


def cmd_wasserstein(args):
    mu = _load(DiscreteMeasure, args.mu)
    nu = _load(DiscreteMeasure, args.nu)
    plan = transport.wasserstein(mu, nu, args.p)
    return {"distance": plan.distance, "cost": plan.cost, "p": plan.p, "coupling": plan.coupling.to_dict()}


def cmd_hyperplane(args):
    mu = _load(DiscreteMeasure, args.measure)
    res = transport.hyperplane_projection_distance(mu, _vector(args.x), args.p)
    return {"wp_p": res.wp_p, "moment": res.moment, "difference": abs(res.wp_p - res.moment)}


def cmd_bessel_to_tight(args):
    mu = _load(DiscreteMeasure, args.measure)
    eta = _load(DiscreteMeasure, args.eta) if args.eta else None
    out = frame.bessel_to_tight(mu, args.k, eta, bound=args.bound)
    b = frame.frame_bounds(out)
    return {"measure": out.to_dict(), "A": b.lower, "B": b.upper, "tight": b.tight}


def cmd_perturb(args):
    mu = _load(DiscreteMeasure, args.mu)
    fmap = _load(AtomMap, args.T)
    eta = _load(DiscreteMeasure, args.eta)
    gamma = _load(Coupling, args.gamma)
    cert = duality.perturbation_certificate(mu, fmap, eta, gamma)
    return {"kappa": cert.kappa, "lower_bound": cert.lower_bound, "upper_bound": cert.upper_bound}


def cmd_pythagoras(args):
    mu = _load(DiscreteMeasure, args.measure)
    res = duality.pythagorean_decomposition(mu, _vector(args.f), _vector(args.omega))
    return res._asdict()


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="probframes", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, *positional):
        p = sub.add_parser(name)
        for arg in positional:
            p.add_argument(arg)
        p.set_defaults(func=func)
        return p

    add("info", cmd_info, "measure")
    add("canonical-dual", cmd_canonical_dual, "measure")
    add("check-dual", cmd_check_dual, "coupling")
    add("find-dual", cmd_find_dual, "mu", "nu")
    add("psi-h", cmd_psi_h, "mu", "h")
    p = add("pdfp", cmd_pdfp, "mu")
    p.add_argument("nu", nargs="?")
    p.add_argument("--pushforward", metavar="T.json")
    p.add_argument("--p", type=float)
    p = add("esssup", cmd_esssup, "mu", "nu")
    p.add_argument("--p", type=float, required=True)
    p = add("wasserstein", cmd_wasserstein, "mu", "nu")
    p.add_argument("--p", type=float, default=2.0)
    p = add("hyperplane", cmd_hyperplane, "measure")
    p.add_argument("--x", required=True, help="unit vector, e.g. 1,0")
    p.add_argument("--p", type=float, default=2.0)
    p = add("bessel-to-tight", cmd_bessel_to_tight, "measure")
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--eta")
    p.add_argument("--bound", type=float)
    add("perturb", cmd_perturb, "mu", "T", "eta", "gamma")
    p = add("pythagoras", cmd_pythagoras, "measure")
    p.add_argument("--f", required=True)
    p.add_argument("--omega", required=True)
    return parser


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        result = args.func(args)
    except InputError as exc:
        doc, code = {"status": "error", "error": "InputError", "detail": str(exc)}, EXIT_PARSE
    except ProbFrameError as exc:
        doc, code = {"status": "error", "error": type(exc).__name__, "detail": str(exc)}, EXIT_DOMAIN
    else:
        doc, code = {"status": "ok", **result}, EXIT_OK
    out.write(json.dumps(doc) + "\n")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
