"""Command-line front end.

Subcommands: ``steady``, ``trajectory``, ``esd``, ``neighborhood``,
``validate``. Exit codes: 0 success, 1 validation failure, 2 configuration
error, 3 numerical-integrity failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import warnings
from typing import Optional

import numpy as np

from . import channel, esd, lindblad, metrics, neighborhood
from .densmat import DensityMatrix, sample_random_density
from .errors import NumericalIntegrityError, WarmqError, ZeroTemperatureError

EXIT_OK, EXIT_VALIDATION, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3

DEFAULTS = {
    "gamma": 1.0,
    "qubits": 2,
    "seed": 0,
    "points": 101,
    "epsilon": 0.01,
    "samples": 10_000,
    "restarts": 8,
    "workers": 1,
    "grid": "0,0.1,0.25,0.5,1,2,3,5",
}
FORMAT_DEFAULTS = {"trajectory": "csv", "validate": "csv"}
TRAJECTORY_COLUMNS = ("t", "omega_t", "lambda", "concurrence", "classification")


class ConfigError(Exception):
    pass


def fmt(x) -> str:
    """17 significant digits: exact round trip for doubles."""
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return str(x)


def _json_float(x):
    if x is None or not math.isfinite(x):
        return None
    return float(x)


def read_config(path: str) -> dict:
    """Flat ``key=value`` file; ``#`` starts a comment, dashes in keys are allowed."""
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    for n, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{n}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_").lower()] = value
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key=value file supplying defaults")
    common.add_argument("--gamma", type=float, help="bath decay rate Gamma (default 1)")
    common.add_argument("--nbar", type=float, help="mean thermal occupation")
    common.add_argument("--omega", type=float, help="qubit frequency, with --kt instead of --nbar")
    common.add_argument("--kt", type=float, help="bath temperature k_B T, same units as --omega")
    common.add_argument("--qubits", type=int, help="number of qubits M (default 2)")
    common.add_argument("--state", help="bell+ | bell- | thermal | mixed[:lambda0] | "
                                        "diagonal:<csv> | random:<seed>")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--seed", type=int, help="RNG seed (fallback: WARMQ_SEED, then 0)")
    common.add_argument("--output", "-o", help="output file (default stdout)")

    parser = argparse.ArgumentParser(prog="warmq", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("steady", parents=[common], help="thermal steady state")
    p = sub.add_parser("trajectory", parents=[common], help="Lambda(t) series")
    p.add_argument("--points", type=int)
    p.add_argument("--times", help="comma-separated times instead of a uniform omega grid")
    p = sub.add_parser("esd", parents=[common], help="entanglement sudden death time")
    p.add_argument("--tol", type=float, help="time tolerance of the root")
    p = sub.add_parser("neighborhood", parents=[common], help="separable-neighborhood scan")
    p.add_argument("--epsilon", type=float)
    p.add_argument("--samples", type=int)
    p.add_argument("--restarts", type=int)
    p.add_argument("--workers", type=int)
    p = sub.add_parser("validate", parents=[common], help="run the cross-check suite")
    p.add_argument("--grid", help="comma-separated Gamma*t values")
    p.add_argument("--samples", type=int)
    p.add_argument("--inject-rate-error", type=float, default=0.0, help=argparse.SUPPRESS)
    return parser


def resolve(args: argparse.Namespace) -> argparse.Namespace:
    """Merge command line, config file, environment and defaults, then validate."""
    cfg = read_config(args.config) if args.config else {}
    known = set(vars(args))
    for key in cfg:
        if key not in known:
            raise ConfigError(f"unknown config key {key!r}")
    types = {"gamma": float, "nbar": float, "omega": float, "kt": float, "qubits": int,
             "seed": int, "points": int, "epsilon": float, "samples": int, "restarts": int,
             "workers": int, "tol": float}
    for key in known:
        if getattr(args, key) is None and key in cfg:
            try:
                setattr(args, key, types.get(key, str)(cfg[key]))
            except ValueError as exc:
                raise ConfigError(f"config {key}={cfg[key]!r}: {exc}") from exc
    if args.seed is None and os.environ.get("WARMQ_SEED"):
        try:
            args.seed = int(os.environ["WARMQ_SEED"])
        except ValueError as exc:
            raise ConfigError("WARMQ_SEED must be an integer") from exc
    for key, value in DEFAULTS.items():
        if key in known and getattr(args, key) is None:
            setattr(args, key, value)
    if args.format is None:
        args.format = FORMAT_DEFAULTS.get(args.command, "json")
    for key, value in vars(args).items():
        if isinstance(value, float) and not math.isfinite(value):
            raise ConfigError(f"--{key} must be finite")
    if args.gamma <= 0:
        raise ConfigError("--gamma must be > 0")
    if args.qubits < 1:
        raise ConfigError("--qubits must be >= 1")
    if args.nbar is not None and (args.omega is not None or args.kt is not None):
        raise ConfigError("give either --nbar or --omega/--kt, not both")
    if (args.omega is None) != (args.kt is None):
        raise ConfigError("--omega and --kt go together")
    if args.nbar is not None and args.nbar < 0:
        raise ConfigError("--nbar must be >= 0")
    return args


def nbar_of(args) -> float:
    if args.nbar is not None:
        return args.nbar
    if args.omega is None:
        raise ConfigError("one of --nbar or --omega/--kt is required")
    try:
        return channel.nbar_from_temperature(args.omega, args.kt)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def bath_of(args) -> channel.BathSpec:
    return channel.BathSpec(args.gamma, nbar_of(args))


def initial_state(selector: str, args) -> DensityMatrix:
    s = selector.strip().replace("−", "-")
    if s in ("bell+", "bell-"):
        return esd.bell_state(s[-1])
    if s == "thermal":
        return channel.thermal_state(args.qubits, nbar_of(args)).state
    if s == "mixed" or s.startswith("mixed:"):
        lam0 = float(s.split(":", 1)[1]) if ":" in s else 0.5
        return esd.mixed_state_with_lambda(lam0)
    if s.startswith("random:"):
        return sample_random_density(args.qubits, int(s.split(":", 1)[1]))
    if s.startswith("diagonal:"):
        p = [float(x) for x in s.split(":", 1)[1].split(",")]
        return DensityMatrix(np.diag(np.array(p, dtype=complex)))
    raise ConfigError(f"unknown state selector {selector!r}")


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(x) for x in row])
    return buf.getvalue()


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def cmd_steady(args) -> tuple[int, str]:
    nbar = nbar_of(args)
    st = channel.thermal_state(args.qubits, nbar)
    pairs = channel.pair_probabilities(nbar)
    if args.format == "json":
        return EXIT_OK, _json({
            "qubits": args.qubits,
            "nbar": nbar,
            "diagonal": [float(x) for x in st.diagonal],
            "pair_probabilities": {f"p{k + 1}": p for k, p in enumerate(pairs)},
        })
    rows = [("nbar", nbar)]
    rows += [(f"diag_{k}", x) for k, x in enumerate(st.diagonal)]
    rows += [(f"p{k + 1}", p) for k, p in enumerate(pairs)]
    return EXIT_OK, _csv(("entry", "value"), rows)


def cmd_trajectory(args) -> tuple[int, str]:
    bath = bath_of(args)
    rho0 = initial_state(args.state or "bell+", args)
    if rho0.n_qubits != 2:
        raise ConfigError("trajectory needs a two-qubit state")
    if args.times:
        times = _float_list(args.times, "--times")
        pts = []
        for t in times:
            if t < 0:
                raise ConfigError("--times must be >= 0")
            lam = metrics.lambda_value(channel.evolve(rho0, bath, t))
            pts.append(esd.TrajectoryPoint(t, channel.coefficients(bath, t).omega_t, lam,
                                           max(0.0, lam), metrics.classify(lam)))
    else:
        if args.points < 2:
            raise ConfigError("--points must be >= 2")
        pts = esd.trajectory(rho0, bath, args.points)
    if args.format == "csv":
        return EXIT_OK, _csv(TRAJECTORY_COLUMNS, [
            (p.t, p.omega_t, p.lambda_, p.concurrence, p.classification) for p in pts])
    return EXIT_OK, _json({
        "gamma_rate": bath.gamma_rate,
        "nbar": bath.nbar,
        "total_rate": bath.total_rate,
        "points": [{
            "t": p.t, "t_scaled": p.t * bath.total_rate, "omega_t": p.omega_t,
            "lambda": p.lambda_, "concurrence": p.concurrence,
            "classification": p.classification,
        } for p in pts],
    })


ESD_NOTE = ("t_esd is the first zero of Lambda(t) under the Kraus channel; "
            "paper_formula_value evaluates the closed-form expression as printed "
            "and is reported for comparison only, it does not match the numerical root")


def cmd_esd(args) -> tuple[int, str]:
    bath = bath_of(args)
    rho0 = initial_state(args.state or "bell+", args)
    if rho0.n_qubits != 2:
        raise ConfigError("esd needs a two-qubit state")
    res = esd.numeric_tesd(rho0, bath, args.tol)
    try:
        printed = esd.paper_tesd_formula(bath.nbar, bath.gamma_rate)
    except ZeroTemperatureError:
        printed = None
    out = {
        "kind": res.kind,
        "t_esd": res.t_esd,
        "t_esd_scaled": res.t_esd_scaled,
        "gamma_sq_at_esd": res.gamma_sq_at_esd,
        "paper_formula_value": printed,
        "already_separable": res.already_separable,
        "lambda_at_infinity": res.lambda_at_infinity,
        "gamma_rate": bath.gamma_rate,
        "nbar": bath.nbar,
        "note": ESD_NOTE,
    }
    if args.format == "json":
        return EXIT_OK, _json(out)
    return EXIT_OK, _csv(tuple(out), [tuple(out.values())])


def cmd_neighborhood(args) -> tuple[int, str]:
    state = args.state or "thermal"
    if state.startswith("diagonal:"):
        try:
            target = neighborhood.DiagonalTarget(tuple(_float_list(state.split(":", 1)[1], "diagonal")))
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    elif state == "thermal":
        target = neighborhood.thermal_target(args.qubits, nbar_of(args))
    else:
        raise ConfigError("neighborhood accepts --state thermal or diagonal:<csv>")
    if args.epsilon < 0 or args.samples < 1 or args.restarts < 1:
        raise ConfigError("need --epsilon >= 0, --samples >= 1, --restarts >= 1")
    rep = neighborhood.random_scan(target, args.epsilon, args.samples, args.seed,
                                   workers=args.workers)
    bound = neighborhood.directed_boundary(target, args.restarts, args.seed)
    out = {
        "target": list(target.diagonal),
        "epsilon": rep.epsilon,
        "samples": rep.samples,
        "accepted": rep.accepted,
        "npt_found": rep.npt_found,
        "max_negativity": rep.max_negativity,
        "boundary_estimate": _json_float(bound),
        "ppt_certifies_separability": rep.ppt_certifies_separability,
        "seed": args.seed,
    }
    if args.format == "json":
        return EXIT_OK, _json(out)
    out["target"] = ";".join(fmt(x) for x in target.diagonal)
    return EXIT_OK, _csv(tuple(out), [tuple(out.values())])


def _float_list(text: str, name: str) -> list[float]:
    items = [s for s in (x.strip() for x in text.split(",")) if s]
    try:
        return [float(x) for x in items]
    except ValueError as exc:
        raise ConfigError(f"{name}: {exc}") from exc


def run_validation(grid, gamma: float = 1.0, samples: int = 2000, seed: int = 0,
                   rate_error: float = 0.0) -> list[dict]:
    """Cross-checks between independent routes; one dict per check."""
    if not grid:
        raise ConfigError("validation grid is empty")
    if any(g < 0 for g in grid):
        raise ConfigError("validation grid values must be >= 0")
    grid = sorted(grid)
    scale = 1.0 + rate_error
    checks = []

    dev = 0.0
    for nbar in (0.0, 0.5, 1.0, 2.0):
        bath = channel.BathSpec(gamma, nbar)
        ctl = lindblad.StepControl.for_bath(bath, fraction=0.01)
        times = [g / gamma for g in grid]
        for rho0 in (sample_random_density(1, seed), sample_random_density(2, seed),
                     esd.bell_state("+"), esd.bell_state("-")):
            rep = lindblad.compare_to_kraus(rho0, bath, times, ctl, rate_scale=scale)
            dev = max(dev, rep.max_deviation)
    checks.append({"check": "kraus_vs_lindblad", "max_deviation": dev, "tolerance": 1e-6})

    dev = 0.0
    for nbar in (0.0, 0.5, 1.0, 2.0, 4.0):
        bath = channel.BathSpec(gamma, nbar)
        for g in grid:
            t = g / gamma
            closed = esd.bell_lambda_closed_form(nbar, channel.coefficients(bath, t))
            full = metrics.lambda_value(channel.evolve(esd.bell_state("+"), bath, t))
            dev = max(dev, abs(closed - full))
    checks.append({"check": "closed_form_vs_channel", "max_deviation": dev, "tolerance": 1e-10})

    disagree = 0
    for k in range(samples):
        rho = sample_random_density(2, seed + 1 + k)
        lam = metrics.lambda_value(rho)
        if abs(lam) <= 1e-9:
            continue
        if (lam > 1e-9) != (metrics.min_pt_eigenvalue(rho, [1]) < -1e-9):
            disagree += 1
    checks.append({"check": "peres_vs_wootters", "max_deviation": float(disagree), "tolerance": 0.0})

    bath = channel.BathSpec(gamma, 1.0)
    kraus = esd.numeric_tesd(esd.bell_state("+"), bath)
    spec = lindblad.LindbladSpec(bath, rate_scale=scale)
    ctl = lindblad.StepControl.for_bath(bath, fraction=0.01)
    lam_l = metrics.lambda_value(lindblad.integrate(esd.bell_state("+"), spec, kraus.t_esd, ctl))
    checks.append({"check": "esd_root_lindblad", "max_deviation": abs(lam_l), "tolerance": 1e-6})

    for c in checks:
        c["passed"] = bool(c["max_deviation"] <= c["tolerance"])
    return checks


def cmd_validate(args) -> tuple[int, str]:
    grid = _float_list(args.grid, "--grid")
    checks = run_validation(grid, args.gamma, args.samples, args.seed, args.inject_rate_error)
    code = EXIT_OK if all(c["passed"] for c in checks) else EXIT_VALIDATION
    if args.format == "json":
        return code, _json({"passed": code == EXIT_OK, "checks": checks})
    cols = ("check", "max_deviation", "tolerance", "passed")
    return code, _csv(cols, [tuple(c[k] for k in cols) for c in checks])


COMMANDS = {
    "steady": cmd_steady,
    "trajectory": cmd_trajectory,
    "esd": cmd_esd,
    "neighborhood": cmd_neighborhood,
    "validate": cmd_validate,
}


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args = resolve(args)
        with warnings.catch_warnings():
            warnings.simplefilter("always")
            warnings.showwarning = _warn_stderr
            code, text = COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"warmq: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalIntegrityError as exc:
        print(f"warmq: numerical integrity failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (WarmqError, ValueError) as exc:
        print(f"warmq: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


def _warn_stderr(message, category, filename, lineno, file=None, line=None):
    print(f"warmq: warning: {message}", file=sys.stderr)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
