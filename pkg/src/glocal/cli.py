"""Command-line entry point: ``glocal <subcommand> [flags]``.

Settings resolve as CLI flag > JSON config file (--config) > built-in default,
and every output echoes the resolved settings.
Exit codes: 0 ok, 1 invalid input, 2 numeric/domain failure, 3 self-test failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import channel, entanglement, evolution, model, steady
from .errors import InvalidInput, NumericalDomainError
from .model import ModelParams, matrix_from_json, matrix_to_json
from .scan import Axis, ScanSpec, csv_text, optimal_curve, run_scan
from .selftest import INJECTIONS, run_selftest

DEFAULTS = {
    "gamma": 0.5, "n_g": 0.0, "n_l": 0.0, "t": None, "mode": "exact",
    "samples": 100_000, "seed": 0, "out": None, "rho0": None,
    "axis": None, "gammas": None, "search_max": 50.0, "inject": None,
}

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC, EXIT_SELFTEST = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--gamma", type=float, help="global/local mixing in [0, 1]")
    common.add_argument("--n-g", dest="n_g", type=float, help="global thermal occupation")
    common.add_argument("--n-l", dest="n_l", type=float, help="local thermal occupation")
    common.add_argument("--t", type=float, help="time (dimensionless)")
    common.add_argument("--mode", choices=["exact", "limit", "mc"])
    common.add_argument("--samples", type=int, help="Monte Carlo sample count")
    common.add_argument("--seed", type=int)
    common.add_argument("--out", help="output file (stdout if omitted)")
    common.add_argument("--config", help="JSON file with default settings")
    common.add_argument("--rho0", help="JSON file holding a 4x4 matrix of [re, im] pairs")

    parser = _Parser(prog="glocal", description="Two qubits under mixed local/global thermal "
                     "dissipation: steady states, channels and entangling power.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("steady", parents=[common], help="stationary state and coefficients")
    sub.add_parser("evolve", parents=[common], help="state at time t")
    sub.add_parser("kraus", parents=[common], help="Kraus set (stationary, or at --t)")
    sub.add_parser("choi", parents=[common], help="Choi matrix at --t")
    sub.add_parser("epower", parents=[common], help="entangling power")
    sc = sub.add_parser("scan", parents=[common], help="entangling power on a grid (CSV)")
    sc.add_argument("--axis", action="append",
                    help="name:min:max:points[:log]; give once or twice")
    oc = sub.add_parser("optimal-curve", parents=[common], help="optimal local noise per gamma (CSV)")
    oc.add_argument("--gammas", help="comma list or min:max:points")
    oc.add_argument("--search-max", dest="search_max", type=float)
    st = sub.add_parser("selftest", parents=[common], help="run invariant checks")
    st.add_argument("--inject", choices=INJECTIONS, help=argparse.SUPPRESS)
    return parser


def resolve(args: argparse.Namespace) -> dict:
    settings = dict(DEFAULTS)
    if args.config:
        try:
            with open(args.config) as fh:
                cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise InvalidInput(f"cannot read config {args.config}: {exc}") from None
        unknown = set(cfg) - set(DEFAULTS)
        if unknown:
            raise InvalidInput(f"unknown config keys {sorted(unknown)}")
        settings.update(cfg)
    explicit = {k: v for k, v in vars(args).items() if k in DEFAULTS and v is not None}
    settings.update(explicit)
    settings["mode_explicit"] = "mode" in explicit or (args.config is not None and "mode" in cfg)
    return settings


def _params(s: dict) -> ModelParams:
    return ModelParams(float(s["gamma"]), float(s["n_g"]), float(s["n_l"]))


def _load_rho0(s: dict, default=None):
    if s["rho0"] is None:
        return default
    try:
        with open(s["rho0"]) as fh:
            rho = matrix_from_json(json.load(fh))
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidInput(f"cannot read rho0 file {s['rho0']}: {exc}") from None
    return model.check_density_matrix(rho)


def _echo(s: dict) -> dict:
    return {k: v for k, v in s.items() if k not in ("out", "config", "mode_explicit")}


def cmd_steady(s: dict) -> dict:
    p = _params(s)
    rho0 = _load_rho0(s, model.pure_state(model.basis_ket(4)) if p.degenerate else None)
    coeffs = steady.steady_coefficients(p, rho0)
    rho = steady.steady_state_closed_form(p, rho0)
    m = model.build_liouvillian(p)
    kernel_dim = evolution.null_space(m).shape[1]
    report = {
        "params": _echo(s),
        "state": matrix_to_json(rho),
        "coefficients": coeffs.to_dict(),
        "kernel_residual": float(np.linalg.norm(m @ model.vectorize(rho))),
        "kernel_dim": int(kernel_dim),
        "concurrence": entanglement.concurrence(rho),
    }
    if kernel_dim > 1 and not p.degenerate:
        report["warning"] = ("steady state is not unique here; the closed form returns the "
                             "fixed point, which is not the long-time limit for every input")
    return report


def cmd_evolve(s: dict) -> dict:
    p = _params(s)
    t = 1.0 if s["t"] is None else float(s["t"])
    rho0 = _load_rho0(s, model.pure_state(model.basis_ket(1)))
    rho = evolution.evolve(p, rho0, t)
    report = {"params": _echo(s) | {"t": t}, "state": matrix_to_json(rho),
              "concurrence": entanglement.concurrence(rho)}
    if p.degenerate:
        report["analytic_deviation"] = float(
            np.abs(rho - evolution.evolve_analytic_pure_global(rho0, t)).max())
    return report


def cmd_kraus(s: dict) -> dict:
    p = _params(s)
    if s["t"] is None:
        kraus = channel.stationary_kraus(p)
        if p.degenerate:
            reference = channel.choi_to_superoperator(channel.choi_matrix_analytic(60.0))
        else:
            fixed = model.vectorize(steady.fixed_point_state(p))
            reference = np.outer(fixed, model.vectorize(np.eye(model.DIM)))
    else:
        t = float(s["t"])
        kraus = channel.kraus_from_choi(channel.choi_matrix(p, t))
        reference = evolution.propagator(p, t)
    return {"params": _echo(s), "kraus": kraus.to_dict(),
            "channel_residual": channel.channel_distance(kraus, reference)}


def cmd_choi(s: dict) -> dict:
    p = _params(s)
    t = 1.0 if s["t"] is None else float(s["t"])
    c = channel.choi_matrix(p, t)
    channel.check_choi(c)
    return {"params": _echo(s) | {"t": t}, "choi": matrix_to_json(c),
            "eigenvalues": np.linalg.eigvalsh(c)[::-1].tolist(), "trace": float(np.trace(c).real)}


def cmd_epower(s: dict) -> dict:
    p = _params(s)
    if s["mode"] == "mc":
        res = entanglement.entangling_power_monte_carlo(p, int(s["samples"]), int(s["seed"]))
    else:
        res = entanglement.entangling_power_closed_form(p, s["mode"])
    return {"params": _echo(s), "result": res.to_dict()}


def _scan_spec(s: dict) -> ScanSpec:
    axes_text = s["axis"] or ["gamma:0:0.999:101", "n_l:0:3:101"]
    axes = tuple(Axis.parse(a) for a in axes_text)
    fixed = {"gamma": float(s["gamma"]), "n_g": float(s["n_g"]), "n_l": float(s["n_l"])}
    spec = ScanSpec(axes, fixed, s["mode"], int(s["samples"]), int(s["seed"]))
    g = spec.grid()["gamma"]
    if np.any(g == 1.0) and not s["mode_explicit"]:
        raise InvalidInput("grid contains gamma=1; pass --mode exact|limit|mc explicitly")
    return spec


def cmd_scan(s: dict) -> str:
    spec = _scan_spec(s)
    return csv_text(run_scan(spec), {"params": _echo(s), "scan": spec.to_dict()})


def _gammas(text) -> np.ndarray:
    if text is None:
        return np.round(np.arange(0.1, 1.0, 0.05), 10)
    if isinstance(text, (list, tuple)):
        return np.asarray(text, dtype=float)
    try:
        if ":" in text:
            lo, hi, n = text.split(":")
            return np.linspace(float(lo), float(hi), int(n))
        return np.array([float(x) for x in text.split(",")])
    except ValueError:
        raise InvalidInput(f"bad gamma list {text!r}") from None


def cmd_optimal_curve(s: dict) -> str:
    gammas = _gammas(s["gammas"])
    if np.any(gammas >= 1) or np.any(gammas < 0):
        raise InvalidInput("gamma values must lie in [0, 1)")
    rows = optimal_curve(float(s["n_g"]), gammas, float(s["search_max"]))
    return csv_text(rows, {"params": _echo(s) | {"gammas": gammas.tolist()}})


def cmd_selftest(s: dict) -> tuple[str, bool]:
    results = run_selftest(s["inject"])
    lines = [f"{'PASS' if ok else 'FAIL'} {name}: {detail}" for name, ok, detail in results]
    return "\n".join(lines) + "\n", all(ok for _, ok, _ in results)


COMMANDS = {
    "steady": cmd_steady, "evolve": cmd_evolve, "kraus": cmd_kraus, "choi": cmd_choi,
    "epower": cmd_epower, "scan": cmd_scan, "optimal-curve": cmd_optimal_curve,
}


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    try:
        with open(out, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise InvalidInput(f"cannot write {out}: {exc}") from None


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        s = resolve(args)
        if args.command == "selftest":
            text, ok = cmd_selftest(s)
            _emit(text, s["out"])
            return EXIT_OK if ok else EXIT_SELFTEST
        result = COMMANDS[args.command](s)
        text = result if isinstance(result, str) else json.dumps(result, indent=2) + "\n"
        _emit(text, s["out"])
    except InvalidInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NumericalDomainError, ArithmeticError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
