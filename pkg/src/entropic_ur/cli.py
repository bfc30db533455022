"""Command-line entry point.

Exit codes: 0 ok, 1 an inequality or invariant was violated, 2 usage error,
3 numerical failure.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from . import numkernel as nk
from .bounds import entropy_dominates_vn, inequality_tol, majorization_check, uncertainty_report
from .errors import (DimensionMismatchError, DomainError, InvalidPairError, InvalidStateError,
                     NotHermitianError, NumericalError, SpecSyntaxError)
from .proof import CHAIN_TOL, MinimizeResult, proof_trace, selfconsistent_minimize
from .scenarios import (OSC_FIELDS, SWEEP_FIELDS, OscillatorScanConfig, SweepConfig,
                        ensemble_sweep, oscillator_scan, rows_to_csv)
from .specs import GRAMMAR, build_pair, build_state

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3
TOL_ENV = "ENTROPIC_UR_TOL"

log = logging.getLogger("entropic_ur")

GLOBAL_DEFAULTS = {"tol": None, "strict": False, "config": None, "eig": None, "verbose": False}


class UsageError(Exception):
    pass


def _env_tol():
    raw = os.environ.get(TOL_ENV)
    if raw is None:
        return None
    try:
        return float(raw)
    except ValueError:
        raise UsageError(f"{TOL_ENV}={raw!r} is not a number") from None


def _emit(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, default=_json_default) + "\n"


def _json_default(o):
    if isinstance(o, np.generic):
        return o.item()
    raise TypeError(f"not JSON serializable: {type(o).__name__}")


def _require(args, *names):
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        raise UsageError("missing required option(s): " + ", ".join(
            "--" + n.replace("_", "-") for n in missing))


def cmd_verify(args) -> int:
    _require(args, "pair", "state")
    pair = build_pair(args.pair)
    gamma = build_state(args.state, pair)
    tol = args.tol if args.tol is not None else inequality_tol(gamma.dim)
    rep = uncertainty_report(gamma, pair, state_spec=args.state, pair_spec=args.pair, tol=tol)
    problems = rep.violations(tol)
    out = rep.to_dict()
    if rep.counting:
        dom = entropy_dominates_vn(rep, tol)
        ok_x, gap_x = majorization_check(rep.masses_X, gamma.eigenvalues, tol)
        ok_y, gap_y = majorization_check(rep.masses_Y, gamma.eigenvalues, tol)
        out.update(margin_X=dom.margin_X, margin_Y=dom.margin_Y,
                   majorization_gap_X=gap_x, majorization_gap_Y=gap_y)
        if not (dom.ok_X and dom.ok_Y):
            problems.append("a classical entropy is below the von Neumann entropy")
        if not (ok_x and ok_y):
            problems.append("a diagonal is not majorised by the spectrum")
    out["violations"] = problems
    text = _dump(out)
    if args.json:
        Path(args.json).write_text(text, encoding="utf-8")
    sys.stdout.write(text)
    return EXIT_VIOLATION if problems else EXIT_OK


def cmd_prooftrace(args) -> int:
    _require(args, "pair", "state")
    pair = build_pair(args.pair)
    gamma = build_state(args.state, pair)
    tr = proof_trace(gamma, pair, args.eps)
    tol = args.tol if args.tol is not None else CHAIN_TOL
    out = tr.to_dict()
    out.update(state_spec=args.state, pair_spec=args.pair, ok=tr.ok(tol))
    _emit(_dump(out), args.json)
    return EXIT_OK if tr.ok(tol) else EXIT_VIOLATION


def cmd_sweep(args) -> int:
    _require(args, "dim", "trials")
    cfg = SweepConfig(dim=args.dim, trials=args.trials, state_model=args.state_model,
                      pair_model=args.pair_model, seed=args.seed, out=args.out, jobs=args.jobs)
    res = ensemble_sweep(cfg)
    _emit(rows_to_csv(res.rows, SWEEP_FIELDS, res.summary()), cfg.out)
    tol = args.tol if args.tol is not None else 1e-8
    print(f"trials={cfg.trials} min_deficit={res.min_deficit!r} mean_deficit={res.mean_deficit!r}",
          file=sys.stderr)
    return EXIT_VIOLATION if res.violated(tol) else EXIT_OK


def cmd_oscillator(args) -> int:
    _require(args, "betas")
    try:
        betas = [float(b) for b in str(args.betas).split(",") if b.strip()]
    except ValueError:
        raise UsageError(f"--betas expects a comma-separated list, got {args.betas!r}") from None
    cfg = OscillatorScanConfig(betas=betas, M=args.grid, L=args.length, out=args.out)
    rows = oscillator_scan(cfg, strict=args.strict)
    _emit(rows_to_csv(rows, OSC_FIELDS), cfg.out)
    tol = args.tol if args.tol is not None else 1e-8
    return EXIT_VIOLATION if min(r["deficit"] for r in rows) < -tol else EXIT_OK


def cmd_minimize(args) -> int:
    _require(args, "pair", "init")
    pair = build_pair(args.pair)
    gamma0 = build_state(args.init, pair)
    res = selfconsistent_minimize(pair, gamma0, args.iters, eps=args.eps, damping=args.damping)
    _emit(rows_to_csv(res.log, MinimizeResult.LOG_FIELDS), args.out)
    print(f"best_deficit={res.best_deficit!r} best_iter={res.best_iter} "
          f"converged={res.converged}", file=sys.stderr)
    tol = args.tol if args.tol is not None else 1e-8
    return EXIT_VIOLATION if res.best_deficit < -tol else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    # global options are accepted before or after the subcommand; SUPPRESS keeps
    # the subparser from overwriting a value given before it
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--tol", type=float,
                        help=f"inequality slack (default: per command, or ${TOL_ENV})")
    common.add_argument("--strict", action="store_true",
                        help="escalate resolution warnings to errors")
    common.add_argument("--config", help="JSON file of option defaults; flags take precedence")
    common.add_argument("--eig", choices=("lapack", "jacobi"), help="Hermitian eigensolver")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(
        prog="entropic-ur", parents=[common],
        description="Entropic uncertainty bounds on finite weighted spaces (all values in nats).",
        epilog=GRAMMAR, formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    def add(name, func, help_, epilog=None):
        p = sub.add_parser(name, parents=[common], help=help_, epilog=epilog,
                           formatter_class=argparse.RawDescriptionHelpFormatter)
        p.set_defaults(func=func)
        return p

    p = add("verify", cmd_verify, "entropies, bounds and deficit for one state and pair",
            epilog="JSON fields: H_X H_Y S c bound_FL bound_MU bound_Deutsch bound_Rumin "
                   "deficit masses_X masses_Y ...\n\n" + GRAMMAR)
    p.add_argument("--pair")
    p.add_argument("--state")
    p.add_argument("--json", help="also write the report to this path")

    p = add("prooftrace", cmd_prooftrace, "replay the Gibbs / Golden-Thompson / kernel chain",
            epilog=GRAMMAR)
    p.add_argument("--pair")
    p.add_argument("--state")
    p.add_argument("--eps", type=float, default=0.0, help="smoothing weight of I/dim")
    p.add_argument("--json", help="write the trace here instead of stdout")

    p = add("sweep", cmd_sweep, "random ensemble sweep, CSV output",
            epilog="CSV columns: " + ",".join(SWEEP_FIELDS)
                   + "\nfollowed by rows trial=min and trial=mean carrying the deficit summary."
                   "\nmodels: pair haar|dft|identity|fourier:L=..; "
                   "state pure|mixed[:rank=R]|full|maxmixed|gibbs:beta=B")
    p.add_argument("--dim", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--pair-model", default="haar")
    p.add_argument("--state-model", default="mixed")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out")

    p = add("oscillator", cmd_oscillator, "thermal oscillator scan on a periodic grid",
            epilog="CSV columns: " + ",".join(OSC_FIELDS))
    p.add_argument("--betas", help="comma-separated inverse temperatures")
    p.add_argument("--grid", type=int, default=512)
    p.add_argument("--length", type=float, default=40.0)
    p.add_argument("--out")

    p = add("minimize", cmd_minimize, "self-consistent search for low-deficit states",
            epilog="CSV columns: " + ",".join(MinimizeResult.LOG_FIELDS) + "\n\n" + GRAMMAR)
    p.add_argument("--pair")
    p.add_argument("--init")
    p.add_argument("--iters", type=int, default=50)
    p.add_argument("--eps", type=float, default=1e-12)
    p.add_argument("--damping", type=float, default=0.0)
    p.add_argument("--out")
    return parser


def _apply_config(parser, argv):
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    try:
        cfg = json.loads(Path(known.config).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise UsageError(f"cannot read config {known.config}: {e}") from None
    if not isinstance(cfg, dict):
        raise UsageError("config file must hold a JSON object")
    cfg = {k.replace("-", "_"): v for k, v in cfg.items()}
    glob = {k: v for k, v in cfg.items() if k in GLOBAL_DEFAULTS}
    local = {k: v for k, v in cfg.items() if k not in GLOBAL_DEFAULTS}
    parser.set_defaults(**glob)
    for action in parser._subparsers._group_actions:
        for sp in action.choices.values():
            sp.set_defaults(**local)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        _apply_config(parser, argv)
        args = parser.parse_args(argv)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as e:
        return int(e.code or 0)
    for k, v in GLOBAL_DEFAULTS.items():
        if not hasattr(args, k):
            setattr(args, k, v)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if not getattr(args, "func", None):
        parser.print_help(sys.stderr)
        return EXIT_USAGE
    prev = nk.get_default_method()
    try:
        if args.tol is None:
            args.tol = _env_tol()
        if args.eig:
            nk.set_default_method(args.eig)
        return args.func(args)
    except (NumericalError, DomainError, NotHermitianError, np.linalg.LinAlgError,
            FloatingPointError, OverflowError) as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    except (UsageError, SpecSyntaxError, InvalidPairError, InvalidStateError,
            DimensionMismatchError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        nk.set_default_method(prev)


def cli_main(argv) -> int:
    return main(argv)


if __name__ == "__main__":
    sys.exit(main())
