"""Command line entry point: ``cdd-swap {run,check-decoupling,converge,presets}``.

Exit codes: 0 success, 1 usage or configuration error, 2 numerical failure,
3 a check ran but did not pass.
"""

from __future__ import annotations

import argparse
import io
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import _backend
from .config import ConfigError, Scenario, parse_config, preset, presets
from .control import ControlField, decoupling_residual
from .metrics import trajectory_metrics
from .operators import NumericalError
from .solver import SolverError, integrate

log = logging.getLogger("cdd_swap")

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL, EXIT_CHECK_FAILED = 0, 1, 2, 3

CSV_COLUMNS = ("t", "fidelity", "concurrence", "purity", "trace_error", "min_eigenvalue")
DECOUPLING_TOL = 1e-9
CONVERGENCE_TOL = 1e-4


class UsageError(ValueError):
    pass


def scenario_table(sc: Scenario) -> dict[str, np.ndarray]:
    cfg = sc.config
    traj = integrate(cfg)
    cols = trajectory_metrics(traj.states, cfg.exchange, traj.times, cfg.initial_state)
    return {
        "t": traj.times,
        **cols,
        "trace_error": traj.trace_error,
        "min_eigenvalue": traj.min_eigenvalue,
    }


def format_csv(table: dict[str, np.ndarray]) -> str:
    buf = io.StringIO()
    buf.write(",".join(CSV_COLUMNS) + "\n")
    data = np.column_stack([table[c] for c in CSV_COLUMNS])
    for row in data:
        buf.write(",".join(f"{x:.17g}" for x in row) + "\n")
    return buf.getvalue()


def run_scenario(sc: Scenario) -> str:
    """Integrate a scenario and return its trajectory as CSV text."""
    return format_csv(scenario_table(sc))


def check_decoupling(cf: ControlField, quadrature_nodes: int = 4001) -> tuple[float, bool]:
    residual = decoupling_residual(cf, quadrature_nodes)
    return residual, residual < DECOUPLING_TOL


@dataclass
class ConvergenceRow:
    n_steps: int
    fidelity: float
    concurrence: float
    d_fidelity: float | None
    d_concurrence: float | None


def convergence_report(sc: Scenario, refinements: int = 2) -> tuple[list[ConvergenceRow], bool]:
    """Rerun with n_steps doubled ``refinements - 1`` times; compare endpoints."""
    if refinements < 2:
        raise UsageError("convergence needs at least 2 refinements")
    rows = []
    prev = None
    for r in range(refinements):
        cfg = sc.config.replace(n_steps=sc.config.n_steps * 2**r)
        table = scenario_table(Scenario(sc.name, cfg, sc.protected))
        f, c = float(table["fidelity"][-1]), float(table["concurrence"][-1])
        df = dc = None
        if prev is not None:
            df, dc = abs(f - prev[0]), abs(c - prev[1])
        rows.append(ConvergenceRow(cfg.n_steps, f, c, df, dc))
        prev = (f, c)
    last = rows[-1]
    return rows, last.d_fidelity < CONVERGENCE_TOL and last.d_concurrence < CONVERGENCE_TOL


def _load_scenario(args) -> Scenario:
    if args.config and args.preset:
        raise UsageError("give either --preset or --config, not both")
    if args.config:
        text = Path(args.config).read_text()
        cfg = parse_config(text)
        return Scenario(Path(args.config).stem, cfg, cfg.field.enabled)
    return preset(args.preset or "fig1a", protected=not args.unprotected)


def _write(text: str, out: str | None):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _run_one(sc: Scenario) -> tuple[str, str]:
    return sc.label, run_scenario(sc)


def cmd_run(args) -> int:
    if args.all_presets:
        outdir = Path(args.output or ".")
        outdir.mkdir(parents=True, exist_ok=True)
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            for label, csv in pool.map(_run_one, presets()):
                path = outdir / f"{label}.csv"
                path.write_text(csv)
                print(f"wrote {path}", file=sys.stderr)
        return EXIT_OK
    sc = _load_scenario(args)
    _write(run_scenario(sc), args.output)
    return EXIT_OK


def cmd_check_decoupling(args) -> int:
    try:
        cf = ControlField.from_integers(args.nx, args.nz, args.t_c)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if not cf.enabled:
        raise UsageError("decoupling check needs an active control field")
    try:
        residual, ok = check_decoupling(cf, args.nodes)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    print(f"n_x={args.nx} n_z={args.nz} nodes={args.nodes} residual={residual:.3e} "
          f"{'PASS' if ok else 'FAIL'}")
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def cmd_converge(args) -> int:
    sc = _load_scenario(args)
    rows, ok = convergence_report(sc, args.refinements)
    lines = ["n_steps,fidelity,concurrence,d_fidelity,d_concurrence"]
    for r in rows:
        lines.append(",".join([
            str(r.n_steps), f"{r.fidelity:.17g}", f"{r.concurrence:.17g}",
            "" if r.d_fidelity is None else f"{r.d_fidelity:.3e}",
            "" if r.d_concurrence is None else f"{r.d_concurrence:.3e}",
        ]))
    _write("\n".join(lines) + "\n", args.output)
    print("converged" if ok else f"not converged (tolerance {CONVERGENCE_TOL})", file=sys.stderr)
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def cmd_presets(args) -> int:
    for sc in presets():
        cfg = sc.config
        print(f"{sc.label:24s} topology={cfg.topology.value:11s} "
              f"field={'on' if cfg.field.enabled else 'off'}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="cdd-swap",
        description="sqrt(SWAP) gate under continuous dynamical decoupling in ohmic baths",
    )
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def scenario_args(sp):
        sp.add_argument("--preset", choices=["fig1a", "fig1b", "fig1c", "fig1d"])
        sp.add_argument("--config", help="key = value configuration file")
        sp.add_argument("--unprotected", action="store_true",
                        help="run the preset with the control field switched off")
        sp.add_argument("-o", "--output", help="output file (default: stdout)")

    run = sub.add_parser("run", help="integrate one scenario and write its CSV trajectory")
    scenario_args(run)
    run.add_argument("--all-presets", action="store_true",
                     help="run every preset, protected and unprotected, into --output dir")
    run.add_argument("--jobs", type=int, default=None)
    run.set_defaults(func=cmd_run)

    chk = sub.add_parser("check-decoupling", help="verify the cycle average of R(t) vanishes")
    chk.add_argument("--nx", type=int, default=14)
    chk.add_argument("--nz", type=int, default=7)
    chk.add_argument("--t-c", type=float, default=1.0)
    chk.add_argument("--nodes", type=int, default=4001)
    chk.set_defaults(func=cmd_check_decoupling)

    conv = sub.add_parser("converge", help="self-convergence under step doubling")
    scenario_args(conv)
    conv.add_argument("--refinements", type=int, default=2)
    conv.set_defaults(func=cmd_converge)

    pre = sub.add_parser("presets", help="list the built-in scenarios")
    pre.set_defaults(func=cmd_presets)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    log.debug("history convolution backend: %s", _backend.BACKEND)
    try:
        return args.func(args)
    except (UsageError, ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SolverError, NumericalError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
