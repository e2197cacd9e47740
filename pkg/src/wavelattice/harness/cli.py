"""Command-line interface.

Subcommands: `solve` (one discrete problem from a config), `dispersion`
(dispersion-relation CSV sweep), `experiment <id>` (named experiments
E1-E8), `audit-bounds` (the E8 bound audits alone).  Exit codes: 0 all
checks passed, 1 a tolerance was exceeded, 2 configuration error.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from ..dispersion import beta_arrays, beta_semidiscrete
from ..errors import WaveLatticeError
from ..leapfrog import DiscreteProblem, solve
from ..stencils import dump_level, lattice_points
from .config import ConfigError, ExperimentConfig
from .experiments import (
    audit_dispersion_roots,
    audit_seno_bound,
    default_config,
    run_experiment,
)

__all__ = ["main"]


def _load_config(args, experiment=None) -> ExperimentConfig:
    if args.config is not None:
        cfg = ExperimentConfig.read(args.config)
        if experiment is not None and cfg.experiment != experiment:
            cfg = cfg.with_overrides(experiment=experiment)
    else:
        cfg = default_config(
            experiment or "E1",
            n=getattr(args, "n", None),
            levels=getattr(args, "levels", None),
        )
        return cfg
    return cfg.with_overrides(
        n=getattr(args, "n", None), levels=getattr(args, "levels", None)
    )


def _out_dir(args, default_name: str) -> Path:
    out = Path(args.out) if args.out else Path(default_name)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _cmd_solve(args) -> int:
    cfg = _load_config(args)
    out = _out_dir(args, "solve-out")
    spec = cfg.base_spec()
    problem = DiscreteProblem(
        spec=spec,
        domain=cfg.domain(),
        f=cfg.data("f"),
        g=cfg.data("g"),
        boundary_value=cfg.data("h") or 0.0,
    )
    fieldobj = solve(problem, record="window", t_range=(0.0, spec.T))
    dump_level(fieldobj, spec.steps, out / "final_level.bin")
    points = lattice_points(fieldobj)
    values = fieldobj.level_array(spec.steps)
    mask = fieldobj.support
    with open(out / "final_level.csv", "w", encoding="ascii") as fh:
        cols = ",".join(f"x{k + 1}" for k in range(spec.n))
        fh.write(f"{cols},value\n")
        flat_pts = points.reshape(-1, spec.n)
        for pt, val in zip(flat_pts[mask.ravel()], values[mask]):
            coords = ",".join(f"{c:.17g}" for c in pt)
            fh.write(f"{coords},{val:.17g}\n")
    print(f"solve: wrote {out / 'final_level.csv'}")
    return 0


def _cmd_dispersion(args) -> int:
    cfg = _load_config(args)
    spec = cfg.base_spec()
    out = _out_dir(args, "dispersion-out")
    samples = 200
    direction = np.ones(spec.n) / math.sqrt(spec.n)
    scales = np.linspace(0.0, math.pi / spec.dx, samples + 1)[1:]
    alphas = scales[:, None] * direction[None, :]
    beta = beta_arrays(alphas, spec.dx, spec.dt)
    beta0 = beta_semidiscrete(alphas, spec.dx)
    mags = np.linalg.norm(alphas, axis=-1)
    phase = (beta - mags) / mags
    path = out / "dispersion.csv"
    with open(path, "w", encoding="ascii") as fh:
        cols = ",".join(f"alpha{k + 1}" for k in range(spec.n))
        fh.write(f"{cols},beta,beta0,alpha_abs,phase_error\n")
        for row, b, b0, m, ph in zip(alphas, beta, beta0, mags, phase):
            coords = ",".join(f"{c:.17g}" for c in row)
            fh.write(f"{coords},{b:.17g},{b0:.17g},{m:.17g},{ph:.17g}\n")
    print(f"dispersion: wrote {path}")
    return 0


def _cmd_experiment(args) -> int:
    cfg = _load_config(args, experiment=args.id)
    out = _out_dir(args, f"{args.id.lower()}-out")
    result = run_experiment(cfg, out_dir=out)
    for line in result.notes:
        print(f"{args.id}: {line}")
    print(f"{args.id}: {'PASS' if result.passed else 'FAIL'} (artifacts in {out})")
    return 0 if result.passed else 1


def _cmd_audit_bounds(args) -> int:
    cfg = _load_config(args, experiment="E8")
    samples = 10_000
    ok = True
    violation = audit_seno_bound(cfg.n, cfg.T, samples, cfg.seed)
    print(f"audit-bounds: seno-bound slack {violation:.3e} "
          f"(tol {1e-12 * cfg.T:.1e})")
    if violation > 1e-12 * cfg.T:
        ok = False
    slack = audit_dispersion_roots(cfg.n, samples, cfg.seed + 1)
    print(f"audit-bounds: dispersion-root slack {slack:.3e} (tol 0)")
    if slack > 0.0:
        ok = False
    print(f"audit-bounds: {'PASS' if ok else 'FAIL'}")
    return 0 if ok else 1


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wavelattice",
        description="Discrete wave-equation lattice experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", type=str, default=None,
                       help="experiment config file (key=value sections)")
        p.add_argument("--out", type=str, default=None,
                       help="output directory")
        p.add_argument("--levels", type=int, default=None,
                       help="number of refinement levels")
        p.add_argument("--n", type=int, default=None, choices=(1, 2, 3),
                       help="spatial dimension")

    common(sub.add_parser("solve", help="run one discrete problem"))
    common(sub.add_parser("dispersion", help="emit the dispersion CSV"))
    p_exp = sub.add_parser("experiment", help="run a named experiment")
    p_exp.add_argument("id", choices=[f"E{i}" for i in range(1, 9)])
    common(p_exp)
    common(sub.add_parser("audit-bounds", help="run the randomized bound audits"))
    return parser


def main(argv=None) -> int:
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on bad usage already; re-raise others
        return int(exc.code or 0)
    try:
        if args.command == "solve":
            return _cmd_solve(args)
        if args.command == "dispersion":
            return _cmd_dispersion(args)
        if args.command == "experiment":
            return _cmd_experiment(args)
        if args.command == "audit-bounds":
            return _cmd_audit_bounds(args)
        return 2
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except WaveLatticeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
