"""Command-line entry point: verify scenario suites, inspect D, refine grids.

Exit codes: 0 all checks passed, 1 at least one check or estimate failed,
2 configuration error (unknown scenario, unreadable file, bad flags).
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass

import numpy as np

from .duflo import EstimateError, estimate_duflo, check_orthogonality, check_semi_invariance, run_suite
from .reports import all_passed
from .scenarios import (
    BUILTIN_IDS,
    ConfigError,
    ScenarioSpec,
    build_scenario,
    list_builtins,
    load_scenario,
    refined_wavelet,
)

ENV_SEED = "QHA_SEED"


@dataclass(frozen=True)
class RunConfig:
    """One resolved invocation: a command, scenario sources, output surface."""

    command: str
    specs: tuple[ScenarioSpec, ...]
    fmt: str = "text"
    out: str | None = None
    grids: int = 3
    trials: int | None = None


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="qha",
        description="Verify scaling-operator laws on builtin and configured scenarios.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--scenario", action="append", default=[],
                       help="builtin id or scenario file path (repeatable)")
        p.add_argument("--all", action="store_true", help="run every builtin scenario")
        p.add_argument("--format", choices=("text", "structured"), default="text")
        p.add_argument("--out", default=None, help="write the report to this path")
        p.add_argument("--seed", type=int, default=None,
                       help=f"seed override (falls back to ${ENV_SEED}, then the builtin default)")
        p.add_argument("--tol-rel", type=float, default=None, help="relative tolerance override")
        p.add_argument("--tol-abs", type=float, default=None, help="absolute tolerance override")
        p.add_argument("--trials", type=int, default=None, help="seeded trials per aggregate check")

    pv = sub.add_parser("verify", help="run the full check suite")
    common(pv)
    pd = sub.add_parser("duflo", help="estimate D and print its diagnostics")
    common(pd)
    pr = sub.add_parser("refine", help="rerun quadrature metrics at successive grid refinements")
    common(pr)
    pr.add_argument("--grids", type=int, default=3, help="number of grid resolutions (>= 2)")
    sub.add_parser("list", help="print the builtin scenario catalog")
    return ap


def _resolve_seed(args) -> int | None:
    if args.seed is not None:
        return args.seed
    env = os.environ.get(ENV_SEED)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ConfigError(f"${ENV_SEED} must be an integer, got {env!r}")
    return None


def resolve_config(args) -> RunConfig:
    """Turn parsed flags into a RunConfig with fully resolved scenario specs."""
    if args.command == "list":
        return RunConfig(command="list", specs=())
    seed = _resolve_seed(args)
    ids: list[str] = []
    if args.all:
        ids.extend(BUILTIN_IDS)
    ids.extend(args.scenario)
    if not ids:
        raise ConfigError("no scenario given; use --scenario <id|path> or --all")
    specs: list[ScenarioSpec] = []
    for token in ids:
        if os.path.sep in token or token.endswith(".ini") or os.path.exists(token):
            if not os.path.exists(token):
                raise ConfigError(f"scenario file {token!r} does not exist")
            spec = load_scenario(token)
        else:
            spec = ScenarioSpec(token)
        specs.append(ScenarioSpec(
            spec.scenario_id,
            seed=seed if seed is not None else spec.seed,
            tol_rel=args.tol_rel if args.tol_rel is not None else spec.tol_rel,
            tol_abs=args.tol_abs if args.tol_abs is not None else spec.tol_abs,
            exponent_grid=spec.exponent_grid,
        ))
    return RunConfig(
        command=args.command,
        specs=tuple(specs),
        fmt=args.format,
        out=args.out,
        grids=getattr(args, "grids", 3),
        trials=args.trials,
    )


def _emit(lines: list[str], out: str | None) -> None:
    text = "\n".join(lines) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_verify(cfg: RunConfig) -> int:
    lines: list[str] = ["qha-report v1"] if cfg.fmt == "structured" else []
    failed = 0
    for spec in cfg.specs:
        scn = build_scenario(spec)
        reports = run_suite(scn, trials=cfg.trials)
        if cfg.fmt == "structured":
            lines.append(f"scenario {spec.scenario_id}")
            lines.append(f"seed {spec.seed}")
            lines.extend(r.row() for r in reports)
            n_fail = sum(not r.passed for r in reports)
            lines.append(f"summary checks={len(reports)} failed={n_fail}")
        else:
            lines.append(f"== {spec.scenario_id} (seed {spec.seed})")
            lines.extend(r.text_row() for r in reports)
        if not all_passed(reports):
            failed += 1
    if cfg.fmt == "text":
        lines.append(f"scenarios: {len(cfg.specs)}, failed: {failed}")
    _emit(lines, cfg.out)
    return 1 if failed else 0


def cmd_duflo(cfg: RunConfig) -> int:
    lines: list[str] = []
    code = 0
    for spec in cfg.specs:
        scn = build_scenario(spec)
        x1, x2 = scn.duflo_pair()
        try:
            est = estimate_duflo(scn.action, scn.haar, x1, x2, cross_tol=scn.cross_tol)
        except EstimateError as exc:
            lines.append(f"== {spec.scenario_id}: estimate failed: {exc}")
            code = 1
            continue
        semi = check_semi_invariance(scn.action, scn.haar, est, tol_rel=scn.tol_rel,
                                     scenario=spec.scenario_id)
        lines.append(f"== {spec.scenario_id}")
        for k, blk in enumerate(est.d.blocks):
            spectrum = np.sort(np.linalg.eigvalsh(0.5 * (blk + blk.conj().T)))
            shown = ", ".join(f"{v:.9g}" for v in spectrum[:8])
            more = "" if spectrum.size <= 8 else f", ... ({spectrum.size} total)"
            lines.append(f"  block {k}: spectrum of D = [{shown}{more}]")
        if est.scalar_flag:
            lines.append(f"  scalar: yes, D = {est.scalar_value:.12g} * 1")
        else:
            lines.append(f"  scalar: no (off-scalar residual {est.off_scalar_residual:.3e})")
        lines.append(f"  cross-check residual: {est.cross_check_residual:.3e}")
        lines.append(f"  semi-invariance defect: {semi.lhs:.3e}")
    _emit(lines, cfg.out)
    return code


def cmd_refine(cfg: RunConfig) -> int:
    if cfg.grids < 2:
        raise ConfigError("refinement needs at least 2 grid resolutions")
    lines: list[str] = []
    for spec in cfg.specs:
        scn = build_scenario(spec)
        if not scn.is_quadrature:
            raise ConfigError(f"scenario {spec.scenario_id!r} has an exact finite group; "
                              "refinement is meaningless")
        lines.append(f"== {spec.scenario_id}: residual vs grid refinement")
        lines.append(f"{'level':>5} {'nodes':>8} {'orthogonality':>15} {'semi-invariance':>16} {'cross-check':>12}")
        for level in range(cfg.grids):
            metrics = refinement_metrics(spec, level)
            lines.append(
                f"{level:>5} {metrics['nodes']:>8} {metrics['orthogonality']:>15.6e} "
                f"{metrics['semi_invariance']:>16.6e} {metrics['cross_check']:>12.6e}"
            )
    _emit(lines, cfg.out)
    return 0


def refinement_metrics(spec: ScenarioSpec, level: int) -> dict:
    """Orthogonality, semi-invariance and cross-check residuals at one grid level."""
    scn = refined_wavelet(spec, level)
    rng = scn.rng("refine")
    x1 = scn.random_positive(rng)
    x2 = scn.random_positive(rng)
    est = estimate_duflo(scn.action, scn.haar, x1, x2, cross_tol=None)
    worst = 0.0
    for _ in range(3):
        x = scn.random_positive(rng)
        y = scn.random_positive(rng)
        rep = check_orthogonality(scn.action, scn.haar, est, x, y, positive=True,
                                  tol_rel=scn.tol_rel, scenario=scn.scenario_id)
        worst = max(worst, rep.rel_err)
    semi = check_semi_invariance(scn.action, scn.haar, est, tol_rel=scn.tol_rel,
                                 scenario=scn.scenario_id)
    return {
        "nodes": scn.action.group.node_count,
        "orthogonality": worst,
        "semi_invariance": float(semi.lhs.real if isinstance(semi.lhs, complex) else semi.lhs),
        "cross_check": est.cross_check_residual,
    }


def cmd_list(_cfg: RunConfig) -> int:
    for sid in list_builtins():
        print(sid)
    print("broken-measure  (negative-control fixture; excluded from --all)")
    return 0


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        if cfg.command == "verify":
            return cmd_verify(cfg)
        if cfg.command == "duflo":
            return cmd_duflo(cfg)
        if cfg.command == "refine":
            return cmd_refine(cfg)
        if cfg.command == "list":
            return cmd_list(cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 2


if __name__ == "__main__":
    sys.exit(main())
