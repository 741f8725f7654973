"""Command-line entry point.

Exit codes: 0 ok, 1 input error, 2 infeasible region (a verdict file is written),
3 regression (cross-check above tolerance).
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from . import examples as ex
from .figures import write_figure
from .fme import FIXTURES
from .geometry import GEOM_TOL, Infeasible, RateRegion, points_to_csv, region_to_dict, vertices
from .info import DomainError, FeedbackBudget, StructuralError, assemble_joint
from .io import InputError, dump_json, load_channel, load_scheme, load_twoaux
from .regions import (RegionVerdict, Unsupported, cor1_region, cor1_swapped_region, cor2_region,
                      enhanced_outer, marton, nair_elgamal_outer, simple_scheme, superposition,
                      thm1_region, thm2_scheme_region, thm3_region, thm3_swapped_region,
                      thm4_scheme_region)
from .search import BLACKWELL_STRETCH_SUM, blackwell_optimize, improvement_report
from .validate import fme_check

log = logging.getLogger("bcfb")

EXIT_OK, EXIT_INPUT, EXIT_INFEASIBLE, EXIT_REGRESSION = 0, 1, 2, 3

TWOAUX_BOUNDS = ("sp1", "sp2", "ne-outer", "enh1", "enh2", "simple", "cor1", "cor1-swapped")
BOUNDS = ("marton", "sp1", "sp2", "ne-outer", "enh1", "enh2", "simple", "thm1", "thm2", "thm3",
          "thm3-swapped", "cor1", "cor1-swapped", "thm4", "cor2")


@dataclass
class RunConfig:
    command: str
    out_dir: Path
    inputs: dict[str, str] = field(default_factory=dict)
    budget: FeedbackBudget = field(default_factory=FeedbackBudget)
    grid: int | None = None
    tol: float = GEOM_TOL
    seed: int = 0


def _evaluate(bound: str, cfg: RunConfig) -> RegionVerdict | RateRegion:
    if "channel" not in cfg.inputs:
        raise InputError("--channel", "required for region eval")
    ch = load_channel(cfg.inputs["channel"])
    if "scheme" not in cfg.inputs:
        raise InputError("--scheme", "required for region eval")
    b = cfg.budget
    if bound in TWOAUX_BOUNDS:
        ta, t1, t2 = load_twoaux(cfg.inputs["scheme"])
        if bound in ("sp1", "sp2"):
            return superposition(ta, ch, 1 if bound == "sp1" else 2)
        if bound == "ne-outer":
            return nair_elgamal_outer(ta, ch)
        if bound in ("enh1", "enh2"):
            return enhanced_outer(ta, ch, 1 if bound == "enh1" else 2)
        if bound == "simple":
            if t1 is None:
                raise InputError("$.test1", "the simple scheme needs a test channel for receiver 1")
            return simple_scheme(ta, t1, ch, b)
        if bound == "cor1":
            return cor1_region(ta, t1, ch, b)
        return cor1_swapped_region(ta, t2, ch, b)
    scheme = load_scheme(cfg.inputs["scheme"])
    if bound in ("thm4", "cor2") and scheme.update is None:
        raise InputError("$.update", f"bound {bound} needs an update channel P(v|u0,u1,u2,yt1,yt2)")
    if bound == "marton":
        return marton(assemble_joint(scheme, ch))
    if bound == "thm1":
        return thm1_region(assemble_joint(scheme, ch), b)
    if bound == "thm2":
        return thm2_scheme_region(scheme, ch, b)
    if bound == "thm3":
        return thm3_region(assemble_joint(scheme, ch), b)
    if bound == "thm3-swapped":
        return thm3_swapped_region(assemble_joint(scheme, ch), b)
    if bound == "thm4":
        return thm4_scheme_region(scheme, ch, b)
    return cor2_region(scheme, ch)


def cmd_region_eval(bound: str, cfg: RunConfig) -> int:
    result = _evaluate(bound, cfg)
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    if isinstance(result, RegionVerdict):
        doc = result.to_dict()
        if not result.feasible:
            path = cfg.out_dir / f"{bound}_verdict.json"
            dump_json(doc, path)
            bad = ", ".join(f"{n} ({s:.6g})" for n, s in result.feasibility if s < -cfg.tol)
            print(f"infeasible: negative slack on {bad}; verdict written to {path}")
            return EXIT_INFEASIBLE
        region = result.region
    else:
        region = result
        doc = region_to_dict(region)
    try:
        pts = vertices(region)
    except Infeasible as exc:
        path = cfg.out_dir / f"{bound}_verdict.json"
        doc["empty"] = str(exc)
        dump_json(doc, path)
        print(f"infeasible: {exc}; verdict written to {path}")
        return EXIT_INFEASIBLE
    dump_json(doc, cfg.out_dir / f"{bound}_region.json")
    (cfg.out_dir / f"{bound}_vertices.csv").write_text(points_to_csv(pts))
    print(f"{bound}: {len(pts)} vertices written to {cfg.out_dir}")
    return EXIT_OK


def cmd_figure(fig: int, cfg: RunConfig) -> int:
    for path in write_figure(fig, cfg.out_dir, cfg.grid):
        print(path)
    return EXIT_OK


def cmd_fme_check(fixture: str, trials: int, cfg: RunConfig) -> int:
    names = FIXTURES if fixture == "all" else (fixture,)
    reports = [fme_check(name, trials, cfg.seed) for name in names]
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    dump_json({"tol": cfg.tol, "reports": [r.to_dict() for r in reports]}, cfg.out_dir / "fme_check.json")
    status = EXIT_OK
    for r in reports:
        ok = r.passed(cfg.tol) and r.compared >= trials
        print(f"{r.fixture}: compared {r.compared} (of {r.attempts} draws), "
              f"max discrepancy {r.max_hausdorff:.3e}, mismatches {len(r.mismatches)} -> "
              f"{'ok' if ok else 'REGRESSION'}")
        if not ok:
            status = EXIT_REGRESSION
    return status


def _channel_for_certify(args: argparse.Namespace):
    name = args.channel
    if name == "bsbc":
        return ex.bsbc_channel(args.p1, args.p2)
    if name == "bscbec":
        return ex.bscbec_channel(args.p, args.e)
    return load_channel(name)


def cmd_certify(args: argparse.Namespace, cfg: RunConfig) -> int:
    ch = _channel_for_certify(args)
    report = improvement_report(ch, cfg.budget, n=cfg.grid or 11)
    status = EXIT_OK
    if report["certificate"] is None:
        print(report["message"])
    else:
        d = report["direction"]
        ok = report["oracle_agrees"]
        print(f"witness {report['witness_point']} (direction {d}), gamma {report['certificate']['gamma']:.6g}, "
              f"certificate {'pass' if report['certificate']['pass'] else 'fail'}, oracle {'agrees' if ok else 'DISAGREES'}")
        if not ok:
            status = EXIT_REGRESSION
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    dump_json(report, cfg.out_dir / "certify.json")
    return status


def cmd_blackwell(budget: float, cfg: RunConfig) -> int:
    res = blackwell_optimize(budget=budget, seed=cfg.seed)
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    dump_json(res.to_dict(), cfg.out_dir / "blackwell.json")
    print(f"symmetric rate {res.symmetric_rate:.6f}, sum-rate {res.sum_rate:.6f} "
          f"(no-feedback maximum 1.0)")
    if res.sum_rate < BLACKWELL_STRETCH_SUM:
        log.warning("sum-rate %.4f is below the reference level %.2f", res.sum_rate, BLACKWELL_STRETCH_SUM)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output directory (default: $BCFB_OUT_DIR or ./bcfb-out)")
    common.add_argument("--rfb1", type=float, default=0.0, help="feedback rate of receiver 1 [bits]")
    common.add_argument("--rfb2", type=float, default=0.0, help="feedback rate of receiver 2 [bits]")
    common.add_argument("--grid", type=int, help="grid steps per axis")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tol", type=float, default=GEOM_TOL)
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="bcfb", description="Broadcast-channel rate regions with rate-limited feedback.")
    sub = p.add_subparsers(dest="command", required=True)

    region = sub.add_parser("region", help="region evaluation")
    rsub = region.add_subparsers(dest="action", required=True)
    ev = rsub.add_parser("eval", parents=[common], help="evaluate one bound on a channel and scheme")
    ev.add_argument("--bound", choices=BOUNDS, required=True)
    ev.add_argument("--channel", required=True, help="channel JSON")
    ev.add_argument("--scheme", required=True, help="scheme JSON")

    fig = sub.add_parser("figure", parents=[common], help="frontier CSVs and a gnuplot script")
    fig.add_argument("figure", type=int, choices=(2, 3, 4))

    fme = sub.add_parser("fme", help="fixture projections")
    fsub = fme.add_subparsers(dest="action", required=True)
    chk = fsub.add_parser("check", parents=[common], help="compare projections with direct regions")
    chk.add_argument("--fixture", choices=FIXTURES + ("all",), default="all")
    chk.add_argument("--trials", type=int, default=100)

    cert = sub.add_parser("certify", parents=[common], help="search for a certified feedback gain")
    cert.add_argument("--channel", default="bsbc", help="'bsbc', 'bscbec' or a channel JSON path")
    cert.add_argument("--p1", type=float, default=0.2)
    cert.add_argument("--p2", type=float, default=0.1)
    cert.add_argument("--p", type=float, default=0.1)
    cert.add_argument("--e", type=float, default=0.7)

    bw = sub.add_parser("blackwell", parents=[common], help="symmetric-rate search on the Blackwell channel")
    bw.add_argument("--budget", type=float, default=8.0)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    out = Path(args.out or os.environ.get("BCFB_OUT_DIR", "bcfb-out"))
    try:
        cfg = RunConfig(args.command, out, {k: getattr(args, k) for k in ("channel", "scheme")
                                            if isinstance(getattr(args, k, None), str)},
                        FeedbackBudget(args.rfb1, args.rfb2), args.grid, args.tol, args.seed)
        if args.grid is not None and args.grid < 1:
            raise InputError("--grid", "must be positive")
        if args.command == "region":
            return cmd_region_eval(args.bound, cfg)
        if args.command == "figure":
            return cmd_figure(args.figure, cfg)
        if args.command == "fme":
            if args.trials < 1:
                raise InputError("--trials", "must be positive")
            return cmd_fme_check(args.fixture, args.trials, cfg)
        if args.command == "certify":
            return cmd_certify(args, cfg)
        return cmd_blackwell(args.budget, cfg)
    except (InputError, StructuralError, DomainError, Unsupported) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
