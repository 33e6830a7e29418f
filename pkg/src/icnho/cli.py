"""
Command-line entry point.

    python3 -m icnho run --seed 7 --duration 600 --out out/run
    python3 -m icnho sweep-failure --out out/fig5
    python3 -m icnho mixed-mode --out out/fig6
    python3 -m icnho sequent-ho --out out/fig7
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from .sim import (Scenario, build_world, experiment_failure_sweep, experiment_mixed_mode,
                  experiment_sequent_handovers, run, write_fig5, write_fig6, write_fig7, write_run)


def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(x) for x in text.split(","))


def _scenario(args: argparse.Namespace, **defaults) -> Scenario:
    """Config file (or built-in defaults plus per-command ``defaults``), then flags."""
    s = Scenario.load(args.config) if args.config else Scenario(**defaults)
    changes = {k: getattr(args, k) for k in ("seed", "duration", "n_mns", "latency", "P")
               if getattr(args, k) is not None}
    if args.topology:
        changes["topology_file"] = str(args.topology)
    return replace(s, **changes)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="icnho", description="PFMIPv6 vs IP-over-ICN handover cost simulator")
    sub = p.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="scenario JSON file; flags override its fields")
    common.add_argument("--seed", type=int)
    common.add_argument("--duration", type=float, help="seconds (random-walk runs)")
    common.add_argument("--n-mns", dest="n_mns", type=int)
    common.add_argument("--latency", type=float, help="handover latency L in seconds")
    common.add_argument("-P", "--failure-prob", dest="P", type=float, help="PFMIPv6 handover failure probability")
    common.add_argument("--topology", type=Path, help="edge-list topology file instead of the generator")
    common.add_argument("--out", type=Path, default=Path("out"), help="output directory")

    sub.add_parser("run", parents=[common], help="one scenario; writes per-run CSVs")
    sw = sub.add_parser("sweep-failure", parents=[common], help="handover cost vs failure rate and latency")
    sw.add_argument("--p-grid", type=_floats, default=(0.2, 0.3, 0.4, 0.5, 0.6))
    sw.add_argument("--l-grid", type=_floats, default=(1.0, 2.0, 3.0, 4.0, 5.0))
    sub.add_parser("mixed-mode", parents=[common], help="per-second cost of both schemes under random walk")
    sub.add_parser("sequent-ho", parents=[common], help="per-handover costs of scripted consecutive handovers")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    out: Path = args.out
    out.mkdir(parents=True, exist_ok=True)
    if args.command == "run":
        s = _scenario(args)
        rep = run(s, keep_trajectories=True)
        write_run(rep, out)
        summary = rep.totals()
    elif args.command == "sweep-failure":
        s = _scenario(args, n_mns=10)
        rows = experiment_failure_sweep(s, args.p_grid, args.l_grid)
        write_fig5(rows, out / "fig5.csv")
        s.save(out / "scenario.json")
        summary = {"cells": len(rows)}
    elif args.command == "mixed-mode":
        s = _scenario(args)
        rep, rows = experiment_mixed_mode(s)
        write_run(rep, out)
        write_fig6(rows, out / "fig6.csv")
        summary = rep.totals()
    else:
        s = _scenario(args, n_mns=10)
        rep, summ = experiment_sequent_handovers(s)
        write_run(rep, out)
        write_fig7(summ, out / "fig7.csv")
        summary = {k: v for k, v in summ.items() if k != "per_handover"}
    json.dump(summary, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
