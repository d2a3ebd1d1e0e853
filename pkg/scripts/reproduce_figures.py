#!/usr/bin/env python3
"""Run every preset in presets/ and collect the CSV outputs under out/.

Each preset maps to one CLI subcommand; the heavy ones (fig1c, fig1d,
fig3) parallelize across --workers.  Expect roughly 15 minutes single
threaded, dominated by fig2a/fig2b (t = 200 with entanglement tracking)
and the two sweeps.

Usage:
    python3 scripts/reproduce_figures.py [--workers N] [--only fig1a fig3 ...]
"""

import argparse
import sys
import time
from pathlib import Path

from oscsync.cli import main as oscsync_main

ROOT = Path(__file__).resolve().parents[1]

JOBS = [
    ("fig1a", "dynamics"),
    ("fig1b", "dynamics"),
    ("fig1c", "sweep-sync"),
    ("fig1d", "sweep-sync"),
    ("fig2a", "dynamics"),
    ("fig2b", "dynamics"),
    ("fig3", "phase-diagram"),
]


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--workers", type=int, default=1, help="parallel workers for sweeps")
    parser.add_argument("--out", type=Path, default=ROOT / "out", help="output root")
    parser.add_argument("--only", nargs="*", metavar="NAME", help="subset of presets to run")
    args = parser.parse_args()

    names = [name for name, _ in JOBS]
    if args.only:
        unknown = sorted(set(args.only) - set(names))
        if unknown:
            parser.error(f"unknown preset(s): {', '.join(unknown)}; choose from {', '.join(names)}")

    for name, command in JOBS:
        if args.only and name not in args.only:
            continue
        preset = ROOT / "presets" / f"{name}.toml"
        out_dir = args.out / name
        argv = [command, "--config", str(preset), "--out", str(out_dir)]
        if command in ("sweep-sync", "phase-diagram"):
            argv += ["--workers", str(args.workers)]
        print(f"[{name}] oscsync {' '.join(argv)}", flush=True)
        t0 = time.perf_counter()
        rc = oscsync_main(argv)
        if rc != 0:
            print(f"[{name}] failed with exit code {rc}", file=sys.stderr)
            return rc
        print(f"[{name}] done in {time.perf_counter() - t0:.1f}s -> {out_dir}", flush=True)
    return 0


if __name__ == "__main__":
    sys.exit(main())
