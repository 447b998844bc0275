"""Write one CSV per figure preset into an output directory.

    python scripts/reproduce_figures.py out/ --workers 4
"""
import argparse
from pathlib import Path

from alphavac.cli import build_config
from alphavac.sweep import PRESETS, emit_csv, run_sweep


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("outdir", type=Path)
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--tau-points", type=int, default=200)
    args = parser.parse_args()
    args.outdir.mkdir(parents=True, exist_ok=True)
    for name in PRESETS:
        cfg = build_config({"preset": name, "tau-points": str(args.tau_points), "workers": str(args.workers)})
        rows = run_sweep(cfg)
        path = args.outdir / f"{name}.csv"
        emit_csv(rows, str(path))
        print(f"{name}: {len(rows)} rows -> {path}")


if __name__ == "__main__":
    main()
