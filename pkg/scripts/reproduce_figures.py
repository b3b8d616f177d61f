#!/usr/bin/env python3
"""Run every shipped preset and render all six figures.

Usage:
    python3 scripts/reproduce_figures.py [--out DIR] [--workers N]

Writes the simulator CSV/JSON outputs to DIR (default: out/) and the
figure images to DIR/figures/.  Requires both the nstirap and plotview
packages to be installed.
"""

import argparse
import os
import sys

from nstirap import cli as nstirap_cli
from plotview import FigureSpec, render

# figure id -> scan/timeseries stems in curve order
FIGURE_INPUTS = {
    "fig3": ("fig3_timeseries",),
    "fig4": ("fig4_weak_scan", "fig4_mid_scan", "fig4_strong_scan"),
    "fig5": ("fig5_omb200_scan", "fig5_omb400_scan", "fig5_omb800_scan"),
    "fig6": ("fig6_strong_near_scan", "fig6_strong_far_scan",
             "fig6_weak_near_scan", "fig6_weak_far_scan"),
    "fig7": ("fig7_scan",),
    "fig8": ("fig8_timeseries",),
}

PRESET_GROUPS = ("fig3", "fig4", "fig5", "fig6", "fig7", "fig8")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default="out", help="output directory")
    parser.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    args = parser.parse_args(argv)

    os.makedirs(args.out, exist_ok=True)
    for group in PRESET_GROUPS:
        code = nstirap_cli.main(["preset", group, "--out", args.out,
                                 "--workers", str(args.workers)])
        if code != 0:
            print(f"preset {group} failed (exit {code})", file=sys.stderr)
            return code

    fig_dir = os.path.join(args.out, "figures")
    os.makedirs(fig_dir, exist_ok=True)
    for figure, stems in FIGURE_INPUTS.items():
        inputs = tuple(os.path.join(args.out, f"{stem}.csv")
                       for stem in stems)
        image = render(FigureSpec(figure, inputs,
                                  os.path.join(fig_dir, f"{figure}.png")))
        print(f"{figure}: wrote {image}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
