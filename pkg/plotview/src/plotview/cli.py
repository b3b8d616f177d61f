"""Command-line figure renderer: plotview --figure figN --input ... --output."""

from __future__ import annotations

import argparse
import sys

from .figures import FIGURES, FigureSpec, render
from .reader import InputError


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="plotview",
        description="Render simulator CSV outputs as publication figures.")
    parser.add_argument("--figure", required=True, choices=FIGURES)
    parser.add_argument("--input", required=True, nargs="+",
                        help="input CSV file(s), in curve order")
    parser.add_argument("--output", required=True, help="image file to write")
    parser.add_argument("--dpi", type=int, default=150)
    parser.add_argument("--title", default=None)
    args = parser.parse_args(argv)
    try:
        render(FigureSpec(figure=args.figure, inputs=tuple(args.input),
                          output=args.output, dpi=args.dpi, title=args.title))
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(args.output)
    return 0


if __name__ == "__main__":
    sys.exit(main())
