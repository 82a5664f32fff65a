"""figures: render simplex scatters and box plots from a records CSV."""

from __future__ import annotations

import argparse
import sys

from .render import FigureInputError, FigureSpec, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="figures",
        description="Render simplex scatters and box-plot panels from a records CSV.",
    )
    parser.add_argument("--in", dest="input_csv", required=True, help="records CSV path")
    parser.add_argument("--out", dest="out_dir", required=True, help="output directory")
    parser.add_argument(
        "--format",
        dest="formats",
        action="append",
        choices=("svg", "png"),
        help="image format, repeatable (default: svg)",
    )
    parser.add_argument("--view", choices=("2d", "3d"), default="2d")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    spec = FigureSpec(
        input_csv=args.input_csv,
        out_dir=args.out_dir,
        formats=tuple(args.formats or ("svg",)),
        view=args.view,
    )
    try:
        written = render(spec)
    except FigureInputError as exc:
        print(f"figures: error: {exc}", file=sys.stderr)
        return 2
    for path in written:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
