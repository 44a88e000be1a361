"""plot <figure-kind> <csv> [-o out.png] [--title T] [--xlabel X] [--ylabel Y]"""

import argparse
import sys

from .render import FIGURE_KINDS, ColumnError, FigureSpec, render


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="plot", description="regenerate figures from ampfsi CSV artifacts")
    parser.add_argument("kind", choices=FIGURE_KINDS)
    parser.add_argument("csv")
    parser.add_argument("-o", "--out", default=None,
                        help="output image (default: CSV name with .png)")
    parser.add_argument("--title", default="")
    parser.add_argument("--xlabel", default="")
    parser.add_argument("--ylabel", default="")
    args = parser.parse_args(argv)
    out = args.out or args.csv.rsplit(".", 1)[0] + ".png"
    spec = FigureSpec(csv_path=args.csv, kind=args.kind, out_path=out,
                      xlabel=args.xlabel, ylabel=args.ylabel, title=args.title)
    try:
        print(render(spec))
    except (ColumnError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
