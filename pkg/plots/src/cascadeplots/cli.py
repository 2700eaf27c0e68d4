"""Command line entry: plot <kind> --in <csv> --out <img> [--mark t ...]."""

import argparse
import sys
from pathlib import Path

from .jobs import HEADERS, CsvFormatError, PlotJob
from .render import render


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="plot",
        description="Render charts from cascade experiment CSV files.")
    p.add_argument("kind", choices=sorted(HEADERS))
    p.add_argument("--in", dest="source", required=True, metavar="CSV",
                   help="input CSV emitted by the experiment CLI")
    p.add_argument("--out", dest="output", required=True, metavar="IMG",
                   help="image file to write (format from the extension)")
    p.add_argument("--mark", dest="marks", type=float, action="append",
                   default=[], metavar="TIME",
                   help="vertical marker time on derivative plots; "
                        "may repeat")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    job = PlotJob(args.kind, Path(args.source), Path(args.output),
                  tuple(args.marks))
    try:
        render(job)
    except FileNotFoundError:
        print(f"plot: no such file: {args.source}", file=sys.stderr)
        return 1
    except CsvFormatError as exc:
        print(f"plot: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
