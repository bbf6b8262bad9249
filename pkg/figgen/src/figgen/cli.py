"""Command-line entry point: figgen <figure_id> --csv ... --summary ... -o ..."""

from __future__ import annotations

import argparse
import sys

from .render import FIGURE_IDS, SchemaError, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="figgen",
        description="Render benchmark figures from a records CSV and summary JSON",
    )
    parser.add_argument("figure_id", choices=FIGURE_IDS)
    parser.add_argument("--csv", required=True, help="records CSV path")
    parser.add_argument("--summary", default=None, help="summary JSON path")
    parser.add_argument("-o", "--output", required=True,
                        help="output image path; svg and png siblings are written")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        written, _ = render(args.figure_id, args.csv, args.summary, args.output)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, FileNotFoundError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for path in written:
        print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
