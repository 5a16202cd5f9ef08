"""Command line figure rendering: one invocation per figure."""

from __future__ import annotations

import argparse

import matplotlib

from .render import FIGURE_KINDS, FigureSpec, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="votefig",
        description="Render figures from cavevote CSV outputs")
    parser.add_argument("--kind", required=True, choices=FIGURE_KINDS)
    parser.add_argument("--input", required=True, action="append",
                        help="input CSV (records, surface or trajectory "
                             "schema, depending on --kind)")
    parser.add_argument("--output", required=True, help="image file to write")
    parser.add_argument("--xlabel")
    parser.add_argument("--ylabel")
    parser.add_argument("--title")
    parser.add_argument("--victory-threshold", type=float, default=0.6,
                        help="guide lines for trajectory plots")
    parser.add_argument("--early-cutoff", type=float, default=None,
                        help="optional phase-transition marker (seconds)")
    return parser


def main(argv=None):
    matplotlib.use("Agg")
    args = build_parser().parse_args(argv)
    spec = FigureSpec(inputs=tuple(args.input), kind=args.kind,
                      output=args.output, xlabel=args.xlabel,
                      ylabel=args.ylabel, title=args.title,
                      victory_threshold=args.victory_threshold,
                      early_cutoff_s=args.early_cutoff)
    render(spec)
    print(f"wrote {args.output}")


if __name__ == "__main__":
    main()
