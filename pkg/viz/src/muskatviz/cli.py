"""Command line: render a figure from a run directory.

    muskatviz render --run DIR --kind KIND --out FILE [--stride N]
"""

from __future__ import annotations

import argparse
import sys

from .figures import KINDS, ArtifactError, FigureSpec, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="muskatviz")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("render", help="render one figure from a run directory")
    p.add_argument("--run", required=True, help="run directory with meta.json and series.csv")
    p.add_argument("--kind", required=True, choices=KINDS, help="figure kind")
    p.add_argument("--out", required=True, help="output image file")
    p.add_argument("--stride", type=int, default=1, help="subsample snapshots/rows")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = FigureSpec(run_dir=args.run, kind=args.kind, out_path=args.out, stride=args.stride)
        out = render(spec)
    except (ArtifactError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
