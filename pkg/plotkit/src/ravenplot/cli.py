"""CLI: ``ravenplot <kind> --in <csv...> --out <img>``."""

from __future__ import annotations

import argparse
import sys

from .render import KINDS, FigureRequest, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ravenplot",
        description="Render benchmark figures from exported CSVs",
    )
    parser.add_argument("kind", choices=sorted(KINDS), help="figure kind")
    parser.add_argument("--in", dest="inputs", nargs="+", required=True,
                        metavar="CSV", help="input CSV file(s)")
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument("--logx", action="store_true", help="logarithmic x axis")
    parser.add_argument("--thin", type=int, default=1,
                        help="keep every Nth checkpoint (curves kind)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        request = FigureRequest(
            kind=args.kind,
            inputs=tuple(args.inputs),
            output=args.out,
            logx=args.logx,
            thin=args.thin,
        )
        for path in render(request):
            print(path)
    except Exception as exc:  # noqa: BLE001 - one exit path for render errors
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
