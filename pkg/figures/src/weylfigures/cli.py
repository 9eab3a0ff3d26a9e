"""weyl-figure: render torusweyl CSVs as static images.

    weyl-figure --kind scatter --in out/spectrum.csv --out fig1_left.png
    weyl-figure --kind counting --in out/sweep_disk.csv --out fig1_right.png
    weyl-figure --kind portrait --in out/portrait.csv --out fig2.png
    weyl-figure --kind fig3 --in out/fig3.csv --out fig3.png

``--dump-plotted`` prints the plotted columns byte-equal to the input and
skips rendering unless ``--out`` is also given.
"""

from __future__ import annotations

import argparse
import sys

from .render import FigureJob, SchemaError, dump_plotted, render


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="weyl-figure", description=__doc__)
    ap.add_argument("--in", dest="inputs", action="append", required=True,
                    help="input CSV (repeatable)")
    ap.add_argument("--kind", required=True,
                    choices=["scatter", "counting", "fig3", "portrait"])
    ap.add_argument("--out", default=None, help="output image path")
    ap.add_argument("--overlay-disk", type=float, default=None,
                    help="scatter only: overlay |z| = r")
    ap.add_argument("--overlay-strip", type=float, default=None,
                    help="scatter only: overlay |Re z| = r")
    ap.add_argument("--dump-plotted", action="store_true",
                    help="echo the plotted columns, byte-equal to the input")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if not args.dump_plotted and args.out is None:
        print("error: --out is required unless --dump-plotted", file=sys.stderr)
        return 1
    try:
        job = FigureJob(inputs=args.inputs, kind=args.kind,
                        output=args.out or "unused.png",
                        overlay_disk=args.overlay_disk,
                        overlay_strip=args.overlay_strip)
        if args.dump_plotted:
            sys.stdout.write(dump_plotted(job))
        if args.out is not None:
            render(job)
        return 0
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 1


def entrypoint():
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
