#!/usr/bin/env python3
"""Render every generation of a refinement as SVG files.

Example:
    python scripts/render_generations.py --angles 60,60,60 --depth 6 --out figs/
    python scripts/render_generations.py --sides 3,4,5 \
        --procedure shortest-altitude --depth 5 --out figs/
"""

import argparse
import sys
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from trirefine import (  # noqa: E402
    BaseAngles,
    ProcedureKind,
    RefinementRun,
    RetainPolicy,
    refine,
    render_svg,
)
from trirefine.svg import MAX_RENDER_GENERATION  # noqa: E402


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--angles", default=None)
    parser.add_argument("--sides", default=None)
    parser.add_argument("--procedure", default="largest-angle",
                        choices=[k.value for k in ProcedureKind])
    parser.add_argument("--depth", type=int, default=6)
    parser.add_argument("--out", default="figures",
                        help="output directory (created if missing)")
    args = parser.parse_args()

    if (args.angles is None) == (args.sides is None):
        parser.error("give exactly one of --angles or --sides")
    if args.depth > MAX_RENDER_GENERATION:
        parser.error(f"--depth must be at most {MAX_RENDER_GENERATION}")
    base = (BaseAngles.from_unordered(*(Fraction(p) for p in args.angles.split(",")))
            if args.angles is not None else None)
    sides = (tuple(float(p) for p in args.sides.split(","))
             if args.sides is not None else None)

    run = RefinementRun(kind=ProcedureKind(args.procedure), depth=args.depth,
                        base=base, sides=sides, retain=RetainPolicy.FULL_TREE)
    result = refine(run)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    for n, generation in enumerate(result.generations):
        path = out_dir / f"{args.procedure}-generation-{n:02d}.svg"
        render_svg(generation, str(path), stroke_reference=result.stats[0].mesh)
        print(f"wrote {path} ({len(generation)} triangles)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
