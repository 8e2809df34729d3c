"""Regenerate every figure preset as CSV and SVG.

    python3 scripts/reproduce_figures.py [--out figures] [--threads 4] [--convention swapped]
"""
import argparse
import time

from unruh_coherence import sweep
from unruh_coherence.states import CONVENTIONS


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--out", default="figures")
    p.add_argument("--threads", type=int, default=4)
    p.add_argument("--convention", choices=CONVENTIONS, default="swapped")
    args = p.parse_args()
    for name in sweep.FIGURES:
        start = time.perf_counter()
        paths = []
        for fmt in ("csv", "svg"):
            paths += sweep.write_figure(name, args.out, fmt, args.convention, args.threads)
        print(f"{name}: {len(paths)} files in {time.perf_counter() - start:.1f}s")


if __name__ == "__main__":
    main()
