"""Compiled vs pure-Python kernels.

    python3 benchmarks/bench_core.py [--repeat N]
"""
from __future__ import annotations

import argparse
import timeit

from artifact import _pycore
from artifact.qfield import field_from_disc

try:
    from artifact import _core
except ImportError:
    _core = None


def cases():
    F = field_from_disc(1003)
    chi = F.chi_table
    # a residue box of ~40k points for b^2 = 5 mod (7 + 3w) over Q(sqrt -3)
    scan = (1, 0, 0, 1, 200, 200, 5, 0, 7, -3, 79, 1, -1)
    return {
        "reduced_forms(D=200003)": lambda m: m.reduced_forms(200003),
        "char_sum(D=1003, N=10D)": lambda m: m.char_sum(chi, 10 * 1003, 2),
        "residue_scan(200x200)": lambda m: m.residue_scan(*scan),
    }


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    print(f"{'kernel':28s} {'python ms':>10s} {'cython ms':>10s} {'speedup':>8s}")
    for name, fn in cases().items():
        py = min(timeit.repeat(lambda: fn(_pycore), number=1, repeat=args.repeat)) * 1e3
        if _core is None:
            print(f"{name:28s} {py:10.2f} {'n/a':>10s} {'':>8s}")
            continue
        assert fn(_core) == fn(_pycore) or name.startswith("char_sum")
        cy = min(timeit.repeat(lambda: fn(_core), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:28s} {py:10.2f} {cy:10.2f} {py / cy:7.1f}x")


if __name__ == "__main__":
    main()
