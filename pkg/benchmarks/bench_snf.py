"""Compare the compiled and pure-Python Smith normal form kernels.

    python3 benchmarks/bench_snf.py [--repeat N]

Inputs are order-complex boundary matrices (sparse, entries in {-1, 0, 1})
and dense random integer matrices. Both kernels must agree on U, S, V.
"""

import argparse
import random
import timeit

from poset_forge import _backend
from poset_forge.chains import OrderComplex, boundary_matrix
from poset_forge.poset import parse_poset


def crown(n):
    lows = [f"a{i}" for i in range(n)]
    highs = [f"b{i}" for i in range(n)]
    covers = [f"{lows[i]}<{highs[j]}" for i in range(n) for j in range(n) if abs(i - j) <= 1]
    return parse_poset(f"elements: {' '.join(lows + highs)}\ncovers: {' '.join(covers)}")


def layered(width, depth):
    """Each level completely below the next; the order complex is a sphere join."""
    levels = [[f"v{d}_{i}" for i in range(width)] for d in range(depth)]
    covers = [f"{x}<{y}" for lo, hi in zip(levels, levels[1:]) for x in lo for y in hi]
    return parse_poset(f"elements: {' '.join(sum(levels, []))}\ncovers: {' '.join(covers)}")


def cases(rng):
    for name, P in (("crown(12)", crown(12)), ("layers 3x4", layered(3, 4)), ("layers 2x7", layered(2, 7))):
        K = OrderComplex(P)
        for n in range(1, K.top_degree + 1):
            B = boundary_matrix(K, n)
            if B.rows and B.cols:
                yield f"{name} d{n} {B.rows}x{B.cols}", B.to_lists(), B.rows, B.cols, True
    # dense matrices blow up the transforms quickly; past 6x6 int64 overflows
    # and the backend falls back to Python, so time those without transforms
    for size, transforms in ((6, True), (10, False), (16, False), (30, False)):
        rows = [[rng.randint(-9, 9) for _ in range(size)] for _ in range(size)]
        tag = "" if transforms else " (no U, V)"
        yield f"dense {size}x{size}{tag}", rows, size, size, transforms


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    if _backend.snf_compiled is None:
        print("compiled kernel not built; only the Python kernel is available")
    rng = random.Random(args.seed)
    print(f"{'case':32} {'python ms':>10} {'cython ms':>10} {'speedup':>8}")
    for label, rows, m, n, tf in cases(rng):
        t_py = min(timeit.repeat(lambda: _backend.snf_python(rows, m, n, tf), number=1, repeat=args.repeat))
        if _backend.snf_compiled is None:
            print(f"{label:32} {t_py * 1e3:10.2f} {'-':>10} {'-':>8}")
            continue
        try:
            same = _backend.snf_compiled(rows, m, n, tf) == _backend.snf_python(rows, m, n, tf)
            t_c = min(timeit.repeat(lambda: _backend.snf_compiled(rows, m, n, tf), number=1, repeat=args.repeat))
        except OverflowError:
            print(f"{label:32} {t_py * 1e3:10.2f} {'overflow':>10} {'-':>8}")
            continue
        if not same:
            raise SystemExit(f"kernels disagree on {label}")
        print(f"{label:32} {t_py * 1e3:10.2f} {t_c * 1e3:10.2f} {t_py / t_c:7.1f}x")


if __name__ == "__main__":
    main()
