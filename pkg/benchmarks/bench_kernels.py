"""Time the numba and numpy scan kernels on the large generated families.

Usage: python3 benchmarks/bench_kernels.py [--repeat N]

Both backends are called directly, so the environment flag does not matter
here.  Each kernel's result is compared across backends before timing.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from committee_reconfig import _kernels as K
from committee_reconfig.generators import gen_isolated, gen_tightness


def _cases():
    inst, W, _ = gen_isolated(3)
    sup = inst.words
    cover = K.get_backend("numpy").union_rows(sup, np.array(W, dtype=np.int64))
    # C1 covers the first side only; scan for a strong candidate large among the rest
    yield "isolated k=3 first_large_uncovered", "first_large_uncovered", (sup, cover, inst.k, inst.n)
    yield "isolated k=3 uncovered_counts", "uncovered_counts", (sup, cover)

    inst, W, W2 = gen_tightness(3)
    sup = inst.words
    cover = K.get_backend("numpy").union_rows(sup, np.array(W2, dtype=np.int64))
    yield "tightness r=3 first_large_uncovered (no hit)", "first_large_uncovered", (sup, cover, 5 * inst.k, 6 * inst.n)
    yield "tightness r=3 uncovered_counts", "uncovered_counts", (sup, cover)
    rows = np.arange(0, inst.m, 97, dtype=np.int64)
    yield "tightness r=3 approval_counts", "approval_counts", (sup, rows, inst.n)


def _same(a, b) -> bool:
    if isinstance(a, np.ndarray):
        return np.array_equal(a, b)
    return a == b


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    backends = [K.get_backend("numpy")]
    if K.numba_backend is not None:
        backends.append(K.get_backend("numba"))
    print(f"{'case':52s} " + " ".join(f"{b.name:>10s}" for b in backends) + "   speedup")
    for label, fn, call in _cases():
        results, times = [], []
        for b in backends:
            kern = getattr(b, fn)
            results.append(kern(*call))  # warm-up, includes JIT compilation
            best = float("inf")
            for _ in range(args.repeat):
                t = time.perf_counter()
                kern(*call)
                best = min(best, time.perf_counter() - t)
            times.append(best)
        if not all(_same(results[0], r) for r in results[1:]):
            raise SystemExit(f"backends disagree on {label}")
        speed = f"{times[0] / times[-1]:8.1f}x" if len(times) > 1 else ""
        print(f"{label:52s} " + " ".join(f"{t * 1e3:8.2f}ms" for t in times) + f"  {speed}")


if __name__ == "__main__":
    main()
