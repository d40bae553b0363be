"""Compare the compiled and numpy clustering kernels.

    python3 benchmarks/bench_kernels.py [--n 4000] [--d 5] [--c 3] [--repeat 5]

Times each kernel on one random problem, then a full FCM and KFCM fit,
and checks that both backends produce the same fitted memberships.
"""

import argparse
import timeit

import numpy as np

from learnerclust import fuzzyclust as fc
from learnerclust.fuzzyclust import _backend


def best_of(fn, repeat):
    timer = timeit.Timer(fn)
    loops, _ = timer.autorange()
    return min(timer.repeat(repeat=repeat, number=loops)) / loops


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    parser.add_argument("--n", type=int, default=4000, help="points")
    parser.add_argument("--d", type=int, default=5, help="dimensions")
    parser.add_argument("--c", type=int, default=3, help="clusters")
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)

    backends = fc.available_backends()
    if "cython" not in backends:
        print("compiled kernels not built; only the numpy backend is available")

    rng = np.random.default_rng(0)
    X = np.ascontiguousarray(rng.normal(size=(args.n, args.d)))
    centers = np.ascontiguousarray(rng.normal(size=(args.c, args.d)))
    U = fc.init_membership(args.n, args.c, 0)
    W = np.ascontiguousarray(U ** 2)

    rows = []
    for name in backends:
        k = _backend._MODULES[name]
        d2 = np.asarray(k.sq_distances(X, centers))
        cases = {
            "sq_distances": lambda: k.sq_distances(X, centers),
            "memberships": lambda: k.memberships(d2, 2.0, 1e-24),
            "weighted_means": lambda: k.weighted_means(X, W),
            "weighted_objective": lambda: k.weighted_objective(U, d2, 2.0),
        }
        timings = {label: best_of(fn, args.repeat) for label, fn in cases.items()}
        previous = fc.set_backend(name)
        try:
            for method in fc.METHODS:
                fit = lambda: fc.fit(X, args.c, method=method, seed=0, max_iter=50, eps=1e-12)
                timings[f"fit[{method}] x50 iter"] = best_of(fit, max(1, args.repeat // 2))
        finally:
            fc.set_backend(previous)
        rows.append((name, timings))

    labels = list(rows[0][1])
    width = max(len(s) for s in labels)
    header = f"{'kernel':<{width}}" + "".join(f"{name:>14}" for name, _ in rows)
    if len(rows) == 2:
        header += f"{'speedup':>10}"
    print(f"n={args.n} d={args.d} c={args.c}")
    print(header)
    for label in labels:
        line = f"{label:<{width}}" + "".join(f"{t[label] * 1e3:>12.3f}ms" for _, t in rows)
        if len(rows) == 2:
            py = dict(rows)["python"][label]
            cy = dict(rows)["cython"][label]
            line += f"{py / cy:>9.2f}x"
        print(line)

    if len(rows) == 2:
        fits = {}
        for name in backends:
            previous = fc.set_backend(name)
            try:
                fits[name] = fc.fit(X, args.c, method=fc.KFCM, seed=0)[1]
            finally:
                fc.set_backend(previous)
        gap = float(np.max(np.abs(fits["python"] - fits["cython"])))
        print(f"max membership difference between backends after a KFCM fit: {gap:.2e}")


if __name__ == "__main__":
    main()
