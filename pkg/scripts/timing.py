"""Wall time of the greedy and DP optimisers over doubling data sizes at ten cells."""

import argparse
import time

import numpy as np

from protoreject.fixtures import random_instance
from protoreject.reject import build_profiles, dp_local_front, greedy_local_front


def best_of(fn, reps):
    out = np.inf
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        out = min(out, time.perf_counter() - t0)
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sizes", type=int, nargs="+", default=[1000, 2000, 4000, 8000, 16000])
    ap.add_argument("--cells", type=int, default=10)
    ap.add_argument("--error-rate", type=float, default=0.2)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    rows = []
    print(f"{'points':>7} {'greedy ms':>10} {'DP ms':>9}")
    for n in args.sizes:
        s, ok, c = random_instance(rng, n, args.cells, args.error_rate)
        profiles = build_profiles(s, ok, c, args.cells)
        g = best_of(lambda: greedy_local_front(profiles), 5)
        d = best_of(lambda: dp_local_front(profiles), 3)
        rows.append((n, g, d))
        print(f"{n:>7} {g * 1e3:>10.2f} {d * 1e3:>9.2f}")
    n, g, d = map(np.array, zip(*rows))
    slope = lambda t: np.polyfit(np.log(n), np.log(t), 1)[0]
    print(f"log-log slope: greedy {slope(g):.2f}, DP {slope(d):.2f}")


if __name__ == "__main__":
    main()
