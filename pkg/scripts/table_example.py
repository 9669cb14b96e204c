"""Three-cell worked example: profiles, exact DP front, greedy trace and oracle."""

import numpy as np

from protoreject.fixtures import table_instance
from protoreject.reject import brute_force_front, build_profiles, dp_local_front, greedy_local_front


def indices(profiles, theta):
    return tuple(int(np.flatnonzero(p.thresholds == v)[0]) for p, v in zip(profiles, theta))


def main():
    s, ok, c = table_instance()
    profiles = build_profiles(s, ok, c, 3)
    print("true rejects per threshold index")
    for p in profiles:
        print(f"  cell {p.cell + 1}: {p.true_rejects.tolist()}")
    dp = dp_local_front(profiles)
    greedy = dict(greedy_local_front(profiles).pairs())
    oracle = dict(brute_force_front(profiles).pairs())
    print(f"{'n':>3} {'DP':>4} {'oracle':>6} {'greedy':>6}  DP threshold indices")
    for n, t, theta in dp:
        print(f"{n:>3} {t:>4} {oracle[n]:>6} {greedy.get(n, '-'):>6}  {indices(profiles, theta)}")


if __name__ == "__main__":
    main()
