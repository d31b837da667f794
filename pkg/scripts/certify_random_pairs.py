"""Certify random cone pairs and check each finite bound by direct iteration.

Prints the regime mix, the distribution of bounds, and how close the
observed worst-case step count gets to the certified bound.
"""

import argparse
from collections import Counter

import numpy as np

from conedr.circle import certify
from conedr.cones import project, to_expression
from conedr.operators import dr_op
from conedr.sampling import random_pair, unit_directions
from conedr.structure import fixed_set_dr


def worst_steps(pair, fixed, starts, limit):
    radii = np.hypot(starts[:, 0], starts[:, 1])
    x = starts.copy()
    reached = np.full(len(x), -1)
    for k in range(limit + 1):
        d = x - project(fixed, x)
        reached[(reached < 0) & (np.hypot(d[:, 0], d[:, 1]) <= 1e-10 * radii)] = k
        if np.all(reached >= 0):
            return int(reached.max())
        x = dr_op(pair, x)
    return None


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--pairs", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    starts = np.concatenate([r * unit_directions(360, 1e-4) for r in (0.1, 1.0, 10.0)])

    regimes = Counter()
    bounds = []
    ratios = []
    for _ in range(args.pairs):
        pair = random_pair(rng)
        cert = certify(pair)
        regimes[cert.regime.value] += 1
        if not cert.finite:
            continue
        steps = worst_steps(pair, fixed_set_dr(pair), starts, 2 * cert.bound_n)
        if steps is None or steps > cert.bound_n:
            print("bound violated:", to_expression(pair.a), to_expression(pair.b), cert.bound_n, steps)
            raise SystemExit(1)
        bounds.append(cert.bound_n)
        ratios.append(steps / cert.bound_n)

    for name, n in regimes.most_common():
        print(f"{name:<26} {n}")
    b = np.array(bounds)
    print(f"bound_n: median {np.median(b):.0f}, 95th pct {np.percentile(b, 95):.0f}, max {b.max()}")
    print(f"observed/bound: median {np.median(ratios):.2f}, max {max(ratios):.2f}")


if __name__ == "__main__":
    main()
