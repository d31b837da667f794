"""Run the six non-convergent examples at their canonical parameters and
at random samples from each region, and print a summary table."""

import argparse

import numpy as np

from conedr.counterexamples import EXAMPLES, run_example, sample_region


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--steps", type=int, default=50)
    ap.add_argument("--samples", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)

    print(f"{'id':>2}  {'region':<36} {'runs':>4}  {'max dev':>9}  {'|x_N|/|x_0| range':>22}")
    for eid, ex in EXAMPLES.items():
        params = [ex.canonical_params] + sample_region(eid, args.samples, rng)
        devs, shrink = [], []
        for p in params:
            rep = run_example(eid, args.steps, p)
            devs.append(rep.max_deviation)
            shrink.append(np.linalg.norm(rep.points[-1]) / np.linalg.norm(rep.points[0]))
        print(f"{eid:>2}  {ex.region_text:<36} {len(params):>4}  {max(devs):9.2e}  "
              f"{min(shrink):10.3e} .. {max(shrink):9.3e}")


if __name__ == "__main__":
    main()
