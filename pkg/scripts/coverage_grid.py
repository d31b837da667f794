"""Count how many examples claim each point of the 21^3 parameter grid."""

from collections import Counter

from conedr.counterexamples import coverage_axes, covering_examples, is_dr_point
from conedr.operators import OperatorParams


def main():
    lam_axis, mu_axis, kappa_axis = coverage_axes()
    by_example = Counter()
    multiplicity = Counter()
    uncovered = []
    for lam in lam_axis:
        for mu in mu_axis:
            for kappa in kappa_axis:
                p = OperatorParams(lam, mu, kappa)
                ids = covering_examples(p)
                multiplicity[len(ids)] += 1
                by_example.update(ids)
                if not ids and not is_dr_point(p):
                    uncovered.append(p.astuple())
    total = len(lam_axis) * len(mu_axis) * len(kappa_axis)
    print(f"grid points: {total}")
    for eid in sorted(by_example):
        print(f"  example {eid}: {by_example[eid]}")
    for m in sorted(multiplicity):
        print(f"  claimed by {m} example(s): {multiplicity[m]}")
    print(f"uncovered (excluding DR): {len(uncovered)}")
    for p in uncovered[:20]:
        print("   ", p)
    raise SystemExit(1 if uncovered else 0)


if __name__ == "__main__":
    main()
