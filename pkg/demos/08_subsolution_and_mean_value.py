"""Two inequality monitors evaluated on real trajectories.

The composite field F = (k+u)^d + v built from a solution must satisfy
F_t - Lap(F) + c (k+u)^(d-1) F^p <= k^q; the checker reports the worst
positive part of the discrete residual (0 on healthy runs).

The parabolic mean value ratio compares sup over a shrunken space-time
cylinder with the cylinder average of a caloric field; weighting the ratio
by eps^(N+2)/s^2 must stay bounded by the constant extracted at the
coarsest eps.
"""

from absorblab import ExperimentSpec, run_experiment


def main():
    print("=== composite subsolution residual on a flat-tracked run ===")
    record = run_experiment(ExperimentSpec("subsolution_check", {"p": 2, "q": 3}))
    o = record.outcome
    print(f"  constants: d = {o['d']:.4f}, c = {o['c']}, k = {o['k']:.1f}, "
          f"k^q = {o['k_pow_q']:.4g}")
    print(f"  max positive residual: {o['max_violation']} "
          f"(= {o['violation_over_bound']:.2e} of k^q)\n")

    print("=== parabolic mean value ratio on a heat-kernel run ===")
    record = run_experiment(ExperimentSpec("mean_value_check", {}))
    o = record.outcome
    print("     eps     ratio      ratio * eps^3")
    for eps, ratio, weighted in zip(o["epsilons"], o["ratios"], o["weighted"]):
        print(f"  {eps:6.2f}   {ratio:.4f}     {weighted:.5f}")
    print(f"  monotone non-increasing: {o['monotone_ok']}; "
          f"bounded by coarsest constant {o['bound_constant']:.5f}: {o['bounded_ok']}")


if __name__ == "__main__":
    main()
