"""Recover the decay exponents -a, -b from solver output by log-log fitting."""

from absorblab import ExperimentSpec, run_experiment


def main():
    print(" (p, q)    fitted u-slope  target -a   fitted v-slope  target -b")
    for p, q in ((2, 2), (2, 3), (3, 2)):
        record = run_experiment(ExperimentSpec("blowup_fit", {"p": p, "q": q}))
        o = record.outcome
        print(f" ({p}, {q})   {o['exponent_u']:+.5f}      {o['target_u']:+.2f}     "
              f"{o['exponent_v']:+.5f}      {o['target_v']:+.2f}")
        print(f"          rms residuals: u {o['rms_u']:.2e}, v {o['rms_v']:.2e}")


if __name__ == "__main__":
    main()
