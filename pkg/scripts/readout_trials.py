"""Monte Carlo of the global-spin readout: success rate per register size and model."""

import argparse
import math

import numpy as np

from qcachain import readout as ro
from qcachain import statevec as sv


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=3)
    ap.add_argument("--trials", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    print("n  model       branches  trials  correct")
    for n in range(1, args.max_n + 1):
        for model in sv.MODELS:
            for two in (False, True):
                ok = 0
                for _ in range(args.trials):
                    r1 = tuple(rng.integers(0, 2, n).tolist())
                    r2 = tuple(rng.integers(0, 2, n).tolist()) if two else r1
                    s = ro.mirror_pair_state(n, r1, r2, np.exp(1j * rng.uniform(0, 2 * math.pi)))
                    t, _ = ro.run_protocol(s, n, model, rng=int(rng.integers(2**32)))
                    ok += t.solutions == ro.true_solutions(r1, r2)
                print(f"{n}  {model:<10}  {2 if two else 1:>8}  {args.trials:>6}  {ok:>7}")


if __name__ == "__main__":
    main()
