"""Print the pulse-selection matrix M_Z(i, t) and cross-check it against the step map."""

import argparse

from qcachain import symplectic as sp


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--N", type=int, default=10)
    args = ap.parse_args()
    n = args.N
    tm = sp.build_transition_map(n)
    m = sp.mz_matrix(n)
    print("site \\ t  " + " ".join(f"{t:>2}" for t in range(n + 1)))
    for i in range(1, n + 1):
        print(f"{i:>9}  " + " ".join(f"{b:>2}" for b in m[i - 1]))
    bad = sum(
        sp.mz_definitional(i, t, tm) != m[i - 1, t] for i in range(1, n + 1) for t in range(n + 1)
    )
    print(f"mismatches against C^t applied to all-ones: {bad}")
    raise SystemExit(1 if bad else 0)


if __name__ == "__main__":
    main()
