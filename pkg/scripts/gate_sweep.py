"""Dense check of every compiled logical gate; prints one row per gate and the worst overlap."""

import argparse
import time

from qcachain import verify


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=2)
    ap.add_argument("--tol", type=float, default=1e-8)
    args = ap.parse_args()
    t0 = time.perf_counter()
    failures = 0
    for n in range(1, args.max_n + 1):
        for gate in verify.gate_list(n):
            checks = verify.check_gate(gate, n, args.tol)
            ok = all(c.ok for c in checks)
            failures += not ok
            logical = next(c for c in checks if c.name.endswith("logical"))
            print(f"{'ok  ' if ok else 'FAIL'} n={n} {gate}  {logical.detail}")
    print(f"{failures} failing gates, {time.perf_counter() - t0:.1f}s")
    raise SystemExit(1 if failures else 0)


if __name__ == "__main__":
    main()
