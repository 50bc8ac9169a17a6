"""Compare the two X-string step-count parameterizations on the logical subspace.

Also tries merging the two rotations of a controlled flip that share L2 into
one clock cycle, which does not reproduce the product of the two rotations
because the rotation generators at neighbouring pulse times do not commute.
"""

import argparse
import math

from qcachain import compiler as cc
from qcachain import statevec as sv
from qcachain import verify
from qcachain.schedule import STEP, Pulse, PulseSchedule


def target(e, layout, rotations):
    return verify.apply_rotations(e, layout.n_sites, rotations)


def merged_pair(n, l1, l2):
    """Rotations (+pi/2, l1..l2) and (-pi/2, l1+1..l2) with their X pulses in one block."""
    N = cc.chain_length(n)
    y = Pulse("Y", math.pi)

    def half(sign):
        events = sorted([(l2 - l1, math.pi / 2), (l2 - l1 - 1, -math.pi / 2)])
        items, t = [], 0
        for tau, angle in events:
            items += [STEP] * (tau - t) + [Pulse("X", sign * angle / 2)]
            t = tau
        return items + [STEP] * (2 * l2 - 1 - t) + [y, STEP, y] + [STEP] * (N + 1 - 2 * l2)

    return PulseSchedule(N, tuple(half(1) + half(-1)))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=3)
    args = ap.parse_args()
    n = args.n
    lay = cc.LayoutMap(n)
    e = verify.logical_columns(lay)
    print("variant   L1 L2  T-steps  overlap")
    for variant in ("verified", "printed"):
        for L1 in range(1, n + 1):
            for L2 in range(L1, n + 1):
                s = cc.compile_xstring(math.pi / 2, L1, L2, n, variant)
                want = target(e, lay, verify.logical_target(cc.XStringRot(math.pi / 2, L1, L2), lay))
                ov = sv.phase_overlap(sv.evolve_columns(e, s), want)
                print(f"{variant:<9} {L1:>2} {L2:>2}  {s.t_steps:>7}  {ov:.10f}")
    print("\nmerged pair   l1 l2  overlap")
    for l1 in range(1, n):
        for l2 in range(l1 + 1, n + 1):
            rots = verify.logical_target(cc.XStringRot(math.pi / 2, l1, l2), lay)
            rots += verify.logical_target(cc.XStringRot(-math.pi / 2, l1 + 1, l2), lay)
            got = sv.evolve_columns(e, merged_pair(n, l1, l2))
            print(f"{'':<13} {l1:>2} {l2:>2}  {sv.phase_overlap(got, target(e, lay, rots)):.10f}")


if __name__ == "__main__":
    main()
