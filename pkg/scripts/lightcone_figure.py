"""Render the propagation diagram of a single Z (text and SVG) for a chain.

    python3 scripts/lightcone_figure.py --N 8 --p 3 --out-dir results/
"""

import argparse
from pathlib import Path

from qcachain import symplectic as sp


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--N", type=int, default=8)
    ap.add_argument("--p", type=int, default=3)
    ap.add_argument("--axis", default="Z")
    ap.add_argument("--t-max", type=int)
    ap.add_argument("--out-dir", type=Path)
    args = ap.parse_args()
    t_max = args.N + 1 if args.t_max is None else args.t_max
    cone = sp.render_lightcone(args.p, args.axis, args.N, t_max)
    print(cone.to_text(), end="")
    print("# '*' marks rows that anticommute with the all-Y pulse")
    if args.out_dir:
        args.out_dir.mkdir(parents=True, exist_ok=True)
        stem = f"lightcone_{args.axis}{args.p}_N{args.N}"
        (args.out_dir / f"{stem}.txt").write_text(cone.to_text())
        (args.out_dir / f"{stem}.svg").write_text(cone.to_svg())


if __name__ == "__main__":
    main()
