"""ln|Tor H_1(L_n)| / n against the logarithmic Mahler measure.

    python scripts/sw_sweep.py --knot 4_1 --max-n 80 [--plot out.png]
"""
import argparse
import math

from metarep.alexmod import alexander_poly, mahler, sw_ratio
from metarep.errors import is_infinite
from metarep.knotio import knot_from_spec


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--knot", default="4_1")
    ap.add_argument("--max-n", type=int, default=60)
    ap.add_argument("--plot", default=None, help="write a PNG (needs matplotlib)")
    args = ap.parse_args()
    p = knot_from_spec(args.knot)
    m = math.log(mahler(alexander_poly(p)))
    ns, rs = [], []
    for n in range(1, args.max_n + 1):
        r = sw_ratio(p, n)
        if is_infinite(r):
            print(f"{n:>4}  b1 > 0")
            continue
        ns.append(n)
        rs.append(r)
        print(f"{n:>4}  {r:.10f}  {r - m:+.3e}")
    print(f"log Mahler measure {m:.10f}")
    if args.plot:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        plt.plot(ns, rs, ".", label="ln|Tor H1(L_n)|/n")
        plt.axhline(m, color="k", lw=0.8, label="ln m(Delta)")
        plt.xlabel("n")
        plt.legend()
        plt.savefig(args.plot, dpi=120)


if __name__ == "__main__":
    main()
