"""Count irreducible metabelian SL(n, C) classes over a range of ranks.

    python scripts/table1.py --knot 4_1 --max-n 21
"""
import argparse
import time

from metarep.alexmod import tor_and_b1
from metarep.errors import is_infinite
from metarep.knotio import knot_from_spec
from metarep.metab import count_classes, rn_lower_bound


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--knot", default="4_1")
    ap.add_argument("--max-n", type=int, default=21)
    args = ap.parse_args()
    p = knot_from_spec(args.knot)
    t0 = time.perf_counter()
    print(f"{'n':>3} {'classes':>10} {'bound':>10} {'|Tor H1|':>12} {'b1':>3}")
    for n in range(1, args.max_n + 1):
        tor, b1 = tor_and_b1(p, n)
        c = count_classes(p, n)
        lb = "-" if b1 else rn_lower_bound(p, n)
        shown = "inf" if is_infinite(c) else c
        tor = "inf" if is_infinite(tor) else tor
        print(f"{n:>3} {shown:>10} {lb:>10} {tor:>12} {b1:>3}")
    print(f"# {time.perf_counter() - t0:.2f}s")


if __name__ == "__main__":
    main()
