"""Deform a metabelian representation off the metabelian locus.

    python scripts/deform_demo.py --knot 4_1 --n 3 --order 4 --steps 5
"""
import argparse

import numpy as np

from metarep.alexmod import branched_homology
from metarep.deform import (
    certify_nonmetabelian,
    cocycle_spaces,
    default_steps,
    min_metabelian_distance,
    newton_deform,
    solve_formal,
)
from metarep.knotio import knot_from_spec
from metarep.metab import build_rep, orbit_representatives


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--knot", default="4_1")
    ap.add_argument("--n", type=int, default=2)
    ap.add_argument("--order", type=int, default=4)
    ap.add_argument("--steps", type=int, default=5)
    ap.add_argument("--step-size", type=float, default=0.02)
    args = ap.parse_args()

    p = knot_from_spec(args.knot)
    chi = orbit_representatives(branched_homology(p, args.n), order=args.n)[0]
    alpha = build_rep(p, args.n, chi)
    sp = cocycle_spaces(p, alpha)
    print(f"{args.knot}, n={args.n}, chi={chi.exponents} mod {chi.moduli}: dims {sp.dims}")
    for k in range(sp.H1.shape[1]):
        a1 = sp.H1[:, k]
        s = solve_formal(p, alpha, a1, args.order)
        print(f"direction {k}: formal residuals " + " ".join(f"{r:.1e}" for r in s.residuals))
        for st in newton_deform(p, alpha, a1, default_steps(args.steps, args.step_size)):
            dist = min_metabelian_distance(st.probe, p, args.n)
            ok = certify_nonmetabelian(st.rep, p, args.n)
            dets = max(abs(np.linalg.det(A) - 1) for A in st.rep.images)
            print(f"  t={st.t:.3f} residual={st.residual:.1e} iters={st.iterations} "
                  f"|det-1|={dets:.1e} dist={dist:.3e} certified={ok}")


if __name__ == "__main__":
    main()
