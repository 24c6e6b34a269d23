"""``metarep`` command line interface.

Every subcommand builds a plain report dict; the renderers turn it into JSON
(sorted keys, deterministic), aligned text or CSV.  Exit codes: 0 ok, 1 other
computational failure, 2 bad input, 3 resource cap hit, 4 theorem hypotheses
fail (infinite families, irregular meridian).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import __version__
from .alexmod import alexander_poly, branched_homology, mahler, sw_ratio, tor_and_b1
from .cyclotomic import CycNum
from .deform import (
    certify_nonmetabelian,
    cocycle_spaces,
    default_steps,
    min_metabelian_distance,
    newton_deform,
    solve_formal,
)
from .errors import (
    Intractable,
    InfiniteFamily,
    InvalidPD,
    InvalidPresentation,
    MetarepError,
    MissingLongitude,
    MultiComponentLink,
    NoRepresentations,
    NotCoprime,
    NotRegular,
    ParseError,
    UnknownKnot,
    is_infinite,
)
from .knotio import KnotPresentation, knot_from_spec
from .laurent import LaurentPoly
from .metab import (
    build_rep,
    commutant_dimension,
    count_classes,
    has_unit_determinant,
    is_unitary,
    meridian_is_regular,
    orbit_representatives,
    rn_lower_bound,
)
from .representation import Representation
from .twisted import (
    boundary_restriction,
    cohomology_dims,
    cover_betti,
    criterion_check,
    adjoint_rep,
    twisted_alexander,
)

log = logging.getLogger("metarep")

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_CAP, EXIT_NA = 0, 1, 2, 3, 4
_INPUT_ERRORS = (ParseError, InvalidPD, MultiComponentLink, NotCoprime, UnknownKnot, InvalidPresentation, MissingLongitude)
_NA_ERRORS = (InfiniteFamily, NotRegular, NoRepresentations)

BRAID_HELP = """knot specs:
  4_1, 10_153, ...        bundled Rolfsen table (PD codes)
  unknot
  braid:[strands:]TOKENS  signed generator tokens, e.g. braid:s1 s1 s1, braid:3:1 -2 1 -2
                          (sK or K is sigma_K; SK, -sK or -K its inverse)
  pd:[(a,b,c,d),...]      PD code, edges counterclockwise from the incoming under-strand
  torus:p,q               torus knot T(p,q), gcd(p,q) = 1
  manual:FILE.json        explicit presentation (see README)
"""


@dataclass
class RunConfig:
    knot: str
    n: Optional[int] = None
    n_range: Optional[tuple] = None
    backend: str = "exact"
    tol: float = 1e-8
    newton_tol: float = 1e-10
    fmt: str = "json"
    seed: int = 0x5EED
    chi: int = 0
    z: str = "canonical"
    order: int = 4
    steps: int = 5
    step_size: float = 0.02
    direction: int = 0
    rep_file: Optional[str] = None

    def __post_init__(self):
        if self.tol <= 0 or self.newton_tol <= 0 or self.step_size <= 0:
            raise ValueError("tolerances and step sizes must be positive")
        if self.n is not None and self.n < 1:
            raise ValueError("n must be at least 1")
        if self.n_range is not None:
            lo, hi = self.n_range
            if lo < 1 or hi < lo:
                raise ValueError(f"bad n-range {lo}..{hi}")
        if self.backend not in ("exact", "float"):
            raise ValueError("backend must be exact or float")
        if self.fmt not in ("json", "text", "csv"):
            raise ValueError("format must be json, text or csv")

    def ns(self) -> list[int]:
        if self.n_range is not None:
            return list(range(self.n_range[0], self.n_range[1] + 1))
        if self.n is not None:
            return [self.n]
        raise ValueError("need --n or --n-range")

    def rank(self) -> int:
        if self.n is None:
            raise ValueError("need --n")
        return self.n

    def z_choice(self):
        return self.z if self.z == "canonical" else int(self.z)


# ----------------------------------------------------------------------
# JSON-able conversion

def _poly_json(p: LaurentPoly):
    out = {}
    for k, v in sorted(p.coeffs.items()):
        if isinstance(v, CycNum):
            out[str(k)] = v.to_json()
        elif isinstance(v, complex):
            out[str(k)] = [v.real, v.imag]
        else:
            out[str(k)] = str(v)
    return out


def jsonable(obj):
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else str(x)
    if is_infinite(obj):
        return "Infinite"
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, CycNum):
        return obj.to_json()
    if isinstance(obj, LaurentPoly):
        return _poly_json(obj)
    if isinstance(obj, np.ndarray):
        return [jsonable(x) for x in obj.tolist()]
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(x) for x in obj]
    if hasattr(obj, "to_json"):
        return jsonable(obj.to_json())
    return str(obj)


def _scalar(v):
    if v is None:
        return "-"
    if isinstance(v, float):
        return f"{v:.10g}"
    if isinstance(v, (list, dict)):
        return json.dumps(v, sort_keys=True)
    return str(v)


def render(report: dict, fmt: str) -> str:
    data = jsonable(report)
    if fmt == "json":
        return json.dumps(data, sort_keys=True, indent=2) + "\n"
    table = data.pop("table", None)
    scalars = sorted((k, v) for k, v in data.items())
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if table:
            w.writerow(table["columns"])
            for row in table["rows"]:
                w.writerow([_scalar(x) for x in row])
        else:
            w.writerow(["key", "value"])
            for k, v in scalars:
                w.writerow([k, _scalar(v)])
        return buf.getvalue()
    lines = [f"{k}: {_scalar(v)}" for k, v in scalars]
    if table:
        cells = [table["columns"]] + [[_scalar(x) for x in row] for row in table["rows"]]
        widths = [max(len(str(r[i])) for r in cells) for i in range(len(table["columns"]))]
        if lines:
            lines.append("")
        for r in cells:
            lines.append("  ".join(str(x).rjust(wd) for x, wd in zip(r, widths)).rstrip())
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------------------
# commands

def _knot(cfg: RunConfig) -> KnotPresentation:
    p = knot_from_spec(cfg.knot)
    log.info("knot %s: %d generators, %d relators", cfg.knot, p.num_generators, len(p.relators))
    return p


def _character(p, n, index):
    H = branched_homology(p, n)
    if H.free_rank:
        raise InfiniteFamily(f"b_1(L_{n}) = {H.free_rank} > 0")
    reps = orbit_representatives(H, order=n)
    if not reps:
        raise NoRepresentations(f"no characters of order {n}")
    if not 0 <= index < len(reps):
        raise ParseError(f"--chi {index} out of range (0..{len(reps) - 1})")
    return reps[index]


def cmd_count(cfg: RunConfig) -> dict:
    p = _knot(cfg)
    rows = []
    for n in cfg.ns():
        tor, b1 = tor_and_b1(p, n)
        c = count_classes(p, n)
        try:
            lb = rn_lower_bound(p, n)
        except InfiniteFamily:
            lb = None
        rows.append([n, c, lb, tor, b1])
    return {
        "command": "count",
        "knot": cfg.knot,
        "table": {"columns": ["n", "classes", "lower_bound", "torsion", "b1"], "rows": rows},
    }


def _verify(p, rep):
    return {
        "relators_hold": rep.satisfies(p),
        "unit_determinant": has_unit_determinant(rep),
        "unitary": is_unitary(rep),
        "meridian_regular": meridian_is_regular(rep, p),
        "commutant_dim": commutant_dimension(rep),
    }


def cmd_reps(cfg: RunConfig) -> dict:
    p = _knot(cfg)
    if cfg.rep_file:
        with open(cfg.rep_file) as fh:
            obj = json.load(fh)
        items = obj["representations"] if "representations" in obj else [obj]
        out = []
        for item in items:
            rep = Representation.from_json(item["rep"] if "rep" in item else item)
            out.append({"rep": rep, "checks": _verify(p, rep)})
        return {"command": "reps", "knot": cfg.knot, "representations": out}
    n = cfg.rank()
    H = branched_homology(p, n)
    if H.free_rank:
        raise InfiniteFamily(f"b_1(L_{n}) = {H.free_rank} > 0")
    chis = orbit_representatives(H, order=n)
    if cfg.chi is not None and cfg.chi >= 0:
        chosen = [(cfg.chi, _character(p, n, cfg.chi))]
    else:
        chosen = list(enumerate(chis))
    out = []
    for i, chi in chosen:
        rep = build_rep(p, n, chi, cfg.z_choice())
        rep = rep if cfg.backend == "exact" else rep.to_float()
        out.append({"index": i, "character": chi, "rep": rep, "checks": _verify(p, rep)})
    return {"command": "reps", "knot": cfg.knot, "n": n, "count": len(chis), "representations": out}


def cmd_cohomology(cfg: RunConfig) -> dict:
    p = _knot(cfg)
    n = cfg.rank()
    chi = _character(p, n, cfg.chi)
    verdict = criterion_check(p, n, chi, exact=cfg.backend == "exact")
    alpha = build_rep(p, n, chi, cfg.z_choice())
    ad = adjoint_rep(alpha if cfg.backend == "exact" else alpha.to_float())
    report = cohomology_dims(p, ad, cfg.tol)
    out = {"command": "cohomology", "knot": cfg.knot, "n": n, "chi": chi, "criterion": verdict, "cohomology": report}
    if p.longitude is not None:
        out["boundary"] = boundary_restriction(p, alpha, tol=cfg.tol)
    return out


def cmd_cover(cfg: RunConfig) -> dict:
    p = _knot(cfg)
    n = cfg.rank()
    rep = cover_betti(p, n)
    return {"command": "cover", "knot": cfg.knot, "n": n, "cover": rep}


def cmd_twisted_alex(cfg: RunConfig) -> dict:
    p = _knot(cfg)
    n = cfg.rank()
    chi = _character(p, n, cfg.chi)
    alpha = build_rep(p, n, chi, cfg.z_choice())
    ta_ad = twisted_alexander(p, adjoint_rep(alpha))
    ta_alpha = twisted_alexander(p, alpha)
    return {
        "command": "twisted-alex",
        "knot": cfg.knot,
        "n": n,
        "chi": chi,
        "alexander": alexander_poly(p),
        "alpha": ta_alpha,
        "adjoint": ta_ad,
        "text": {"alpha": f"({ta_alpha.numerator}) / ({ta_alpha.denominator})",
                 "adjoint": f"({ta_ad.numerator}) / ({ta_ad.denominator})"},
    }


def cmd_sw(cfg: RunConfig) -> dict:
    p = _knot(cfg)
    delta = alexander_poly(p)
    m = mahler(delta)
    rows = []
    for n in cfg.ns():
        H = branched_homology(p, n) if n <= 40 else None
        tor, b1 = tor_and_b1(p, n)
        r = sw_ratio(p, n)
        rows.append([n, tor, b1, list(H.invariant_factors) if H is not None else None, r])
    return {
        "command": "sw",
        "knot": cfg.knot,
        "alexander": str(delta),
        "log_mahler": math.log(m) if m > 0 else float("-inf"),
        "table": {"columns": ["n", "torsion", "b1", "invariant_factors", "sw_ratio"], "rows": rows},
    }


def _deform_report(p, n, chi, cfg: RunConfig) -> dict:
    alpha = build_rep(p, n, chi, cfg.z_choice())
    cs = cocycle_spaces(p, alpha)
    if cs.H1.shape[1] == 0:
        raise NoRepresentations("H^1 is spanned by coboundaries; nothing to deform")
    if not 0 <= cfg.direction < cs.H1.shape[1]:
        raise ParseError(f"--direction {cfg.direction} out of range (0..{cs.H1.shape[1] - 1})")
    a1 = cs.H1[:, cfg.direction]
    series = solve_formal(p, alpha, a1, cfg.order)
    steps = default_steps(cfg.steps, cfg.step_size)
    results = newton_deform(p, alpha, a1, steps, tol=cfg.newton_tol)
    rows = []
    for s in results:
        dist = min_metabelian_distance(s.probe, p, n)
        rows.append([s.t, s.residual, s.iterations, dist, certify_nonmetabelian(s.rep, p, n)])
    return {
        "cocycles": cs.dims,
        "formal_residuals": series.residuals,
        "order": cfg.order,
        "table": {"columns": ["t", "residual", "iterations", "metabelian_distance", "certified"], "rows": rows},
        "probes": {f"{s.t:g}": s.probe for s in results},
        "certified": all(r[-1] for r in rows),
    }


def cmd_deform(cfg: RunConfig) -> dict:
    p = _knot(cfg)
    n = cfg.rank()
    chi = _character(p, n, cfg.chi)
    out = {"command": "deform", "knot": cfg.knot, "n": n, "chi": chi}
    out.update(_deform_report(p, n, chi, cfg))
    return out


class StageError(Exception):
    def __init__(self, stage: str, error: Exception):
        super().__init__(f"stage {stage}: {error}")
        self.stage = stage
        self.error = error


def _stage(name: str, stages: list, fn: Callable):
    log.info("stage %s: start", name)
    try:
        value = fn()
    except Exception as exc:
        stages.append({"stage": name, "status": type(exc).__name__, "message": str(exc)})
        raise StageError(name, exc) from exc
    stages.append({"stage": name, "status": "ok"})
    log.info("stage %s: ok", name)
    return value


def cmd_pipeline(cfg: RunConfig) -> dict:
    stages: list = []
    p = _stage("parse", stages, lambda: _knot(cfg))
    n = cfg.rank()
    out = {"command": "pipeline", "knot": cfg.knot, "n": n, "stages": stages}
    count = _stage("count", stages, lambda: count_classes(p, n))
    out["count"] = count
    if is_infinite(count):
        err = InfiniteFamily(f"b_1(L_{n}) > 0: infinitely many classes; Theorem 1 not applicable")
        stages.append({"stage": "enumerate", "status": "InfiniteFamily", "message": str(err)})
        raise StageError("enumerate", err)

    def build():
        H = branched_homology(p, n)
        return [(chi, build_rep(p, n, chi, cfg.z_choice())) for chi in orbit_representatives(H, order=n)]

    reps = _stage("build", stages, build)
    out["representations"] = [{"character": chi, "checks": _verify(p, rep)} for chi, rep in reps]
    if not reps:
        return out

    def criteria():
        return [criterion_check(p, n, chi, exact=cfg.backend == "exact") for chi, _ in reps]

    verdicts = _stage("criterion", stages, criteria)
    out["criterion"] = verdicts
    out["criterion_met"] = any(v.criterion_met for v in verdicts)
    try:
        out["cover"] = _stage("cover", stages, lambda: cover_betti(p, n))
    except StageError as exc:
        if not isinstance(exc.error, Intractable):
            raise
        out["cover"] = None
    chosen = next((i for i, v in enumerate(verdicts) if v.criterion_met), None)
    if chosen is not None:
        rep = _stage("deform", stages, lambda: _deform_report(p, n, reps[chosen][0], cfg))
        rep.pop("probes")
        out["deform"] = dict(rep, chi=reps[chosen][0])
        out["deform_certified"] = rep["certified"]
    return out


COMMANDS = {
    "count": cmd_count,
    "reps": cmd_reps,
    "cohomology": cmd_cohomology,
    "cover": cmd_cover,
    "twisted-alex": cmd_twisted_alex,
    "sw": cmd_sw,
    "deform": cmd_deform,
    "pipeline": cmd_pipeline,
}


# ----------------------------------------------------------------------
# argument parsing

def _range(text: str) -> tuple:
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            return int(a), int(b)
        k = int(text)
        return k, k
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected A..B, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="metarep",
        description="Metabelian SL(n, C) representations of knot groups.",
        epilog=BRAID_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    ap.add_argument("--version", action="version", version=f"metarep {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name, epilog=BRAID_HELP, formatter_class=argparse.RawDescriptionHelpFormatter)
        sp.add_argument("knot", help="knot spec (see below)")
        sp.add_argument("--n", type=int, default=None, help="rank")
        sp.add_argument("--format", dest="fmt", choices=("json", "text", "csv"), default="json")
        sp.add_argument("--backend", choices=("exact", "float"), default="exact")
        sp.add_argument("--tol", type=float, default=1e-8, help="float rank threshold")
        sp.add_argument("--seed", type=int, default=0x5EED)
        sp.add_argument("--z", default="canonical", help="'canonical' or an exponent k (z = zeta_2n^k)")
        sp.add_argument("--output", "-o", default=None, help="write to a file instead of stdout")
        sp.add_argument("-v", "--verbose", action="store_true")
        if name in ("count", "sw"):
            sp.add_argument("--n-range", type=_range, default=None, help="A..B")
        if name in ("reps",):
            sp.add_argument("--chi", type=int, default=-1, help="orbit representative index (default: all)")
            sp.add_argument("--from-json", dest="rep_file", default=None, help="re-verify emitted representations")
        if name in ("cohomology", "twisted-alex", "deform"):
            sp.add_argument("--chi", type=int, default=0, help="orbit representative index")
        if name in ("deform", "pipeline"):
            sp.add_argument("--order", type=int, default=4)
            sp.add_argument("--steps", type=int, default=5)
            sp.add_argument("--step-size", type=float, default=0.02)
            sp.add_argument("--direction", type=int, default=0, help="index of the H^1 representative")
            sp.add_argument("--newton-tol", type=float, default=1e-10)
    return ap


def config_from_args(args) -> RunConfig:
    opts = {k: v for k, v in vars(args).items() if k in RunConfig.__dataclass_fields__ and v is not None}
    return RunConfig(**opts)


def run(cfg: RunConfig, command: str) -> dict:
    return COMMANDS[command](cfg)


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        cfg = config_from_args(args)
    except ValueError as exc:
        print(f"metarep: {exc}", file=sys.stderr)
        return EXIT_INPUT
    code = EXIT_OK
    try:
        report = run(cfg, args.command)
    except StageError as exc:
        code = _exit_code(exc.error)
        report = {"command": args.command, "knot": cfg.knot, "error": type(exc.error).__name__,
                  "stage": exc.stage, "message": str(exc.error)}
        if isinstance(exc.error, _NA_ERRORS):
            report["note"] = "Theorem 1 not applicable"
    except (MetarepError, ValueError) as exc:
        code = _exit_code(exc)
        report = {"command": args.command, "knot": cfg.knot, "error": type(exc).__name__, "message": str(exc)}
        if isinstance(exc, _NA_ERRORS):
            report["note"] = "Theorem 1 not applicable"
    text = render(report, cfg.fmt)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if code:
        print(f"metarep: {report.get('error')}: {report.get('message')}", file=sys.stderr)
    return code


def _exit_code(exc: Exception) -> int:
    if isinstance(exc, _INPUT_ERRORS):
        return EXIT_INPUT
    if isinstance(exc, Intractable):
        return EXIT_CAP
    if isinstance(exc, _NA_ERRORS):
        return EXIT_NA
    if isinstance(exc, ValueError):
        return EXIT_INPUT
    return EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
