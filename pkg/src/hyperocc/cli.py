"""Command-line front end: ``hyperocc <command> [options]``.

Exit status: 0 on success, 1 on a computation or input error (or a failed
certificate), 2 on a usage error.
"""
from __future__ import annotations

import argparse
import difflib
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Any, Callable, Iterable, Optional

import numpy as np

from . import __version__, bounds, hardcore, hypergraph, lp, strong, weak
from .constructions import Family, FamilySpec, NoFormulaError, build, predicted_count
from .quadrature import QuadratureError

THREADS_ENV = "HYPEROCC_THREADS"
DEFAULT_GRID = tuple(round(0.1 * i, 10) for i in range(1, 11))

COMPUTATION_ERRORS = (
    hypergraph.StructuralError,
    hardcore.EnumerationBudgetExceeded,
    NoFormulaError,
    QuadratureError,
    strong.ConsistencyError,
    lp.LPDimensionError,
    ValueError,
    ArithmeticError,
    OSError,
)


class CertificateFailure(Exception):
    """A dual sweep found a violation; the record is still printed."""


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

@dataclass
class RunRecord:
    command: str
    parameters: dict
    results: dict = field(default_factory=dict)
    wall_time: float = 0.0
    version: str = __version__
    seed: Optional[int] = None


def _jsonable(x: Any) -> Any:
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return [_jsonable(v) for v in x.tolist()]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else None
    return x


def fmt(x: Any) -> str:
    """12 significant digits for floats; exact decimals for integers."""
    if x is None:
        return "-"
    if isinstance(x, (bool, np.bool_)):
        return "yes" if x else "no"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, Fraction):
        return f"{x}  (~{float(x):.12g})"
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.12g}"
    if isinstance(x, (list, tuple, np.ndarray)):
        return "[" + ", ".join(fmt(v) for v in x) + "]"
    if isinstance(x, dict):
        return ", ".join(f"{k}={fmt(v)}" for k, v in x.items())
    return str(x)


def emit(rec: RunRecord, as_json: bool, out=None) -> None:
    out = out or sys.stdout
    if as_json:
        json.dump(_jsonable(asdict(rec)), out, indent=2, sort_keys=False)
        out.write("\n")
        return
    shown = {k: v for k, v in rec.results.items() if v is not None}
    width = max((len(k) for k in shown), default=0)
    for k, v in shown.items():
        out.write(f"{k.ljust(width)}  {fmt(v)}\n")


# ---------------------------------------------------------------------------
# argument helpers
# ---------------------------------------------------------------------------

def _fugacity(s: str):
    """Rationals ("1", "1/2") stay exact; decimals ("0.25") are floats."""
    try:
        if any(ch in s.lower() for ch in ".e"):
            return hardcore.as_fugacity(float(s))
        return hardcore.as_fugacity(Fraction(s))
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"invalid fugacity {s!r}: {exc}") from None


def _positive_float(s: str) -> float:
    try:
        x = float(Fraction(s))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a number, got {s!r}") from None
    if not x > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {s!r}")
    return x


def _default_threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def _pmap(fn: Callable, items: Iterable, threads: int) -> list:
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, items))


def _write_lp(path: Optional[str], L: lp.DenseLP) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(L.to_csv())


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_construct(args, rec: RunRecord) -> None:
    spec = FamilySpec(Family.parse(args.family), args.d, args.r)
    H = build(spec)
    rec.results.update(family=spec.family.value, r=spec.r, d=spec.d, n=H.n, edges=H.num_edges)
    if args.output:
        hypergraph.save(H, args.output)
        rec.results["written"] = args.output
    elif args.json:
        rec.results["hypergraph"] = hypergraph.to_document(H)
    else:
        sys.stdout.write(hypergraph.dumps(H).decode() + "\n")
        rec.results.clear()


def cmd_validate(args, rec: RunRecord) -> None:
    H = hypergraph.load(args.file)
    rep = hypergraph.validate(H)
    rec.results.update(n=H.n, edges=H.num_edges)
    d = rep.as_dict()
    witnesses = d.pop("witnesses", {})
    rec.results.update(d)
    for key, w in witnesses.items():
        rec.results[f"witness_{key}"] = w


def _predicted(H: hypergraph.Hypergraph, k: int) -> Optional[tuple[int, str]]:
    fam = H.meta.get("family") if H.meta else None
    if fam is None:
        return None
    try:
        spec = FamilySpec(Family.parse(fam), int(H.meta["d"]), H.meta.get("r"))
        pc = predicted_count(spec, k)
    except (NoFormulaError, ValueError, KeyError):
        return None
    return pc.value, pc.kind


def cmd_count(args, rec: RunRecord) -> None:
    H = hypergraph.load(args.file)
    c = hardcore.count(H, args.k, budget=args.budget)
    rec.results["count"] = c
    pred = _predicted(H, args.k)
    if pred is not None:
        value, kind = pred
        rec.results.update(formula=value, formula_kind=kind,
                           formula_holds=(c == value) if kind == "exact" else (c >= value))


def cmd_poly(args, rec: RunRecord) -> None:
    H = hypergraph.load(args.file)
    P = hardcore.independence_polynomial(H, args.k, budget=args.budget)
    rec.results.update(k=P.k, n=P.n, total=P.total, degree=P.degree, coefficients=list(P.coeffs))


def cmd_occupancy(args, rec: RunRecord) -> None:
    H = hypergraph.load(args.file)
    lam = args.lam
    P = hardcore.independence_polynomial(H, args.k, budget=args.budget)
    val = hardcore.occupancy_exact(P, lam)
    rec.results.update(k=args.k, **{"lambda": lam}, occupancy=val)
    if isinstance(val, Fraction):
        rec.results["occupancy_float"] = float(val)
    if args.direct:
        direct = hardcore.occupancy_direct(H, args.k, lam)
        rec.results["occupancy_direct"] = direct
        rec.results["identity_holds"] = direct == Fraction(val)
    if args.against:
        _compare_with_bound(H, args.k, lam, val, args.against, rec)


def _compare_with_bound(H, k: int, lam, occ, mode: str, rec: RunRecord) -> None:
    rep = hypergraph.validate(H)
    r, d = rep.uniform_r, rep.regular_d
    if r is None or d is None:
        raise ValueError("the closed-form bounds need a uniform, regular hypergraph")
    if mode == "strong" and k != 2:
        raise ValueError(f"the strong bound is for k = 2, got k = {k}")
    if mode == "weak" and k != r:
        raise ValueError(f"the weak bound is for k = r = {r}, got k = {k}")
    x = float(lam)
    bound = strong.alpha_strong(r, d, x) if mode == "strong" else weak.alpha_weak(r, d, x)
    rec.results.update(
        bound=bound,
        margin=bound - float(occ),
        within_bound=float(occ) <= bound + 1e-10,
        hypotheses_hold=rep.is_linear and rep.is_cross_edge_free,
        proven=mode == "weak" or strong.is_proven(r),
    )


def cmd_sample(args, rec: RunRecord) -> None:
    H = hypergraph.load(args.file)
    est = hardcore.glauber_estimate(H, args.k, args.lam, args.steps, args.burnin, seed=args.seed)
    rec.seed = args.seed
    rec.results.update(mean=est.mean, stderr=est.stderr, steps=est.steps, burnin=est.burnin, seed=est.seed)


def _weak_point(r: int, d: int, lam: float, dump: Optional[str], certify: bool) -> dict:
    out: dict = {"alpha": weak.alpha_weak(r, d, lam), "proven": True}
    L = weak.build_weak_lp(r, d, lam)
    _write_lp(dump, L)
    sol = lp.solve(L)
    out["lp_value"] = lam * sol.value if sol.optimal else None
    cp = weak.candidate_primal(r, d, lam)
    out["candidate_p_d0"] = cp.p_d0
    rep = weak.weak_dual_certificate(r, d, lam)
    out["dual"] = {"Lambda_p": rep.certificate.Lambda_p, "Lambda_c": rep.certificate.Lambda_c}
    if certify:
        out["worst_slack"] = rep.worst_slack
        out["worst_config"] = [rep.worst_config.j, rep.worst_config.k]
        out["certificate_feasible"] = rep.feasible
    return out


def cmd_weak_bound(args, rec: RunRecord) -> None:
    if args.integrate:
        b = bounds.weak_bound(args.r, args.d, args.tol)
        rec.results.update(b.as_dict())
        return
    res = _weak_point(args.r, args.d, args.lam, args.dump_lp, args.certify)
    rec.results.update(r=args.r, d=args.d, **{"lambda": args.lam}, **res)
    if args.certify and not res["certificate_feasible"]:
        raise CertificateFailure(f"weak dual certificate infeasible: worst slack {res['worst_slack']:.3e}")


def _strong_point(r: int, d: int, lam: float, dump: Optional[str], certify: bool, solve_lp: bool = True) -> dict:
    out: dict = {"alpha": strong.alpha_strong(r, d, lam), "proven": strong.is_proven(r)}
    if not strong.is_proven(r):
        out["note"] = "unproven bound"
    if solve_lp:
        L = strong.build_strong_lp(r, d, lam)
        _write_lp(dump, L)
        sol = lp.solve(L)
        out["lp_value"] = lam * sol.value if sol.optimal else None
    cert = strong.strong_dual(r, d, lam)
    out["Lambda"] = cert.Lambda
    out["Lambdas"] = list(cert.Lambdas)
    out["c"] = list(cert.c)
    out["cs_residual"] = cert.cs_residual
    if certify:
        rep = strong.slack_check(r, d, lam, cert)
        out["min_slack"] = rep.min_slack
        out["min_profile"] = list(rep.min_profile) if rep.min_profile else None
        out["max_vertex_abs"] = rep.max_vertex_abs
        out["sweep"] = rep.mode
        out["profiles_checked"] = rep.profiles_checked
        out["slack_passed"] = rep.passed
    return out


def cmd_strong_bound(args, rec: RunRecord) -> None:
    if args.integrate:
        b = bounds.strong_bound(args.d, args.tol, r=args.r)
        rec.results.update(b.as_dict())
        return
    res = _strong_point(args.r, args.d, args.lam, args.dump_lp, args.certify or args.explore_r)
    rec.results.update(r=args.r, d=args.d, **{"lambda": args.lam}, **res)
    if args.explore_r:
        return  # evidence only; violations are recorded, not errors
    if args.certify and not res["slack_passed"]:
        raise CertificateFailure(f"strong slack check failed: min S = {res['min_slack']:.3e} at {res['min_profile']}")


def cmd_bound(args, rec: RunRecord) -> None:
    reps = _pmap(_BoundJob(args.mode, args.r, args.tol), args.d, args.threads)
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            fh.write(bounds.csv_rows(reps))
        rec.results["csv"] = args.csv
    if len(reps) == 1:
        rec.results.update(reps[0].as_dict())
    else:
        rec.results["reports"] = [r.as_dict() for r in reps]
        if not args.json:
            rec.results.pop("reports")
            for r in reps:
                rec.results[f"d={r.d}"] = [r.bound, r.second_order, r.scaled_second_order]


@dataclass(frozen=True)
class _BoundJob:
    mode: str
    r: int
    tol: float

    def __call__(self, d: int) -> bounds.BoundReport:
        if self.mode == "weak":
            return bounds.weak_bound(self.r, d, self.tol)
        return bounds.strong_bound(d, self.tol, r=self.r)


def cmd_constants(args, rec: RunRecord) -> None:
    if args.cs3:
        rec.results["c_s3"] = strong.cs3_constant(args.tol)
    for r in args.cw or ():
        rec.results[f"c_w{r}"] = weak.cw_constant(r, args.tol)
    rec.results["tol"] = args.tol


def cmd_gap(args, rec: RunRecord) -> None:
    spec = FamilySpec(Family.parse(args.family), args.d, args.r)
    rep = bounds.conjecture_gap(spec, args.k, tol=args.tol, budget=args.budget)
    rec.results.update(rep.as_dict())


@dataclass(frozen=True)
class _CertJob:
    mode: str
    r: int
    d: int

    def __call__(self, lam: float) -> dict:
        if self.mode == "weak":
            rep = weak.weak_dual_certificate(self.r, self.d, lam)
            return {"lambda": lam, "worst_slack": rep.worst_slack, "passed": rep.feasible}
        rep = strong.slack_check(self.r, self.d, lam)
        return {"lambda": lam, "min_slack": rep.min_slack, "max_vertex_abs": rep.max_vertex_abs,
                "sweep": rep.mode, "passed": rep.passed}


def cmd_certify(args, rec: RunRecord) -> None:
    modes = ("weak", "strong") if args.mode == "both" else (args.mode,)
    failed = []
    for mode in modes:
        if mode == "weak" and args.r < 3:
            continue
        rows = _pmap(_CertJob(mode, args.r, args.d), args.lambdas, args.threads)
        rec.results[f"{mode}_passed"] = all(row["passed"] for row in rows)
        key = "worst_slack" if mode == "weak" else "min_slack"
        rec.results[f"{mode}_{key}"] = min(row[key] for row in rows)
        if args.json:
            rec.results[f"{mode}_sweep"] = rows
        if not rec.results[f"{mode}_passed"]:
            failed.append(mode)
    if args.r == 3:
        r3 = strong.r3_coefficient_checks(args.d, args.lambdas)
        rec.results.update(r3_claims_passed=r3.passed, r3_min_pair_margin=r3.min_pair_margin)
        if not r3.passed:
            failed.append("r3-claims")
    if failed:
        raise CertificateFailure(f"certificate violations in: {', '.join(failed)}")


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    """ArgumentParser that suggests the closest known flag for a typo."""

    def error(self, message: str):
        if "unrecognized arguments" in message:
            bad = [t for t in message.split(":", 1)[1].split() if t.startswith("-")]
            hints = []
            for t in bad:
                m = difflib.get_close_matches(t.split("=")[0], sorted(_all_flags(self)), n=1)
                if m:
                    hints.append(f"{t}: did you mean {m[0]}?")
            if hints:
                message += "\n  " + "\n  ".join(hints)
        super().error(message)



def _all_flags(parser: argparse.ArgumentParser) -> set:
    """Long option strings of a parser and all of its subcommands."""
    out = set()
    for action in parser._actions:
        out.update(o for o in action.option_strings if o.startswith("--"))
        if isinstance(action, argparse._SubParsersAction):
            for sp in action.choices.values():
                out |= _all_flags(sp)
    return out


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a structured run record")
    common.add_argument("--threads", type=int, default=_default_threads(),
                        help=f"worker processes for sweeps (default ${THREADS_ENV} or 1)")

    p = _Parser(prog="hyperocc", description="Occupancy bounds for independent sets in linear hypergraphs.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=fn)
        return sp

    def graph_file(sp):
        sp.add_argument("file", help="hypergraph JSON file")

    def budget(sp):
        sp.add_argument("--budget", type=int, default=hardcore.DEFAULT_BUDGET, help="enumeration work limit")

    sp = add("construct", cmd_construct, "build a named family")
    sp.add_argument("--family", required=True, help="KDD, KRRT, TRIPARTITE_K, MOD3, H4, HRD")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--r", type=int)
    sp.add_argument("-o", "--out", "--output", dest="output", help="write the hypergraph JSON here")

    sp = add("validate", cmd_validate, "check structure and report uniformity, regularity, linearity")
    graph_file(sp)

    sp = add("count", cmd_count, "count k-independent sets exactly")
    sp.add_argument("--k", type=int, required=True)
    budget(sp)
    graph_file(sp)

    sp = add("poly", cmd_poly, "independence polynomial coefficients")
    sp.add_argument("--k", type=int, required=True)
    budget(sp)
    graph_file(sp)

    sp = add("occupancy", cmd_occupancy, "exact occupancy fraction")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--lambda", dest="lam", type=_fugacity, required=True, help="e.g. 1, 1/2, 0.25")
    sp.add_argument("--direct", action="store_true", help="also sum over enumerated sets and compare")
    sp.add_argument("--against", choices=("strong", "weak"), help="compare with the closed-form occupancy bound")
    budget(sp)
    graph_file(sp)

    sp = add("sample", cmd_sample, "Glauber dynamics estimate of the occupancy fraction")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--lambda", dest="lam", type=_positive_float, required=True)
    sp.add_argument("--steps", type=int, default=10**6)
    sp.add_argument("--burnin", type=int, default=10**4)
    sp.add_argument("--seed", type=int, default=0)
    graph_file(sp)

    for name, fn in (("weak-bound", cmd_weak_bound), ("strong-bound", cmd_strong_bound)):
        sp = add(name, fn, f"{name.split('-')[0]} independent set occupancy bound")
        sp.add_argument("--r", type=int, default=3)
        sp.add_argument("--d", type=int, required=True)
        g = sp.add_mutually_exclusive_group(required=True)
        g.add_argument("--lambda", dest="lam", type=_positive_float)
        g.add_argument("--integrate", action="store_true", help="integrate over (0, 1] into a log-count bound")
        sp.add_argument("--tol", type=_positive_float, default=1e-10)
        sp.add_argument("--certify", action="store_true", help="run the dual feasibility sweep")
        sp.add_argument("--dump-lp", metavar="CSV", help="write the LP as CSV")
        if name == "strong-bound":
            sp.add_argument("--explore-r", action="store_true",
                            help="exploration mode for r != 3: record slack violations without failing")

    sp = add("bound", cmd_bound, "integrated log-count bound over a ladder of d")
    sp.add_argument("--mode", choices=("weak", "strong"), required=True)
    sp.add_argument("--r", type=int, default=3)
    sp.add_argument("--d", type=int, nargs="+", required=True)
    sp.add_argument("--tol", type=_positive_float, default=1e-10)
    sp.add_argument("--csv", metavar="PATH", help="write d, bound, second_order, scaled_second_order")

    sp = add("constants", cmd_constants, "asymptotic constants")
    sp.add_argument("--cw", type=int, nargs="+", metavar="R", help="weak constant for these r")
    sp.add_argument("--cs3", action="store_true", help="strong constant for r = 3")
    sp.add_argument("--tol", type=_positive_float, default=1e-9)

    sp = add("gap", cmd_gap, "construction vs conjectured and proved values")
    sp.add_argument("--family", required=True)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--r", type=int)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--tol", type=_positive_float, default=1e-10)
    budget(sp)

    sp = add("certify", cmd_certify, "dual feasibility sweeps over a fugacity grid")
    sp.add_argument("--mode", choices=("both", "weak", "strong"), default="both")
    sp.add_argument("--r", type=int, default=3)
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--lambdas", type=_positive_float, nargs="+", default=list(DEFAULT_GRID))
    return p


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    # report a mistyped flag before argparse complains about a missing required one
    known = _all_flags(parser)
    unknown = [t for t in argv if t.startswith("--") and t != "--" and t.split("=")[0] not in known]
    if unknown:
        parser.error("unrecognized arguments: " + " ".join(unknown))
    args = parser.parse_args(argv)
    if args.command == "constants" and not (args.cs3 or args.cw):
        parser.error("constants: give --cs3 and/or --cw R")
    params = {k: v for k, v in vars(args).items() if k not in ("func", "json", "command")}
    rec = RunRecord(args.command, _jsonable(params))
    t0 = time.perf_counter()
    status = 0
    try:
        args.func(args, rec)
    except CertificateFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        status = 1
    except COMPUTATION_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    rec.wall_time = time.perf_counter() - t0
    if rec.results or args.json:
        emit(rec, args.json)
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
