"""Command-line front end.

Subcommands: eval (decay curve as CSV), verify (all checks on one problem
as JSON), construct (emit saturating problem files), scan (seeded random
verification campaign).  Problem files are JSON with complex numbers as
[re, im] pairs; CSV numbers carry 17 significant digits so downstream
diffs are exact.  Data goes to stdout (or --output), diagnostics to
stderr.  Exit codes: 0 all good, 1 input or validation error, 2 a check
failed.  Units: hbar = 1 throughout.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import bounds, comparison, ensembles
from .dynamics import decay_curve
from .errors import QDecayError
from .intelligent import (
    MixedIntelligentSpec,
    construct_mixed_intelligent,
    construct_pure_intelligent,
    variance_mixing,
)
from .states import RANK_TOL, DensityOperator, pure_density, uncertainty, validate_density

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_CHECK_FAILED = 2


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _pairs_from_matrix(M: np.ndarray):
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(M, dtype=complex)]


def _pairs_from_vector(v: np.ndarray):
    return [[float(z.real), float(z.imag)] for z in np.asarray(v, dtype=complex)]


def _matrix_from_pairs(obj, what: str) -> np.ndarray:
    try:
        arr = np.asarray(obj, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"{what}: expected nested [re, im] pairs ({exc})") from exc
    if arr.ndim != 3 or arr.shape[2] != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"{what}: expected shape (n, n, 2), got {arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]


def _vector_from_pairs(obj, what: str) -> np.ndarray:
    try:
        arr = np.asarray(obj, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"{what}: expected [re, im] pairs ({exc})") from exc
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError(f"{what}: expected shape (n, 2), got {arr.shape}")
    return arr[:, 0] + 1j * arr[:, 1]


def load_problem(path: str, rank_tol: float = RANK_TOL):
    """Parse a problem file into (rho, h, metadata)."""
    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    if not isinstance(raw, dict):
        raise ValueError("problem file must be a JSON object")
    for key in ("dim", "hamiltonian", "state"):
        if key not in raw:
            raise ValueError(f"problem file missing field {key!r}")
    dim = int(raw["dim"])
    h = _matrix_from_pairs(raw["hamiltonian"], "hamiltonian")
    if h.shape[0] != dim:
        raise ValueError(f"hamiltonian is {h.shape[0]}x{h.shape[0]}, dim says {dim}")
    state = raw["state"]
    if not isinstance(state, dict) or len(state) != 1:
        raise ValueError('state must be {"density": ...} or {"pure": ...}')
    if "density" in state:
        mat = _matrix_from_pairs(state["density"], "state.density")
        if mat.shape[0] != dim:
            raise ValueError(f"density is {mat.shape[0]}x{mat.shape[0]}, dim says {dim}")
        rho = validate_density(mat, rank_tol)
    elif "pure" in state:
        vec = _vector_from_pairs(state["pure"], "state.pure")
        if vec.size != dim:
            raise ValueError(f"pure vector has length {vec.size}, dim says {dim}")
        rho = pure_density(vec, rank_tol)
    else:
        raise ValueError('state must contain "density" or "pure"')
    return rho, h, raw.get("metadata", {})


def problem_json(dim: int, h: np.ndarray, state: dict, metadata: dict | None = None) -> dict:
    out = {"dim": int(dim), "hamiltonian": _pairs_from_matrix(h), "state": state}
    if metadata:
        out["metadata"] = metadata
    return out


def _write(text: str, output: str | None):
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# eval


def cmd_eval(args) -> int:
    rho, h, _ = load_problem(args.problem, args.rank_tol)
    if args.steps < 2:
        raise ValueError("steps must be >= 2")
    times = np.linspace(args.t_min, args.t_max, args.steps)
    curve = decay_curve(rho, h, times)
    lines = ["t,P,bound,margin,in_window"]
    for i, t in enumerate(curve.times):
        if curve.in_window[i]:
            row = [_fmt(t), _fmt(curve.values[i]), _fmt(curve.bound[i]), _fmt(curve.margin[i]), "1"]
        else:
            row = [_fmt(t), _fmt(curve.values[i]), "", "", "0"]
        lines.append(",".join(row))
    _write("\n".join(lines) + "\n", args.output)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify


def _passage_check(rho: DensityOperator, h, epsilon: float, t_max: float | None, tol_t: float) -> dict:
    delta_h = uncertainty(rho, h)
    if t_max is None:
        t_max = np.pi / delta_h if delta_h > bounds.STATIONARY_TOL else 10.0
    t_star = bounds.find_passage_time(rho, h, epsilon, t_max, tol_t)
    lower = (
        bounds.passage_time_lower_bound(delta_h, epsilon)
        if delta_h > bounds.STATIONARY_TOL
        else None
    )
    passed = True
    if t_star is not None and lower is not None:
        passed = bool(t_star + tol_t >= lower)
    return {
        "epsilon": epsilon,
        "t_max": float(t_max),
        "passage_time": t_star,
        "lower_bound": lower,
        "passed": passed,
    }


def run_checks(
    rho: DensityOperator,
    h,
    grid_points: int,
    eq_tol: float,
    bound_tol: float,
    epsilon: float,
    t_max: float | None,
    tol_t: float,
) -> dict:
    """All verifications on one (rho, h); shared by verify and scan."""
    fleming = bounds.verify_fleming(rho, h, grid_points, bound_tol)
    mt = bounds.verify_mt_inequality(rho, h, fleming.curve.times, bound_tol)
    try:
        verdict = bounds.classify_dichotomy(rho, h, eq_tol=eq_tol)
        dichotomy = {
            "verdict": verdict.kind,
            "witness": list(verdict.witness) if verdict.witness else None,
            "structural_confirmation": verdict.structural_confirmation,
            "passed": True,
        }
    except QDecayError as exc:
        dichotomy = {"verdict": None, "error": str(exc), "passed": False}
    try:
        vm = variance_mixing(rho, h)
        mixing = {
            "total": vm.total,
            "within": vm.within,
            "between": vm.between,
            "passed": True,
        }
    except QDecayError as exc:
        mixing = {"error": str(exc), "passed": False}
    delta_h = float(uncertainty(rho, h))
    if delta_h > bounds.STATIONARY_TOL:
        sample = bounds.comparison_sample(fleming.curve)
        env_report = comparison.lower_envelope_check(sample, bound_tol)
        envelope = {
            "min_margin": env_report.min_margin,
            "argmin_x": env_report.argmin_x,
            "passed": env_report.passed,
        }
    else:
        # No time scale to rescale by; P is identically 1 and the envelope
        # check is vacuous.
        envelope = {"min_margin": None, "argmin_x": None, "passed": True}
    return {
        "delta_h": delta_h,
        "rank": rho.rank,
        "checks": {
            "fleming": {
                "min_margin": fleming.min_margin,
                "argmin_t": fleming.argmin_t,
                "violations": len(fleming.violations),
                "passed": fleming.passed,
            },
            "mt_inequality": {
                "min_margin": mt.min_margin,
                "argmin_t": mt.argmin_t,
                "violations": len(mt.violations),
                "passed": mt.passed,
            },
            "dichotomy": dichotomy,
            "variance_mixing": mixing,
            "envelope": envelope,
            "passage": _passage_check(rho, h, epsilon, t_max, tol_t),
        },
    }


def cmd_verify(args) -> int:
    rho, h, _ = load_problem(args.problem, args.rank_tol)
    report = run_checks(
        rho,
        h,
        args.grid,
        args.eq_tol,
        args.bound_tol,
        args.epsilon,
        args.t_max,
        args.tol_t,
    )
    report["problem"] = args.problem
    report["passed"] = all(c["passed"] for c in report["checks"].values())
    _write(json.dumps(report, indent=2) + "\n", args.output)
    return EXIT_OK if report["passed"] else EXIT_CHECK_FAILED


# ---------------------------------------------------------------------------
# construct


def _spaced_hamiltonian(dim: int, omega1: float, omega2: float, mult1: int, mult2: int) -> np.ndarray:
    """Diagonal Hamiltonian with two controlled eigenspaces, rest distinct."""
    gap = omega2 - omega1
    fill = [omega2 + gap * (k + 1) for k in range(dim - mult1 - mult2)]
    return np.diag(np.array([omega1] * mult1 + [omega2] * mult2 + fill, dtype=complex))


def cmd_construct(args) -> int:
    if args.omega2 <= args.omega1:
        raise ValueError("omega2 must exceed omega1")
    if args.kind == "pure":
        if args.dim < 2:
            raise ValueError("pure construction needs dim >= 2")
        h = _spaced_hamiltonian(args.dim, args.omega1, args.omega2, 1, 1)
        basis = np.eye(args.dim, dtype=complex)
        phi = construct_pure_intelligent(basis[:, 0], basis[:, 1], h)
        state = {"pure": _pairs_from_vector(phi)}
        meta = {"kind": "pure-intelligent", "omega1": args.omega1, "omega2": args.omega2}
    else:
        weights = np.array([float(w) for w in args.weights.split(",")])
        n = weights.size
        mult = args.multiplicity if args.multiplicity else n
        if args.dim < mult + n or args.dim < 2 * mult:
            raise ValueError(f"dim {args.dim} too small for multiplicity {mult} and {n} components")
        h = _spaced_hamiltonian(args.dim, args.omega1, args.omega2, mult, mult)
        basis = np.eye(args.dim, dtype=complex)
        spec = MixedIntelligentSpec(
            dim=args.dim,
            omega1=args.omega1,
            omega2=args.omega2,
            weights=weights,
            basis1=basis[:, :n],
            basis2=basis[:, mult : mult + n],
        )
        rho = construct_mixed_intelligent(spec, h)
        state = {"density": _pairs_from_matrix(rho.matrix)}
        meta = {
            "kind": "mixed-intelligent",
            "omega1": args.omega1,
            "omega2": args.omega2,
            "weights": [float(w) for w in weights],
        }
    doc = problem_json(args.dim, h, state, meta)
    _write(json.dumps(doc, indent=2) + "\n", args.output)
    return EXIT_OK


# ---------------------------------------------------------------------------
# scan


def cmd_scan(args) -> int:
    dims = [int(d) for d in args.dims.split(",")] if args.dims else []
    rng = ensembles.default_rng(args.seed)
    verdicts = {bounds.STATIONARY: 0, bounds.STRICTLY_ABOVE: 0, bounds.SATURATING: 0}
    min_fleming = float("inf")
    min_mt = float("inf")
    min_envelope = float("inf")
    n_violations = 0
    n_passage_found = 0
    n_failed = 0
    csv_lines = ["dim,index,rank,delta_h,verdict,fleming_min_margin,mt_min_margin,envelope_min_margin,passage_time"]

    total = 0
    for dim in dims:
        for index in range(args.instances):
            rho, h = ensembles.random_instance(dim, rng)
            report = run_checks(
                rho, h, args.grid, args.eq_tol, args.bound_tol,
                args.epsilon, None, args.tol_t,
            )
            checks = report["checks"]
            total += 1
            kind = checks["dichotomy"]["verdict"]
            if kind in verdicts:
                verdicts[kind] += 1
            min_fleming = min(min_fleming, checks["fleming"]["min_margin"])
            min_mt = min(min_mt, checks["mt_inequality"]["min_margin"])
            env_margin = checks["envelope"]["min_margin"]
            if env_margin is not None:
                min_envelope = min(min_envelope, env_margin)
            n_violations += checks["fleming"]["violations"] + checks["mt_inequality"]["violations"]
            t_star = checks["passage"]["passage_time"]
            if t_star is not None:
                n_passage_found += 1
            if not all(c["passed"] for c in checks.values()):
                n_failed += 1
            csv_lines.append(",".join([
                str(dim), str(index), str(report["rank"]), _fmt(report["delta_h"]),
                str(kind), _fmt(checks["fleming"]["min_margin"]),
                _fmt(checks["mt_inequality"]["min_margin"]),
                _fmt(env_margin) if env_margin is not None else "",
                _fmt(t_star) if t_star is not None else "",
            ]))

    summary = {
        "config": {
            "seed": args.seed,
            "dims": dims,
            "instances_per_dim": args.instances,
            "grid_points": args.grid,
            "tolerances": {
                "eq_tol": args.eq_tol,
                "bound_tol": args.bound_tol,
                "rank_tol": args.rank_tol,
                "tol_t": args.tol_t,
            },
            "epsilon": args.epsilon,
            "generator": "numpy PCG64",
        },
        "total_instances": total,
        "verdicts": verdicts,
        "min_fleming_margin": min_fleming if total else None,
        "min_mt_margin": min_mt if total else None,
        "min_envelope_margin": min_envelope if np.isfinite(min_envelope) else None,
        "bound_violations": n_violations,
        "passage_times_found": n_passage_found,
        "instances_failed": n_failed,
    }
    _write(json.dumps(summary, indent=2) + "\n", args.output)
    if args.instances_csv:
        with open(args.instances_csv, "w", encoding="utf-8") as fh:
            fh.write("\n".join(csv_lines) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def _add_common_tolerances(p: argparse.ArgumentParser, tol_t_default: float):
    p.add_argument("--rank-tol", type=float, default=RANK_TOL,
                   help="eigenvalues of rho at or below this are dropped")
    p.add_argument("--eq-tol", type=float, default=bounds.EQ_TOL,
                   help="curve-equality tolerance for the dichotomy")
    p.add_argument("--bound-tol", type=float, default=bounds.BOUND_TOL,
                   help="margin below -this counts as a bound violation")
    p.add_argument("--grid", type=int, default=201, help="grid points per window")
    p.add_argument("--epsilon", type=float, default=0.5, help="passage-time level")
    p.add_argument("--tol-t", type=float, default=tol_t_default,
                   help="passage-time resolution")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qdecay",
        description="Survival-probability decay: curves, cosine bounds, "
        "saturation dichotomy, intelligent states (hbar = 1).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="sample a decay curve to CSV")
    p_eval.add_argument("problem", help="problem file (JSON)")
    p_eval.add_argument("--t-min", type=float, default=0.0)
    p_eval.add_argument("--t-max", type=float, default=np.pi)
    p_eval.add_argument("--steps", type=int, default=201)
    p_eval.add_argument("--rank-tol", type=float, default=RANK_TOL)
    p_eval.add_argument("--output", default=None)
    p_eval.set_defaults(func=cmd_eval)

    p_verify = sub.add_parser("verify", help="run every check on one problem")
    p_verify.add_argument("problem", help="problem file (JSON)")
    _add_common_tolerances(p_verify, tol_t_default=1e-9)
    p_verify.add_argument("--t-max", type=float, default=None,
                          help="passage-time search horizon (default: pi/delta_h)")
    p_verify.add_argument("--output", default=None)
    p_verify.set_defaults(func=cmd_verify)

    p_con = sub.add_parser("construct", help="emit a bound-saturating problem file")
    p_con.add_argument("kind", choices=["pure", "mixed"])
    p_con.add_argument("--dim", type=int, default=4)
    p_con.add_argument("--omega1", type=float, default=0.0)
    p_con.add_argument("--omega2", type=float, default=2.0)
    p_con.add_argument("--weights", default="0.5,0.5",
                       help="comma-separated mixture weights (mixed only)")
    p_con.add_argument("--multiplicity", type=int, default=0,
                       help="eigenspace dimension (mixed; default: number of weights)")
    p_con.add_argument("--output", default=None)
    p_con.set_defaults(func=cmd_construct)

    p_scan = sub.add_parser("scan", help="seeded random verification campaign")
    p_scan.add_argument("--seed", type=int, default=42)
    p_scan.add_argument("--dims", default="2,3,4,5,6",
                        help="comma-separated Hilbert space dimensions")
    p_scan.add_argument("--instances", type=int, default=20,
                        help="instances per dimension")
    _add_common_tolerances(p_scan, tol_t_default=1e-3)
    p_scan.add_argument("--output", default=None)
    p_scan.add_argument("--instances-csv", default=None,
                        help="also write one CSV row per instance to this path")
    p_scan.set_defaults(func=cmd_scan)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (QDecayError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


def entry():  # console-script shim
    raise SystemExit(main())
