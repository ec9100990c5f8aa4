"""Command-line front end.

Problem files are JSON: matrices are row-major arrays-of-arrays whose
entries are numbers or [re, im] pairs; a qubit state may be given as
``{"bloch": [x, y, z]}``.  Unknown fields are rejected.  Exit codes:
0 ok, 2 parse error, 3 validation error, 4 property/bound violation.
``SKEWBOUND_TOL`` overrides the residual tolerance.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import bounds, channels, equalities, linalg, moments, qubit, weakvalue
from .errors import SkewboundError
from .linalg import DensityOperator, Tolerances

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_VIOLATION = 4

REPORT_VERSION = 1


class ParseError(Exception):
    pass


# ---------------------------------------------------------------- parsing


def _entry_to_complex(x, name, row, col) -> complex:
    if isinstance(x, (int, float)) and not isinstance(x, bool):
        return complex(x)
    if isinstance(x, list) and len(x) == 2 and all(
        isinstance(t, (int, float)) and not isinstance(t, bool) for t in x
    ):
        return complex(x[0], x[1])
    raise ParseError(
        f"matrix {name!r}: entry at row {row}, col {col} must be a number or [re, im], got {x!r}"
    )


def _parse_matrix(obj, name) -> np.ndarray:
    if not isinstance(obj, list) or not obj:
        raise ParseError(f"matrix {name!r}: expected a nonempty array of rows")
    ncols = None
    rows = []
    for r, row in enumerate(obj):
        if not isinstance(row, list) or not row:
            raise ParseError(f"matrix {name!r}: row {r} is not a nonempty array")
        if ncols is None:
            ncols = len(row)
        elif len(row) != ncols:
            raise ParseError(
                f"matrix {name!r}: row {r} has {len(row)} columns, expected {ncols}"
            )
        rows.append([_entry_to_complex(x, name, r, c) for c, x in enumerate(row)])
    M = np.array(rows, dtype=complex)
    if M.shape[0] != M.shape[1]:
        raise ParseError(f"matrix {name!r}: shape {M.shape} is not square")
    return M


_KNOWN_TOP = {"version", "rho", "operators", "channels", "params"}
_KNOWN_PARAMS = {
    "s",
    "nu",
    "grid_points",
    "samples",
    "seed",
    "tolerances",
    "dims",
    "ops_a",
    "ops_b",
}
_KNOWN_TOLS = {"tol_herm", "tol_trace", "tol_psd", "tol_recon", "tol_residual"}


@dataclass
class Params:
    s: float = 0.5
    nu: list = field(default_factory=list)
    grid_points: int = 201
    samples: int = 5000
    seed: int = 0
    dims: Optional[list] = None
    ops_a: Optional[list] = None
    ops_b: Optional[list] = None
    tolerances: Tolerances = field(default_factory=Tolerances)


@dataclass
class ProblemFile:
    version: int
    rho: Optional[DensityOperator]
    operators: dict
    channels: dict
    params: Params


def _parse_nu_value(x) -> float:
    if isinstance(x, str):
        s = x.strip().lower()
        if s in ("-inf", "inf", "-infinity", "minus_infinity"):
            return float("-inf")
        try:
            return float(s)
        except ValueError as exc:
            raise ParseError(f"bad nu value {x!r}") from exc
    if isinstance(x, (int, float)) and not isinstance(x, bool):
        return float(x)
    raise ParseError(f"bad nu value {x!r}")


def _parse_params(obj) -> Params:
    if not isinstance(obj, dict):
        raise ParseError("params must be an object")
    unknown = set(obj) - _KNOWN_PARAMS
    if unknown:
        raise ParseError(f"unknown params fields: {sorted(unknown)}")
    p = Params()
    if "s" in obj:
        p.s = float(obj["s"])
    if "nu" in obj:
        if not isinstance(obj["nu"], list):
            raise ParseError("params.nu must be an array")
        p.nu = [_parse_nu_value(x) for x in obj["nu"]]
    for key in ("grid_points", "samples", "seed"):
        if key in obj:
            setattr(p, key, int(obj[key]))
    if "dims" in obj:
        if not (isinstance(obj["dims"], list) and len(obj["dims"]) == 2):
            raise ParseError("params.dims must be [dA, dB]")
        p.dims = [int(x) for x in obj["dims"]]
    for key in ("ops_a", "ops_b"):
        if key in obj:
            if not isinstance(obj[key], list):
                raise ParseError(f"params.{key} must be an array of operator names")
            setattr(p, key, [str(x) for x in obj[key]])
    if "tolerances" in obj:
        tobj = obj["tolerances"]
        if not isinstance(tobj, dict):
            raise ParseError("params.tolerances must be an object")
        unknown = set(tobj) - _KNOWN_TOLS
        if unknown:
            raise ParseError(f"unknown tolerance fields: {sorted(unknown)}")
        p.tolerances = Tolerances(**{k: float(v) for k, v in tobj.items()})
    return p


def _resolve_path(path: str) -> str:
    if os.path.exists(path):
        return path
    name = path if path.endswith(".json") else path + ".json"
    bundled = os.path.join(os.path.dirname(__file__), "data", os.path.basename(name))
    if os.path.exists(bundled):
        return bundled
    raise ParseError(f"file not found: {path}")


def load_problem(path: str, tol_override: Optional[float] = None) -> ProblemFile:
    """Parse and validate a problem file; ParseError vs SkewboundError
    distinguish malformed input from well-formed but invalid physics."""
    real = _resolve_path(path)
    try:
        with open(real, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ParseError("top level must be an object")
    unknown = set(raw) - _KNOWN_TOP
    if unknown:
        raise ParseError(f"unknown top-level fields: {sorted(unknown)}")
    version = int(raw.get("version", 1))
    params = _parse_params(raw.get("params", {}))
    if tol_override is not None:
        params.tolerances = Tolerances(
            tol_herm=params.tolerances.tol_herm,
            tol_trace=params.tolerances.tol_trace,
            tol_psd=params.tolerances.tol_psd,
            tol_recon=params.tolerances.tol_recon,
            tol_residual=tol_override,
        )
    tol = params.tolerances
    rho = None
    if "rho" in raw:
        robj = raw["rho"]
        if isinstance(robj, dict):
            if set(robj) != {"bloch"}:
                raise ParseError("rho object form must be exactly {\"bloch\": [x, y, z]}")
            vec = robj["bloch"]
            if not (isinstance(vec, list) and len(vec) == 3):
                raise ParseError("bloch vector must have three components")
            rho = qubit.BlochState(np.array([float(x) for x in vec])).to_density(tol)
        else:
            rho = linalg.density(_parse_matrix(robj, "rho"), tol)
    operators = {}
    if "operators" in raw:
        if not isinstance(raw["operators"], dict):
            raise ParseError("operators must be an object of named matrices")
        for name, obj in raw["operators"].items():
            operators[name] = _parse_matrix(obj, name)
    chans = {}
    if "channels" in raw:
        if not isinstance(raw["channels"], dict):
            raise ParseError("channels must be an object of named Kraus lists")
        for name, obj in raw["channels"].items():
            if not isinstance(obj, list) or not obj:
                raise ParseError(f"channel {name!r} must be a nonempty array of matrices")
            kraus = tuple(
                _parse_matrix(K, f"{name}[{i}]") for i, K in enumerate(obj)
            )
            chans[name] = channels.KrausChannel(kraus=kraus, label=name, tol=tol)
    return ProblemFile(
        version=version, rho=rho, operators=operators, channels=chans, params=params
    )


# ---------------------------------------------------------------- output


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.10g}"
    return str(v)


def _flatten(d, prefix=""):
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            yield from _flatten(v, key + ".")
        elif isinstance(v, (list, tuple)):
            yield key, "[" + ", ".join(_fmt(x) for x in v) + "]"
        else:
            yield key, _fmt(v)


def emit(report: dict, fmt: str, out=None) -> None:
    out = out or sys.stdout
    if fmt == "json":
        print(json.dumps(report, sort_keys=True, default=float), file=out)
    elif fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["key", "value"])
        for k, v in _flatten(report):
            w.writerow([k, v])
        out.write(buf.getvalue())
    else:
        for k, v in _flatten(report):
            print(f"{k} = {v}", file=out)


# ---------------------------------------------------------------- commands


def _need(cond, msg):
    if not cond:
        raise ParseError(msg)


def cmd_moments(pf: ProblemFile, args) -> tuple:
    _need(pf.rho is not None, "moments needs a rho")
    _need(pf.operators, "moments needs at least one operator")
    tol = pf.params.tolerances
    s = args.s if args.s is not None else pf.params.s
    nus = args.nu if args.nu is not None else pf.params.nu
    table = {}
    for name, A in pf.operators.items():
        row = {
            "std_dev": moments.std_dev(A, pf.rho, tol),
            f"skew_s={_fmt(s)}": moments.wyd_skew(A, pf.rho, s, tol),
        }
        for nu in nus:
            key = "nu=-inf" if math.isinf(nu) else f"nu={_fmt(nu)}"
            row[f"gen_skew_{key}"] = moments.gen_skew(A, pf.rho, nu, tol)
        table[name] = row
    return EXIT_OK, {"command": "moments", "report_version": REPORT_VERSION, "operators": table}


def _bound_report(sb: bounds.SpectralBound) -> dict:
    return {
        "epsilon0": sb.epsilon0,
        "epsilon1": sb.epsilon1,
        "epsilonK": sb.epsilonK,
        "bound": sb.bound,
        "used_excited": sb.used_excited,
        "interval": [sb.interval[0], sb.interval[1]],
    }


def cmd_bound(pf: ProblemFile, args) -> tuple:
    _need(pf.rho is not None, "bound needs a rho")
    _need(pf.operators, "bound needs at least one operator")
    tol = pf.params.tolerances
    ops = bounds.OperatorSet(tuple(pf.operators.values()))
    s = args.s if args.s is not None else pf.params.s
    if abs(s - 0.5) < 1e-12:
        sb = bounds.bound_wy(ops, pf.rho, tol)
    else:
        sb = bounds.bound_wyd(ops, pf.rho, s, tol=tol)
    report = {
        "command": "bound",
        "report_version": REPORT_VERSION,
        "s": s,
        **_bound_report(sb),
    }
    code = EXIT_OK
    if args.alpha_scan:
        grid = args.grid or pf.params.grid_points
        report["alpha_scan"] = bounds.tighten_alpha_scan(ops, grid, tol=tol)
        report["alpha_scan_plain"] = bounds.pure_variance_bound(ops, grid, tol)
    if args.oracle:
        seed = args.seed if args.seed is not None else pf.params.seed
        oracle = bounds.empirical_minimum(
            ops, s, args.oracle, seed, jobs=max(args.jobs, 1), tol=tol
        )
        report["oracle_min"] = oracle
        report["oracle_samples"] = args.oracle
        # the bound is state dependent, so the build-bug sentinel compares
        # each sample against the bound evaluated at that sample's state
        d = ops.dim
        rng = np.random.default_rng(seed)
        margin = math.inf
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            for _ in range(args.oracle):
                sample = linalg.random_density(d, int(rng.integers(1, d + 1)), rng)
                if abs(s - 0.5) < 1e-12:
                    total = sum(moments.wyd_skew(A, sample, s, tol) for A in ops.operators)
                    if sb.used_excited:
                        ref = sb.epsilon1 * max(0.0, 1 - linalg.sqrt_trace(sample) ** 2 / d)
                    else:
                        ref = sb.epsilon0
                else:
                    total = sum(moments.wyd_skew(A, sample, s, tol) for A in ops.operators)
                    ref = bounds.bound_wyd(ops, sample, s, tol=tol).bound
                margin = min(margin, total - ref)
        report["oracle_margin_min"] = margin
        if margin < -tol.tol_residual:
            report["oracle_violation"] = True
            code = EXIT_VIOLATION
    return code, report


def cmd_channel_bound(pf: ProblemFile, args) -> tuple:
    _need(pf.channels, "channel-bound needs at least one channel")
    tol = pf.params.tolerances
    chs = list(pf.channels.values())
    sb = channels.channel_bound(chs, pf.rho, tol) if pf.rho is not None else None
    _need(sb is not None, "channel-bound needs a rho")
    report = {
        "command": "channel-bound",
        "report_version": REPORT_VERSION,
        **_bound_report(sb),
    }
    skews = {ch.label or f"channel{i}": channels.channel_skew(ch, pf.rho, tol)
             for i, ch in enumerate(chs)}
    report["channel_skew"] = skews
    report["skew_sum"] = sum(skews.values())
    code = EXIT_OK
    if args.oracle:
        seed = args.seed if args.seed is not None else pf.params.seed
        d = chs[0].dim
        rng = np.random.default_rng(seed)
        worst = math.inf
        for _ in range(args.oracle):
            rho = linalg.random_density(d, int(rng.integers(1, d + 1)), rng)
            total = sum(channels.channel_skew(ch, rho, tol) for ch in chs)
            ref = sb.epsilon1 * max(0.0, 1 - linalg.sqrt_trace(rho) ** 2 / d) \
                if sb.used_excited else sb.epsilon0
            worst = min(worst, total - ref)
        report["oracle_margin_min"] = worst
        if worst < -tol.tol_residual:
            report["oracle_violation"] = True
            code = EXIT_VIOLATION
    return code, report


def cmd_witness(pf: ProblemFile, args) -> tuple:
    _need(pf.rho is not None, "witness needs a bipartite rho")
    p = pf.params
    _need(p.ops_a and p.ops_b, "witness needs params.ops_a and params.ops_b")
    for name in (p.ops_a + p.ops_b):
        _need(name in pf.operators, f"witness references unknown operator {name!r}")
    opsA = [pf.operators[n] for n in p.ops_a]
    opsB = [pf.operators[n] for n in p.ops_b]
    grid = args.grid or p.grid_points
    res = bounds.separability_witness(opsA, opsB, pf.rho, grid, p.tolerances)
    return EXIT_OK, {
        "command": "witness",
        "report_version": REPORT_VERSION,
        "lhs": res.lhs,
        "threshold": res.threshold,
        "violated": res.violated,
    }


def cmd_weakvalue(pf: ProblemFile, args) -> tuple:
    _need(pf.rho is not None, "weakvalue needs a rho")
    _need(pf.operators, "weakvalue needs at least one operator")
    tol = pf.params.tolerances
    s = args.s if args.s is not None else pf.params.s
    table = {}
    code = EXIT_OK
    for name, A in pf.operators.items():
        rec = weakvalue.reconstruct_skew(A, pf.rho, s, tol=tol)
        ref = moments.wyd_skew(A, pf.rho, s, tol)
        row = {
            "reconstructed": rec.value,
            "reference": ref,
            "abs_error": abs(rec.value - ref),
            "imag_residual": rec.imag_residual,
        }
        if row["abs_error"] > tol.tol_residual or rec.imag_residual > tol.tol_residual:
            row["violation"] = True
            code = EXIT_VIOLATION
        table[name] = row
    return code, {
        "command": "weakvalue",
        "report_version": REPORT_VERSION,
        "s": s,
        "operators": table,
    }


# ------------------------------------------------------------ verify suites


def _suite_equalities(seeds: int, tol: Tolerances):
    worst = 0.0
    worst_case = ""
    for seed in range(seeds):
        rng = np.random.default_rng(10_000 + seed)
        d = int(rng.integers(2, 6))
        rho = linalg.random_density(d, int(rng.integers(1, d + 1)), rng)
        A = linalg.random_operator(d, rng)
        B = linalg.random_operator(d, rng)
        s = float(rng.choice([0.25, 0.5, 0.75]))
        checks = []
        checks.append(("sum", equalities.sum_equality(A, B, rho, tol)))
        try:
            checks.append(("product", equalities.product_equality(A, B, rho, tol)))
            checks.append(
                ("product_nontrivial", equalities.product_equality_nontrivial(A, B, rho, tol))
            )
        except SkewboundError:
            pass
        Xs = [linalg.random_hermitian(d, rng) for _ in range(3)]
        checks.append(("three_sum", equalities.three_observable_sum_equality(*Xs, rho, tol)))
        try:
            checks.append(
                ("three_product", equalities.three_observable_product_equality(*Xs, rho, tol))
            )
        except SkewboundError:
            pass
        try:
            checks.append(("skew_product", equalities.skew_product_equality(A, B, rho, s, tol)))
            checks.append(
                ("skew_correction", equalities.skew_product_correction_identity(A, B, rho, s, tol))
            )
        except SkewboundError:
            pass
        for label, rep in checks:
            if abs(rep.residual) > worst:
                worst = abs(rep.residual)
                worst_case = f"{label} seed={seed} d={d} s={_fmt(s)}"
    return worst, worst_case


def _random_mixed_qubit(rng) -> DensityOperator:
    # strictly mixed, away from maximally mixed (triple equalities are 0/0 there)
    lam = float(rng.uniform(0.05, 0.45))
    U = linalg.haar_unitary(2, rng)
    return linalg.density(U @ np.diag([lam, 1 - lam]) @ U.conj().T)


def _random_triple(rng):
    Q = np.linalg.qr(rng.normal(size=(3, 3)))[0]
    return Q[:, 0], Q[:, 1], Q[:, 2]


def _suite_qubit(seeds: int, tol: Tolerances):
    worst = 0.0
    worst_case = ""
    orders_pool = [0.0, -1.0, -2.0, float("-inf")]
    for seed in range(seeds):
        rng = np.random.default_rng(20_000 + seed)
        rho = _random_mixed_qubit(rng)
        n1, n2, n3 = _random_triple(rng)
        orders = [float(rng.choice(orders_pool)) for _ in range(3)]
        reps = [
            qubit.orthogonal_triple_skew_equality(n1, n2, n3, rho, orders, tol),
            *qubit.mixed_triple_equalities(n1, n2, n3, rho, orders, tol),
            qubit.direction_variance_fisher_identity(n1, rho, tol),
            qubit.direction_variance_skew_identity(n2, rho, orders[1], tol),
            qubit.triple_purity_identity(n1, n2, n3, rho),
        ]
        sigma = linalg.random_operator(2, rng)
        closed = qubit.qubit_gen_skew_closed(sigma, rho, orders[0], tol)
        general = moments.gen_skew(sigma, rho, orders[0], tol)
        reps.append(
            equalities.EqualityReport(closed, general, closed - general, 0.0, 0.0, +1)
        )
        for i, rep in enumerate(reps):
            if abs(rep.residual) > worst:
                worst = abs(rep.residual)
                worst_case = f"check{i} seed={seed}"
    return worst, worst_case


def _suite_weakvalue(seeds: int, tol: Tolerances):
    worst = 0.0
    worst_case = ""
    for seed in range(seeds):
        rng = np.random.default_rng(30_000 + seed)
        d = int(rng.integers(2, 5))
        rho = linalg.random_density(d, d, rng)
        A = linalg.random_hermitian(d, rng)
        s = float(rng.choice([0.3, 0.5, 0.7]))
        U = linalg.haar_unitary(d, rng)
        rec = weakvalue.reconstruct_skew(A, rho, s, basis=list(U.T), tol=tol)
        ref = moments.wyd_skew(A, rho, s, tol)
        sub = weakvalue.subsystem_weak_values(A, rho, s, basis=list(U.T), tol=tol)
        for label, v in (
            ("reconstruction", abs(rec.value - ref)),
            ("imag", rec.imag_residual),
            ("factorization", sub.factorization_residual),
            ("conjugation", sub.conjugation_residual),
        ):
            if v > worst:
                worst = v
                worst_case = f"{label} seed={seed} d={d} s={_fmt(s)}"
    return worst, worst_case


def cmd_verify(pf: ProblemFile, args) -> tuple:
    tol = pf.params.tolerances
    suites = {
        "equalities": _suite_equalities,
        "qubit": _suite_qubit,
        "weakvalue": _suite_weakvalue,
    }
    wanted = list(suites) if args.suite == "all" else [args.suite]
    results = {}
    worst_overall = 0.0
    for name in wanted:
        worst, case = suites[name](args.seeds, tol)
        results[name] = {"max_residual": worst, "worst_case": case}
        worst_overall = max(worst_overall, worst)
    code = EXIT_OK if worst_overall < tol.tol_residual else EXIT_VIOLATION
    return code, {
        "command": "verify",
        "report_version": REPORT_VERSION,
        "seeds": args.seeds,
        "tol_residual": tol.tol_residual,
        "max_residual": worst_overall,
        "suites": results,
        "pass": code == EXIT_OK,
    }


# ---------------------------------------------------------------- main


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="skewbound",
        description="Skew-information uncertainty quantities and spectral bounds.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, oracle=False):
        p.add_argument("file", help="problem file (path or bundled name)")
        p.add_argument("--format", choices=("text", "json", "csv"), default="text")
        p.add_argument("--jobs", type=int, default=1)
        if oracle:
            p.add_argument("--oracle", type=int, default=0, metavar="N")
            p.add_argument("--seed", type=int, default=None)

    p = sub.add_parser("moments", help="standard deviation and skew informations")
    common(p)
    p.add_argument("--s", type=float, default=None)
    p.add_argument("--nu", type=lambda v: [_parse_nu_value(x) for x in v.split(",")],
                   default=None, metavar="LIST")

    p = sub.add_parser("bound", help="spectral lower bound for an operator set")
    common(p, oracle=True)
    p.add_argument("--s", type=float, default=None)
    p.add_argument("--alpha-scan", action="store_true")
    p.add_argument("--grid", type=int, default=0)

    p = sub.add_parser("channel-bound", help="bound for pooled channel coherences")
    common(p, oracle=True)

    p = sub.add_parser("witness", help="variance-based entanglement witness")
    common(p)
    p.add_argument("--grid", type=int, default=0)

    p = sub.add_parser("weakvalue", help="weak-value reconstruction of skew information")
    common(p)
    p.add_argument("--s", type=float, default=None)

    p = sub.add_parser("verify", help="run residual sweeps")
    common(p)
    p.add_argument("--suite", choices=("equalities", "qubit", "weakvalue", "all"),
                   default="all")
    p.add_argument("--seeds", type=int, default=50)
    return ap


_DISPATCH = {
    "moments": cmd_moments,
    "bound": cmd_bound,
    "channel-bound": cmd_channel_bound,
    "witness": cmd_witness,
    "weakvalue": cmd_weakvalue,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    tol_override = None
    env = os.environ.get("SKEWBOUND_TOL")
    if env:
        try:
            tol_override = float(env)
        except ValueError:
            print(f"error: bad SKEWBOUND_TOL {env!r}", file=sys.stderr)
            return EXIT_PARSE
    try:
        pf = load_problem(args.file, tol_override)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except SkewboundError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    try:
        code, report = _DISPATCH[args.command](pf, args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except SkewboundError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    emit(report, args.format)
    return code


if __name__ == "__main__":
    sys.exit(main())
