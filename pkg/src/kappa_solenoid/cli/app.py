"""Command-line front end: argument parsing, dispatch, and report serialization.

Every report embeds the resolved configuration it was produced from; feeding
that echo back through ``--config`` reproduces the report byte for byte.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .. import __version__
from .. import walk as walk_mod
from ..dynamics import (
    classify,
    entropy,
    enumerate_characters,
    fixed_count,
    k_groups,
    least_period_count,
)
from ..errors import ConvergenceError, GuardExceeded, InvalidParameter
from ..exactalg import (
    Algebraic,
    DeformationParams,
    Transcendental,
    companion_matrix,
    element,
    gen_u,
    gen_v,
    normalize_poly,
    params_to_a,
)
from ..exactalg.poly import format_poly
from ..representations import build_family, relation_deviation, verify_covariance
from ..spectral import commutator_norm, dirac_commuting, dirac_mixed, summability_report
from .polyparse import parse_poly

TOOL = "kappa-solenoid"
SCHEMA_VERSION = "1.0"
FORMATS = ("json", "csv", "table")

EXIT_OK, EXIT_FAIL, EXIT_INVALID, EXIT_GUARD = 0, 1, 2, 3


@dataclass
class RunConfig:
    subcommand: str
    options: Dict[str, Any] = field(default_factory=dict)

    def echo(self) -> Dict[str, Any]:
        return {"subcommand": self.subcommand, **self.options}

    @classmethod
    def from_echo(cls, data: Dict[str, Any]) -> "RunConfig":
        """Accepts a bare echo or a whole JSON report carrying one."""
        if "config" in data and isinstance(data["config"], dict):
            data = data["config"]
        data = dict(data)
        try:
            sub = data.pop("subcommand")
        except KeyError:
            raise InvalidParameter("config has no 'subcommand'") from None
        if sub not in HANDLERS:
            raise InvalidParameter(f"unknown subcommand {sub!r}")
        return cls(sub, data)


@dataclass
class Report:
    body: Dict[str, Any]
    table: Tuple[List[str], List[list]] = ((), [])
    plot: Tuple[List[str], List[list]] = ((), [])
    provenance: Dict[str, str] = field(default_factory=dict)
    exit_code: int = EXIT_OK


# --- helpers -------------------------------------------------------------------

def _jsonable(x):
    if isinstance(x, float):
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        if math.isnan(x):
            return "nan"
        return x
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def resolve_param(text: str):
    if text.strip().lower() == "transcendental":
        return Transcendental()
    return Algebraic(normalize_poly(parse_poly(text)))


def _param_label(param) -> str:
    return format_poly(param.poly.coeffs) if param.is_algebraic else "transcendental"


def _fractions(text: str) -> List[Fraction]:
    try:
        return [Fraction(s.strip()) for s in text.split(",") if s.strip()]
    except (ValueError, ZeroDivisionError):
        raise InvalidParameter(f"expected comma-separated rationals, got {text!r}") from None


def _exponents(text: str) -> List[float]:
    text = text.strip()
    if text.startswith("p="):
        text = text[2:]
    try:
        return [float(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise InvalidParameter(f"expected comma-separated exponents, got {text!r}") from None


def _require_algebraic(param, what: str):
    if not param.is_algebraic:
        raise InvalidParameter(f"{what} needs an algebraic parameter")


# --- subcommands ---------------------------------------------------------------

def cmd_invariants(o) -> Report:
    if o.get("poly") is None:
        if o.get("kappa") is None:
            raise InvalidParameter("give --poly or --kappa/--omega0")
        a, poly = params_to_a(DeformationParams(o["kappa"], o.get("omega0") or 0.0))
        if poly is None:
            raise InvalidParameter(f"a = {a!r} is not a recognised small rational; pass --poly")
        param = Algebraic(poly)
    else:
        param = resolve_param(o["poly"])
    qmax = o["qmax"]
    if qmax < 1:
        raise InvalidParameter("qmax must be positive")
    prov = {}
    if not param.is_algebraic:
        body = {
            "parameter": "transcendental",
            "entropy": {"value": math.inf, "error_bound": 0.0},
            "counts": None,
        }
        prov["entropy"] = "automorphism is the full shift on an infinite torus product"
        prov["counts"] = "every c_q is infinite"
        return Report(body, (["q", "c_q", "least_period", "log_c_q_over_q"], []),
                      (["q", "log_c_q_over_q"], []), prov)
    poly = param.poly
    h = entropy(param, tol=o["tol"])
    rows, plot = [], []
    for q in range(1, qmax + 1):
        c = fixed_count(poly, q)
        rate = math.log(c) / q
        rows.append([q, c, least_period_count(poly, q), rate])
        plot.append([q, rate])
    body = {
        "parameter": _param_label(param),
        "coefficients": list(poly.coeffs),
        "degree": poly.degree,
        "leading": poly.leading,
        "constant": poly.constant,
        "irreducibility_verified": poly.irreducibility_verified,
        "companion_matrix": companion_matrix(poly),
        "entropy": {"value": h.value, "error_bound": h.error_bound},
        "counts": [{"q": r[0], "c_q": r[1], "least_period": r[2], "log_c_q_over_q": r[3]} for r in rows],
    }
    prov["counts"] = "c_q = |Res(Q, x^q - 1)| by fraction-free Sylvester elimination; least periods by Moebius inversion"
    prov["entropy"] = "log q_d + sum of log|r| over roots outside the unit circle; Aberth roots with disjoint inclusion disks"
    prov["companion_matrix"] = "multiplication by q_d a on the basis 1, a, ..., a^(d-1)"
    return Report(body, (["q", "c_q", "least_period", "log_c_q_over_q"], rows),
                  (["q", "log_c_q_over_q"], plot), prov)


def cmd_classify(o) -> Report:
    a, b = resolve_param(o["poly_a"]), resolve_param(o["poly_b"])
    v = classify(a, b, qmax=o["qmax"], tol=o["tol"])
    body = {
        "a": _param_label(a),
        "b": _param_label(b),
        "outcome": v.outcome,
        "qmax": v.qmax,
        "witness_q": v.witness_q,
        "counts": list(v.counts) if v.counts else None,
        "entropy_gap": v.entropy_gap,
        "notes": list(v.notes),
    }
    prov = {"outcome": "first mismatch of c_q for q <= qmax, then certified entropy comparison; equality is never a proof of isomorphism"}
    return Report(body, (["outcome", "witness_q", "entropy_gap"], [[v.outcome, v.witness_q, v.entropy_gap]]),
                  provenance=prov)


def cmd_rep(o) -> Report:
    param = resolve_param(o["poly"])
    _require_algebraic(param, "rep build")
    xs = _fractions(o["x"])
    fam = build_family(param, o["qmax"], xs)
    coeffs = param.poly.coeffs
    m = -coeffs[0] if len(coeffs) == 2 and coeffs[1] == 1 else None
    tests = [element(param, {n: 1}).b for n in range(-2, 3)]
    rows, worst_u, worst_cov, worst_rel = [], 0.0, 0.0, None
    checks = o.get("check", "all") == "all"
    for (q, orbit, xi), blk in fam:
        if not checks:
            rows.append([q, orbit, str(xs[xi]), blk.dim, " ".join(str(t) for t in blk.chi.angles),
                         None, None, None])
            continue
        cov = verify_covariance(blk, tests)
        uni = max(cov.unitarity_error, blk.evaluate_exact(gen_v(param)).unitarity_error())
        rel = relation_deviation(blk, m) if m is not None and m >= 2 else None
        worst_u, worst_cov = max(worst_u, uni), max(worst_cov, cov.deviation)
        if rel is not None:
            worst_rel = rel if worst_rel is None else max(worst_rel, rel)
        rows.append([q, orbit, str(xs[xi]), blk.dim, " ".join(str(t) for t in blk.chi.angles),
                     uni, cov.deviation, rel])
    body = {
        "parameter": _param_label(param),
        "qmax": o["qmax"],
        "x_schedule": [str(x) for x in xs],
        "blocks": len(fam),
        "total_dim": fam.total_dim,
    }
    if checks:
        body["max_unitarity_error"] = worst_u
        body["max_covariance_deviation"] = worst_cov
        body["max_relation_deviation"] = worst_rel
    prov = {
        "blocks": "one block per shift orbit of least-period characters and per sampled x",
        "max_relation_deviation": "|| U V U^-1 - V^m || when the parameter is x - m, else null",
    }
    cols = ["q", "orbit", "x", "dim", "angles", "unitarity_error", "covariance_deviation", "relation_deviation"]
    return Report(body, (cols, rows), provenance=prov)


def cmd_dirac(o) -> Report:
    param = resolve_param(o["poly"])
    _require_algebraic(param, "dirac build")
    xs = _fractions(o["x"])
    build = dirac_commuting if o["mode"] == "commuting" else dirac_mixed
    spec = build(param, o["p"], o["qmax"], x_count=len(xs))
    rep = summability_report(spec, o["p"])
    cq = min(o["commutator_qmax"], spec.qmax)
    fam = build_family(param, cq, xs)
    comm = {"u": commutator_norm(spec, fam, gen_u(param)).supremum}
    for k in range(1, 6):
        comm[f"v^{k}"] = commutator_norm(spec, fam, gen_v(param) ** k).supremum
    rows, plot = [], []
    for blk, inc, tot in zip(spec.blocks, rep.increments, rep.partial_sums):
        rows.append([blk.q, blk.c_q, blk.orbits, float(blk.offset), " ".join(map(str, blk.increments)), inc, tot])
        plot.append([blk.q, tot])
    body = {
        "parameter": _param_label(param),
        "mode": spec.mode,
        "p": spec.p,
        "qmax": spec.qmax,
        "x_schedule": [str(x) for x in xs],
        "summability": {
            "verdict": rep.verdict,
            "partial_sum": rep.total,
            "tail_bound": rep.tail_bound,
        },
        "commutators": comm,
        "commutator_qmax": cq,
    }
    extra = _exponents(o.get("report") or "")
    if extra:
        body["reports"] = {
            f"{e:g}": {"verdict": r.verdict, "partial_sum": r.total, "tail_bound": r.tail_bound}
            for e, r in ((e, summability_report(spec, e)) for e in extra)
        }
    prov = {"schedule": spec.provenance, "commutators": "exact monomial evaluation; offsets cancel inside each block"}
    cols = ["q", "c_q", "orbits", "offset", "increments", "trace_increment", "partial_sum"]
    return Report(body, (cols, rows), (["q", "partial_sum"], plot), prov)


def cmd_walk(o) -> Report:
    param = resolve_param(o["poly"])
    exact_t, mc_t = o["exact_t"], o["mc_t"]
    if mc_t > 0 and o.get("seed") is None:
        raise InvalidParameter("Monte Carlo needs --seed")
    rows, exact_even = [], []
    if exact_t > 0:
        curve = walk_mod.exact_return_curve(param, exact_t, lazy=o["lazy"])
        for n in range(2, exact_t + 1, 2):
            p = curve[n]
            rows.append([n, n // 2, float(p), str(p), "exact", 0.0, float(p), float(p)])
            exact_even.append((n // 2, p))
    if mc_t > 0:
        est = walk_mod.mc_return_curve(param, mc_t, o["samples"], o["seed"], lazy=o["lazy"],
                                       threads=o["threads"])
        for n in range(2, mc_t + 1, 2):
            e = est[n]
            lo, hi = e.ci95
            rows.append([n, n // 2, e.estimate, f"{e.hits}/{e.samples}", "mc", e.stderr, lo, hi])
    body: Dict[str, Any] = {"parameter": _param_label(param), "lazy": o["lazy"]}
    plot = []
    fit = None
    usable = [(t, p) for t, p in exact_even if 0 < p < 1]
    for t, p in usable:
        plot.append([math.log(t), math.log(-math.log(float(p)))])
    if len(usable) >= 4:
        f = walk_mod.decay_fit(usable)
        fit = {"beta": f.beta, "beta_stderr": f.beta_stderr, "r_squared": f.r_squared, "poor_fit": f.poor_fit}
    body["decay_fit"] = fit
    if o["rmax"] > 0:
        sizes = walk_mod.ball_sizes(param, o["rmax"])
        body["ball_sizes"] = sizes
        body["ball_ratios"] = walk_mod.growth_ratios(sizes)
    prov = {
        "exact": "integer path counts over 4^n (8^n when lazy), keyed by canonical group elements",
        "mc": "independent SeedSequence children per 100000-path chunk; identity decided exactly",
        "decay_fit": "least squares of log(-log p_2t) on log t; desk-scale slopes are not asymptotic exponents",
    }
    cols = ["steps", "t", "p", "p_exact_or_hits", "method", "stderr", "ci_low", "ci_high"]
    return Report(body, (cols, rows), (["log_t", "log_neg_log_p"], plot), prov)


def cmd_kgroups(o) -> Report:
    k = k_groups(o["m"], o["l"])
    body = {"m": o["m"], "l": o["l"], "K0": k.k0, "K1": k.k1, "torsion": k.k1_torsion}
    prov = {"K1": "rank-one free part plus cyclic torsion of order |l - m|"}
    return Report(body, (["K0", "K1", "torsion"], [[k.k0, k.k1, k.k1_torsion]]), provenance=prov)


def _selftest_checks():
    a2 = Algebraic(normalize_poly([-2, 1]))
    gold = Algebraic(normalize_poly([-1, -1, 1]))
    yield "c_q(x-2) = 2^q - 1, q <= 10", all(fixed_count(a2.poly, q) == 2**q - 1 for q in range(1, 11))
    yield "entropy(x-2) = log 2", abs(entropy(a2).value - math.log(2)) < 1e-9
    yield "entropy(x^2-x-1) = log golden ratio", abs(entropy(gold).value - math.log((1 + 5**0.5) / 2)) < 1e-9
    yield "enumeration matches c_q for x^2-x-1, q <= 6", all(
        len(enumerate_characters(gold.poly, q)) == fixed_count(gold.poly, q) for q in range(1, 7))
    fam = build_family(a2, 4, (Fraction(0), Fraction(1, 4)))
    yield "U V U^-1 = V^2 on q <= 4 blocks", all(relation_deviation(b, 2) == 0.0 for b in fam.blocks)
    yield "p_2(e) = 1/4 on BS(1,2)", walk_mod.exact_distribution(a2, 2).return_probability == Fraction(1, 4)
    yield "K1 for (m, l) = (1, 3)", k_groups(1, 3).k1 == "Z + Z_2"


def cmd_selftest(o) -> Report:
    rows = [[name, bool(ok)] for name, ok in _selftest_checks()]
    passed = all(ok for _, ok in rows)
    body = {"passed": passed, "checks": {name: ok for name, ok in rows}}
    return Report(body, (["check", "passed"], rows), exit_code=EXIT_OK if passed else EXIT_FAIL)


HANDLERS = {
    "invariants": cmd_invariants,
    "classify": cmd_classify,
    "rep build": cmd_rep,
    "dirac build": cmd_dirac,
    "walk": cmd_walk,
    "kgroups": cmd_kgroups,
    "selftest": cmd_selftest,
}


# --- serialization -------------------------------------------------------------

def document(config: RunConfig, report: Report) -> Dict[str, Any]:
    cols, rows = report.table
    pcols, prows = report.plot
    return _jsonable({
        "schema_version": SCHEMA_VERSION,
        "tool": {"name": TOOL, "version": __version__},
        "config": config.echo(),
        "report": report.body,
        "table": {"columns": list(cols), "rows": rows},
        "plot": {"columns": list(pcols), "rows": prows},
        "provenance": report.provenance,
    })


def _header_lines(doc) -> List[str]:
    return [
        f"# {doc['tool']['name']} {doc['tool']['version']} schema {doc['schema_version']}",
        "# config: " + json.dumps(doc["config"], sort_keys=True),
    ]


def _csv(columns, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow(["" if v is None else v for v in r])
    return buf.getvalue()


def render(doc: Dict[str, Any], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, indent=2) + "\n"
    table = doc["table"]
    if fmt == "csv":
        return "\n".join(_header_lines(doc)) + "\n" + _csv(table["columns"], table["rows"])
    lines = _header_lines(doc)
    for key, value in doc["report"].items():
        if not isinstance(value, (list, dict)) or key in ("x_schedule", "notes", "ball_sizes", "checks"):
            lines.append(f"{key}: {json.dumps(value)}")
        elif isinstance(value, dict) and key != "checks":
            lines.append(f"{key}: " + ", ".join(f"{k}={json.dumps(v)}" for k, v in value.items()))
    cells = [list(map(str, table["columns"]))] + [["" if v is None else str(v) for v in r] for r in table["rows"]]
    if table["rows"]:
        widths = [max(len(r[i]) for r in cells) for i in range(len(cells[0]))]
        for r in cells:
            lines.append("  ".join(c.rjust(w) for c, w in zip(r, widths)))
    return "\n".join(lines) + "\n"


def emit_plotdata(doc: Dict[str, Any], path: str) -> None:
    """Write the plot section as CSV behind '#' header lines; header only when empty."""
    plot = doc.get("plot") or {"columns": [], "rows": []}
    text = "\n".join(_header_lines(doc)) + "\n" + "# columns: " + ",".join(plot["columns"]) + "\n"
    if plot["rows"]:
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(plot["rows"])
        text += buf.getvalue()
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise InvalidParameter(f"cannot write plot data to {path!r}: {exc.strerror}") from None


def run(config: RunConfig) -> Tuple[int, str, str]:
    """Execute one configuration; returns (exit code, stdout text, stderr text)."""
    handler = HANDLERS.get(config.subcommand)
    if handler is None:
        return EXIT_INVALID, "", f"error: unknown subcommand {config.subcommand!r}\n"
    fmt = config.options.get("format", "table")
    if fmt not in FORMATS:
        return EXIT_INVALID, "", f"error: unknown format {fmt!r}\n"
    try:
        report = handler(config.options)
        doc = document(config, report)
        if config.options.get("plot"):
            emit_plotdata(doc, config.options["plot"])
    except GuardExceeded as exc:
        return EXIT_GUARD, "", f"error: {exc}\n"
    except (InvalidParameter, KeyError, TypeError) as exc:
        msg = f"missing option {exc}" if isinstance(exc, KeyError) else str(exc)
        return EXIT_INVALID, "", f"error: {msg}\n"
    except ConvergenceError as exc:
        return EXIT_FAIL, "", f"error: {exc}\n"
    return report.exit_code, render(doc, fmt), ""


# --- argument parsing ----------------------------------------------------------

def _common(p: argparse.ArgumentParser, plot: bool = False):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--format", choices=FORMATS, default="table")
    g.add_argument("--json", dest="format", action="store_const", const="json")
    g.add_argument("--csv", dest="format", action="store_const", const="csv")
    if plot:
        p.add_argument("--plot", metavar="PATH", help="also write plot-ready CSV here")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog=TOOL, description="Invariants of the algebras U_a.")
    parser.add_argument("--version", action="version", version=f"{TOOL} {__version__}")
    parser.add_argument("--config", metavar="PATH", help="replay a config echo (or a whole JSON report)")
    sub = parser.add_subparsers(dest="subcommand", metavar="SUBCOMMAND")

    p = sub.add_parser("invariants", help="periodic-point counts, entropy, companion matrix")
    p.add_argument("--poly", help='polynomial such as "x^2-x-1", a JSON array, or "transcendental"')
    p.add_argument("--kappa", type=float)
    p.add_argument("--omega0", type=float)
    p.add_argument("--qmax", type=int, default=12)
    p.add_argument("--tol", type=float, default=1e-12)
    _common(p, plot=True)

    p = sub.add_parser("classify", help="compare two parameters")
    p.add_argument("--poly-a", "--a", dest="poly_a", required=True)
    p.add_argument("--poly-b", "--b", dest="poly_b", required=True)
    p.add_argument("--qmax", type=int, default=12)
    p.add_argument("--tol", type=float, default=1e-9)
    _common(p)

    rep = sub.add_parser("rep", help="finite-dimensional representations").add_subparsers(dest="action", metavar="ACTION")
    rep.required = True
    p = rep.add_parser("build", help="build and check the periodic-point family")
    p.add_argument("--poly", required=True)
    p.add_argument("--qmax", type=int, default=4)
    p.add_argument("--x", default="0,1/4", help="comma-separated corner angles")
    p.add_argument("--check", choices=("all", "none"), default="all")
    _common(p)

    dirac = sub.add_parser("dirac", help="Dirac operators").add_subparsers(dest="action", metavar="ACTION")
    dirac.required = True
    p = dirac.add_parser("build", help="build a Dirac schedule and certify it")
    p.add_argument("--poly", required=True)
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--mode", choices=("commuting", "mixed"), default="commuting")
    p.add_argument("--qmax", type=int, default=10)
    p.add_argument("--commutator-qmax", type=int, default=6)
    p.add_argument("--x", default="0")
    p.add_argument("--report", default="", help="extra exponents p' to evaluate, e.g. p=2,1,4")
    _common(p, plot=True)

    p = sub.add_parser("walk", help="random-walk return probabilities and growth")
    p.add_argument("--poly", required=True)
    p.add_argument("--exact-t", type=int, default=12, help="largest step count for exact convolution")
    p.add_argument("--mc-t", type=int, default=0, help="largest step count for Monte Carlo")
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int)
    p.add_argument("--lazy", action="store_true")
    p.add_argument("--rmax", type=int, default=0, help="also report ball sizes up to this radius")
    p.add_argument("--threads", type=int, help="worker cap (falls back to KS_THREADS)")
    _common(p, plot=True)

    p = sub.add_parser("kgroups", help="K-theory of BS(1,m)-type pairs")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--l", type=int, required=True)
    _common(p)

    p = sub.add_parser("selftest", help="quick consistency checks")
    _common(p)
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    opts = vars(ns).copy()
    sub = opts.pop("subcommand")
    opts.pop("config", None)
    action = opts.pop("action", None)
    if action:
        sub = f"{sub} {action}"
    if sub == "walk" and opts.get("threads") is None:
        opts["threads"] = int(os.environ.get("KS_THREADS", "1") or 1)
    return RunConfig(sub, opts)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    if ns.config:
        try:
            with open(ns.config, encoding="utf-8") as fh:
                config = RunConfig.from_echo(json.load(fh))
        except (OSError, json.JSONDecodeError, InvalidParameter) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INVALID
    elif ns.subcommand is None:
        parser.print_usage(sys.stderr)
        return EXIT_INVALID
    else:
        config = config_from_args(ns)
    code, out, err = run(config)
    sys.stdout.write(out)
    sys.stderr.write(err)
    return code
