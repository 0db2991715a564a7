"""Command-line interface: ``heunc {eval,coeffs,poly,verify}``.

Output is JSON on stdout by default (see ``schemas/output.schema.json``);
tabular commands also speak CSV.  Exit codes: 0 success, 1 a verification
failed, 2 usage or domain error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Dict, List, Optional

import numpy as np

from . import series
from .errors import HeunError
from .params import HeunParams, delta_for_condition, is_negative_integer, to_mu_nu
from .polynomials import delta_determinant, polynomial_spectrum
from . import verify as V

IDENTITIES = ("basic", "four-term", "chain", "high-ode", "darboux", "selfadjoint", "swap")
RANDOM_BOX = 2.0
RANDOM_GUARD = 1e-6

_COMPLEX_RE = re.compile(r"^[0-9eE.+\-ij]+$")


def parse_complex(text: str) -> complex:
    """Parse ``"a"``, ``"bi"``, ``"a+bi"`` or ``"a-bi"``; no whitespace allowed."""
    if not _COMPLEX_RE.match(text):
        raise argparse.ArgumentTypeError(f"invalid complex number {text!r}")
    try:
        value = complex(text.replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid complex number {text!r}") from None
    return value


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def _c(x) -> Dict[str, float]:
    x = complex(x)
    return {"re": float(x.real), "im": float(x.imag)}


def _params_dict(p: HeunParams) -> Dict[str, Any]:
    return V.params_to_dict(p)


def _record(command: str, inputs, results, diagnostics) -> Dict[str, Any]:
    return {"command": command, "inputs": inputs, "results": results, "diagnostics": diagnostics}


def _default_max_terms() -> int:
    env = os.environ.get("HEUNC_MAX_TERMS")
    return int(env) if env else series.DEFAULT_MAX_TERMS


def _params(args) -> HeunParams:
    return HeunParams(args.alpha, args.beta, args.gamma, args.delta, args.eta)


def _point_residual(p: HeunParams, z: complex, h, h1, h2) -> float:
    a, b, g = p.alpha, p.beta, p.gamma
    mn = to_mu_nu(p)
    terms = (
        z * (z - 1) * h2,
        (a * z * (z - 1) + (b + 1) * (z - 1) + (g + 1) * z) * h1,
        (mn.mu * (z - 1) + mn.nu * z) * h,
    )
    scale = sum(abs(t) for t in terms)
    return 0.0 if scale == 0 else abs(sum(terms)) / scale


def cmd_eval(args) -> Dict[str, Any]:
    p = _params(args)
    z = args.z
    max_terms = args.max_terms if args.max_terms is not None else _default_max_terms()
    kw = dict(tol=args.tol, max_terms=max_terms)
    value, used = series.eval(p, z, full_output=True, **kw)
    h1 = series.eval_derivative(p, z, 1, **kw)
    h2 = series.eval_derivative(p, z, 2, **kw)
    results = {"value": _c(value)}
    if args.deriv is not None:
        results["derivative_order"] = args.deriv
        results["derivative"] = _c(series.eval_derivative(p, z, args.deriv, **kw))
    inputs = {"params": _params_dict(p), "z": _c(z), "tol": args.tol, "max_terms": max_terms}
    diagnostics = {
        "terms_used": used,
        "ode_residual": _point_residual(p, z, value, h1, h2),
        "r_max": series.R_MAX,
    }
    return _record("eval", inputs, results, diagnostics)


def cmd_coeffs(args) -> Dict[str, Any]:
    p = _params(args)
    s = series.taylor_coeffs(p, args.order)
    inputs = {"params": _params_dict(p), "order": args.order}
    results = {"coefficients": [_c(c) for c in s.coeffs]}
    return _record("coeffs", inputs, results, {"valid_degree": s.valid_degree})


def cmd_poly(args) -> Dict[str, Any]:
    a, b, g, N = args.alpha, args.beta, args.gamma, args.N
    sols = polynomial_spectrum(a, b, g, N)
    if args.k is not None:
        if not 1 <= args.k <= N + 1:
            raise HeunError(f"k must lie in 1..{N + 1}")
        sols = [sols[args.k - 1]]
    dp = delta_determinant(a, b, g, N)
    inputs = {"alpha": _c(a), "beta": _c(b), "gamma": _c(g), "N": N, "k": args.k}
    results = {
        "delta_N": _c(delta_for_condition(a, b, g, N)),
        "determinant": [_c(c) for c in dp.coeffs],
        "solutions": [
            {
                "k": s.k,
                "mu": _c(s.mu_k),
                "eta": _c(s.eta_k),
                "coefficients": [_c(c) for c in s.coeffs],
                "tail_residual": s.tail_residual,
                "multiplicity": s.multiplicity,
            }
            for s in sols
        ],
    }
    diagnostics = {"leading_coefficient": _c(dp.coeffs[-1]), "degree": dp.degree}
    return _record("poly", inputs, results, diagnostics)


def random_params(rng: np.random.Generator) -> HeunParams:
    """Uniform draw from the box |Re|, |Im| <= 2, keeping beta and gamma off negative integers."""

    def draw():
        return complex(*rng.uniform(-RANDOM_BOX, RANDOM_BOX, size=2))

    alpha = draw()
    beta = draw()
    while is_negative_integer(beta, RANDOM_GUARD):
        beta = draw()
    gamma = draw()
    while is_negative_integer(gamma, RANDOM_GUARD):
        gamma = draw()
    return HeunParams(alpha, beta, gamma, draw(), draw())


def run_identity(identity: str, p: HeunParams, n: int, N: int, trials: int, seed: int, perturb: float):
    if identity == "basic":
        return V.verify_basic_commutation(p, n, trials, seed=seed, perturb=perturb)
    if identity == "four-term":
        return V.verify_four_term(p, n, perturb=perturb)
    if identity == "chain":
        return V.verify_chain(p, n, perturb=perturb)
    if identity == "high-ode":
        return V.verify_high_order_ode(p, n, perturb=perturb)
    if identity == "darboux":
        return V.verify_darboux_relation(p.alpha, p.beta, p.gamma, p.eta, N, perturb=perturb)
    if identity == "selfadjoint":
        return V.verify_selfadjoint_form(p, perturb=perturb)
    if identity == "swap":
        return V.verify_symmetry_swap(p, perturb=perturb)
    raise ValueError(identity)


def _run_trial(job):
    index, p, identities, n, N, trials, seed, perturb = job
    out = []
    for name in identities:
        rep = run_identity(name, p, n, N, trials, seed, perturb).to_dict()
        rep["trial"] = index
        out.append(rep)
    return out


def cmd_verify(args) -> Dict[str, Any]:
    identities = IDENTITIES if args.identity == "all" else (args.identity,)
    if args.random is not None:
        rng = np.random.default_rng(args.seed)
        plist = [random_params(rng) for _ in range(args.random)]
    else:
        plist = [_params(args)]
    jobs = [
        (i, p, identities, args.n, args.N, args.trials, args.seed + i, args.perturb)
        for i, p in enumerate(plist)
    ]
    if args.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as ex:
            chunks = list(ex.map(_run_trial, jobs))
    else:
        chunks = [_run_trial(j) for j in jobs]
    reports = [r for chunk in chunks for r in chunk]
    passed = all(r["passed"] for r in reports)
    inputs = {
        "identity": args.identity,
        "n": args.n,
        "N": args.N,
        "random": args.random,
        "seed": args.seed,
        "trials": args.trials,
    }
    if args.random is None:
        inputs["params"] = _params_dict(plist[0])
    results = {"passed": passed, "count": len(reports), "reports": reports}
    diagnostics = {"failed": sum(not r["passed"] for r in reports)}
    return _record("verify", inputs, results, diagnostics)


# -- output -----------------------------------------------------------------


def _csv(rows: List[List[Any]], header: List[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def to_csv(record: Dict[str, Any]) -> str:
    cmd = record["command"]
    res = record["results"]
    if cmd == "coeffs":
        rows = [[n, fmt(c["re"]), fmt(c["im"])] for n, c in enumerate(res["coefficients"])]
        return _csv(rows, ["n", "re", "im"])
    if cmd == "poly":
        rows = []
        for s in res["solutions"]:
            for j, c in enumerate(s["coefficients"]):
                rows.append([
                    s["k"], fmt(s["mu"]["re"]), fmt(s["mu"]["im"]),
                    fmt(s["eta"]["re"]), fmt(s["eta"]["im"]), j, fmt(c["re"]), fmt(c["im"]),
                ])
        return _csv(rows, ["k", "mu_re", "mu_im", "eta_re", "eta_im", "power", "re", "im"])
    if cmd == "verify":
        rows = [
            [r["trial"], r["identity"], r["order_n"], fmt(r["residual"]), fmt(r["tolerance"]),
             "true" if r["passed"] else "false"]
            for r in res["reports"]
        ]
        return _csv(rows, ["trial", "identity", "order", "residual", "tolerance", "passed"])
    raise ValueError(f"command {cmd!r} has no CSV form")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="heunc", description="Confluent Heun functions and polynomials.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_params(sp, required: bool, with_delta_eta: bool = True):
        names = ("alpha", "beta", "gamma") + (("delta", "eta") if with_delta_eta else ())
        for name in names:
            sp.add_argument(f"--{name}", type=parse_complex, required=required,
                            default=None if required else 0j, metavar="C")

    sp = sub.add_parser("eval", help="evaluate HeunC (and a derivative) at z")
    add_params(sp, True)
    sp.add_argument("--z", type=parse_complex, required=True, metavar="C")
    sp.add_argument("--deriv", type=int, default=None)
    sp.add_argument("--tol", type=float, default=series.DEFAULT_TOL)
    sp.add_argument("--max-terms", type=int, default=None)
    sp.set_defaults(func=cmd_eval, formats=("json",))

    sp = sub.add_parser("coeffs", help="Taylor coefficients v_0..v_M")
    add_params(sp, True)
    sp.add_argument("--order", type=int, required=True)
    sp.set_defaults(func=cmd_coeffs, formats=("json", "csv"))

    sp = sub.add_parser("poly", help="polynomial solutions of degree N")
    add_params(sp, True, with_delta_eta=False)
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--k", type=int, default=None)
    sp.set_defaults(func=cmd_poly, formats=("json", "csv"))

    sp = sub.add_parser("verify", help="check the derivative and polynomial identities")
    add_params(sp, False)
    sp.add_argument("--identity", choices=IDENTITIES + ("all",), default="all")
    sp.add_argument("--random", type=int, default=None, metavar="TRIALS")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--n", type=int, default=2, help="derivative order for basic/four-term/chain/high-ode")
    sp.add_argument("--N", type=int, default=1, help="polynomial degree for darboux")
    sp.add_argument("--trials", type=int, default=10, help="random series per basic check")
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--perturb", type=float, default=0.0, help=argparse.SUPPRESS)
    sp.set_defaults(func=cmd_verify, formats=("json", "csv"))

    for sp in sub.choices.values():
        sp.add_argument("--format", choices=("json", "csv"), default="json")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format not in args.formats:
        parser.error(f"{args.command} does not support --format {args.format}")
    try:
        record = args.func(args)
    except (HeunError, ValueError) as exc:
        print(f"heunc: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    if args.format == "csv":
        sys.stdout.write(to_csv(record))
    else:
        sys.stdout.write(json.dumps(record, indent=2) + "\n")
    if record["command"] == "verify" and not record["results"]["passed"]:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
