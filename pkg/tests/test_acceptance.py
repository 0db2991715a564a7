"""Acceptance gate: ten criteria at their stated tolerances.

Each test records one PASS/FAIL line; the lines are printed in the pytest
terminal summary and also when this file is run as a script.
"""

import json
import math
import subprocess
import sys
import time
from pathlib import Path

import jsonschema
import numpy as np
import pytest

from heunc import (
    HeunParams,
    delta_determinant,
    eval_derivative,
    find_mu_roots,
    heunc_eval,
    polynomial_spectrum,
    taylor_coeffs,
)
from heunc import verify as V
from heunc.cli import random_params
from heunc.polynomials import polynomial_params

ROOT = Path(__file__).resolve().parents[1]
SCHEMA = json.loads((ROOT / "schemas" / "output.schema.json").read_text())
RESULTS = {}


def record(key, ok, summary):
    line = f"{'PASS' if ok else 'FAIL'}  {key}: {summary}"
    RESULTS[key] = line
    print(line)
    assert ok, line


def draw_abg(rng):
    p = random_params(rng)
    return p.alpha, p.beta, p.gamma, p.eta


def test_ac01_ode_residual():
    rng = np.random.default_rng(101)
    start = time.perf_counter()
    worst = max(V.verify_ode_residual(random_params(rng), M=60).residual for _ in range(50))
    elapsed = time.perf_counter() - start
    record("AC01 ode residual", worst < 1e-11 and elapsed < 5.0,
           f"50 sets, M=60, worst {worst:.2e} < 1e-11, {elapsed:.2f}s < 5s")


def test_ac02_basic_commutation():
    rng = np.random.default_rng(202)
    worst, weakest = 0.0, math.inf
    for n in range(1, 6):
        p = random_params(rng)
        honest = V.verify_basic_commutation(p, n, trials=50, seed=n)
        mutated = V.verify_basic_commutation(p, n, trials=50, seed=n, perturb=1e-3)
        worst = max(worst, honest.residual)
        weakest = min(weakest, mutated.residual / 1e-11)
    record("AC02 basic commutation", worst < 1e-11 and weakest >= 10,
           f"n=1..5 x 50 series, worst {worst:.2e} < 1e-11, mutation at {weakest:.1e}x tolerance (need >= 10x)")


def test_ac03_derivative_identities():
    rng = np.random.default_rng(303)
    plist = [random_params(rng) for _ in range(20)]
    limits = {"four-term": 1e-11, "chain": 1e-10, "high-ode": 1e-9}
    runs = {"four-term": V.verify_four_term, "chain": V.verify_chain, "high-ode": V.verify_high_order_ode}
    worst = {k: 0.0 for k in limits}
    for name, fn in runs.items():
        for n in (1, 2, 3):
            for p in plist:
                worst[name] = max(worst[name], fn(p, n).residual)
    ok = all(worst[k] < limits[k] for k in limits)
    record("AC03 four-term/chain/high-order", ok,
           ", ".join(f"{k} {worst[k]:.2e} < {limits[k]:.0e}" for k in limits) + " (n=1..3, 20 sets)")


def test_ac04_eigen_shift():
    rng = np.random.default_rng(404)
    worst = 0.0
    for _ in range(20):
        p = random_params(rng)
        lam = complex(*rng.uniform(-2, 2, 2))
        worst = max(worst, V.verify_eigen_shift(p, lam).residual)
    record("AC04 eigenvalue shift", worst < 1e-10, f"20 (p, lambda), worst {worst:.2e} < 1e-10")


def test_ac05_darboux():
    rng = np.random.default_rng(505)
    worst, vanish = 0.0, 0.0
    for N in range(5):
        for _ in range(10):
            a, b, g, eta = draw_abg(rng)
            worst = max(worst, V.verify_darboux_relation(a, b, g, eta, N).residual)
            for sol in polynomial_spectrum(a, b, g, N):
                rep = V.verify_darboux_relation(a, b, g, sol.eta_k, N)
                vanish = max(vanish, rep.extras["vanish_residual"])
    record("AC05 darboux relation", worst < 1e-10 and vanish < 1e-9,
           f"N=0..4 x 10, worst {worst:.2e} < 1e-10, polynomial points vanish {vanish:.2e} < 1e-9")


def test_ac06_determinant_equivalence():
    rng = np.random.default_rng(606)
    spread, monic = 0.0, True
    for N in range(7):
        for _ in range(10):
            a, b, g, _ = draw_abg(rng)
            mus = [complex(*rng.uniform(-3, 3, 2)) for _ in range(5)]
            rep = V.verify_determinant_equivalence(a, b, g, N, mus)
            dp = delta_determinant(a, b, g, N)
            spread = max(spread, rep.residual)
            monic &= dp.degree == N + 1 and dp.coeffs[-1] == 1
    record("AC06 determinant equivalence", spread < 1e-8 and monic,
           f"N=0..6 x 10, ratio spread {spread:.2e} < 1e-8, monic degree N+1: {monic}")


def test_ac07_polynomial_construction():
    rng = np.random.default_rng(707)
    worst = 0.0
    for N in range(7):
        for _ in range(10):
            a, b, g, _ = draw_abg(rng)
            for sol in polynomial_spectrum(a, b, g, N):
                v = taylor_coeffs(polynomial_params(a, b, g, N, sol.mu_k), N + 3).coeffs
                worst = max(worst, float(np.max(np.abs(v[N + 1:])) / np.max(np.abs(v))))
    mus = [s.mu_k for s in polynomial_spectrum(1, 0, 0, 1)]
    golden = [(1 - math.sqrt(5)) / 2, (1 + math.sqrt(5)) / 2]
    gap = max(abs(m - e) for m, e in zip(mus, golden))
    record("AC07 polynomial construction", worst < 1e-9 and gap < 1e-12,
           f"N=0..6 tails {worst:.2e} < 1e-9, (1,0,0) N=1 spectrum off by {gap:.1e} < 1e-12")


def test_ac08_planted_roots():
    rng = np.random.default_rng(808)
    worst = 0.0
    for degree in range(1, 11):
        for _ in range(10):
            roots = sorted((complex(*rng.uniform(-2, 2, 2)) for _ in range(degree)), key=lambda r: (r.real, r.imag))
            found = find_mu_roots(np.poly(roots)[::-1])
            worst = max(worst, max(abs(f - r) for f, r in zip(found, roots)))
    record("AC08 planted roots", worst < 1e-10, f"degree 1..10 x 10, worst error {worst:.2e} < 1e-10")


def test_ac09_derivative_consistency():
    rng = np.random.default_rng(909)
    h = 1e-5
    worst = 0.0
    for _ in range(10):
        p = random_params(rng)
        z = 0.5 * math.sqrt(rng.uniform()) * np.exp(2j * math.pi * rng.uniform())
        d1 = eval_derivative(p, z, 1)
        fd1 = (heunc_eval(p, z + h) - heunc_eval(p, z - h)) / (2 * h)
        d2 = eval_derivative(p, z, 2)
        fd2 = (eval_derivative(p, z + h, 1) - eval_derivative(p, z - h, 1)) / (2 * h)
        worst = max(worst, abs(fd1 - d1) / max(1.0, abs(d1)), abs(fd2 - d2) / max(1.0, abs(d2)))
    record("AC09 derivative consistency", worst < 1e-6, f"10 points |z|<=0.5, n=1,2, worst {worst:.2e} < 1e-6")


def test_ac10_cli_determinism_and_schema():
    argv = [sys.executable, "-m", "heunc", "verify", "--identity", "all", "--random", "20", "--seed", "42"]
    first = subprocess.run(argv, capture_output=True, check=False)
    second = subprocess.run(argv, capture_output=True, check=False)
    stable = first.stdout == second.stdout
    valid = True
    try:
        jsonschema.validate(json.loads(first.stdout), SCHEMA)
        others = [
            ["eval", "--alpha", "1", "--beta", "0.5", "--gamma", "0", "--delta", "0", "--eta", "0", "--z", "0.3", "--deriv", "2"],
            ["coeffs", "--alpha", "1", "--beta", "0", "--gamma", "0", "--delta", "-1", "--eta", "0.5", "--order", "4"],
            ["poly", "--alpha", "1", "--beta", "0", "--gamma", "0", "--N", "2"],
        ]
        for extra in others:
            out = subprocess.run([sys.executable, "-m", "heunc", *extra], capture_output=True, check=True)
            jsonschema.validate(json.loads(out.stdout), SCHEMA)
    except (jsonschema.ValidationError, json.JSONDecodeError, subprocess.CalledProcessError):
        valid = False
    ok = first.returncode == 0 and stable and valid
    record("AC10 cli determinism and schema", ok,
           f"exit {first.returncode}, byte-stable {stable}, schema-valid {valid}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
