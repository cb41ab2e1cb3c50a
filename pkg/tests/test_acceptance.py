"""Acceptance criteria 1-11, each at its stated tolerance.

Every test appends a PASS/FAIL line to the terminal summary and prints it.
"""
import math
import time
import warnings

import numpy as np
import pytest

from sincsum.expansion import FamilySpec, TruncationConfig, family_value, sampling_sum
from sincsum.functions import gegenbauer_hat, gegenbauer_md, legendre_md, legendre_p
from sincsum.gseries import addition_identity_check
from sincsum.harness import default_config, run_scenario


def _report(log, number, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
    log.append(line)
    print(line)
    return ok


def _run(name, **overrides):
    start = time.perf_counter()
    recs = run_scenario(default_config(name, **overrides))
    return recs, time.perf_counter() - start


def _worst(recs):
    return max((r.measured for r in recs), default=math.nan)


def _registered_specs():
    th = [0.5, -0.4, 0.3, 0.6]
    return [
        *(FamilySpec.legendre(th[:n]) for n in (1, 2, 3, 4)),
        FamilySpec.gegenbauer(0.75, th[:3]),
        FamilySpec.gegenbauer(1.5, th[:4]),
        FamilySpec.jacobi([(0.3, -0.2)], th[:1]),
        FamilySpec.jacobi([(1.5, 0.5), (0.5, 1.5)], th[:2]),
        FamilySpec.jacobi([(0.0, 0.7), (0.7, 0.0)], th[:2]),
        FamilySpec.hermite([0.5], k=2, epsilon=0),
        FamilySpec.hermite([1.5], k=2, epsilon=1),
        FamilySpec.hermite([0.8, -0.3], k=1),
    ]


def test_criterion_01_interpolation(criterion_log):
    start = time.perf_counter()
    worst = 0.0
    for spec in _registered_specs():
        for m in range(21):
            f = family_value(spec, m)
            worst = max(worst, abs(sampling_sum(spec, m).value - f) / (1 + abs(f)))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-10 and elapsed < 10
    _report(criterion_log, 1, ok, f"interpolation max scaled error {worst:.3g} (<= 1e-10), "
                                  f"{elapsed:.1f}s (< 10s)")
    assert ok


def test_criterion_02_legendre_products(criterion_log):
    recs, elapsed = _run("legendre_sinc", samples=50)
    n_ok = sum(r.passed for r in recs)
    ok = n_ok == len(recs) == 200 and elapsed < 60
    _report(criterion_log, 2, ok, f"Legendre N=1..4, {n_ok}/{len(recs)} cases within 1e-6, "
                                  f"worst {_worst(recs):.3g}, {elapsed:.1f}s (< 60s)")
    assert ok


def test_criterion_03_jacobi(criterion_log):
    recs, elapsed = _run("prop1_jacobi")
    n_ok = sum(r.passed for r in recs)
    ok = n_ok == len(recs) and len(recs) >= 30 and elapsed < 60
    _report(criterion_log, 3, ok, f"single and swapped-pair Jacobi, {n_ok}/{len(recs)} within 1e-5, "
                                  f"worst {_worst(recs):.3g}, {elapsed:.1f}s")
    assert ok


def test_criterion_04_gegenbauer(criterion_log):
    recs, _ = _run("gegenbauer_multi")
    main = [r for r in recs if not r.case_id.startswith("bilateral")]
    bil = [r for r in recs if r.case_id.startswith("bilateral")]
    ok = (len(main) >= 30 and all(r.measured <= 1e-5 for r in main)
          and bil and all(r.measured <= 1e-6 for r in bil))
    _report(criterion_log, 4, ok, f"Gegenbauer N=3,4 worst {_worst(main):.3g} over {len(main)} cases "
                                  f"(<= 1e-5); bilateral gap worst {_worst(bil):.3g} (<= 1e-6)")
    assert ok


def test_criterion_05_necessity_failure(criterion_log):
    recs, _ = _run("necessity_fail", samples=20)
    res = [r for r in recs if not r.case_id.endswith("doubling")]
    dbl = [r for r in recs if r.case_id.endswith("doubling")]
    frac = sum(r.measured > 1e-2 for r in res) / len(res)
    non_decreasing = all(r.measured >= 1.0 for r in dbl)
    ok = len(res) == 20 and frac >= 0.9 and non_decreasing
    _report(criterion_log, 5, ok,
            f"N=3 Jacobi (0.5, 0): {frac:.0%} of residuals > 1e-2 (need >= 90%), "
            f"largest residual {_worst(res):.3g}; non-decreasing under n_max doubling: {non_decreasing}")
    assert ok


def test_criterion_06_g3(criterion_log):
    recs, _ = _run("g3_closed", samples=20)
    neg = [r for r in recs if r.case_id.startswith("neg")]
    inner = [r for r in recs if r.case_id.startswith("interior")]
    ok = (len(neg) == len(inner) == 20 and all(r.measured <= 1e-2 for r in neg)
          and all(r.measured <= 1e-3 for r in inner))
    _report(criterion_log, 6, ok, f"G3 closed vs Abel worst relative {_worst(neg):.3g} (<= 1e-2); "
                                  f"interior worst |G| {_worst(inner):.3g} (<= 1e-3)")
    assert ok


def test_criterion_07_table2(criterion_log):
    recs, _ = _run("g4_table2", samples=5)
    counts = {}
    for r in recs:
        if "swap" not in r.case_id:
            counts[r.inputs["signs"]] = counts.get(r.inputs["signs"], 0) + 1
    swaps = [r for r in recs if "swap" in r.case_id]
    cmp = [r for r in recs if "swap" not in r.case_id and r.inputs["signs"] != "++"]
    zero = [r for r in recs if r.inputs["signs"] == "++"]
    ok = (all(counts.get(k, 0) >= 5 for k in ("++", "--", "+-", "-+"))
          and all(r.measured <= 1e-2 for r in cmp) and all(r.measured <= 1e-3 for r in zero)
          and swaps and all(r.measured <= 1e-9 for r in swaps))
    _report(criterion_log, 7, ok, f"Table 2 cases {counts}; closed vs Abel worst relative "
                                  f"{_worst(cmp):.3g}; (+,+) worst {_worst(zero):.3g}; "
                                  f"(-,-) swap worst {_worst(swaps):.3g}")
    assert ok


def test_criterion_08_table1(criterion_log):
    recs, elapsed = _run("table1_sweep", samples=100_000)
    by = {r.case_id: r for r in recs}
    ok = (by["forbidden_pattern"].measured == 0 and by["b_eq_minus_eta_sum"].measured <= 1e-10
          and by["discriminant"].measured <= 1e-9 and by["b_ge_a_plus_c"].measured <= 0
          and by["row_mapping"].measured == 0 and elapsed < 60)
    _report(criterion_log, 8, ok,
            f"1e5 tuples: (+,-,+) count {by['forbidden_pattern'].measured:g}, "
            f"|B+eta sum| {by['b_eq_minus_eta_sum'].measured:.2g}, "
            f"discriminant {by['discriminant'].measured:.2g}, max(A+C-B) {by['b_ge_a_plus_c'].measured:.2g}, "
            f"row mismatches {by['row_mapping'].measured:g}, {elapsed:.1f}s")
    assert ok


def test_criterion_09_delta(criterion_log):
    recs, _ = _run("delta_smoothing")
    norm = [r for r in recs if r.case_id.startswith("norm")]
    lim = [r for r in recs if not r.case_id.startswith("norm")]
    ok = all(r.measured <= 1e-9 for r in norm) and all(r.measured <= 1e-2 for r in lim)
    _report(criterion_log, 9, ok, f"normalization worst {_worst(norm):.3g}; "
                                  f"limit pairings worst {_worst(lim):.3g} (<= 1e-2)")
    assert ok


def test_criterion_10_hermite(criterion_log):
    recs, _ = _run("hermite_pair")
    res = [r for r in recs if not r.case_id.startswith("reject")]
    rej = [r for r in recs if r.case_id.startswith("reject")]
    forms = {r.case_id.split("-")[0] + (r.case_id.split("-")[1] if r.case_id.startswith("single") else "")
             for r in res}
    ok = (all(r.measured <= 1e-4 for r in res) and all(r.measured == 0 for r in rej)
          and {"singlee0", "singlee1", "pair"} <= forms)
    _report(criterion_log, 10, ok, f"Hermite residual worst {_worst(res):.3g} (<= 1e-4) over "
                                   f"{len(res)} cases; {len(rej)} invalid (k,N) rejected")
    assert ok


def test_criterion_11_oracles(criterion_log):
    nus = np.linspace(0.0, 5.0, 20)
    thetas = np.linspace(0.1, 2.9, 20)
    leg = max(abs(legendre_p(nu, math.cos(t)) - legendre_md(nu, t)) for nu in nus for t in thetas)
    geg = max(abs(gegenbauer_hat(nu, g, math.cos(t)) - gegenbauer_md(nu, g, t))
              for g in (0.75, 1.0, 1.5) for nu in nus[::2] for t in thetas[::2])
    add = max(addition_identity_check(n, g, a, b)
              for n in range(7) for g in (0.5, 1.0, 1.5) for a, b in ((0.7, 1.1), (0.3, 2.6)))
    ok = leg <= 1e-7 and geg <= 1e-7 and add <= 1e-8
    _report(criterion_log, 11, ok, f"legendre_p vs Mehler-Dirichlet {leg:.3g}; Gegenbauer vs integral "
                                   f"{geg:.3g} (<= 1e-7); addition theorem {add:.3g} (<= 1e-8)")
    assert ok
