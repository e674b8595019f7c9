"""The ten acceptance criteria, each at its stated tolerance.

Every test stores a one-line summary through ``record_property("detail", ...)``;
``conftest.py`` prints a PASS/FAIL line per criterion at the end of the run.
"""
import time

import numpy as np
import pytest

from vilenkin.gframe import (CLASSICAL, GeneralizedFilter, build_pseudo_scaling, cocycle_residual, haar_filter,
                             low_pass_check, parseval_check, pfmw_build, random_filter, read_filter, solve_v,
                             telescoping_residual, two_scale_residual)
from vilenkin.group import (DUAL, PRIMAL, DigitSequence, character, dilate, from_integer, integer_digits,
                            lambda_of_integer_digits, lambda_value, pairing)
from vilenkin.mask import cascade, haar_mask, mask_diagnostics, mask_from_values, scaling_checks
from vilenkin.mra import blocked_set, mra_verdict, verify_blocked
from vilenkin.oracle import frame_oracle
from vilenkin.walsh import FAST, NAIVE, bench, chrestenson, walsh_gram

from conftest import DATA


def rand_seq(rng, p, side=PRIMAL):
    lo = int(rng.integers(-6, 6))
    return DigitSequence.make(p, lo, rng.integers(0, p, int(rng.integers(0, 8))), side)


# 1 ---------------------------------------------------------------------------------

def test_criterion_01_group_laws(record_property):
    t0 = time.perf_counter()
    rng = np.random.default_rng(1)
    checks = bad = 0
    while checks < 10_000:
        p = int(rng.choice([2, 3, 5, 7]))
        x, y, z = (rand_seq(rng, p) for _ in range(3))
        w = rand_seq(rng, p, DUAL)
        k = int(rng.integers(-4, 5))
        acc = DigitSequence.theta(p)
        for _ in range(p):
            acc = acc + x
        exact = [(x + y) + z == x + (y + z), x + y == y + x, acc.is_theta,
                 dilate(x + y, k) == dilate(x, k) + dilate(y, k),
                 pairing(dilate(x, k), w) == pairing(x, dilate(w, k))]
        bil = abs(character(x + y, w) - character(x, w) * character(y, w)) <= 1e-12
        bad += exact.count(False) + (not bil)
        checks += len(exact) + 1
    # lambda round trip: every alpha < 10^6 through the integer digit path, a sample through sequences
    alphas = np.arange(10 ** 6)
    rt_bad = 0
    for p in (2, 3, 5):
        rt_bad += int(np.count_nonzero(lambda_of_integer_digits(integer_digits(alphas, p), p) != alphas))
    for a in rng.integers(0, 10 ** 6, 500):
        p = int(rng.choice([2, 3, 5]))
        rt_bad += lambda_value(from_integer(int(a), p)) != a
    dt = time.perf_counter() - t0
    record_property("detail", f"{checks} law checks, {bad} failures; lambda round-trip failures {rt_bad}; {dt:.2f}s < 5s")
    assert bad == 0 and rt_bad == 0 and dt < 5


# 2 ---------------------------------------------------------------------------------

def test_criterion_02_walsh_orthogonality(record_property):
    t0 = time.perf_counter()
    worst = max(float(np.abs(walsh_gram(p, n) - np.eye(p ** n)).max()) for p, n in [(2, 6), (3, 4), (5, 3)])
    dt = time.perf_counter() - t0
    record_property("detail", f"max |Gram - I| = {worst:.2e} <= 1e-12; {dt:.2f}s < 10s")
    assert worst <= 1e-12 and dt < 10


# 3 ---------------------------------------------------------------------------------

def test_criterion_03_fast_transform(record_property):
    rng = np.random.default_rng(3)
    worst = 0.0
    cases = [(p, n) for p in (2, 3, 5, 7) for n in range(1, 14) if p ** n <= 3 ** 8]
    for p, n in cases:
        V = rng.standard_normal((p ** n, 100)) + 1j * rng.standard_normal((p ** n, 100))
        worst = max(worst, float(np.abs(chrestenson(V, p, algorithm=FAST) - chrestenson(V, p, algorithm=NAIVE)).max()))
    rows = bench([3 ** 8], p=3, repeats=3)
    t = {alg: ns for _, alg, ns in rows}
    speedup = t[NAIVE] / t[FAST]
    record_property("detail", f"{len(cases)} (p,n) pairs x 100 vectors, max diff {worst:.1e} <= 1e-10; "
                              f"speedup at 3^8 = {speedup:.0f}x >= 5x")
    assert worst <= 1e-10 and speedup >= 5


# 4 ---------------------------------------------------------------------------------

def test_criterion_04_haar_fixtures(record_property):
    out = []
    for p in (2, 3):
        m = haar_mask(p)
        d = mask_diagnostics(m)
        c = scaling_checks(m, 4)
        v = mra_verdict(m)
        phi = cascade(m, 4)
        diag = max(abs(d.coeff_sum - 1), abs(d.theta_value - 1), d.qmf_residual)
        res = max(c.strang_fix_residual, c.partition_residual, c.two_scale_residual, c.ortho_residual)
        ok = (diag <= 1e-12 and res <= 1e-10 and v.is_mra and v.blocked is None
              and phi.converged and phi.iterations <= 2 and np.all(phi.values == 1))
        out.append(bool(ok))
        record_property(f"p{p}", f"diag {diag:.1e} checks {res:.1e} iterations {phi.iterations}")
    record_property("detail", "Haar p=2,3: diagnostics, scaling checks, MRA verdict, cascade "
                              + " ".join("ok" if o else "bad" for o in out))
    assert all(out)


# 5 ---------------------------------------------------------------------------------

def test_criterion_05_blocked_mask(record_property):
    m = mask_from_values(2, 2, [1, 0, 0, 1])
    M = blocked_set(m)
    v = mra_verdict(m)
    ok = (M is not None and M.members == {(1,)} and verify_blocked(M, m)[0]
          and v.ortho_residual > 0.4 and v.verdict == "not-MRA" and v.cross_check_consistent)
    record_property("detail", f"blocked={M}, ortho_residual={v.ortho_residual:.3g} > 0.4, verdict={v.verdict}, "
                              f"consistent={v.cross_check_consistent}")
    assert ok


# 6 ---------------------------------------------------------------------------------

def test_criterion_06_random_filters(record_property):
    t0 = time.perf_counter()
    worst1 = worst2 = 0.0
    failures = 0
    for p in (2, 3, 5):
        for seed in range(50):
            F = random_filter(p, 3, seed)
            Psi = pfmw_build(F, build_pseudo_scaling(F, 2, CLASSICAL))
            r = parseval_check(Psi, A_max=32, J=8, tol=1e-8)
            worst1, worst2 = max(worst1, r.cond1_residual), max(worst2, r.cond2_residual)
            failures += not r.passed
    dt = time.perf_counter() - t0
    record_property("detail", f"150 filters: cond1 {worst1:.1e}, cond2 {worst2:.1e} <= 1e-8, "
                              f"{failures} failures; {dt:.1f}s < 60s")
    assert failures == 0 and dt < 60


# 7 ---------------------------------------------------------------------------------

def filter_corpus():
    out = [haar_filter(2), haar_filter(3), haar_filter(5),
           GeneralizedFilter(2, 1, np.full((2, 2), 2 ** -0.5)),
           GeneralizedFilter(2, 1, [[0.9, 0], [0, 1]]),
           GeneralizedFilter(2, 1, [[-1, 0], [0, 1]])]
    out += [random_filter(p, R, s) for p in (2, 3, 5) for R in (1, 2, 3) for s in range(2)]
    return out


def test_criterion_07_necessity(record_property):
    passing = counter = 0
    for F in filter_corpus():
        try:
            phi = build_pseudo_scaling(F, 2, CLASSICAL)
        except Exception:
            continue
        if two_scale_residual(F, phi) > 1e-10:
            continue
        if parseval_check(pfmw_build(F, phi)).passed:
            passing += 1
            counter += not low_pass_check(F, 2).passed
    record_property("detail", f"{passing} Parseval cases with the two-scale relation, {counter} without low pass")
    assert counter == 0 and passing > 0


# 8 ---------------------------------------------------------------------------------

def test_criterion_08_telescoping(record_property):
    fixtures = [read_filter(DATA / "haar.filter"), read_filter(DATA / "haar3.filter")]
    fixtures += [random_filter(p, R, 0) for p in (2, 3, 5) for R in (1, 2, 3)]
    worst = max(telescoping_residual(F, build_pseudo_scaling(F, 3, CLASSICAL), 8) for F in fixtures)
    record_property("detail", f"{len(fixtures)} fixtures, max residual {worst:.1e} <= 1e-10")
    assert worst <= 1e-10


# 9 ---------------------------------------------------------------------------------

def test_criterion_09_frame_oracle(record_property):
    stats = {}
    for p in (2, 3):
        F = haar_filter(p)
        Psi = pfmw_build(F, build_pseudo_scaling(F, 3))
        stats[p] = frame_oracle(Psi, D=8, J_inner=3, trials=100).statistic
        if p == 2:
            half = frame_oracle(Psi.scaled(0.5), D=8, J_inner=3, trials=100).statistic
    ok = max(stats.values()) <= 1e-6 and abs(half - 0.75) <= 1e-6
    record_property("detail", f"Haar deviation p=2 {stats[2]:.1e}, p=3 {stats[3]:.1e} <= 1e-6; "
                              f"scaled by 1/2 {half:.9f} (0.75 +- 1e-6)")
    assert ok


# 10 --------------------------------------------------------------------------------

def test_criterion_10_cocycle(record_property):
    rng = np.random.default_rng(10)
    worst = 0.0
    for k in range(100):
        p = int(rng.choice([2, 3, 5]))
        R = int(rng.integers(1, 4))
        mu = np.exp(2j * np.pi * rng.random(p ** R))
        mu[0] = 1
        v = solve_v(mu, p, 3)
        worst = max(worst, cocycle_residual(mu, R, v))
    record_property("detail", f"100 random unimodular tables, max cocycle residual {worst:.1e} <= 1e-10")
    assert worst <= 1e-10
