"""End-to-end acceptance checks, one printed PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v`` (the lines are printed even
when output capture is on).
"""

import os
import time
from functools import lru_cache

import numpy as np
import pytest
from scipy import stats

import oracles
from heavytail import cheb, densities, extremal, gamma_moments
from heavytail.certify import certify_range
from heavytail.gamma_moments import gamma_cumulants, moments_from_cumulants, r_poly, subfactorial

JOBS = os.cpu_count() or 1


@pytest.fixture
def verdict(capsys):
    def emit(criterion, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {detail}")
        return ok
    return emit


def test_c01_certificate_tables(verdict):
    gamma_moments._mix_cache = ()  # time a cold run
    start = time.perf_counter()
    certs = certify_range(10, 1)
    elapsed = time.perf_counter() - start
    exact = all(list(c.h_tilde_coeffs) == oracles.reference_even_coeffs(c.q) for c in certs)
    ok = exact and all(c.passed for c in certs) and elapsed < 1.0
    verdict(1, ok, f"q=4..10 tables exact={exact}, runtime {elapsed:.3f}s (< 1s)")
    assert exact
    assert all(c.passed for c in certs)
    assert elapsed < 1.0


def test_c02_certificates_below_100(verdict):
    start = time.perf_counter()
    certs = certify_range(98, 1)
    elapsed = time.perf_counter() - start
    failed = [c.q for c in certs if not c.passed]
    ok = not failed and len(certs) == 48 and elapsed < 300
    verdict(2, ok, f"{len(certs)} certificates q=4..98, failures {failed}, "
                   f"single-threaded {elapsed:.1f}s (< 300s)")
    assert not failed and len(certs) == 48
    assert elapsed < 300


def test_c03_subfactorials(verdict):
    mus = moments_from_cumulants(gamma_cumulants(30), 30)
    bad = [n for n in range(2, 31) if mus[n] != subfactorial(n) or mus[n] != oracles.derangements(n)]
    verdict(3, not bad, f"mu_n(Gamma) == !n exactly for 2 <= n <= 30, mismatches {bad}")
    assert not bad


def test_c04_strict_moment_sweep(verdict):
    rep = extremal.verify_thm4(20, 97)
    smallest = min(rep.min_margin.values())
    ok = rep.ok and len(rep.t_grid) == 97 and smallest > 0
    verdict(4, ok, f"even n <= 20 x 97 interior t: {len(rep.violations)} violations, "
                   f"smallest margin {smallest:.6g} (n=4)")
    assert ok


def test_c05_density_consistency(verdict):
    from fractions import Fraction
    worst = 0.0
    for s in np.linspace(0.0, 1.0, 21):
        sf = Fraction(float(s)).limit_denominator(20)
        for p in range(2, 21, 2):
            exact = float(r_poly(p)(sf))
            worst = max(worst, abs(densities.gamma_s_moment(float(s), p) / exact - 1.0))
    x = np.linspace(-10.0, 10.0, 1000)
    pdf = densities.gamma_s_density(0.5).pdf(x)
    ref = np.exp(-2.0 * np.abs(x))
    pointwise = float(np.max(np.abs(pdf - ref)))
    ok = worst < 1e-9 and pointwise < 1e-12
    verdict(5, ok, f"moment rel. error {worst:.2e} (< 1e-9), Gamma^(1/2) vs exp(-2|x|) "
                   f"{pointwise:.2e} (< 1e-12)")
    assert worst < 1e-9
    assert pointwise < 1e-12


def test_c06_norm_ratio_endpoint(verdict):
    rep = extremal.norm_ratio_scan(2, 4, 1001, refine=True)
    target = subfactorial(4) ** 0.25
    dev = abs(rep.max_value - target)
    ok = dev < 1e-9 and rep.argmax in (0.0, 1.0) and abs(target - 9 ** 0.25) < 1e-15
    verdict(6, ok, f"(2,4) max {rep.max_value:.12f} vs (!4)^(1/4), |diff| {dev:.1e}, "
                   f"argmax s={rep.argmax}")
    assert dev < 1e-9
    assert rep.argmax in (0.0, 1.0)


@lru_cache(maxsize=None)
def _scan(kind, n, p, q, signed):
    fn = extremal.alpha_star_body if signed else extremal.alpha_body
    rep = fn(densities.ConvexBody(kind, n), p, q, tol=1e-6)
    return rep.max_value, rep.extra["error_estimate"]


C07_CASES = [(fn, kind, n, pq)
             for fn in ("alpha", "alpha*")
             for pq in ((2, 3), (2, 4), (1.5, 3))
             for n in (2, 3)
             for kind in ("cube", "ball", "cross")]


@pytest.mark.parametrize("fn,kind,n,pq", C07_CASES,
                         ids=[f"{f}-{k}-n{n}-p{pq[0]}-q{pq[1]}" for f, k, n, pq in C07_CASES])
def test_c07_simplex_dominates(verdict, fn, kind, n, pq):
    signed = fn == "alpha*"
    simplex, e_s = _scan("simplex", n, *pq, signed)
    body, e_b = _scan(kind, n, *pq, signed)
    margin = simplex - body
    need = 3 * (e_s + e_b)
    ok = margin > need
    verdict(7, ok, f"{fn}({kind}, n={n}, p={pq[0]}, q={pq[1]}) = {body:.10f} vs simplex "
                   f"{simplex:.10f}: margin {margin:.3e}, required > {need:.3e}")
    assert margin > need


@pytest.mark.parametrize("p,q", [(2, 3), (2, 5)])
def test_c08_signed_scan_argmax(verdict, p, q):
    rep = extremal.signed_ratio_scan(p, q, 1001)
    ok = rep.argmax == 1.0
    verdict(8, ok, f"signed ratio (p={p}, q={q}) argmax s={rep.argmax} over 1001 points, "
                   f"max {rep.max_value:.10f}")
    assert ok


CHEB_CLASSES = [("power-sgn", 1), ("power-sgn", 2), ("power-sgn", 3), ("power-sgn", 4), "smooth-exp"]


@pytest.mark.parametrize("system", CHEB_CLASSES, ids=lambda s: s if isinstance(s, str) else f"{s[0]}-{s[1]}")
def test_c09_chebyshev_trials(verdict, system):
    sys_ = cheb.FuncSystem.smooth(3) if system == "smooth-exp" else system
    summary = cheb.cheb_trial(sys_, 10_000, seed=2024, jobs=JOBS)
    ok = summary.violations == 0
    verdict(9, ok, f"{summary.system} order {summary.order}: 10^4 trials, "
                   f"max sign changes {summary.max_roots}, violations {summary.violations}")
    assert summary.violations == 0


@pytest.mark.parametrize("n", [2, 3, 4])
def test_c10_spline_marginals(verdict, n):
    g = np.random.default_rng(100 + n).standard_normal(n)
    generic = g / np.linalg.norm(g)
    normal = densities.facet_normals(n)[0]
    sampler = densities.BodySampler("simplex", n, seed=n)
    details, ok = [], True
    for label, theta in (("generic", generic), ("facet normal", normal)):
        dens = densities.simplex_marginal_density(n, theta)
        mass = dens.moment(0)
        mean = dens.moment(1, signed=True)
        proj = densities.mc_projections(sampler, theta, 1_000_000)
        pval = stats.kstest(proj, dens.cdf).pvalue
        good = abs(mass - 1) < 1e-9 and abs(mean) < 1e-9 and pval > 0.01
        ok &= good
        details.append(f"{label}: |mass-1|={abs(mass - 1):.1e}, |mean|={abs(mean):.1e}, KS p={pval:.3f}")
    dev = densities.simplex_marginal_density(n, normal).root_affinity_deviation(n - 1)
    ok &= dev < 1e-8
    details.append(f"root-affinity deviation {dev:.1e}")
    verdict(10, ok, f"n={n}: " + "; ".join(details))
    assert ok
