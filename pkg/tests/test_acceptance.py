"""Acceptance criteria, one test each; every test prints a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` (the lines also appear in the
terminal summary) or directly with ``python tests/test_acceptance.py``.
"""

import random
import sys
import time
from fractions import Fraction

import mpmath
import numpy as np

from extremal_cert import branch as B
from extremal_cert import certifier as C
from extremal_cert import table1
from extremal_cert.interval import E_SQUARED, Interval, certified_inf, certified_sup
from extremal_cert.radial import Dimension, LogPolynomial, bilaplacian, derivative, make_w
from extremal_cert.certifier import Status

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # run as a script from elsewhere
    ACCEPTANCE_LINES = []

SEVEN_HALVES = Fraction(7, 2)


def report(n: int, title: str, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {title} -- {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def ulps(a: float, b: float) -> int:
    n = 0
    while a < b:
        a = np.nextafter(a, np.inf)
        n += 1
    return n


def test_criterion_1_table_reproduction():
    t0 = time.perf_counter()
    bad = []
    worst_margin = float("inf")
    for N in range(13, 32):
        lam_t, beta_t = table1.row(N)
        S = C.lambda_prime_enclosure(N, SEVEN_HALVES, tol=1e-4)
        I = C.beta_enclosure(N, SEVEN_HALVES, tol=1e-4)
        ok = S.value.hi <= lam_t and beta_t <= I.value.lo and S.value.hi < I.value.lo
        worst_margin = min(worst_margin, I.value.lo - S.value.hi)
        if not ok:
            bad.append(N)
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 300
    report(1, "Table 1 reproduction (N=13..31, tol 1e-4)", ok,
           f"failing rows {bad or 'none'}, smallest gap I.lo-S.hi={worst_margin:.3f}, {elapsed:.1f}s (limit 300s)")


def test_criterion_2_closed_form_regime():
    high = [N for N in range(32, 201) if not C.closed_form_check(N)]
    low = [N for N in range(5, 32) if C.closed_form_check(N)]
    lam32 = C.closed_form_lambda(32).interval()
    margin = Interval.exact(Dimension(32).H) - lam32
    ok = not high and not low and margin.lo > 0 and ulps(E_SQUARED.lo, E_SQUARED.hi) <= 2
    report(2, "closed form 8(N-2)(N-4)e^2 < H_N exactly for N>=32", ok,
           f"wrong high {high or 'none'}, wrong low {low or 'none'}, "
           f"H_32 - 6720e^2 in [{margin.lo:.4f}, {margin.hi:.4f}]")


def test_criterion_3_classical_threshold():
    n = C.classical_hr_threshold(SEVEN_HALVES)
    report(3, "classical Hardy-Rellich threshold", n == 22, f"least N with H_N > S_N is {n} (expected 22)")


def _fd_bilaplacian(p: LogPolynomial, N: int, r):
    d = [mpmath.diff(p.mp, r, k) for k in range(1, 5)]
    return d[3] + 2 * (N - 1) / r * d[2] + (N - 1) * (N - 3) / r**2 * d[1] - (N - 1) * (N - 3) / r**3 * d[0]


def test_criterion_4_bilaplacian_identity():
    exact = all(bilaplacian(make_w(2), N) == LogPolynomial.monomial(-4, 8 * (N - 2) * (N - 4)) for N in range(5, 41))
    rng = random.Random(4)
    worst = 0.0
    with mpmath.workdps(40):
        for _ in range(100):
            terms = [
                (rng.randint(-9, 9) or 1, Fraction(rng.randint(-12, 24), rng.choice((1, 2, 4))), rng.randint(0, 2))
                for _ in range(rng.randint(1, 4))
            ]
            p = LogPolynomial(terms)
            N = rng.randint(5, 40)
            r = mpmath.mpf(rng.uniform(0.1, 0.95))
            sym = bilaplacian(p, N).mp(r)
            fd = _fd_bilaplacian(p, N, r)
            scale = max(abs(fd), mpmath.mpf(1))
            worst = max(worst, float(abs(sym - fd) / scale))
    ok = exact and worst < 1e-6
    report(4, "bilaplacian of w_2 and finite-difference agreement", ok,
           f"exact identity N=5..40: {exact}, worst relative FD discrepancy over 100 points {worst:.2e}")


def test_criterion_5_boundary_conditions():
    vals = {m: (make_w(m).value_at_one(), derivative(make_w(m)).value_at_one()) for m in (2, SEVEN_HALVES, 5, 10)}
    ok = all(v == (0, 0) for v in vals.values())
    shown = ", ".join(f"m={m}: ({a}, {b})" for m, (a, b) in vals.items())
    report(5, "w_m(1) = w_m'(1) = 0 in exact arithmetic", ok, f"(w(1), w'(1)) for {shown}")


def test_criterion_6_hardy_rellich_structure():
    dims = range(5, 41)
    phi_ok = all(C.phi_identity(N) for N in dims)
    const_ok = all(C.hr_constant_identity(N) for N in dims)
    bessel_bad = [N for N in dims if C.check_bessel_supersolution(N).status is not Status.CERTIFIED]
    dom_bad = [N for N in dims if C.check_hr_domination(N).status is not Status.CERTIFIED]
    ok = phi_ok and const_ok and not bessel_bad and not dom_bad
    report(6, "Hardy-Rellich structure for N=5..40", ok,
           f"phi identity {phi_ok}, (N-2)^2+4(N-1)=N^2 {const_ok}, "
           f"psi residual failures {bessel_bad or 'none'}, domination failures {dom_bad or 'none'}")


def test_criterion_7_branch_consistency():
    zero = B.integrate(13, 0.0, 0.0, 0.0, dense=True)
    zero_ok = bool(np.all(zero.profile(np.linspace(0, 1, 101)) == 0.0)) and bool(np.all(zero.defect == 0.0))
    details, ok = [], zero_ok
    for N in (13, 20, 31):
        t0 = time.perf_counter()
        res = B.continue_branch(N)
        fine = B.continue_branch(N, rtol=B.RTOL / 2)
        early = B.continue_branch(N, u0_max=10.0)
        mono = B.monotone_in_lambda(N, res.points, np.linspace(0, 1, 65))
        elapsed = time.perf_counter() - t0
        S = C.lambda_prime_enclosure(N, SEVEN_HALVES, tol=1e-6)
        refine = abs(fine.lambda_star - res.lambda_star) / res.lambda_star
        located = abs(early.lambda_star - res.lambda_star) / res.lambda_star
        this = (
            res.converged and res.lambda_star < S.value.lo and mono and res.sup_at_center
            and refine < 1e-3 and located < 1e-4 and elapsed < 120
        )
        ok = ok and this
        details.append(
            f"N={N}: lambda*={res.lambda_star:.2f} ({res.fold_kind}) < S.lo={S.value.lo:.2f}, "
            f"monotone {mono}, refinement {refine:.1e}, cutoff shift {located:.1e}, {elapsed:.0f}s"
        )
    report(7, "branch consistency", ok, f"u=0 at lambda=0 exact: {zero_ok}; " + "; ".join(details))


def test_criterion_8_interval_soundness():
    from extremal_cert.interval import exp_i, ln_i, pow_i
    from extremal_cert.radial import exp_w, hr1_weight

    mpmath.mp.dps = 40
    rng = random.Random(8)
    failures = 0
    exprs = [exp_w(SEVEN_HALVES), hr1_weight(13), C.lambda_ratio(13, SEVEN_HALVES), C.beta_ratio(20, SEVEN_HALVES)]
    for i in range(10_000):
        lo = rng.uniform(0.01, 0.98)
        box = Interval(lo, lo + rng.random() * 0.01)
        p = mpmath.mpf(box.lo) + (mpmath.mpf(box.hi) - mpmath.mpf(box.lo)) * mpmath.mpf(rng.random())
        k = i % 6
        if k < 4:
            enc, val = exprs[k](box), exprs[k].mp(p)
        elif k == 4:
            q = Fraction(rng.randint(-15, 15), rng.choice((1, 2, 7)))
            enc, val = pow_i(box, q), p ** (mpmath.mpf(q.numerator) / q.denominator)
        else:
            enc, val = exp_i(ln_i(box)), p
        if not (mpmath.mpf(enc.lo) <= val <= mpmath.mpf(enc.hi)):
            failures += 1
    tol = 1e-6
    f = C.lambda_ratio(13, SEVEN_HALVES)
    s = certified_sup(f, Interval(0, 1), tol=tol)
    i = certified_inf(lambda x: -f(x), Interval(0, 1), tol=tol)
    scale = abs(s.value.lo)
    dual = abs(s.value.lo + i.value.hi) <= 2 * tol * scale and abs(s.value.hi + i.value.lo) <= 2 * tol * scale
    again = certified_sup(f, Interval(0, 1), tol=tol)
    cert_a = C.check_cond1(13, SEVEN_HALVES, 2525).to_json()
    cert_b = C.check_cond1(13, SEVEN_HALVES, 2525).to_json()
    deterministic = again == s and cert_a == cert_b
    ok = failures == 0 and dual and deterministic
    report(8, "interval soundness suite", ok,
           f"{failures} of 10000 point checks outside enclosure, sup/inf duality {dual}, deterministic {deterministic}")


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
