import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from extremal_cert.interval import DomainError, Interval
from extremal_cert.radial import (
    LN,
    R,
    Dimension,
    LogPolynomial,
    bilaplacian,
    derivative,
    exp_w,
    hr1_weight,
    hr2_weight,
    laplacian,
    make_w,
    parse_expr,
    phi,
)

mpmath.mp.dps = 40


def mp_laplacian(f, N, r):
    """Radial Laplacian by numerical differentiation in extended precision."""
    r = mpmath.mpf(r)
    return mpmath.diff(f, r, 2) + (N - 1) / r * mpmath.diff(f, r, 1)


rationals = st.fractions(min_value=-6, max_value=6, max_denominator=4)


@st.composite
def log_polys(draw, max_terms=4):
    n = draw(st.integers(1, max_terms))
    terms = [
        (draw(st.integers(-9, 9)), draw(rationals), draw(st.integers(0, 2)))
        for _ in range(n)
    ]
    return LogPolynomial(terms)


def test_laplacian_of_r_squared():
    assert laplacian(R * R, 13) == LogPolynomial.const(26)


def test_bilaplacian_of_log_term():
    for N in (5, 13, 32):
        assert laplacian(laplacian(-4 * LN, N), N) == LogPolynomial.monomial(-4, 8 * (N - 2) * (N - 4))


def test_laplacian_of_seven_halves_power():
    p = LogPolynomial.monomial(Fraction(7, 2))
    lap = laplacian(p, 13)
    # (7/2)(7/2 + 11) = 203/4
    assert lap == LogPolynomial.monomial(Fraction(3, 2), Fraction(203, 4))
    # central finite differences at r = 1/2
    h = mpmath.mpf("1e-8")
    f = lambda r: r ** mpmath.mpf(3.5)
    r = mpmath.mpf("0.5")
    fd = (f(r + h) - 2 * f(r) + f(r - h)) / h**2 + 12 / r * (f(r + h) - f(r - h)) / (2 * h)
    assert abs(fd / lap.mp(r) - 1) < 1e-6


def test_bilaplacian_examples():
    for N in (5, 13, 40):
        assert bilaplacian(LogPolynomial.monomial(4), N) == LogPolynomial.const(8 * N * (N + 2))
        assert bilaplacian(LogPolynomial.const(7), N).is_zero()
    assert bilaplacian(make_w(2), 32) == LogPolynomial.monomial(-4, 8 * 30 * 28)


def test_make_w_boundary_values():
    for m in (2, Fraction(7, 2), 5, 10):
        w = make_w(m)
        assert w.value_at_one() == 0
        assert derivative(w).value_at_one() == 0


def test_make_w_interior_value():
    w = make_w(3.5)
    half = mpmath.mpf(1) / 2
    ref = -4 * mpmath.log(half) - mpmath.mpf(8) / 7 + mpmath.mpf(8) / 7 * half ** mpmath.mpf(3.5)
    assert abs(w.mp(half) - ref) < mpmath.mpf("1e-35")
    enc = w(Interval(0.5, 0.5))
    assert mpmath.mpf(enc.lo) <= ref <= mpmath.mpf(enc.hi)


def test_make_w_rejects_nonpositive():
    with pytest.raises(DomainError):
        make_w(0)
    with pytest.raises(DomainError):
        make_w(Fraction(-1, 2))


def test_hr_weights_require_dimension_five():
    with pytest.raises(DomainError):
        hr1_weight(4)
    with pytest.raises(DomainError):
        hr2_weight(4)


def test_hr2_constant_for_13():
    assert Dimension(13).H == Fraction(13689, 16)
    assert "13689/16" in hr2_weight(13).to_text()


def test_hr1_dominates_hr2_on_samples():
    hr1, hr2 = hr1_weight(13), hr2_weight(13)
    for i in range(1, 10):
        r = mpmath.mpf(i) / 10
        assert r**4 * (hr1.mp(r) - hr2.mp(r)) >= 0
        assert (hr1 - hr2)(Interval(i / 10, i / 10)).lo >= 0


def test_phi_laplacian_is_single_power():
    for N in range(5, 41):
        minus = -laplacian(phi(N), N)
        assert minus == LogPolynomial.monomial(-Fraction(N, 2) - 1, Fraction((N - 2) ** 2, 4))


@settings(max_examples=100, deadline=None)
@given(log_polys(), st.integers(5, 40))
def test_laplacian_matches_numerical_oracle(p, N):
    lap = laplacian(p, N)
    rng = random.Random(hash((p.to_text(), N)))
    for _ in range(3):
        r = mpmath.mpf(rng.uniform(0.05, 0.95))
        ref = mp_laplacian(p.mp, N, r)
        got = lap.mp(r)
        assert abs(got - ref) <= mpmath.mpf("1e-20") * (1 + abs(ref))


@settings(max_examples=50, deadline=None)
@given(log_polys(), log_polys())
def test_algebra_is_consistent_with_evaluation(p, q):
    r = mpmath.mpf("0.37")
    assert abs((p + q).mp(r) - (p.mp(r) + q.mp(r))) < mpmath.mpf("1e-25") * (1 + abs(p.mp(r)) + abs(q.mp(r)))
    assert abs((p * q).mp(r) - p.mp(r) * q.mp(r)) < mpmath.mpf("1e-25") * (1 + abs(p.mp(r) * q.mp(r)))
    assert abs(derivative(p).mp(r) - mpmath.diff(p.mp, r)) < mpmath.mpf("1e-20") * (1 + abs(derivative(p).mp(r)))


@given(log_polys())
def test_text_round_trip(p):
    assert LogPolynomial.parse(p.to_text()) == p


def test_expr_text_round_trip():
    for e in (exp_w(Fraction(7, 2)), hr1_weight(13), hr2_weight(20)):
        back = parse_expr(e.to_text())
        assert back.to_text() == e.to_text()
        x = Interval(0.3, 0.31)
        assert back(x) == e(x)


def test_canonical_order():
    p = LogPolynomial([(1, 2, 0), (3, 0, 1), (2, 0, 0)])
    keys = list(p.as_dict())
    assert keys == sorted(keys)


@settings(max_examples=60, deadline=None)
@given(log_polys(), st.floats(0.01, 0.98), st.floats(0, 0.02))
def test_interval_evaluation_is_sound(p, a, w):
    x = Interval(a, a + w)
    enc = p.interval(x)
    for t in (0, 0.5, 1):
        r = mpmath.mpf(x.lo) + t * (mpmath.mpf(x.hi) - mpmath.mpf(x.lo))
        v = p.mp(r)
        assert mpmath.mpf(enc.lo) <= v <= mpmath.mpf(enc.hi)
