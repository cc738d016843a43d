from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from extremal_cert import certifier as C
from extremal_cert.certifier import Status, Verdict
from extremal_cert.interval import Interval
from extremal_cert.radial import Dimension, hr1_constants, psi

SEVEN_HALVES = Fraction(7, 2)


def ratio_grid(N, m, r):
    """Δ²w_m / e^{w_m} on a float grid, from the closed form (independent of the symbolic layer)."""
    m = float(m)
    a = 8 * (N - 2) * (N - 4)
    b = 4 * (m + N - 2) * (m - 2) * (m + N - 4)
    return (a + b * r**m) * np.exp(4 / m - 4 / m * r**m)


def beta_grid(N, m, r):
    m = float(m)
    A = (N - 2) ** 2 * (N - 4) ** 2 / 16
    B = (N - 1) * (N - 4) ** 2 / 4
    d1 = 1 - 0.9 * r ** (N / 2 - 1)
    d2 = 1 - r ** (N / 2 - 2)
    return (A / (d1 * d2) + B / d2) * np.exp(4 / m - 4 / m * r**m)


# ---------------------------------------------------------------------------
# cond1 / cond2 examples

def test_cond1_closed_form_lambda_at_32():
    assert C.check_cond1(32, 2, C.closed_form_lambda(32)).status is Status.CERTIFIED


def test_cond1_table_row_13():
    assert C.check_cond1(13, SEVEN_HALVES, 2525).status is Status.CERTIFIED


def test_cond1_falsified_with_witness_near_zero():
    cert = C.check_cond1(13, SEVEN_HALVES, 100)
    assert cert.status is Status.FALSIFIED
    assert cert.witness is not None and cert.witness < 0.1
    # exact value of the regularized residual at r = 0
    assert 8 * 11 * 9 - 100 * mpmath.exp(-mpmath.mpf(8) / 7) > 0


@pytest.mark.parametrize("N,beta", [(13, 2560), (31, 86900)])
def test_cond2_table_rows(N, beta):
    assert C.check_cond2(N, SEVEN_HALVES, beta).status is Status.CERTIFIED


def test_cond2_falsified_for_huge_beta():
    cert = C.check_cond2(13, SEVEN_HALVES, 10**6)
    assert cert.status is Status.FALSIFIED
    left_at_zero = C.regularized_hr1_weight(13)(Interval(0.0, 0.0))
    assert Fraction(855) < Fraction(left_at_zero.hi) <= Fraction(856)
    assert sum(hr1_constants(13)) == Fraction(13689, 16)


# ---------------------------------------------------------------------------
# enclosures of S_N and I_N

def test_lambda_prime_enclosure_row_13_and_grid_oracle():
    S = C.lambda_prime_enclosure(13, SEVEN_HALVES, tol=1e-6)
    assert S.value.hi <= 2525
    r = np.linspace(0.0, 1.0, 1_000_001)
    grid_sup = float(np.max(ratio_grid(13, 3.5, r)))
    slack = 1e-12 * grid_sup  # float rounding in the oracle itself
    assert grid_sup <= S.value.hi + slack
    assert S.value.lo <= grid_sup + 1e-6 * grid_sup


def test_beta_enclosure_rows_and_grid_oracle():
    I13 = C.beta_enclosure(13, SEVEN_HALVES, tol=1e-6)
    assert I13.value.lo >= 2560
    assert C.beta_enclosure(31, SEVEN_HALVES, tol=1e-6).value.lo >= 86900
    r = np.linspace(0.0, 1 - 1e-4, 1_000_001)
    grid_inf = float(np.min(beta_grid(13, 3.5, r)))
    assert I13.value.lo <= grid_inf * (1 + 1e-12)
    assert grid_inf <= I13.value.hi + 1e-6 * grid_inf


def test_closed_form_enclosure_at_32_is_attained_at_origin():
    S = C.lambda_prime_enclosure(32, 2, tol=1e-9)
    lam = C.closed_form_lambda(32).interval()
    assert S.value.lo <= lam.hi and lam.lo <= S.value.hi
    assert S.argmax_box.lo == 0.0


@pytest.mark.parametrize("N", [13, 20, 31])
def test_soundness_coupling(N):
    S = C.lambda_prime_enclosure(N, SEVEN_HALVES, tol=1e-6)
    assert C.check_cond1(N, SEVEN_HALVES, Fraction(S.value.hi) + 1).status is Status.CERTIFIED
    assert C.check_cond1(N, SEVEN_HALVES, Fraction(S.value.lo) - 1).status is Status.FALSIFIED
    I = C.beta_enclosure(N, SEVEN_HALVES, tol=1e-6)
    assert C.check_cond2(N, SEVEN_HALVES, Fraction(I.value.lo) - 1).status is Status.CERTIFIED
    assert C.check_cond2(N, SEVEN_HALVES, Fraction(I.value.hi) + 1).status is Status.FALSIFIED


# ---------------------------------------------------------------------------
# exact identities

@settings(max_examples=20, deadline=None)
@given(st.integers(5, 60), st.fractions(min_value=Fraction(1, 4), max_value=12, max_denominator=6))
def test_regularization_identity(N, m):
    assert C.regularized_bilaplacian(N, m) == C.closed_form_regularized_bilaplacian(N, m)


def test_closed_form_check_ranges():
    assert all(C.closed_form_check(N) for N in range(32, 201))
    assert not any(C.closed_form_check(N) for N in range(5, 32))
    assert C.closed_form_check(1000)


def test_closed_form_margin_at_32():
    lam = C.closed_form_lambda(32).interval()
    H = Dimension(32).H
    assert H == 50176
    assert 49654 < lam.lo and lam.hi < 49656


def test_classical_threshold_is_22():
    assert C.classical_hr_threshold(SEVEN_HALVES) == 22
    S21 = C.lambda_prime_enclosure(21, SEVEN_HALVES)
    S22 = C.lambda_prime_enclosure(22, SEVEN_HALVES)
    assert Dimension(21).H == Fraction(441 * 289, 16)
    assert Fraction(S21.value.lo) > Dimension(21).H
    assert Fraction(S22.value.hi) < Dimension(22).H == 9801


# ---------------------------------------------------------------------------
# Hardy-Rellich structure

def test_hr_identities_all_dimensions():
    for N in range(5, 41):
        assert C.hr_constant_identity(N)
        assert C.phi_identity(N)
        assert C.vr_over_v_identity(N)


@pytest.mark.parametrize("N", [5, 6, 7, 13, 22, 40])
def test_hr_certificates(N):
    assert C.check_bessel_supersolution(N).status is Status.CERTIFIED
    assert C.check_vr_over_v(N).status is Status.CERTIFIED
    assert C.check_hr_domination(N).status is Status.CERTIFIED


def test_hr_checks_reject_small_dimension():
    with pytest.raises(ValueError):
        C.check_bessel_supersolution(4)


def test_vr_added_term_limit():
    assert C.vr_added_term_limit(13) == Fraction(99, 2)


def mp_bessel_residual(N, r):
    """ψ'' + ((N-1)/r + V_r/V) ψ' + (W1/V) ψ with hand-written derivatives, no clearing of denominators."""
    with mpmath.workdps(80):
        N = mpmath.mpf(N)
        r = mpmath.mpf(r)
        e = 2 - N / 2
        psi, dpsi, ddpsi = r**e - 1, e * r ** (e - 1), e * (e - 1) * r ** (e - 2)
        d1 = r**2 - mpmath.mpf(9) / 10 * r ** (N / 2 + 1)
        dd1 = 2 * r - mpmath.mpf(9) / 10 * (N / 2 + 1) * r ** (N / 2)
        d2 = r**2 - r ** (N / 2)
        vr_over_v = -dd1 / d1
        w1_over_v = (N - 4) ** 2 / (4 * d2)
        return ddpsi + ((N - 1) / r + vr_over_v) * dpsi + w1_over_v * psi


@pytest.mark.parametrize("N", [5, 13, 31])
def test_bessel_residual_mpmath_oracle(N):
    rng = np.random.default_rng(N)
    poly = C.bessel_residual(N)
    for r in rng.uniform(1e-3, 1 - 1e-3, 200):
        ref = mp_bessel_residual(N, r)
        assert ref <= 0
        # the cleared polynomial is the residual times a positive factor
        assert poly.mp(mpmath.mpf(r)) <= 0


def test_bessel_sampling_prepass_13():
    N = 13
    r = np.linspace(1e-8, 1 - 1e-8, 100_000)
    f = r ** (2 - N / 2) - 1
    dpsi = (2 - N / 2) * r ** (1 - N / 2)
    ddpsi = (2 - N / 2) * (1 - N / 2) * r ** (-N / 2)
    d1 = r**2 - 0.9 * r ** (N / 2 + 1)
    dd1 = 2 * r - 0.9 * (N / 2 + 1) * r ** (N / 2)
    d2 = r**2 - r ** (N / 2)
    res = ddpsi + ((N - 1) / r - dd1 / d1) * dpsi + (N - 4) ** 2 / (4 * d2) * f
    assert np.all(res <= 1e-9 * np.abs(ddpsi))
    assert psi(N).value_at_one() == 0


# ---------------------------------------------------------------------------
# reports

def test_certify_dimension_13_and_32():
    r13 = C.certify_dimension(13, tol=1e-4)
    assert r13.verdict is Verdict.SINGULAR_CERTIFIED
    assert r13.S.value.hi < r13.I.value.lo
    assert (r13.table_lambda, r13.table_beta) == (2525, 2560)
    r32 = C.certify_dimension(32)
    assert r32.verdict is Verdict.SINGULAR_CERTIFIED
    assert r32.route == "closed-form"


def test_certify_dimension_rejects_12():
    with pytest.raises(C.UnsupportedDimension):
        C.certify_dimension(12)


def test_certificates_are_reproducible():
    a = C.check_cond2(17, SEVEN_HALVES, 8035).to_json()
    b = C.check_cond2(17, SEVEN_HALVES, 8035).to_json()
    assert a == b
    ra = C.certify_dimension(20, tol=1e-4).to_json()
    rb = C.certify_dimension(20, tol=1e-4).to_json()
    assert ra == rb
