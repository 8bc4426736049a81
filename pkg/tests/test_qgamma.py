import math
from fractions import Fraction as Fr

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mgk.errors import DomainError, ParameterError, PoleError
from mgk.exact import Poly, bernoulli_number
from mgk.multigamma import log_gn
from mgk.qgamma import (
    QContext,
    c1_q,
    c_j_q,
    classical_limit_sweep,
    dlog_one_minus_qpow,
    em_remainder_q,
    f_nr_q,
    log_qgamma_moak,
    log_qgamma_product,
    log_qgn,
    log_qgn_euler_maclaurin,
    log_qgn_product,
    m_poly,
    m_tilde_poly,
    mpoly_table,
    q_number,
    t_r,
)
from mgk.zeta import c_constant


def _mp_log_qgamma(z, q):
    """log Gamma(z; q) from mpmath."""
    return float(mpmath.log(mpmath.qgamma(z, q)))


def test_context_validation():
    for bad in (0.0, 1.0, -0.5, 1.5):
        with pytest.raises(DomainError):
            QContext(bad)
    ctx = QContext(0.5)
    assert ctx.log_q == math.log(0.5)


def test_q_number():
    assert q_number(1, 0.3) == pytest.approx(1.0)
    assert q_number(2, 0.5) == pytest.approx(1.5)
    assert abs(q_number(3, 0.999) - 3) < 5e-3
    assert q_number(1e-12, 0.5) == pytest.approx(1e-12 * math.log(0.5) / -0.5, rel=1e-9)


def test_m_poly_examples():
    x = Poly.x()
    assert m_poly(1) == Poly([1])
    assert m_poly(2) == Poly([1])
    assert m_poly(3) == x + 1
    assert m_poly(4) == x * x + 4 * x + 1
    for r in range(1, 13):
        assert m_poly(r)(Fr(1)) == math.factorial(r - 1)
    with pytest.raises(ParameterError):
        m_poly(0)


def test_m_tilde_poly():
    x = Poly.x()
    assert m_tilde_poly(1) == Poly([1])
    assert m_tilde_poly(2) == x
    assert m_tilde_poly(3) == x * x + x
    for n in range(2, 12):
        assert m_tilde_poly(n) == x * m_poly(n)
    t = mpoly_table(6)
    assert t.m_polys[0] == t.m_tilde_polys[0] == Poly([1])


def _richardson_derivative(f, t, r, h=1e-4):
    def central(hh):
        return sum((-1) ** i * math.comb(r, i) * f(t + (r / 2 - i) * hh) for i in range(r + 1)) / hh**r

    return (4 * central(h) - central(2 * h)) / 3


def test_m_poly_closed_form_derivatives():
    q = 0.5
    L = math.log(q)
    mpmath.mp.dps = 40
    f = lambda t: mpmath.log(1 - mpmath.mpf(q) ** t)
    for r in range(1, 5):
        got = dlog_one_minus_qpow(r, 2.0, L)
        want = float(mpmath.diff(f, 2, r))
        assert got == pytest.approx(want, rel=1e-12)
        fd = _richardson_derivative(lambda t: math.log1p(-(q**t)), 2.0, r, h=1e-4 if r < 3 else 1e-2)
        assert abs(got - fd) < 1e-5
    mpmath.mp.dps = 15


def test_product_examples():
    ctx = QContext(0.5)
    assert log_qgamma_product(0.0, ctx).value == 0.0
    assert log_qgamma_product(2.0, ctx, 60).value == pytest.approx(math.log(1.5), abs=1e-15)
    moak = log_qgamma_moak(2.5, QContext(0.9))
    assert log_qgamma_product(1.5, QContext(0.9), 500).value == pytest.approx(moak.value, abs=1e-9)


@settings(max_examples=30, deadline=None)
@given(st.floats(-0.9, 6.0), st.floats(0.05, 0.97))
def test_product_against_mpmath(z, q):
    r = log_qgamma_product(z, QContext(q))
    want = _mp_log_qgamma(z + 1, q)
    assert abs(r.value - want) <= r.error_bound + 1e-14 * max(1.0, abs(want))


def test_product_truncation_bound():
    ctx = QContext(0.9999)
    full = log_qgamma_product(1.5, ctx)
    assert full.converged
    short = log_qgamma_product(1.5, ctx, K=100)
    assert short.terms_used == 100
    assert abs(short.value - full.value) <= short.error_bound


def test_product_hits_hard_cap():
    r = log_qgamma_product(0.5, QContext(1 - 1e-7))
    assert not r.converged
    assert math.isfinite(r.value)


def test_product_pole():
    with pytest.raises(PoleError):
        log_qgamma_product(-2.0, QContext(0.5))


def test_multiple_product_examples():
    for n in range(1, 5):
        assert log_qgn_product(n, 0.0, QContext(0.7)).value == 0.0
    assert abs(log_qgn_product(2, 1.0, QContext(0.5), 80).value) < 1e-14


@given(st.floats(-0.9, 5.0), st.floats(0.1, 0.95))
@settings(max_examples=25, deadline=None)
def test_order_one_reduces_to_jackson(z, q):
    ctx = QContext(q)
    a = log_qgn_product(1, z, ctx, 300).value
    b = log_qgamma_product(z, ctx, 300).value
    assert a == b


def test_q_functional_equation():
    for q in (0.5, 0.9):
        ctx = QContext(q)
        for n in range(1, 4):
            for z in (0.5, 1.5, 3.0):
                a = log_qgn_product(n, z, ctx, 2000).value
                b = log_qgn(n - 1, z - 1, ctx).value
                c = log_qgn_product(n, z - 1, ctx, 2000).value
                assert abs(a - b - c) / max(1.0, abs(a), abs(b), abs(c)) < 1e-8


def test_moak_examples():
    for q in (0.3, 0.9):
        assert abs(log_qgamma_moak(1.0, QContext(q), 2).value) < 1e-12
    a = log_qgamma_moak(2.5, QContext(0.5), 3).value
    assert a == pytest.approx(log_qgamma_product(1.5, QContext(0.5)).value, abs=1e-9)
    with pytest.raises(DomainError):
        log_qgamma_moak(0.0, QContext(0.5))


def test_moak_grid():
    for q in (0.3, 0.7, 0.95):
        ctx = QContext(q)
        for z in (1.2, 2.5, 4.0):
            for m in (1, 2, 3):
                a = log_qgamma_moak(z, ctx, m).value
                assert a == pytest.approx(log_qgamma_product(z - 1, ctx).value, abs=1e-8)


def test_c1_q_against_brute_force_quadrature():
    q = 0.9
    L = math.log(q)
    mpmath.mp.dps = 20

    def integrand(t):
        x = mpmath.mpf(q) ** (t + 1)
        frac = t - mpmath.floor(t)
        return (frac**2 - frac + mpmath.mpf(1) / 6) / 2 * (L / (x - 1)) ** 2 * x

    total = mpmath.quad(integrand, list(range(0, 400)))
    want = float(-L / 12 - L / (12 * (q - 1)) + total)
    mpmath.mp.dps = 15
    assert c1_q(QContext(q)).value == pytest.approx(want, abs=1e-10)


def test_t_r_zero_range_and_sign():
    for q in (0.2, 0.6, 0.99):
        assert t_r(2, 1.0, QContext(q)) == 0.0
        assert t_r(1, 2.0, QContext(q)) < 0
    with pytest.raises(DomainError):
        t_r(1, -1.0, QContext(0.5))


def test_t_r_against_quadrature():
    mpmath.mp.dps = 30
    for q in (0.3, 0.5, 0.9, 0.99, 0.9999):
        L = math.log(q)
        for r in (1, 2, 3):
            for z in (0.5, 2.0, 3.5):
                f = lambda x: x**r / math.factorial(r) * mpmath.mpf(q) ** x * L / (1 - mpmath.mpf(q) ** x)
                want = float(mpmath.quad(f, [1, z]))
                assert t_r(r, z, QContext(q)) == pytest.approx(want, rel=1e-9, abs=1e-12)
    mpmath.mp.dps = 15


def _c_j_q_direct(j, q):
    """C_j(q) from the geometric-rate direct sum of k^j log(1 - q^k)."""
    mpmath.mp.dps = 40
    L = mpmath.log(q)
    qm = mpmath.mpf(q)
    s = mpmath.nsum(lambda k: k**j * mpmath.log(1 - qm**k), [1, mpmath.inf])
    lr = lambda r: mpmath.polylog(r, qm) / L ** (r - 1)
    L1 = -mpmath.log(1 - qm)
    head = sum((-1) ** r * mpmath.factorial(j) / mpmath.factorial(j - r) * lr(r + 2) for r in range(j + 1))
    head += sum(
        mpmath.mpf(bernoulli_number(r).numerator) / bernoulli_number(r).denominator
        / mpmath.factorial(r) * mpmath.factorial(j) / mpmath.factorial(j + 1 - r) * L1
        for r in range(1, j + 2)
    )
    out = float(s - head)
    mpmath.mp.dps = 15
    return out


def test_c_j_q_direct_sum():
    for j in (0, 1, 2):
        for q in (0.5, 0.8):
            assert c_j_q(j, QContext(q)).value == pytest.approx(_c_j_q_direct(j, q), abs=1e-11)


def test_c_j_q_classical_limit_and_finiteness():
    for j in range(3):
        assert abs(c_j_q(j, QContext(0.999)).value - c_constant(j).value) < 5e-3
        for q in (0.1, 0.5, 0.9, 0.99):
            assert math.isfinite(c_j_q(j, QContext(q)).value)


def test_c_j_q_order_independent():
    ctx = QContext(0.7)
    a = c_j_q(1, ctx, order=3).value
    b = c_j_q(1, ctx, order=6).value
    assert a == pytest.approx(b, abs=1e-12)
    with pytest.raises(ParameterError):
        c_j_q(2, ctx, order=2)


def test_f_nr_q_against_mpmath():
    q, z = 0.6, 0.8
    mpmath.mp.dps = 30
    qm = mpmath.mpf(q)
    for n in (1, 2, 3):
        f = lambda t: mpmath.binomial(-t, n - 1) * mpmath.log((1 - qm ** (z + t)) / (1 - qm ** (z + 1)))
        for r in (1, 2, 3, 4):
            want = float(mpmath.diff(f, 1, r - 1))
            assert f_nr_q(n, r, z, QContext(q)) == pytest.approx(want, rel=1e-9, abs=1e-13)
    mpmath.mp.dps = 15


def test_q_remainder_decreases_with_order():
    ctx = QContext(0.8)
    a = abs(em_remainder_q(2, 1.0, 3, ctx).value)
    b = abs(em_remainder_q(2, 1.0, 7, ctx).value)
    assert b < a


def test_q_euler_maclaurin_examples():
    ctx = QContext(0.9)
    a = log_qgn_euler_maclaurin(1, 1.5, ctx, 3).value
    assert a == pytest.approx(log_qgamma_product(1.5, ctx).value, abs=1e-8)
    assert abs(log_qgn_euler_maclaurin(2, 1.0, QContext(0.5), 4).value) < 1e-8
    e = log_qgn_euler_maclaurin(3, 0.5, QContext(0.95), 5)
    p = log_qgn_product(3, 0.5, QContext(0.95), 2000)
    assert abs(e.value - p.value) <= e.error_bound + p.error_bound + 1e-12


def test_q_euler_maclaurin_parameter_checks():
    with pytest.raises(ParameterError):
        log_qgn_euler_maclaurin(3, 1.0, QContext(0.5), 3)
    with pytest.raises(DomainError):
        log_qgn_euler_maclaurin(2, -1.0, QContext(0.5))


def test_q_euler_maclaurin_grid():
    for q in (0.3, 0.7, 0.95):
        ctx = QContext(q)
        for z in (1.2, 2.5, 4.0):
            for n in (1, 2, 3):
                e = log_qgn_euler_maclaurin(n, z, ctx).value
                assert e == pytest.approx(log_qgn_product(n, z, ctx).value, abs=1e-7)


def test_log_qgn_dispatch():
    ctx = QContext(0.5)
    assert log_qgn(0, 1.0, ctx).value == pytest.approx(math.log(1.5))
    a = log_qgn(2, 1.7, ctx, method="em").value
    b = log_qgn(2, 1.7, ctx).value
    assert a == pytest.approx(b, abs=1e-12)
    with pytest.raises(ParameterError):
        log_qgn(2, 1.7, ctx, method="other")


def test_sweep_examples():
    # G_1(2; q) = 1 for every q, so the n = 1, z = 1 sweep sits at rounding level.
    d = classical_limit_sweep(1, 1.0, [0.9, 0.99, 0.999]).deltas
    assert max(d) < 1e-14
    d = classical_limit_sweep(2, 0.5, [0.9, 0.999]).deltas
    assert d[1] < d[0]
    t = classical_limit_sweep(3, 1.5, [1 - 10.0**-k for k in range(1, 6)])
    assert all(np.isfinite(t.deltas))
    assert all(b < a for a, b in zip(t.deltas, t.deltas[1:]))
    assert t.to_csv().splitlines()[0] == "q,delta,error_bound,terms_used,method"
    assert len(t.to_json()["rows"]) == 5


def test_classical_limit_matches_multigamma():
    for n in (1, 2, 3):
        e = log_qgn_euler_maclaurin(n, 0.7, QContext(1 - 1e-5)).value
        assert e == pytest.approx(log_gn(n, 0.7).value, abs=1e-4)
