import json
import math
from fractions import Fraction as Fr

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mgk.errors import DomainError
from mgk.exact import (
    CoeffBundle,
    Poly,
    bernoulli_number,
    bernoulli_poly,
    binomial_poly,
    f_n_symbolic,
    f_nr_numerator,
    falling_factorial,
    fraction_from_str,
    fraction_to_str,
    g_polynomials,
    higher_stirling_coeffs,
    p_poly,
    periodic_bernoulli,
    phi_jr,
    phi_n,
    q_poly,
    stirling_first,
)

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=50)
small_polys = st.lists(rationals, max_size=6).map(Poly)


def test_bernoulli_numbers():
    assert bernoulli_number(0) == 1
    assert bernoulli_number(1) == Fr(-1, 2)
    assert bernoulli_number(2) == Fr(1, 6)
    assert bernoulli_number(12) == Fr(-691, 2730)
    assert all(bernoulli_number(r) == 0 for r in range(3, 40, 2))


def test_bernoulli_numbers_match_mpmath():
    for r in range(2, 31):
        assert float(bernoulli_number(r)) == pytest.approx(float(mpmath.bernoulli(r)), rel=1e-15)


def test_bernoulli_recurrence():
    for n in range(1, 25):
        assert sum(math.comb(n + 1, k) * bernoulli_number(k) for k in range(n + 1)) == 0


def test_bernoulli_polys():
    assert bernoulli_poly(0) == Poly([1])
    assert bernoulli_poly(1) == Poly([Fr(-1, 2), 1])
    assert bernoulli_poly(2) == Poly([Fr(1, 6), -1, 1])
    for r in range(12):
        assert bernoulli_poly(r)(Fr(0)) == bernoulli_number(r)


@given(st.integers(1, 12), rationals)
def test_bernoulli_poly_difference(r, x):
    # B_r(x+1) - B_r(x) = r x^{r-1}
    b = bernoulli_poly(r)
    assert b(x + 1) - b(x) == r * x ** (r - 1)


def test_periodic_bernoulli():
    assert periodic_bernoulli(2, 3.5) == pytest.approx(-1 / 12)
    assert periodic_bernoulli(1, 7.0) == -0.5
    assert periodic_bernoulli(2, 0.25) == pytest.approx(-1 / 48)
    assert periodic_bernoulli(3, -0.75) == pytest.approx(float(bernoulli_poly(3)(Fr(1, 4))))


def test_stirling_first():
    assert [stirling_first(3, j) for j in (1, 2, 3)] == [2, -3, 1]
    assert stirling_first(0, 0) == 1
    assert stirling_first(4, 2) == 11
    with pytest.raises(DomainError):
        stirling_first(3, 4)


@given(st.integers(0, 12), st.integers(-30, 30))
def test_stirling_expands_falling_factorial(n, u):
    assert sum(stirling_first(n, j) * u**j for j in range(n + 1)) == falling_factorial(u, n)


def test_stirling_row_sums():
    for n in range(2, 20):
        assert sum(stirling_first(n, j) for j in range(n + 1)) == 0
        assert sum(abs(stirling_first(n, j)) for j in range(n + 1)) == math.factorial(n)


def test_binomial_poly():
    assert binomial_poly(0) == Poly([1])
    assert binomial_poly(1) == Poly([0, 1])
    assert binomial_poly(2) == Poly([0, Fr(-1, 2), Fr(1, 2)])
    for n in range(8):
        for z in range(-5, 12):
            assert binomial_poly(n)(Fr(z)) == Fr(falling_factorial(z, n), math.factorial(n))


def test_g_polynomials_examples():
    assert g_polynomials(1) == (Poly([1]),)
    assert g_polynomials(2) == (Poly([0, 1]), Poly([-1]))
    assert g_polynomials(3)[2] == Poly([Fr(1, 2)])


@given(st.integers(1, 8), rationals, rationals)
def test_g_polynomials_reconstruct_binomial(n, z, u):
    G = g_polynomials(n)
    assert sum(G[j](z) * u**j for j in range(n)) == binomial_poly(n - 1)(z - u)


def test_phi_jr_examples():
    assert phi_jr(0, 0) == -1
    assert phi_jr(0, 1) == 0
    assert phi_jr(0, 2) == 1


def test_phi_jr_matches_numeric_differentiation():
    for j in range(4):
        f = lambda t, j=j: t ** (j + 1) / (j + 1) * mpmath.log(t) - t ** (j + 1) / (j + 1) ** 2
        for r in range(5):
            assert float(phi_jr(j, r)) == pytest.approx(float(mpmath.diff(f, 1, r)), abs=1e-12)


def test_p_poly():
    assert p_poly(0) == Poly([0, -1])
    assert p_poly(0)(Fr(1)) == -1
    for j in range(8):
        assert p_poly(j).degree == j + 1
        assert p_poly(j).coeff(j + 1) == Fr(-1, (j + 1) ** 2)


def _q_numeric(j, z):
    """Term-by-term float evaluation of Q_j with independently differentiated phi."""
    mpmath.mp.dps = 30

    def phi(jj, r):
        f = lambda t: t ** (jj + 1) / (jj + 1) * mpmath.log(t) - t ** (jj + 1) / (jj + 1) ** 2
        return mpmath.diff(f, 1, r)

    def P(jj, x):
        return sum(mpmath.bernoulli(r) / mpmath.factorial(r) * phi(jj, r) * x ** (jj - r + 1) for r in range(jj + 2))

    out = P(j, z + 1) - sum(mpmath.binomial(j, r) * z**r * P(j - r, 1) for r in range(j + 1))
    acc = 0
    for r in range(1, j + 2):
        tail = sum((-1) ** (l - 1) * mpmath.mpf(z) ** l / l for l in range(1, r + 1))
        acc += mpmath.binomial(j + 1, r) * mpmath.bernpoly(j + 1 - r, z) * tail
    mpmath.mp.dps = 15
    return float(out + acc / (j + 1))


def test_q_poly():
    assert q_poly(0).is_zero()
    assert q_poly(1)(Fr(0)) == 0
    assert float(q_poly(2)(Fr(1))) == pytest.approx(_q_numeric(2, 1), abs=1e-13)
    assert float(q_poly(3)(Fr(5, 2))) == pytest.approx(_q_numeric(3, 2.5), abs=1e-12)


def test_phi_n_examples():
    z = Poly.x()
    assert phi_n(1).terms == {-1: z}
    assert phi_n(2).terms == {-1: z * z * Fr(1, 2), 0: -z}
    assert phi_n(3).terms[1] == z * Fr(1, 2)
    for n in range(1, 7):
        assert phi_n(n).exponents() == list(range(-1, n - 1))


@given(st.integers(1, 6), rationals, st.fractions(min_value=1, max_value=40, max_denominator=7))
def test_phi_n_matches_regrouped_form(n, z, k):
    direct = phi_n(n)(z, k)
    regrouped = Fr(0)
    for r in range(n):
        inner = sum(Fr((-1) ** (l - 1), l) * (z / k) ** l for l in range(1, r + 2))
        regrouped += (-1) ** r * stirling_first(n - 1, r) * k**r * inner
    assert direct == regrouped / math.factorial(n - 1)


def test_weierstrass_factor_decays_like_k_squared():
    # -binom(-k, n-1) log(1+z/k) + Phi_n(z, k) = O(k^{-2}) for large k.
    for n in range(1, 5):
        z = 0.7
        vals = []
        for k in (1e3, 2e3):
            b = float(binomial_poly(n - 1)(Fr(-int(k))))
            vals.append(-b * math.log1p(z / k) + float(phi_n(n)(Fr(z), Fr(int(k)))))
        assert abs(vals[0]) < 1e-3
        assert vals[0] / vals[1] == pytest.approx(4, rel=0.05)


def test_f_n_symbolic_examples():
    z = Poly.x()
    f1 = f_n_symbolic(1)
    assert f1.gamma == -z and f1.one.is_zero() and f1.zeta_d == {}
    f2 = f_n_symbolic(2)
    assert f2.gamma == -z * z * Fr(1, 2)
    assert f2.zeta_d == {0: -z}
    assert f2.one == -(z * z + z) * Fr(1, 2)
    assert f_n_symbolic(3).gamma == -(z**3 * Fr(1, 6) - z * z * Fr(1, 4))


def test_higher_stirling_log_coefficients():
    z = Poly.x()
    assert higher_stirling_coeffs(1, 3).log_coeff == z + Fr(1, 2)
    assert higher_stirling_coeffs(2, 3).log_coeff == z * z * Fr(1, 2) - Fr(1, 12)
    assert higher_stirling_coeffs(3, 3).log_coeff == z**3 * Fr(1, 6) - z * z * Fr(1, 4) + Fr(1, 24)


def test_higher_stirling_n1_is_classical_stirling():
    b = higher_stirling_coeffs(1, 8)
    assert b.display_polynomial() == Poly([-1, -1])
    assert b.const_part.zeta_d == {0: Poly([-1])}
    for r, num, w in b.series_terms:
        assert num * w == Poly([bernoulli_number(2 * r) / (2 * r * (2 * r - 1))])


def test_higher_stirling_shapes():
    for n in range(1, 7):
        b = higher_stirling_coeffs(n, 6)
        assert b.log_coeff.degree == n
        assert all(num.degree <= n - 1 for _, num, _ in b.series_terms)


def test_f_nr_numerator_against_mpmath():
    z = 1.7
    for n in range(1, 5):
        for R in range(1, 6):
            f = lambda t: mpmath.binomial(-t, n - 1) * mpmath.log((z + t) / (z + 1))
            want = float(mpmath.diff(f, 1, R))
            got = float(f_nr_numerator(n, R)(Fr(z))) / (z + 1) ** R
            assert got == pytest.approx(want, rel=1e-10, abs=1e-13)


def test_telescoping_identity_sign():
    # The Bernoulli sum enters with a minus sign; with a plus sign the
    # identity already fails at n = 2.
    n = 2
    f = binomial_poly(n - 1).shift(-1)
    integral = f.antideriv()
    s = Poly()
    for r in range(1, n + 1):
        d = f.deriv(r - 1) * (-1) ** (r - 1)
        s = s + (d - Poly.constant(d(0))) * (bernoulli_number(r) / math.factorial(r))
    base = -binomial_poly(n) + integral - Poly.constant(integral(0))
    assert (base - s).is_zero()
    assert base + s == Poly([0, -1])


def test_coeff_bundle_json_roundtrip():
    for n in range(1, 6):
        b = higher_stirling_coeffs(n, 4)
        data = json.loads(json.dumps(b.to_json()))
        assert CoeffBundle.from_json(data) == b


@given(rationals)
def test_fraction_string_roundtrip(a):
    assert fraction_from_str(fraction_to_str(a)) == a


@given(small_polys, small_polys, rationals)
def test_poly_ring_laws(p, q, x):
    assert (p + q)(x) == p(x) + q(x)
    assert (p * q)(x) == p(x) * q(x)
    assert (p - p).is_zero()
    assert p.compose(q)(x) == p(q(x))


@given(small_polys, rationals, rationals)
def test_poly_calculus(p, a, b):
    assert p.antideriv().deriv() == p
    assert p.integrate(a, b) == p.antideriv()(b) - p.antideriv()(a)
    assert p.shift(a)(b) == p(b + a)


@given(small_polys)
def test_poly_json_roundtrip(p):
    assert Poly.from_json(p.to_json()) == p
