"""Riemann and Hurwitz zeta machinery, zeta'(-j), the constants C_j,
Euler's constant and polylogarithms."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import List

import numpy as np

from .errors import DomainError, ParameterError, PoleError
from .exact import bernoulli_number, bernoulli_poly, falling_factorial, p_poly
from .numerics import EPS, EvalResult, PanelScheme, compensated_sum, periodic_bernoulli_integral

__all__ = [
    "euler_gamma",
    "riemann_zeta_deriv",
    "zeta_deriv_neg",
    "ZetaDerivTable",
    "zeta_deriv_table",
    "c_constant",
    "hurwitz_zeta",
    "hurwitz_zeta_deriv",
    "hurwitz_zeta_deriv0",
    "polylog",
    "zeta_deriv_neg_product",
    "hurwitz_zeta_deriv_neg_product",
    "LOG_SQRT_2PI",
]

LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)
_GAMMA_LITERATURE = 0.57721566490153286061


@lru_cache(maxsize=None)
def euler_gamma() -> float:
    """Euler's constant from H_N - log N with Euler-MacLaurin corrections.

    N = 64 so that log N = 6 log 2, and log 2 = sum 1/(k 2^k). Everything is
    summed in exact rationals and rounded once.
    """
    N = 64
    h = sum(Fraction(1, k) for k in range(1, N + 1))
    log2 = sum(Fraction(1, k * 2**k) for k in range(1, 90))
    corr = sum(bernoulli_number(2 * k) / (2 * k * Fraction(N) ** (2 * k)) for k in range(1, 9))
    return float(h - 6 * log2 - Fraction(1, 2 * N) + corr)


assert abs(euler_gamma() - _GAMMA_LITERATURE) < 1e-14, "Euler constant self-check failed"


# ---------------------------------------------------------------------------
# zeta'(s) by Euler-MacLaurin continuation


def _ff_and_dff(a: float, r: int):
    """[a]_r and d/da [a]_r."""
    val = 1.0
    dval = 0.0
    for i in range(r):
        dval = dval * (a - i) + val
        val *= a - i
    return val, dval


def _tlogt_deriv(a: float, p: int, t):
    """(d/dt)^p { t^a log t } = t^{a-p} ([a]_p log t + d/da [a]_p)."""
    ff, dff = _ff_and_dff(a, p)
    return t ** (a - p) * (ff * np.log(t) + dff)


def riemann_zeta_deriv(s: float, n_terms: int, scheme: PanelScheme = PanelScheme()) -> EvalResult:
    """zeta'(s) for real s > 1 - n_terms, s != 1.

    zeta'(s) = -1/(s-1)^2 + sum_{r=1}^{n} B_r/r! g^{(r-1)}(1)
               + (-1)^n/n! int_1^inf B̄_n(t) g^{(n)}(t) dt,   g(t) = t^{-s} log t.
    """
    s = float(s)
    n = int(n_terms)
    if s == 1.0:
        raise PoleError("zeta'(s) has a pole at s = 1")
    if n < 1:
        raise ParameterError("n_terms must be >= 1")
    if not s > 1 - n:
        raise ParameterError(f"continuation with n_terms={n} needs s > {1 - n}")
    a = -s
    head = [-1.0 / (s - 1.0) ** 2]
    for r in range(1, n + 1):
        b = bernoulli_number(r)
        if b:
            head.append(float(b) / math.factorial(r) * _ff_and_dff(a, r - 1)[1])
    hs = compensated_sum(head)

    def deriv(p, t):
        return _tlogt_deriv(a, n + p, t)

    integral = periodic_bernoulli_integral(n, deriv, scheme)
    sign = (-1) ** n / math.factorial(n)
    value = hs.sum + sign * integral.value
    err = abs(sign) * integral.error_bound + hs.rounding_est + EPS * abs(value)
    return EvalResult(float(value), err, n, "euler-maclaurin", True, {"integral": integral.diagnostics})


@lru_cache(maxsize=None)
def _zeta_deriv_neg_result(j: int) -> EvalResult:
    return riemann_zeta_deriv(-j, j + 2)


def zeta_deriv_neg(j: int) -> float:
    """zeta'(-j) by the Euler-MacLaurin continuation with n = j + 2."""
    if j < 0:
        raise DomainError("zeta_deriv_neg needs j >= 0")
    return _zeta_deriv_neg_result(j).value


@dataclass(frozen=True)
class ZetaDerivTable:
    values: tuple
    precision_note: tuple

    def to_json(self) -> dict:
        return {
            "rows": [
                {"j": j, "zeta_deriv": v, "error_bound": e}
                for j, (v, e) in enumerate(zip(self.values, self.precision_note))
            ]
        }


def zeta_deriv_table(j_max: int = 12) -> ZetaDerivTable:
    res = [_zeta_deriv_neg_result(j) for j in range(j_max + 1)]
    return ZetaDerivTable(tuple(r.value for r in res), tuple(r.error_bound for r in res))


def c_constant(j: int, n_for_integral: int | None = None, scheme: PanelScheme = PanelScheme()) -> EvalResult:
    """C_j from its integral definition with g(t) = t^j log t:

    C_j = -sum_{r=1}^{N+1} B_r/r! g^{(r-1)}(1) + (-1)^N/(N+1)! int_1^inf B̄_{N+1} g^{(N+1)} dt.

    The default N = j + 3 keeps this path distinct from ``zeta_deriv_neg``.
    """
    if j < 0:
        raise DomainError("c_constant needs j >= 0")
    N = j + 3 if n_for_integral is None else int(n_for_integral)
    if N < j + 1:
        raise ParameterError(f"integrand decays too slowly: need n_for_integral >= {j + 1}, got {N}")
    a = float(j)
    head = []
    for r in range(1, N + 2):
        b = bernoulli_number(r)
        if b:
            # g^{(r-1)}(1) = d/da [a]_{r-1} since log 1 = 0
            dff = float(_dlogpow_exact(j, r - 1))
            head.append(-float(b) / math.factorial(r) * dff)
    hs = compensated_sum(head)

    def deriv(p, t):
        return _tlogt_deriv(a, N + 1 + p, t)

    integral = periodic_bernoulli_integral(N + 1, deriv, scheme)
    sign = (-1) ** N / math.factorial(N + 1)
    value = hs.sum + sign * integral.value
    err = abs(sign) * integral.error_bound + hs.rounding_est + EPS * abs(value)
    return EvalResult(float(value), err, N, "integral", True)


@lru_cache(maxsize=None)
def _dlogpow_exact(j: int, r: int) -> Fraction:
    """(d/dt)^r {t^j log t} at t=1, exactly."""
    s = Fraction(0)
    for l in range(1, r + 1):
        s += math.comb(r, l) * falling_factorial(j, r - l) * (-1) ** (l - 1) * math.factorial(l - 1)
    return s


# ---------------------------------------------------------------------------
# Hurwitz zeta


def _rising(s: float, k: int):
    """(s)_k = s (s+1) ... (s+k-1) and its s-derivative."""
    val = 1.0
    dval = 0.0
    for i in range(k):
        dval = dval * (s + i) + val
        val *= s + i
    return val, dval


def _em_tail_terms(s: float, a: float, with_deriv: bool, max_terms: int = 30):
    """Corrections sum_j B_2j/(2j)! (s)_{2j-1} a^{1-s-2j} and their s-derivatives,
    truncated where the terms stop shrinking. Returns (value, dvalue, omitted)."""
    vals, dvals = [], []
    la = math.log(a)
    prev = math.inf
    omitted = 0.0
    for j in range(1, max_terms + 1):
        c = float(bernoulli_number(2 * j)) / math.factorial(2 * j)
        r, dr = _rising(s, 2 * j - 1)
        pw = a ** (1.0 - s - 2 * j)
        v = c * r * pw
        dv = c * (dr - r * la) * pw
        mag = max(abs(v), abs(dv) if with_deriv else 0.0)
        if mag > prev:
            omitted = mag
            break
        vals.append(v)
        dvals.append(dv)
        prev = mag
        if mag < 1e-18 * max(1.0, abs(sum(vals))):
            omitted = mag
            break
    else:
        omitted = prev
    return math.fsum(vals), math.fsum(dvals), omitted


def hurwitz_zeta(s: float, z: float, scheme: int = 20) -> EvalResult:
    """zeta(s, z) = sum_{k>=0} (z+k)^{-s}: head of ``scheme`` terms plus Euler-MacLaurin tail."""
    s = float(s)
    z = float(z)
    if z <= 0:
        raise DomainError("hurwitz_zeta needs z > 0")
    if s == 1.0:
        raise PoleError("hurwitz_zeta has a pole at s = 1")
    N = max(1, int(scheme))
    k = np.arange(N, dtype=float)
    head = compensated_sum((z + k) ** (-s))
    a = z + N
    corr, _, omitted = _em_tail_terms(s, a, False)
    tail = [a ** (1.0 - s) / (s - 1.0), 0.5 * a ** (-s), corr]
    value = math.fsum([head.sum] + tail)
    err = omitted + head.rounding_est + EPS * abs(value)
    method = "direct+integral-tail" if s > 1 else "euler-maclaurin"
    return EvalResult(value, err, N, method)


def hurwitz_zeta_deriv(s: float, z: float, scheme: int = 20) -> EvalResult:
    """d/ds zeta(s, z) via the s-differentiated Euler-MacLaurin continuation."""
    s = float(s)
    z = float(z)
    if z <= 0:
        raise DomainError("hurwitz_zeta_deriv needs z > 0")
    if s == 1.0:
        raise PoleError("pole at s = 1")
    N = max(1, int(scheme))
    k = np.arange(N, dtype=float)
    lk = np.log(z + k)
    head = compensated_sum(-((z + k) ** (-s)) * lk)
    a = z + N
    la = math.log(a)
    _, dcorr, omitted = _em_tail_terms(s, a, True)
    tail = [
        -(a ** (1.0 - s)) * (la / (s - 1.0) + 1.0 / (s - 1.0) ** 2),
        -0.5 * a ** (-s) * la,
        dcorr,
    ]
    value = math.fsum([head.sum] + tail)
    err = omitted + head.rounding_est + EPS * abs(value)
    return EvalResult(value, err, N, "euler-maclaurin")


def hurwitz_zeta_deriv0(z: float) -> float:
    """zeta'(0, z), so that exp(result) * sqrt(2 pi) = Gamma(z)."""
    return hurwitz_zeta_deriv(0.0, z).value


# ---------------------------------------------------------------------------
# Polylogarithm


def polylog(r: int, x: float) -> float:
    """Li_r(x) = sum_k x^k / k^r for 0 < x < 1."""
    if r < 1:
        raise DomainError("polylog order must be >= 1")
    if not 0.0 < x < 1.0:
        raise DomainError("polylog argument must lie in (0, 1)")
    if r == 1:
        return -math.log1p(-x)
    return _polylog_series(r, x).value


def _polylog_series(r: int, x: float, hard_cap: int = 10**7) -> EvalResult:
    lx = math.log(x)
    chunk = 4096
    parts = []
    start = 1
    converged = False
    while start <= hard_cap:
        k = np.arange(start, start + chunk, dtype=float)
        t = np.exp(k * lx - r * np.log(k))
        parts.append(math.fsum(t))
        partial = math.fsum(parts)
        if t[-1] < 0.25 * EPS * partial:
            converged = True
            break
        start += chunk
    total = math.fsum(parts)
    return EvalResult(total, 2 * EPS * total, start + chunk - 1, "series", converged)


# ---------------------------------------------------------------------------
# Product representations of zeta'(-j) and zeta'(-j, z)


@lru_cache(maxsize=None)
def _prod_term_laurent(j: int, L: int = 60):
    """Exact coefficients c_l (l >= 2) with
    B_{j+1}(k+1)/(j+1) log(1+1/k) + P_j(k+1) - P_j(k) = sum_{l>=2} c_l k^{-l}."""
    B = bernoulli_poly(j + 1).shift(1) / (j + 1)
    dP = p_poly(j).shift(1) - p_poly(j)
    coeffs = {}
    for d, b in enumerate(B.coeffs):
        for l in range(1, L + d + 1):
            e = d - l
            coeffs[e] = coeffs.get(e, Fraction(0)) + b * Fraction((-1) ** (l - 1), l)
    for d, c in enumerate(dP.coeffs):
        coeffs[d] = coeffs.get(d, Fraction(0)) + c
    bad = {e: c for e, c in coeffs.items() if e > -2 and c != 0}
    if bad:
        raise ArithmeticError(f"product factor does not decay like k^-2: {bad}")
    return tuple(float(coeffs.get(-l, 0)) for l in range(2, L + 1))


def _prod_terms(j: int, x: np.ndarray) -> np.ndarray:
    """log of the product factor at base point x:
    B_{j+1}(x+1)/(j+1) log(1 + 1/x) + P_j(x+1) - P_j(x).

    For x >= 8 the exact expansion in 1/x is used; the direct formula loses
    about x^j ulps to cancellation there.
    """
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    small = x < 8
    if np.any(small):
        xs = x[small]
        B = bernoulli_poly(j + 1)
        P = p_poly(j)
        out[small] = B(xs + 1.0) / (j + 1) * np.log1p(1.0 / xs) + (P(xs + 1.0) - P(xs))
    if np.any(~small):
        inv = 1.0 / x[~small]
        acc = np.zeros_like(inv)
        for cl in reversed(_prod_term_laurent(j)):
            acc = (acc + cl) * inv
        out[~small] = acc * inv
    return out


def _prod_rounding(j: int, x: np.ndarray) -> float:
    """Rounding estimate for the directly evaluated (x < 8) factors."""
    xs = np.asarray(x, dtype=float)
    xs = xs[xs < 8]
    if xs.size == 0:
        return 0.0
    B = bernoulli_poly(j + 1)
    P = p_poly(j)
    mag = np.abs(B(xs + 1.0)) / (j + 1) * np.log1p(1.0 / xs) + np.abs(P(xs + 1.0)) + np.abs(P(xs))
    return float(8 * EPS * mag.sum())


def zeta_deriv_neg_product(j: int, K: int) -> EvalResult:
    """log of the K-term partial product for exp(zeta'(-j)).

    The value is the plain partial sum; the error estimate is |a_K| K, the
    tail of a series whose terms decay like k^-2.
    """
    if j < 0 or K < 1:
        raise DomainError("zeta_deriv_neg_product needs j >= 0, K >= 1")
    k = np.arange(1, K + 1, dtype=float)
    terms = _prod_terms(j, k)
    s = compensated_sum(terms)
    value = float(p_poly(j)(1.0)) + s.sum
    last = abs(terms[-1])
    return EvalResult(
        value,
        1.1 * last * K + s.rounding_est + _prod_rounding(j, k),
        K,
        "product",
        True,
        {"last_term": float(terms[-1]), "term_at_half": float(terms[(K - 1) // 2])},
    )


def hurwitz_zeta_deriv_neg_product(j: int, z: float, K: int) -> EvalResult:
    """log of the partial product (k = 0..K) for exp(zeta'(-j, z))."""
    if j < 0 or K < 1:
        raise DomainError("needs j >= 0, K >= 1")
    if z <= 0:
        raise DomainError("needs z > 0")
    k = np.arange(0, K + 1, dtype=float)
    terms = _prod_terms(j, z + k)
    s = compensated_sum(terms)
    # Base term B_{j+1}(z)/(j+1) log z + P_j(z): the unique choice compatible
    # with zeta'(-j, z) - zeta'(-j, z+1) = -z^j log z and with the z = 1 case.
    head = float(bernoulli_poly(j + 1)(z)) / (j + 1) * math.log(z) + float(p_poly(j)(z))
    value = head + s.sum
    last = abs(terms[-1])
    err = 1.1 * last * (K + z) + s.rounding_est + _prod_rounding(j, z + k) + 8 * EPS * abs(head)
    return EvalResult(value, err, K + 1, "product")
