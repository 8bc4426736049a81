"""The q-side: q-numbers, Jackson's q-gamma, the multiple q-gamma hierarchy
G_n(z;q) and its Euler-MacLaurin expansion, plus classical-limit sweeps.

Argument conventions. ``log_qgamma_product(z)`` and every ``log_qgn_*(n, z)``
return log G(z+1;q) (shifted argument, matching the classical
``log_gn(n, z) = log G_n(z+1)``). ``log_qgamma_moak(z)`` is the exception: it
returns log Γ(z;q) at the unshifted argument, so
``log_qgamma_moak(z + 1) == log_qgamma_product(z)``.

Throughout 0 < q < 1 and q^w means exp(w log q).
"""

from __future__ import annotations

import cmath
import csv
import io
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import List, Sequence, Tuple

import numpy as np

from .errors import DomainError, ParameterError, PoleError
from .exact import Poly, bernoulli_number, binomial_poly, g_polynomials
from .multigamma import log_gn
from .numerics import EPS, EvalResult, PanelScheme, compensated_sum, periodic_bernoulli_integral
from .zeta import polylog

__all__ = [
    "QContext",
    "MPolyTable",
    "mpoly_table",
    "q_number",
    "m_poly",
    "m_tilde_poly",
    "dlog_one_minus_qpow",
    "log_qgamma_product",
    "log_qgamma_moak",
    "c1_q",
    "log_qgn_product",
    "t_r",
    "c_j_q",
    "f_nr_q",
    "em_remainder_q",
    "log_qgn_euler_maclaurin",
    "log_qgn",
    "SweepTable",
    "classical_limit_sweep",
]

PRODUCT_HARD_CAP = 10**7
# Panels for the Bernoulli-kernel integrals; the rest of [K, inf) is done by parts.
PANEL_CAP = 400


@dataclass(frozen=True)
class QContext:
    """A base q in (0, 1) with its cached logarithm and a series tolerance."""

    q: float
    series_tol: float = 1e-17
    log_q: float = field(init=False, repr=False)

    def __post_init__(self):
        q = float(self.q)
        if not 0.0 < q < 1.0:
            raise DomainError(f"q must lie strictly between 0 and 1 (got {self.q!r})")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "log_q", math.log(q))


def _ctx(ctx) -> QContext:
    return ctx if isinstance(ctx, QContext) else QContext(float(ctx))


def _as_number(z):
    if isinstance(z, (complex, np.complexfloating)):
        z = complex(z)
        return z.real if z.imag == 0.0 else z
    return float(z)


def _one_minus_qpow(w, L):
    """1 - q^w without cancellation for small |w log q|."""
    if isinstance(w, np.ndarray):
        return -np.expm1(w * L)
    if isinstance(w, complex):
        return complex(-np.expm1(w * L))
    return -math.expm1(w * L)


def _log(x):
    if isinstance(x, complex) or (not isinstance(x, np.ndarray) and x < 0):
        return cmath.log(x)
    if isinstance(x, np.ndarray):
        return np.log(x)
    return math.log(x)


def q_number(z, ctx) -> complex:
    """[z]_q = (1 - q^z)/(1 - q)."""
    ctx = _ctx(ctx)
    z = _as_number(z)
    return _one_minus_qpow(z, ctx.log_q) / _one_minus_qpow(1.0, ctx.log_q)


# ---------------------------------------------------------------------------
# The polynomials M_r and M̃_n


@dataclass(frozen=True)
class MPolyTable:
    """M_1..M_r and M̃_1..M̃_r with exact rational coefficients.

    M_r gives the derivatives of log(1 - q^t):
    (d/dt)^r log(1 - q^t) = -(log q/(1 - q^t))^r q^t M_r(q^t).
    M̃_n = x M_n for n >= 2 with M̃_1 = 1; these carry the Moak-type series.
    """

    m_polys: Tuple[Poly, ...]
    m_tilde_polys: Tuple[Poly, ...]


_X = Poly([0, 1])
_X_MINUS_X2 = Poly([0, 1, -1])


@lru_cache(maxsize=None)
def mpoly_table(r_max: int) -> MPolyTable:
    if r_max < 1:
        raise ParameterError("table size must be >= 1")
    ms = [Poly([1])]
    mt = [Poly([1])]
    for r in range(1, r_max):
        m = ms[-1]
        ms.append(_X_MINUS_X2 * m.deriv() + Poly([1, r - 1]) * m)
        t = mt[-1]
        mt.append(_X_MINUS_X2 * t.deriv() + Poly([0, r]) * t)
    return MPolyTable(tuple(ms), tuple(mt))


def _table_for(r: int) -> MPolyTable:
    size = 16
    while size < r:
        size *= 2
    return mpoly_table(size)


def m_poly(r: int) -> Poly:
    """M_r: M_1 = 1, M_{r+1} = (x - x^2) M_r' + ((r-1)x + 1) M_r; M_r(1) = (r-1)!."""
    if r < 1:
        raise ParameterError("m_poly needs r >= 1")
    return _table_for(r).m_polys[r - 1]


def m_tilde_poly(n: int) -> Poly:
    """M̃_n: M̃_1 = 1, M̃_{n+1} = (x - x^2) M̃_n' + n x M̃_n."""
    if n < 1:
        raise ParameterError("m_tilde_poly needs n >= 1")
    return _table_for(n).m_tilde_polys[n - 1]


def dlog_one_minus_qpow(r: int, t, L: float):
    """(d/dt)^r log(1 - q^t) with L = log q, for scalar or array t."""
    one_minus = _one_minus_qpow(t, L)
    if r == 0:
        return _log(one_minus)
    x = np.exp(t * L) if isinstance(t, np.ndarray) else (cmath.exp(t * L) if isinstance(t, complex) else math.exp(t * L))
    return -((L / one_minus) ** r) * x * m_poly(r)(x)


# ---------------------------------------------------------------------------
# Jackson q-gamma and the multiple q-gamma product


def _jackson_terms(z, L: float, k: np.ndarray) -> np.ndarray:
    """log((1 - q^{z+k})/(1 - q^k)) = log1p(q^k (1 - q^z)/(1 - q^k))."""
    qk = np.exp(k * L)
    return np.log1p(qk * _one_minus_qpow(z, L) / -np.expm1(k * L))


def _check_q_pole(z, n: int = 1) -> None:
    if not isinstance(z, complex) and z <= -1 and float(z).is_integer():
        raise PoleError(f"log G_{n}(z+1;q) has a pole at z = {z:g}")


def _product_sum(term_fn, K, ctx: QContext, tail_fn):
    """Sum term_fn(k) for k = 1..K (or adaptively) in numpy chunks.

    term_fn returns (terms, mags) where mags bounds the size of the pieces
    each term was assembled from; it feeds the per-term rounding estimate.
    """
    parts = []
    rounding = 0.0
    magnitude = 0.0
    start = 1
    chunk = 4096
    converged = True
    total = 0.0
    while True:
        stop = start + chunk if K is None else min(start + chunk, K + 1)
        k = np.arange(start, stop, dtype=float)
        terms, mags = term_fn(k)
        s = compensated_sum(terms)
        parts.append(s.sum)
        rounding += s.rounding_est
        magnitude += float(mags.sum())
        total = sum(parts)
        last_k = stop - 1
        tail = tail_fn(last_k, terms[-1])
        if K is not None and last_k >= K:
            break
        if K is None:
            if tail <= ctx.series_tol * max(1.0, abs(total)):
                break
            if last_k >= PRODUCT_HARD_CAP:
                converged = False
                break
        start = stop
        chunk = min(chunk * 2, 1 << 20)
    return total, tail, rounding + 8 * EPS * magnitude, last_k, converged


def _geometric_tail(q: float, power: int):
    """Bound on sum_{k>K} |t_k| when |t_k| ~ k^power q^k, from the last term."""

    def tail(K, last):
        rho = q * ((K + 1.0) / K) ** power
        mag = abs(last)
        if rho >= 1.0:
            return math.inf
        return 2.0 * mag * rho / (1.0 - rho)

    return tail


def log_qgamma_product(z, ctx, K: int | None = None) -> EvalResult:
    """log Γ(z+1;q) from Jackson's product (K factors, or adaptive when None).

    log Γ(z+1;q) = -z log(1-q) - sum_k log((1 - q^{z+k})/(1 - q^k)).
    """
    return log_qgn_product(1, z, ctx, K)


def log_qgn_product(n: int, z, ctx, K: int | None = None) -> EvalResult:
    """log G_n(z+1;q) from the infinite product.

    log G_n(z+1;q) = -binom(z,n) log(1-q)
        - sum_k [binom(-k,n-1) log(1 - q^{z+k}) - binom(z-k,n-1) log(1 - q^k)],
    grouped as binom(-k,n-1) log((1-q^{z+k})/(1-q^k)) - g_n(z,k) log(1-q^k) with
    g_n(z,u) = binom(z-u,n-1) - binom(-u,n-1). The error bound is a geometric
    tail bound taken from the last term.
    """
    if n < 1:
        raise DomainError("order n must be >= 1")
    if K is not None and K < 1:
        raise ParameterError("K must be >= 1")
    ctx = _ctx(ctx)
    z = _as_number(z)
    _check_q_pole(z, n)
    L = ctx.log_q
    if not isinstance(z, complex) and z <= -1:
        z = complex(z)
    bneg = binomial_poly(n - 1).compose(Poly([0, -1]))
    G = g_polynomials(n)
    gz = [float(c.real) if not isinstance(z, complex) else c for c in (g(z) for g in G)]
    b_is_const = n == 1

    def term_fn(k):
        t = _jackson_terms(z, L, k)
        if b_is_const:
            return t, np.abs(t)
        bk = bneg(k)
        # g_n(z,k) = sum_j G_{n,j}(z) k^j - binom(-k,n-1)
        gk = np.zeros_like(k, dtype=complex if isinstance(z, complex) else float)
        for j in range(n - 1, -1, -1):
            gk = gk * k + gz[j]
        lk = np.log1p(-np.exp(k * L))
        mags = np.abs(bk) * (np.abs(t) + np.abs(lk))
        t = bk * t - (gk - bk) * lk
        return t, mags

    s, tail, rounding, used, converged = _product_sum(term_fn, K, ctx, _geometric_tail(ctx.q, n - 1))
    head = -binomial_poly(n)(z) * math.log1p(-ctx.q)
    value = head - s
    if isinstance(value, complex) and value.imag == 0.0 and not isinstance(z, complex):
        value = value.real
    err = tail + rounding + 4 * EPS * (abs(head) + abs(s))
    method = "jackson-product" if n == 1 else "q-product"
    return EvalResult(value, float(err), int(used), method, converged, {"tail_bound": tail})


# ---------------------------------------------------------------------------
# T_r: the integral of (xi^r / r!) q^xi log q / (1 - q^xi) from 1 to w


def _polylog_any(s: int, x):
    if not isinstance(x, complex):
        return polylog(s, x)
    if s == 1:
        return -cmath.log(1 - x)
    lx = cmath.log(x)
    parts = []
    start = 1
    while start <= PRODUCT_HARD_CAP:
        k = np.arange(start, start + 4096, dtype=float)
        t = np.exp(k * lx - s * np.log(k))
        parts.append(complex(t.sum()))
        if abs(t[-1]) < 0.25 * EPS * abs(sum(parts)):
            break
        start += 4096
    return sum(parts)


def _t_r_closed(r: int, w, L: float):
    """Closed form by repeated integration by parts (polylogarithms)."""
    xw = cmath.exp(w * L) if isinstance(w, complex) else math.exp(w * L)
    q = math.exp(L)
    terms = []
    for s in range(r + 1):
        c = (-1) ** s / (math.factorial(r - s) * L**s)
        terms.append(c * (w ** (r - s) * _polylog_any(s + 1, xw) - polylog(s + 1, q)))
    mag = max(abs(t) for t in terms)
    return sum(terms), mag


def _t_r_bernoulli(r: int, w, L: float):
    """Series from u/(e^u - 1) = sum B_k u^k / k!, valid for |L xi| < 2 pi on the path."""
    total = 0.0
    mag = 0.0
    a = -L
    k = 0
    while True:
        b = bernoulli_number(k)
        if b:
            p = r + k
            term = -float(b) * a**k / math.factorial(k) * (w**p - 1) / p / math.factorial(r)
            total += term
            mag = max(mag, abs(term))
            if k > 2 and abs(term) < 0.1 * EPS * max(abs(total), 1e-300):
                break
        k += 1
        if k > 400:
            break
    return total, mag


def _t_r_value(r: int, w, L: float):
    if abs(L) * max(1.0, abs(w)) <= 1.0:
        val, mag = _t_r_bernoulli(r, w, L)
        return val, 8 * EPS * mag, "bernoulli-series"
    val, mag = _t_r_closed(r, w, L)
    return val, 8 * EPS * mag * (r + 1), "polylog"


def t_r(r: int, z, ctx) -> float:
    """T_r(z) = int_1^z (xi^r / r!) q^xi log q / (1 - q^xi) d xi.

    Uses the polylogarithm closed form
    sum_{s=0}^r (-1)^s / ((r-s)! log^s q) (z^{r-s} Li_{s+1}(q^z) - Li_{s+1}(q)).
    When |z log q| <= 1 that form cancels badly; there the Bernoulli-number
    expansion of u/(e^u - 1) is integrated term by term instead.
    """
    if r < 1:
        raise ParameterError("t_r needs r >= 1")
    ctx = _ctx(ctx)
    z = _as_number(z)
    if complex(z).real <= 0:
        raise DomainError("t_r needs Re z > 0")
    return _t_r_value(r, z, ctx.log_q)[0]


# ---------------------------------------------------------------------------
# Constants C_1(q), C_j(q)


def _panels_for(L: float, cap: int = PANEL_CAP) -> int:
    cutoff = int(math.ceil(math.log(1e-18) / L))
    return max(8, min(cutoff, cap))


def _leibniz_tj_log(j: int, p: int, t, L: float, log_1mq: float):
    """(d/dt)^p { t^j (log(1 - q^t) - log(1 - q)) }."""
    out = 0.0
    for i in range(0, min(p, j) + 1):
        ff = math.perm(j, i)
        h = dlog_one_minus_qpow(p - i, t, L)
        if p - i == 0:
            h = h - log_1mq
        out = out + math.comb(p, i) * ff * t ** (j - i) * h
    return out


@lru_cache(maxsize=None)
def _c_j_q_cached(j: int, q: float, order: int, k_max: int) -> EvalResult:
    L = math.log(q)
    log_1mq = math.log1p(-q)
    one = np.array([1.0])
    head = []
    for r in range(1, order + 1):
        b = bernoulli_number(r)
        if b:
            head.append(-float(b) / math.factorial(r) * float(_leibniz_tj_log(j, r - 1, one, L, log_1mq)[0]))

    def deriv(p, t):
        return _leibniz_tj_log(j, order + p, t, L, log_1mq)

    res = periodic_bernoulli_integral(order, deriv, PanelScheme(k_max=k_max))
    c = (-1) ** (order - 1) / math.factorial(order)
    h = compensated_sum(head)
    value = h.sum + c * res.value
    err = h.rounding_est + abs(c) * res.error_bound + 4 * EPS * sum(abs(x) for x in head)
    return EvalResult(float(value), float(err), k_max, "euler-maclaurin-constant", True, res.diagnostics)


def c_j_q(j: int, ctx, n_terms: int | None = None, order: int | None = None) -> EvalResult:
    """C_j(q), the regularised constant in sum_k k^j log(1 - q^k).

    C_j(q) = -sum_{r=1}^{m} B_r/r! f^{(r-1)}(1)
             + (-1)^{m-1}/m! int_1^inf B̄_m(t) f^{(m)}(t) dt
    with f(t) = t^j log((1 - q^t)/(1 - q)) and any m > j (default j + 2); the
    value does not depend on m. ``n_terms`` is the number of unit panels before
    the integration-by-parts tail takes over.
    """
    if j < 0:
        raise ParameterError("j must be >= 0")
    ctx = _ctx(ctx)
    order = j + 2 if order is None else int(order)
    if order <= j:
        raise ParameterError("C_j(q) needs an Euler-MacLaurin order m > j")
    k_max = _panels_for(ctx.log_q) if n_terms is None else int(n_terms)
    return _c_j_q_cached(j, ctx.q, order, k_max)


def c1_q(ctx) -> EvalResult:
    """C_1(q) of the Moak-type representation.

    C_1(q) = -(1/12) log q - (1/12) log q/(q - 1)
             + int_0^inf (B̄_2(t)/2) (log q/(q^{t+1} - 1))^2 q^{t+1} dt.
    The integrand is -(1/2) (d/dt)^2 log(1 - q^t) at t + 1.
    """
    ctx = _ctx(ctx)
    L = ctx.log_q

    def deriv(p, t):
        return -0.5 * dlog_one_minus_qpow(2 + p, t, L)

    res = periodic_bernoulli_integral(2, deriv, PanelScheme(k_max=_panels_for(L)), a=1)
    head = -L / 12.0 - L / (12.0 * (ctx.q - 1.0))
    return EvalResult(head + res.value, res.error_bound + 4 * EPS * abs(head), res.terms_used, "panel", True)


# ---------------------------------------------------------------------------
# Moak-type representation of log Γ(z;q)


def _moak_remainder(z: float, m: int, L: float) -> EvalResult:
    """R_{2m}(z;q) = int_0^inf B̄_{2m}(t)/(2m)! (log q/(q^{t+z}-1))^{2m} M̃_{2m}(q^{t+z}) dt."""
    mt = m_tilde_poly(2 * m)
    f = math.factorial(2 * m)

    def deriv(p, t):
        s = t + z
        if p == 0:
            x = np.exp(s * L)
            return (L / np.expm1(s * L)) ** (2 * m) * mt(x) / f
        return -dlog_one_minus_qpow(2 * m + p, s, L) / f

    return periodic_bernoulli_integral(2 * m, deriv, PanelScheme(k_max=_panels_for(L)), a=0)


def log_qgamma_moak(z, ctx, m: int = 3) -> EvalResult:
    """log Γ(z;q) (unshifted argument) from the Moak-type representation.

    (z - 1/2) log [z]_q + T_1(z) + C_1(q) + (1/12) log q
    + sum_{k=1}^m B_{2k}/(2k)! (log q/(q^z - 1))^{2k-1} M̃_{2k-1}(q^z) - R_{2m}(z;q).

    The remainder integral R_{2m} is subtracted; adding it doubles the
    truncation error instead of cancelling it.
    """
    if m < 1:
        raise ParameterError("m must be >= 1")
    ctx = _ctx(ctx)
    z = _as_number(z)
    if isinstance(z, complex) or z <= 0:
        raise DomainError("the Moak-type representation needs real z > 0")
    L = ctx.log_q
    xz = math.exp(z * L)
    log_qn = math.log(q_number(z, ctx))
    t1, t1_err, _ = _t_r_value(1, z, L)
    c1 = c1_q(ctx)
    parts = [(z - 0.5) * log_qn, t1, c1.value, L / 12.0]
    for k in range(1, m + 1):
        b = float(bernoulli_number(2 * k)) / math.factorial(2 * k)
        parts.append(b * (L / math.expm1(z * L)) ** (2 * k - 1) * float(m_tilde_poly(2 * k - 1)(xz)))
    rem = _moak_remainder(z, m, L)
    parts.append(-rem.value)
    s = compensated_sum(parts)
    err = rem.error_bound + c1.error_bound + t1_err + s.rounding_est + 4 * EPS * sum(abs(p) for p in parts)
    return EvalResult(float(s.sum), float(err), m, "moak", True, {"remainder": float(rem.value), "c1": c1.value})


# ---------------------------------------------------------------------------
# Euler-MacLaurin expansion of log G_n(z+1;q)


@lru_cache(maxsize=None)
def _binom_neg_t_derivs(n: int) -> Tuple[Poly, ...]:
    p = binomial_poly(n - 1).compose(Poly([0, -1]))
    return tuple(p.deriv(i) for i in range(n))


def _em_q_integrand(n: int, z, p: int, t, L: float, log_anchor):
    """(d/dt)^p { binom(-t,n-1) (log(1 - q^{z+t}) - log(1 - q^{z+1})) }."""
    D = _binom_neg_t_derivs(n)
    out = 0.0
    for i in range(0, min(p, n - 1) + 1):
        h = dlog_one_minus_qpow(p - i, z + t, L)
        if p - i == 0:
            h = h - log_anchor
        out = out + math.comb(p, i) * D[i](t) * h
    return out


def f_nr_q(n: int, r: int, z, ctx):
    """F_{n,r-1}(z;q) = (d/dt)^{r-1} { binom(-t,n-1) log((1-q^{z+t})/(1-q^{z+1})) } at t = 1."""
    if r < 1:
        raise ParameterError("r must be >= 1")
    ctx = _ctx(ctx)
    z = _as_number(z)
    L = ctx.log_q
    anchor = dlog_one_minus_qpow(0, z + 1, L)
    return _em_q_integrand(n, z, r - 1, 1.0, L, anchor)


def em_remainder_q(n: int, z, m: int, ctx, n_terms: int | None = None) -> EvalResult:
    """R_{n,m}(z;q) = (-1)^{m-1}/m! int_1^inf B̄_m(t) (d/dt)^m {binom(-t,n-1) log((1-q^{z+t})/(1-q^{z+1}))} dt."""
    ctx = _ctx(ctx)
    z = _as_number(z)
    L = ctx.log_q
    zz = z

    def deriv(p, t):
        return _em_q_integrand(n, zz, m + p, t, L, 0.0)

    k_max = _panels_for(L) if n_terms is None else int(n_terms)
    res = periodic_bernoulli_integral(m, deriv, PanelScheme(k_max=k_max))
    c = (-1) ** (m - 1) / math.factorial(m)
    return EvalResult(c * res.value, abs(c) * res.error_bound, res.terms_used, "panel", True, res.diagnostics)


@lru_cache(maxsize=None)
def _em_q_polys(n: int):
    """binom(z+1,n) + sum_{r<=n} B_r/r! D_r(z) and D_r(z) = (-d/dz)^{r-1} binom(z,n-1)."""
    b = binomial_poly(n - 1)
    D = [(-1) ** (r - 1) * b.deriv(r - 1) for r in range(1, n + 1)]
    A = binomial_poly(n).compose(Poly([1, 1]))
    for r in range(1, n + 1):
        A = A + D[r - 1] * (bernoulli_number(r) / math.factorial(r))
    return A, tuple(D)


def log_qgn_euler_maclaurin(n: int, z, ctx, m: int | None = None) -> EvalResult:
    """log G_n(z+1;q) from the Euler-MacLaurin expansion with remainder R_{n,m}(z;q).

    A(z) log [z+1]_q + sum_{r=1}^n D_r(z) T_r(z+1) + sum_j G_{n,j}(z) C_j(q)
    + sum_{r=1}^m B_r/r! F_{n,r-1}(z;q) - R_{n,m}(z;q), where
    D_r(z) = (-d/dz)^{r-1} binom(z,n-1) and A(z) = binom(z+1,n) + sum_r B_r/r! D_r(z).
    Needs Re z > -1 and m > n (default m = n + 2).
    """
    if n < 1:
        raise DomainError("order n must be >= 1")
    m = n + 2 if m is None else int(m)
    if m <= n:
        raise ParameterError(f"Euler-MacLaurin remainder needs m > n (got m={m}, n={n})")
    ctx = _ctx(ctx)
    z = _as_number(z)
    if complex(z).real <= -1:
        raise DomainError("Euler-MacLaurin expansion needs Re z > -1")
    L = ctx.log_q
    is_real = not isinstance(z, complex)
    A, D = _em_q_polys(n)
    w = z + 1
    lq = _log(q_number(w, ctx))
    parts = [A(z) * lq]
    errs = [4 * EPS * abs(A(z) * lq)]
    for r in range(1, n + 1):
        tv, te, _ = _t_r_value(r, w, L)
        d = D[r - 1](z)
        parts.append(d * tv)
        errs.append(abs(d) * te)
    for j, g in enumerate(g_polynomials(n)):
        gz = g(z)
        if gz != 0:
            c = c_j_q(j, ctx)
            parts.append(gz * c.value)
            errs.append(abs(gz) * c.error_bound)
    for r in range(1, m + 1):
        b = bernoulli_number(r)
        if b:
            parts.append(float(b) / math.factorial(r) * f_nr_q(n, r, z, ctx))
    rem = em_remainder_q(n, z, m, ctx)
    parts.append(-rem.value)
    errs.append(rem.error_bound)
    s = compensated_sum(np.array(parts, dtype=complex if not is_real else float))
    value = s.sum
    if is_real:
        value = float(np.real(value))
    err = sum(errs) + s.rounding_est + 4 * EPS * sum(abs(p) for p in parts)
    return EvalResult(value, float(err), m, "q-euler-maclaurin", True, {"remainder": complex(rem.value)})


def log_qgn(n: int, z, ctx, method: str = "product", **kw) -> EvalResult:
    """log G_n(z+1;q) by the product ("product") or Euler-MacLaurin ("em"); n = 0 gives log [z+1]_q."""
    ctx = _ctx(ctx)
    if n == 0:
        z = _as_number(z)
        v = _log(q_number(z + 1, ctx))
        return EvalResult(v, 4 * EPS * abs(v), 0, "q-number")
    method = method.lower().replace("_", "-")
    if method in ("product", "q-product"):
        return log_qgn_product(n, z, ctx, kw.get("K"))
    if method in ("em", "euler-maclaurin"):
        return log_qgn_euler_maclaurin(n, z, ctx, kw.get("m"))
    raise ParameterError(f"unknown q-method {method!r}")


# ---------------------------------------------------------------------------
# Classical limit


@dataclass
class SweepTable:
    """Rows (q, delta, terms_used, method) of a classical-limit sweep."""

    n: int
    z: complex
    rows: List[dict]

    @property
    def deltas(self) -> List[float]:
        return [r["delta"] for r in self.rows]

    def to_json(self) -> dict:
        zj = [self.z.real, self.z.imag] if isinstance(self.z, complex) else self.z
        return {"n": self.n, "z": zj, "rows": [dict(r) for r in self.rows]}

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=["q", "delta", "error_bound", "terms_used", "method"], lineterminator="\n")
        w.writeheader()
        for r in self.rows:
            w.writerow({k: r[k] for k in w.fieldnames})
        return buf.getvalue()


def classical_limit_sweep(n: int, z, q_list: Sequence[float]) -> SweepTable:
    """Delta(q) = |log G_n(z+1;q) - log G_n(z+1)| for each q, using the q Euler-MacLaurin
    expansion with m = n + 2 against the classical value."""
    z = _as_number(z)
    classical = log_gn(n, z)
    rows = []
    for q in q_list:
        ctx = QContext(float(q))
        r = log_qgn_euler_maclaurin(n, z, ctx, n + 2)
        rows.append(
            {
                "q": ctx.q,
                "delta": float(abs(r.value - classical.value)),
                "error_bound": float(r.error_bound + classical.error_bound),
                "terms_used": r.terms_used,
                "method": r.method,
            }
        )
    return SweepTable(n, z, rows)
