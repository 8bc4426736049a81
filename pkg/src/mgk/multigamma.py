"""Numeric evaluation of log G_n(z+1) for the Vignéras hierarchy.

Three independent routes are provided (Weierstrass product, higher Stirling
asymptotics, Euler-MacLaurin with an explicit remainder integral) plus an
automatic dispatcher that uses the functional equation to reach the region
where one of them applies.
"""

from __future__ import annotations

import cmath
import math
import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Sequence, Union

import numpy as np

from .errors import DomainError, ParameterError, PoleError
from .exact import (
    binomial_poly,
    f_n_symbolic,
    f_nr_numerator,
    g_polynomials,
    higher_stirling_coeffs,
    Poly,
    stirling_first,
)
from .numerics import EPS, EvalResult, PanelScheme, compensated_sum, periodic_bernoulli_integral
from .zeta import euler_gamma, hurwitz_zeta, zeta_deriv_neg, _zeta_deriv_neg_result

__all__ = [
    "WEIERSTRASS",
    "STIRLING",
    "EULER_MACLAURIN",
    "AUTO",
    "default_product_length",
    "StirlingTruncation",
    "log_gn_weierstrass",
    "log_gn_higher_stirling",
    "log_gn_euler_maclaurin",
    "f_nr",
    "log_gn",
    "log_gn_method",
    "kinkelin_constant",
    "vigneras_property_check",
    "cross_method_residuals",
    "em_remainder",
]

WEIERSTRASS = "weierstrass"
STIRLING = "stirling"
EULER_MACLAURIN = "euler-maclaurin"
AUTO = "auto"

POLE_DISTANCE = 1e-8
SECTOR_DELTA = 0.1


def default_product_length() -> int:
    """Product length K; the MGK_DEFAULT_K environment variable overrides 10**6."""
    v = os.environ.get("MGK_DEFAULT_K")
    if v:
        try:
            k = int(float(v))
        except ValueError:
            raise ParameterError(f"MGK_DEFAULT_K is not an integer: {v!r}")
        if k < 1:
            raise ParameterError("MGK_DEFAULT_K must be >= 1")
        return k
    return 10**6


def _as_number(z):
    if isinstance(z, complex):
        return z if z.imag != 0.0 else z.real
    return float(z)


def _check_pole(z) -> None:
    zc = complex(z)
    if zc.real < 0 and abs(zc.imag) < POLE_DISTANCE:
        nearest = round(zc.real)
        if nearest <= -1 and abs(zc - nearest) < POLE_DISTANCE:
            raise PoleError(f"z = {z} is within {POLE_DISTANCE} of the pole/zero at {nearest}")


def _zeta_d(r: int) -> float:
    return zeta_deriv_neg(r)


def _zeta_d_err(r: int) -> float:
    return _zeta_deriv_neg_result(r).error_bound


def _const_error(combo, z) -> float:
    err = abs(combo.gamma(z)) * 4 * EPS
    for r, p in combo.zeta_d.items():
        err += abs(p(z)) * (_zeta_d_err(r) + EPS * abs(_zeta_d(r)))
    return err


def _poly_mag(p: Poly, z) -> float:
    a = abs(z)
    return sum(abs(float(c)) * a**i for i, c in enumerate(p.coeffs))


def _finish(value, n_real: bool):
    if n_real and isinstance(value, complex) and value.imag == 0.0:
        return value.real
    return value


# ---------------------------------------------------------------------------
# Weierstrass product


def _log1p_remainder(x: np.ndarray, L: int) -> np.ndarray:
    """log(1+x) - sum_{l=1}^{L} (-1)^{l-1} x^l / l without cancellation."""
    out = np.empty_like(x)
    ax = np.abs(x)
    small = ax <= 0.5
    if np.any(~small):
        xb = x[~small]
        direct = np.log1p(xb) if not np.iscomplexobj(xb) else np.log(1.0 + xb)
        poly = np.zeros_like(xb)
        for l in range(L, 0, -1):
            poly = (poly + (-1) ** (l - 1) / l) * xb
        out[~small] = direct - poly
    if np.any(small):
        xs = x[small]
        amax = float(np.max(np.abs(xs)))
        if amax == 0.0:
            out[small] = 0.0
        else:
            n_terms = max(1, int(math.ceil(math.log(1e-18) / math.log(amax))) + 1)
            acc = np.zeros_like(xs)
            for l in range(L + n_terms, L, -1):
                acc = (acc + (-1) ** (l - 1) / l) * xs
            # acc = sum_{l=L+1}^{..} c_l x^{l-L}; restore the x^L factor
            out[small] = acc * xs**L
    return out


def _weierstrass_terms(n: int, z, k: np.ndarray) -> np.ndarray:
    """a_k = -binom(-k, n-1) log(1+z/k) + Phi_n(z, k), computed as
    -(1/(n-1)!) sum_r (-1)^r S_{n-1,r} k^r R_{r+1}(z/k)."""
    x = z / k
    acc = np.zeros_like(x)
    f = math.factorial(n - 1)
    for r in range(n):
        s = stirling_first(n - 1, r)
        if s == 0:
            continue
        acc = acc + ((-1) ** r * s) * k**r * _log1p_remainder(x, r + 1)
    return -acc / f


def _weierstrass_tail(n: int, z, K: int):
    """sum_{k>K} a_k via a_k = -(1/(n-1)!) sum_r (-1)^r S k^r sum_{l>=r+2} (-1)^{l-1} (z/k)^l / l
    and sum_{k>K} k^{r-l} = zeta(l-r, K+1). Returns (value, omitted estimate)."""
    f = math.factorial(n - 1)
    total = []
    omitted = 0.0
    for r in range(n):
        s = stirling_first(n - 1, r)
        if s == 0:
            continue
        pref = -((-1) ** r) * s / f
        prev = math.inf
        for l in range(r + 2, r + 80):
            hz = hurwitz_zeta(l - r, K + 1).value
            term = pref * (-1) ** (l - 1) * z**l / l * hz
            mag = abs(term)
            total.append(term)
            if mag < 1e-22 or mag > prev:
                omitted += mag
                break
            prev = mag
    return sum(total), omitted


def log_gn_weierstrass(n: int, z, K: int | None = None, tail_correction: bool = True) -> EvalResult:
    """log G_n(z+1) from the order-n Weierstrass product truncated at K factors.

    Each factor contributes its principal-branch logarithm. The sum of the
    omitted factors is added back from their exact power-series expansion
    (Hurwitz zeta values) unless ``tail_correction`` is False; the plain tail
    size 1.1 |a_K| K is kept in the diagnostics.
    """
    if n < 1:
        raise DomainError("order n must be >= 1")
    K = default_product_length() if K is None else int(K)
    if K < 1:
        raise ParameterError("K must be >= 1")
    z = _as_number(z)
    _check_pole(z)
    is_real = not isinstance(z, complex)
    Fn = f_n_symbolic(n)
    head = Fn.evaluate(z, euler_gamma(), _zeta_d)
    head_err = _const_error(Fn, z) + 8 * EPS * (_poly_mag(Fn.one, z) + _poly_mag(Fn.gamma, z))

    parts = []
    round_est = 0.0
    last = 0.0
    start, size = 1, 1024
    while start <= K:
        k = np.arange(start, min(K, start + size - 1) + 1, dtype=float)
        start += size
        size = min(size * 4, 1 << 18)
        a = _weierstrass_terms(n, z if (is_real and z > -1) else complex(z), k)
        sres = compensated_sum(a)
        parts.append(sres.sum)
        round_est += sres.rounding_est + 16 * EPS * float(np.abs(a).sum())
        last = abs(a[-1])
    total = sum(parts) if any(isinstance(p, complex) for p in parts) else math.fsum(parts)
    plain_tail = 1.1 * last * K
    if tail_correction and abs(z) < K:
        tail, omitted = _weierstrass_tail(n, z, K)
        err = omitted
    else:
        tail, err = 0.0, plain_tail
    value = _finish(head + total + tail, is_real)
    return EvalResult(
        value,
        float(err + round_est + head_err),
        K,
        WEIERSTRASS,
        True,
        {"plain_tail_estimate": plain_tail, "tail_correction": complex(tail), "last_term": last},
    )


# ---------------------------------------------------------------------------
# Higher Stirling formula


@dataclass(frozen=True)
class StirlingTruncation:
    r_stop: int
    est_error: float


def _in_sector(z, delta: float) -> bool:
    zc = complex(z)
    if zc == 0:
        return True
    return abs(cmath.phase(zc)) < math.pi - delta


def log_gn_higher_stirling(
    n: int,
    z,
    trunc: Union[StirlingTruncation, int, str] = AUTO,
    r_max: int = 40,
    delta: float = SECTOR_DELTA,
) -> EvalResult:
    """log G_n(z+1) from the large-|z| expansion.

    AUTO truncation sums the series terms up to (not including) the one of
    smallest magnitude and reports that term as the error estimate.
    """
    if n < 1:
        raise DomainError("order n must be >= 1")
    z = _as_number(z)
    if not _in_sector(z, delta):
        raise DomainError(f"z = {z} lies outside the sector |arg z| < pi - {delta}")
    if isinstance(trunc, StirlingTruncation):
        r_fixed = trunc.r_stop
    elif trunc == AUTO:
        r_fixed = None
    else:
        r_fixed = int(trunc)
    if r_fixed is not None:
        if r_fixed < 1:
            raise ParameterError("r_stop must be >= 1")
        r_max = max(r_max, r_fixed + 1)
    b = higher_stirling_coeffs(n, r_max)
    is_real = not isinstance(z, complex)
    lz = math.log1p(z) if is_real and z > -1 else cmath.log(1 + z)
    base = b.log_coeff(z) * lz + b.poly_part(z)
    base = base + b.const_part.evaluate(z, euler_gamma(), _zeta_d)
    round_err = 8 * EPS * (
        _poly_mag(b.log_coeff, z) * abs(lz) + _poly_mag(b.poly_part, z) + _poly_mag(b.const_part.one, z)
    ) + _const_error(b.const_part, z)

    zp1 = 1 + z
    terms = []
    for r, num, w in b.series_terms:
        terms.append(float(w) * num(z) / zp1 ** (2 * r - 1))
    mags = [abs(t) for t in terms]
    if r_fixed is None:
        i_min = int(np.argmin(mags))
        r_stop = max(1, i_min)
    else:
        r_stop = r_fixed
    est = mags[r_stop] if r_stop < len(mags) else mags[-1]
    series = sum(terms[:r_stop])
    value = _finish(base + series, is_real)
    return EvalResult(
        value,
        float(est + round_err),
        r_stop,
        STIRLING,
        True,
        {"truncation": StirlingTruncation(r_stop, est)},
    )


# ---------------------------------------------------------------------------
# Euler-MacLaurin expansion


def f_nr(n: int, r: int, z):
    """F_{n,r-1}(z): (r-1)-th t-derivative of binom(-t,n-1) log((z+t)/(z+1)) at t=1."""
    if r < 1:
        raise ParameterError("r must be >= 1")
    z = _as_number(z)
    if z == -1:
        raise PoleError("F_{n,r} has a pole at z = -1")
    R = r - 1
    return f_nr_numerator(n, R)(z) / (1 + z) ** R


@lru_cache(maxsize=None)
def _binom_neg_t_poly_derivs(n: int):
    p = binomial_poly(n - 1).compose(Poly([0, -1]))
    return tuple(p.deriv(i) for i in range(n))


def _em_integrand_deriv(n: int, z, p: int, t: np.ndarray) -> np.ndarray:
    """(d/dt)^p { binom(-t,n-1) log((z+t)/(z+1)) }."""
    D = _binom_neg_t_poly_derivs(n)
    zt = z + t
    out = np.zeros_like(zt)
    if p < n:
        out = out + D[p](t) * (np.log(zt) - np.log(1 + z) if np.iscomplexobj(zt) else np.log(zt / (1 + z)))
    for l in range(max(1, p - n + 1), p + 1):
        i = p - l
        out = out + (math.comb(p, l) * (-1) ** (l - 1) * math.factorial(l - 1)) * D[i](t) / zt**l
    return out


def em_remainder(n: int, z, m: int, scheme: PanelScheme = PanelScheme()) -> EvalResult:
    """R_{n,m}(z) = (-1)^{m-1}/m! int_1^inf B̄_m(t) (d/dt)^m {binom(-t,n-1) log((z+t)/(z+1))} dt."""
    zz = complex(z) if isinstance(z, complex) else float(z)

    def deriv(p, t):
        return _em_integrand_deriv(n, zz, m + p, t)

    res = periodic_bernoulli_integral(m, deriv, scheme)
    c = (-1) ** (m - 1) / math.factorial(m)
    return EvalResult(c * res.value, abs(c) * res.error_bound, res.terms_used, "panel", True, res.diagnostics)


def log_gn_euler_maclaurin(n: int, z, m: int | None = None, scheme: PanelScheme = PanelScheme()) -> EvalResult:
    """log G_n(z+1) from the Euler-MacLaurin expansion with remainder R_{n,m}.

    Needs Re z > -1 and m > n (default m = n + 2).
    """
    if n < 1:
        raise DomainError("order n must be >= 1")
    m = n + 2 if m is None else int(m)
    if m <= n:
        raise ParameterError(f"Euler-MacLaurin remainder needs m > n (got m={m}, n={n})")
    z = _as_number(z)
    if complex(z).real <= -1:
        raise DomainError("Euler-MacLaurin expansion needs Re z > -1")
    is_real = not isinstance(z, complex)
    b = higher_stirling_coeffs(n, 1)
    lz = math.log1p(z) if is_real else cmath.log(1 + z)
    parts = [b.log_coeff(z) * lz, b.poly_part(z), b.const_part.evaluate(z, euler_gamma(), _zeta_d)]
    round_err = 8 * EPS * (
        _poly_mag(b.log_coeff, z) * abs(lz) + _poly_mag(b.poly_part, z) + _poly_mag(b.const_part.one, z)
    ) + _const_error(b.const_part, z)
    from .exact import bernoulli_number

    for r in range(2, m + 1):
        br = bernoulli_number(r)
        if br:
            parts.append(float(br) / math.factorial(r) * f_nr(n, r, z))
    rem = em_remainder(n, z, m, scheme)
    parts.append(-rem.value)
    value = _finish(sum(parts), is_real)
    return EvalResult(
        value,
        float(rem.error_bound + round_err),
        m,
        EULER_MACLAURIN,
        True,
        {"remainder": complex(rem.value)},
    )


# ---------------------------------------------------------------------------
# Dispatcher and conveniences


def log_gn_method(n: int, z, method: str = AUTO, **kw) -> EvalResult:
    """Evaluate by a named method (weierstrass, stirling, euler-maclaurin, auto)."""
    method = method.lower().replace("_", "-")
    if method in (WEIERSTRASS, "product"):
        return log_gn_weierstrass(n, z, kw.get("K"))
    if method in (STIRLING, "higher-stirling"):
        return log_gn_higher_stirling(n, z, kw.get("trunc", AUTO))
    if method in (EULER_MACLAURIN, "em"):
        return log_gn_euler_maclaurin(n, z, kw.get("m"))
    if method == AUTO:
        return log_gn(n, z)
    raise ParameterError(f"unknown method {method!r}")


def log_gn(n: int, z) -> EvalResult:
    """log G_n(z+1) with automatic method choice.

    |z| >= 10 inside the sector: higher Stirling; Re z > -1: Euler-MacLaurin
    with m = n + 2; otherwise log G_n(z+1) = log G_n(z+2) - log G_{n-1}(z+1)
    until the argument is in range, with G_0(z) = z at the bottom.
    """
    if n < 0:
        raise DomainError("order n must be >= 0")
    z = _as_number(z)
    _check_pole(z)
    return _log_gn(n, z)


def _log_gn(n: int, z) -> EvalResult:
    if z == 0:
        # G_n(1) = 1 for every order.
        return EvalResult(0.0, 0.0, 0, "normalisation")
    if n == 0:
        w = 1 + z
        if isinstance(w, complex) or w < 0:
            val = cmath.log(w)
        else:
            val = math.log(w)
        return EvalResult(val, EPS * abs(val), 0, "log")
    if abs(z) >= 10 and _in_sector(z, SECTOR_DELTA):
        return log_gn_higher_stirling(n, z)
    if complex(z).real > -1:
        return log_gn_euler_maclaurin(n, z)
    up = _log_gn(n, z + 1)
    down = _log_gn(n - 1, z)
    return EvalResult(
        up.value - down.value,
        up.error_bound + down.error_bound,
        up.terms_used + down.terms_used,
        "recursion",
        up.converged and down.converged,
    )


def kinkelin_constant() -> float:
    """log A = 1/12 - zeta'(-1)."""
    return 1.0 / 12.0 - zeta_deriv_neg(1)


def vigneras_property_check(n: int, grid: Sequence[float], h: float = 1e-2, method: str = AUTO) -> Dict:
    """Residuals of the four characterising properties of G_n on a grid of z >= 0.

    (1) log G_n(z+2) - log G_{n-1}(z+1) - log G_n(z+1), (2) log G_n(1),
    (3) the (n+1)-th derivative of log G_n(z+1) by central differences
    (must be >= 0), (4) log G_0(z+1) - log(z+1).
    """
    if n < 1:
        raise DomainError("order n must be >= 1")

    def L(k, x):
        if k == 0:
            return math.log1p(x)
        return log_gn_method(k, x, method).value

    rows = []
    for z in grid:
        z = float(z)
        if z < 0:
            raise DomainError("grid points must be >= 0")
        a, b, c = L(n, z + 1), L(n - 1, z), L(n, z)
        fe = a - b - c
        scale = max(1.0, abs(a), abs(b), abs(c))
        p = n + 1
        fd = sum((-1) ** i * math.comb(p, i) * L(n, z + (p / 2 - i) * h) for i in range(p + 1)) / h**p
        rows.append(
            {
                "z": z,
                "functional_equation": fe,
                "functional_equation_rel": abs(fe) / scale,
                "derivative_n_plus_1": fd,
                "base_case": math.log1p(z) - math.log1p(z),
            }
        )
    return {
        "n": n,
        "normalisation": L(n, 0.0),
        "rows": rows,
        "max_functional_residual": max(abs(r["functional_equation"]) for r in rows) if rows else 0.0,
        "min_derivative": min(r["derivative_n_plus_1"] for r in rows) if rows else 0.0,
    }


def _reconcile(a, b):
    """Bring b onto a's branch by removing the nearest multiple of 2 pi i."""
    if isinstance(a, complex) or isinstance(b, complex):
        d = complex(b) - complex(a)
        k = round(d.imag / (2 * math.pi))
        return complex(b) - 2j * math.pi * k
    return b


def cross_method_residuals(n: int, z, K: int | None = None, stirling_min_abs: float = 5.0) -> Dict:
    """Evaluate every applicable method at (n, z) and tabulate pairwise differences."""
    z = _as_number(z)
    results = {}
    results[WEIERSTRASS] = log_gn_weierstrass(n, z, K)
    if complex(z).real > -1:
        results[EULER_MACLAURIN] = log_gn_euler_maclaurin(n, z)
    if abs(z) >= stirling_min_abs and _in_sector(z, SECTOR_DELTA):
        results[STIRLING] = log_gn_higher_stirling(n, z)
    names = list(results)
    pairs = []
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            va = results[a].value
            vb = _reconcile(va, results[b].value)
            diff = abs(va - vb)
            budget = results[a].error_bound + results[b].error_bound
            pairs.append({"a": a, "b": b, "residual": diff, "budget": budget})
    return {"n": n, "z": z, "results": results, "pairs": pairs}
