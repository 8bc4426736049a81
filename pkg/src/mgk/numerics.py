"""Floating-point plumbing: compensated sums, panel quadrature against
periodic Bernoulli kernels, and tolerance-controlled series summation."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, NamedTuple, Optional

import numpy as np

from .errors import NonDecayingIntegrandError, ParameterError
from .exact import bernoulli_number, bernoulli_poly

__all__ = [
    "EPS",
    "EvalResult",
    "SumResult",
    "compensated_sum",
    "PanelScheme",
    "periodic_bernoulli_integral",
    "series_sum",
]

EPS = np.finfo(float).eps


@dataclass
class EvalResult:
    """Numeric value together with an estimate of its truncation error.

    ``error_bound`` is an estimate, not a certified bound. ``converged`` is
    False when a term or iteration cap was hit before the tolerance was met.
    """

    value: complex
    error_bound: float
    terms_used: int
    method: str
    converged: bool = True
    diagnostics: dict = field(default_factory=dict)

    @property
    def real(self) -> float:
        return float(np.real(self.value))

    def to_json(self) -> dict:
        v = self.value
        if isinstance(v, complex) or np.iscomplexobj(v):
            v = complex(v)
            if v.imag == 0.0:
                value = v.real
            else:
                value = [v.real, v.imag]
        else:
            value = float(v)
        return {
            "value": value,
            "error_bound": float(self.error_bound),
            "terms_used": int(self.terms_used),
            "method": self.method,
            "converged": bool(self.converged),
        }


class SumResult(NamedTuple):
    sum: complex
    rounding_est: float

    @property
    def has_nan(self) -> bool:
        return bool(np.isnan(self.sum))


def _neumaier(values) -> tuple:
    s = 0.0
    c = 0.0
    naive = 0.0
    mag = 0.0
    n = 0
    for x in values:
        x = float(x)
        n += 1
        naive += x
        mag += abs(x)
        t = s + x
        if abs(s) >= abs(x):
            c += (s - t) + x
        else:
            c += (x - t) + s
        s = t
    return s + c, naive, mag, n


def compensated_sum(terms: Iterable) -> SumResult:
    """Kahan-Neumaier summation with an estimate of the rounding error.

    Complex terms are summed by parts. NaN anywhere makes the sum NaN;
    ``SumResult.has_nan`` reports it. The rounding estimate is never smaller
    than the gap between naive and compensated totals.
    """
    if isinstance(terms, np.ndarray):
        arr = terms.ravel()
    else:
        arr = np.asarray(list(terms))
    if arr.size == 0:
        return SumResult(0.0, 0.0)
    if np.iscomplexobj(arr):
        re = compensated_sum(arr.real)
        im = compensated_sum(arr.imag)
        return SumResult(complex(re.sum, im.sum), re.rounding_est + im.rounding_est)
    arr = arr.astype(float)
    if np.isnan(arr).any():
        return SumResult(float("nan"), float("nan"))
    if arr.size > 4096:
        # Large vectors: math.fsum gives the correctly rounded sum directly.
        total = math.fsum(arr)
        naive = float(np.add.reduce(arr))
        mag = float(np.abs(arr).sum())
        n = arr.size
    else:
        total, naive, mag, n = _neumaier(arr)
    est = abs(naive - total) + EPS * abs(total) + n * EPS * EPS * mag
    return SumResult(total, est)


@dataclass(frozen=True)
class PanelScheme:
    """Unit-panel Gauss-Legendre scheme for integrals over [a, inf)."""

    order: int = 16
    k_max: int = 200
    tail_exponent: float = 2.0
    tail_terms: int = 14

    def __post_init__(self):
        if self.order < 2 or self.k_max < 1 or not self.tail_exponent > 1:
            raise ParameterError("PanelScheme needs order >= 2, k_max >= 1, tail_exponent > 1")


@lru_cache(maxsize=None)
def _gl_nodes(order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    return 0.5 * (x + 1.0), 0.5 * w


@lru_cache(maxsize=None)
def _kernel(m: int, order: int):
    x, w = _gl_nodes(order)
    return x, w, w * bernoulli_poly(m)(x)


def periodic_bernoulli_integral(
    m: int,
    deriv: Callable[[int, np.ndarray], np.ndarray],
    scheme: PanelScheme = PanelScheme(),
    a: int = 1,
) -> EvalResult:
    """Integral of B̄_m(t) f(t) over [a, inf).

    ``deriv(p, t)`` returns the p-th derivative of f at the array ``t``; p = 0
    is f itself. Panels [k, k+1] for k = a .. a+k_max-1 are done by
    Gauss-Legendre at the base order and at order + 8; the higher one is used
    and their gap is the quadrature error estimate. The part beyond
    K = a + k_max is handled by repeated integration by parts, which needs the higher derivatives of f at K. When
    only p = 0 is available (deriv raises NotImplementedError for p >= 1) the
    tail is left out and a C/K^{p-1} estimate goes into the error bound.
    """
    if m < 1:
        raise ParameterError("periodic Bernoulli order must be >= 1")
    k_max = scheme.k_max
    K = a + k_max
    ks = np.arange(a, K, dtype=float)

    x, w, wb = _kernel(m, scheme.order)
    t = (ks[:, None] + x[None, :]).ravel()
    fv = np.asarray(deriv(0, t)).reshape(k_max, scheme.order)
    if not np.all(np.isfinite(fv)):
        raise NonDecayingIntegrandError("integrand is not finite on the panels")
    low = fv @ wb

    # A second, higher-order rule per panel gives the value; its distance to
    # the base rule is kept as the quadrature error estimate.
    x2, w2, wb2 = _kernel(m, scheme.order + 8)
    t2 = (ks[:, None] + x2[None, :]).ravel()
    f2 = np.asarray(deriv(0, t2)).reshape(k_max, len(x2))
    panels = f2 @ wb2
    main = compensated_sum(panels)
    quad_err = float(np.abs(low - panels).sum())

    # Decay diagnostics from panel maxima.
    peak = np.abs(fv).max(axis=1)
    if k_max >= 8:
        late, mid = peak[-1], peak[k_max // 2]
        if late > 1e-300 and late >= mid:
            raise NonDecayingIntegrandError(
                f"integrand does not decay: |f| near t={K} is {late:.3e}, near t={a + k_max // 2} is {mid:.3e}"
            )
        p_obs = math.log(mid / late) / math.log((K - 0.5) / (a + k_max // 2 + 0.5)) if late > 0 and mid > 0 else scheme.tail_exponent
    else:
        p_obs = scheme.tail_exponent
    p_use = max(p_obs, scheme.tail_exponent) if p_obs > 1 else scheme.tail_exponent
    C = peak[-1] * (K - 1.0) ** p_use
    crude_tail = float(C / ((p_use - 1.0) * K ** (p_use - 1.0)))

    # Tail by parts: int_K^inf B̄_m f = -sum_i (-1)^i B_{m+1+i} m!/(m+1+i)! f^{(i)}(K)
    tail = 0.0
    tail_err = crude_tail
    used = 0
    try:
        Karr = np.array([float(K)])
        prev_mag = math.inf
        tail_terms = []
        omitted = None
        for i in range(scheme.tail_terms + 1):
            b = bernoulli_number(m + 1 + i)
            if b == 0:
                continue
            coef = -((-1) ** i) * float(b * Fraction(math.factorial(m), math.factorial(m + 1 + i)))
            d = complex(np.asarray(deriv(i, Karr)).ravel()[0])
            term = coef * d
            mag = abs(term)
            if mag > prev_mag or i == scheme.tail_terms:
                omitted = mag
                break
            tail_terms.append(term)
            prev_mag = mag
        if omitted is None:
            omitted = prev_mag
        s = compensated_sum(np.array(tail_terms, dtype=complex)).sum if tail_terms else 0.0
        tail = s
        used = len(tail_terms)
        tail_err = float(omitted)
    except NotImplementedError:
        tail = 0.0

    value = main.sum + tail
    if not np.iscomplexobj(fv) and isinstance(value, complex):
        value = value.real
    err = quad_err + tail_err + main.rounding_est + 4 * EPS * float(np.abs(panels).sum())
    return EvalResult(
        value=value,
        error_bound=float(err),
        terms_used=k_max,
        method=f"gl{scheme.order}-panels",
        diagnostics={
            "quad_err": quad_err,
            "tail": complex(tail),
            "tail_err": tail_err,
            "tail_terms": used,
            "crude_tail_bound": crude_tail,
            "observed_decay": p_obs,
        },
    )


def series_sum(
    term_fn: Callable[[int], complex],
    tol: float = 1e-15,
    hard_cap: int = 10**7,
    start: int = 1,
) -> EvalResult:
    """Sum term_fn(start) + term_fn(start+1) + ... with compensated summation.

    Stops once |term| < tol |partial| for three consecutive indices. The error
    estimate is the larger of 10 |last term| and a tail extrapolated from the
    observed decay (geometric or algebraic). Hitting ``hard_cap`` returns the
    partial sum with ``converged=False``.
    """
    s = 0.0
    c = 0.0
    quiet = 0
    k = start
    last = 0.0
    converged = False
    while k < start + hard_cap:
        term = term_fn(k)
        if isinstance(term, complex):
            raise ParameterError("series_sum handles real terms; split complex series")
        term = float(term)
        if math.isnan(term):
            return EvalResult(float("nan"), float("nan"), k - start + 1, "series", False)
        t = s + term
        c += (s - t) + term if abs(s) >= abs(term) else (term - t) + s
        s = t
        last = abs(term)
        if last < tol * abs(s + c):
            quiet += 1
            if quiet >= 3:
                converged = True
                break
        else:
            quiet = 0
        k += 1
    n = k - start + 1 if converged else hard_cap
    total = s + c
    kk = k if converged else start + hard_cap - 1
    tail = _tail_estimate(term_fn, kk, last)
    err = max(10.0 * last, tail) + EPS * abs(total)
    return EvalResult(total, err, n, "series", converged, {"last_term": last, "tail_est": tail})


def _tail_estimate(term_fn, k: int, last: float) -> float:
    """Extrapolate the remainder after index k from |t_k| and |t_{k/2}|."""
    if last == 0.0 or k < 4:
        return last
    half = max(1, k // 2)
    prev = abs(float(term_fn(k - 1)))
    earlier = abs(float(term_fn(half)))
    est = last
    if prev > 0:
        rho = last / prev
        if rho < 0.999:
            est = max(est, last * rho / (1.0 - rho))
    if earlier > last > 0:
        p = math.log(earlier / last) / math.log(k / half)
        if p > 1.0:
            est = max(est, last * k / (p - 1.0))
        else:
            est = math.inf
    elif earlier <= last:
        est = math.inf
    return est
