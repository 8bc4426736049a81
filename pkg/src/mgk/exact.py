"""Exact rational combinatorics and polynomial algebra.

Everything here works over ``fractions.Fraction``; floats only appear when a
polynomial is evaluated at a float or complex argument.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Dict, Iterable, List, Sequence, Tuple, Union

from .errors import DomainError

__all__ = [
    "Poly",
    "LaurentInK",
    "SymbolicConstantCombo",
    "CoeffBundle",
    "bernoulli_number",
    "bernoulli_poly",
    "periodic_bernoulli",
    "stirling_first",
    "falling_factorial",
    "binomial_poly",
    "g_polynomials",
    "phi_jr",
    "p_poly",
    "q_poly",
    "phi_n",
    "f_n_symbolic",
    "f_nr_numerator",
    "higher_stirling_coeffs",
    "fraction_to_str",
    "fraction_from_str",
]

Rational = Union[int, Fraction]


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class Poly:
    """Dense univariate polynomial with Fraction coefficients.

    ``coeffs[i]`` multiplies ``x**i``. Instances are immutable and trailing
    zeros are stripped, so the zero polynomial has an empty coefficient tuple.
    """

    __slots__ = ("_c", "_fc")

    def __init__(self, coeffs: Iterable[Rational] = ()):
        c = [_frac(a) for a in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self._c: Tuple[Fraction, ...] = tuple(c)
        self._fc = None

    @classmethod
    def constant(cls, a: Rational) -> "Poly":
        return cls([a])

    @classmethod
    def x(cls) -> "Poly":
        return cls([0, 1])

    @classmethod
    def monomial(cls, deg: int, a: Rational = 1) -> "Poly":
        return cls([0] * deg + [a])

    @property
    def coeffs(self) -> Tuple[Fraction, ...]:
        return self._c

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self._c) - 1

    def is_zero(self) -> bool:
        return not self._c

    def coeff(self, i: int) -> Fraction:
        return self._c[i] if 0 <= i < len(self._c) else Fraction(0)

    # arithmetic
    def __add__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            other = Poly([other])
        n = max(len(self._c), len(other._c))
        return Poly(self.coeff(i) + other.coeff(i) for i in range(n))

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(-a for a in self._c)

    def __sub__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            other = Poly([other])
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return (-self) + other

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            a = _frac(other)
            return Poly(a * c for c in self._c)
        if not self._c or not other._c:
            return Poly()
        out = [Fraction(0)] * (len(self._c) + len(other._c) - 1)
        for i, a in enumerate(self._c):
            if a:
                for j, b in enumerate(other._c):
                    out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Poly":
        a = _frac(other)
        return Poly(c / a for c in self._c)

    def __pow__(self, e: int) -> "Poly":
        if e < 0:
            raise ValueError("negative power of a polynomial")
        out, base = Poly([1]), self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            if isinstance(other, (int, Fraction)):
                other = Poly([other])
            else:
                return NotImplemented
        return self._c == other._c

    def __hash__(self):
        return hash(self._c)

    # calculus and composition
    def deriv(self, times: int = 1) -> "Poly":
        c = list(self._c)
        for _ in range(times):
            c = [i * c[i] for i in range(1, len(c))]
        return Poly(c)

    def antideriv(self) -> "Poly":
        """Antiderivative vanishing at 0."""
        return Poly([0] + [a / (i + 1) for i, a in enumerate(self._c)])

    def integrate(self, lo: Rational, hi: Rational) -> Fraction:
        F = self.antideriv()
        return F(_frac(hi)) - F(_frac(lo))

    def compose(self, inner: "Poly") -> "Poly":
        out = Poly()
        for a in reversed(self._c):
            out = out * inner + a
        return out

    def shift(self, h: Rational) -> "Poly":
        """p(x + h)."""
        return self.compose(Poly([h, 1]))

    def __call__(self, x):
        if isinstance(x, (int, Fraction)):
            acc = Fraction(0)
            for a in reversed(self._c):
                acc = acc * x + a
            return acc
        if self._fc is None:
            self._fc = tuple(float(a) for a in self._c)
        acc = 0.0 * x
        for a in reversed(self._fc):
            acc = acc * x + a
        return acc

    # presentation
    def to_json(self) -> List[str]:
        return [fraction_to_str(a) for a in self._c]

    @classmethod
    def from_json(cls, data: Sequence[str]) -> "Poly":
        return cls(fraction_from_str(s) for s in data)

    def to_text(self, var: str = "z") -> str:
        if not self._c:
            return "0"
        parts = []
        for i in range(len(self._c) - 1, -1, -1):
            a = self._c[i]
            if a == 0:
                continue
            sign = "-" if a < 0 else "+"
            mag = abs(a)
            if i == 0:
                body = str(mag)
            else:
                mono = var if i == 1 else f"{var}^{i}"
                if mag == 1:
                    body = mono
                elif mag.denominator == 1:
                    body = f"{mag.numerator}*{mono}"
                else:
                    body = f"({mag})*{mono}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for s, b in parts[1:]:
            out += f" {s} {b}"
        return out

    def __repr__(self):
        return f"Poly({self.to_text('x')})"


def fraction_to_str(a: Fraction) -> str:
    a = _frac(a)
    return f"{a.numerator}/{a.denominator}"


def fraction_from_str(s: str) -> Fraction:
    return Fraction(s)


# ---------------------------------------------------------------------------
# Bernoulli numbers and polynomials

_bern_lock = threading.Lock()
_bern: List[Fraction] = [Fraction(1)]


def bernoulli_number(r: int) -> Fraction:
    """B_r with B_1 = -1/2 (generating function z e^{tz}/(e^z - 1) at t=0)."""
    if r < 0:
        raise DomainError("Bernoulli index must be nonnegative")
    if r >= len(_bern):
        with _bern_lock:
            for m in range(len(_bern), r + 1):
                # sum_{k<=m} C(m+1,k) B_k = 0
                s = sum(comb(m + 1, k) * _bern[k] for k in range(m))
                _bern.append(-s / (m + 1))
    return _bern[r]


@lru_cache(maxsize=None)
def bernoulli_poly(r: int) -> Poly:
    """B_r(t) = sum_k C(r,k) B_k t^{r-k}."""
    if r < 0:
        raise DomainError("Bernoulli index must be nonnegative")
    c = [Fraction(0)] * (r + 1)
    for k in range(r + 1):
        c[r - k] = comb(r, k) * bernoulli_number(k)
    return Poly(c)


def periodic_bernoulli(r: int, t: float) -> float:
    """B_r evaluated at the fractional part of t."""
    frac = t - float(int(t // 1))
    return bernoulli_poly(r)(frac)


# ---------------------------------------------------------------------------
# Stirling numbers, falling factorials, binomial polynomials

_STIRLING_NMAX = 32
_stir_lock = threading.Lock()
_stir: List[List[int]] = [[1]]


def _extend_stirling(n: int) -> None:
    with _stir_lock:
        while len(_stir) <= n:
            m = len(_stir)  # build row m from row m-1: [u]_m = [u]_{m-1} (u - m + 1)
            prev = _stir[-1]
            row = [0] * (m + 1)
            for j, s in enumerate(prev):
                row[j + 1] += s
                row[j] -= (m - 1) * s
            _stir.append(row)


_extend_stirling(_STIRLING_NMAX)


def stirling_first(n: int, j: int) -> int:
    """Signed Stirling number of the first kind: coefficient of u^j in [u]_n."""
    if n < 0 or j < 0 or j > n:
        raise DomainError(f"stirling_first needs 0 <= j <= n, got n={n}, j={j}")
    if n >= len(_stir):
        _extend_stirling(n)
    return _stir[n][j]


def falling_factorial(a, k: int):
    """[a]_k = a (a-1) ... (a-k+1); [a]_0 = 1."""
    out = 1
    for i in range(k):
        out = out * (a - i)
    return out


@lru_cache(maxsize=None)
def binomial_poly(n: int) -> Poly:
    """binom(z, n) as a degree-n polynomial in z."""
    if n < 0:
        raise DomainError("binomial_poly needs n >= 0")
    return Poly([stirling_first(n, j) for j in range(n + 1)]) / factorial(n)


@lru_cache(maxsize=None)
def g_polynomials(n: int) -> Tuple[Poly, ...]:
    """G_{n,j}(z), j = 0..n-1, from binom(z-u, n-1) = sum_j G_{n,j}(z) u^j."""
    if n < 1:
        raise DomainError("g_polynomials needs n >= 1")
    # coefficients in u, each a polynomial in z
    cols: List[Poly] = [Poly([1])]
    for i in range(n - 1):
        # multiply by (z - i) - u
        zi = Poly([-i, 1])
        new = [Poly()] * (len(cols) + 1)
        for j, p in enumerate(cols):
            new[j] = new[j] + p * zi
            new[j + 1] = new[j + 1] - p
        cols = new
    f = factorial(n - 1)
    return tuple(p / f for p in cols)


# ---------------------------------------------------------------------------
# Weierstrass-product apparatus


def _dlog_power_at_one(a: int, r: int) -> Fraction:
    """(d/dt)^r [t^a log t] at t = 1."""
    s = Fraction(0)
    for l in range(1, r + 1):
        s += comb(r, l) * falling_factorial(a, r - l) * (-1) ** (l - 1) * factorial(l - 1)
    return s


@lru_cache(maxsize=None)
def phi_jr(j: int, r: int) -> Fraction:
    """(d/dt)^r { t^{j+1} log t / (j+1) - t^{j+1} / (j+1)^2 } at t = 1."""
    if j < 0 or r < 0:
        raise DomainError("phi_jr needs j, r >= 0")
    a = j + 1
    return _dlog_power_at_one(a, r) / a - Fraction(falling_factorial(a, r), a * a)


@lru_cache(maxsize=None)
def p_poly(j: int) -> Poly:
    """P_j(x) = sum_{r=0}^{j+1} B_r/r! phi_{j,r} x^{j-r+1}."""
    if j < 0:
        raise DomainError("p_poly needs j >= 0")
    c = [Fraction(0)] * (j + 2)
    for r in range(j + 2):
        c[j + 1 - r] = bernoulli_number(r) / factorial(r) * phi_jr(j, r)
    return Poly(c)


def _log1p_taylor(r: int) -> Poly:
    """sum_{l=1}^r (-1)^{l-1} z^l / l."""
    c = [Fraction(0)] + [Fraction((-1) ** (l - 1), l) for l in range(1, r + 1)]
    return Poly(c)


@lru_cache(maxsize=None)
def q_poly(j: int) -> Poly:
    """Q_j(z) from P_j, Bernoulli polynomials and truncated log(1+z) series."""
    if j < 0:
        raise DomainError("q_poly needs j >= 0")
    z = Poly.x()
    out = p_poly(j).shift(1)
    for r in range(j + 1):
        out = out - comb(j, r) * p_poly(j - r)(Fraction(1)) * z ** r
    acc = Poly()
    for r in range(1, j + 2):
        acc = acc + comb(j + 1, r) * bernoulli_poly(j + 1 - r) * _log1p_taylor(r)
    return out + acc / (j + 1)


@dataclass(frozen=True)
class LaurentInK:
    """Finite Laurent polynomial in k whose coefficients are polynomials in z."""

    terms: Dict[int, Poly]

    def exponents(self) -> List[int]:
        return sorted(self.terms)

    def __call__(self, z, k):
        return sum(p(z) * k ** mu for mu, p in self.terms.items())

    def to_json(self) -> Dict[str, List[str]]:
        return {str(mu): self.terms[mu].to_json() for mu in self.exponents()}


@lru_cache(maxsize=None)
def phi_n(n: int) -> LaurentInK:
    """Exponent of the convergence factor of the order-n Weierstrass product."""
    if n < 1:
        raise DomainError("phi_n needs n >= 1")
    f = factorial(n - 1)
    terms = {}
    for mu in range(-1, n - 1):
        c = {}
        for r in range(mu + 1, n):
            c[r - mu] = Fraction(stirling_first(n - 1, r), r - mu)
        deg = max(c)
        p = Poly([c.get(i, 0) for i in range(deg + 1)])
        terms[mu] = p * Fraction((-1) ** (mu + 1), f)
    return LaurentInK(terms)


@dataclass(frozen=True)
class SymbolicConstantCombo:
    """Polynomial weights over the constant basis {1, gamma, zeta'(0), zeta'(-1), ...}."""

    one: Poly = field(default_factory=Poly)
    gamma: Poly = field(default_factory=Poly)
    zeta_d: Dict[int, Poly] = field(default_factory=dict)

    def evaluate(self, z, gamma_value: float, zeta_d_value) -> complex:
        """Substitute numbers: ``zeta_d_value(r)`` must return zeta'(-r)."""
        out = self.one(z) + self.gamma(z) * gamma_value
        for r, p in self.zeta_d.items():
            out = out + p(z) * zeta_d_value(r)
        return out

    def to_json(self) -> dict:
        return {
            "one": self.one.to_json(),
            "gamma": self.gamma.to_json(),
            "zeta_d": {str(r): self.zeta_d[r].to_json() for r in sorted(self.zeta_d)},
        }

    @classmethod
    def from_json(cls, data: dict) -> "SymbolicConstantCombo":
        return cls(
            one=Poly.from_json(data.get("one", [])),
            gamma=Poly.from_json(data.get("gamma", [])),
            zeta_d={int(r): Poly.from_json(v) for r, v in data.get("zeta_d", {}).items()},
        )


def _drop_zero(d: Dict[int, Poly]) -> Dict[int, Poly]:
    return {r: p for r, p in d.items() if not p.is_zero()}


@lru_cache(maxsize=None)
def f_n_symbolic(n: int) -> SymbolicConstantCombo:
    """Prefactor exponent F_n(z) of the order-n Weierstrass product."""
    if n < 1:
        raise DomainError("f_n_symbolic needs n >= 1")
    G = g_polynomials(n)
    z = Poly.x()
    one = Poly()
    for j in range(n):
        one = one + G[j] * q_poly(j)
    zeta = {}
    for r in range(n - 1):
        # [(1/r!) d^r/du^r binom(z-u, n-1)] from u=0 to u=z
        w = Poly()
        for j in range(r + 1, n):
            w = w + G[j] * comb(j, r) * z ** (j - r)
        zeta[r] = w
    # integral_0^z binom(z-u, n-1) du = integral_0^z binom(v, n-1) dv
    gam = -binomial_poly(n - 1).antideriv()
    return SymbolicConstantCombo(one=one, gamma=gam, zeta_d=_drop_zero(zeta))


@lru_cache(maxsize=None)
def _binom_neg_t_derivs(n: int) -> Tuple[Fraction, ...]:
    """(d/dt)^i binom(-t, n-1) at t = 1, for i = 0..n-1."""
    p = binomial_poly(n - 1).compose(Poly([0, -1]))
    return tuple(p.deriv(i)(Fraction(1)) for i in range(n))


@lru_cache(maxsize=None)
def f_nr_numerator(n: int, R: int) -> Poly:
    """Numerator N with F_{n,R}(z) = N(z) / (z+1)^R.

    F_{n,R}(z) = (d/dt)^R { binom(-t,n-1) log((z+t)/(z+1)) } at t = 1, expanded by
    Leibniz with (d/dt)^l log(z+t) = (-1)^{l-1} (l-1)! / (z+t)^l.
    """
    if n < 1 or R < 0:
        raise DomainError("f_nr_numerator needs n >= 1, R >= 0")
    D = _binom_neg_t_derivs(n)
    zp1 = Poly([1, 1])
    out = Poly()
    for l in range(1, R + 1):
        i = R - l
        if i >= n or D[i] == 0:
            continue
        out = out + (comb(R, l) * D[i] * (-1) ** (l - 1) * factorial(l - 1)) * zp1 ** i
    return out


@dataclass(frozen=True)
class CoeffBundle:
    """Exact description of the order-n higher Stirling expansion.

    log G_n(z+1) ~ log_coeff(z) log(z+1) + poly_part(z) + const_part(z)
                   + sum_r weight_r * numerator_r(z) / (z+1)^{2r-1}
    """

    n: int
    log_coeff: Poly
    poly_part: Poly
    const_part: SymbolicConstantCombo
    series_terms: Tuple[Tuple[int, Poly, Fraction], ...]

    def display_polynomial(self) -> Poly:
        """poly_part plus the rational constant block, as the expansion is usually printed."""
        return self.poly_part + self.const_part.one

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "log_coeff": self.log_coeff.to_json(),
            "poly_part": self.poly_part.to_json(),
            "const_part": self.const_part.to_json(),
            "series_terms": [
                {"r": r, "numerator": num.to_json(), "weight": fraction_to_str(w)}
                for r, num, w in self.series_terms
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "CoeffBundle":
        return cls(
            n=int(data["n"]),
            log_coeff=Poly.from_json(data["log_coeff"]),
            poly_part=Poly.from_json(data["poly_part"]),
            const_part=SymbolicConstantCombo.from_json(data["const_part"]),
            series_terms=tuple(
                (int(t["r"]), Poly.from_json(t["numerator"]), fraction_from_str(t["weight"]))
                for t in data["series_terms"]
            ),
        )


@lru_cache(maxsize=None)
def higher_stirling_coeffs(n: int, r_max: int) -> CoeffBundle:
    """Exact coefficients of the large-|z| expansion of log G_n(z+1)."""
    if n < 1 or r_max < 1:
        raise DomainError("higher_stirling_coeffs needs n >= 1, r_max >= 1")
    G = g_polynomials(n)
    z1 = Poly([1, 1])
    b = binomial_poly(n - 1)
    log_coeff = binomial_poly(n).shift(1)
    poly = Poly()
    for r in range(1, n + 1):
        d = b.deriv(r - 1) * (-1) ** (r - 1)  # (-d/dz)^{r-1} binom(z, n-1)
        log_coeff = log_coeff + d * (bernoulli_number(r) / factorial(r))
        poly = poly - d * (z1 ** r - 1) / (factorial(r) * r)
    one = Poly()
    zeta = {}
    for j in range(n):
        one = one - G[j] * Fraction(1, (j + 1) ** 2)
        zeta[j] = -G[j]
    const = SymbolicConstantCombo(one=one, gamma=Poly(), zeta_d=_drop_zero(zeta))
    series = tuple(
        (r, f_nr_numerator(n, 2 * r - 1), bernoulli_number(2 * r) / factorial(2 * r))
        for r in range(1, r_max + 1)
    )
    return CoeffBundle(n, log_coeff, poly, const, series)
