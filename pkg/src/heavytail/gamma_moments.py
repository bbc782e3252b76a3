"""Exact cumulants and moments of the one-sided exponential law and its mixtures.

``Gamma`` has density ``exp(-(x+1))`` on ``[-1, inf)`` and cumulants
``k_n = (n-1)!`` for ``n >= 2``.  The two-sided family
``Gamma^s = s*Gamma - (1-s)*Gamma'`` has polynomial cumulants
``(s**n + (s-1)**n) * (n-1)!`` and its moments ``r_n(s)`` are produced by
running the cumulant-to-moment recursion over polynomials in ``s``.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Union

from .ratpoly import Poly

Entry = Union[Fraction, Poly]


@dataclass(frozen=True)
class CumulantSeq:
    """Cumulants ``values[n] = k_n``; entries are Fractions or Polys in ``s``."""

    values: tuple

    @property
    def max_order(self) -> int:
        return len(self.values) - 1

    def __getitem__(self, n: int) -> Entry:
        return self.values[n]


@dataclass(frozen=True)
class MomentSeq:
    """Moments ``values[n] = mu_n`` with ``mu_0 = 1``."""

    values: tuple

    @property
    def max_order(self) -> int:
        return len(self.values) - 1

    def __getitem__(self, n: int) -> Entry:
        return self.values[n]


def cumulant_gamma(n: int) -> Fraction:
    if n < 0:
        raise ValueError("cumulant order must be non-negative")
    if n < 2:
        return Fraction(0)
    return Fraction(factorial(n - 1))


def subfactorial(n: int) -> int:
    """Number of derangements ``!n = n! * sum_{k<=n} (-1)^k / k!``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    total = sum(Fraction((-1) ** k, factorial(k)) for k in range(n + 1))
    out = total * factorial(n)
    assert out.denominator == 1
    return out.numerator


def gamma_cumulants(n_max: int) -> CumulantSeq:
    return CumulantSeq(tuple(cumulant_gamma(i) for i in range(n_max + 1)))


def _is_zero(x) -> bool:
    if isinstance(x, Poly):
        return x.is_zero()
    return x == 0


def moments_from_cumulants(k: CumulantSeq, n_max: int) -> MomentSeq:
    """Raw moments from cumulants via ``mu_n = sum_i C(n-1,i-1) k_i mu_{n-i}``.

    Works for any entries supporting ``+`` and ``*`` (Fractions, Polys).
    """
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    if k.max_order < n_max:
        raise ValueError(
            f"need cumulants up to order {n_max}, have {k.max_order}")
    poly_valued = any(isinstance(v, Poly) for v in k.values)
    one = Poly.constant(1) if poly_valued else Fraction(1)
    zero = Poly() if poly_valued else Fraction(0)
    mu = [one]
    for n in range(1, n_max + 1):
        acc = zero
        for i in range(1, n + 1):
            ki = k[i]
            if _is_zero(ki) or _is_zero(mu[n - i]):
                continue
            acc = acc + comb(n - 1, i - 1) * (ki * mu[n - i])
        mu.append(acc)
    return MomentSeq(tuple(mu))


def cumulant_mix_poly(i: int) -> Poly:
    """``k_i(Gamma^s) = (s**i + (s-1)**i) * (i-1)!`` as a polynomial in s."""
    if i < 0:
        raise ValueError("order must be non-negative")
    if i < 2:
        return Poly()
    sm1 = [comb(i, j) * (-1) ** (i - j) for j in range(i + 1)]
    sm1[i] += 1
    return Poly(c * factorial(i - 1) for c in sm1)


_cache_lock = threading.Lock()
_mix_cache: tuple = ()


def mix_moment_polys(n_max: int) -> tuple:
    """Moment polynomials ``r_0 .. r_{n_max}`` of ``Gamma^s`` (cached, grows)."""
    global _mix_cache
    with _cache_lock:
        if len(_mix_cache) > n_max:
            return _mix_cache[: n_max + 1]
    ks = CumulantSeq(tuple(cumulant_mix_poly(i) for i in range(n_max + 1)))
    mus = moments_from_cumulants(ks, n_max).values
    with _cache_lock:
        if len(mus) > len(_mix_cache):
            _mix_cache = mus
    return mus


def r_poly_any(n: int) -> Poly:
    """``E[(Gamma^s)^n]`` for any integer ``n >= 0`` (odd orders included)."""
    if n < 0:
        raise ValueError("order must be non-negative")
    return mix_moment_polys(n)[n]


def r_poly(p: int) -> Poly:
    """Even moment polynomial ``r_p(s) = E[(s*Gamma + (s-1)*Gamma')^p]``."""
    if p < 2 or p % 2:
        raise ValueError(f"r_poly needs an even order >= 2, got {p}")
    return r_poly_any(p)


def moment_cos_sin(n: int, t: float) -> float:
    """``mu_n(cos(t)*Gamma - sin(t)*Gamma')`` in floating point."""
    if n < 0:
        raise ValueError("order must be non-negative")
    c, s = math.cos(t), -math.sin(t)
    k = [0.0, 0.0] + [(c ** i + s ** i) * math.factorial(i - 1)
                      for i in range(2, n + 1)]
    mu = [1.0]
    for m in range(1, n + 1):
        mu.append(math.fsum(comb(m - 1, i - 1) * k[i] * mu[m - i]
                            for i in range(1, m + 1)))
    return mu[n]


def cumulant_cos_sin(n: int, t: float) -> float:
    if n < 2:
        return 0.0
    return (math.cos(t) ** n + (-math.sin(t)) ** n) * math.factorial(n - 1)
