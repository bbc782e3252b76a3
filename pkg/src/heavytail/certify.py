"""Coefficient-sign certificates for endpoint maximality of even-moment ratios.

For even ``q`` the log-derivative numerator of ``r_q^(q-2) / r_{q-2}^q`` is

    h_q = (q-2) r_q' r_{q-2} - q r_{q-2}' r_q,

which vanishes at 0, 1/2 and 1.  Recentering at 1/2 and dividing out
``s(s-1/2)(s+1/2)`` leaves an even polynomial ``sum a_i s^(2i)``.  If every
``a_i`` except ``a_1`` is non-positive, and a positive ``a_1`` is dominated
through a negative discriminant of ``a_0 + a_1 x + a_2 x^2``, that quotient is
negative everywhere, so ``h_q <= 0`` on ``[0, 1/2]``.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm

from .gamma_moments import mix_moment_polys, r_poly
from .ratpoly import Poly, format_rational, poly_divide_exact, poly_shift

HALF = Fraction(1, 2)
# s (s - 1/2) (s + 1/2) = s^3 - s/4
CUBIC = Poly.from_roots((0, HALF, -HALF))
REFERENCE_Q_LIMIT = 100


class CertificateError(ValueError):
    pass


def _check_q(q: int) -> None:
    if not isinstance(q, int) or q < 4 or q % 2:
        raise CertificateError(f"q must be an even integer >= 4, got {q!r}")


def h_poly(q: int) -> Poly:
    _check_q(q)
    rq, rp = r_poly(q), r_poly(q - 2)
    return (q - 2) * (rq.derivative() * rp) - q * (rp.derivative() * rq)


def h_tilde_division(q: int) -> tuple[Poly, Poly, Poly]:
    """Return (recentered h_q, quotient, remainder) of the exact division."""
    centered = poly_shift(h_poly(q), HALF)
    quotient, remainder = poly_divide_exact(centered, CUBIC)
    return centered, quotient, remainder


def h_tilde(q: int) -> Poly:
    _, quotient, remainder = h_tilde_division(q)
    if not remainder.is_zero():
        raise CertificateError(f"h_{q} is not divisible by s(s-1/2)(s+1/2)")
    if not quotient.odd_part_zero():
        raise CertificateError(f"h~_{q} has a nonzero odd coefficient")
    return quotient


@dataclass
class Certificate:
    q: int
    h_tilde_coeffs: tuple  # a_i = coefficient of s^(2i)
    odd_coeffs_zero: bool
    nonpositive_except_i1: bool
    a1_positive: bool
    discriminant: Fraction
    divisible: bool
    verdict: str
    diagnostics: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    @property
    def within_reference_range(self) -> bool:
        return self.q < REFERENCE_Q_LIMIT

    def common_factor(self) -> Fraction:
        """Signed gcd of the coefficients (e.g. -720 for q = 6)."""
        nums = [c for c in self.h_tilde_coeffs if c != 0]
        if not nums:
            return Fraction(0)
        g = Fraction(0)
        for c in nums:
            g = Fraction(_gcd_frac(g, c))
        return -g if nums[0] < 0 else g

    def to_record(self) -> dict:
        return {
            "q": self.q,
            "verdict": self.verdict,
            "divisible": self.divisible,
            "odd_coeffs_zero": self.odd_coeffs_zero,
            "nonpositive_except_i1": self.nonpositive_except_i1,
            "a1_positive": self.a1_positive,
            "discriminant": format_rational(self.discriminant),
            "h_tilde_coeffs": [format_rational(c) for c in self.h_tilde_coeffs],
            "within_reference_range": self.within_reference_range,
            "diagnostics": list(self.diagnostics),
        }


def _gcd_frac(a: Fraction, b: Fraction) -> Fraction:
    a, b = abs(a), abs(b)
    return Fraction(gcd(a.numerator, b.numerator), lcm(a.denominator, b.denominator))


def _fail(q: int, coeffs=(), divisible=False, odd_zero=False, msg="") -> Certificate:
    return Certificate(q, tuple(coeffs), odd_zero, False, False, Fraction(0),
                       divisible, "fail", [msg] if msg else [])


def certify_q(q: int) -> Certificate:
    _check_q(q)
    diag = []
    try:
        _, quotient, remainder = h_tilde_division(q)
    except Exception as exc:  # structural anomalies must never pass silently
        return _fail(q, msg=f"construction failed: {exc!r}")
    divisible = remainder.is_zero()
    if not divisible:
        diag.append(f"nonzero remainder of degree {remainder.degree}")
    odd_zero = quotient.odd_part_zero()
    if not odd_zero:
        diag.append("nonzero odd coefficient in h~")
    expected = 2 * q - 8
    if quotient.degree != expected:
        diag.append(f"unexpected degree {quotient.degree} (expected {expected})")

    a = tuple(quotient[2 * i] for i in range((max(quotient.degree, 0)) // 2 + 1))
    a0 = a[0] if len(a) > 0 else Fraction(0)
    a1 = a[1] if len(a) > 1 else Fraction(0)
    a2 = a[2] if len(a) > 2 else Fraction(0)
    nonpos = all(c <= 0 for i, c in enumerate(a) if i != 1)
    a1_pos = a1 > 0
    disc = a1 * a1 - 4 * a0 * a2
    quad_ok = (not a1_pos) or (disc < 0 and a0 < 0 and a2 < 0)
    if not nonpos:
        diag.append("positive coefficient a_i with i != 1")
    if not quad_ok:
        diag.append("positive a_1 not dominated by the quadratic part")
    ok = divisible and odd_zero and nonpos and quad_ok and quotient.degree == expected
    return Certificate(q, a, odd_zero, nonpos, a1_pos, disc, divisible,
                       "pass" if ok else "fail", diag)


def _certify_chunk(qs: list) -> list:
    mix_moment_polys(max(qs))
    return [certify_q(q) for q in qs]


def certify_range(q_max: int, parallelism: int = 1) -> list:
    """Certificates for q = 4, 6, ..., q_max, ordered by q."""
    if q_max < 4:
        raise CertificateError("q_max must be >= 4")
    qs = list(range(4, q_max + 1, 2))
    if parallelism is None or parallelism <= 0:
        parallelism = os.cpu_count() or 1
    if parallelism == 1 or len(qs) < 4:
        return _certify_chunk(qs)
    # Interleave so that each worker gets a comparable mix of large q.
    chunks = [qs[i::parallelism] for i in range(parallelism) if qs[i::parallelism]]
    out = []
    with ProcessPoolExecutor(max_workers=len(chunks)) as pool:
        for certs in pool.map(_certify_chunk, chunks):
            out.extend(certs)
    out.sort(key=lambda c: c.q)
    return out


def ratio_endpoint_values(q: int, grid: int = 33) -> list:
    """Exact ``r_q^(q-2) / r_{q-2}^q`` on ``i/(grid-1)``, i = 0..grid-1."""
    rq, rp = r_poly(q), r_poly(q - 2)
    vals = []
    for i in range(grid):
        s = Fraction(i, grid - 1)
        vals.append(rq(s) ** (q - 2) / rp(s) ** q)
    return vals
