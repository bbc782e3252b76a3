"""Independent reference computations used to freeze expected values.

Nothing here imports the package: moments come from binomial convolution of
shifted exponential moments, certificates from sympy, and simplex marginal
moments from complete homogeneous symmetric polynomials.
"""

from fractions import Fraction
from itertools import combinations_with_replacement
from math import comb, factorial, prod

import sympy as sp

S = sp.Symbol("s")


def gamma_moment(j: int) -> int:
    """E[(E - 1)^j] for a standard exponential E, by binomial expansion."""
    return sum(comb(j, m) * factorial(m) * (-1) ** (j - m) for m in range(j + 1))


def mix_moment_sympy(n: int) -> sp.Poly:
    """E[(s*G + (s-1)*G')^n] with G, G' independent copies of E - 1."""
    expr = sum(comb(n, m) * S ** m * (S - 1) ** (n - m) * gamma_moment(m) * gamma_moment(n - m)
               for m in range(n + 1))
    return sp.Poly(sp.expand(expr), S)


def ascending(poly: sp.Poly) -> list:
    coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(poly.all_coeffs())]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def h_tilde_sympy(q: int) -> list:
    rq, rp = mix_moment_sympy(q).as_expr(), mix_moment_sympy(q - 2).as_expr()
    h = (q - 2) * sp.diff(rq, S) * rp - q * sp.diff(rp, S) * rq
    centered = sp.expand(h.subs(S, S + sp.Rational(1, 2)))
    quo, rem = sp.div(sp.Poly(centered, S), sp.Poly(S ** 3 - S / 4, S))
    assert rem.is_zero
    return ascending(quo)


def complete_homogeneous(k: int, t) -> float:
    return sum(prod(c) for c in combinations_with_replacement(t, k)) if k else 1.0


def simplex_power_moment(k: int, projections) -> float:
    """E[(theta.X)^k] for X uniform on a simplex whose vertices project to ``projections``."""
    n = len(projections) - 1
    return factorial(k) * factorial(n) / factorial(n + k) * complete_homogeneous(k, projections)


def derangements(n: int) -> int:
    """!n by the classical recurrence !n = (n-1)(!(n-1) + !(n-2))."""
    a, b = 1, 0
    if n == 0:
        return 1
    for m in range(2, n + 1):
        a, b = b, (m - 1) * (a + b)
    return b


# Reference tables for q = 4..10, as (common factor, coefficients of s^(2i)).
REFERENCE_H_TILDE = {
    4: (-96, [1]),
    6: (-720, [15, 8, 144]),
    8: (-1680, [1485, -2880, 105696, 104448, 268544]),
    10: (-5040, [269325, -1323000, 72560880, 280339200, 1409629440, 1162622976, 1050406912]),
}


def reference_even_coeffs(q: int) -> list:
    factor, cs = REFERENCE_H_TILDE[q]
    return [Fraction(factor * c) for c in cs]
