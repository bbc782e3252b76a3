"""Exact rational scalars and dense univariate polynomials over Q.

Scalars are :class:`fractions.Fraction` (aliased as ``BigRat``).  Polynomials
store ascending coefficients, trimmed so that structural equality is
mathematical equality; the zero polynomial has no coefficients.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence, Union

BigRat = Fraction

Scalar = Union[int, Fraction]


def _rat(x: Scalar) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"exact scalar required, got {type(x).__name__}")


class Poly:
    """Immutable polynomial ``sum(coeffs[i] * s**i)`` with exact coefficients."""

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        cs = [_rat(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @classmethod
    def constant(cls, c: Scalar) -> "Poly":
        return cls((c,))

    @classmethod
    def monomial(cls, degree: int, c: Scalar = 1) -> "Poly":
        return cls([0] * degree + [c])

    @classmethod
    def from_roots(cls, roots: Sequence[Scalar], lead: Scalar = 1) -> "Poly":
        p = cls.constant(lead)
        for r in roots:
            p = p * cls((-_rat(r), 1))
        return p

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, i: int) -> Fraction:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Fraction(0)

    def __len__(self) -> int:
        return len(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Poly.constant(other).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            object.__setattr__(self, "_hash", hash(self.coeffs))
        return self._hash

    def __repr__(self) -> str:
        return f"Poly({[str(c) for c in self.coeffs]})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            elif i == 1:
                terms.append(f"{c}*s")
            else:
                terms.append(f"{c}*s^{i}")
        return " + ".join(terms).replace("+ -", "- ")

    # arithmetic

    def __neg__(self) -> "Poly":
        return Poly(-c for c in self.coeffs)

    def __add__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            other = Poly.constant(other)
        if not isinstance(other, Poly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return Poly([x + y for x, y in zip(a, b)] + list(a[len(b):]))

    __radd__ = __add__

    def __sub__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            other = Poly.constant(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return (-self) + other

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return Poly()
            return Poly(c * other for c in self.coeffs)
        if not isinstance(other, Poly):
            return NotImplemented
        return _convolve(self, other)

    __rmul__ = __mul__

    def __call__(self, x: Scalar) -> Fraction:
        return poly_eval(self, _rat(x))

    def __float__(self):
        raise TypeError("Poly has no float value")

    def derivative(self) -> "Poly":
        return Poly(i * c for i, c in enumerate(self.coeffs) if i > 0)

    def shift(self, c: Scalar) -> "Poly":
        return poly_shift(self, c)

    def reflect(self) -> "Poly":
        """The polynomial ``s -> p(1 - s)``."""
        return poly_compose_affine(self, 1, -1)

    def odd_part_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs[1::2])

    def even_part_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs[0::2])

    def __divmod__(self, other: "Poly"):
        return poly_divide_exact(self, other)

    def to_floats(self) -> list[float]:
        return [float(c) for c in self.coeffs]


def _int_scaled(coeffs: Sequence[Fraction]) -> tuple[list[int], int]:
    den = lcm(*(c.denominator for c in coeffs)) if coeffs else 1
    if den == 1:
        return [c.numerator for c in coeffs], 1
    return [c.numerator * (den // c.denominator) for c in coeffs], den


def _convolve(a: Poly, b: Poly) -> Poly:
    if a.is_zero() or b.is_zero():
        return Poly()
    # Convolve over Z with a common denominator; far cheaper than Fraction ops.
    ia, da = _int_scaled(a.coeffs)
    ib, db = _int_scaled(b.coeffs)
    out = [0] * (len(ia) + len(ib) - 1)
    for i, x in enumerate(ia):
        if x == 0:
            continue
        for j, y in enumerate(ib):
            out[i + j] += x * y
    den = da * db
    if den == 1:
        return Poly(out)
    return Poly(Fraction(c, den) for c in out)


def poly_add(a: Poly, b: Poly) -> Poly:
    return a + b


def poly_mul(a: Poly, b: Poly) -> Poly:
    return a * b


def poly_derivative(p: Poly) -> Poly:
    return p.derivative()


def poly_compose_affine(p: Poly, a: Scalar, b: Scalar) -> Poly:
    """Return ``s -> p(a + b*s)`` exactly."""
    lin = Poly((a, b))
    out = Poly()
    for c in reversed(p.coeffs):
        out = out * lin + c
    return out


def poly_shift(p: Poly, c: Scalar) -> Poly:
    """Return q with ``q(s) = p(s + c)``."""
    c = _rat(c)
    if c == 0 or p.degree < 1:
        return p
    # In-place Taylor shift (repeated synthetic division), O(d^2).
    cs = list(p.coeffs)
    n = len(cs)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            cs[j] += c * cs[j + 1]
    return Poly(cs)


def poly_divide_exact(p: Poly, d: Poly) -> tuple[Poly, Poly]:
    """Euclidean division ``p = d*quotient + remainder`` over Q."""
    if d.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    rem = list(p.coeffs)
    dd = d.degree
    lead = d.coeffs[-1]
    if len(rem) - 1 < dd:
        return Poly(), p
    quot = [Fraction(0)] * (len(rem) - dd)
    for k in range(len(rem) - 1 - dd, -1, -1):
        f = rem[k + dd] / lead
        quot[k] = f
        if f:
            for j, dc in enumerate(d.coeffs):
                rem[k + j] -= f * dc
    return Poly(quot), Poly(rem[:dd])


def poly_eval(p: Poly, x: Scalar) -> Fraction:
    """Exact Horner evaluation."""
    x = _rat(x)
    acc = Fraction(0)
    for c in reversed(p.coeffs):
        acc = acc * x + c
    return acc


def format_rational(x: Fraction) -> str:
    """Render as ``"num/den"`` with decimal integers (never floating point)."""
    x = _rat(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text: str) -> Fraction:
    num, _, den = text.partition("/")
    return Fraction(int(num), int(den or 1))
