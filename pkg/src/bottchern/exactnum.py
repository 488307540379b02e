"""Exact arithmetic over the Gaussian rationals Q(i).

Rationals are :class:`fractions.Fraction` (arbitrary precision, always
reduced); :class:`GaussianRational` pairs two of them.
"""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Union

Rational = Fraction

Scalar = Union["GaussianRational", int, Fraction]

_ZERO = Fraction(0)
_ONE = Fraction(1)

_LITERAL_RE = re.compile(r"^([+-]?)(\d+)(?:/(\d+))?(i?)$")


class GaussianRational:
    """An exact complex number ``re + im*i`` with rational parts.

    Instances are immutable and hashable; equality is structural because
    :class:`~fractions.Fraction` is always stored in lowest terms.
    """

    __slots__ = ("re", "im", "_nz")

    def __init__(self, re: int | Fraction | str = 0, im: int | Fraction | str = 0):
        re, im = Fraction(re), Fraction(im)
        object.__setattr__(self, "re", re)
        object.__setattr__(self, "im", im)
        object.__setattr__(self, "_nz", bool(re) or bool(im))

    @classmethod
    def _raw(cls, re: Fraction, im: Fraction) -> "GaussianRational":
        obj = object.__new__(cls)
        object.__setattr__(obj, "re", re)
        object.__setattr__(obj, "im", im)
        # truth tests dominate echelon loops, so zero-ness is cached
        object.__setattr__(obj, "_nz", re._numerator != 0 or im._numerator != 0)
        return obj

    @classmethod
    def coerce(cls, value: Scalar) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, (int, _RationalABC)):
            return cls._raw(Fraction(value), _ZERO)
        if isinstance(value, complex):
            raise TypeError("floating point complex values are not exact")
        raise TypeError(f"cannot convert {type(value).__name__} to GaussianRational")

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    # -- predicates -----------------------------------------------------
    def __bool__(self) -> bool:
        return self._nz

    def is_real(self) -> bool:
        return not self.im

    # -- field operations -----------------------------------------------
    def __add__(self, other: Scalar) -> "GaussianRational":
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational._raw(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other: Scalar) -> "GaussianRational":
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return GaussianRational._raw(self.re - o.re, self.im - o.im)

    def __rsub__(self, other: Scalar) -> "GaussianRational":
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return o - self

    def __neg__(self) -> "GaussianRational":
        return GaussianRational._raw(-self.re, -self.im)

    def __pos__(self) -> "GaussianRational":
        return self

    def __mul__(self, other: Scalar) -> "GaussianRational":
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        a, b, c, d = self.re, self.im, o.re, o.im
        if not b and not d:
            return GaussianRational._raw(a * c, _ZERO)
        return GaussianRational._raw(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def inverse(self) -> "GaussianRational":
        if not self:
            raise ZeroDivisionError("division by zero in Q(i)")
        a, b = self.re, self.im
        if not b:
            return GaussianRational._raw(1 / a, _ZERO)
        norm = a * a + b * b
        return GaussianRational._raw(a / norm, -b / norm)

    def __truediv__(self, other: Scalar) -> "GaussianRational":
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other: Scalar) -> "GaussianRational":
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return o * self.inverse()

    def conj(self) -> "GaussianRational":
        return GaussianRational._raw(self.re, -self.im)

    def norm(self) -> Fraction:
        """``z * conj(z)``, a nonnegative rational."""
        return self.re * self.re + self.im * self.im

    # -- comparison / hashing --------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, _RationalABC)):
            return not self.im and self.re == other
        return NotImplemented

    def __hash__(self) -> int:
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self) -> str:
        return f"GaussianRational({str(self.re)!r}, {str(self.im)!r})"

    def __str__(self) -> str:
        if not self.im:
            return str(self.re)
        if not self.re:
            return _imag_str(self.im)
        sign = "-" if self.im < 0 else "+"
        return f"{self.re} {sign} {_imag_str(abs(self.im))}"


def _imag_str(x: Fraction) -> str:
    return f"{x}i"


ZERO = GaussianRational._raw(_ZERO, _ZERO)
ONE = GaussianRational._raw(_ONE, _ZERO)
I = GaussianRational._raw(_ZERO, _ONE)


def gq(value: Scalar | str) -> GaussianRational:
    """Convenience constructor accepting ints, Fractions or literals ``"1/2i"``."""
    if isinstance(value, str):
        return parse_literal(value)
    return GaussianRational.coerce(value)


def gq_arith(op: str, a: Scalar, b: Scalar) -> GaussianRational:
    """Apply one of ``add``, ``sub``, ``mul``, ``div`` to two scalars.

    Division by zero raises :class:`ZeroDivisionError`.
    """
    a, b = GaussianRational.coerce(a), GaussianRational.coerce(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def gq_conj(a: Scalar) -> GaussianRational:
    return GaussianRational.coerce(a).conj()


def parse_literal(text: str) -> GaussianRational:
    """Parse a single coefficient literal: ``INT``, ``INT/INT``, either with
    an optional trailing ``i``, and an optional sign. A bare ``i`` is ``1i``.
    """
    s = text.strip()
    if s in ("i", "+i"):
        return I
    if s == "-i":
        return -I
    m = _LITERAL_RE.match(s)
    if m is None:
        raise ValueError(f"invalid coefficient literal {text!r}")
    sign, num, den, imag = m.groups()
    if den is not None and int(den) == 0:
        raise ValueError(f"zero denominator in literal {text!r}")
    value = Fraction(int(num), int(den) if den is not None else 1)
    if sign == "-":
        value = -value
    return GaussianRational._raw(_ZERO, value) if imag else GaussianRational._raw(value, _ZERO)


def format_rational(x: Fraction) -> str:
    return str(x)


def literal_terms(z: GaussianRational) -> list[tuple[int, str]]:
    """Split ``z`` into at most two signed literal terms ``(sign, magnitude)``.

    ``1/2 - 3i`` becomes ``[(1, "1/2"), (-1, "3i")]``; zero gives ``[]``.
    """
    out = []
    if z.re:
        out.append((1 if z.re > 0 else -1, str(abs(z.re))))
    if z.im:
        out.append((1 if z.im > 0 else -1, f"{abs(z.im)}i"))
    return out
