"""Exact scalars: rationals (``fractions.Fraction``) and real quadratic extensions."""
from __future__ import annotations

from fractions import Fraction
from math import isqrt
from numbers import Rational as _RationalABC

Rational = Fraction


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, _RationalABC)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def squarefree_decomposition(n: int) -> tuple[int, int]:
    """Return ``(f, d)`` with ``n == f*f*d`` and ``d`` squarefree (``n > 0``)."""
    if n <= 0:
        raise ValueError("squarefree_decomposition needs a positive integer")
    f, d = 1, 1
    p = 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        f *= p ** (e // 2)
        if e % 2:
            d *= p
        p += 1 if p == 2 else 2
    return f, d * n


def is_squarefree(d: int) -> bool:
    return d > 0 and squarefree_decomposition(d)[1] == d


class QuadExt:
    """The number ``a + b*sqrt(d)`` with rational ``a, b`` and squarefree ``d > 1``.

    Values with different radicands never combine; a rational operand is
    promoted on the fly.
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b=0, d: int = 2):
        d = int(d)
        if not is_squarefree(d) or d == 1:
            raise ValueError(f"radicand must be a squarefree integer > 1, got {d}")
        self.a = as_fraction(a)
        self.b = as_fraction(b)
        self.d = d

    @classmethod
    def sqrt(cls, d: int) -> QuadExt:
        return cls(0, 1, d)

    def _coerce(self, other):
        if isinstance(other, QuadExt):
            if other.d != self.d:
                raise ValueError(f"cannot combine sqrt({self.d}) with sqrt({other.d})")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadExt(other, 0, self.d)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadExt(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(-self.a, -self.b, self.d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadExt(self.a - o.a, self.b - o.b, self.d)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadExt(self.a * o.a + self.d * self.b * o.b, self.a * o.b + self.b * o.a, self.d)

    __rmul__ = __mul__

    def conjugate(self) -> QuadExt:
        return QuadExt(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        """Field norm ``a^2 - d*b^2``."""
        return self.a * self.a - self.d * self.b * self.b

    def trace(self) -> Fraction:
        return 2 * self.a

    def inverse(self) -> QuadExt:
        nrm = self.norm()
        if nrm == 0:
            raise ZeroDivisionError("QuadExt division by zero")
        return QuadExt(self.a / nrm, -self.b / nrm, self.d)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        result, base = QuadExt(1, 0, self.d), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def is_rational(self) -> bool:
        return self.b == 0

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __eq__(self, other):
        if isinstance(other, QuadExt):
            if other.d != self.d:
                return not self and not other
            return self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def sign(self) -> int:
        """Sign of the real number ``a + b*sqrt(d)``, decided exactly."""
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sa == sb or sb == 0:
            return sa
        if sa == 0:
            return sb
        # opposite signs: compare a^2 with d*b^2
        diff = self.a * self.a - self.d * self.b * self.b
        return sa if diff > 0 else (0 if diff == 0 else sb)

    def __float__(self):
        return float(self.a) + float(self.b) * self.d ** 0.5

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        return f"{self.a} + {self.b}*sqrt({self.d})"

    def __repr__(self):
        return f"QuadExt({self.a!s}, {self.b!s}, {self.d})"

    @classmethod
    def parse(cls, text: str) -> QuadExt | Fraction:
        """Inverse of ``str``: ``"a + b*sqrt(d)"`` or a bare fraction."""
        text = text.strip()
        if "sqrt(" not in text:
            return Fraction(text)
        head, _, tail = text.rpartition(" + ")
        b_text, _, rad = tail.partition("*sqrt(")
        return cls(Fraction(head), Fraction(b_text), int(rad.rstrip(")")))


def floor_sqrt_fraction(x: Fraction) -> int:
    """``floor(sqrt(x))`` for ``x >= 0``, computed exactly."""
    if x < 0:
        raise ValueError("negative argument")
    p, q = x.numerator, x.denominator
    return isqrt(p * q) // q
