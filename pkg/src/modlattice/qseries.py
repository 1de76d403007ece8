"""Truncated q-expansions in ``q = exp(pi*i*z)`` and the level-2 building blocks.

Exponents are powers of ``q = e^{pi i z}``; a lattice of norm ``m`` vectors
contributes to ``q^m``.  The *standard index* ``k`` of Hecke theory is the
exponent ``2k`` here (``q_std = q^2``).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cache

from .exactmath import LinearSystem, QuadExt, solve_linear_exact
from .exactmath.numbers import as_fraction

DEFAULT_ORDER = 64


class PrecisionError(ValueError):
    """A coefficient was requested at or beyond the known precision."""


def _norm_scalar(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    if isinstance(c, QuadExt) and c.b == 0:
        return _norm_scalar(c.a)
    return c


class QSeries:
    """``sum_{e < prec} c_e q^e + O(q^prec)`` with exact coefficients."""

    __slots__ = ("_c", "prec")

    def __init__(self, coeffs, prec: int | None = None):
        if isinstance(coeffs, dict):
            if prec is None:
                raise ValueError("precision is required for a sparse coefficient map")
            if any(e < 0 or e >= prec for e in coeffs):
                raise ValueError("exponent outside [0, prec)")
            c = [0] * prec
            for e, v in coeffs.items():
                c[e] = v
        else:
            c = list(coeffs)
            if prec is None:
                prec = len(c)
            if len(c) > prec:
                c = c[:prec]
            c += [0] * (prec - len(c))
        self._c = [_norm_scalar(v) for v in c]
        self.prec = int(prec)

    @classmethod
    def one(cls, prec: int) -> QSeries:
        return cls([1], prec)

    @classmethod
    def monomial(cls, e: int, prec: int, coeff=1) -> QSeries:
        return cls({e: coeff} if e < prec else {}, prec)

    def __getitem__(self, e: int):
        if e < 0:
            return 0
        if e >= self.prec:
            raise PrecisionError(f"coefficient of q^{e} requested, series known only to O(q^{self.prec})")
        return self._c[e]

    def std(self, k: int):
        """Coefficient in the standard index ``k`` (``q^{2k}``)."""
        return self[2 * k]

    @property
    def std_prec(self) -> int:
        """Standard indices ``k < std_prec`` are known."""
        return (self.prec + 1) // 2

    def coefficients(self) -> list:
        return list(self._c)

    def items(self):
        return [(e, c) for e, c in enumerate(self._c) if c]

    def valuation(self) -> int:
        for e, c in enumerate(self._c):
            if c:
                return e
        return self.prec

    def truncate(self, prec: int) -> QSeries:
        if prec > self.prec:
            raise PrecisionError(f"cannot raise precision from {self.prec} to {prec}")
        return QSeries(self._c[:prec], prec)

    def shift(self, k: int) -> QSeries:
        """Multiply by ``q^k`` (``k >= 0``)."""
        return QSeries([0] * k + self._c, self.prec + k)

    def __add__(self, other):
        if isinstance(other, QSeries):
            p = min(self.prec, other.prec)
            return QSeries([a + b for a, b in zip(self._c[:p], other._c[:p])], p)
        c = list(self._c)
        if c:
            c[0] = c[0] + other
        return QSeries(c, self.prec)

    __radd__ = __add__

    def __neg__(self):
        return QSeries([-a for a in self._c], self.prec)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, QSeries):
            return QSeries([a * other for a in self._c], self.prec)
        va, vb = self.valuation(), other.valuation()
        p = min(self.prec + vb, other.prec + va)
        out = [0] * p
        a_items = [(i, a) for i, a in enumerate(self._c) if a]
        b_items = [(j, b) for j, b in enumerate(other._c) if b]
        for i, a in a_items:
            if i >= p:
                break
            lim = p - i
            for j, b in b_items:
                if j >= lim:
                    break
                out[i + j] += a * b
        return QSeries(out, p)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        if isinstance(scalar, int):
            scalar = Fraction(scalar)
        return QSeries([a / scalar if a else 0 for a in self._c], self.prec)

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative powers are not supported")
        result = QSeries.one(self.prec)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def agrees_with(self, other: QSeries) -> bool:
        p = min(self.prec, other.prec)
        return all(a == b for a, b in zip(self._c[:p], other._c[:p]))

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return self.prec == other.prec and self._c == other._c

    def __hash__(self):
        return hash((self.prec, tuple(self._c)))

    def __repr__(self):
        lead = " + ".join(f"{c}*q^{e}" for e, c in self.items()[:6]) or "0"
        return f"QSeries({lead} + ... + O(q^{self.prec}))"

    def to_text(self) -> str:
        """One line per exponent ``"e value"`` then ``"O(q^N)"``."""
        lines = []
        for e, c in enumerate(self._c):
            lines.append(f"{e} {_scalar_text(c)}")
        lines.append(f"O(q^{self.prec})")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> QSeries:
        coeffs = {}
        prec = None
        for line in text.strip().splitlines():
            line = line.strip()
            if not line:
                continue
            if line.startswith("O(q^"):
                prec = int(line[4:-1])
                continue
            e_text, _, val = line.partition(" ")
            coeffs[int(e_text)] = QuadExt.parse(val)
        if prec is None:
            raise ValueError("missing O(q^N) terminator")
        return cls(coeffs, prec)


def _scalar_text(c) -> str:
    if isinstance(c, QuadExt):
        return f"{c.a.numerator}/{c.a.denominator} + {c.b.numerator}/{c.b.denominator}*sqrt({c.d})"
    c = as_fraction(c)
    return f"{c.numerator}/{c.denominator}"


# ---------------------------------------------------------------------------
# eta-type products
# ---------------------------------------------------------------------------

def euler_product(k: int, prec: int) -> QSeries:
    """``prod_{n>=1} (1 - q^{k n})`` via the pentagonal number theorem."""
    c = [0] * prec
    j = 0
    while True:
        a = k * j * (3 * j - 1) // 2
        b = k * j * (3 * j + 1) // 2
        if a >= prec and b >= prec:
            break
        sign = -1 if j % 2 else 1
        if a < prec:
            c[a] += sign
        if j and b < prec:
            c[b] += sign
        j += 1
    return QSeries(c, prec)


@cache
def _delta16(prec: int) -> QSeries:
    body = (euler_product(2, prec) * euler_product(4, prec)) ** 8
    return body.truncate(prec - 2).shift(2)


def delta16(N: int = DEFAULT_ORDER) -> QSeries:
    """``(eta(z) eta(2z))^8 = q^2 prod (1-q^{2n})^8 (1-q^{4n})^8``."""
    if N < 3:
        raise ValueError("delta16 needs precision N >= 3")
    return _delta16(N)


def _theta_const(prec: int, alternating: bool) -> QSeries:
    c = [0] * prec
    n = 0
    while n * n < prec:
        v = (-1) ** n if alternating else 1
        c[n * n] += v if n == 0 else 2 * v
        n += 1
    return QSeries(c, prec)


@cache
def _theta_d4(prec: int) -> QSeries:
    t3 = _theta_const(prec, False)
    t4 = _theta_const(prec, True)
    return (t3 ** 4 + t4 ** 4) / 2


def theta_d4(N: int = DEFAULT_ORDER) -> QSeries:
    """Theta series of D4, as the even-coordinate-sum half of ``theta_3^4``."""
    if N < 1:
        raise ValueError("theta_d4 needs precision N >= 1")
    return _theta_d4(N)


def big_delta(N: int = DEFAULT_ORDER) -> QSeries:
    """``Delta(z) = eta(z)^24 = q^2 prod (1-q^{2n})^24``."""
    return (euler_product(2, N) ** 24).truncate(N - 2).shift(2)


def big_delta_2z(N: int = DEFAULT_ORDER) -> QSeries:
    """``Delta(2z) = q^4 prod (1-q^{4n})^24``."""
    return (euler_product(4, N) ** 24).truncate(N - 4).shift(4)


@cache
def _phi24(prec: int) -> QSeries:
    return big_delta(prec) - big_delta_2z(prec) * 64


def phi24(N: int = DEFAULT_ORDER) -> QSeries:
    """Fricke-anti-invariant weight-12 cusp form ``Delta(z) - 64 Delta(2z) = q^2 - 88 q^4 + ...``."""
    if N < 5:
        raise ValueError("phi24 needs precision N >= 5")
    return _phi24(N)


def monomial_series(a: int, b: int, c: int, N: int) -> QSeries:
    """``theta_D4^a * Delta16^b * Phi24^c`` to precision ``N``."""
    # extra headroom so valuation shifts keep the full requested precision
    work = N + 2
    out = QSeries.one(work)
    if a:
        out = out * theta_d4(work) ** a
    if b:
        out = out * delta16(work) ** b
    if c:
        out = out * phi24(max(work, 5)) ** c
    return out.truncate(N)


@cache
def _extremal(n: int, N: int) -> QSeries:
    weight = n // 2
    mons = [(weight - 8 * b) // 2 for b in range(weight // 8 + 1)]
    bs = list(range(len(mons)))
    zeros = list(range(2, 2 * (n // 16) + 1, 2))
    work = max(N, 2 * (n // 16) + 3)
    series = [monomial_series(a, b, 0, work) for a, b in zip(mons, bs)]
    rows = [[s[0] for s in series]] + [[s[e] for s in series] for e in zeros]
    rhs = [1] + [0] * len(zeros)
    rep = solve_linear_exact(LinearSystem(rows, rhs, [f"b{b}" for b in bs]))
    if not rep.is_unique:
        raise ValueError(f"no unique extremal series for rank {n}")
    out = QSeries([0], work)
    for s, b in zip(series, bs):
        out = out + s * rep[f"b{b}"]
    return out.truncate(N)


def extremal_theta(n: int, N: int = DEFAULT_ORDER) -> QSeries:
    """Theta series of an extremal even 2-modular lattice of rank ``n``."""
    if n <= 0 or n % 4:
        raise ValueError(f"rank must be a positive multiple of 4, got {n}")
    return _extremal(n, N)


def extremal_min(n: int) -> int:
    """``2*floor(n/16) + 2``."""
    return 2 * (n // 16) + 2


@dataclass(frozen=True)
class SeriesId:
    tag: str
    n: int | None = None

    @property
    def weight(self) -> int:
        return {"delta16": 8, "thetaD4": 2, "phi24": 12, "bigDelta1": 12, "bigDelta2": 12}.get(
            self.tag, (self.n or 0) // 2
        )

    @classmethod
    def parse(cls, text: str) -> SeriesId:
        tag, _, arg = text.partition(":")
        aliases = {"theta_d4": "thetaD4", "thetad4": "thetaD4", "delta": "bigDelta1"}
        tag = aliases.get(tag, tag)
        if tag == "extremal":
            return cls("extremal", int(arg))
        if tag not in {"delta16", "thetaD4", "phi24", "bigDelta1", "bigDelta2"}:
            raise ValueError(f"unknown series {text!r}")
        return cls(tag)

    def build(self, N: int = DEFAULT_ORDER) -> QSeries:
        if self.tag == "extremal":
            return extremal_theta(self.n, N)
        return {
            "delta16": delta16,
            "thetaD4": theta_d4,
            "phi24": phi24,
            "bigDelta1": big_delta,
            "bigDelta2": big_delta_2z,
        }[self.tag](N)
