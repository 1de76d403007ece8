"""Zonal harmonic polynomials ``P_{d,x'}`` in scalar form.

With ``t = (x, x')``, ``r = (x, x)`` and ``s = (x', x')`` the polynomial is

    P(x) = sum_i c_i * t^(d-2i) * (s*r)^i,      c_0 = 1,

so it is stored as the short coefficient vector ``c`` and evaluated from the
three scalars only.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cache

from .exactmath import LinearSystem, solve_linear_exact
from .exactmath.numbers import as_fraction


@dataclass(frozen=True)
class ZonalCoeffs:
    n: int
    d: int
    c: tuple

    def __iter__(self):
        return iter(self.c)

    def __len__(self):
        return len(self.c)


@dataclass(frozen=True)
class InnerProductPoint:
    """``m = (x,x)``, ``s = (x',x')``, ``u = (x,x')^2``."""

    m: Fraction
    s: Fraction
    u: Fraction

    def __init__(self, m, s, u):
        m, s, u = as_fraction(m), as_fraction(s), as_fraction(u)
        if m < 0 or s < 0 or u < 0:
            raise ValueError("norms and squared inner products are nonnegative")
        if u > m * s:
            raise ValueError(f"Cauchy-Schwarz violated: u={u} > m*s={m * s}")
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "u", u)


def laplacian(terms: dict, n: int) -> dict:
    """Apply the Laplacian in ``x`` to ``sum coef * t^a r^b s^e``.

    ``terms`` maps ``(a, b, e)`` to a coefficient; uses
    ``Lap(t^a r^b) = a(a-1) s t^(a-2) r^b + (2bn + 4b(b-1) + 4ab) t^a r^(b-1)``.
    """
    out: dict = {}
    for (a, b, e), coef in terms.items():
        if not coef:
            continue
        if a >= 2:
            key = (a - 2, b, e + 1)
            out[key] = out.get(key, 0) + coef * a * (a - 1)
        if b >= 1:
            key = (a, b - 1, e)
            out[key] = out.get(key, 0) + coef * (2 * b * n + 4 * b * (b - 1) + 4 * a * b)
    return {k: v for k, v in out.items() if v}


def polynomial_terms(z: ZonalCoeffs) -> dict:
    return {(z.d - 2 * i, i, i): c for i, c in enumerate(z.c)}


@cache
def zonal_coeffs(n: int, d: int) -> ZonalCoeffs:
    """Unique harmonic ``P_{d,x'}`` on R^n with leading coefficient 1."""
    if n < 2 or d < 2 or d % 2 or d > 12:
        raise ValueError(f"zonal_coeffs needs n >= 2 and even 2 <= d <= 12, got n={n}, d={d}")
    k = d // 2
    labels = [f"c{i}" for i in range(1, k + 1)]
    # Lap P = sum_j L_j t^(d-2j) r^(j-1) s^j; each L_j is linear in (c_0..c_k)
    rows, rhs = [], []
    for j in range(1, k + 1):
        row = [Fraction(0)] * k
        const = Fraction(0)
        for i in range(k + 1):
            img = laplacian({(d - 2 * i, i, i): Fraction(1)}, n)
            w = img.get((d - 2 * j, j - 1, j), Fraction(0))
            if i == 0:
                const += w
            else:
                row[i - 1] += w
        rows.append(row)
        rhs.append(-const)
    rep = solve_linear_exact(LinearSystem(rows, rhs, labels))
    return ZonalCoeffs(n, d, (Fraction(1),) + tuple(rep[lab] for lab in labels))


def zonal_eval(z: ZonalCoeffs, pt: InnerProductPoint) -> Fraction:
    """``sum_i c_i u^((d-2i)/2) (s m)^i``."""
    sm = pt.s * pt.m
    return sum((c * pt.u ** ((z.d - 2 * i) // 2) * sm ** i for i, c in enumerate(z.c)), Fraction(0))


def zonal_value(z: ZonalCoeffs, m, s, u):
    """Unchecked evaluation; ``s`` may be a ParamPoly (coefficients become polynomials)."""
    acc = 0
    for i, c in enumerate(z.c):
        acc = acc + c * u ** ((z.d - 2 * i) // 2) * (s * m) ** i
    return acc


def is_harmonic(z: ZonalCoeffs) -> bool:
    return not laplacian(polynomial_terms(z), z.n)


def weighted_sum(z: ZonalCoeffs, m, s, counts: dict, u_scale=1):
    """``sum_j counts[j] * P(m, s, u_scale * j^2)``."""
    return sum((cnt * zonal_value(z, m, s, Fraction(u_scale) * j * j) for j, cnt in counts.items()), 0)
