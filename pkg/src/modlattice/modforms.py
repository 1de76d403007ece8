"""Level-2 modular forms: monomial bases, Hecke operators, the weight-26 eigen split.

All Hecke arithmetic uses the standard index ``k`` (the coefficient of
``q^{2k}`` in the ``q = e^{pi i z}`` expansions of :mod:`modlattice.qseries`).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .exactmath import (
    LinearSystem,
    QuadExt,
    rref,
    solve_linear_exact,
    squarefree_decomposition,
)
from .qseries import PrecisionError, QSeries, delta16, monomial_series, theta_d4

PRIMES = (2, 3, 5, 7, 11, 13)


@dataclass(frozen=True)
class MonomialBasis:
    weight: int
    monomials: tuple  # (a, b, c): theta_D4^a Delta16^b Phi24^c
    expansions: tuple

    @property
    def cuspidal(self) -> list:
        return [m for m in self.monomials if m[1] >= 1 or m[2] == 1]


def monomials(weight: int) -> list[tuple[int, int, int]]:
    out = []
    for c in (0, 1):
        for b in range(weight // 8 + 1):
            rest = weight - 8 * b - 12 * c
            if rest >= 0 and rest % 2 == 0:
                out.append((rest // 2, b, c))
    return out


def monomial_basis(weight: int, N: int) -> MonomialBasis:
    mons = tuple(monomials(weight))
    return MonomialBasis(weight, mons, tuple(monomial_series(a, b, c, N) for a, b, c in mons))


@dataclass(frozen=True)
class EchelonBasis:
    weight: int
    forms: tuple

    @property
    def leading_exponents(self) -> list[int]:
        return [f.valuation() for f in self.forms]

    def __len__(self):
        return len(self.forms)

    def __getitem__(self, i):
        return self.forms[i]

    def coordinates(self, f: QSeries) -> list:
        """Coordinates of ``f`` in this basis; raises if ``f`` is not in the span."""
        coords = [f[e] for e in self.leading_exponents]
        rest = f
        for c, g in zip(coords, self.forms):
            if c:
                rest = rest - g * c
        if rest.valuation() < rest.prec:
            raise ValueError(f"series is not in the span (residual at q^{rest.valuation()})")
        return coords


def echelonize(series: list[QSeries], N: int, weight: int) -> EchelonBasis:
    rows = [[s[e] for e in range(N)] for s in series]
    red, pivots = rref(rows)
    if len(pivots) < len(series):
        raise PrecisionError(
            f"precision {N} cannot separate the {len(series)} weight-{weight} forms (rank {len(pivots)})"
        )
    return EchelonBasis(weight, tuple(QSeries(r, N) for r in red))


def cusp_basis(weight: int, N: int = 40) -> EchelonBasis:
    """Reduced echelon basis of the cuspidal monomials of ``weight``."""
    if weight < 8 or weight % 2:
        raise ValueError("weight must be even and at least 8")
    mons = [m for m in monomials(weight) if m[1] >= 1 or m[2] == 1]
    return echelonize([monomial_series(a, b, c, N) for a, b, c in mons], N, weight)


def modular_basis(weight: int, N: int = 40) -> EchelonBasis:
    mons = monomials(weight)
    return echelonize([monomial_series(a, b, c, N) for a, b, c in mons], N, weight)


def hecke_apply(f: QSeries, p: int, weight: int, N: int | None = None) -> QSeries:
    """``T_p`` (``p`` odd) or ``U_2`` on standard-index coefficients."""
    if any(f[e] for e in range(1, f.prec, 2)):
        raise ValueError("hecke_apply expects a series in even powers of q")
    k_known = f.std_prec
    K = (k_known - 1) // p + 1
    out = {}
    for k in range(K):
        v = f.std(p * k)
        if p != 2 and k % p == 0:
            v = v + f.std(k // p) * p ** (weight - 1)
        if v:
            out[2 * k] = v
    prec = 2 * K - 1
    res = QSeries(out, prec)
    if N is not None:
        if prec < N:
            raise PrecisionError(f"T_{p} output known to O(q^{prec}); O(q^{N}) requested")
        res = res.truncate(N)
    return res


def pseudo_form(N: int) -> QSeries:
    """``theta_D4 * Delta16^3`` (``q^6 - 324 q^10 + 4096 q^12 + ...``)."""
    return (theta_d4(N + 2) * delta16(N + 2) ** 3).truncate(N)


@dataclass
class Eigenform:
    expansion: QSeries
    hecke_eigenvalues: dict
    weight: int

    def c(self, k: int):
        return self.expansion.std(k)


@dataclass
class PseudoEigenform:
    expansion: QSeries
    components: tuple  # (g1, g2) with expansion = scale * (g1 - g2)
    scale: object

    def check(self) -> bool:
        g1, g2 = self.components
        diff = (g1.expansion - g2.expansion) * self.scale
        return diff.agrees_with(self.expansion)


@dataclass
class EigenSplit:
    h1: Eigenform
    h2: Eigenform
    scale: QuadExt  # theta_D4 Delta16^3 = scale * (h2 - h1)
    radicand: int
    trace: Fraction
    det: Fraction
    t3_matrix: list  # T3 on the basis (g, T3 g): columns are images
    f_coordinates: dict = field(default_factory=dict)
    precision: int = 0
    notes: list = field(default_factory=list)

    @property
    def pseudo(self) -> PseudoEigenform:
        g = pseudo_form(self.h1.expansion.prec)
        return PseudoEigenform(g, (self.h2, self.h1), self.scale)


def _check_eigen(h: QSeries, lam, p: int, weight: int) -> None:
    img = hecke_apply(h, p, weight)
    if not img.agrees_with(h * lam):
        raise ArithmeticError(f"T_{p} eigen-equation fails")


def eigen_split_weight26(N: int = 40) -> EigenSplit:
    """Split ``theta_D4 Delta16^3`` into two normalized weight-26 eigenforms."""
    weight = 26
    K = max(8, (N + 1) // 2)  # standard indices kept in the eigenforms
    Ng = 2 * 9 * K + 2
    g = pseudo_form(Ng)
    tg = hecke_apply(g, 3, weight)
    ttg = hecke_apply(tg, 3, weight)
    basis = cusp_basis(weight, 2 * K)
    cg = basis.coordinates(g.truncate(2 * K))
    ctg = basis.coordinates(tg.truncate(2 * K))
    cttg = basis.coordinates(ttg.truncate(2 * K))

    # T3(T3 g) = alpha g + beta T3 g
    rep = solve_linear_exact(LinearSystem([[x, y] for x, y in zip(cg, ctg)], cttg, ["alpha", "beta"]))
    if not rep.is_unique:
        raise ArithmeticError("T3-orbit of theta_D4 Delta16^3 is not two-dimensional")
    alpha, beta = rep["alpha"], rep["beta"]
    if not (g * alpha + tg * beta).agrees_with(ttg):
        raise ArithmeticError("T3 relation fails beyond the echelon pivots")
    trace, det = beta, -alpha
    disc = trace * trace - 4 * det
    if disc <= 0:
        raise ArithmeticError("characteristic polynomial of T3 has no real quadratic splitting field")
    f_, d = squarefree_decomposition(disc.numerator * disc.denominator)
    if d == 1:
        raise ArithmeticError("characteristic polynomial of T3 splits over Q")
    root = QuadExt(0, Fraction(f_, disc.denominator), d)  # sqrt(disc)
    lam_plus = (root + trace) / 2
    lam_minus = (-root + trace) / 2

    def make(lam, mu) -> Eigenform:
        h = tg + g * (-mu)
        h = (h / h.std(1)).truncate(2 * K)
        eig = {}
        for p in (2, 3, 5, 7):
            eig[p] = h.std(p)
            _check_eigen(h, eig[p], p, weight)
        if eig[3] != lam:
            raise ArithmeticError("eigenvalue mismatch at p=3")
        return Eigenform(h, eig, weight)

    h1 = make(lam_minus, lam_plus)
    h2 = make(lam_plus, lam_minus)
    scale = (lam_plus - lam_minus).inverse()
    if not ((h2.expansion - h1.expansion) * scale).agrees_with(g):
        raise ArithmeticError("difference identity fails")
    coords = {
        "h1": _coords_quad(basis, h1.expansion),
        "h2": _coords_quad(basis, h2.expansion),
    }
    notes = [
        (
            "h1 is the eigenform whose q^6 coefficient is 12(15827 - 400 sqrt(106705)); "
            "its f-basis coordinate on f3 equals that coefficient because the basis is reduced"
        ),
    ]
    return EigenSplit(h1, h2, scale, d, trace, det, [[0, alpha], [1, beta]], coords, Ng, notes)


def _coords_quad(basis: EchelonBasis, f: QSeries) -> list:
    n = min(f.prec, basis.forms[0].prec)
    f = f.truncate(n)
    coords = [f[e] for e in basis.leading_exponents]
    rest = f
    for c, b in zip(coords, basis.forms):
        rest = rest - b.truncate(n) * c
    if rest.valuation() < rest.prec:
        raise ValueError("eigenform is not in the cusp space")
    return coords


def hecke_recurrence_holds(h: Eigenform, p: int) -> bool:
    """``c(p^(a+1)) = c(p) c(p^a) - p^(k-1) c(p^(a-1))`` (no second term for p=2)."""
    kp = h.expansion.std_prec
    cp = h.c(p)
    a = 1
    while p ** (a + 1) < kp:
        rhs = cp * h.c(p ** a)
        if p != 2:
            rhs = rhs - h.c(p ** (a - 1)) * p ** (h.weight - 1)
        if h.c(p ** (a + 1)) != rhs:
            return False
        a += 1
    return True


def multiplicative_holds(h: Eigenform, pairs=((2, 3), (2, 5), (3, 5), (2, 7), (3, 7))) -> bool:
    kp = h.expansion.std_prec
    return all(h.c(m * n) == h.c(m) * h.c(n) for m, n in pairs if m * n < kp)


@dataclass
class PseudoEigenReport:
    precision: int
    leading: dict
    a_pow2: dict
    a_3pow2: dict

    @property
    def ok(self) -> bool:
        return all(v == 0 for v in self.a_pow2.values()) and all(
            v == 2 ** (12 * i) for i, v in self.a_3pow2.items()
        )

    def to_json(self) -> dict:
        return {
            "precision": self.precision,
            "leading": {str(k): str(v) for k, v in self.leading.items()},
            "a(2^i)": {str(i): str(v) for i, v in self.a_pow2.items()},
            "a(3*2^i)": {str(i): str(v) for i, v in self.a_3pow2.items()},
            "ok": self.ok,
        }


def pseudo_eigen_check(i_max: int = 5, N: int | None = None, *, auto_raise: bool = True) -> PseudoEigenReport:
    """Check ``a(2^i) = 0`` and ``a(3*2^i) = 2^(12i)`` for ``i = 1..i_max``."""
    need = 2 * 3 * 2 ** i_max + 1
    if N is None or (N < need and auto_raise):
        N = max(N or 0, need)
    if N < need:
        raise PrecisionError(f"pseudo-eigenform check to i={i_max} needs precision {need}, got {N}")
    g = pseudo_form(N)
    leading = {e: g[e] for e in (6, 8, 10, 12)}
    a_pow2 = {i: g.std(2 ** i) for i in range(1, i_max + 1)}
    a_3pow2 = {i: g.std(3 * 2 ** i) for i in range(1, i_max + 1)}
    return PseudoEigenReport(N, leading, a_pow2, a_3pow2)
