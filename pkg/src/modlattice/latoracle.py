"""Brute-force lattice oracle: exact shell enumeration and direct (weighted) theta series.

Everything here works from an integer Gram matrix and never uses floating
point in an accept/reject decision.  It is the independent check for the
identities that :mod:`modlattice.configsys` uses abstractly.
"""
from __future__ import annotations

import math
import random
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cache
from importlib import resources
from pathlib import Path

from .qseries import QSeries
from .zonal import zonal_coeffs, zonal_value

DEFAULT_NODE_CAP = 10 ** 7


class ResourceLimitError(RuntimeError):
    pass


def _ldl(gram) -> tuple[list, list]:
    """Exact ``G = U^T D U`` with unit upper-triangular ``U``; returns (mu, d)."""
    n = len(gram)
    a = [[Fraction(x) for x in row] for row in gram]
    mu = [[Fraction(0)] * n for _ in range(n)]
    d = [Fraction(0)] * n
    for i in range(n):
        d[i] = a[i][i] - sum((mu[k][i] ** 2 * d[k] for k in range(i)), Fraction(0))
        if d[i] <= 0:
            raise ValueError("Gram matrix is not positive definite")
        mu[i][i] = Fraction(1)
        for j in range(i + 1, n):
            mu[i][j] = (a[i][j] - sum((mu[k][i] * mu[k][j] * d[k] for k in range(i)), Fraction(0))) / d[i]
    return mu, d


def _inverse(gram) -> list:
    n = len(gram)
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(gram)]
    for c in range(n):
        p = next(r for r in range(c, n) if m[r][c] != 0)
        m[c], m[p] = m[p], m[c]
        piv = m[c][c]
        m[c] = [x / piv for x in m[c]]
        for r in range(n):
            if r != c and m[r][c]:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return [row[n:] for row in m]


@dataclass(frozen=True)
class Shell:
    norm: int
    vectors: tuple  # one representative per {x, -x}
    gram: tuple

    def __len__(self):
        return 2 * len(self.vectors)

    def full(self):
        for v in self.vectors:
            yield v
            yield tuple(-x for x in v)


class Lattice:
    """Positive definite integral lattice given by its Gram matrix."""

    def __init__(self, gram: Sequence[Sequence[int]], name: str = "L"):
        g = tuple(tuple(int(x) for x in row) for row in gram)
        n = len(g)
        if any(len(r) != n for r in g):
            raise ValueError("Gram matrix must be square")
        if any(g[i][j] != g[j][i] for i in range(n) for j in range(n)):
            raise ValueError("Gram matrix must be symmetric")
        self.gram = g
        self.n = n
        self.name = name
        self._mu, self._d = _ldl(g)
        self._shells: dict[int, Shell] = {}
        self._enumerated_to = 0

    @property
    def is_even(self) -> bool:
        return all(self.gram[i][i] % 2 == 0 for i in range(self.n))

    def determinant(self) -> Fraction:
        return math.prod(self._d, start=Fraction(1))

    def inner(self, x, y):
        return sum(x[i] * sum(self.gram[i][j] * y[j] for j in range(self.n)) for i in range(self.n))

    def norm(self, x):
        return self.inner(x, x)

    def dual_gram(self) -> list:
        return _inverse(self.gram)

    def rescaled_dual(self, scale: int = 2) -> Lattice:
        """``sqrt(scale) * L^#``; requires ``scale * G^{-1}`` to be integral."""
        inv = self.dual_gram()
        g = [[scale * x for x in row] for row in inv]
        if any(x.denominator != 1 for row in g for x in row):
            raise ValueError(f"{scale} * dual Gram is not integral")
        return Lattice([[int(x) for x in row] for row in g], name=f"sqrt{scale}*{self.name}#")

    # -- enumeration -----------------------------------------------------
    def enumerate(self, max_norm: int, node_cap: int = DEFAULT_NODE_CAP) -> dict[int, Shell]:
        """All shells of norm ``1..max_norm`` (cached).

        The search runs on the rational LDL^T decomposition with every
        denominator cleared, so each coordinate range is cut by an integer
        square root; no rounding enters any accept or reject decision.
        """
        if max_norm <= self._enumerated_to:
            return {m: self.shell(m) for m in range(1, max_norm + 1)}
        n, g = self.n, self.gram
        # centers scaled by L are integers; d_i (x_i + c_i)^2 = w_i Y_i^2 / R
        L = math.lcm(*(v.denominator for row in self._mu for v in row))
        R = math.lcm(*(v.denominator for v in self._d)) * L * L
        mu = [[int(v * L) for v in row] for row in self._mu]
        w = [int(v * R) // (L * L) for v in self._d]
        found: dict[int, list] = {}
        x = [0] * n
        centers = [0] * n
        nodes = 0

        def rec(i: int, budget: int, all_zero: bool):
            nonlocal nodes
            nodes += 1
            if nodes > node_cap:
                raise ResourceLimitError(f"enumeration exceeded {node_cap} nodes")
            c, wi = centers[i], w[i]
            t = math.isqrt(budget // wi)
            lo = -((t + c) // L)
            hi = (t - c) // L
            if all_zero:
                lo = max(lo, 0)
            for xi in range(lo, hi + 1):
                y = L * xi + c
                q = wi * y * y
                if i == 0:
                    if all_zero and xi == 0:
                        continue
                    x[0] = xi
                    nrm = sum(x[a] * sum(g[a][b] * x[b] for b in range(n)) for a in range(n))
                    if nrm <= max_norm:
                        found.setdefault(nrm, []).append(tuple(x))
                    continue
                x[i] = xi
                if xi:
                    for k in range(i):
                        centers[k] += mu[k][i] * xi
                rec(i - 1, budget - q, all_zero and xi == 0)
                if xi:
                    for k in range(i):
                        centers[k] -= mu[k][i] * xi
            x[i] = 0

        rec(n - 1, R * max_norm, True)
        for m in range(1, max_norm + 1):
            vecs = sorted(found.get(m, []))
            self._shells[m] = Shell(m, tuple(vecs), self.gram)
        self._enumerated_to = max_norm
        return {m: self._shells[m] for m in range(1, max_norm + 1)}

    def shell(self, m: int) -> Shell:
        if m < 1:
            raise ValueError("shell norm must be >= 1")
        if m > self._enumerated_to:
            self.enumerate(m)
        return self._shells[m]

    # -- io ----------------------------------------------------------------
    @classmethod
    def from_text(cls, text: str, name: str = "L") -> Lattice:
        lines = [ln.split() for ln in text.strip().splitlines() if ln.strip()]
        n = int(lines[0][0])
        rows = [[int(v) for v in ln] for ln in lines[1 : n + 1]]
        if len(rows) != n:
            raise ValueError(f"expected {n} Gram rows, found {len(rows)}")
        return cls(rows, name=name)

    @classmethod
    def from_file(cls, path, name: str | None = None) -> Lattice:
        path = Path(path)
        return cls.from_text(path.read_text(), name=name or path.stem)

    def to_text(self) -> str:
        return f"{self.n}\n" + "\n".join(" ".join(str(v) for v in row) for row in self.gram) + "\n"

    def __repr__(self):
        return f"Lattice({self.name}, n={self.n})"


# -- standard test lattices ---------------------------------------------------

def d4() -> Lattice:
    return Lattice([[2, -1, 0, 0], [-1, 2, -1, -1], [0, -1, 2, 0], [0, -1, 0, 2]], name="D4")


def zn(n: int) -> Lattice:
    return Lattice([[int(i == j) for j in range(n)] for i in range(n)], name=f"Z{n}")


@cache
def bw16() -> Lattice:
    """Barnes-Wall lattice from the shipped Gram file, validated on load."""
    text = resources.files("modlattice").joinpath("data/bw16.gram").read_text()
    lat = Lattice.from_text(text, name="BW16")
    if not lat.is_even or lat.determinant() != 256:
        raise ValueError("BW16 data file failed its invariants (even, det 2^8)")
    if lat.shell(2).vectors or len(lat.shell(4)) != 4320:
        raise ValueError("BW16 data file failed its invariants (min 4, 4320 minimal vectors)")
    return lat


# -- theta series -------------------------------------------------------------

def theta_direct(L: Lattice, N: int) -> QSeries:
    shells = L.enumerate(N - 1) if N > 1 else {}
    c = [1] + [len(shells[m]) for m in range(1, N)]
    return QSeries(c, N)


def _integral_form(coeffs) -> tuple[list[int], int]:
    """Write a rational vector as ``ints / den`` with a common denominator."""
    coeffs = [Fraction(c) for c in coeffs]
    den = math.lcm(*(c.denominator for c in coeffs))
    return [int(c * den) for c in coeffs], den


def _square_histogram(vectors, w: list[int]) -> dict[int, int]:
    """``t^2 -> count`` for the integer inner products ``t = v . w``."""
    hist: dict[int, int] = {}
    for v in vectors:
        t = sum(a * b for a, b in zip(v, w))
        hist[t * t] = hist.get(t * t, 0) + 1
    return hist


def weighted_theta(L: Lattice, d: int, N: int, s, linear, scale=1, n: int | None = None) -> QSeries:
    """``sum_x P_{d,x'}(x) q^{(x,x)}`` where ``(x,x')^2 = scale * (x . linear)^2``.

    ``linear`` is a rational vector; ``s = (x',x')``.
    """
    z = zonal_coeffs(n or L.n, d)
    w, den = _integral_form(linear)
    factor = Fraction(scale) / (den * den)
    shells = L.enumerate(N - 1) if N > 1 else {}
    c = [0] * N
    for m in range(1, N):
        hist = _square_histogram(shells[m].vectors, w)
        acc = sum((cnt * zonal_value(z, m, s, t2 * factor) for t2, cnt in hist.items()), Fraction(0))
        c[m] = 2 * acc
    return QSeries(c, N)


def weighted_theta_direct(L: Lattice, xprime, d: int, N: int) -> QSeries:
    """Weighted theta of ``L`` for the zonal harmonic around ``xprime``.

    ``xprime`` is given in basis coordinates; rational coordinates are fine,
    since the identities being tested hold for every direction.
    """
    xprime = [Fraction(v) for v in xprime]
    gx = [sum(L.gram[i][j] * xprime[j] for j in range(L.n)) for i in range(L.n)]
    s = sum(a * b for a, b in zip(xprime, gx))
    return weighted_theta(L, d, N, s, gx)


def weighted_theta_dual(L: Lattice, xprime, d: int, N: int, Lp: Lattice | None = None) -> QSeries:
    """Same harmonic, summed over ``L' = sqrt(2) L^#`` (dual basis coordinates).

    For ``y`` in the rescaled dual basis, ``(x', y) = sqrt(2) * (a . y)`` where
    ``a`` are the coordinates of ``x'`` in the basis of ``L``.
    """
    Lp = Lp or L.rescaled_dual()
    a = [Fraction(v) for v in xprime]
    s = L.norm(a)
    return weighted_theta(Lp, d, N, s, a, scale=2, n=L.n)


# -- designs and configurations -----------------------------------------------

def random_direction(n: int, rng: random.Random, span: int = 5) -> list[Fraction]:
    while True:
        v = [Fraction(rng.randint(-span, span), rng.randint(1, 4)) for _ in range(n)]
        if any(v):
            return v


def zonal_shell_sum(shell: Shell, d: int, xprime) -> Fraction:
    n = len(shell.gram)
    g = shell.gram
    gx = [sum(g[i][j] * Fraction(xprime[j]) for j in range(n)) for i in range(n)]
    s = sum(Fraction(a) * b for a, b in zip(xprime, gx))
    z = zonal_coeffs(n, d)
    w, den = _integral_form(gx)
    hist = _square_histogram(shell.vectors, w)
    return 2 * sum((cnt * zonal_value(z, shell.norm, s, Fraction(t2, den * den)) for t2, cnt in hist.items()), Fraction(0))


def design_defect(shell: Shell, d: int, trials: int = 3, seed: int = 0) -> Fraction:
    """Largest ``|sum_{x in S} P_{d,x'}(x)|`` over random rational ``x'``."""
    if not shell.vectors:
        raise ValueError("design_defect needs a nonempty shell")
    rng = random.Random(seed)
    worst = Fraction(0)
    for _ in range(trials):
        worst = max(worst, abs(zonal_shell_sum(shell, d, random_direction(len(shell.gram), rng))))
    return worst


def harmonic_sum(shell: Shell, poly: Callable) -> Fraction:
    return sum((Fraction(poly(v)) for v in shell.full()), Fraction(0))


def config_count(L: Lattice, xprime, m: int, dual: bool = False) -> dict[int, int]:
    """Histogram ``j -> #{x in L_m : |(x, x')| = j}`` over the full shell."""
    xprime = [Fraction(v) for v in xprime]
    if not any(xprime):
        raise ValueError("x' must be nonzero")
    if not dual and any(v.denominator != 1 for v in xprime):
        raise ValueError("x' must lie in L (integer coordinates) unless dual=True")
    gx = [sum(L.gram[i][j] * xprime[j] for j in range(L.n)) for i in range(L.n)]
    if any(v.denominator != 1 for v in gx):
        raise ValueError("x' does not lie in the dual lattice")
    hist: dict[int, int] = {}
    for v in L.shell(m).vectors:
        j = abs(int(sum(a * b for a, b in zip(v, gx))))
        hist[j] = hist.get(j, 0) + 2
    return dict(sorted(hist.items()))


@dataclass
class ModularityEvidence:
    passed: bool
    lattice: str
    precision: int
    theta: list = field(default_factory=list)
    theta_rescaled_dual: list = field(default_factory=list)
    note: str = "theta agreement of L and sqrt(2) L^# is necessary evidence, not an isometry proof"

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "lattice": self.lattice,
            "precision": self.precision,
            "theta": [str(c) for c in self.theta],
            "theta_rescaled_dual": [str(c) for c in self.theta_rescaled_dual],
            "note": self.note,
        }


def modularity_evidence(L: Lattice, N: int = 8) -> ModularityEvidence:
    if not L.is_even:
        return ModularityEvidence(False, L.name, N, note="lattice is not even")
    try:
        Lp = L.rescaled_dual(2)
    except ValueError:
        return ModularityEvidence(False, L.name, N)
    t1, t2 = theta_direct(L, N), theta_direct(Lp, N)
    ok = Lp.is_even and t1 == t2
    return ModularityEvidence(ok, L.name, N, t1.coefficients(), t2.coefficients())


def check_relations(L: Lattice, xprime, degree: int, relations, N: int, Lp: Lattice | None = None) -> list:
    """Evaluate linear relations among weighted theta coefficients on enumerated data.

    Each relation maps ``("L", e)`` / ``("dual", e)`` to a coefficient; the
    returned list holds the value of each relation (all zero when it holds).
    """
    x = weighted_theta_direct(L, xprime, degree, N)
    y = weighted_theta_dual(L, xprime, degree, N, Lp)
    out = []
    for rel in relations:
        acc = Fraction(0)
        for (side, e), lam in rel.items():
            acc += lam * (x[e] if side == "L" else y[e])
        out.append(acc)
    return out


def moment_sums(L: Lattice, xprime, m: int, kmax: int) -> dict:
    """``sum_j j^(2k) M_j`` for ``k = 0..kmax`` from the enumerated shell."""
    hist = config_count(L, xprime, m)
    return {k: sum(c * j ** (2 * k) for j, c in hist.items()) for k in range(kmax + 1)}
