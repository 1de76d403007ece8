"""Configuration-number systems around a coset representative ``x'``.

For ``x'`` of norm ``s`` and a shell ``S`` the unknowns are the counts
``c_j = #{x in S : |(x, x')| = j}``.  Three sources of exact linear
equations are assembled here:

* design moments of each shell,
* cross-theta relations, derived from the modular forms that the weighted
  theta series of ``L`` and ``L' = sqrt(2) L^#`` can be (nothing is
  hardcoded: every ratio is read off computed q-expansions),
* explicit assumptions such as ``Mp4 = 0``.

The parameter ``s`` is either a concrete even integer or symbolic, in which
case coefficients are :class:`ParamPoly` values and solutions come back as
rational functions of ``s``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cache

from .exactmath import (
    Affine,
    LinearSystem,
    ParamPoly,
    RatFunc,
    fm_bounds,
    fm_feasible,
    nullspace,
    rref,
    solve_linear_exact,
)
from .modforms import monomials
from .qseries import QSeries, extremal_theta, monomial_series
from .zonal import zonal_coeffs, zonal_value

DESIGN_T = {0: 3, 4: 2, 8: 1}
D_LOW = {0: 8, 4: 6, 8: 4}


@dataclass(frozen=True)
class CaseSpec:
    """Extremal even 2-modular lattice of rank ``n = 16m + r`` (``r`` in 0, 4, 8)."""

    n: int
    two_shell: bool

    @classmethod
    def for_rank(cls, n: int, two_shell: bool | None = None) -> CaseSpec:
        if n <= 0 or n % 4 or n % 16 not in DESIGN_T:
            raise ValueError(f"rank must be 16m + r with r in 0, 4, 8; got {n}")
        if two_shell is None:
            two_shell = n % 16 != 0
        return cls(n, two_shell)

    @property
    def m(self) -> int:
        return self.n // 16

    @property
    def r(self) -> int:
        return self.n % 16

    @property
    def m0(self) -> int:
        return 2 * self.m + 2

    @property
    def t(self) -> int:
        return DESIGN_T[self.r]

    @property
    def design_strength(self) -> int:
        return 2 * self.t + 1

    @property
    def d_low(self) -> int:
        return D_LOW[self.r]

    @property
    def s_max(self) -> int:
        """Upper bound ``n m0 / 4`` on the norm of a coset-minimal representative."""
        return self.n * self.m0 // 4

    @property
    def s_min_exclusive(self) -> int:
        return self.m0 + (2 if self.two_shell else 0)

    def shell_size(self, norm: int) -> int:
        """``|L_norm|`` from the extremal theta series (the dual shell ``L#_{norm/2}`` has the same size)."""
        v = extremal_theta(self.n, norm + 1)[norm]
        return int(v)

    @property
    def a(self) -> dict:
        out = {self.m0: self.shell_size(self.m0)}
        if self.two_shell:
            out[self.m0 + 2] = self.shell_size(self.m0 + 2)
        return out

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "r": self.r,
            "m0": self.m0,
            "t": self.t,
            "d_low": self.d_low,
            "two_shell": self.two_shell,
            "a": {str(k): v for k, v in self.a.items()},
        }


# ---------------------------------------------------------------------------
# shells and variables
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ShellVar:
    """Counts ``name0..name{jmax}`` over one shell.

    ``kind`` is ``"L"`` (norm measured in ``L``) or ``"dual"`` (a shell of
    ``L#``; it sits in ``L'`` at exponent ``2*norm`` and pairs with ``x'``
    through ``u = 2 j^2``).  ``overflow`` lists known counts outside
    ``0..jmax``, used for ``+-x'`` when ``x'`` lies in the shell itself.
    """

    name: str
    kind: str
    norm: int
    jmax: int
    overflow: tuple = ()

    def __post_init__(self):
        if self.kind not in ("L", "dual"):
            raise ValueError("shell kind is 'L' or 'dual'")

    @property
    def labels(self) -> list[str]:
        return [f"{self.name}{j}" for j in range(self.jmax + 1)]

    @property
    def exponent(self) -> int:
        return self.norm if self.kind == "L" else 2 * self.norm

    @property
    def u_scale(self) -> int:
        return 1 if self.kind == "L" else 2

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "kind": self.kind,
            "norm": self.norm,
            "jmax": self.jmax,
            "overflow": {str(j): c for j, c in self.overflow},
        }

    @classmethod
    def from_json(cls, data: dict) -> ShellVar:
        over = tuple((int(j), int(c)) for j, c in data.get("overflow", {}).items())
        return cls(data["name"], data["kind"], int(data["norm"]), int(data["jmax"]), over)


def inner_product_bound(case: CaseSpec, shell: str, s: int, lower: int | None = None, dual_norm: int | None = None) -> int:
    """Largest possible ``|(x, x')|`` on ``shell`` for a minimal coset representative of norm ``s``.

    ``shell`` is ``"L<m>"`` for a lattice shell or ``"dual"`` for the minimal
    dual shell ``L#_{m0/2}``.  For lattice shells ``(x' -+ x, x' -+ x) >= s``
    gives ``m/2``.  For a dual vector ``w`` the vector ``x' - 2w`` lies in
    ``L`` and has norm ``s - 4j + 4(w,w)``, which must reach ``lower``
    (``min(L)`` by default; pass ``lower=s`` when ``2w`` is already in the
    generated sublattice).
    """
    if shell == "dual":
        nu = dual_norm if dual_norm is not None else case.m0 // 2
        lower = case.m0 if lower is None else lower
        return (s + 4 * nu - lower) // 4
    if not shell.startswith("L"):
        raise ValueError(f"unknown shell {shell!r}")
    return int(shell[1:]) // 2


def _moment_coeff(n: int, k: int) -> Fraction:
    num = math.prod(range(1, 2 * k, 2))
    den = math.prod(n + 2 * i for i in range(k))
    return Fraction(num, den)


@dataclass(frozen=True)
class Equation:
    coeffs: dict
    rhs: object
    source: str

    def residual(self, values: dict):
        return sum((c * values[k] for k, c in self.coeffs.items()), 0) - self.rhs

    def to_json(self, labels) -> dict:
        return {
            "source": self.source,
            "coeffs": [str(self.coeffs.get(lab, 0)) for lab in labels],
            "rhs": str(self.rhs),
        }


def _s_value(s):
    if s is None:
        return ParamPoly.s()
    if isinstance(s, ParamPoly):
        return s
    return Fraction(s)


def moment_equations(case: CaseSpec, shell: ShellVar, s=None, kmax: int | None = None) -> list[Equation]:
    """Cardinality plus ``sum_j j^(2k) c_j = a c_k nu^k s^k`` for ``k = 1..t``."""
    sv = _s_value(s)
    size = case.shell_size(shell.exponent)
    if size <= 0:
        raise ValueError("moment equations need a nonempty shell")
    kmax = case.t if kmax is None else kmax
    out = []
    for k in range(kmax + 1):
        coeffs = {lab: Fraction(j ** (2 * k)) for j, lab in enumerate(shell.labels)}
        const = sum((Fraction(c * j ** (2 * k)) for j, c in shell.overflow), Fraction(0))
        rhs = size * _moment_coeff(case.n, k) * shell.norm ** k * sv ** k - const
        coeffs = {k_: v for k_, v in coeffs.items() if v}
        out.append(Equation(coeffs, rhs, f"moment k={k} on {shell.name}"))
    return out


# ---------------------------------------------------------------------------
# cross-theta relations
# ---------------------------------------------------------------------------

def _combine(forms: list[QSeries], coords) -> QSeries:
    out = forms[0] * 0
    for f, c in zip(forms, coords):
        if c:
            out = out + f * c
    return out


@cache
def _cusp_spaces(n: int, d: int, m0: int, N: int) -> tuple:
    """Forms allowed for ``theta_L,P + theta_L',P`` and ``theta_L,P - theta_L',P``.

    Both weighted theta series have weight ``n/2 + d`` and vanish below
    ``q^m0``; the Fricke involution exchanges them with sign ``(-1)^(d/2)``,
    so one combination lies in ``C[theta_D4, Delta16]`` and the other in
    ``Phi24 * C[theta_D4, Delta16]``.
    """
    w = n // 2 + d
    plus = [monomial_series(a, b, c, N) for a, b, c in monomials(w) if c == 0]
    minus = [monomial_series(a, b, c, N) for a, b, c in monomials(w) if c == 1]

    def vanishing(forms):
        if not forms:
            return []
        mat = [[f[e] for f in forms] for e in range(0, m0, 2)]
        return [_combine(forms, v) for v in nullspace(mat)]

    wp, wm = vanishing(plus), vanishing(minus)
    return (wp, wm) if d % 4 == 0 else (wm, wp)


def cross_theta_relations(n: int, d: int, m0: int, exps_L, exps_dual) -> list[dict]:
    """Every linear relation among the coefficients ``x_e`` (of ``theta_L,P``)
    and ``y_e`` (of ``theta_L',P``) at the given exponents.

    Keys of the returned dicts are ``("L", e)`` and ``("dual", e)``; the list
    is in reduced echelon form.
    """
    keys = [("L", e) for e in sorted(exps_L)] + [("dual", e) for e in sorted(exps_dual)]
    if not keys:
        return []
    N = max(e for _, e in keys) + 2
    w_sum, w_diff = _cusp_spaces(n, d, m0, N)
    rows = []
    for f in w_sum:
        rows.append([f[e] for _, e in keys])
    for f in w_diff:
        rows.append([f[e] if side == "L" else -f[e] for side, e in keys])
    if rows:
        basis = nullspace(rows)
    else:
        basis = [[Fraction(int(i == j)) for j in range(len(keys))] for i in range(len(keys))]
    if not basis:
        return []
    red, _ = rref(basis)
    return [{k: v for k, v in zip(keys, row) if v} for row in red]


@dataclass(frozen=True)
class CrossThetaRelation:
    """``sum_{L_{m0+2}} P = ratio * sum_{L_{m0}} P`` and ``theta_L,P = sign * theta_L',P``."""

    degree: int
    sign: int
    ratio: Fraction
    source: QSeries
    source_label: str

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "sign": self.sign,
            "ratio": str(self.ratio),
            "source": self.source_label,
            "source_head": [str(self.source[e]) for e in range(self.source.prec)],
        }


def cross_theta_relation(case: CaseSpec, degree: int) -> CrossThetaRelation:
    if degree % 2 or degree < 2:
        raise ValueError("degree must be even and positive")
    N = case.m0 + 4
    w_sum, w_diff = _cusp_spaces(case.n, degree, case.m0, N)
    if len(w_sum) == 1 and not w_diff:
        sign, src = 1, w_sum[0]
    elif len(w_diff) == 1 and not w_sum:
        sign, src = -1, w_diff[0]
    else:
        raise ValueError(
            f"degree {degree} in rank {case.n} does not give a single-series relation "
            f"({len(w_sum)} + {len(w_diff)} surviving forms)"
        )
    src = src / src[case.m0]
    w = case.n // 2 + degree
    label = "?"
    for a, b, c in monomials(w):
        if (monomial_series(a, b, c, N) - src).valuation() >= N:
            label = "*".join(p for p in (f"thetaD4^{a}" if a else "", f"Delta16^{b}" if b else "", "Phi24" if c else "") if p)
    ratio = Fraction(src[case.m0 + 2])
    return CrossThetaRelation(degree, sign, ratio, src, label)


def shell_weighted_sum(shell: ShellVar, d: int, n: int, s):
    """Coefficients of ``sum_{x in shell} P_{d,x'}(x)`` in the shell's counts, plus a constant."""
    z = zonal_coeffs(n, d)
    sv = _s_value(s)
    e = shell.exponent
    coeffs = {lab: zonal_value(z, e, sv, Fraction(shell.u_scale * j * j)) for j, lab in enumerate(shell.labels)}
    const = sum((c * zonal_value(z, e, sv, Fraction(shell.u_scale * j * j)) for j, c in shell.overflow), Fraction(0))
    return coeffs, const


def cross_theta_equations(case: CaseSpec, degree: int, shells, s=None) -> list[Equation]:
    """Linear equations in the shell counts implied by the cross-theta relations at ``degree``."""
    exps_L = {sh.exponent for sh in shells if sh.kind == "L"}
    exps_D = {sh.exponent for sh in shells if sh.kind == "dual"}
    if len(exps_L) != sum(sh.kind == "L" for sh in shells) or len(exps_D) != sum(sh.kind == "dual" for sh in shells):
        raise ValueError("at most one shell per exponent and side")
    by_key = {(sh.kind, sh.exponent): sh for sh in shells}
    out = []
    for rel in cross_theta_relations(case.n, degree, case.m0, exps_L, exps_D):
        coeffs: dict = {}
        const = 0
        for key, lam in rel.items():
            cf, c0 = shell_weighted_sum(by_key[key], degree, case.n, s)
            for lab, v in cf.items():
                coeffs[lab] = coeffs.get(lab, 0) + lam * v
            const = const + lam * c0
        coeffs = {k: v for k, v in coeffs.items() if v != 0}
        desc = " + ".join(f"{lam}*{'x' if side == 'L' else 'y'}{e}" for (side, e), lam in rel.items())
        out.append(Equation(coeffs, -const, f"cross-theta d={degree}: {desc} = 0"))
    return out


# ---------------------------------------------------------------------------
# assembled systems
# ---------------------------------------------------------------------------

@dataclass
class ConfigSystem:
    case: CaseSpec
    shells: tuple
    s: object  # None means symbolic
    equations: list
    notes: list = field(default_factory=list)
    degrees: tuple = ()
    assumptions: dict = field(default_factory=dict)

    @property
    def labels(self) -> list[str]:
        return [lab for sh in self.shells for lab in sh.labels]

    @property
    def symbolic(self) -> bool:
        return self.s is None

    def linear_system(self) -> LinearSystem:
        labels = self.labels
        rows = [[eq.coeffs.get(lab, 0) for lab in labels] for eq in self.equations]
        return LinearSystem(rows, [eq.rhs for eq in self.equations], labels)

    def residuals(self, values: dict) -> list:
        """Residual of each equation at ``values`` (exact counts from a real lattice give zeros)."""
        return [eq.residual(values) for eq in self.equations]

    def to_json(self) -> dict:
        labels = self.labels
        return {
            "case": self.case.to_json(),
            "s": "symbolic" if self.s is None else str(self.s),
            "shells": [sh.to_json() for sh in self.shells],
            "variables": labels,
            "equations": [eq.to_json(labels) for eq in self.equations],
            "notes": list(self.notes),
        }

    def build_json(self) -> dict:
        """Everything :func:`assemble` needs to rebuild this system."""
        return {
            "n": self.case.n,
            "two_shell": self.case.two_shell,
            "shells": [sh.to_json() for sh in self.shells],
            "s": None if self.s is None else str(self.s),
            "degrees": list(self.degrees),
            "assumptions": {k: str(v) for k, v in self.assumptions.items()},
        }

    @classmethod
    def rebuild(cls, build: dict) -> ConfigSystem:
        case = CaseSpec(int(build["n"]), bool(build["two_shell"]))
        shells = tuple(ShellVar.from_json(sh) for sh in build["shells"])
        s = None if build["s"] is None else Fraction(build["s"])
        assumptions = {k: Fraction(v) for k, v in build["assumptions"].items()}
        return assemble(case, shells, s, tuple(build["degrees"]), assumptions)


def standard_shells(case: CaseSpec) -> tuple:
    """``M`` over ``L_m0`` and, for two-shell cases, ``N`` over ``L_{m0+2}``."""
    out = [ShellVar("M", "L", case.m0, case.m0 // 2)]
    if case.two_shell:
        out.append(ShellVar("N", "L", case.m0 + 2, case.m0 // 2 + 1))
    return tuple(out)


def standard_degrees(case: CaseSpec) -> tuple:
    return (case.d_low, case.d_low + 2) if case.two_shell else ()


def assemble(case: CaseSpec, shells=None, s=None, degrees=None, assumptions=None) -> ConfigSystem:
    shells = tuple(standard_shells(case) if shells is None else shells)
    degrees = standard_degrees(case) if degrees is None else tuple(degrees)
    eqs: list = []
    for sh in shells:
        eqs.extend(moment_equations(case, sh, s))
    for d in degrees:
        eqs.extend(cross_theta_equations(case, d, shells, s))
    for lab, v in (assumptions or {}).items():
        eqs.append(Equation({lab: Fraction(1)}, Fraction(v), f"assumption {lab} = {v}"))
    notes = [f"x' self-pair counted in overflow of {sh.name}: {dict(sh.overflow)}" for sh in shells if sh.overflow]
    return ConfigSystem(case, shells, None if s is None else Fraction(s), eqs, notes, degrees, dict(assumptions or {}))


CLOSURE_ORDER = ("negative-count", "non-integral", "parity")


def count_violations(values: dict, shells) -> list[dict]:
    """Every nonnegativity, integrality and evenness (``j >= 1``) violation."""
    out = []
    for sh in shells:
        for j, lab in enumerate(sh.labels):
            v = Fraction(values[lab])
            if v < 0:
                out.append({"kind": "negative-count", "label": lab, "value": str(v)})
            if v.denominator != 1:
                out.append({"kind": "non-integral", "label": lab, "value": str(v)})
            elif j >= 1 and v.numerator % 2:
                out.append({"kind": "parity", "label": lab, "value": str(v)})
    out.sort(key=lambda x: CLOSURE_ORDER.index(x["kind"]))
    return out


@dataclass
class ConfigSolution:
    system: ConfigSystem
    report: object  # SolveReport

    @property
    def status(self) -> str:
        return self.report.status

    @property
    def values(self) -> dict:
        if not self.report.is_unique:
            raise ValueError(f"solution is {self.status}")
        return dict(self.report.particular)

    def violations(self) -> list[dict]:
        if self.system.symbolic:
            raise ValueError("violations need a concrete s")
        return count_violations(self.values, self.system.shells)

    def polynomial(self, label: str) -> ParamPoly:
        """Symbolic value of ``label`` (free variables set to zero) as a polynomial in ``s``."""
        v = self.report.particular[label]
        if isinstance(v, RatFunc):
            return v.as_poly()
        return ParamPoly([v])

    def bound_from(self, label: str, free: str):
        """From ``label = p + q*free >= 0``: returns ``(-p/q, q)``; ``free >= -p/q`` when ``q > 0``."""
        p = self.report.particular[label]
        q = self.report.directions[free][label]
        if not q:
            raise ValueError(f"{label} does not depend on {free}")
        return -p / q, q

    def to_json(self) -> dict:
        rep = self.report
        out = {"status": rep.status, "free": list(rep.free)}
        if rep.status != "inconsistent":
            out["particular"] = {k: str(v) for k, v in rep.particular.items()}
            out["directions"] = {f: {k: str(v) for k, v in d.items()} for f, d in rep.directions.items()}
        return out


def solve_config(case: CaseSpec, s=None, assumptions=None, *, shells=None, degrees=None) -> ConfigSolution:
    system = assemble(case, shells, s, degrees, assumptions)
    return ConfigSolution(system, solve_linear_exact(system.linear_system()))


# ---------------------------------------------------------------------------
# the s-range
# ---------------------------------------------------------------------------

def nonnegativity_constraints(report) -> list[Affine]:
    """``label >= 0`` for every count, in the free variables of a parametric report."""
    out = []
    for lab in report.labels:
        coeffs = {f: report.directions[f][lab] for f in report.free}
        out.append(Affine.of(coeffs, report.particular[lab]))
    return out


@dataclass
class SBranch:
    s: int
    verdict: str  # "survivor" | "eliminated"
    kind: str  # survivor | negative-count | non-integral | parity | fm-infeasible | inconsistent
    solution: ConfigSolution
    values: dict | None = None
    violations: list = field(default_factory=list)
    constraints: list = field(default_factory=list)
    fm: object = None
    pinned: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"s": self.s, "verdict": self.verdict, "kind": self.kind, "status": self.solution.status}
        if self.values is not None:
            out["values"] = {k: str(v) for k, v in self.values.items()}
        if self.violations:
            out["violations"] = self.violations
        if self.pinned:
            out["pinned"] = {k: str(v) for k, v in self.pinned.items()}
        if self.fm is not None and not self.fm.feasible:
            out["farkas"] = {str(k): str(v) for k, v in self.fm.multipliers.items()}
            out["contradiction"] = str(self.fm.contradiction)
        return out


def analyse_s(case: CaseSpec, s: int, shells=None, degrees=None, assumptions=None) -> SBranch:
    """Solve at one ``s`` and apply nonnegativity, integrality and evenness."""
    sol = solve_config(case, s, assumptions, shells=shells, degrees=degrees)
    rep = sol.report
    if rep.status == "inconsistent":
        return SBranch(s, "eliminated", "inconsistent", sol)
    if rep.is_unique:
        values = sol.values
        viol = count_violations(values, sol.system.shells)
        if viol:
            return SBranch(s, "eliminated", viol[0]["kind"], sol, values, viol)
        return SBranch(s, "survivor", "survivor", sol, values)
    cons = nonnegativity_constraints(rep)
    fm = fm_feasible(cons, rep.free)
    if not fm.feasible:
        return SBranch(s, "eliminated", "fm-infeasible", sol, constraints=cons, fm=fm)
    pinned = {}
    for f in rep.free:
        lo, hi = fm_bounds(cons, f, rep.free)
        if lo is not None and lo == hi:
            pinned[f] = lo
    if len(pinned) == len(rep.free):
        values = rep.substitute(pinned)
        viol = count_violations(values, sol.system.shells)
        if viol:
            return SBranch(s, "eliminated", viol[0]["kind"], sol, values, viol, cons, fm, pinned)
        return SBranch(s, "survivor", "survivor", sol, values, constraints=cons, fm=fm, pinned=pinned)
    return SBranch(s, "survivor", "survivor", sol, constraints=cons, fm=fm)


@dataclass
class SRange:
    case: CaseSpec
    branches: list

    @property
    def survivors(self) -> list[int]:
        return [b.s for b in self.branches if b.verdict == "survivor"]

    def branch(self, s: int) -> SBranch:
        return next(b for b in self.branches if b.s == s)

    def to_json(self) -> dict:
        return {"survivors": self.survivors, "branches": [b.to_json() for b in self.branches]}


def feasible_s_range(case: CaseSpec, shells=None, degrees=None, s_values=None) -> SRange:
    """Every even ``s`` in ``(m0 [+2], n m0 / 4]`` with its verdict, ascending."""
    if s_values is None:
        lo = case.s_min_exclusive + 2
        s_values = range(lo + (lo % 2), case.s_max + 1, 2)
    return SRange(case, [analyse_s(case, s, shells, degrees) for s in s_values])
