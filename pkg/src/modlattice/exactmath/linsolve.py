"""Exact linear systems solved by fraction-free (Bareiss) elimination.

Entries may be ``int``/``Fraction``, :class:`QuadExt`, or :class:`ParamPoly`.
Polynomial systems are eliminated in the polynomial ring and back-substituted
in the fraction field, so the reported solution is a :class:`RatFunc` per
variable.
"""
from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .numbers import QuadExt
from .poly import ParamPoly, RatFunc


def _is_zero(x) -> bool:
    return not x


def _exact_div(a, b):
    if isinstance(a, ParamPoly) or isinstance(b, ParamPoly):
        a = a if isinstance(a, ParamPoly) else ParamPoly([a])
        return a.exact_div(b)
    if isinstance(a, int) and isinstance(b, int):
        q, r = divmod(a, b)
        if r:
            return Fraction(a, b)
        return q
    return a / b


def _to_field(x):
    if isinstance(x, ParamPoly):
        return RatFunc(x)
    if isinstance(x, int):
        return Fraction(x)
    return x


@dataclass(frozen=True)
class LinearSystem:
    """``rows @ x == rhs`` with labelled unknowns."""

    rows: tuple
    rhs: tuple
    labels: tuple

    def __init__(self, rows: Sequence[Sequence[Any]], rhs: Sequence[Any], labels: Sequence[str]):
        rows = tuple(tuple(r) for r in rows)
        rhs = tuple(rhs)
        labels = tuple(labels)
        if len(rows) != len(rhs):
            raise ValueError(f"{len(rows)} rows but {len(rhs)} right-hand sides")
        for i, r in enumerate(rows):
            if len(r) != len(labels):
                raise ValueError(f"row {i} has width {len(r)}, expected {len(labels)}")
        if len(set(labels)) != len(labels):
            raise ValueError("duplicate variable labels")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "rhs", rhs)
        object.__setattr__(self, "labels", labels)

    @property
    def is_parametric(self) -> bool:
        return any(isinstance(x, ParamPoly) for r in self.rows for x in r) or any(
            isinstance(x, ParamPoly) for x in self.rhs
        )

    def at(self, s) -> LinearSystem:
        """Substitute a value for the parameter ``s`` in every entry."""
        ev = lambda x: x(s) if isinstance(x, ParamPoly) else x
        return LinearSystem([[ev(x) for x in r] for r in self.rows], [ev(x) for x in self.rhs], self.labels)

    def residuals(self, assignment: dict) -> list:
        out = []
        for r, b in zip(self.rows, self.rhs):
            acc = -_to_field(b)
            for coef, lab in zip(r, self.labels):
                if not _is_zero(coef):
                    acc = acc + _to_field(coef) * assignment[lab]
            out.append(acc)
        return out


def bareiss_echelon(matrix: Sequence[Sequence[Any]], ncols: int | None = None):
    """Fraction-free row echelon form.

    Pivots are searched in columns ``0..ncols-1`` (default: all) taking the
    first nonzero entry in row order.  Returns ``(rows, pivot_columns)``; the
    input is never mutated.
    """
    m = [list(r) for r in matrix]
    if not m:
        return m, []
    width = len(m[0])
    ncols = width if ncols is None else ncols
    prev = 1
    r = 0
    pivots = []
    for c in range(ncols):
        if r >= len(m):
            break
        i = next((i for i in range(r, len(m)) if not _is_zero(m[i][c])), None)
        if i is None:
            continue
        if i != r:
            m[r], m[i] = m[i], m[r]
        p = m[r][c]
        for i in range(r + 1, len(m)):
            f = m[i][c]
            for j in range(c + 1, width):
                m[i][j] = _exact_div(p * m[i][j] - f * m[r][j], prev)
            m[i][c] = 0 * p
        prev = p
        pivots.append(c)
        r += 1
    return m, pivots


@dataclass
class SolveReport:
    """Outcome of :func:`solve_linear_exact`.

    ``particular`` gives each variable's value with all free variables set to
    zero; ``directions[f]`` gives the coefficient of free variable ``f`` in each
    variable's expression.
    """

    status: str  # "unique" | "parametric" | "inconsistent"
    labels: tuple
    particular: dict = field(default_factory=dict)
    free: list = field(default_factory=list)
    directions: dict = field(default_factory=dict)
    inconsistent_row: int | None = None

    @property
    def is_unique(self) -> bool:
        return self.status == "unique"

    @property
    def consistent(self) -> bool:
        return self.status != "inconsistent"

    def __getitem__(self, label):
        return self.particular[label]

    def coefficient(self, label, free_label):
        return self.directions[free_label][label]

    def substitute(self, free_values: dict) -> dict:
        out = {}
        for lab in self.labels:
            v = self.particular[lab]
            for f in self.free:
                v = v + self.directions[f][lab] * free_values[f]
            out[lab] = v
        return out

    def evaluate_at(self, s) -> SolveReport:
        """Evaluate a parametric solution at ``s``; raises ZeroDivisionError on a pole."""
        ev = lambda x: x(s) if isinstance(x, RatFunc) else x
        return SolveReport(
            self.status,
            self.labels,
            {k: ev(v) for k, v in self.particular.items()},
            list(self.free),
            {f: {k: ev(v) for k, v in d.items()} for f, d in self.directions.items()},
            self.inconsistent_row,
        )


def solve_linear_exact(system: LinearSystem, *, verify: bool = True) -> SolveReport:
    """Solve exactly; free variables are the non-pivot columns (latest columns stay free)."""
    n = len(system.labels)
    aug = [list(r) + [b] for r, b in zip(system.rows, system.rhs)]
    ech, pivots = bareiss_echelon(aug, ncols=n)
    rank = len(pivots)
    for i in range(rank, len(ech)):
        if not _is_zero(ech[i][n]):
            return SolveReport("inconsistent", system.labels, inconsistent_row=i)

    free_cols = [c for c in range(n) if c not in pivots]
    free = [system.labels[c] for c in free_cols]
    zero = RatFunc(0) if system.is_parametric else Fraction(0)
    one = RatFunc(1) if system.is_parametric else Fraction(1)
    # each variable as {None: const, free_col: coef}
    expr: dict[int, dict] = {c: {None: zero, c: one} for c in free_cols}
    for r in range(rank - 1, -1, -1):
        pc = pivots[r]
        row = ech[r]
        acc = {None: _to_field(row[n])}
        for j in range(pc + 1, n):
            a = row[j]
            if _is_zero(a):
                continue
            a = _to_field(a)
            for key, val in expr[j].items():
                acc[key] = acc.get(key, zero) - a * val
        piv = _to_field(row[pc])
        expr[pc] = {k: v / piv for k, v in acc.items()}

    particular = {system.labels[c]: expr[c].get(None, zero) for c in range(n)}
    directions = {
        system.labels[f]: {system.labels[c]: expr[c].get(f, zero) for c in range(n)} for f in free_cols
    }
    report = SolveReport("unique" if not free else "parametric", system.labels, particular, free, directions)
    if verify:
        _check(system, report)
    return report


def _check(system: LinearSystem, report: SolveReport) -> None:
    if any(not _is_zero(r) for r in system.residuals(report.particular)):
        raise ArithmeticError("back-substitution check failed for the particular solution")
    homogeneous = LinearSystem(system.rows, [0] * len(system.rhs), system.labels)
    for f in report.free:
        if any(not _is_zero(r) for r in homogeneous.residuals(report.directions[f])):
            raise ArithmeticError(f"back-substitution check failed for free direction {f}")


def nullspace(matrix: Sequence[Sequence[Any]]) -> list[list]:
    """Basis of the right nullspace (exact, deterministic)."""
    if not matrix:
        return []
    n = len(matrix[0])
    labels = [f"x{i}" for i in range(n)]
    rep = solve_linear_exact(LinearSystem(matrix, [0] * len(matrix), labels))
    return [[rep.directions[f][lab] for lab in labels] for f in rep.free]


def rank(matrix: Sequence[Sequence[Any]]) -> int:
    return len(bareiss_echelon(matrix)[1]) if matrix else 0


__all__ = [
    "LinearSystem",
    "QuadExt",
    "SolveReport",
    "bareiss_echelon",
    "nullspace",
    "rank",
    "solve_linear_exact",
]


def rref(matrix: Sequence[Sequence[Any]]):
    """Reduced row echelon form over the fraction field; returns ``(rows, pivots)``."""
    ech, pivots = bareiss_echelon(matrix)
    rows = [[_to_field(x) for x in r] for r in ech[: len(pivots)]]
    for i, c in enumerate(pivots):
        p = rows[i][c]
        rows[i] = [x / p for x in rows[i]]
    for i in range(len(pivots) - 1, -1, -1):
        c = pivots[i]
        for k in range(i):
            f = rows[k][c]
            if f:
                rows[k] = [a - f * b for a, b in zip(rows[k], rows[i])]
    return rows, pivots
