"""Fourier-Motzkin elimination over Q with replayable infeasibility certificates.

A constraint is an affine form ``sum(coeffs[v] * v) + const >= 0``.  Every
derived constraint carries its nonnegative multipliers over the input list,
so an infeasibility verdict comes with a Farkas combination that anyone can
re-add by hand.
"""
from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from .numbers import as_fraction


@dataclass(frozen=True)
class Affine:
    coeffs: tuple  # sorted (label, Fraction) pairs, zero entries dropped
    const: Fraction

    @classmethod
    def of(cls, coeffs: dict, const=0) -> Affine:
        items = tuple(sorted((k, as_fraction(v)) for k, v in coeffs.items() if v != 0))
        return cls(items, as_fraction(const))

    @classmethod
    def ge(cls, var: str, bound=0) -> Affine:
        """``var >= bound``."""
        return cls.of({var: 1}, -as_fraction(bound))

    @classmethod
    def le(cls, var: str, bound) -> Affine:
        """``var <= bound``."""
        return cls.of({var: -1}, as_fraction(bound))

    def coef(self, var) -> Fraction:
        for k, v in self.coeffs:
            if k == var:
                return v
        return Fraction(0)

    def value(self, point: dict) -> Fraction:
        return self.const + sum((v * as_fraction(point.get(k, 0)) for k, v in self.coeffs), Fraction(0))

    def to_json(self) -> dict:
        return {"coeffs": {k: str(v) for k, v in self.coeffs}, "const": str(self.const)}

    def __str__(self):
        terms = " + ".join(f"{v}*{k}" for k, v in self.coeffs) or "0"
        return f"{terms} + {self.const} >= 0"


@dataclass
class _Row:
    coeffs: dict
    const: Fraction
    mult: dict


@dataclass
class FMResult:
    feasible: bool
    witness: dict | None = None
    multipliers: dict | None = None  # input index -> Fraction (infeasible case)
    contradiction: Fraction | None = None  # resulting constant, < 0
    trace: list = field(default_factory=list)

    def to_json(self) -> dict:
        out = {"feasible": self.feasible, "trace": self.trace}
        if self.feasible:
            out["witness"] = {k: str(v) for k, v in self.witness.items()}
        else:
            out["multipliers"] = {str(k): str(v) for k, v in self.multipliers.items()}
            out["contradiction"] = str(self.contradiction)
        return out


def _combine(p: _Row, n: _Row, var) -> _Row:
    ap, an = p.coeffs[var], -n.coeffs[var]
    coeffs = {}
    for k in set(p.coeffs) | set(n.coeffs):
        if k == var:
            continue
        v = p.coeffs.get(k, 0) / ap + n.coeffs.get(k, 0) / an
        if v:
            coeffs[k] = v
    mult = {}
    for k, v in p.mult.items():
        mult[k] = mult.get(k, 0) + v / ap
    for k, v in n.mult.items():
        mult[k] = mult.get(k, 0) + v / an
    return _Row(coeffs, p.const / ap + n.const / an, mult)


def _key(row: _Row):
    if not row.coeffs:
        return ((), row.const)
    scale = abs(row.coeffs[min(row.coeffs)])
    return (tuple(sorted((k, v / scale) for k, v in row.coeffs.items())), row.const / scale)


def _eliminate_all(rows: list, order: Sequence[str]):
    stages = []
    trace = []
    for var in order:
        stages.append(rows)
        pos = [r for r in rows if r.coeffs.get(var, 0) > 0]
        neg = [r for r in rows if r.coeffs.get(var, 0) < 0]
        rest = [r for r in rows if var not in r.coeffs]
        new = list(rest)
        seen = {_key(r) for r in new}
        for p in pos:
            for n in neg:
                c = _combine(p, n, var)
                k = _key(c)
                if k not in seen:
                    seen.add(k)
                    new.append(c)
        trace.append({"eliminate": var, "lower": len(pos), "upper": len(neg), "kept": len(rest), "result": len(new)})
        rows = new
        bad = next((r for r in rows if not r.coeffs and r.const < 0), None)
        if bad is not None:
            return stages, rows, bad, trace
    return stages, rows, None, trace


def _initial_rows(constraints: Sequence[Affine]) -> list:
    rows = []
    for i, c in enumerate(constraints):
        rows.append(_Row(dict(c.coeffs), c.const, {i: Fraction(1)}))
    return rows


def fm_feasible(constraints: Iterable[Affine], vars: Sequence[str] | None = None) -> FMResult:
    """Decide feasibility of ``constraints`` over Q^vars."""
    constraints = list(constraints)
    if vars is None:
        vars = sorted({k for c in constraints for k, _ in c.coeffs})
    vars = list(vars)
    rows = _initial_rows(constraints)
    bad0 = next((r for r in rows if not r.coeffs and r.const < 0), None)
    if bad0 is not None:
        return FMResult(False, multipliers=bad0.mult, contradiction=bad0.const, trace=[])
    stages, _final, bad, trace = _eliminate_all(rows, vars)
    if bad is not None:
        mult = {k: v for k, v in sorted(bad.mult.items()) if v}
        return FMResult(False, multipliers=mult, contradiction=bad.const, trace=trace)
    witness: dict = {}
    for idx in range(len(vars) - 1, -1, -1):
        var = vars[idx]
        lo, hi = None, None
        for r in stages[idx]:
            a = r.coeffs.get(var, 0)
            if not a:
                continue
            rest = r.const + sum((v * witness[k] for k, v in r.coeffs.items() if k != var), Fraction(0))
            b = -rest / a
            if a > 0:
                lo = b if lo is None or b > lo else lo
            else:
                hi = b if hi is None or b < hi else hi
        val = Fraction(0)
        if lo is not None and val < lo:
            val = lo
        if hi is not None and val > hi:
            val = hi
        witness[var] = val
    witness = {v: witness[v] for v in vars}
    for c in constraints:
        if c.value(witness) < 0:
            raise ArithmeticError(f"FM witness violates {c}")
    return FMResult(True, witness=witness, trace=trace)


def fm_bounds(constraints: Iterable[Affine], var: str, vars: Sequence[str] | None = None):
    """Exact ``(lo, hi)`` range of ``var`` over the feasible set (``None`` = unbounded).

    Returns ``None`` when the set is empty.
    """
    constraints = list(constraints)
    if vars is None:
        vars = sorted({k for c in constraints for k, _ in c.coeffs})
    others = [v for v in vars if v != var]
    rows = _initial_rows(constraints)
    if any(not r.coeffs and r.const < 0 for r in rows):
        return None
    _, final, bad, _ = _eliminate_all(rows, others)
    if bad is not None:
        return None
    lo, hi = None, None
    for r in final:
        a = r.coeffs.get(var, 0)
        if not a:
            if r.const < 0:
                return None
            continue
        b = -r.const / a
        if a > 0:
            lo = b if lo is None or b > lo else lo
        else:
            hi = b if hi is None or b < hi else hi
    if lo is not None and hi is not None and lo > hi:
        return None
    return lo, hi


def replay_farkas(constraints: Sequence[Affine], multipliers: dict) -> Fraction:
    """Re-add a certificate; returns the (negative) constant or raises."""
    total: dict = {}
    const = Fraction(0)
    for idx, lam in multipliers.items():
        lam = as_fraction(lam)
        if lam < 0:
            raise ArithmeticError("negative multiplier in Farkas certificate")
        c = constraints[int(idx)]
        for k, v in c.coeffs:
            total[k] = total.get(k, 0) + lam * v
        const += lam * c.const
    if any(v != 0 for v in total.values()):
        raise ArithmeticError("Farkas combination leaves a variable")
    if const >= 0:
        raise ArithmeticError("Farkas combination is not contradictory")
    return const
