import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from modlattice.exactmath import (
    Affine,
    LinearSystem,
    ParamPoly,
    QuadExt,
    RatFunc,
    fm_bounds,
    fm_feasible,
    nullspace,
    poly_gcd,
    rank,
    replay_farkas,
    rref,
    solve_linear_exact,
    squarefree_decomposition,
)

small = st.fractions(min_value=-20, max_value=20, max_denominator=12)
radicand = st.sampled_from([2, 3, 5, 6, 106705])


@st.composite
def quads(draw, d=None):
    return QuadExt(draw(small), draw(small), d if d is not None else draw(radicand))


# -- QuadExt -------------------------------------------------------------------

@given(small, small, small, small, small, small)
def test_quadext_field_laws(a1, b1, a2, b2, a3, b3):
    x, y, z = QuadExt(a1, b1, 5), QuadExt(a2, b2, 5), QuadExt(a3, b3, 5)
    assert (x + y) * z == x * z + y * z
    assert (x * y) * z == x * (y * z)
    if x != 0:
        assert x * x.inverse() == 1


@given(quads(d=106705))
def test_quadext_norm_and_conjugate(x):
    assert x * x.conjugate() == x.norm()
    assert (x + x.conjugate()) == x.trace()


@given(quads())
def test_quadext_text_roundtrip(x):
    assert QuadExt.parse(str(x)) == x


def test_quadext_sign_and_exactness():
    r = QuadExt.sqrt(106705)
    lam = (r * 400 + 15827) * 12
    assert lam * (r * -400 + 15827) * 12 == 144 * (15827**2 - 160000 * 106705)
    assert (r - 326).sign() == 1 and (r - 327).sign() == -1
    with pytest.raises(ValueError):
        QuadExt(1, 1, 4)
    with pytest.raises(ValueError):
        QuadExt(1, 2, 2) + QuadExt(1, 2, 3)


@given(st.integers(min_value=1, max_value=10**6))
def test_squarefree_decomposition(n):
    f, d = squarefree_decomposition(n)
    assert f * f * d == n
    assert all(d % (p * p) for p in range(2, int(d**0.5) + 2))


# -- polynomials ---------------------------------------------------------------

polys = st.lists(small, min_size=0, max_size=5).map(ParamPoly)


@given(polys, polys, polys)
def test_parampoly_ring(p, q, r):
    assert (p + q) * r == p * r + q * r
    assert (p * q).degree == (p.degree + q.degree if p.degree >= 0 and q.degree >= 0 else -1)


@given(polys, polys.filter(lambda q: q.degree >= 0))
def test_parampoly_divmod(p, q):
    quo, rem = p.divmod(q)
    assert quo * q + rem == p
    assert rem.degree < q.degree


def test_poly_gcd_and_ratfunc():
    s = ParamPoly.s()
    a = (s - 2) * (s - 3) * 7
    b = (s - 3) * (s + 1)
    assert poly_gcd(a, b) == s - 3
    f = RatFunc(a, b)
    assert not f.is_polynomial()
    assert str(f) == "(7*s - 14)/(s + 1)"
    assert RatFunc((s - 3) * s, s - 3).as_poly() == s


# -- linear algebra --------------------------------------------------------------

matrices = st.integers(1, 4).flatmap(
    lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=1, max_size=4)
)


@given(matrices)
def test_nullspace_is_kernel(m):
    basis = nullspace(m)
    assert len(basis) + rank(m) == len(m[0])
    for v in basis:
        assert all(sum(a * b for a, b in zip(row, v)) == 0 for row in m)


@given(matrices)
def test_rref_idempotent(m):
    red, piv = rref(m)
    red2, piv2 = rref(red)
    assert piv == piv2 and red == red2


@given(matrices, st.data())
@settings(suppress_health_check=[HealthCheck.too_slow])
def test_solve_consistent_systems(m, data):
    x = [data.draw(small) for _ in m[0]]
    rhs = [sum(a * b for a, b in zip(r, x)) for r in m]
    labels = [f"x{i}" for i in range(len(x))]
    rep = solve_linear_exact(LinearSystem(m, rhs, labels))
    assert rep.consistent
    sol = rep.substitute({f: x[labels.index(f)] for f in rep.free})
    assert [sol[l] for l in labels] == x


def test_inconsistent_and_parametric():
    rep = solve_linear_exact(LinearSystem([[1, 1], [2, 2]], [1, 3], ["a", "b"]))
    assert rep.status == "inconsistent"
    rep = solve_linear_exact(LinearSystem([[1, 1]], [5], ["a", "b"]))
    assert rep.status == "parametric" and rep.free == ["b"]
    assert rep.coefficient("a", "b") == -1


def test_parametric_rhs_in_s():
    s = ParamPoly.s()
    rep = solve_linear_exact(LinearSystem([[1, 1], [1, -1]], [s * 2, ParamPoly.const(2)], ["a", "b"]))
    assert rep["a"] == s + 1 and rep["b"] == s - 1


# -- Fourier-Motzkin -------------------------------------------------------------

def test_fm_dedup_keeps_contradiction():
    # eliminating x yields the constant rows 0 >= 0 and -1 >= 0; they must not merge
    cons = [Affine.ge("x", 0), Affine.le("x", 0), Affine.ge("x", 1)]
    res = fm_feasible(cons)
    assert not res.feasible
    assert replay_farkas(cons, res.multipliers) < 0
    cons = [Affine.le("x", 0), Affine.ge("x", 0), Affine.ge("x", 1)]
    assert not fm_feasible(cons).feasible


def test_fm_bounds_pin():
    cons = [Affine.of({"x": 1, "y": 1}, -2), Affine.of({"x": -1, "y": -1}, 2), Affine.ge("y", 0), Affine.ge("x", 2)]
    assert fm_bounds(cons, "y") == (0, 0)
    lo, hi = fm_bounds(cons, "x")
    assert lo == hi == 2


@st.composite
def inequality_systems(draw):
    nv = draw(st.integers(1, 3))
    vars_ = [f"v{i}" for i in range(nv)]
    cons = []
    for _ in range(draw(st.integers(1, 6))):
        coeffs = {v: draw(st.integers(-3, 3)) for v in vars_}
        cons.append(Affine.of(coeffs, draw(st.integers(-5, 5))))
    return cons, vars_


@given(inequality_systems())
@settings(max_examples=200)
def test_fm_certificates(system):
    cons, vars_ = system
    res = fm_feasible(cons, vars_)
    if res.feasible:
        assert all(c.value(res.witness) >= 0 for c in cons)
    else:
        assert replay_farkas(cons, res.multipliers) < 0


def test_replay_farkas_rejects_bad_multipliers():
    cons = [Affine.ge("x", 1), Affine.le("x", 0)]
    assert replay_farkas(cons, {0: 1, 1: 1}) == -1
    with pytest.raises(ArithmeticError):
        replay_farkas(cons, {0: 1})
    with pytest.raises(ArithmeticError):
        replay_farkas(cons, {0: -1, 1: 1})
