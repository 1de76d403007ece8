import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from modlattice import latoracle
from modlattice.configsys import (
    CaseSpec,
    ShellVar,
    cross_theta_relations,
    moment_equations,
)
from modlattice.exactmath import rank
from modlattice.latoracle import Lattice, ResourceLimitError
from modlattice.qseries import extremal_theta, theta_d4


def r4(n: int) -> int:
    """Jacobi: number of representations of n as a sum of four squares."""
    return 8 * sum(d for d in range(1, n + 1) if n % d == 0 and d % 4)


def brute_theta(gram, N, box=3):
    n = len(gram)
    c = [0] * N
    for v in itertools.product(range(-box, box + 1), repeat=n):
        q = sum(v[i] * gram[i][j] * v[j] for i in range(n) for j in range(n))
        if q < N:
            c[q] += 1
    return c


def test_standard_thetas():
    assert latoracle.theta_direct(latoracle.d4(), 12) == theta_d4(12)
    z4 = latoracle.theta_direct(latoracle.zn(4), 10).coefficients()
    assert z4 == [1] + [r4(k) for k in range(1, 10)]


@st.composite
def unimodular(draw, n):
    u = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(draw(st.integers(0, 5))):
        i, j = draw(st.integers(0, n - 1)), draw(st.integers(0, n - 1))
        if i != j:
            k = draw(st.sampled_from([-1, 1]))
            for r in range(n):
                u[r][i] += k * u[r][j]
    return u


@given(unimodular(4))
@settings(max_examples=25, deadline=None)
def test_theta_is_basis_invariant(u):
    g = latoracle.d4().gram
    n = 4
    g2 = [[sum(u[a][i] * g[a][b] * u[b][j] for a in range(n) for b in range(n)) for j in range(n)] for i in range(n)]
    assert latoracle.theta_direct(Lattice(g2), 8) == theta_d4(8)


def test_enumeration_matches_brute_force():
    g = [[2, 1, 0], [1, 3, 1], [0, 1, 4]]
    assert latoracle.theta_direct(Lattice(g), 9).coefficients() == brute_theta(g, 9)


def test_gram_validation_and_io(tmp_path):
    with pytest.raises(ValueError):
        Lattice([[2, 1], [0, 2]])
    with pytest.raises(ValueError):
        Lattice([[1, 2], [2, 1]])
    d4 = latoracle.d4()
    p = tmp_path / "d4.gram"
    p.write_text(d4.to_text())
    back = Lattice.from_file(p)
    assert back.gram == d4.gram and back.name == "d4"
    with pytest.raises(ValueError):
        Lattice.from_text("3\n1 0 0\n0 1 0\n")


def test_node_cap():
    with pytest.raises(ResourceLimitError):
        latoracle.zn(8).enumerate(6, node_cap=100)


def test_bw16_invariants(bw16):
    assert bw16.is_even and bw16.determinant() == 256
    assert latoracle.theta_direct(bw16, 7) == extremal_theta(16, 7)


def test_modularity(bw16):
    assert latoracle.modularity_evidence(latoracle.d4()).passed
    ev = latoracle.modularity_evidence(latoracle.zn(4))
    assert not ev.passed and ev.note == "lattice is not even"
    assert latoracle.modularity_evidence(bw16, 7).passed
    # E8 is unimodular: sqrt(2) E8^# = sqrt(2) E8 has minimum 4, not 2
    e8 = Lattice([
        [2, -1, 0, 0, 0, 0, 0, 0], [-1, 2, -1, 0, 0, 0, 0, 0], [0, -1, 2, -1, 0, 0, 0, -1],
        [0, 0, -1, 2, -1, 0, 0, 0], [0, 0, 0, -1, 2, -1, 0, 0], [0, 0, 0, 0, -1, 2, -1, 0],
        [0, 0, 0, 0, 0, -1, 2, 0], [0, 0, -1, 0, 0, 0, 0, 2],
    ], name="E8")
    assert len(e8.shell(2)) == 240
    assert not latoracle.modularity_evidence(e8, 6).passed


def test_design_defects(bw16):
    d4 = latoracle.d4()
    # the 24 roots of D4 form a 5-design
    assert latoracle.design_defect(d4.shell(2), 2) == 0
    assert latoracle.design_defect(d4.shell(2), 4) == 0
    assert latoracle.design_defect(d4.shell(2), 6) != 0
    # the 8 unit vectors of Z4 form a 3-design
    z4 = latoracle.zn(4).shell(1)
    assert latoracle.design_defect(z4, 2) == 0
    assert latoracle.design_defect(z4, 4) != 0
    assert latoracle.harmonic_sum(z4, lambda v: v[0] ** 4 - 6 * v[0] ** 2 * v[1] ** 2 + v[1] ** 4) == 4
    assert latoracle.design_defect(bw16.shell(4), 6, seed=7) == 0


def test_design_defect_is_seeded(bw16):
    sh = bw16.shell(4)
    assert latoracle.design_defect(sh, 8, seed=3) == latoracle.design_defect(sh, 8, seed=3)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_moments_match_equations(bw16, seed):
    rng = random.Random(seed)
    xp = [rng.randint(-2, 2) for _ in range(16)]
    s = bw16.norm(xp)
    case = CaseSpec.for_rank(16)
    eqs = moment_equations(case, ShellVar("M", "L", 4, 20), s)
    got = latoracle.moment_sums(bw16, xp, 4, case.t)
    assert [got[k] for k in range(case.t + 1)] == [eq.rhs for eq in eqs]
    hist = latoracle.config_count(bw16, xp, 4)
    assert sum(hist.values()) == 4320


def test_config_count_rejects_zero(bw16):
    with pytest.raises(ValueError):
        latoracle.config_count(bw16, [0] * 16, 4)


@pytest.mark.parametrize("degree,sign", [(8, 1), (10, -1)])
def test_cross_theta_sign_branches(bw16, bw16_dual, degree, sign):
    rels = cross_theta_relations(16, degree, 4, (4, 6), (4, 6))
    keys = [("L", 4), ("L", 6), ("dual", 4), ("dual", 6)]
    rows = [[r.get(k, 0) for k in keys] for r in rels]
    # theta_L,P = sign * theta_L',P coefficientwise lies in the span of the relations
    for e in (4, 6):
        want = {("L", e): 1, ("dual", e): -sign}
        assert rank(rows + [[want.get(k, 0) for k in keys]]) == rank(rows)
    rng = random.Random(degree)
    for _ in range(3):
        xp = latoracle.random_direction(16, rng)
        assert latoracle.check_relations(bw16, xp, degree, rels, 7, bw16_dual) == [0] * len(rels)
        x = latoracle.weighted_theta_direct(bw16, xp, degree, 7)
        assert x[4] != 0  # the check is not vacuous
        flipped = [{k: (v if k[0] == "L" else -v) for k, v in r.items()} for r in rels]
        assert any(v != 0 for v in latoracle.check_relations(bw16, xp, degree, flipped, 7, bw16_dual))


def test_weighted_theta_rational_direction(bw16):
    xp = [Fraction(1, 2)] + [0] * 15
    f = latoracle.weighted_theta_direct(bw16, xp, 2, 5)
    assert f[4] == 0  # the minimal shell is a 2-design
