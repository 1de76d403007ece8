import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from modlattice.zonal import (
    InnerProductPoint,
    ZonalCoeffs,
    is_harmonic,
    laplacian,
    polynomial_terms,
    weighted_sum,
    zonal_coeffs,
    zonal_eval,
    zonal_value,
)


def gegenbauer_ratio(n: int, d: int) -> list[Fraction]:
    """Coefficients of the zonal harmonic from the Gegenbauer recurrence ratio.

    c_i / c_{i-1} = -(d - 2i + 2)(d - 2i + 1) / (2i (n + 2d - 2i - 2)).
    """
    c = [Fraction(1)]
    for i in range(1, d // 2 + 1):
        c.append(c[-1] * Fraction(-(d - 2 * i + 2) * (d - 2 * i + 1), 2 * i * (n + 2 * d - 2 * i - 2)))
    return c


@given(st.integers(2, 60), st.sampled_from([2, 4, 6, 8, 10, 12]))
def test_matches_gegenbauer(n, d):
    assert list(zonal_coeffs(n, d)) == gegenbauer_ratio(n, d)


@pytest.mark.parametrize("n,d", [(24, 4), (32, 8), (48, 10), (36, 8), (16, 6)])
def test_harmonic(n, d):
    assert is_harmonic(zonal_coeffs(n, d))


def test_displayed_48_10_coefficient_is_not_harmonic():
    z = zonal_coeffs(48, 10)
    assert z.c[4] == Fraction(315, 920576)
    bad = ZonalCoeffs(48, 10, z.c[:4] + (Fraction(315, 902576),) + z.c[5:])
    assert not is_harmonic(bad)
    lap = laplacian(polynomial_terms(bad), 48)
    assert any(v != 0 for v in lap.values())


def test_dimension_48_degree_10_tail():
    assert zonal_coeffs(48, 10).c[-1] == Fraction(-9, 7364608)


def test_bad_arguments():
    for n, d in ((1, 4), (24, 3), (24, 14)):
        with pytest.raises(ValueError):
            zonal_coeffs(n, d)
    with pytest.raises(ValueError):
        InnerProductPoint(2, 2, 5)  # Cauchy-Schwarz


def test_value_agrees_with_point_eval():
    z = zonal_coeffs(16, 8)
    pt = InnerProductPoint(4, 6, Fraction(9, 4))
    assert zonal_eval(z, pt) == zonal_value(z, 4, 6, Fraction(9, 4))


def _cube_sum(n, d, xprime):
    """Sum over the 2n vectors +-e_i and all (+-1)^n / sqrt(n) style shells is avoided: use +-e_i."""
    z = zonal_coeffs(n, d)
    s = sum(Fraction(v) ** 2 for v in xprime)
    return sum(zonal_value(z, 1, s, Fraction(v) ** 2) for v in xprime) * 2


def test_cross_polytope_design_strength():
    # +-e_i is a 3-design and not a 4-design
    rng = random.Random(1)
    for _ in range(3):
        xp = [Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(5)]
        if not any(xp):
            continue
        assert _cube_sum(5, 2, xp) == 0
    assert _cube_sum(5, 4, [1, 2, 0, 0, 0]) != 0


def test_z4_negative_control_polynomial():
    # x1^4 - 6 x1^2 x2^2 + x2^4 is harmonic; on the 8 unit vectors of Z^4 it sums to 4
    shell = [v for v in itertools.product((-1, 0, 1), repeat=4) if sum(a * a for a in v) == 1]
    assert sum(v[0] ** 4 - 6 * v[0] ** 2 * v[1] ** 2 + v[1] ** 4 for v in shell) == 4


def test_weighted_sum_counts():
    z = zonal_coeffs(32, 8)
    counts = {0: 65920, 1: 149760, 2: 33408, 3: 12032}
    direct = sum(c * zonal_value(z, 6, 8, j * j) for j, c in counts.items())
    assert weighted_sum(z, 6, 8, counts) == direct
