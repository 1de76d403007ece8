"""Acceptance criteria 1-10, exact equality throughout.

Run under pytest (a PASS/FAIL line per criterion is printed in the terminal
summary) or directly: ``python3 tests/test_acceptance.py``.
"""
from __future__ import annotations

import contextlib
import io
import random
from fractions import Fraction
from functools import cache

import pytest

from modlattice import cli, latoracle
from modlattice.configsys import CaseSpec, cross_theta_relations
from modlattice.exactmath import QuadExt
from modlattice.modforms import eigen_split_weight26, pseudo_eigen_check
from modlattice.prover import remark_tables, replay_certificate, verify_case
from modlattice.qseries import QSeries, extremal_theta
from modlattice.zonal import zonal_coeffs

RESULTS: dict[int, tuple[bool, str]] = {}
F = Fraction
R106705 = QuadExt.sqrt(106705)


@cache
def cert(rank: int):
    return verify_case(rank)


def run_cli(*argv) -> tuple[int, str]:
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = cli.main(list(argv))
    return code, buf.getvalue()


def _record(n: int, fn):
    try:
        detail = fn() or ""
    except AssertionError as exc:
        RESULTS[n] = (False, str(exc))
        raise
    RESULTS[n] = (True, detail)


# -- 1 ------------------------------------------------------------------------

CUSP26 = {
    1: (2, [2657760, -21963256, 1015627776, -8615579463]),
    2: (4, [-252252, -1032192, -42991616, -54853632]),
    3: (6, [19648, 256770, 2654208, 16097088]),
    4: (8, [-1176, -21504, -196656, -1142784]),
    5: (10, [48, 852, 8192, 48510]),
}


def _parse_forms(text: str) -> list[QSeries]:
    out, chunk = [], []
    for line in text.splitlines():
        if line.startswith("#"):
            continue
        chunk.append(line)
        if line.startswith("O(q^"):
            out.append(QSeries.from_text("\n".join(chunk)))
            chunk = []
    return out


def criterion_1():
    code, text = run_cli("forms", "--weight", "26", "--order", "20")
    assert code == 0, f"forms exited {code}"
    forms = _parse_forms(text)
    assert len(forms) == 5, f"expected 5 cusp forms, got {len(forms)}"
    for i, (lead, tail) in CUSP26.items():
        f = forms[i - 1]
        assert f.valuation() == lead and f[lead] == 1, f"f{i} leading term"
        for e in range(lead + 1, 12):
            assert f[e] == 0, f"f{i} has a nonzero q^{e} coefficient"
        got = [f[e] for e in (12, 14, 16, 18)]
        assert got == tail, f"f{i}: {got} != {tail}"
    return "f1..f5 through q^18"


# -- 2 ------------------------------------------------------------------------

def criterion_2():
    split = eigen_split_weight26()
    pair = {split.h1.hecke_eigenvalues[3], split.h2.hecke_eigenvalues[3]}
    want = {(R106705 * 400 + 15827) * 12, (R106705 * -400 + 15827) * 12}
    assert pair == want, f"T3 pair {pair}"
    assert split.h1.hecke_eigenvalues[2] == split.h2.hecke_eigenvalues[2] == 4096, "U2 eigenvalue"
    assert split.scale == (R106705 * 9600).inverse(), f"scale {split.scale}"
    assert split.pseudo.check(), "difference identity"
    return f"T3 = 12(15827 +- 400 sqrt(106705)), U2 = 4096, scale {split.scale}"


# -- 3 ------------------------------------------------------------------------

def criterion_3():
    rep = pseudo_eigen_check(5)
    assert rep.precision >= 2 * 3 * 2**5, "precision not raised"
    assert rep.leading == {6: 1, 8: 0, 10: -324, 12: 4096}, f"leading {rep.leading}"
    assert all(rep.a_pow2[i] == 0 for i in range(1, 6)), "a(2^i)"
    assert all(rep.a_3pow2[i] == 2 ** (12 * i) for i in range(1, 6)), "a(3*2^i)"
    return f"i = 1..5 at precision {rep.precision}"


# -- 4 ------------------------------------------------------------------------

ZONAL_DISPLAYED = {
    (32, 8): [1, F(-7, 11), F(5, 44), F(-1, 176), F(1, 26752)],
    (48, 8): [1, F(-7, 15), F(7, 116), F(-1, 464), F(1, 100224)],
    (48, 10): [1, F(-45, 64), F(315, 1984), F(-105, 7936), F(315, 902576), F(-9, 7364608)],
    (24, 4): [1, F(-3, 14), F(3, 728)],
    (24, 6): [1, F(-15, 32), F(3, 64), F(-1, 1792)],
    (36, 6): [1, F(-15, 44), F(15, 616), F(-1, 4928)],
    (36, 8): [1, F(-7, 12), F(35, 368), F(-35, 8096), F(5, 194304)],
}


def criterion_4():
    bad = []
    for (n, d), want in ZONAL_DISPLAYED.items():
        got = list(zonal_coeffs(n, d))
        if got != want:
            diff = [(i, str(g), str(w)) for i, (g, w) in enumerate(zip(got, want)) if g != w]
            bad.append(f"(n={n}, d={d}) differs at {diff}")
    assert not bad, "; ".join(bad)
    return "all displayed vectors"


# -- 5 ------------------------------------------------------------------------

def criterion_5():
    c = cert(32)
    assert c.step("symbolic")["values"] == {
        "M0": "-600*s^3 + 10080*s^2 - 66640*s + 261120",
        "M1": "900*s^3 - 14040*s^2 + 73440*s",
        "M2": "-360*s^3 + 4320*s^2 - 7344*s",
        "M3": "60*s^3 - 360*s^2 + 544*s",
    }, "cubics"
    assert c.survivors == [8], f"survivors {c.survivors}"
    data = c.branch(8)["closure"]["data"]
    assert c.branch(8)["closure"]["kind"] == "moment-mismatch"
    assert data["primary"]["values"] == {"M0": "65920", "M1": "149760", "M2": "33408", "M3": "12032"}
    assert data["dual"]["values"] == {"Mp0": "117440", "Mp1": "126720", "Mp2": "16704", "Mp3": "256"}
    assert data["dual_sum"] == "-8847360/19"
    assert data["required_moment"] == "97320960" and data["computed_moment"] == "87644160"
    assert c.proven and replay_certificate(c.to_json()).ok, c.verdict
    return "97320960 required vs 87644160 computed"


# -- 6 ------------------------------------------------------------------------

CLAIM4 = {
    "14": {"M0": "12872510/3", "M1": "3361792/3", "M2": "12184144/3", "M3": "50176/3", "M4": "1015378/3"},
    "16": {"M0": "7466480", "M1": "-4652032", "M2": "7406336", "M3": "-1074176", "M4": "681392"},
    "18": {"M0": "13864158", "M1": "-78591744/5", "M2": "68553072/5", "M3": "-16296192/5", "M4": "6154074/5"},
}


def criterion_6():
    c = cert(48)
    view = c.step("claim1-m2-m3-bounds")
    assert view["M4_lower_from_M2"] == "360*s^3 - 4680*s^2 + 8775*s"
    assert view["M4_upper_from_M3"] == "210*s^3 - 1365*s^2 + 2275*s"
    assert view["quadratic"] == "-s^2 + 221/10*s - 130/3 >= 0"
    feas = view["feasible_with_M2_M3_only"]
    assert feas["18"] and not any(v for s, v in feas.items() if int(s) >= 20), "Claim 1 bound"
    for s in range(20, 97, 2):
        assert c.branch(s)["closure"]["kind"] == "fm-infeasible", f"s={s}"
    rel = c.step("claim2-relation")["values"]
    assert rel == {"f": "6*s^5 - 210*s^4 + 2681*s^3 - 14742*s^2 + 29120*s", "Mp4": "-4*s + 32", "Mp5": "-40*s + 384"}
    for s in (10, 12):
        assert c.branch(s)["closure"]["kind"] == "fm-infeasible", f"Claim 2 at s={s}"
    assert c.step("claim3")["values"] == {"Mp0": "4726960", "Mp1": "4626720", "Mp2": "468720", "Mp3": "5600", "Mp4": "0"}
    assert c.step("claim4-table")["values"] == CLAIM4
    assert c.proven and replay_certificate(c.to_json()).ok, c.verdict
    return "Claims 1-4 reproduced"


# -- 7 ------------------------------------------------------------------------

def criterion_7():
    c = cert(24)
    assert c.survivors == [8], f"survivors {c.survivors}"
    data = c.branch(8)["closure"]["data"]
    assert data["family"]["values"] == {
        "M0": "2016", "M1": "0", "M2": "1008", "N0": "0", "N1": "225792", "N2": "0", "N3": "32256",
    }
    assert all(g["passed"] for g in data["gates"]), "parity gates"
    assert data["max_roots"] == 1104 and data["roots"] == 3024
    assert c.proven and replay_certificate(c.to_json()).ok, c.verdict
    return "root budget 1104 < 3024"


# -- 8 ------------------------------------------------------------------------

def criterion_8():
    c = cert(36)
    assert c.survivors == [10], f"survivors {c.survivors}"
    br = c.branch(10)
    assert br["closure"]["kind"] == "parity"
    assert c.step("closure-s10")["values"]["Mp3"] == "575"
    assert c.proven and replay_certificate(c.to_json()).ok, c.verdict
    return "M'3 = 575 is odd"


# -- 9 ------------------------------------------------------------------------

REMARKS = {
    32: {"M0": 82720, "M1": 122880, "M2": 46848, "M3": 8192, "M4": 480},
    24: {"M0": 1116, "M1": 1536, "M2": 372, "N0": 83052, "N1": 119040, "N2": 47646, "N3": 7936, "N4": 372,
         "Mp0": 1602, "Mp1": 1392, "Mp2": 30},
    36: {"M0": 56320, "M1": 77760, "M2": 25920, "M3": 4160, "N0": 6416070, "N1": 9953920, "N2": 4439040,
         "N3": 1051968, "N4": 111760, "N5": 4160, "Mp0": 77840, "Mp1": 78840, "Mp2": 7344, "Mp3": 136},
}


def criterion_9():
    tables = {t.rank: t for t in remark_tables()}
    for rank, want in REMARKS.items():
        t = tables[rank]
        got = {k: t.values[k] for k in want}
        assert got == want, f"rank {rank}: {got}"
        case = CaseSpec.for_rank(rank)
        assert t.row_sums["M"] == case.a[case.m0], f"rank {rank} M-sum"
        if "Mp" in t.row_sums:
            assert t.row_sums["Mp"] == case.a[case.m0], f"rank {rank} M'-sum"
        if "N" in t.row_sums:
            assert t.row_sums["N"] == case.a[case.m0 + 2] - 2, f"rank {rank} N-sum (excluding +-x')"
        assert t.sums_consistent
    return "three tables, self-count excluded"


# -- 10 -----------------------------------------------------------------------

def criterion_10():
    L, D4 = latoracle.bw16(), latoracle.d4()
    assert latoracle.modularity_evidence(D4).passed, "D4 modularity"
    assert latoracle.modularity_evidence(L, 7).passed, "BW16 modularity"
    assert len(L.shell(4)) == 4320 == extremal_theta(16, 5)[4], "|L4|"
    for d in (2, 4, 6):
        assert latoracle.design_defect(L.shell(4), d, 3, seed=d) == 0, f"BW16 L4 defect d={d}"
    assert latoracle.design_defect(L.shell(4), 8, 3, seed=8) != 0, "BW16 L4 is not an 8-design"
    Z4 = latoracle.zn(4)
    assert latoracle.design_defect(Z4.shell(1), 4, 3, seed=4) != 0, "Z4 negative control"
    Lp = L.rescaled_dual()
    rng = random.Random(2024)
    for d in (8, 10):
        rels = cross_theta_relations(16, d, 4, (4, 6), (4, 6))
        assert rels, f"no relations at d={d}"
        for _ in range(3):
            xp = latoracle.random_direction(16, rng)
            vals = latoracle.check_relations(L, xp, d, rels, 7, Lp)
            assert all(v == 0 for v in vals), f"d={d}, x'={xp}: {vals}"
    return "D4, BW16 modular; designs; sign branches d=8, 10"


CRITERIA = {i: globals()[f"criterion_{i}"] for i in range(1, 11)}


@pytest.mark.parametrize("n", list(CRITERIA), ids=[f"criterion_{i}" for i in CRITERIA])
def test_criterion(n):
    _record(n, CRITERIA[n])


def report_lines() -> list[str]:
    lines = []
    for n in sorted(RESULTS):
        ok, detail = RESULTS[n]
        lines.append(f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}")
    return lines


if __name__ == "__main__":
    for n, fn in CRITERIA.items():
        try:
            _record(n, fn)
        except AssertionError:
            pass
    print("\n".join(report_lines()))
