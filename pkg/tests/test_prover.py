import copy
import json
from functools import cache

import pytest

from modlattice.prover import (
    SUPPORTED_RANKS,
    parity_deduction_rank24,
    remark_tables,
    replay_certificate,
    root_budget,
    verify_case,
)

ROOTS = {"A": lambda k: k * k + k, "D": lambda k: 2 * k * k - 2 * k}
EXCEPTIONAL = {6: 72, 7: 126, 8: 240}


@cache
def cert_json(rank):
    return verify_case(rank).to_json()


def brute_budget(rank):
    """Max over multisets of irreducible components, by plain recursion."""
    comps = [(k, ROOTS["A"](k)) for k in range(1, rank + 1)]
    comps += [(k, ROOTS["D"](k)) for k in range(4, rank + 1)]
    comps += [(k, v) for k, v in EXCEPTIONAL.items() if k <= rank]

    @cache
    def best(r):
        return max([0] + [v + best(r - k) for k, v in comps if k <= r])

    return best(rank)


@pytest.mark.parametrize("rank", [1, 2, 4, 7, 8, 9, 16, 24])
def test_root_budget(rank):
    assert root_budget(rank).max_roots == brute_budget(rank)


def test_root_budget_named():
    assert root_budget(24).max_roots == 1104 and root_budget(24).attained_by == ("D24",)
    assert root_budget(8).attained_by == ("E8",)
    assert root_budget(1).max_roots == 2
    with pytest.raises(ValueError):
        root_budget(0)


def test_parity_deduction():
    good = {"M0": 2016, "M1": 0, "M2": 1008, "N0": 0, "N1": 225792, "N2": 0, "N3": 32256}
    ded = parity_deduction_rank24(good)
    assert ded.passed
    bad = dict(good, M1=2)
    assert not parity_deduction_rank24(bad).passed
    assert parity_deduction_rank24(bad).failing == "even-on-L4"


@pytest.mark.parametrize("rank", SUPPORTED_RANKS)
def test_cases_are_proven_and_replay(rank):
    c = verify_case(rank)
    assert c.proven
    rep = replay_certificate(c.dumps())
    assert rep.ok, rep.failures
    assert len(rep.checked) >= len(c.branches)


def test_closure_kinds():
    kinds = {r: {b["closure"]["kind"] for b in cert_json(r)["branches"]} for r in SUPPORTED_RANKS}
    assert kinds[32] >= {"moment-mismatch"}
    assert kinds[24] >= {"root-budget"}
    assert kinds[36] >= {"parity"}
    assert kinds[48] >= {"fm-infeasible", "non-integral", "negative-count"}


def test_unsupported_rank():
    with pytest.raises(ValueError):
        verify_case(40)
    with pytest.raises(ValueError):
        verify_case(32, order=6)


def _branch(cert, s):
    return next(b for b in cert["branches"] if b["s"] == s)


def test_tampered_farkas_is_rejected():
    cert = copy.deepcopy(cert_json(48))
    y = _branch(cert, 10)["closure"]["data"]["y"]
    y[0] = str(-abs(int(y[0].split("/")[0])) - 1)
    rep = replay_certificate(cert)
    assert not rep.ok and any("s=10" in f.get("branch", "") for f in rep.failures)


def test_tampered_moment_is_rejected():
    cert = copy.deepcopy(cert_json(32))
    _branch(cert, 8)["closure"]["data"]["primary"]["values"]["M3"] = "12033"
    assert not replay_certificate(cert).ok


def test_tampered_parity_is_rejected():
    cert = copy.deepcopy(cert_json(36))
    br = _branch(cert, 10)
    br["system"]["rhs"][0] = str(int(br["system"]["rhs"][0]) + 1)
    assert not replay_certificate(cert).ok


def test_tampered_fm_system_is_rejected():
    # the Farkas check alone is satisfied by any rhs that keeps y.b < 0
    cert = copy.deepcopy(cert_json(48))
    br = _branch(cert, 24)
    br["system"]["rhs"][0] = str(int(br["system"]["rhs"][0]) + 2)
    rep = replay_certificate(cert)
    assert not rep.ok
    assert any("right-hand side" in e for f in rep.failures for e in f.get("errors", []))


def test_missing_build_record_is_rejected():
    cert = copy.deepcopy(cert_json(32))
    del _branch(cert, 8)["system"]["build"]
    assert not replay_certificate(cert).ok


def test_tampered_root_budget_is_rejected():
    cert = copy.deepcopy(cert_json(24))
    _branch(cert, 8)["closure"]["data"]["max_roots"] = 4000
    assert not replay_certificate(cert).ok


def test_missing_branch_is_rejected():
    cert = copy.deepcopy(cert_json(48))
    cert["branches"] = [b for b in cert["branches"] if b["s"] != 20]
    rep = replay_certificate(cert)
    assert not rep.ok and any("coverage" in f for f in rep.failures)


def test_certificate_json_shape():
    data = json.loads(verify_case(32).dumps())
    assert set(data) == {"case", "s_range", "survivors", "branches", "steps", "verdict", "environment"}
    assert data["environment"]["series_precision"] == 64
    assert data["steps"][0]["name"] == "shell-sizes" and data["steps"][0]["agree"]


def test_remark_tables():
    tables = remark_tables()
    assert [t.rank for t in tables] == [32, 24, 36]
    assert all(t.sums_consistent for t in tables)
    t24 = tables[1]
    assert t24.row_sums["N"] == 258046 and t24.degrees == (4, 6, 8)
