"""Rank 32: the configuration numbers at s = 8 contradict the eighth moment.

The design equations on L_6 fix M_0..M_3 as cubics in s = (x', x'); only
s = 8 leaves them nonnegative.  The dual shell then fixes the weighted sum of
P_8 over L'_6, and the cross-theta relation turns that into a required value
of sum (x', v)^8 which the M_j do not produce.
"""
from modlattice.configsys import CaseSpec, feasible_s_range, solve_config
from modlattice.prover import verify_case

case = CaseSpec.for_rank(32)
sym = solve_config(case)
for lab in sym.system.labels:
    print(f"{lab} = {sym.polynomial(lab)}")

rng = feasible_s_range(case)
print("\nsurviving s:", rng.survivors)
for b in rng.branches[:4]:
    print(f"  s = {b.s}: {b.kind}")

cert = verify_case(32)
data = cert.branch(8)["closure"]["data"]
print("\nat s = 8:", data["primary"]["values"])
print("dual shell:", data["dual"]["values"])
print(f"sum of P_8 over L'_6 = {data['dual_sum']}")
print(f"required sum (x',v)^8 = {data['required_moment']}, solved counts give {data['computed_moment']}")
print("verdict:", cert.verdict)
