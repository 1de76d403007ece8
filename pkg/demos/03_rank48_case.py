"""Rank 48 in four steps, each recorded in the certificate."""
from modlattice.prover import verify_case

cert = verify_case(48)

view = cert.step("claim1-m2-m3-bounds")
print("M2 >= 0 gives  M4 >=", view["M4_lower_from_M2"])
print("M3 >= 0 gives  M4 <=", view["M4_upper_from_M3"])
print("so", view["quadratic"])
feasible = [s for s, ok in view["feasible_with_M2_M3_only"].items() if ok]
print("even s allowed by these two bounds:", ", ".join(feasible))
print("with every count nonnegative, FM also removes s = 18:", cert.branch(18)["closure"]["kind"])

rel = cert.step("claim2-relation")["values"]
print(f"\nfor s in (10, 12): f(s) + ({rel['Mp4']}) M'_4 + ({rel['Mp5']}) M'_5 = 0")
print("  f(s) =", rel["f"])
print("  every term is negative there, so:", cert.branch(10)["closure"]["kind"], cert.branch(12)["closure"]["kind"])

print("\nassuming M'_4 = 0 on the dual minimum:", cert.step("claim3")["values"])

print("\nremaining norms:")
for s, row in cert.step("claim4-table")["values"].items():
    print(f"  s = {s}: " + ", ".join(f"{k} = {v}" for k, v in row.items()))
print("\nverdict:", cert.verdict)
