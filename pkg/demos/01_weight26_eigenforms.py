"""Split theta_D4 * Delta16^3 into two weight-26 Hecke eigenforms.

The pseudo-eigenform has a(2^i) = 0 and a(3 * 2^i) = 2^(12 i) because it is
a scaled difference of two normalized eigenforms with the same U_2 eigenvalue.
"""
from modlattice.modforms import cusp_basis, eigen_split_weight26, pseudo_eigen_check

basis = cusp_basis(26, 20)
print("reduced cusp basis of weight 26:")
for i, f in enumerate(basis.forms, 1):
    head = ", ".join(f"{f[e]}" for e in (12, 14, 16, 18))
    print(f"  f{i} = q^{f.valuation()} + ...  (q^12..q^18: {head})")

split = eigen_split_weight26()
print(f"\nT3 has trace {split.trace} and determinant {split.det}")
for name, h in (("h1", split.h1), ("h2", split.h2)):
    print(f"  {name}: T2 = {h.hecke_eigenvalues[2]}, T3 = {h.hecke_eigenvalues[3]}")
print(f"theta_D4 Delta16^3 = (h2 - h1) * {split.scale}: {split.pseudo.check()}")

rep = pseudo_eigen_check(5)
print(f"\nchecked at precision {rep.precision}")
for i in range(1, 6):
    print(f"  a(2^{i}) = {rep.a_pow2[i]},  a(3*2^{i}) = 2^{12 * i}: {rep.a_3pow2[i] == 2 ** (12 * i)}")
