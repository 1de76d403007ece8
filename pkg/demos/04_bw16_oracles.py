"""Enumeration checks on the Barnes-Wall lattice BW16.

Everything the proofs assume about an extremal 2-modular lattice can be
tested on BW16 directly: its theta series, the design property of L_4 and
the sign relation between theta_L,P and theta_L',P.
"""
import random

from modlattice import latoracle
from modlattice.configsys import cross_theta_relations
from modlattice.qseries import extremal_theta

L = latoracle.bw16()
Lp = L.rescaled_dual()
print("theta(BW16):     ", latoracle.theta_direct(L, 7).coefficients())
print("extremal theta:  ", extremal_theta(16, 7).coefficients())
print("modular evidence:", latoracle.modularity_evidence(L, 7).passed)

for d in (2, 4, 6, 8):
    print(f"design defect of L_4 at degree {d}: {latoracle.design_defect(L.shell(4), d, seed=d)}")

rng = random.Random(5)
for d in (8, 10):
    rels = cross_theta_relations(16, d, 4, (4, 6), (4, 6))
    xp = latoracle.random_direction(16, rng)
    vals = latoracle.check_relations(L, xp, d, rels, 7, Lp)
    x = latoracle.weighted_theta_direct(L, xp, d, 7)
    y = latoracle.weighted_theta_dual(L, xp, d, 7, Lp)
    print(f"\ndegree {d}, x' = {[str(v) for v in xp[:4]]}...")
    print(f"  theta_L,P  at q^4: {x[4]}")
    print(f"  theta_L',P at q^4: {y[4]}")
    print(f"  {len(rels)} relations, residuals {vals}")
