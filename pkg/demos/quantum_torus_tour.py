"""Walk through the quantum torus at q = zeta_3: cocycle, commutator map, radical, center."""

from __future__ import annotations

from sl2cq import Lattice, ScalarConfig, TorusElement, center_split, torus_multiply

cfg = ScalarConfig.cyclotomic_upper(2, 3, {(1, 2): 1})
L = Lattice(cfg)

t1 = TorusElement.monomial(L, (1, 0))
t2 = TorusElement.monomial(L, (0, 1))
print("t1 t2 =", torus_multiply(t1, t2))
print("t2 t1 =", torus_multiply(t2, t1))
print("f((1,0),(0,1)) =", L.f_map((1, 0), (0, 1)))

# the center of C_q is spanned by t^a with a in the radical
print("radical basis:", L.radical_basis(2))
u = TorusElement(L, {(3, 0): 2, (1, 1): 1, (0, 3): -1})
z, rest = center_split(u)
print("central part:", z)
print("rest:", rest)
