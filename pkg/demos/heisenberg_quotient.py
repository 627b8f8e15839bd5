"""Build H(lambda), its submodule H~, and look for singular vectors in the quotient."""

from __future__ import annotations

from sl2cq import HeisenbergModule, ScalarConfig, Sl2Cq, SupportBox

A = Sl2Cq(ScalarConfig.cyclotomic_upper(2, 3, {(1, 2): 1}))
H = HeisenbergModule(A, [1, -1])
box = SupportBox(3, 3)

comps = H.tilde_h_components(box)
for beta, vecs in sorted(comps.items()):
    print(f"H~ in degree {beta}: dim {len(vecs)}")
print("degree 0 meets H~:", (0, 0) in comps)

sv = H.singular_vectors(box, raise_bound=3, quotient=H.tilde_closure(box))
hits = {beta: len(vs) for beta, vs in sv.items() if vs and any(beta)}
print("singular vectors below degree 0 in H/H~:", hits or "none")

# with lambda(c) = 0 the picture changes: U(-1) v is singular in rank one
Z = HeisenbergModule(Sl2Cq(ScalarConfig.rational(1)), [0])
print("rank one, lambda(c)=0:", Z.singular_vectors(SupportBox(3, 3), raise_bound=3)[(-1,)])
