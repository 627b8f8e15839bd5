"""Imaginary Verma module in rank one: y-length reduction and the tensor-product decomposition."""

from __future__ import annotations

import random

from sl2cq import ImaginaryModule, ScalarConfig, Sl2Cq, SupportBox

A = Sl2Cq(ScalarConfig.rational(1))
M = ImaginaryModule.from_values(A, 0, [1])

v = M.from_word([A.key("Y", (1,)), A.key("Y", (-1,)), A.key("U", (-1,))])
print("v =", v, " y-length", M.y_length(v))
while M.y_length(v):
    x = M.prop3_probe(v, SupportBox(3, 1))
    v = M.act(x, v)
    print(f"after {x}: y-length {M.y_length(v)}")

box = SupportBox(2, 2, 2)
gen = M.act(A.U((-1,)), M.vacuum)
rep = M.theorem2_check(gen, box)
print("submodule generated by U(-1)v matches U(Y) (x) its Y-free part:", rep["pass"])
for row in rep["slots"][:6]:
    print("  ", row)

print("L(lambda) slot dims:", M.l_lambda_dims(box))
rng = random.Random(0)
print("random weight vector:", M.random_weight_vector(2, box, rng))
