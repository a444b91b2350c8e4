"""Evaluating a few sums by hand and by machine."""

import math

from quadsum import QuadPoly, cyc_abs, eval_gray, eval_naive, root_params

# x1*x2 over Z_3: the sum is exactly 2w - 2w^2, so |S| = sqrt(3)/2
f = QuadPoly(2, 3, {(1, 2): 1})
v = eval_naive(f)
print("exponent counts:", v.unnormalized.coeffs)
print("|S| =", v.norm, "vs sqrt(3)/2 =", math.sqrt(3) / 2)

# the Gray-code walk gives the identical cyclotomic integer
print("gray == naive:", eval_gray(f).unnormalized == v.unnormalized)

# a homogeneous form in an odd number of variables always sums to zero
g = QuadPoly(3, 5, {(1, 2): 1, (2, 3): 1})
print("odd homogeneous sum:", eval_gray(g).unnormalized.reduced())

# disjoint pieces multiply
for m in (3, 5, 7, 9):
    p = root_params(m)
    h = QuadPoly(6, m, {(1, 2): p.c, (3, 4): p.c, (5, 6): p.c})
    print(f"m={m}: |S| = {eval_gray(h).norm:.12f}  (q/2)^3 = {p.half_q ** 3:.12f}")

# bigger n is still quick with the incremental walk
big = QuadPoly(22, 7, {(i, i + 1): 2 for i in range(1, 22)}, tuple([1] * 22))
print("n=22 path:", eval_gray(big).norm, cyc_abs(eval_gray(big).unnormalized) / 2**22)
