"""For m = 3 the sign character is a product of Legendre symbols."""

from quadsum.legendre3 import (
    decompose_m3,
    find_applicable_sigma,
    legendre_identity_check,
    pairings,
    verify_nonsingular_bound,
)
from quadsum.polynomial import QuadPoly
from quadsum.sums import eval_naive

print("identity holds:", legendre_identity_check())

f = QuadPoly(4, 3, {(1, 2): 1, (2, 3): 2, (3, 4): 1}, (0, 1, 0, 2))
dec = decompose_m3(f, [1, 3, 2, 4])
for sign, g in dec.terms:
    print(f"{sign:+d}  {g.pretty()}")
print("recombined", dec.recombine(), "direct", eval_naive(f).value)

print(len(list(pairings(6))), "pairings of six variables")
print("pairing with nonsingular terms for f:", find_applicable_sigma(f))

# a single cross term does admit one, and the bound follows
cycle = QuadPoly(4, 3, {(1, 4): 1})
sigma = find_applicable_sigma(cycle)
print("x1*x4:", sigma, verify_nonsingular_bound(4, cycle, sigma))
