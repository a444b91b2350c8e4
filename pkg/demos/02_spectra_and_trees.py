"""Fourier coefficients of w^f, and how trees keep them small."""

import numpy as np

from quadsum.cyclotomic import root_params
from quadsum.fourier import forest_bound_certificate, spectrum_fwht, spectrum_naive, spectrum_tree
from quadsum.polynomial import QuadPoly

path = QuadPoly(3, 5, {(1, 2): 1, (2, 3): 1}, (1, 0, 0))
fast, slow, tree = spectrum_fwht(path), spectrum_naive(path), spectrum_tree(path)
print("max |fwht - naive| =", np.abs(fast.table - slow.table).max())
print("max |tree - naive| =", np.abs(tree.table - slow.table).max())
print("parseval:", fast.parseval())
print(fast.to_csv())

# a star on six vertices: every coefficient sits under (q/2)^5
star = QuadPoly(6, 7, {(1, j): 1 for j in range(2, 7)})
print("star max coeff", spectrum_tree(star).max_abs(), "bound", root_params(7).half_q ** 5)

# circuit rank and the certificate it buys
for f in (star, star.with_edge(2, 3, 1), QuadPoly(3, 3, {(1, 2): 1, (2, 3): 1, (1, 3): 1})):
    cert = forest_bound_certificate(f)
    print(f.pretty(), "| k =", cert.k, "threshold", round(cert.threshold, 3),
          "applicable" if cert.applicable else "not applicable")
