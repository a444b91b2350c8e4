"""Exact family moments, then the tail probabilities they control."""

from quadsum.moments import empirical_tail, moment_exact
from quadsum.polynomial import FamilySpec

for n, m in [(1, 3), (2, 5), (3, 7)]:
    rep = moment_exact(FamilySpec("all", n, m), 2)
    print(f"M2 over all quadratics, n={n} m={m}: {rep.exact}")

for n in (2, 3):
    rep = moment_exact(FamilySpec("homogeneous", n, 5), 2)
    print(f"M2 over homogeneous, n={n}: {rep.exact}  zero sums: {rep.zero_count}")

rep = moment_exact(FamilySpec("all", 3, 5), 6)
print("M6, n=3 m=5:", rep.exact, "<=", rep.bound, rep.within_bound)

print("gamma  lower  empirical  upper")
for t in empirical_tail(FamilySpec("all", 3, 5), [0.75, 0.8, 0.85, 0.9, 0.95, 1.0]):
    print(f"{t.gamma:.2f}  {t.lower:.4f}  {t.empirical:.4f}  {t.upper:.4f}")
