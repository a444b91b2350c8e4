"""Who attains the largest |S|, and how far behind is the runner-up."""

from quadsum.extremal import canonical_extremal, reports_to_csv, search, verify_gap, verify_sharpness
from quadsum.polynomial import FamilySpec

reports = []
for n, m in [(2, 3), (2, 5), (3, 3), (3, 5), (4, 3)]:
    rep = search(FamilySpec("all", n, m))
    reports.append(rep)
    print(f"n={n} m={m}: max {rep.max_norm:.6f} from {rep.evaluated} orbit representatives")
    for w in rep.max_witnesses:
        print("    ", w.pretty())
    print("     witnesses as predicted:", rep.witnesses_match, " gap holds:", verify_gap(rep))

print(reports_to_csv(reports))

print(canonical_extremal(7, 11).pretty())
print("sharp for n <= 20, m = 11:", all(verify_sharpness(n, 11) for n in range(1, 21)))

# beyond enumeration, sample
rep = search(FamilySpec("random", 6, 7, count=20000, seed=1), use_symmetry=False)
print("sampled n=6 m=7:", rep.max_norm, "<=", rep.conjectured)
