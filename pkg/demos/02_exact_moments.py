"""Exact moments by enumerating every permutation
================================================

For small n all n! permutations are visited and the moments come out as exact
fractions, which makes it possible to test closed forms with no noise at all.

    python demos/02_exact_moments.py
"""
from kpeaks.exact import (as_moment_formulas, conjecture_report, e_peaks_formula, enumerate_moments,
                          joint_peak_prob_formula, joint_peak_prob_oracle, rational_str, var_peaks_formula)

n, k = 8, 2
m = enumerate_moments(n, k)
f = as_moment_formulas(n, k)
print(f"n={n}, k={k}, {m.total} permutations")
print("  E[P]   exact", rational_str(m.e_peaks), " closed form", rational_str(e_peaks_formula(n, k)))
print("  Var(P) exact", rational_str(m.var_peaks), " closed form", rational_str(var_peaks_formula(n, k)))
print("  E[as]  exact", rational_str(m.e_as), " closed form", rational_str(f.e_as))
print("  E[zs] - E[as] =", rational_str(m.e_zs - m.e_as))
print("  zs = as on", m.zs_equals_as, "of", m.total, "permutations")

# The means match, but the variance does not. The pairwise probability behind
# it already fails on n = 5: [3,1,4,2,5] has 2-peaks 3, 4 and 5, yet the
# closed form gives probability 0 to the pair (3, 4).
print("P(3 and 4 both 2-peaks), n=5:", rational_str(joint_peak_prob_oracle(5, 2, 3, 4)),
      "vs closed form", rational_str(joint_peak_prob_formula(5, 2, 3, 4)))

# For k = 1 everything lines up, including Var(as) = 8n/45 - 13/180.
print("Var(as), n=8, k=1:", rational_str(enumerate_moments(8, 1).var_as),
      "vs", rational_str(as_moment_formulas(8, 1).var_as1))

# Var(as) against the conjectured 8(n-k)/45 + 19/180. The difference vanishes
# for k = 1 and grows with k.
print("\nVar(as) minus conjecture, n <= 9")
for row in conjecture_report(9):
    if row["n"] >= 6:
        print(f"  n={row['n']} k={row['k']}: {rational_str(row['difference'])}")
