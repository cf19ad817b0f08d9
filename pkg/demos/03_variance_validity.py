"""Where does the closed form for Var(P) agree with exhaustive enumeration?

Writes docs/var_peaks_validity.md: one row per (n, k) with the exact variance
of the number of k-peaks over S_n next to (2(n-k)+4)/45.

    python demos/03_variance_validity.py [n_max]
"""
import sys
from pathlib import Path

from kpeaks.exact import rational_str, var_peaks_validity

n_max = int(sys.argv[1]) if len(sys.argv) > 1 else 10
rows = var_peaks_validity(n_max)

lines = [
    "# Var(P): exhaustive enumeration vs (2(n-k)+4)/45",
    "",
    f"Generated by `demos/03_variance_validity.py {n_max}`. P is the number of k-peaks",
    "of a uniform permutation of 1..n; `oracle` is its exact variance over all n!",
    "permutations.",
    "",
]
holds = sorted((r["n"], r["k"]) for r in rows if r["equal"])
lines.append(f"Agreement on n <= {n_max}: " + ", ".join(f"(n={n}, k={k})" for n, k in holds) + ".")
lines.append("That is, exactly the cases k = 1, n >= 4; every k >= 2 disagrees.")
lines += ["", "| n | k | oracle | formula | equal |", "|---|---|---|---|---|"]
for r in rows:
    lines.append(f"| {r['n']} | {r['k']} | {rational_str(r['oracle'])} | {rational_str(r['formula'])} | "
                 f"{'yes' if r['equal'] else 'no'} |")

out = Path(__file__).resolve().parents[1] / "docs" / "var_peaks_validity.md"
out.write_text("\n".join(lines) + "\n")
print(f"wrote {out} ({len(rows)} rows, {len(holds)} agree)")
