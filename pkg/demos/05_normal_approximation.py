"""How fast does as_{n,k} look normal?
=====================================

Standardizes simulated values of as_{n,2} and measures the Kolmogorov distance
to N(0,1) for growing n. Writes the series to docs/clt_series.csv for plotting.

    python demos/05_normal_approximation.py [samples]
"""
import csv
import sys
from pathlib import Path

from kpeaks.montecarlo import empirical_kolmogorov

samples = int(sys.argv[1]) if len(sys.argv) > 1 else 100_000
ns = [100, 300, 1000, 3000, 10_000]

rows = []
for n in ns:
    r = empirical_kolmogorov("as", n, 2, samples, 2024)
    rows.append({"n": n, "k": 2, "samples": samples, "d_k": r.d_k_empirical, "tv_bound": r.tv_bound_value})
    print(f"n={n:>6}: d_K = {r.d_k_empirical:.4f}")

# The statistic is integer valued, so the ECDF jumps by about the local
# probability mass at each value. That alone keeps d_K of order 1/sd, which
# is why the decay here is roughly like n^-1/2.
out = Path(__file__).resolve().parents[1] / "docs" / "clt_series.csv"
with open(out, "w", newline="") as fh:
    writer = csv.DictWriter(fh, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
print("wrote", out)
