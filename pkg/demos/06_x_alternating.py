"""Continuous alternation and the binomial coupling
==================================================

On a vector of n independent uniforms, count the longest subsequence that goes
down, up, down, ... with every step at least x. Its law should match the
ordinary longest alternating subsequence of a random permutation whose size
is Binomial(n, 1-x).

    python demos/06_x_alternating.py
"""
from kpeaks import SeedSpec
from kpeaks.xalt import coupling_check, las_x, sample_unit_vector

v = sample_unit_vector(12, SeedSpec(3, 0))
print("vector:", [round(float(t), 2) for t in v.values])
for x in (0.05, 0.2, 0.5, 0.8):
    print(f"  x={x}: longest x-alternating subsequence {las_x(v, x)}")

for n, x in [(100, 0.25), (500, 0.3), (1000, 0.1)]:
    r = coupling_check(n, x, 100_000, 2024)
    print(f"\nn={n} x={x}")
    print(f"  target     mean {r.target_mean:8.3f}  var {r.target_variance:8.3f}")
    print(f"  las_x      mean {r.las_x.mean:8.3f}  var {r.las_x.variance:8.3f}")
    print(f"  as of Z    mean {r.coupled.mean:8.3f}  var {r.coupled.variance:8.3f}")
    print(f"  empirical total variation distance {r.tv_distance:.4f}")
