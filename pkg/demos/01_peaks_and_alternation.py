"""k-peaks and k-alternating subsequences of a single permutation
===============================================================

Walks through one small permutation by hand and then checks the link between
the peak count and the longest k-alternating subsequence on random input.

    python demos/01_peaks_and_alternation.py
"""
from kpeaks import (Permutation, SeedSpec, alt_lengths, flip, las_dp, peak_profile_ref,
                    sample_uniform, valley_count)

# A k-peak is the top of a maximal run that climbs by at least k overall
# while never dropping by k or more along the way.
p = Permutation([3, 1, 4, 2, 5])
for k in (1, 2, 3):
    print(f"k={k}: k-peaks {peak_profile_ref(p, k).peaks()}, k-valleys {valley_count(p, k)}")

# Flipping values (v -> n+1-v) swaps peaks and valleys.
print("peaks of the flip, k=1:", peak_profile_ref(flip(p), 1).peaks())

# as is the longest subsequence that starts with a drop, alternates, and
# moves by at least k at every step. zs also allows starting with a rise.
for k in (1, 2):
    r = alt_lengths(p, k)
    print(f"k={k}: as={r.as_len} zs={r.zs_len} peaks={r.peaks} residual as-2P={r.residual}")

# The residual is 0 or -1. It is -1 exactly when nothing after the last
# k-peak lies k or more below it, so the final peak cannot be followed by a drop.
counts = {0: 0, -1: 0}
for s in range(2000):
    q = sample_uniform(60, SeedSpec(1, s))
    r = alt_lengths(q, 3)
    assert r.as_len == las_dp(q.image, 3)  # O(n) route agrees with the O(n^2) program
    counts[r.residual] += 1
print("residual counts over 2000 random permutations of size 60, k=3:", counts)
