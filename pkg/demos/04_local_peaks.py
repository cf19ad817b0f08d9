"""Local k-peaks and the truncation bound
========================================

A local k-peak is a k-peak that can be confirmed by looking at most m
positions to each side. Local peaks far apart are independent, which is what
the normal approximation rests on. The price is the chance that some k-peak
needs a wider window, bounded by 3n(k/n)^m.

    python demos/04_local_peaks.py
"""
import itertools

import numpy as np

from kpeaks import Permutation, choose_window, local_profile, peak_profile_ref, tv_bound
from kpeaks.montecarlo import estimate

# 6 is a 3-peak here, but its right neighbours 5 and 4 are too close in value
# to settle it, so a window of 2 misses it while a window of 3 catches it.
p = Permutation([1, 6, 5, 4, 2, 3, 7, 8])
print("3-peaks:", peak_profile_ref(p, 3).peaks())
for m in (1, 2, 3):
    y = local_profile(p, 3, m)
    print(f"  window {m}: local 3-peaks {[int(v) + 1 for v in np.flatnonzero(y.y_indicators)]}")

# Exact mismatch probability over S_8 next to the bound. A window of m >= k
# can never miss: only k - 1 values sit strictly between v - k and v, so each
# scan meets a deciding value within k steps. The last row shows this.
n = 8
perms = [Permutation(t, check=False) for t in itertools.permutations(range(1, n + 1))]
print(f"\nP(some k-peak is not local) over S_{n}")
for k, m in [(2, 1), (3, 1), (3, 2), (4, 2), (4, 3), (2, 3)]:
    miss = sum(local_profile(q, k, m).y_count < peak_profile_ref(q, k).count for q in perms)
    print(f"  k={k} m={m}: {miss / len(perms):.5f}   bound {tv_bound(n, k, m):.5f}")

# A window making the bound at most n^-2.
for n, k in [(100, 2), (10_000, 10), (10_000, 1000)]:
    m = choose_window(n, k, 2)
    print(f"n={n} k={k}: window {m}, bound {tv_bound(n, k, m):.2e}")

# Monte Carlo at a size where enumeration is out of reach.
est = estimate("mismatch(3)", 200, 2, 200_000, 7)
print(f"\nn=200, k=2, m=3: mismatch rate {est.mean:.2e}, bound {tv_bound(200, 2, 3):.1e}")
