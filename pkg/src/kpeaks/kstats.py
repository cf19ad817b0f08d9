"""k-peaks, k-valleys and longest k-alternating / k-zigzagging subsequences.

Two routes are kept for every statistic: a slow reference that follows the
definitions literally (per-value scans for peaks, an O(n^2) dynamic program
for alternating subsequences) and a single linear pass used everywhere else.
The linear pass is certified against the reference by the test suite; set
``KPEAKS_CROSSCHECK=1`` to re-check every call of :func:`alt_lengths`.

Conventions
-----------
* Indicator arrays are indexed by *value*: ``indicators[i - 1]`` is ``P_i``.
* ``as`` counts subsequences whose first step goes down; ``zs`` allows either
  starting direction.
* For ``k >= n`` there are no k-peaks and ``as = 1``.

When there is at least one k-peak, the residual ``E = as - 2P`` is 0 or -1:
it is -1 exactly when the permutation ends inside a maximal k-ascending
section (the last k-peak has no k-valley after it), and 0 otherwise. With no
k-peaks, ``E = 1``. The scan for ``P_i`` follows the
boundary convention that running off either end of the permutation without
meeting a larger value satisfies that side.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _kernels
from .errors import EmptySequence, ValueOutOfRange
from .permutation import Permutation, flip

_CROSSCHECK = os.environ.get("KPEAKS_CROSSCHECK", "") not in ("", "0")


@dataclass(frozen=True)
class PeakProfile:
    k: int
    indicators: np.ndarray
    count: int

    def peaks(self) -> list[int]:
        """The k-peak values, ascending."""
        return (np.flatnonzero(self.indicators) + 1).tolist()


@dataclass(frozen=True)
class AltLengths:
    as_len: int
    zs_len: int
    peaks: int
    residual: int


def _check_k(k: int) -> None:
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")


def is_k_peak_ref(p: Permutation, i: int, k: int) -> bool:
    """Whether value ``i`` is a k-peak, by direct scans from its position.

    Scanning right (then left) from ``i``, a value ``<= i - k`` must turn up
    before any value ``> i``; reaching the end of the permutation first also
    counts.
    """
    _check_k(k)
    if not 1 <= i <= p.n:
        raise ValueOutOfRange(f"value {i} is outside 1..{p.n}")
    pos = int(np.flatnonzero(p.image == i)[0])
    return bool(_kernels.is_peak_at(p.image, pos, k, _kernels.UNLIMITED))


def peak_profile_ref(p: Permutation, k: int) -> PeakProfile:
    _check_k(k)
    ind = np.zeros(p.n, dtype=np.bool_)
    count = _kernels.peak_indicators_scan(p.image, k, _kernels.UNLIMITED, ind)
    ind.setflags(write=False)
    return PeakProfile(k, ind, int(count))


def peak_profile_fast(p: Permutation, k: int) -> PeakProfile:
    _check_k(k)
    ind = np.zeros(p.n, dtype=np.bool_)
    count, _ = _kernels.greedy_sections(p.image, k, False, ind, True)
    ind.setflags(write=False)
    return PeakProfile(k, ind, int(count))


def peak_count_fast(p: Permutation, k: int) -> int:
    """Number of k-peaks in one pass over the maximal k-monotone sections."""
    _check_k(k)
    return int(_kernels.peak_count_fast(p.image, k))


def valley_count(p: Permutation, k: int) -> int:
    """Number of k-valleys; value ``i`` is a k-valley of ``p`` iff ``n+1-i`` is a k-peak of ``flip(p)``."""
    return peak_count_fast(flip(p), k)


def las_dp(values: Sequence[float] | np.ndarray, k_gap: float) -> int:
    """Longest alternating (down-first) subsequence with all steps ``>= k_gap``.

    Reference dynamic program, O(n^2). Works for any distinct reals, so it is
    shared by integer permutations and unit-interval vectors.
    """
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise EmptySequence("need a non-empty 1-D sequence")
    if k_gap < 0:
        raise ValueError("k_gap must be non-negative")
    return int(_kernels.las_dp(arr, float(k_gap)))


def las_fast(p: Permutation, k: int) -> int:
    _check_k(k)
    return int(_kernels.las_fast(p.image, k))


def zigzag_length(p: Permutation, k: int) -> int:
    """Longest k-zigzagging subsequence: the better of both starting directions."""
    _check_k(k)
    return int(_kernels.alt_triple(p.image, k)[2])


def alt_lengths(p: Permutation, k: int) -> AltLengths:
    _check_k(k)
    peaks, as_len, zs_len = (int(v) for v in _kernels.alt_triple(p.image, k))
    if _CROSSCHECK:
        dp = las_dp(p.image, k)
        if dp != as_len:
            raise AssertionError(f"las_fast={as_len} but las_dp={dp} for {p!r}, k={k}")
    residual = as_len - 2 * peaks
    assert abs(residual) <= 1, (p, k, residual)
    return AltLengths(as_len, zs_len, peaks, residual)
