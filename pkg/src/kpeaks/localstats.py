"""Local k-peaks: k-peaks certifiable from a window of ``m`` positions per side.

Value ``i`` is a local k-peak when both scans used for k-peaks resolve within
``m`` positions of ``i``. Running off the end of the permutation inside the
window counts as resolved, the same convention as for ordinary k-peaks, so a
local k-peak is always a k-peak.

A window of ``m >= k`` never misses: the values strictly between ``i - k`` and
``i`` number ``k - 1``, so each scan meets a deciding value within ``k`` steps.
Mismatches, and so the bound :func:`tv_bound`, only matter for ``m < k``.

Note that the window-free restatement of the k-peak conditions asks for an
index ``j`` on each side with a small enough value. Taken literally that has
no boundary exemption and would reject the global maximum of the identity
permutation; the boundary convention used here is the one under which k-peaks
end maximal k-ascending sections.
"""

from __future__ import annotations

import math
from fractions import Fraction
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DomainError, ValueOutOfRange
from .permutation import Permutation


@dataclass(frozen=True)
class LocalPeakProfile:
    k: int
    m: int
    y_indicators: np.ndarray
    y_count: int


def _check(k: int, m: int) -> None:
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")


def is_local_k_peak(p: Permutation, i: int, k: int, m: int) -> bool:
    _check(k, m)
    if not 1 <= i <= p.n:
        raise ValueOutOfRange(f"value {i} is outside 1..{p.n}")
    pos = int(np.flatnonzero(p.image == i)[0])
    return bool(_kernels.is_peak_at(p.image, pos, k, m))


def local_profile(p: Permutation, k: int, m: int) -> LocalPeakProfile:
    _check(k, m)
    ind = np.zeros(p.n, dtype=np.bool_)
    count = _kernels.peak_indicators_scan(p.image, k, m, ind)
    ind.setflags(write=False)
    return LocalPeakProfile(k, m, ind, int(count))


def position_indicators(p: Permutation, k: int, m: int) -> np.ndarray:
    """Local k-peak indicators indexed by position rather than value.

    Indicators at positions more than ``2m`` apart depend on disjoint stretches
    of the permutation.
    """
    return local_profile(p, k, m).y_indicators[p.image - 1]


def mismatch_indicator(p: Permutation, k: int, m: int) -> bool:
    """True when some k-peak of ``p`` is not a local k-peak."""
    _check(k, m)
    y = _kernels.peak_count_scan(p.image, k, m)
    return bool(y < _kernels.peak_count_fast(p.image, k))


def tv_bound(n: int, k: int, m: int) -> float:
    """Bound ``3 n (k/n)^m`` on the total variation distance between the
    k-peak count and the local k-peak count."""
    if not 1 <= k < n:
        raise DomainError(f"need 1 <= k < n, got n={n}, k={k}")
    if m < 1:
        raise DomainError(f"m must be >= 1, got {m}")
    # exact rational first so the float is correctly rounded
    return float(Fraction(3 * n * k**m, n**m))


def choose_window(n: int, k: int, alpha: float = 2.0) -> int:
    """Smallest ``m >= 1`` with ``tv_bound(n, k, m) <= n**-alpha``."""
    if not 1 <= k < n:
        raise DomainError(f"need 1 <= k < n, got n={n}, k={k}")
    if alpha <= 1:
        raise DomainError(f"alpha must exceed 1, got {alpha}")
    target = n ** (-alpha)
    # solve 3n (k/n)^m = n^-alpha, then step to the first integer that works
    m_star = (-(1 + alpha) * math.log(n) - math.log(3)) / math.log(k / n)
    m = max(1, math.ceil(m_star) - 1)
    while tv_bound(n, k, m) > target:
        m += 1
    while m > 1 and tv_bound(n, k, m - 1) <= target:
        m -= 1
    return m
