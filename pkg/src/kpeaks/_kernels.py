"""Numba kernels for k-peak and k-alternating statistics.

Kernels take a 1-D ``int64`` array holding a permutation of ``1..n`` (or a
``float64`` array of distinct reals for ``las_dp``). Indicator arrays are
indexed by ``value - 1``.
"""

import numpy as np
from numba import njit

UNLIMITED = -1


@njit(cache=True)
def scan_resolves(a, pos, v, k, step, limit):
    """Walk from ``pos`` in direction ``step`` looking for a value <= v - k.

    Returns False on meeting a value > v first, or when ``limit`` positions
    were examined without resolution. Running off the end of the array counts
    as resolved.
    """
    n = a.shape[0]
    t = pos + step
    seen = 0
    while 0 <= t < n:
        if seen == limit:
            return False
        w = a[t]
        if w > v:
            return False
        if w <= v - k:
            return True
        t += step
        seen += 1
    return True


@njit(cache=True)
def is_peak_at(a, pos, k, limit):
    v = a[pos]
    if v <= k:
        return False
    return scan_resolves(a, pos, v, k, 1, limit) and scan_resolves(a, pos, v, k, -1, limit)


@njit(cache=True)
def peak_indicators_scan(a, k, limit, ind):
    """Fill ``ind`` by per-value scans; returns the count. O(n^2) when unlimited."""
    count = 0
    for pos in range(a.shape[0]):
        hit = is_peak_at(a, pos, k, limit)
        ind[a[pos] - 1] = hit
        if hit:
            count += 1
    return count


@njit(cache=True)
def peak_count_scan(a, k, limit):
    count = 0
    for pos in range(a.shape[0]):
        if is_peak_at(a, pos, k, limit):
            count += 1
    return count


@njit(cache=True)
def greedy_sections(a, k, flipped, ind, record):
    """One left-to-right pass over maximal k-ascending/descending sections.

    Phase 0 means no k-up or k-down seen yet, phase 1 tracks the running max
    of an ascending section, phase 2 the running min of a descending one.
    A k-peak is committed when an ascending stretch ends in a drop of at least
    ``k`` (or when the very first event is such a drop), and once more if the
    array ends while ascending.

    With ``flipped`` the values are read as ``n + 1 - v``. Returns
    ``(peak_count, ends_ascending)``.
    """
    n = a.shape[0]
    if record:
        for v in range(n):
            ind[v] = False
    first = a[0]
    if flipped:
        first = n + 1 - first
    hi = first
    lo = first
    phase = 0
    count = 0
    for t in range(1, n):
        v = a[t]
        if flipped:
            v = n + 1 - v
        if phase == 1:
            if v > hi:
                hi = v
            elif v <= hi - k:
                count += 1
                if record:
                    ind[(n + 1 - hi if flipped else hi) - 1] = True
                phase = 2
                lo = v
        elif phase == 2:
            if v < lo:
                lo = v
            elif v >= lo + k:
                phase = 1
                hi = v
        else:
            if v <= hi - k:
                count += 1
                if record:
                    ind[(n + 1 - hi if flipped else hi) - 1] = True
                phase = 2
                lo = v
            elif v >= lo + k:
                phase = 1
                hi = v
            else:
                if v > hi:
                    hi = v
                if v < lo:
                    lo = v
    if phase == 1:
        count += 1
        if record:
            ind[(n + 1 - hi if flipped else hi) - 1] = True
    return count, phase == 1


@njit(cache=True)
def las_from_sections(count, ends_ascending):
    if count == 0:
        return 1
    return 2 * count - (1 if ends_ascending else 0)


@njit(cache=True)
def peak_count_fast(a, k):
    return greedy_sections(a, k, False, np.empty(0, dtype=np.bool_), False)[0]


@njit(cache=True)
def las_fast(a, k):
    count, up = greedy_sections(a, k, False, np.empty(0, dtype=np.bool_), False)
    return las_from_sections(count, up)


@njit(cache=True)
def alt_triple(a, k):
    """``(P, as, zs)`` in two linear passes."""
    count, up = greedy_sections(a, k, False, np.empty(0, dtype=np.bool_), False)
    las = las_from_sections(count, up)
    fcount, fup = greedy_sections(a, k, True, np.empty(0, dtype=np.bool_), False)
    las_flip = las_from_sections(fcount, fup)
    return count, las, max(las, las_flip)


@njit(cache=True)
def las_dp(values, gap):
    """Longest down-first alternating subsequence with every step >= gap. O(n^2).

    ``want_down[j]``: best length of an admissible subsequence ending at ``j``
    whose next step must go down (it has odd length). ``want_up[j]``: same,
    next step up (even length, last step was down).
    """
    n = values.shape[0]
    want_down = np.ones(n, dtype=np.int64)
    want_up = np.zeros(n, dtype=np.int64)
    best = 1
    for j in range(n):
        vj = values[j]
        wd = 1
        wu = 0
        for i in range(j):
            vi = values[i]
            if vi - vj >= gap:
                if want_down[i] + 1 > wu:
                    wu = want_down[i] + 1
            elif vj - vi >= gap:
                if want_up[i] > 0 and want_up[i] + 1 > wd:
                    wd = want_up[i] + 1
        want_down[j] = wd
        want_up[j] = wu
        if wd > best:
            best = wd
        if wu > best:
            best = wu
    return best


@njit(cache=True, nogil=True)
def las_greedy(values, gap):
    """Same value as ``las_dp`` in O(n).

    Keeps the most extreme candidate for the current turning point: the
    highest value while waiting for a drop of ``gap``, the lowest while
    waiting for a rise. An exchange argument shows a more extreme turning
    point never shortens the rest of the subsequence.
    """
    n = values.shape[0]
    c = values[0]
    length = 1
    down = True
    for j in range(1, n):
        v = values[j]
        if down:
            if v > c:
                c = v
            elif c - v >= gap:
                length += 1
                c = v
                down = False
        else:
            if v < c:
                c = v
            elif v - c >= gap:
                length += 1
                c = v
                down = True
    return length
