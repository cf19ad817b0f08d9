"""Exact moments over all of S_n, and closed forms to check them against.

Enumeration visits every permutation by in-place lexicographic successor,
splitting S_n by first value so blocks can run on separate threads. Each block
keeps integer sums (of P, P^2, as, as^2, zs, zs^2 and per-value / per-pair
k-peak counts) that are added together at the end, so the result does not
depend on scheduling. Everything returned is a :class:`fractions.Fraction`.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional

import numpy as np
from numba import njit

from ._kernels import greedy_sections, las_from_sections
from .errors import DegenerateDenominator, DomainError, Overflow, TooLarge

MAX_N = 12
MAX_N_ORACLE = 10

# slots of the per-block integer accumulator
_COUNT, _P, _P2, _AS, _AS2, _ZS, _ZS2, _ZS_EQ_AS, _E_NEG = range(9)
_NSLOTS = 9


@njit(cache=True, nogil=True)
def _next_perm(a, start):
    n = a.shape[0]
    i = n - 2
    while i >= start and a[i] > a[i + 1]:
        i -= 1
    if i < start:
        return False
    j = n - 1
    while a[j] < a[i]:
        j -= 1
    a[i], a[j] = a[j], a[i]
    lo = i + 1
    hi = n - 1
    while lo < hi:
        a[lo], a[hi] = a[hi], a[lo]
        lo += 1
        hi -= 1
    return True


@njit(cache=True, nogil=True)
def _enumerate_block(n, k, first, sums, joint, want_joint):
    a = np.empty(n, dtype=np.int64)
    a[0] = first
    pos = 1
    for v in range(1, n + 1):
        if v != first:
            a[pos] = v
            pos += 1
    ind = np.zeros(n, dtype=np.bool_)
    scratch = np.empty(0, dtype=np.bool_)
    while True:
        p, up = greedy_sections(a, k, False, ind, want_joint)
        las = las_from_sections(p, up)
        fp, fup = greedy_sections(a, k, True, scratch, False)
        zs = max(las, las_from_sections(fp, fup))
        sums[_COUNT] += 1
        sums[_P] += p
        sums[_P2] += p * p
        sums[_AS] += las
        sums[_AS2] += las * las
        sums[_ZS] += zs
        sums[_ZS2] += zs * zs
        if zs == las:
            sums[_ZS_EQ_AS] += 1
        if las - 2 * p < 0:
            sums[_E_NEG] += 1
        if want_joint:
            for i in range(n):
                if ind[i]:
                    for j in range(i, n):
                        if ind[j]:
                            joint[i, j] += 1
        if not _next_perm(a, 1):
            break


def _fr(num: int, den: int) -> Fraction:
    return Fraction(int(num), int(den))


def _check_capacity(n: int) -> None:
    # largest accumulator is n! * n^2 (sum of squared lengths)
    if math.factorial(n) * n * n >= 2**63:
        raise Overflow(f"int64 accumulators cannot hold sums over S_{n}")


@dataclass(frozen=True)
class ExactMoments:
    n: int
    k: int
    e_peaks: Fraction
    var_peaks: Fraction
    e_as: Fraction
    var_as: Fraction
    e_zs: Fraction
    var_zs: Fraction
    zs_equals_as: int
    residual_negative: int
    total: int
    peak_probs: Optional[tuple[Fraction, ...]] = None
    joint_peak_probs: Optional[dict[tuple[int, int], Fraction]] = field(default=None, repr=False)

    def to_dict(self) -> dict:
        out = {
            "n": self.n,
            "k": self.k,
            "permutations": self.total,
            "e_peaks": rational_str(self.e_peaks),
            "var_peaks": rational_str(self.var_peaks),
            "e_as": rational_str(self.e_as),
            "var_as": rational_str(self.var_as),
            "e_zs": rational_str(self.e_zs),
            "var_zs": rational_str(self.var_zs),
            "zs_equals_as": self.zs_equals_as,
            "residual_negative": self.residual_negative,
        }
        if self.peak_probs is not None:
            out["peak_probs"] = {str(i + 1): rational_str(q) for i, q in enumerate(self.peak_probs)}
        if self.joint_peak_probs is not None:
            out["joint_peak_probs"] = {
                f"{i},{j}": rational_str(q) for (i, j), q in sorted(self.joint_peak_probs.items())
            }
        return out


def rational_str(q: Fraction) -> str:
    """Lossless ``"num/den"`` rendering (integers too: ``"3/1"``)."""
    return f"{q.numerator}/{q.denominator}"


def enumerate_moments(n: int, k: int, *, joint: bool = False, threads: int = 1) -> ExactMoments:
    """Exact moments of P, as and zs over all ``n!`` permutations.

    With ``joint=True`` also returns ``P(i is a k-peak)`` per value and
    ``P(i and j are k-peaks)`` per pair ``i < j``.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    if k < 1:
        raise DomainError("k must be >= 1")
    if n > MAX_N:
        raise TooLarge(f"exhaustive enumeration is capped at n={MAX_N}, got {n}")
    _check_capacity(n)

    def block(first: int) -> tuple[np.ndarray, np.ndarray]:
        sums = np.zeros(_NSLOTS, dtype=np.int64)
        table = np.zeros((n, n) if joint else (1, 1), dtype=np.int64)
        _enumerate_block(n, k, first, sums, table, joint)
        return sums, table

    firsts = range(1, n + 1)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(block, firsts))
    else:
        parts = [block(f) for f in firsts]
    sums = [sum(int(p[0][s]) for p in parts) for s in range(_NSLOTS)]

    total = math.factorial(n)
    if sums[_COUNT] != total:
        raise AssertionError(f"visited {sums[_COUNT]} permutations, expected {total}")

    def mean_var(s1: int, s2: int) -> tuple[Fraction, Fraction]:
        mean = _fr(s1, total)
        return mean, _fr(s2, total) - mean * mean

    e_p, v_p = mean_var(sums[_P], sums[_P2])
    e_as, v_as = mean_var(sums[_AS], sums[_AS2])
    e_zs, v_zs = mean_var(sums[_ZS], sums[_ZS2])

    peak_probs = None
    joint_probs = None
    if joint:
        table = sum((p[1].astype(object) for p in parts[1:]), parts[0][1].astype(object))
        peak_probs = tuple(_fr(table[i, i], total) for i in range(n))
        joint_probs = {
            (i + 1, j + 1): _fr(table[i, j], total) for i in range(n) for j in range(i + 1, n)
        }
    return ExactMoments(
        n=n,
        k=k,
        e_peaks=e_p,
        var_peaks=v_p,
        e_as=e_as,
        var_as=v_as,
        e_zs=e_zs,
        var_zs=v_zs,
        zs_equals_as=sums[_ZS_EQ_AS],
        residual_negative=sums[_E_NEG],
        total=total,
        peak_probs=peak_probs,
        joint_peak_probs=joint_probs,
    )


@lru_cache(maxsize=64)
def _joint_table(n: int, k: int) -> ExactMoments:
    return enumerate_moments(n, k, joint=True)


def joint_peak_prob_oracle(n: int, k: int, i: int, j: int) -> Fraction:
    """``P(i and j are both k-peaks)`` counted over all of S_n (``n <= 10``)."""
    if n > MAX_N_ORACLE:
        raise TooLarge(f"joint oracle is capped at n={MAX_N_ORACLE}, got {n}")
    if not 1 <= i < j <= n:
        raise DomainError(f"need 1 <= i < j <= n, got i={i}, j={j}, n={n}")
    return _joint_table(n, k).joint_peak_probs[(i, j)]


def peak_prob_oracle(n: int, k: int, i: int) -> Fraction:
    if n > MAX_N_ORACLE:
        raise TooLarge(f"oracle is capped at n={MAX_N_ORACLE}, got {n}")
    if not 1 <= i <= n:
        raise DomainError(f"value {i} outside 1..{n}")
    return _joint_table(n, k).peak_probs[i - 1]


# closed forms


def _require_k_below_n(n: int, k: int) -> None:
    if not 1 <= k <= n - 1:
        raise DomainError(f"need 1 <= k <= n-1, got n={n}, k={k}")


def e_peaks_formula(n: int, k: int) -> Fraction:
    """Expected number of k-peaks, ``(n - k + 2)/3``."""
    _require_k_below_n(n, k)
    return Fraction(n - k + 2, 3)


def var_peaks_formula(n: int, k: int) -> Fraction:
    """Variance of the number of k-peaks, ``(2(n - k) + 4)/45``.

    Exhaustive enumeration for n <= 10 agrees exactly when ``n - k >= 4``;
    see ``var_peaks_validity``.
    """
    _require_k_below_n(n, k)
    return Fraction(2 * (n - k) + 4, 45)


def peak_prob_formula(n: int, k: int, i: int) -> Fraction:
    """``P(i is a k-peak) = (i-k)(i-k+1) / ((n-k)(n-k+1))`` for ``i > k``, else 0.

    Matches enumeration exactly for every ``1 <= k < n <= 10``.
    """
    _require_k_below_n(n, k)
    if not 1 <= i <= n:
        raise DomainError(f"value {i} outside 1..{n}")
    if i <= k:
        return Fraction(0)
    return Fraction((i - k) * (i - k + 1), (n - k) * (n - k + 1))


def joint_peak_prob_formula(n: int, k: int, i: int, j: int) -> Fraction:
    """Closed form for ``P(i and j are both k-peaks)``, ``i < j``.

    ``(i-k)(i-k+1)(j-k-2)(j-k-1) / ((n-k-2)(n-k-1)(n-k)(n-k+1))``, taken as 0
    when ``i <= k`` or ``j <= k + 2``.
    """
    if not 1 <= i < j <= n:
        raise DomainError(f"need 1 <= i < j <= n, got i={i}, j={j}, n={n}")
    if n - k <= 2:
        raise DegenerateDenominator(f"denominator vanishes for n - k = {n - k}")
    if i <= k or j <= k + 2:
        return Fraction(0)
    num = (i - k) * (i - k + 1) * (j - k - 2) * (j - k - 1)
    den = (n - k - 2) * (n - k - 1) * (n - k) * (n - k + 1)
    return Fraction(num, den)


def joint_peak_sum_formula(n: int, k: int) -> Fraction:
    """``sum_{i<j} P(i, j both k-peaks) = (5k - 5n + 3)(k - n - 2) / 90``."""
    if n - k <= 2:
        raise DegenerateDenominator(f"denominator vanishes for n - k = {n - k}")
    return Fraction((5 * k - 5 * n + 3) * (k - n - 2), 90)


@dataclass(frozen=True)
class AsFormulas:
    """Closed forms for the alternating-subsequence moments at ``(n, k)``.

    ``var_as_conjecture`` is an unproven value and is labelled CONJECTURE
    wherever it is reported. ``var_as1`` is only set for ``k = 1``.
    """

    n: int
    k: int
    e_as: Fraction
    e_zs: Fraction
    var_as_leading: Fraction
    var_as_conjecture: Fraction
    var_as1: Optional[Fraction] = None

    def to_dict(self) -> dict:
        out = {
            "e_as": rational_str(self.e_as),
            "e_zs": rational_str(self.e_zs),
            "var_as_leading": rational_str(self.var_as_leading),
            "var_as_conjecture": {"value": rational_str(self.var_as_conjecture), "label": "CONJECTURE"},
        }
        if self.var_as1 is not None:
            out["var_as1"] = rational_str(self.var_as1)
        return out


def as_moment_formulas(n: int, k: int) -> AsFormulas:
    _require_k_below_n(n, k)
    leading = Fraction(8 * (n - k), 45)
    return AsFormulas(
        n=n,
        k=k,
        e_as=Fraction(4 * (n - k) + 5, 6),
        e_zs=Fraction(2 * (n - k) + 4, 3),
        var_as_leading=leading,
        var_as_conjecture=leading + Fraction(19, 180),
        var_as1=Fraction(8 * n, 45) - Fraction(13, 180) if k == 1 else None,
    )


def var_peaks_validity(n_max: int = 8, *, threads: int = 1) -> list[dict]:
    """Oracle vs closed form for Var(P) at every ``1 <= k < n <= n_max``."""
    rows = []
    for n in range(2, n_max + 1):
        for k in range(1, n):
            oracle = enumerate_moments(n, k, threads=threads).var_peaks
            formula = var_peaks_formula(n, k)
            rows.append({"n": n, "k": k, "n_minus_k": n - k, "oracle": oracle, "formula": formula,
                         "equal": oracle == formula})
    return rows


def conjecture_report(n_max: int = 10, *, threads: int = 1) -> list[dict]:
    """Exact Var(as) minus the conjectured ``8(n-k)/45 + 19/180``, for every ``1 <= k < n <= n_max``."""
    rows = []
    for n in range(2, n_max + 1):
        for k in range(1, n):
            m = enumerate_moments(n, k, threads=threads)
            conj = as_moment_formulas(n, k).var_as_conjecture
            rows.append({"n": n, "k": k, "var_as": m.var_as, "conjecture": conj, "difference": m.var_as - conj})
    return rows
