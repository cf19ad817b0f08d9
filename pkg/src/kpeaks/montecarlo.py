"""Seeded Monte Carlo estimates and empirical Kolmogorov distances.

Sample ``s`` is always drawn from stream ``(master_seed, s)``, so the set of
sampled permutations is fixed by ``(samples, master_seed)`` alone. Workers
fill disjoint slices of one output array; moments are then folded in fixed
chunks of ``CHUNK`` samples, in index order. Results are therefore identical
for any thread count.
"""

from __future__ import annotations

import math
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Callable, Optional

import numpy as np
from numba import njit
from scipy.special import ndtr

from . import _kernels, _rng
from .errors import DegenerateScale, InvalidSelector, TooFewSamples
from .exact import as_moment_formulas, e_peaks_formula, var_peaks_formula
from .localstats import tv_bound

CHUNK = 1 << 16
Z95 = 1.959963984540054

PEAKS, AS, ZS, LOCAL_PEAKS, MISMATCH = range(5)
_KINDS = {"peaks": PEAKS, "as": AS, "zs": ZS, "local_peaks": LOCAL_PEAKS, "mismatch": MISMATCH}
_SELECTOR = re.compile(r"^\s*(\w+)\s*(?:\(\s*(\d+)\s*\))?\s*$")


@dataclass(frozen=True)
class Selector:
    kind: str
    m: Optional[int] = None

    @property
    def code(self) -> int:
        return _KINDS[self.kind]

    def __str__(self) -> str:
        return self.kind if self.m is None else f"{self.kind}({self.m})"


def parse_selector(stat: "str | Selector", m: Optional[int] = None) -> Selector:
    """Accept ``"peaks"``, ``"as"``, ``"zs"``, ``"local_peaks(3)"``, ``"mismatch(3)"``
    (or the bare name plus ``m=``)."""
    if isinstance(stat, Selector):
        return stat
    match = _SELECTOR.match(stat)
    if not match or match.group(1) not in _KINDS:
        raise InvalidSelector(f"unknown statistic {stat!r}; expected one of {sorted(_KINDS)}")
    kind = match.group(1)
    window = int(match.group(2)) if match.group(2) else m
    if kind in ("local_peaks", "mismatch"):
        if window is None or window < 1:
            raise InvalidSelector(f"{kind} needs a window m >= 1")
        return Selector(kind, window)
    if match.group(2):
        raise InvalidSelector(f"{kind} takes no window")
    return Selector(kind)


# sampling


@njit(cache=True, nogil=True)
def _sample_block(kind, n, k, m, master, start, out):
    a = np.empty(n, dtype=np.int64)
    state = np.empty(4, dtype=np.uint64)
    for s in range(out.shape[0]):
        _rng.seed_state(state, master, np.uint64(start + s))
        _rng.shuffle_into(a, state)
        if kind == 0:
            out[s] = _kernels.peak_count_fast(a, k)
        elif kind == 1:
            out[s] = _kernels.las_fast(a, k)
        elif kind == 2:
            out[s] = _kernels.alt_triple(a, k)[2]
        elif kind == 3:
            out[s] = _kernels.peak_count_scan(a, k, m)
        else:
            y = _kernels.peak_count_scan(a, k, m)
            out[s] = 1 if y < _kernels.peak_count_fast(a, k) else 0


def run_parallel(fill: Callable[[int, np.ndarray], None], samples: int, threads: int, dtype=np.int64) -> np.ndarray:
    """Split ``range(samples)`` into contiguous slices and fill them concurrently.

    ``fill(start, out_slice)`` must write sample ``start + i`` to ``out_slice[i]``.
    """
    out = np.empty(samples, dtype=dtype)
    threads = max(1, min(int(threads), samples))
    bounds = np.linspace(0, samples, threads + 1).astype(np.int64)
    jobs = [(int(lo), out[lo:hi]) for lo, hi in zip(bounds[:-1], bounds[1:]) if hi > lo]
    if threads == 1:
        for lo, view in jobs:
            fill(lo, view)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for fut in [pool.submit(fill, lo, view) for lo, view in jobs]:
                fut.result()
    return out


def sample_statistic(stat: "str | Selector", n: int, k: int, samples: int, master_seed: int,
                     *, m: Optional[int] = None, threads: int = 1) -> np.ndarray:
    """Per-sample values of a permutation statistic, in sample-index order."""
    sel = parse_selector(stat, m)
    if n < 1 or k < 1:
        raise ValueError("n and k must be >= 1")
    master = np.uint64(master_seed & _rng.MASK64)
    window = sel.m if sel.m is not None else 0

    def fill(start: int, view: np.ndarray) -> None:
        _sample_block(sel.code, n, k, window, master, start, view)

    return run_parallel(fill, samples, threads)


# moments


class RunningMoments:
    """Streaming mean and central moment sums up to order 4 (Welford / Pebay).

    ``push`` adds one value, ``merge`` combines two disjoint accumulators
    exactly as if their values had been pushed into one.
    """

    __slots__ = ("n", "mean", "m2", "m3", "m4")

    def __init__(self) -> None:
        self.n = 0
        self.mean = 0.0
        self.m2 = 0.0
        self.m3 = 0.0
        self.m4 = 0.0

    def push(self, x: float) -> None:
        n1 = self.n
        self.n += 1
        n = self.n
        delta = x - self.mean
        delta_n = delta / n
        delta_n2 = delta_n * delta_n
        term1 = delta * delta_n * n1
        self.mean += delta_n
        self.m4 += term1 * delta_n2 * (n * n - 3 * n + 3) + 6 * delta_n2 * self.m2 - 4 * delta_n * self.m3
        self.m3 += term1 * delta_n * (n - 2) - 3 * delta_n * self.m2
        self.m2 += term1

    @classmethod
    def from_array(cls, values: np.ndarray) -> "RunningMoments":
        acc = cls()
        if values.size == 0:
            return acc
        x = np.asarray(values, dtype=np.float64)
        acc.n = int(x.size)
        acc.mean = float(x.mean())
        d = x - acc.mean
        d2 = d * d
        acc.m2 = float(d2.sum())
        acc.m3 = float((d2 * d).sum())
        acc.m4 = float((d2 * d2).sum())
        return acc

    def merge(self, other: "RunningMoments") -> "RunningMoments":
        if other.n == 0:
            return self.copy()
        if self.n == 0:
            return other.copy()
        a, b = self, other
        out = RunningMoments()
        n = a.n + b.n
        delta = b.mean - a.mean
        d2 = delta * delta
        na, nb = a.n, b.n
        out.n = n
        out.mean = a.mean + delta * nb / n
        out.m2 = a.m2 + b.m2 + d2 * na * nb / n
        out.m3 = (a.m3 + b.m3 + d2 * delta * na * nb * (na - nb) / (n * n)
                  + 3.0 * delta * (na * b.m2 - nb * a.m2) / n)
        out.m4 = (a.m4 + b.m4 + d2 * d2 * na * nb * (na * na - na * nb + nb * nb) / (n ** 3)
                  + 6.0 * d2 * (na * na * b.m2 + nb * nb * a.m2) / (n * n)
                  + 4.0 * delta * (na * b.m3 - nb * a.m3) / n)
        return out

    __add__ = merge

    def copy(self) -> "RunningMoments":
        out = RunningMoments()
        out.n, out.mean, out.m2, out.m3, out.m4 = self.n, self.mean, self.m2, self.m3, self.m4
        return out

    @property
    def variance(self) -> float:
        return self.m2 / (self.n - 1)


def chunked_moments(values: np.ndarray, chunk: int = CHUNK) -> RunningMoments:
    acc = RunningMoments()
    for lo in range(0, values.size, chunk):
        acc = acc.merge(RunningMoments.from_array(values[lo:lo + chunk]))
    return acc


@dataclass(frozen=True)
class MomentEstimate:
    samples: int
    mean: float
    variance: float
    std_error_mean: float
    ci95_mean: tuple[float, float]
    ci95_variance: tuple[float, float]

    @classmethod
    def from_moments(cls, acc: RunningMoments) -> "MomentEstimate":
        n = acc.n
        if n < 2:
            raise TooFewSamples("need at least 2 samples")
        var = max(acc.variance, 0.0)
        se = math.sqrt(var / n)
        # large-sample variance of s^2 from the fourth central moment
        mu4 = acc.m4 / n
        var_s2 = max((mu4 - var * var * (n - 3) / (n - 1)) / n, 0.0)
        half = Z95 * math.sqrt(var_s2)
        return cls(
            samples=n,
            mean=acc.mean,
            variance=var,
            std_error_mean=se,
            ci95_mean=(acc.mean - Z95 * se, acc.mean + Z95 * se),
            ci95_variance=(max(var - half, 0.0), var + half),
        )

    @classmethod
    def from_values(cls, values: np.ndarray) -> "MomentEstimate":
        return cls.from_moments(chunked_moments(np.asarray(values)))

    def mean_within(self, target: float, sigmas: float = 5.0) -> bool:
        return abs(self.mean - target) <= sigmas * self.std_error_mean

    def variance_ci_contains(self, target: float) -> bool:
        lo, hi = self.ci95_variance
        return lo <= target <= hi

    def to_dict(self) -> dict:
        d = asdict(self)
        d["ci95_mean"] = list(self.ci95_mean)
        d["ci95_variance"] = list(self.ci95_variance)
        return d


def estimate(stat: "str | Selector", n: int, k: int, samples: int, master_seed: int,
             *, m: Optional[int] = None, threads: int = 1) -> MomentEstimate:
    """Monte Carlo mean/variance of a statistic of uniform random permutations."""
    if samples < 2:
        raise TooFewSamples("need at least 2 samples")
    values = sample_statistic(stat, n, k, samples, master_seed, m=m, threads=threads)
    return MomentEstimate.from_values(values)


# normal approximation


def normal_cdf(z):
    """Standard normal CDF (``scipy.special.ndtr``, absolute error far below 1e-10)."""
    return ndtr(z)


def kolmogorov_distance(values: np.ndarray, center: Optional[float] = None,
                        scale: Optional[float] = None) -> float:
    """``sup |F_emp - Phi|`` after standardising by ``(x - center) / scale``.

    Defaults to the sample mean and standard deviation. Ties are handled by
    comparing Phi with the empirical CDF just before and at each distinct value.
    """
    x = np.asarray(values, dtype=np.float64)
    if x.size < 2:
        raise TooFewSamples("need at least 2 values")
    if center is None:
        center = float(x.mean())
    if scale is None:
        scale = float(x.std(ddof=1))
    if not scale > 0 or not math.isfinite(scale):
        raise DegenerateScale("standardisation scale is zero; the sample is constant")
    uniq, counts = np.unique(x, return_counts=True)
    cum = np.cumsum(counts) / x.size
    before = np.concatenate(([0.0], cum[:-1]))
    phi = normal_cdf((uniq - center) / scale)
    return float(max(np.max(np.abs(cum - phi)), np.max(np.abs(before - phi))))


@dataclass(frozen=True)
class CltReport:
    stat: str
    n: int
    k: int
    m_window: int
    samples: int
    d_k_empirical: float
    standardization: dict
    tv_bound_value: Optional[float]

    def to_dict(self) -> dict:
        return asdict(self)


def formula_standardization(stat: str, n: int, k: int) -> dict:
    """Centre and scale from closed forms. For ``as`` the scale uses the
    unproven variance ``8(n-k)/45 + 19/180`` and is labelled CONJECTURE."""
    if stat == "as":
        f = as_moment_formulas(n, k)
        return {"method": "formula", "center": float(f.e_as),
                "scale": math.sqrt(float(f.var_as_conjecture)),
                "variance_source": "CONJECTURE: 8(n-k)/45 + 19/180"}
    return {"method": "formula", "center": float(e_peaks_formula(n, k)),
            "scale": math.sqrt(float(var_peaks_formula(n, k))),
            "variance_source": "(2(n-k)+4)/45"}


def empirical_kolmogorov(stat: str, n: int, k: int, samples: int, master_seed: int,
                         *, standardize: str = "sample", m_window: int = 3,
                         threads: int = 1) -> CltReport:
    """Empirical Kolmogorov distance between a standardised statistic and N(0, 1)."""
    if stat not in ("as", "peaks"):
        raise InvalidSelector(f"CLT check supports 'as' and 'peaks', got {stat!r}")
    if samples < 1000:
        raise TooFewSamples(f"need at least 1000 samples, got {samples}")
    values = sample_statistic(stat, n, k, samples, master_seed, threads=threads)
    if standardize == "sample":
        acc = chunked_moments(values)
        std = {"method": "sample", "center": acc.mean, "scale": math.sqrt(max(acc.variance, 0.0))}
    elif standardize == "formula":
        std = formula_standardization(stat, n, k)
    else:
        raise ValueError(f"standardize must be 'sample' or 'formula', got {standardize!r}")
    d_k = kolmogorov_distance(values, std["center"], std["scale"])
    bound = tv_bound(n, k, m_window) if k < n else None
    return CltReport(stat, n, k, m_window, samples, d_k, std, bound)
