"""Continuous x-alternating statistic on vectors in [0, 1]^n, and its binomial coupling.

``las_x(v, x)`` is the length of the longest subsequence of ``v`` that
alternates down-first with every step at least ``x``. For a uniform random
vector it should have the same law as ``as_{Z,1}``, the ordinary longest
alternating subsequence of a uniform permutation of random size
``Z ~ Binomial(n, 1 - x)``. :func:`coupling_check` samples both sides.

The gap-only reading of an x-alternating subsequence (no sign condition) is
not what is computed here. Alternation is required, which the coupling with
an alternating statistic needs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from numba import njit

from . import _kernels, _rng
from .errors import EmptySequence, TooFewSamples
from .montecarlo import MomentEstimate, run_parallel
from .permutation import SeedSpec

# master seed of the binomial side is master_seed ^ COUPLING_SALT
COUPLING_SALT = 0xC0FFEE_5EED_0001


@dataclass(frozen=True)
class UnitVector:
    values: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.values, dtype=np.float64)
        if arr.ndim != 1 or arr.size == 0:
            raise EmptySequence("need a non-empty 1-D vector")
        if np.any((arr < 0) | (arr > 1)):
            raise ValueError("entries must lie in [0, 1]")
        if np.unique(arr).size != arr.size:
            raise ValueError("entries must be distinct")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @property
    def n(self) -> int:
        return int(self.values.size)


def sample_unit_vector(n: int, seed: SeedSpec) -> UnitVector:
    if n < 1:
        raise ValueError("n must be positive")
    out = np.empty(n, dtype=np.float64)
    _rng.unit_vector_into(out, _rng.new_state(seed.master_seed, seed.stream_index))
    return UnitVector(out)


def las_x(v: "UnitVector | np.ndarray", x: float) -> int:
    values = v.values if isinstance(v, UnitVector) else np.asarray(v, dtype=np.float64)
    if values.size == 0:
        raise EmptySequence("need a non-empty vector")
    return int(_kernels.las_dp(values, float(x)))


@njit(cache=True, nogil=True)
def _las_x_block(n, x, master, start, out):
    vec = np.empty(n, dtype=np.float64)
    state = np.empty(4, dtype=np.uint64)
    for s in range(out.shape[0]):
        _rng.seed_state(state, master, np.uint64(start + s))
        _rng.unit_vector_into(vec, state)
        out[s] = _kernels.las_greedy(vec, x)


@njit(cache=True, nogil=True)
def _coupled_block(n, x, master, start, out):
    a = np.empty(n, dtype=np.int64)
    state = np.empty(4, dtype=np.uint64)
    keep = 1.0 - x
    for s in range(out.shape[0]):
        _rng.seed_state(state, master, np.uint64(start + s))
        z = 0
        for _ in range(n):
            if _rng.unit_float(state) < keep:
                z += 1
        if z == 0:
            out[s] = 0
            continue
        head = a[:z]
        _rng.shuffle_into(head, state)
        out[s] = _kernels.las_fast(head, 1)


def sample_las_x(n: int, x: float, samples: int, master_seed: int, *, threads: int = 1) -> np.ndarray:
    master = np.uint64(master_seed & _rng.MASK64)
    return run_parallel(lambda lo, view: _las_x_block(n, float(x), master, lo, view), samples, threads)


def sample_coupled(n: int, x: float, samples: int, master_seed: int, *, threads: int = 1) -> np.ndarray:
    """Samples of ``as_{Z,1}`` with ``Z ~ Binomial(n, 1-x)``; ``Z = 0`` gives 0."""
    master = np.uint64((master_seed ^ COUPLING_SALT) & _rng.MASK64)
    return run_parallel(lambda lo, view: _coupled_block(n, float(x), master, lo, view), samples, threads)


def mean_formula(n: int, x: float) -> float:
    return 2.0 / 3.0 * n * (1 - x) + 1.0 / 6.0


def variance_formula(n: int, x: float) -> float:
    return (1 - x) * (2 + 5 * x) * 4 * n / 45


def histogram(values: np.ndarray) -> dict[int, int]:
    uniq, counts = np.unique(values, return_counts=True)
    return {int(u): int(c) for u, c in zip(uniq, counts)}


def tv_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Half the L1 distance between the empirical laws of two integer samples."""
    hi = int(max(a.max(), b.max())) + 1
    pa = np.bincount(a, minlength=hi) / a.size
    pb = np.bincount(b, minlength=hi) / b.size
    return float(0.5 * np.abs(pa - pb).sum())


@dataclass(frozen=True)
class CouplingReport:
    n: int
    x: float
    samples: int
    las_x: MomentEstimate
    coupled: MomentEstimate
    target_mean: float
    target_variance: float
    tv_distance: float
    histogram_las_x: dict[int, int]
    histogram_coupled: dict[int, int]

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "x": self.x,
            "samples": self.samples,
            "target_mean": self.target_mean,
            "target_variance": self.target_variance,
            "las_x": self.las_x.to_dict(),
            "coupled": self.coupled.to_dict(),
            "tv_distance": self.tv_distance,
            "histogram_las_x": {str(k): v for k, v in self.histogram_las_x.items()},
            "histogram_coupled": {str(k): v for k, v in self.histogram_coupled.items()},
        }


def coupling_check(n: int, x: float, samples: int, master_seed: int, *,
                   threads: int = 1, min_samples: Optional[int] = 10_000) -> CouplingReport:
    """Sample ``las_x`` on uniform vectors and ``as_{Z,1}``, and compare them."""
    if min_samples is not None and samples < min_samples:
        raise TooFewSamples(f"need at least {min_samples} samples, got {samples}")
    if not 0 < x < 1:
        raise ValueError("x must lie in (0, 1)")
    lx = sample_las_x(n, x, samples, master_seed, threads=threads)
    cz = sample_coupled(n, x, samples, master_seed, threads=threads)
    return CouplingReport(
        n=n,
        x=float(x),
        samples=samples,
        las_x=MomentEstimate.from_values(lx),
        coupled=MomentEstimate.from_values(cz),
        target_mean=mean_formula(n, x),
        target_variance=variance_formula(n, x),
        tv_distance=tv_distance(lx, cz),
        histogram_las_x=histogram(lx),
        histogram_coupled=histogram(cz),
    )
