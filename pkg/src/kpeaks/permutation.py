"""Permutations in one-line notation.

Values are 1-based: a permutation of size ``n`` holds each of ``1..n`` exactly
once, and position ``p`` (0-based in Python indexing) holds the value
``sigma(p + 1)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from . import _rng
from .errors import EmptyInput, NotABijection

_SPLIT = re.compile(r"[,\s]+")


@dataclass(frozen=True)
class SeedSpec:
    """Identifies one random stream: ``(master_seed, stream_index)``, both 64-bit."""

    master_seed: int
    stream_index: int = 0

    def __post_init__(self) -> None:
        for name in ("master_seed", "stream_index"):
            v = getattr(self, name)
            if not 0 <= v <= _rng.MASK64:
                raise ValueError(f"{name} must be a 64-bit unsigned integer, got {v}")


class Permutation:
    """Immutable permutation of ``1..n``.

    The image is stored as a read-only ``int64`` array, so instances can be
    shared freely between threads.
    """

    __slots__ = ("_image",)

    def __init__(self, image: Iterable[int], *, check: bool = True) -> None:
        arr = np.array(list(image) if not isinstance(image, np.ndarray) else image, dtype=np.int64)
        if arr.ndim != 1:
            raise NotABijection("permutation image must be one-dimensional")
        if arr.size == 0:
            raise EmptyInput("a permutation needs at least one value")
        if check:
            _check_bijection(arr)
        arr.setflags(write=False)
        self._image = arr

    @property
    def image(self) -> np.ndarray:
        return self._image

    @property
    def n(self) -> int:
        return int(self._image.shape[0])

    def __len__(self) -> int:
        return self.n

    def __iter__(self) -> Iterator[int]:
        return (int(v) for v in self._image)

    def __getitem__(self, pos: int) -> int:
        return int(self._image[pos])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Permutation):
            return NotImplemented
        return np.array_equal(self._image, other._image)

    def __hash__(self) -> int:
        return hash(self._image.tobytes())

    def __repr__(self) -> str:
        return f"Permutation({self.tolist()})"

    def tolist(self) -> list[int]:
        return self._image.tolist()

    def format(self, sep: str = ",") -> str:
        return sep.join(str(v) for v in self.tolist())

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(np.arange(1, n + 1), check=False)


def _check_bijection(arr: np.ndarray) -> None:
    n = arr.shape[0]
    if arr.min() < 1 or arr.max() > n:
        bad = arr[(arr < 1) | (arr > n)][0]
        raise NotABijection(f"value {bad} is outside 1..{n}")
    counts = np.bincount(arr, minlength=n + 1)
    if np.any(counts[1:] != 1):
        dup = int(np.flatnonzero(counts > 1)[0])
        raise NotABijection(f"value {dup} appears {counts[dup]} times")


def parse(text: str) -> Permutation:
    """Parse a comma- or whitespace-separated list of 1-based values.

    >>> parse("3,1,2")
    Permutation([3, 1, 2])
    """
    tokens = [t for t in _SPLIT.split(text.strip()) if t]
    if not tokens:
        raise EmptyInput("no values to parse")
    try:
        values = [int(t) for t in tokens]
    except ValueError as exc:
        raise NotABijection(f"non-integer token in {text!r}") from exc
    return Permutation(values)


def read_permutations(lines: Iterable[str]) -> list[Permutation]:
    """One permutation per non-blank line; ``#`` starts a comment."""
    perms = []
    for line in lines:
        line = line.split("#", 1)[0].strip()
        if line:
            perms.append(parse(line))
    return perms


def sample_uniform(n: int, seed: SeedSpec) -> Permutation:
    """Uniform random permutation of ``1..n`` drawn from the stream ``seed``.

    Fisher-Yates driven by xoshiro256++; the same ``(n, seed)`` always gives
    the same permutation.
    """
    if n < 1:
        raise ValueError("n must be positive")
    out = np.empty(n, dtype=np.int64)
    _rng.shuffle_into(out, _rng.new_state(seed.master_seed, seed.stream_index))
    return Permutation(out, check=False)


def flip(p: Permutation) -> Permutation:
    """Vertical flip: every value ``v`` becomes ``n + 1 - v``. Swaps peaks and valleys."""
    return Permutation(p.n + 1 - p.image, check=False)


def inverse(p: Permutation) -> Permutation:
    """``inverse(p)[v - 1]`` is the 1-based position of value ``v`` in ``p``."""
    inv = np.empty(p.n, dtype=np.int64)
    inv[p.image - 1] = np.arange(1, p.n + 1)
    return Permutation(inv, check=False)
