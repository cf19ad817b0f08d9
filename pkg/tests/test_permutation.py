import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kpeaks import EmptyInput, NotABijection, Permutation, SeedSpec, flip, inverse, parse, sample_uniform
from kpeaks.permutation import read_permutations

from conftest import all_perms


@pytest.mark.parametrize("text, expected", [("3,1,2", [3, 1, 2]), ("1", [1]), ("4 2  1\t3", [4, 2, 1, 3]),
                                            (" 2, 1 ", [2, 1])])
def test_parse(text, expected):
    assert parse(text).tolist() == expected


@pytest.mark.parametrize("text", ["2,2,1", "0,1", "1,3", "1,2,x"])
def test_parse_rejects_non_bijections(text):
    with pytest.raises(NotABijection):
        parse(text)


@pytest.mark.parametrize("text", ["", "  ", ","])
def test_parse_empty(text):
    with pytest.raises(EmptyInput):
        parse(text)


def test_read_permutations_skips_blanks_and_comments():
    lines = ["3,1,2\n", "\n", "# comment\n", "1 2  # trailing\n"]
    assert [p.tolist() for p in read_permutations(lines)] == [[3, 1, 2], [1, 2]]


def test_permutation_is_immutable():
    p = parse("2,1,3")
    with pytest.raises(ValueError):
        p.image[0] = 5


@pytest.mark.parametrize("image, expected", [([3, 1, 2], [1, 3, 2]), ([1], [1]), ([1, 2, 3, 4], [4, 3, 2, 1])])
def test_flip(image, expected):
    assert flip(Permutation(image)).tolist() == expected


@pytest.mark.parametrize("image, expected", [([3, 1, 2], [2, 3, 1]), ([1, 2, 3, 4, 5], [1, 2, 3, 4, 5]),
                                             ([2, 1], [2, 1])])
def test_inverse(image, expected):
    assert inverse(Permutation(image)).tolist() == expected


@pytest.mark.parametrize("n", range(1, 7))
def test_involutions_exhaustive(n):
    for p in all_perms(n):
        assert flip(flip(p)) == p
        assert inverse(inverse(p)) == p
        inv = inverse(p)
        for pos, v in enumerate(p, start=1):
            assert inv[v - 1] == pos


@settings(max_examples=30, deadline=None)
@given(n=st.integers(1, 100_000), seed=st.integers(0, 2**64 - 1))
def test_sampled_permutations_are_valid(n, seed):
    p = sample_uniform(n, SeedSpec(seed, 7))
    assert np.array_equal(np.sort(p.image), np.arange(1, n + 1))
    assert flip(flip(p)) == p
    assert inverse(inverse(p)) == p


def test_sample_n1():
    assert sample_uniform(1, SeedSpec(99, 3)).tolist() == [1]


def test_sample_deterministic():
    s = SeedSpec(2024, 5)
    assert sample_uniform(5, s) == sample_uniform(5, s)
    assert sample_uniform(1000, s) == sample_uniform(1000, SeedSpec(2024, 5))
    assert sample_uniform(1000, s) != sample_uniform(1000, SeedSpec(2024, 6))


def test_seedspec_range():
    with pytest.raises(ValueError):
        SeedSpec(-1)
    with pytest.raises(ValueError):
        SeedSpec(0, 2**64)


def test_sample_uniform_law_n4():
    # 240k streams; each of the 24 permutations has expected count 10^4
    samples = 240_000
    index = {t: i for i, t in enumerate(itertools.permutations(range(1, 5)))}
    counts = np.zeros(24, dtype=np.int64)
    for s in range(samples):
        counts[index[tuple(sample_uniform(4, SeedSpec(777, s)))]] += 1
    p = 1 / 24
    sigma = math.sqrt(samples * p * (1 - p))
    assert np.all(np.abs(counts - samples * p) <= 5 * sigma)
    chi2 = float(((counts - samples * p) ** 2 / (samples * p)).sum())
    from scipy.stats import chi2 as chi2_dist
    assert chi2_dist.sf(chi2, 23) > 1e-4
