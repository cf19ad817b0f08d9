import itertools

import numpy as np
import pytest

from kpeaks import Permutation


def brute_las(values, gap, down_first=True):
    """Longest alternating subsequence by trying every subsequence. Exponential."""
    n = len(values)
    best = 1
    for r in range(2, n + 1):
        for idx in itertools.combinations(range(n), r):
            down = down_first
            ok = True
            for a, b in zip(idx, idx[1:]):
                step = values[a] - values[b] if down else values[b] - values[a]
                if step < gap:
                    ok = False
                    break
                down = not down
            if ok:
                best = r
                break
    return best


def section_peaks(s, k):
    """k-peaks straight from the maximal k-ascending / k-descending section definition."""
    n = len(s)

    def ascending(i, j):
        seg = s[i:j + 1]
        if s[i] != min(seg) or s[j] != max(seg) or s[j] - s[i] < k:
            return False
        return all(seg[a] - seg[b] < k for a in range(len(seg)) for b in range(a + 1, len(seg)))

    def descending(i, j):
        seg = s[i:j + 1]
        if s[i] != max(seg) or s[j] != min(seg) or s[i] - s[j] < k:
            return False
        return all(seg[b] - seg[a] < k for a in range(len(seg)) for b in range(a + 1, len(seg)))

    peaks = set()
    for test, peak_at_end in ((ascending, True), (descending, False)):
        secs = [(i, j) for i in range(n) for j in range(i + 1, n) if test(i, j)]
        for i, j in secs:
            if not any(a <= i and j <= b and (a, b) != (i, j) for a, b in secs):
                peaks.add(s[j] if peak_at_end else s[i])
    return peaks


def all_perms(n):
    for t in itertools.permutations(range(1, n + 1)):
        yield Permutation(t, check=False)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(12345)


# acceptance lines, printed together at the end of the session

_ACCEPTANCE = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[_ACCEPTANCE] = {}


@pytest.fixture
def acceptance(request):
    """Record ``(criterion, passed, detail, extra_lines)`` for the summary."""
    store = request.config.stash[_ACCEPTANCE]

    def record(criterion, passed, detail, extra_lines=()):
        store[criterion] = (passed, detail, list(extra_lines))

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    store = config.stash.get(_ACCEPTANCE, {})
    if not store:
        return
    terminalreporter.section("acceptance criteria")
    for criterion in sorted(store):
        passed, detail, extra = store[criterion]
        terminalreporter.write_line(f"criterion {criterion:2d}: {'PASS' if passed else 'FAIL'}  {detail}")
        for line in extra:
            terminalreporter.write_line(f"    {line}")
