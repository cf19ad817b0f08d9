"""Acceptance criteria, one test per criterion (two where a criterion has a part
that is known to fail). Each records a pass/fail line that is printed in the
``acceptance criteria`` section at the end of the run.

Criteria 2, 3 and the variance half of 10 assert closed forms that disagree
with exhaustive enumeration for k >= 2. Those tests run the full check and are
marked as strict expected failures, so they turn red if the disagreement ever
goes away. See the README for the counterexamples.
"""

import io
import itertools
import math
import time
from fractions import Fraction
from functools import lru_cache

import numpy as np
import pytest

from kpeaks import _kernels
from kpeaks.cli import run
from kpeaks.exact import (
    conjecture_report,
    e_peaks_formula,
    enumerate_moments,
    joint_peak_prob_formula,
    joint_peak_prob_oracle,
    joint_peak_sum_formula,
    rational_str,
    var_peaks_formula,
)
from kpeaks.localstats import tv_bound
from kpeaks.montecarlo import empirical_kolmogorov, estimate
from kpeaks.permutation import SeedSpec, sample_uniform
from kpeaks.xalt import coupling_check

SEED = 2024
KNOWN_RED = "closed form disagrees with exhaustive enumeration for k >= 2"


@lru_cache(maxsize=None)
def moments(n, k):
    return enumerate_moments(n, k)


@lru_cache(maxsize=None)
def symmetric_group(n):
    return np.array(list(itertools.permutations(range(1, n + 1))), dtype=np.int64)


def pairs(n_max, min_gap=1):
    return [(n, k) for n in range(2, n_max + 1) for k in range(1, n) if n - k >= min_gap]


# 1


def test_criterion_01_exact_mean_of_peaks(acceptance):
    start = time.perf_counter()
    bad = [(n, k) for n, k in pairs(8) if moments(n, k).e_peaks != e_peaks_formula(n, k)]
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 120
    acceptance(1, ok, f"E[P] = (n-k+2)/3 on {len(pairs(8))} pairs, mismatches {bad}, {elapsed:.1f}s (limit 120s)")
    assert ok


# 2


def var_rows():
    return [(n, k, moments(n, k).var_peaks, var_peaks_formula(n, k)) for n, k in pairs(8)]


def test_criterion_02_small_gap_validity_region():
    # n - k <= 3: equality exactly on the documented region k = 1, n >= 4
    for n, k, oracle, formula in var_rows():
        if n - k <= 3:
            assert (oracle == formula) == (k == 1 and n >= 4), (n, k)


@pytest.mark.xfail(strict=True, reason=KNOWN_RED)
def test_criterion_02_exact_variance_of_peaks(acceptance):
    rows = var_rows()
    big = [(n, k) for n, k, o, f in rows if n - k >= 4 and o != f]
    small_ok = all((o == f) == (k == 1 and n >= 4) for n, k, o, f in rows if n - k <= 3)
    table = [f"n={n} k={k} oracle={rational_str(o)} formula={rational_str(f)} {'equal' if o == f else 'DIFFER'}"
             for n, k, o, f in rows]
    ok = not big and small_ok
    acceptance(2, ok, f"Var(P) = (2(n-k)+4)/45 for n-k >= 4 fails at {big}; "
                      f"n-k <= 3 region check {'ok' if small_ok else 'broken'}", table)
    assert ok


# 3


@pytest.mark.xfail(strict=True, reason=KNOWN_RED)
def test_criterion_03_joint_probability(acceptance):
    cases = bad_pairs = 0
    bad_sums = []
    first = None
    for n, k in pairs(8, min_gap=3):
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                cases += 1
                o, f = joint_peak_prob_oracle(n, k, i, j), joint_peak_prob_formula(n, k, i, j)
                if o != f:
                    bad_pairs += 1
                    first = first or (n, k, i, j, rational_str(o), rational_str(f))
        total = sum(joint_peak_prob_oracle(n, k, i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1))
        if total != joint_peak_sum_formula(n, k):
            bad_sums.append((n, k))
    ok = bad_pairs == 0 and not bad_sums
    acceptance(3, ok, f"{bad_pairs}/{cases} pair probabilities differ (first {first}); "
                      f"pair sum differs at {bad_sums}")
    assert ok


# 4


def test_criterion_04_alternation_means(acceptance):
    bad = []
    for n, k in pairs(8):
        m = moments(n, k)
        if m.e_as != Fraction(4 * (n - k) + 5, 6) or m.e_zs - m.e_as != Fraction(1, 2):
            bad.append((n, k))
    acceptance(4, not bad, f"E[as] = (4(n-k)+5)/6 and E[zs]-E[as] = 1/2 on n <= 8, mismatches {bad}")
    assert not bad


# 5


def test_criterion_05_variance_of_as_k1(acceptance):
    bad = [n for n in range(4, 9) if moments(n, 1).var_as != Fraction(8 * n, 45) - Fraction(13, 180)]
    acceptance(5, not bad, f"Var(as_n1) = 8n/45 - 13/180 for 4 <= n <= 8, mismatches {bad}")
    assert not bad


# 6


def test_criterion_06_conjecture_report(acceptance):
    rows = conjecture_report(10)
    lines = [f"n={r['n']} k={r['k']} Var(as)={rational_str(r['var_as'])} "
             f"minus conjecture={rational_str(r['difference'])}" for r in rows]
    present = len(rows) == len(pairs(10))
    acceptance(6, present, f"report of Var(as) - (8(n-k)/45 + 19/180) for n <= 10, {len(rows)} rows "
                           f"(zero difference on {sum(r['difference'] == 0 for r in rows)})", lines)
    assert present


# 7


def test_criterion_07_algorithm_equivalence(acceptance):
    start = time.perf_counter()
    bad = []
    for n in range(1, 9):
        for a in symmetric_group(n):
            f = a.astype(np.float64)
            for k in range(1, n + 1):
                if _kernels.las_fast(a, k) != _kernels.las_dp(f, float(k)):
                    bad.append(("las", a.tolist(), k))
                if _kernels.peak_count_fast(a, k) != _kernels.peak_count_scan(a, k, _kernels.UNLIMITED):
                    bad.append(("peaks", a.tolist(), k))
    random_cases = 0
    for n in (50, 200, 1000):
        for k in (1, n // 10, n // 2):
            for s in range(1000):
                a = sample_uniform(n, SeedSpec(SEED, s)).image
                random_cases += 1
                if _kernels.las_fast(a, k) != _kernels.las_dp(a.astype(np.float64), float(k)):
                    bad.append(("las", n, k, s))
                if _kernels.peak_count_fast(a, k) != _kernels.peak_count_scan(a, k, _kernels.UNLIMITED):
                    bad.append(("peaks", n, k, s))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 300
    acceptance(7, ok, f"fast = reference on S_n (n <= 8, all k) and {random_cases} random instances, "
                      f"{len(bad)} mismatches, {elapsed:.1f}s (limit 300s)")
    assert ok


# 8


def test_criterion_08_structural_invariants(acceptance):
    violations = []
    checked = 0

    def check(a, k):
        nonlocal checked
        peaks, as_len, zs_len = _kernels.alt_triple(a, k)
        checked += 1
        if abs(as_len - 2 * peaks) > 1 or zs_len - as_len not in (0, 1):
            violations.append((a.tolist(), k))

    for n in range(1, 9):
        for a in symmetric_group(n):
            for k in range(1, n + 1):
                check(a, k)
    for n in (50, 200, 1000):
        for k in (1, n // 10, n // 2):
            for s in range(200):
                check(sample_uniform(n, SeedSpec(SEED, s)).image, k)
    half = [(n, k) for n, k in pairs(7) if moments(n, k).zs_equals_as * 2 != math.factorial(n)]
    ok = not violations and not half
    acceptance(8, ok, f"|as-2P| <= 1 and zs-as in {{0,1}} on {checked} instances ({len(violations)} violations); "
                      f"zs = as on n!/2 permutations fails at {half}")
    assert ok


# 9


def test_criterion_09_tv_bound(acceptance):
    worst = None
    bad = []
    for n in range(2, 9):
        perms = symmetric_group(n)
        for k in range(1, n):
            full = np.array([_kernels.peak_count_fast(a, k) for a in perms])
            for m in range(1, n + 1):
                bound = tv_bound(n, k, m)
                if bound >= 1:
                    continue
                local = np.array([_kernels.peak_count_scan(a, k, m) for a in perms])
                prob = Fraction(int(np.sum(local < full)), len(perms))
                if prob > bound:
                    bad.append((n, k, m, rational_str(prob), bound))
                if worst is None or prob / Fraction(bound) > worst[0]:
                    worst = (prob / Fraction(bound), n, k, m)
    n, k, m, samples = 200, 2, 3, 1_000_000
    est = estimate(f"mismatch({m})", n, k, samples, SEED)
    bound = tv_bound(n, k, m)
    # with zero observed mismatches the sample SE is 0, so fall back to the SE at the bound
    se = max(est.std_error_mean, math.sqrt(bound * (1 - bound) / samples))
    mc_ok = est.mean <= bound + 5 * se
    ok = not bad and mc_ok
    acceptance(9, ok, f"exact P(Y<P) <= 3n(k/n)^m for n <= 8 (violations {bad}, largest ratio "
                      f"{float(worst[0]):.3g}); MC rate {est.mean:.2e} vs {bound:.1e} + 5*{se:.1e}")
    assert ok


# 10


@lru_cache(maxsize=None)
def criterion_10_estimates():
    n, k, samples = 1000, 5, 100_000
    return (estimate("peaks", n, k, samples, SEED), estimate("as", n, k, samples, SEED))


def test_criterion_10_means():
    peaks, alt = criterion_10_estimates()
    assert peaks.mean_within(997 / 3, 5.0)
    assert alt.mean_within((4 * 995 + 5) / 6, 5.0)


@pytest.mark.xfail(strict=True, reason=KNOWN_RED)
def test_criterion_10_monte_carlo_moments(acceptance):
    peaks, alt = criterion_10_estimates()
    mean_p = peaks.mean_within(997 / 3, 5.0)
    var_p = peaks.variance_ci_contains(1994 / 45)
    mean_as = alt.mean_within((4 * 995 + 5) / 6, 5.0)
    lo, hi = peaks.ci95_variance
    ok = mean_p and var_p and mean_as
    acceptance(10, ok, f"mean P {peaks.mean:.3f} vs {997 / 3:.3f} ({'ok' if mean_p else 'off'}); "
                       f"var P {peaks.variance:.3f} CI ({lo:.3f}, {hi:.3f}) vs {1994 / 45:.3f} "
                       f"({'inside' if var_p else 'outside'}); mean as {alt.mean:.3f} vs "
                       f"{(4 * 995 + 5) / 6:.3f} ({'ok' if mean_as else 'off'})")
    assert ok


# 11


def test_criterion_11_clt(acceptance):
    start = time.perf_counter()
    d = {n: empirical_kolmogorov("as", n, 2, 100_000, SEED).d_k_empirical for n in (100, 1000, 10_000)}
    elapsed = time.perf_counter() - start
    ok = d[10_000] < 0.05 and d[10_000] < d[100] and elapsed < 600
    acceptance(11, ok, "d_K of standardized as_{n,2}: " + ", ".join(f"n={n}: {v:.4f}" for n, v in d.items())
               + f"; {elapsed:.1f}s (limit 600s)")
    assert ok


# 12


def test_criterion_12_xalt_coupling(acceptance):
    r = coupling_check(100, 0.25, 100_000, SEED)
    mean_ok = r.las_x.mean_within(301 / 6, 5.0)
    var_ok = r.las_x.variance_ci_contains(65 / 3)
    tv_ok = r.tv_distance < 0.02
    ok = mean_ok and var_ok and tv_ok
    lo, hi = r.las_x.ci95_variance
    acceptance(12, ok, f"las_x mean {r.las_x.mean:.4f} vs {301 / 6:.4f}; var {r.las_x.variance:.3f} "
                       f"CI ({lo:.3f}, {hi:.3f}) vs {65 / 3:.3f}; TV {r.tv_distance:.4f} (< 0.02)")
    assert ok


# 13


def test_criterion_13_reproducibility(acceptance):
    commands = [
        ["simulate", "--stat", "peaks", "--n", "500", "--k", "3", "--samples", "50000", "--seed", "99"],
        ["simulate", "--stat", "zs", "--n", "200", "--k", "2", "--samples", "50000"],
        ["simulate", "--stat", "local_peaks", "--m", "3", "--n", "300", "--k", "2", "--samples", "30000"],
        ["clt", "--n-list", "100,1000", "--k", "2", "--samples", "20000", "--seed", "5"],
        ["clt", "--n", "500", "--k", "3", "--samples", "20000", "--standardize", "formula"],
    ]
    differing = []
    for argv in commands:
        outputs = set()
        for threads in ("1", "4", "16"):
            out = io.StringIO()
            assert run(argv + ["--threads", threads], stdout=out, stderr=io.StringIO()) == 0
            outputs.add(out.getvalue())
            # a repeat with identical flags must also match
            again = io.StringIO()
            run(argv + ["--threads", threads], stdout=again, stderr=io.StringIO())
            outputs.add(again.getvalue())
        if len(outputs) != 1:
            differing.append(" ".join(argv))
    acceptance(13, not differing, f"{len(commands)} simulate/clt invocations byte-identical across repeats "
                                  f"and --threads 1, 4, 16; differing {differing}")
    assert not differing
