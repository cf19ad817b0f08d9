"""Command-line interface: ``kpeaks <subcommand> [flags]``.

Output is JSON (default) or CSV on stdout, diagnostics on stderr. Exit status
is 0 on success, 1 on a usage error and 2 when a library operation rejects
its input. Every JSON document starts with a ``config`` block holding the
effective settings, including the seed, so it can be regenerated from its
own header. The worker count only affects speed, so it is reported on stderr
and left out of the JSON.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from typing import Callable, Optional, Sequence

import numpy as np

from . import exact, kstats, localstats, montecarlo, xalt
from ._kernels import UNLIMITED, las_dp, las_fast, peak_count_fast, peak_count_scan
from .errors import KPeaksError
from .permutation import SeedSpec, parse, read_permutations, sample_uniform

DEFAULT_SEED = 20230312


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit with status 2
        raise UsageError(message)


def _positive(name: str, minimum: int = 1) -> Callable[[str], int]:
    def conv(text: str) -> int:
        try:
            value = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} expects an integer, got {text!r}")
        if value < minimum:
            raise argparse.ArgumentTypeError(f"{name} must be >= {minimum}, got {value}")
        return value
    return conv


def _seed(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"--seed must be a 64-bit unsigned integer, got {text}")
    return value


def _unit_open(text: str) -> float:
    value = float(text)
    if not 0 < value < 1:
        raise argparse.ArgumentTypeError(f"--x must lie in (0, 1), got {text}")
    return value


def _n_list(text: str) -> list[int]:
    try:
        values = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"--n-list expects comma-separated integers, got {text!r}")
    if not values or min(values) < 1:
        raise argparse.ArgumentTypeError("--n-list needs positive integers")
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="kpeaks", description="k-peak and k-alternating subsequence statistics of permutations")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p: argparse.ArgumentParser, *, seed: bool = False, threads: bool = False) -> None:
        p.add_argument("--out", choices=("json", "csv"), default="json")
        if seed:
            p.add_argument("--seed", type=_seed, default=DEFAULT_SEED)
        if threads:
            p.add_argument("--threads", type=_positive("--threads"), default=1)

    p = sub.add_parser("stat", help="statistics of given permutations")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--perm", help="values 1..n separated by commas or spaces")
    src.add_argument("--file", help="file with one permutation per line")
    p.add_argument("--k", type=_positive("--k"), required=True)
    common(p)

    p = sub.add_parser("exact", help="exact moments by enumerating S_n")
    p.add_argument("--n", type=_positive("--n"), required=True)
    p.add_argument("--k", type=_positive("--k"), help="default: every 1 <= k < n")
    p.add_argument("--joint", action="store_true", help="include per-value and pairwise k-peak probabilities")
    common(p, threads=True)

    p = sub.add_parser("simulate", help="Monte Carlo moments")
    p.add_argument("--stat", default="peaks", help="peaks | as | zs | local_peaks | mismatch")
    p.add_argument("--n", type=_positive("--n"), required=True)
    p.add_argument("--k", type=_positive("--k"), required=True)
    p.add_argument("--m", type=_positive("--m"))
    p.add_argument("--samples", type=_positive("--samples", 2), default=100_000)
    common(p, seed=True, threads=True)

    p = sub.add_parser("clt", help="empirical Kolmogorov distance to N(0,1)")
    ns = p.add_mutually_exclusive_group(required=True)
    ns.add_argument("--n", type=_positive("--n"))
    ns.add_argument("--n-list", type=_n_list)
    p.add_argument("--k", type=_positive("--k"), required=True)
    p.add_argument("--m", type=_positive("--m"), default=3)
    p.add_argument("--stat", choices=("as", "peaks"), default="as")
    p.add_argument("--samples", type=_positive("--samples", 1000), default=100_000)
    p.add_argument("--standardize", choices=("sample", "formula"), default="sample")
    common(p, seed=True, threads=True)

    p = sub.add_parser("tv", help="total-variation truncation bound")
    p.add_argument("--n", type=_positive("--n"), required=True)
    p.add_argument("--k", type=_positive("--k"), required=True)
    p.add_argument("--m", type=_positive("--m"))
    p.add_argument("--alpha", type=float, default=2.0)
    common(p)

    p = sub.add_parser("xalt", help="x-alternating statistic vs binomial coupling")
    p.add_argument("--n", type=_positive("--n"), required=True)
    p.add_argument("--x", type=_unit_open, required=True)
    p.add_argument("--samples", type=_positive("--samples", 10_000), default=100_000)
    common(p, seed=True, threads=True)

    p = sub.add_parser("bench", help="throughput of reference vs fast algorithms")
    p.add_argument("--n", type=_positive("--n"), default=1000)
    p.add_argument("--k", type=_positive("--k"), default=2)
    p.add_argument("--samples", type=_positive("--samples"), default=200)
    common(p, seed=True)
    return parser


def _config(args: argparse.Namespace) -> dict:
    return {key: value for key, value in vars(args).items() if key not in ("threads", "out")}


def cmd_stat(args: argparse.Namespace) -> tuple[dict, list[dict]]:
    if args.perm is not None:
        perms = [parse(args.perm)]
    else:
        with open(args.file) as fh:
            perms = read_permutations(fh)
    rows = []
    for p in perms:
        lengths = kstats.alt_lengths(p, args.k)
        rows.append({
            "perm": p.format(),
            "as": lengths.as_len,
            "zs": lengths.zs_len,
            "peaks": lengths.peaks,
            "valleys": kstats.valley_count(p, args.k),
            "residual": lengths.residual,
            "peak_values": kstats.peak_profile_fast(p, args.k).peaks(),
        })
    doc = {"config": _config(args)}
    if args.perm is not None:
        doc.update(rows[0])
    else:
        doc["results"] = rows
    return doc, [{key: v for key, v in r.items() if key != "peak_values"} for r in rows]


def _exact_entry(n: int, k: int, joint: bool, threads: int) -> dict:
    moments = exact.enumerate_moments(n, k, joint=joint, threads=threads)
    entry = moments.to_dict()
    if 1 <= k < n:
        e_f = exact.e_peaks_formula(n, k)
        v_f = exact.var_peaks_formula(n, k)
        entry["formulas"] = {
            "e_peaks": exact.rational_str(e_f),
            "var_peaks": exact.rational_str(v_f),
            **exact.as_moment_formulas(n, k).to_dict(),
        }
        entry["checks"] = {
            "e_peaks_equal": moments.e_peaks == e_f,
            "var_peaks_equal": moments.var_peaks == v_f,
            "zs_minus_as": exact.rational_str(moments.e_zs - moments.e_as),
            "var_as_minus_conjecture": exact.rational_str(
                moments.var_as - exact.as_moment_formulas(n, k).var_as_conjecture),
        }
    return entry


def cmd_exact(args: argparse.Namespace) -> tuple[dict, list[dict]]:
    ks = [args.k] if args.k is not None else list(range(1, max(args.n, 2)))
    entries = [_exact_entry(args.n, k, args.joint, args.threads) for k in ks]
    doc = {"config": _config(args)}
    if args.k is not None:
        doc.update(entries[0])
    else:
        doc["results"] = entries
    rows = [{key: e[key] for key in ("n", "k", "e_peaks", "var_peaks", "e_as", "var_as", "e_zs", "var_zs")}
            for e in entries]
    return doc, rows


def _targets(stat: str, n: int, k: int, m: Optional[int]) -> dict:
    if k >= n:
        return {}
    if stat == "peaks":
        return {"mean": exact.rational_str(exact.e_peaks_formula(n, k)),
                "variance": exact.rational_str(exact.var_peaks_formula(n, k))}
    if stat in ("as", "zs"):
        f = exact.as_moment_formulas(n, k)
        if stat == "zs":
            return {"mean": exact.rational_str(f.e_zs)}
        return {"mean": exact.rational_str(f.e_as),
                "variance_conjecture": {"value": exact.rational_str(f.var_as_conjecture), "label": "CONJECTURE"}}
    if stat == "mismatch":
        return {"mean_upper_bound": localstats.tv_bound(n, k, m)}
    return {}


def cmd_simulate(args: argparse.Namespace) -> tuple[dict, list[dict]]:
    sel = montecarlo.parse_selector(args.stat, args.m)
    est = montecarlo.estimate(sel, args.n, args.k, args.samples, args.seed, threads=args.threads)
    doc = {"config": _config(args), "stat": str(sel), "estimate": est.to_dict(),
           "targets": _targets(sel.kind, args.n, args.k, sel.m)}
    row = {"stat": str(sel), "n": args.n, "k": args.k, "samples": est.samples,
           "mean": est.mean, "variance": est.variance, "std_error_mean": est.std_error_mean}
    return doc, [row]


def cmd_clt(args: argparse.Namespace) -> tuple[dict, list[dict]]:
    ns = [args.n] if args.n is not None else args.n_list
    reports = [montecarlo.empirical_kolmogorov(args.stat, n, args.k, args.samples, args.seed,
                                               standardize=args.standardize, m_window=args.m,
                                               threads=args.threads) for n in ns]
    doc = {"config": _config(args), "reports": [r.to_dict() for r in reports]}
    rows = [{"n": r.n, "k": r.k, "samples": r.samples, "d_k": r.d_k_empirical,
             "tv_bound": "" if r.tv_bound_value is None else r.tv_bound_value} for r in reports]
    return doc, rows


def cmd_tv(args: argparse.Namespace) -> tuple[dict, list[dict]]:
    doc = {"config": _config(args)}
    if args.m is not None:
        doc["bound"] = localstats.tv_bound(args.n, args.k, args.m)
    doc["alpha"] = args.alpha
    doc["chosen_window"] = localstats.choose_window(args.n, args.k, args.alpha)
    doc["target"] = args.n ** (-args.alpha)
    row = {"n": args.n, "k": args.k, "m": args.m if args.m is not None else "",
           "bound": doc.get("bound", ""), "chosen_window": doc["chosen_window"]}
    return doc, [row]


def cmd_xalt(args: argparse.Namespace) -> tuple[dict, list[dict]]:
    report = xalt.coupling_check(args.n, args.x, args.samples, args.seed, threads=args.threads)
    doc = {"config": _config(args), **report.to_dict()}
    rows = [{"value": v, "las_x": report.histogram_las_x.get(v, 0), "coupled": report.histogram_coupled.get(v, 0)}
            for v in sorted(set(report.histogram_las_x) | set(report.histogram_coupled))]
    return doc, rows


def cmd_bench(args: argparse.Namespace) -> tuple[dict, list[dict]]:
    perms = [sample_uniform(args.n, SeedSpec(args.seed, s)).image for s in range(args.samples)]
    floats = [a.astype(np.float64) for a in perms]
    # warm up the compiled kernels before timing
    peak_count_scan(perms[0], args.k, UNLIMITED), peak_count_fast(perms[0], args.k)
    las_dp(floats[0], float(args.k)), las_fast(perms[0], args.k)
    cases = {
        "peak_count_ref": lambda: [peak_count_scan(a, args.k, UNLIMITED) for a in perms],
        "peak_count_fast": lambda: [peak_count_fast(a, args.k) for a in perms],
        "las_dp": lambda: [las_dp(f, float(args.k)) for f in floats],
        "las_fast": lambda: [las_fast(a, args.k) for a in perms],
    }
    rows = []
    for name, run in cases.items():
        start = time.perf_counter()
        run()
        elapsed = time.perf_counter() - start
        rows.append({"algorithm": name, "seconds": elapsed,
                     "perms_per_second": args.samples / elapsed if elapsed > 0 else float("inf")})
    return {"config": _config(args), "timings": rows}, rows


COMMANDS = {
    "stat": cmd_stat,
    "exact": cmd_exact,
    "simulate": cmd_simulate,
    "clt": cmd_clt,
    "tv": cmd_tv,
    "xalt": cmd_xalt,
    "bench": cmd_bench,
}


def _write_csv(rows: list[dict], stream) -> None:
    if not rows:
        return
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    stream.write(buf.getvalue())


def run(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=stderr)
        return 1
    if getattr(args, "threads", None) is not None:
        print(f"threads: {args.threads}", file=stderr)
    try:
        doc, rows = COMMANDS[args.command](args)
    except KPeaksError as exc:
        print(f"{type(exc).__name__}: {exc}", file=stderr)
        return 2
    except OSError as exc:
        print(f"usage error: {exc}", file=stderr)
        return 1
    if args.out == "csv":
        _write_csv(rows, stdout)
    else:
        stdout.write(json.dumps(doc, indent=2) + "\n")
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
