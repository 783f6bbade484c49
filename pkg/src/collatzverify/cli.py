"""Command-line surface: seeded experiments, single verifications, sieve runs.

Exit codes: 0 success, 1 usage error, 2 budget/verification anomaly,
3 resource guard tripped.

Reproducibility contract: for a fixed (command, flags, seed) the JSON
output is identical modulo timing fields, regardless of --threads.
Each sample index gets its own RNG seeded by a splitmix64-style
expansion of (seed, index), so the work can be partitioned arbitrarily.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import random
import sys
from dataclasses import asdict, dataclass
from typing import List, Optional, Tuple

from .affine import (
    DEFAULT_CACHE_DEPTH,
    MAX_CACHE_DEPTH,
    BaseTable,
    affine_compose,
    affine_eval,
    poly_direct,
    poly_fast,
)
from .sieve import (
    K_MAX_DEFAULT,
    SieveResourceError,
    brute_force_residues,
    iter_levels,
)
from .stats import SampleSet, summary_stats
from .trajectory import (
    BudgetExceededError,
    default_budget,
    exact_stopping_time,
    hyperstep_verify,
)
from .util import format_decimal, parse_decimal

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_ANOMALY = 2
EXIT_RESOURCE = 3

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


@dataclass
class RunConfig:
    command: str
    digits: int = 10_000
    count: int = 1
    seed: int = 0
    k_max: int = 10
    cache_depth: int = DEFAULT_CACHE_DEPTH
    budget_mult: float = 1.0
    fmt: str = "text"
    out: Optional[str] = None
    threads: int = 1
    emit_classes: Optional[str] = None
    value: Optional[str] = None
    value_file: Optional[str] = None


def derive_seed(seed: int, index: int) -> int:
    """Per-sample seed: the index-th output of a splitmix64 stream."""
    x = (seed + (index + 1) * _GOLDEN) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def random_with_digits(digits: int, rng: random.Random) -> int:
    """Uniform draw over [10^(digits-1), 10^digits): exactly `digits` places."""
    if digits < 1:
        raise ValueError("digits must be >= 1")
    lo = 10 ** (digits - 1)
    return rng.randrange(lo, 10 * lo)


def _verify_sample(args: Tuple[int, int, int, float, int]) -> dict:
    """Worker for one sample index; top-level so process pools can pickle it."""
    index, seed, digits, budget_mult, cache_depth = args
    sample_seed = derive_seed(seed, index)
    n = random_with_digits(digits, random.Random(sample_seed))
    table = _worker_table(cache_depth)
    budget = math.ceil(budget_mult * default_budget(n))
    base = {"index": index, "seed": sample_seed, "digits": digits}
    try:
        rec = hyperstep_verify(n, budget=budget, table=table)
    except BudgetExceededError as exc:
        return {
            **base,
            "reached_one": False,
            "error": "budget_exceeded",
            "condensed_steps": exc.condensed_steps,
        }
    return {
        **base,
        "condensed_steps": rec.condensed_steps,
        "hypersteps": rec.hypersteps,
        "reached_one": rec.reached_one,
        "elapsed": rec.elapsed,
    }


_worker_cache: dict = {}


def _worker_table(depth: int) -> BaseTable:
    table = _worker_cache.get(depth)
    if table is None:
        table = _worker_cache[depth] = BaseTable(depth)
    return table


def _run_samples(cfg: RunConfig) -> List[dict]:
    jobs = [
        (i, cfg.seed, cfg.digits, cfg.budget_mult, cfg.cache_depth)
        for i in range(cfg.count)
    ]
    if cfg.threads <= 1:
        return [_verify_sample(job) for job in jobs]
    from concurrent.futures import ProcessPoolExecutor

    with ProcessPoolExecutor(max_workers=cfg.threads) as pool:
        results = list(pool.map(_verify_sample, jobs, chunksize=4))
    return sorted(results, key=lambda r: r["index"])


def run_verify(cfg: RunConfig) -> Tuple[dict, int]:
    """Generate, verify, and summarize cfg.count numbers at cfg.digits."""
    records = _run_samples(cfg)
    failures = [r for r in records if not r.get("reached_one")]
    counts = [r["condensed_steps"] for r in records if r.get("reached_one")]
    summary = None
    if len(counts) >= 2:
        summary = asdict(
            summary_stats(SampleSet(cfg.digits, cfg.seed, counts))
        )
    payload = {
        "config": _config_echo(cfg),
        "samples": records,
        "summary": summary,
        "failures": [
            {"index": r["index"], "seed": r["seed"]} for r in failures
        ],
    }
    return payload, (EXIT_ANOMALY if failures else EXIT_OK)


def run_stats(cfg: RunConfig) -> Tuple[dict, int]:
    """Same pipeline as verify but reporting only the aggregate summary."""
    payload, code = run_verify(cfg)
    payload.pop("samples")
    return payload, code


def run_verify_number(cfg: RunConfig) -> Tuple[dict, int]:
    """Verify one explicitly given value (inline or from a file)."""
    if cfg.value is not None:
        text = cfg.value
    elif cfg.value_file is not None:
        with open(cfg.value_file, "r", encoding="ascii") as fh:
            text = fh.read()
    else:
        raise UsageError("verify-number needs --value or --value-file")
    try:
        n = parse_decimal(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    table = _worker_table(cfg.cache_depth)
    budget = math.ceil(cfg.budget_mult * default_budget(n))
    try:
        rec = hyperstep_verify(n, budget=budget, table=table)
    except BudgetExceededError as exc:
        payload = {
            "config": _config_echo(cfg),
            "record": {
                "reached_one": False,
                "error": "budget_exceeded",
                "condensed_steps": exc.condensed_steps,
            },
        }
        return payload, EXIT_ANOMALY
    payload = {"config": _config_echo(cfg), "record": asdict(rec)}
    return payload, EXIT_OK


def run_sieve(cfg: RunConfig) -> Tuple[dict, int]:
    """Survivor counts for levels 1..k_max, optionally emitting class lists."""
    if not 1 <= cfg.k_max <= K_MAX_DEFAULT:
        raise UsageError(f"--k-max must be in [1, {K_MAX_DEFAULT}]")
    emit_dir = cfg.emit_classes
    if emit_dir is not None:
        os.makedirs(emit_dir, exist_ok=True)
    rows = []
    try:
        for level in iter_levels(cfg.k_max):
            rows.append({"k": level.k, "count": len(level.survivors)})
            if emit_dir is not None:
                path = os.path.join(emit_dir, f"survivors_k{level.k}.txt")
                with open(path, "w", encoding="ascii") as fh:
                    for s in level.survivors:
                        fh.write(f"{s.residue}\n")
    except SieveResourceError as exc:
        return {"config": _config_echo(cfg), "error": str(exc)}, EXIT_RESOURCE
    return {"config": _config_echo(cfg), "counts": rows}, EXIT_OK


def selfcheck_report(table: Optional[BaseTable] = None) -> List[Tuple[str, bool]]:
    """Small-scale consistency suites; accepts an injected (possibly
    corrupted) base table so the harness itself is testable."""
    results: List[Tuple[str, bool]] = []

    def check(name: str, fn) -> None:
        try:
            ok = bool(fn())
        except Exception:
            ok = False
        results.append((name, ok))

    def fast_vs_direct():
        for k in range(13):
            for r in range(1 << k):
                if poly_fast(r, k, table) != poly_direct(r, k):
                    return False
        return True

    def eval_oracle():
        rng = random.Random(7)
        for _ in range(300):
            k = rng.randrange(1, 40)
            x = rng.randrange(1, 1 << 40)
            p = poly_fast(x, k, table)
            y = affine_eval(p, x)
            expect = x
            for _ in range(k):
                expect = (3 * expect + 1) >> 1 if expect & 1 else expect >> 1
            if y != expect:
                return False
        return True

    def composition_law():
        for k in range(1, 5):
            for l in range(1, 5):
                for r in range(1 << (k + l)):
                    p_low = poly_direct(r & ((1 << l) - 1), l)
                    image = affine_eval(p_low, r) & ((1 << k) - 1)
                    combined = affine_compose(poly_direct(image, k), p_low)
                    if combined != poly_direct(r, k + l):
                        return False
        return True

    def sieve_vs_brute():
        for level in iter_levels(12):
            if [s.residue for s in level.survivors] != brute_force_residues(
                level.k
            ):
                return False
        return True

    def hyperstep_oracle():
        for n in range(1, 2001):
            rec = hyperstep_verify(n, table=table)
            exact = exact_stopping_time(n)
            slack = (n.bit_length() - 1) // 2 + 2
            if not (0 <= rec.condensed_steps - exact <= slack):
                return False
        return True

    check("poly_fast equals poly_direct (k <= 12)", fast_vs_direct)
    check("condensed map evaluation matches step oracle", eval_oracle)
    check("composition law (k,l <= 4)", composition_law)
    check("incremental sieve equals brute force (k <= 12)", sieve_vs_brute)
    check("hyperstep counts bound the exact stopping time", hyperstep_oracle)
    return results


def run_selfcheck(cfg: RunConfig) -> Tuple[dict, int]:
    results = selfcheck_report(_worker_table(cfg.cache_depth))
    payload = {
        "config": _config_echo(cfg),
        "checks": [{"name": n, "passed": ok} for n, ok in results],
    }
    code = EXIT_OK if all(ok for _, ok in results) else EXIT_ANOMALY
    return payload, code


# ---------------------------------------------------------------------------
# argument handling and output formatting


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # spec'd exit code for usage problems is 1, not argparse's 2
    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _config_echo(cfg: RunConfig) -> dict:
    echo = asdict(cfg)
    echo.pop("out")
    return echo


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="collatzverify",
        description="Verify the Collatz conjecture for huge random numbers "
        "via condensed affine maps; sieve residue classes; collect "
        "stopping-time statistics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--cache-depth", type=int, default=DEFAULT_CACHE_DEPTH,
                       help=f"base-table depth, 1..{MAX_CACHE_DEPTH}")
        p.add_argument("--budget-mult", type=float, default=1.0,
                       help="scale the condensed-step budget")
        p.add_argument("--format", dest="fmt", default="text",
                       choices=("json", "csv", "text"))
        p.add_argument("--out", default=None, help="write output to PATH")
        p.add_argument("--threads", type=int, default=None,
                       help="worker processes (env COLLATZ_THREADS fallback)")

    def sampling(p):
        p.add_argument("--digits", type=int, default=10_000)
        p.add_argument("--count", type=int, default=1)
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("verify", help="verify seeded random numbers")
    sampling(p)
    common(p)

    p = sub.add_parser("verify-number", help="verify one given number")
    p.add_argument("--value", default=None, help="decimal value inline")
    p.add_argument("--value-file", default=None,
                   help="file holding a decimal value (for huge operands)")
    common(p)

    p = sub.add_parser("sieve", help="survivor counts mod 2^k")
    p.add_argument("--k-max", type=int, default=10)
    p.add_argument("--emit-classes", default=None,
                   help="directory for per-level survivor lists")
    common(p)

    p = sub.add_parser("stats", help="like verify, but summary only")
    sampling(p)
    common(p)

    p = sub.add_parser("selfcheck", help="run the small consistency suites")
    common(p)

    return parser


def _format_csv(payload: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    if "samples" in payload:
        cols = ["index", "seed", "digits", "condensed_steps", "hypersteps",
                "reached_one", "elapsed"]
        writer.writerow(cols)
        for r in payload["samples"]:
            writer.writerow([r.get(c, "") for c in cols])
    elif "counts" in payload:
        writer.writerow(["k", "count"])
        for row in payload["counts"]:
            writer.writerow([row["k"], row["count"]])
    elif "summary" in payload and payload["summary"] is not None:
        cols = list(payload["summary"])
        writer.writerow(cols)
        writer.writerow([payload["summary"][c] for c in cols])
    elif "record" in payload:
        cols = list(payload["record"])
        writer.writerow(cols)
        writer.writerow([payload["record"][c] for c in cols])
    elif "checks" in payload:
        writer.writerow(["name", "passed"])
        for row in payload["checks"]:
            writer.writerow([row["name"], row["passed"]])
    return buf.getvalue()


def _format_text(payload: dict) -> str:
    lines: List[str] = []
    if "counts" in payload:
        lines.append(f"{'k':>3}  {'survivors':>10}")
        for row in payload["counts"]:
            lines.append(f"{row['k']:>3}  {row['count']:>10}")
    if "record" in payload:
        for key, val in payload["record"].items():
            lines.append(f"{key}: {val}")
    if "samples" in payload:
        for r in payload["samples"]:
            if r.get("reached_one"):
                lines.append(
                    f"sample {r['index']}: steps={r['condensed_steps']} "
                    f"hypersteps={r['hypersteps']} time={r['elapsed']:.3f}s"
                )
            else:
                lines.append(f"sample {r['index']}: FAILED ({r.get('error')})")
    if payload.get("summary"):
        s = payload["summary"]
        lines.append(
            f"n={s['n']} mean={s['mean']:.1f} std={s['std']:.1f} "
            f"skewness={s['skewness']} kurtosis={s['kurtosis']}"
        )
        lines.append(
            f"model={s['model_mean']:.1f} "
            f"mean/model={s['mean_over_model']} "
            f"KS D={s['ks_statistic']} p~{s['ks_p_approx']}"
        )
    if "checks" in payload:
        for row in payload["checks"]:
            mark = "PASS" if row["passed"] else "FAIL"
            lines.append(f"[{mark}] {row['name']}")
    if "failures" in payload and payload["failures"]:
        lines.append(f"failures: {payload['failures']}")
    if "error" in payload:
        lines.append(f"error: {payload['error']}")
    return "\n".join(lines) + "\n"


def _emit(payload: dict, cfg: RunConfig) -> None:
    if cfg.fmt == "json":
        text = json.dumps(payload, indent=2) + "\n"
    elif cfg.fmt == "csv":
        text = _format_csv(payload)
    else:
        text = _format_text(payload)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


_RUNNERS = {
    "verify": run_verify,
    "verify-number": run_verify_number,
    "sieve": run_sieve,
    "stats": run_stats,
    "selfcheck": run_selfcheck,
}


def _resolve_threads(value: Optional[int]) -> int:
    if value is not None:
        return max(1, value)
    env = os.environ.get("COLLATZ_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return 1


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    ns = vars(args)
    cfg = RunConfig(
        command=ns["command"],
        digits=ns.get("digits", 1),
        count=ns.get("count", 1),
        seed=ns.get("seed", 0),
        k_max=ns.get("k_max", 10),
        cache_depth=ns.get("cache_depth", DEFAULT_CACHE_DEPTH),
        budget_mult=ns.get("budget_mult", 1.0),
        fmt=ns.get("fmt", "text"),
        out=ns.get("out"),
        threads=_resolve_threads(ns.get("threads")),
        emit_classes=ns.get("emit_classes"),
        value=ns.get("value"),
        value_file=ns.get("value_file"),
    )
    if cfg.command in ("verify", "stats") and (cfg.digits < 1 or cfg.count < 1):
        print("error: --digits and --count must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    if not 1 <= cfg.cache_depth <= MAX_CACHE_DEPTH:
        print(f"error: --cache-depth must be in [1, {MAX_CACHE_DEPTH}]",
              file=sys.stderr)
        return EXIT_USAGE
    try:
        payload, code = _RUNNERS[cfg.command](cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SieveResourceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    _emit(payload, cfg)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
