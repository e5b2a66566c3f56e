"""``amm`` command line: run, sweep and amplify experiments and write reports.

Exit codes: 0 on success, 1 for usage errors (bad flags or combinations),
2 for runtime failures such as an unwritable output path.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from . import report as rpt
from .amplification import AmplifyConfig, amplify_multiply
from .evaluator import ALGORITHMS, MAX_ORACLE_N, ExperimentPlan, make_inputs, run_experiment
from .matrix import GENERATOR_KINDS, frobenius_norm_sq, is_power_of_two, next_power_of_two
from .sampling import SamplerMode
from .sketch import Estimator, SketchConfig, exact_multiply

log = logging.getLogger("whsketch")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser, need_r: bool = True) -> None:
    p.add_argument("--n", type=int, default=32,
                   help="matrix side; padded with zeros up to a power of two (default: %(default)s)")
    if need_r:
        p.add_argument("--r", type=int, default=8,
                       help="sampling parameter: r*n output entries are computed, 1 <= r <= n (default: %(default)s)")
    p.add_argument("--generator", choices=GENERATOR_KINDS, default="gaussian",
                   help="input matrix family (default: %(default)s)")
    p.add_argument("--sampler", choices=[m.value for m in SamplerMode], default=SamplerMode.UNIFORM.value,
                   help="which output positions are computed (default: %(default)s)")
    p.add_argument("--seed", type=int, default=0, help="seed for the sketch randomness (default: %(default)s)")
    p.add_argument("--matrix-seed", type=int, default=0,
                   help="seed for generating A and B (default: %(default)s)")
    p.add_argument("--output", default=None, help="report path; stdout when omitted (default: %(default)s)")
    p.add_argument("--format", choices=("json", "csv"), default="json", help="report format (default: %(default)s)")
    p.add_argument("--strict-serial", action="store_true",
                   help="single worker and no wall-clock fields, so reruns give identical files (default: off)")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr (default: off)")


def _experiment_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--algorithm", choices=ALGORITHMS, default="wht-sketch", help="estimator family (default: %(default)s)")
    p.add_argument("--estimator", choices=[e.value for e in Estimator], default=Estimator.BIASED.value,
                   help="biased returns (r/n)AB in expectation, unbiased rescales by n/r (default: %(default)s)")
    p.add_argument("--trials", type=int, default=100, help="independent sketches per experiment (default: %(default)s)")
    p.add_argument("--flatness-trials", type=int, default=0,
                   help="key draws for the flatness probe, 0 to skip (default: %(default)s)")
    p.add_argument("--workers", type=int, default=1,
                   help="threads running trials; forced to 1 by --strict-serial (default: %(default)s)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="amm", description="Fast Walsh-Hadamard sketch experiments for approximate matrix multiplication.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="one Monte Carlo experiment")
    _common(run)
    _experiment_flags(run)

    sweep = sub.add_parser("sweep", help="one experiment per r at fixed n")
    _common(sweep, need_r=False)
    _experiment_flags(sweep)
    sweep.add_argument("--r-values", default=None,
                       help="comma-separated r values; powers of two up to n when omitted (default: %(default)s)")

    amp = sub.add_parser("amplify", help="iterate the sketch on its own residual")
    _common(amp)
    amp.add_argument("--amplify-eps", type=float, default=1e-6,
                     help="target relative squared error (default: %(default)s)")
    amp.add_argument("--max-iters", type=int, default=10_000, help="cap on rounds (default: %(default)s)")
    amp.add_argument("--with-oracle", action="store_true",
                     help="compute AB exactly, trace the residual each round and stop at eps (default: off)")
    return parser


def _resolve_n(args) -> tuple[int, int]:
    if args.n < 1:
        raise UsageError("--n must be at least 1")
    n = args.n if is_power_of_two(args.n) else next_power_of_two(args.n)
    if n > MAX_ORACLE_N:
        raise UsageError(f"--n {args.n} exceeds the supported maximum of {MAX_ORACLE_N}")
    return n, args.n


def _check_r(r: int, n: int, sampler: str) -> None:
    if not 1 <= r <= n:
        raise UsageError(f"--r must satisfy 1 <= r <= n={n}, got {r}")
    if sampler == SamplerMode.ALL.value and r != n:
        raise UsageError(f"--sampler all requires --r equal to n={n}, got {r}")


def _plan(args, n: int, requested: int, r: int) -> ExperimentPlan:
    if args.trials < 1:
        raise UsageError(f"--trials must be at least 1, got {args.trials}")
    if args.workers < 1:
        raise UsageError(f"--workers must be at least 1, got {args.workers}")
    if args.flatness_trials < 0:
        raise UsageError(f"--flatness-trials must be non-negative, got {args.flatness_trials}")
    if args.flatness_trials and n > 256:
        raise UsageError("--flatness-trials needs n <= 256")
    return ExperimentPlan(
        n=n, r=r, algorithm=args.algorithm, estimator=args.estimator, sampler=args.sampler,
        generator=args.generator, matrix_seed=args.matrix_seed, seed=args.seed,
        trials=args.trials, flatness_trials=args.flatness_trials,
        workers=1 if args.strict_serial else args.workers,
        requested_n=requested, record_timings=not args.strict_serial,
    )


def _check_output(path) -> None:
    if path is None or path == "-":
        return
    parent = Path(path).resolve().parent
    if not parent.is_dir() or not os.access(parent, os.W_OK):
        raise OSError(f"cannot write --output {path}: directory {parent} is missing or read-only")


def _emit(args, write) -> None:
    write(args.output)


def _cmd_run(args) -> None:
    n, requested = _resolve_n(args)
    _check_r(args.r, n, args.sampler)
    plan = _plan(args, n, requested, args.r)
    log.info("running %s", plan)
    report = run_experiment(plan)
    _emit(args, lambda p: rpt.write_report(report, args.format, p))


def _cmd_sweep(args) -> None:
    n, requested = _resolve_n(args)
    if args.r_values:
        try:
            rs = [int(x) for x in args.r_values.split(",") if x.strip()]
        except ValueError:
            raise UsageError(f"--r-values must be comma-separated integers, got {args.r_values!r}")
        if not rs:
            raise UsageError("--r-values is empty")
    else:
        rs = [1 << k for k in range(n.bit_length()) if (1 << k) <= n]
    for r in rs:
        _check_r(r, n, args.sampler)
    plans = [_plan(args, n, requested, r) for r in rs]
    reports = []
    for plan in plans:
        log.info("sweep r=%d", plan.r)
        reports.append(run_experiment(plan))
    _emit(args, lambda p: rpt.write_report(reports, args.format, p))


def _cmd_amplify(args) -> None:
    n, requested = _resolve_n(args)
    _check_r(args.r, n, args.sampler)
    if not 0.0 < args.amplify_eps < 1.0:
        raise UsageError(f"--amplify-eps must lie in (0, 1), got {args.amplify_eps}")
    if args.max_iters < 1:
        raise UsageError(f"--max-iters must be at least 1, got {args.max_iters}")
    plan = ExperimentPlan(n=n, r=args.r, sampler=args.sampler, generator=args.generator,
                          matrix_seed=args.matrix_seed, seed=args.seed, trials=1, requested_n=requested)
    a, b = make_inputs(plan)
    cfg = AmplifyConfig(SketchConfig(n, args.r, sampler=args.sampler, seed=args.seed),
                        args.amplify_eps, args.max_iters)
    truth = exact_multiply(a, b) if args.with_oracle else None
    c_hat, trace = amplify_multiply(a, b, cfg, ground_truth=truth)
    norm = frobenius_norm_sq(truth) if truth is not None else None
    final = frobenius_norm_sq(truth - c_hat) if truth is not None else None
    rel = (lambda x: x / norm if norm else 0.0)
    summary = {
        "schema_version": rpt.SCHEMA_VERSION,
        "n": n, "requested_n": requested, "r": args.r, "sampler": args.sampler,
        "generator": args.generator, "matrix_seed": args.matrix_seed, "seed": args.seed,
        "epsilon": args.amplify_eps, "max_iters": args.max_iters,
        "planned_iters": cfg.planned_iters, "iterations": trace.iterations,
        "norm_ab_sq": norm,
        "final_residual_sq": final,
        "final_relative_residual_sq": rel(final) if final is not None else None,
        "residuals": trace.residuals,
    }

    def write(path):
        if args.format == "json":
            rpt.write_json(summary, path)
        else:
            rows = [{"schema_version": rpt.SCHEMA_VERSION, "iteration": t + 1,
                     "residual_sq": v, "relative_residual_sq": rel(v)}
                    for t, v in enumerate(trace.residuals)]
            rpt.write_csv(rows, rpt.AMPLIFY_CSV_FIELDS, path)

    _emit(args, write)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    handler = {"run": _cmd_run, "sweep": _cmd_sweep, "amplify": _cmd_amplify}[args.command]
    try:
        _check_output(args.output)
        handler(args)
    except UsageError as exc:
        print(f"amm: error: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError, MemoryError) as exc:
        print(f"amm: runtime error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
