"""Monte Carlo measurement of bias, total error and per-entry spread.

Every trial of an experiment uses its own seed, derived from the plan seed
by a counter: trial ``t`` runs on ``SeedSequence(seed, spawn_key=(t,))``.
Trials are therefore independent, reproducible and can run in any order.
Per-entry moments are accumulated with Welford's one-pass update; chunks
processed by different workers are merged with Chan's pairwise formula,
which is why a multi-worker run can differ from a serial one in the last
bits.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields

import numpy as np

from .matrix import GENERATOR_KINDS, frobenius_norm_sq, generate, make_rng
from .rotation import RotationKeys, rotate
from .sketch import (
    Estimator,
    SketchConfig,
    exact_multiply,
    naive_sample_multiply,
    sketch_multiply,
)
from .sampling import SamplerMode

ALGORITHMS = ("wht-sketch", "naive-sample", "exact")
MAX_ORACLE_N = 1024
MAX_FLATNESS_N = 256


def trial_seed(seed: int, trial: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(seed, spawn_key=(trial,))


def _flatness_seed(seed: int) -> np.random.SeedSequence:
    # two-element key: disjoint from every per-trial key
    return np.random.SeedSequence(seed, spawn_key=(0, 1))


class EntryStats:
    """Running per-entry mean and sum of squared deviations (Welford)."""

    def __init__(self, shape):
        self.count = 0
        self.mean = np.zeros(shape)
        self.m2 = np.zeros(shape)

    def update(self, x: np.ndarray) -> None:
        self.count += 1
        delta = x - self.mean
        self.mean += delta / self.count
        self.m2 += delta * (x - self.mean)

    def merge(self, other: "EntryStats") -> "EntryStats":
        if other.count == 0:
            return self
        if self.count == 0:
            self.count, self.mean, self.m2 = other.count, other.mean.copy(), other.m2.copy()
            return self
        total = self.count + other.count
        delta = other.mean - self.mean
        self.mean = self.mean + delta * (other.count / total)
        self.m2 = self.m2 + other.m2 + delta**2 * (self.count * other.count / total)
        self.count = total
        return self

    @property
    def variance(self) -> np.ndarray:
        """Unbiased sample variance (``ddof=1``); zero with fewer than two samples."""
        if self.count < 2:
            return np.zeros_like(self.m2)
        return self.m2 / (self.count - 1)

    @property
    def standard_error(self) -> np.ndarray:
        if self.count < 2:
            return np.full_like(self.m2, np.nan)
        return np.sqrt(self.variance / self.count)


@dataclass(frozen=True)
class ExperimentPlan:
    n: int
    r: int
    algorithm: str = "wht-sketch"
    estimator: Estimator = Estimator.BIASED
    sampler: SamplerMode = SamplerMode.UNIFORM
    generator: str = "gaussian"
    matrix_seed: int = 0
    seed: int = 0
    trials: int = 100
    flatness_trials: int = 0
    workers: int = 1
    requested_n: int | None = None
    record_timings: bool = True

    def __post_init__(self):
        object.__setattr__(self, "estimator", Estimator(self.estimator))
        object.__setattr__(self, "sampler", SamplerMode(self.sampler))
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}; expected one of {ALGORITHMS}")
        if self.generator not in GENERATOR_KINDS:
            raise ValueError(f"unknown generator {self.generator!r}; expected one of {GENERATOR_KINDS}")
        if self.trials < 1:
            raise ValueError(f"trials must be at least 1, got {self.trials}")
        if self.workers < 1:
            raise ValueError(f"workers must be at least 1, got {self.workers}")
        if self.n > MAX_ORACLE_N:
            raise ValueError(f"n={self.n} exceeds the exact-oracle cap of {MAX_ORACLE_N}")
        if self.requested_n is not None and not 1 <= self.requested_n <= self.n:
            raise ValueError(f"requested_n={self.requested_n} must lie in [1, n={self.n}]")
        # delegates n / r / sampler validation
        self.sketch_config(0)

    def sketch_config(self, seed) -> SketchConfig:
        return SketchConfig(self.n, self.r, self.estimator, self.sampler, seed)


@dataclass
class ErrorReport:
    """Scalar summary of one experiment.

    Per-entry quantities are reported as min / max / mean over the ``n*n``
    entries. ``per_entry_variance`` is the sample variance of ``C_ij`` across
    trials; ``per_entry_mse`` is the mean of ``(C_ij - AB_ij)^2``. Fields
    ending in ``_se`` are standard errors of the Monte Carlo mean before them.
    Timings are mean seconds per trial, or ``None`` when the plan disables
    them (wall clock is the only non-reproducible part of a report).
    ``bias_norm_sq`` is ``||mean(C) - target||_F^2`` with target ``(r/n) AB``
    (biased) or ``AB`` (unbiased); ``bias_noise_floor`` is its expected value
    when there is no bias, ``sum_ij var(C_ij) / trials``.
    """

    n: int
    requested_n: int
    r: int
    algorithm: str
    estimator: str
    sampler: str
    generator: str
    matrix_seed: int
    seed: int
    trials: int
    norm_ab_sq: float
    mean_sq_error: float
    mean_sq_error_se: float
    predicted_sq_error: float
    relative_sq_error: float
    predicted_relative_sq_error: float
    bias_norm_sq: float
    bias_noise_floor: float
    max_bias_z: float
    frac_entries_within_5se: float
    per_entry_variance_min: float
    per_entry_variance_max: float
    per_entry_variance_mean: float
    per_entry_mse_min: float
    per_entry_mse_max: float
    per_entry_mse_mean: float
    predicted_per_entry_mse_mean: float
    flatness_max_deviation: float
    flatness_trials: int
    time_rotate: float | None
    time_rotate_se: float | None
    time_partial: float | None
    time_partial_se: float | None
    time_inverse: float | None
    time_inverse_se: float | None
    time_total: float | None
    entry_stats: EntryStats | None = field(default=None, repr=False, compare=False)
    target: np.ndarray | None = field(default=None, repr=False, compare=False)

    @classmethod
    def field_names(cls) -> list[str]:
        return [f.name for f in fields(cls) if f.name not in ("entry_stats", "target")]

    def to_dict(self) -> dict:
        return {name: getattr(self, name) for name in self.field_names()}


def predicted_sq_error(n: int, r: int, estimator, norm_ab_sq: float) -> float:
    """Closed-form expected ``||C - AB||_F^2`` for the uniform sampler."""
    if Estimator(estimator) is Estimator.UNBIASED:
        return (n / r - 1.0) * norm_ab_sq
    return (1.0 - r / n) * norm_ab_sq


def make_inputs(plan: ExperimentPlan) -> tuple[np.ndarray, np.ndarray]:
    """Generate ``A`` then ``B`` from the matrix seed; zero-pad past ``requested_n``."""
    rng = make_rng(plan.matrix_seed)
    a = generate(plan.generator, plan.n, rng)
    b = generate(plan.generator, plan.n, rng)
    m = plan.requested_n
    if m is not None and m < plan.n:
        for x in (a, b):
            x[m:, :] = 0.0
            x[:, m:] = 0.0
    return a, b


def _run_chunk(plan, a, b, ab, trials):
    stats = EntryStats(ab.shape)
    sq_err = np.empty(len(trials))
    times = np.empty((len(trials), 3))
    for k, t in enumerate(trials):
        if plan.algorithm == "exact":
            t0 = time.perf_counter()
            c = exact_multiply(a, b)
            times[k] = (0.0, time.perf_counter() - t0, 0.0)
        else:
            run = sketch_multiply if plan.algorithm == "wht-sketch" else naive_sample_multiply
            res = run(a, b, plan.sketch_config(trial_seed(plan.seed, t)))
            c = res.estimate
            times[k] = (res.elapsed["rotate"], res.elapsed["partial"], res.elapsed["inverse"])
        stats.update(c)
        sq_err[k] = frobenius_norm_sq(c - ab)
    return stats, sq_err, times


def _mean_se(x: np.ndarray) -> tuple[float, float]:
    if len(x) < 2:
        return float(np.mean(x)), float("nan")
    return float(np.mean(x)), float(np.std(x, ddof=1) / math.sqrt(len(x)))


def run_experiment(plan: ExperimentPlan) -> ErrorReport:
    """Run ``plan.trials`` independent estimates of ``AB`` and summarize them.

    With ``workers == 1`` the report is a pure function of the plan, bit for bit.
    """
    start = time.perf_counter()
    a, b = make_inputs(plan)
    ab = exact_multiply(a, b)
    norm_ab_sq = frobenius_norm_sq(ab)
    n, r = plan.n, plan.r

    trial_ids = list(range(plan.trials))
    if plan.workers == 1:
        chunks = [_run_chunk(plan, a, b, ab, trial_ids)]
    else:
        parts = [trial_ids[w :: plan.workers] for w in range(plan.workers)]
        parts = [p for p in parts if p]
        with ThreadPoolExecutor(max_workers=len(parts)) as pool:
            chunks = list(pool.map(lambda p: _run_chunk(plan, a, b, ab, p), parts))
    stats = EntryStats(ab.shape)
    for s, _, _ in chunks:
        stats.merge(s)
    sq_err = np.concatenate([c[1] for c in chunks])
    times = np.concatenate([c[2] for c in chunks])

    exact = plan.algorithm == "exact"
    if exact:
        target = ab
        predicted = 0.0
    else:
        target = ab * (r / n) if plan.estimator is Estimator.BIASED else ab
        predicted = predicted_sq_error(n, r, plan.estimator, norm_ab_sq)

    mse, mse_se = _mean_se(sq_err)
    var = stats.variance
    entry_mse = stats.m2 / stats.count + (stats.mean - ab) ** 2
    dev = np.abs(stats.mean - target)
    se = stats.standard_error
    with np.errstate(divide="ignore", invalid="ignore"):
        z = np.where(dev == 0.0, 0.0, dev / se)
    z = np.nan_to_num(z, nan=np.inf)

    flat_dev = float("nan")
    if plan.flatness_trials > 0 and not exact:
        probe = flatness_probe(a, b, plan.flatness_trials, make_rng(_flatness_seed(plan.seed)))
        flat_dev = probe.max_deviation

    t_rot, t_rot_se = _mean_se(times[:, 0])
    t_par, t_par_se = _mean_se(times[:, 1])
    t_inv, t_inv_se = _mean_se(times[:, 2])
    t_total = time.perf_counter() - start
    if not plan.record_timings:
        t_rot = t_rot_se = t_par = t_par_se = t_inv = t_inv_se = t_total = None
    rel = (lambda x: x / norm_ab_sq if norm_ab_sq > 0 else 0.0)
    return ErrorReport(
        n=n,
        requested_n=plan.requested_n or n,
        r=r,
        algorithm=plan.algorithm,
        estimator=plan.estimator.value,
        sampler=plan.sampler.value,
        generator=plan.generator,
        matrix_seed=plan.matrix_seed,
        seed=plan.seed,
        trials=plan.trials,
        norm_ab_sq=norm_ab_sq,
        mean_sq_error=mse,
        mean_sq_error_se=mse_se,
        predicted_sq_error=predicted,
        relative_sq_error=rel(mse),
        predicted_relative_sq_error=rel(predicted),
        bias_norm_sq=frobenius_norm_sq(stats.mean - target),
        bias_noise_floor=float(var.sum() / stats.count),
        max_bias_z=float(z.max()) if stats.count > 1 else float("nan"),
        frac_entries_within_5se=float(np.mean(z <= 5.0)) if stats.count > 1 else float("nan"),
        per_entry_variance_min=float(var.min()),
        per_entry_variance_max=float(var.max()),
        per_entry_variance_mean=float(var.mean()),
        per_entry_mse_min=float(entry_mse.min()),
        per_entry_mse_max=float(entry_mse.max()),
        per_entry_mse_mean=float(entry_mse.mean()),
        predicted_per_entry_mse_mean=predicted / (n * n),
        flatness_max_deviation=flat_dev,
        flatness_trials=plan.flatness_trials if not exact else 0,
        time_rotate=t_rot,
        time_rotate_se=t_rot_se,
        time_partial=t_par,
        time_partial_se=t_par_se,
        time_inverse=t_inv,
        time_inverse_se=t_inv_se,
        time_total=t_total,
        entry_stats=stats,
        target=target,
    )


@dataclass
class FlatnessResult:
    """Outcome of :func:`flatness_probe`.

    ``mean_sq[i, j]`` estimates ``E[(A'B')_ij^2]``, whose exact value is
    ``||AB||_F^2 / n^2`` for every entry. ``max_deviation`` is the largest
    relative gap, ``max_z`` the largest gap in standard errors, and
    ``max_identity_residual`` the worst per-draw relative violation of
    ``sum_ij (A'B')_ij^2 == ||AB||_F^2``.
    """

    max_deviation: float
    max_z: float
    max_identity_residual: float
    expected: float
    mean_sq: np.ndarray
    standard_error: np.ndarray


def flatness_probe(a: np.ndarray, b: np.ndarray, trials: int, rng: np.random.Generator) -> FlatnessResult:
    """Average ``(A'B')^2`` entrywise over ``trials`` independent key draws."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    n = a.shape[0]
    if n > MAX_FLATNESS_N:
        raise ValueError(f"flatness_probe is capped at n={MAX_FLATNESS_N}, got {n}")
    if trials < 1:
        raise ValueError("trials must be at least 1")
    ab = exact_multiply(a, b)
    norm_ab_sq = frobenius_norm_sq(ab)
    expected = norm_ab_sq / (n * n)
    stats = EntryStats((n, n))
    worst = 0.0
    for _ in range(trials):
        keys = RotationKeys.draw(n, rng)
        prod = rotate(a, keys.alpha, keys.gamma) @ rotate(b, keys.gamma, keys.beta)
        sq = prod * prod
        stats.update(sq)
        if norm_ab_sq > 0:
            worst = max(worst, abs(frobenius_norm_sq(prod) - norm_ab_sq) / norm_ab_sq)
        else:
            worst = max(worst, frobenius_norm_sq(prod))
    dev = np.abs(stats.mean - expected)
    se = stats.standard_error
    with np.errstate(divide="ignore", invalid="ignore"):
        z = np.where(dev <= 1e-12 * max(expected, 1e-300), 0.0, dev / se)
    max_dev = float(dev.max() / expected) if expected > 0 else float(dev.max())
    return FlatnessResult(
        max_deviation=max_dev,
        max_z=float(np.nan_to_num(z, nan=np.inf).max()),
        max_identity_residual=worst,
        expected=expected,
        mean_sq=stats.mean,
        standard_error=se,
    )
