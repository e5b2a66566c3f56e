"""Repeated sketching of the residual, driving the error of the estimate to zero.

Each round is one biased sketch applied to ``R = AB - C_hat``. The residual
is never formed as a product: after rotating the inputs with fresh keys,
``W(R) = A'B' - W(C_hat)`` by the product law, so a sampled entry of the
rotated residual costs one dot product and one lookup. In expectation the
squared residual shrinks by ``1 - r/n`` per round, so
``ceil((n/r) ln(1/eps))`` rounds reach relative squared error ``eps``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .matrix import frobenius_norm_sq, make_rng
from .rotation import RotationKeys, rotate, rotate_inverse
from .sampling import sample_indices
from .sketch import SketchConfig, _check_inputs, partial_product


@dataclass(frozen=True)
class AmplifyConfig:
    base: SketchConfig
    epsilon: float
    max_iters: int = 10_000

    def __post_init__(self):
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be at least 1, got {self.max_iters}")

    @property
    def planned_iters(self) -> int:
        n, r = self.base.n, self.base.r
        return min(self.max_iters, max(1, math.ceil((n / r) * math.log(1.0 / self.epsilon))))


@dataclass
class AmplifyTrace:
    """``residuals[t]`` is ``||AB - C_hat||_F^2`` after round ``t + 1`` (only with ground truth)."""

    iterations: int = 0
    residuals: list[float] = field(default_factory=list)


def amplify_multiply(
    a: np.ndarray,
    b: np.ndarray,
    cfg: AmplifyConfig,
    ground_truth: np.ndarray | None = None,
) -> tuple[np.ndarray, AmplifyTrace]:
    """Approximate ``a @ b`` to relative squared error about ``cfg.epsilon``.

    The loop runs ``cfg.planned_iters`` rounds. With ``ground_truth`` the
    squared residual is recorded after every round and the loop stops early
    once it falls to ``epsilon * ||AB||_F^2`` or below.

    The estimator field of ``cfg.base`` is ignored: every correction uses the
    unscaled inverse rotation. All rounds draw from the single stream seeded
    by ``cfg.base.seed``; each round takes alpha, beta, gamma, then indices.
    """
    base = cfg.base
    n, r = base.n, base.r
    a, b = _check_inputs(a, b, n)
    rng = make_rng(base.seed)
    trace = AmplifyTrace()
    c_hat = np.zeros((n, n))

    target = None
    if ground_truth is not None:
        ground_truth = np.asarray(ground_truth, dtype=np.float64)
        if ground_truth.shape != (n, n):
            raise ValueError(f"ground truth has shape {ground_truth.shape}, expected {(n, n)}")
        target = cfg.epsilon * frobenius_norm_sq(ground_truth)

    for _ in range(cfg.planned_iters):
        keys = RotationKeys.draw(n, rng)
        idx = sample_indices(base.sampler, n, r, rng)
        gamma = keys.gamma if base.use_gamma else np.ones(n)
        aprime = rotate(a, keys.alpha, gamma)
        bprime = rotate(b, gamma, keys.beta)
        rotated_acc = rotate(c_hat, keys.alpha, keys.beta)

        correction = partial_product(aprime, bprime, idx)
        rows, cols = idx.rows, idx.cols
        correction[rows, cols] -= rotated_acc[rows, cols]
        c_hat += rotate_inverse(correction, keys.alpha, keys.beta)
        trace.iterations += 1

        if ground_truth is not None:
            res = frobenius_norm_sq(ground_truth - c_hat)
            trace.residuals.append(res)
            if res <= target:
                break
    return c_hat, trace
