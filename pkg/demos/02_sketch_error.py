"""
Bias and total error of the sketch
==================================

Computing ``r * n`` of the ``n^2`` rotated output entries gives an estimate
C with ``E[C] = (r/n) AB`` and ``E||C - AB||^2 = (1 - r/n) ||AB||^2``.
Rescaling by ``n/r`` removes the bias at the price of total error
``(n/r - 1) ||AB||^2``.
"""

import numpy as np

import whsketch as ws

n = 32
rng = ws.make_rng(1)
a, b = rng.standard_normal((n, n)), rng.standard_normal((n, n))
ab = a @ b

###############################################################################
# One sketch, r = 8: a quarter of the output entries are computed.
res = ws.sketch_multiply(a, b, ws.SketchConfig(n, 8, seed=3))
print("phase timings (s):", {k: round(v, 5) for k, v in res.elapsed.items()})
print("relative squared error:", ws.frobenius_norm_sq(res.estimate - ab) / ws.frobenius_norm_sq(ab))

###############################################################################
# With r = n the answer is exact.
full = ws.sketch_multiply(a, b, ws.SketchConfig(n, n, seed=3)).estimate
print("r = n error:", np.linalg.norm(full - ab) / np.linalg.norm(ab))

###############################################################################
# Monte Carlo against the closed forms, for a sweep of r.
print(f"{'r':>3} {'estimator':>9} {'measured':>9} {'closed form':>11}")
for r in (4, 8, 16):
    for est in ("biased", "unbiased"):
        rep = ws.run_experiment(ws.ExperimentPlan(n, r, estimator=est, trials=1000, seed=r))
        print(f"{r:>3} {est:>9} {rep.relative_sq_error:>9.4f} {rep.predicted_relative_sq_error:>11.4f}")
