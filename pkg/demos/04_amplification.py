"""
Amplifying to the exact product
===============================

Sketching the residual ``AB - C_hat`` again and adding the correction
shrinks the expected squared error by ``1 - r/n`` per round, so about
``(n/r) ln(1/eps)`` rounds reach relative error eps.
"""

import math

import numpy as np

import whsketch as ws

n, r, eps = 64, 16, 1e-6
rng = ws.make_rng(2)
a, b = rng.standard_normal((n, n)), rng.standard_normal((n, n))
ab = a @ b

cfg = ws.AmplifyConfig(ws.SketchConfig(n, r, seed=5), eps)
c_hat, trace = ws.amplify_multiply(a, b, cfg, ground_truth=ab)
norm = ws.frobenius_norm_sq(ab)
print("planned rounds:", cfg.planned_iters, " used:", trace.iterations)
for t in (1, 5, 10, 20, 40):
    if t <= len(trace.residuals):
        print(f"round {t:>2}: relative residual {trace.residuals[t - 1] / norm:.3e}  (1 - r/n)^t = {(1 - r / n) ** t:.3e}")
print("final:", ws.frobenius_norm_sq(c_hat - ab) / norm)
