"""
Where the time goes
===================

Rotations cost O(n^2 log n) regardless of r; the partial product costs
O(r n^2). At n = 1024 the second grows linearly in r while the first stays put.
"""

import numpy as np

import whsketch as ws

n = 1024
rng = ws.make_rng(3)
a, b = rng.standard_normal((n, n)), rng.standard_normal((n, n))

print(f"{'r':>4} {'rotations (s)':>14} {'partial (s)':>12}")
for r in (8, 16, 32, 64, 128):
    runs = [ws.sketch_multiply(a, b, ws.SketchConfig(n, r, seed=k)).elapsed for k in range(3)]
    rot = min(e["rotate"] + e["inverse"] for e in runs)
    part = min(e["partial"] for e in runs)
    print(f"{r:>4} {rot:>14.4f} {part:>12.4f}")
