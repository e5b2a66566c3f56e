"""
The randomized Hadamard rotation
================================

The sketch never touches A and B directly. It first rotates them with
``W(M) = H D_left M D_right H``, an orthogonal map on matrices built from
the fast Walsh-Hadamard transform and random sign flips.
"""

import numpy as np

import whsketch as ws

rng = ws.make_rng(0)

###############################################################################
# H is symmetric, orthogonal and its own inverse. The fast transform
# agrees with the dense matrix built entry by entry.
n = 8
v = rng.standard_normal(n)
Hv = ws.fwht_vector(v.copy())
print("fast vs dense :", np.max(np.abs(Hv - ws.hadamard_matrix(n) @ v)))
print("norm kept     :", np.linalg.norm(v), np.linalg.norm(Hv))
print("H(Hv) == v    :", np.allclose(ws.fwht_vector(Hv.copy()), v))

###############################################################################
# The rotation keeps the Frobenius norm and is undone by rotate_inverse.
n = 64
m = rng.standard_normal((n, n))
keys = ws.RotationKeys.draw(n, rng)
w = ws.rotate(m, keys.alpha, keys.beta)
print("||W(M)||^2 / ||M||^2 :", ws.frobenius_norm_sq(w) / ws.frobenius_norm_sq(m))
print("inverse error        :", np.linalg.norm(ws.rotate_inverse(w, keys.alpha, keys.beta) - m))

###############################################################################
# Rotating A on (alpha, gamma) and B on (gamma, beta) rotates their product
# on (alpha, beta): the shared gamma cancels.
a, b = rng.standard_normal((n, n)), rng.standard_normal((n, n))
fwd, inv = ws.check_multiplicativity(a, b, keys)
print("product-law residual :", fwd / np.linalg.norm(a @ b), inv / np.linalg.norm(a @ b))

###############################################################################
# A matrix with all its mass in one entry comes out perfectly spread:
# every entry of the rotated product has the same magnitude.
spike = ws.generate("spiky", n, rng)
prod = ws.rotate(spike, keys.alpha, keys.gamma) @ ws.rotate(spike, keys.gamma, keys.beta)
print("distinct |entries| after rotation:", np.unique(np.round(np.abs(prod), 12)))
