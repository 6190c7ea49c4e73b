"""Parallel sum of two degenerate Hermitian forms on C^4."""

import numpy as np

from parsum import form_parallel_sum, parallel_sum_oracle
from parsum.forms import form_infimum, quotient_space, riesz_operators

t = np.diag([1.0, 1.0, 0.0, 0.0])
w = np.array([[1, 1, 0, 0], [1, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 0]], dtype=float)

for name, G in (("t", t), ("w", w), ("t+w", t + w)):
    print(f"dim H_{name} = {quotient_space(G).dim}")

R = riesz_operators(t, w)
print("T + W = I on H_(t+w):", R.identity_residual() < 1e-12)

S = form_parallel_sum(t, w)
print("\nGram of t:w\n", np.round(S.real, 12))
print("equals the operator parallel sum:", np.allclose(S, parallel_sum_oracle(t, w)))
x = np.array([1.0, 2.0, 3.0, 4.0])
print("(t:w)(x,x) = %.6f, infimum = %.6f" % (np.vdot(x, S @ x).real, form_infimum(t, w, x).value))
