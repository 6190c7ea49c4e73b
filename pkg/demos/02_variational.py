"""The quadratic form of A:B as an infimum and as a supremum."""

import numpy as np

from parsum import parallel_sum_oracle, quadratic_form_inf, quadratic_form_sup
from parsum.operators import contraction_pair, defect_range_report, fillmore_williams_check
from parsum.random import random_pair

rng = np.random.default_rng(2)
A, B = random_pair(rng, 5, "full")
M = parallel_sum_oracle(A, B)
x = rng.standard_normal(5) + 1j * rng.standard_normal(5)

inf = quadratic_form_inf(A, B, x)
sup = quadratic_form_sup(A, B, x)
print("<(A:B)x, x>          ", np.vdot(x, M @ x).real)
print("min over y           ", inf.value)
print("<Ax,x> minus the sup ", sup.value)

pair = contraction_pair(A, B)
print("\nS_A, S_B operator norms:", ["%.6f" % s for s in pair.operator_norms()])
print("hat identity residual:  %.1e" % pair.hat_residual())

print("\nran (A:B)^1/2 = ran A^1/2 ∩ ran B^1/2:", fillmore_williams_check(A, B))
y = A @ rng.standard_normal(5)
rep = defect_range_report(A, B, y=y, samples=rng.standard_normal((5, 50)))
print("ran (A - A:B)^1/2 = ran A:", rep.equals_range_a)
print("certificate constant m_y = %.4f, worst ratio over 50 samples %.4f" % (rep.m_y, rep.worst_ratio))
