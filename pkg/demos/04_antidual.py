"""Operators into the anti-dual of C^n, with the max norm on C^n."""

import numpy as np

from parsum.antidual import (
    AntidualOperator,
    NormedSpace,
    antidual_factorization_check,
    antidual_parallel_sum,
    banach_schwarz_check,
    operator_norm,
)
from parsum.random import random_pair

rng = np.random.default_rng(4)
E = NormedSpace(6, "max")
A, B = (AntidualOperator(M, E) for M in random_pair(rng, 6, "deficient"))

print("A = J_A J_A* j_E:", antidual_factorization_check(A))
S = antidual_parallel_sum(A, B)
print("pairing <(A:B)x, x> at x = 1:", S.pairing(np.ones(6), np.ones(6)).real)

info = operator_norm(S, rng)
print("operator norm E -> E' lies in [%.6f, %.6f]" % (info.lower, info.upper))
rep = banach_schwarz_check(S, rng.standard_normal((6, 200)), info)
print("||(A:B)x||^2 <= ||A:B|| <(A:B)x, x> at 200 points:", rep.holds)
