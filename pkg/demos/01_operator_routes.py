"""Five independent constructions of A:B, compared on a rank-deficient pair."""

import numpy as np

from parsum import ROUTES, parallel_sum, route_agreement
from parsum.random import random_pair

A = np.array([[2.0, 1.0], [1.0, 1.0]])
print("A:I for A = [[2,1],[1,1]] (exact answer [[0.6,0.2],[0.2,0.4]])")
for name in ROUTES:
    print(f"  {name:<12}", np.round(parallel_sum(A, np.eye(2), name).real, 12).tolist())

# A and B share a 3-dimensional range inside C^8, so A+B is singular
rng = np.random.default_rng(1)
A, B = random_pair(rng, 8, "common")
print("\nrank A, rank B, rank A+B:", *(np.linalg.matrix_rank(X) for X in (A, B, A + B)))
results, gaps = route_agreement(A, B)
print("largest pairwise gap between routes: %.2e" % max(gaps.values()))
M = results["projection"]
print("smallest eigenvalue of A - A:B: %.2e" % np.linalg.eigvalsh(A - M)[0])
print("smallest eigenvalue of B - A:B: %.2e" % np.linalg.eigvalsh(B - M)[0])
