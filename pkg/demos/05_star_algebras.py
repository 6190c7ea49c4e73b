"""Representable functionals on finite-dimensional *-algebras."""

import numpy as np

from parsum import library
from parsum.algebra import (
    Functional,
    approximate_unit_limit,
    functional_from_densities,
    functional_parallel_sum,
    gns,
    representability_check,
    scaled_unit_sequence,
    singularity_report,
    unital_identity_detail,
)

lib = library()
C, M2 = lib["C"], lib["M2"]

f, g = Functional(C, [2.0]), Functional(C, [3.0])
print("on C: (2z):(3z) =", functional_parallel_sum(f, g).coeffs[0].real, "z")

# f(a) = tr(σ a) on M2; f:g has density σ_f:σ_g
sf = np.array([[2.0, 1.0], [1.0, 1.0]])
f = functional_from_densities(M2, [sf])
g = functional_from_densities(M2, [np.eye(2)])
h = functional_parallel_sum(f, g)
print("\non M2: f:g coefficients", np.round(h.coeffs.real, 12).tolist())
print("representability constant C of f:g = %.4f" % representability_check(h).C)
T = gns(h)
print("GNS dimension %d, reconstruction residual %.1e" % (T.dim, T.reconstruction_residual()))
u = unital_identity_detail(f, g)
print("f:g = conj((A:B)1):", u.holds)

p = functional_from_densities(M2, [np.diag([1.0, 0.0])])
q = functional_from_densities(M2, [np.diag([0.0, 1.0])])
rep = singularity_report(p, q)
print("\ntr(diag(1,0)·) vs tr(diag(0,1)·):", rep.verdict, rep.items)

rep = approximate_unit_limit(f, g, scaled_unit_sequence(M2), steps=10_000)
print("\nerror with e_i = (1-1/i)·1 at i = 10, 100, 10^4:",
      ["%.2e" % rep.errors[i - 1] for i in (10, 100, 10_000)])
