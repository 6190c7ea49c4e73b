"""Seeded random PSD instances, including rank-deficient ones."""

from __future__ import annotations

import numpy as np


def complex_gaussian(rng: np.random.Generator, *shape) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def random_psd(rng: np.random.Generator, n: int, rank: int | None = None, basis=None) -> np.ndarray:
    """C C* with C an n×rank complex Gaussian.

    If ``basis`` (n×m, orthonormal columns) is given, the range is confined to
    its span.
    """
    rank = n if rank is None else rank
    if basis is None:
        C = complex_gaussian(rng, n, rank)
    else:
        C = basis @ complex_gaussian(rng, basis.shape[1], rank)
    M = C @ C.conj().T
    return 0.5 * (M + M.conj().T)


def random_unitary_columns(rng: np.random.Generator, n: int, m: int) -> np.ndarray:
    Q, _ = np.linalg.qr(complex_gaussian(rng, n, max(m, 1)))
    return Q[:, :m]


def random_pair(rng: np.random.Generator, n: int, kind: str = "full"):
    """A pair (A, B) of n×n PSD matrices.

    kinds: ``full`` (generic full rank), ``deficient`` (rank A, rank B < n),
    ``common`` (rank(A+B) < n: both ranges inside a common subspace),
    ``disjoint`` (ranges in complementary coordinate blocks, so A:B = 0),
    ``zero`` (one operand zero).
    """
    if kind == "full":
        return random_psd(rng, n), random_psd(rng, n)
    if kind == "deficient":
        ra = int(rng.integers(0, n)) if n > 1 else 0
        rb = int(rng.integers(0, n)) if n > 1 else 0
        return random_psd(rng, n, ra), random_psd(rng, n, rb)
    if kind == "common":
        m = int(rng.integers(1, n)) if n > 1 else 0
        Q = random_unitary_columns(rng, n, m)
        ra = int(rng.integers(1, m + 1)) if m else 0
        rb = int(rng.integers(1, m + 1)) if m else 0
        return random_psd(rng, n, ra, Q), random_psd(rng, n, rb, Q)
    if kind == "disjoint":
        k = int(rng.integers(0, n + 1))
        Q = random_unitary_columns(rng, n, n)
        return random_psd(rng, n, k, Q[:, :k]), random_psd(rng, n, n - k, Q[:, k:])
    if kind == "zero":
        A = random_psd(rng, n, int(rng.integers(0, n + 1)))
        return (A, np.zeros_like(A)) if rng.random() < 0.5 else (np.zeros_like(A), A)
    raise ValueError(f"unknown instance kind {kind!r}")


PAIR_KINDS = ("full", "deficient", "common", "disjoint", "zero")


def instance_suite(seed: int, count: int, max_dim: int = 50):
    """Deterministic list of (index, kind, A, B) covering every rank pattern."""
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        kind = PAIR_KINDS[i % len(PAIR_KINDS)]
        n = int(rng.integers(1, max_dim + 1))
        A, B = random_pair(rng, n, kind)
        out.append((i, kind, A, B))
    return out
