"""Brute-force reference implementations used only by the tests."""

import itertools
import math

import numpy as np


def dense_laplacian(n, h, bc, diffusivity=1.0):
    """Assemble the central-difference matrix point by point (row-major)."""
    n = tuple(n)
    idx = list(itertools.product(*[range(k) for k in n]))
    pos = {p: r for r, p in enumerate(idx)}
    A = np.zeros((len(idx), len(idx)))
    for p in idx:
        r = pos[p]
        for d in range(len(n)):
            for step in (-1, 1):
                q = list(p)
                q[d] += step
                if bc == "periodic":
                    q[d] %= n[d]
                else:
                    q[d] = min(max(q[d], 0), n[d] - 1)  # mirror ghost = neighbour
                A[r, pos[tuple(q)]] += 1.0 / h[d] ** 2
            A[r, r] -= 2.0 / h[d] ** 2
    return diffusivity * A


def expm_ss(A, terms=30):
    """Matrix exponential by scaling and squaring of a truncated Taylor series."""
    norm = np.max(np.sum(np.abs(A), axis=1))
    k = max(0, int(math.ceil(math.log2(norm))) + 1) if norm > 0 else 0
    B = A / 2.0**k
    E = np.eye(A.shape[0])
    term = np.eye(A.shape[0])
    for m in range(1, terms):
        term = term @ B / m
        E = E + term
    for _ in range(k):
        E = E @ E
    return E


def splitmix64_scalar(seed, k):
    """k-th output (0-based) with pure Python integers."""
    mask = 2**64 - 1
    z = (seed + (k + 1) * 0x9E3779B97F4A7C15) & mask
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & mask
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & mask
    return z ^ (z >> 31)
