"""Shared helpers for the test suite."""

import numpy as np

from mpshor import circuit as cir


def haar_unitary(dim, rng):
    z = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_circuit(n, depth, seed, p_single=0.3):
    """Seeded random circuit of Haar 1- and 2-qubit unitaries."""
    rng = np.random.default_rng(seed)
    gates = []
    for _ in range(depth):
        if n == 1 or rng.random() < p_single:
            gates.append(cir.unitary1(haar_unitary(2, rng), int(rng.integers(n))))
        else:
            a, b = rng.choice(n, 2, replace=False)
            gates.append(cir.unitary2(haar_unitary(4, rng), int(a), int(b)))
    return cir.Circuit(n, tuple(gates))


def dft_matrix(n):
    """Direct evaluation of the discrete Fourier transform on 2^n points."""
    dim = 1 << n
    grid = np.outer(np.arange(dim), np.arange(dim))
    return np.exp(2j * np.pi * grid / dim) / np.sqrt(dim)
