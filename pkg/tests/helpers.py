"""Shared generators and independent oracles for the test suite."""

import math

import numpy as np


def random_unitary(rng, d):
    z = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def generic_target_matrix(rng, d):
    """Dense complex matrix rescaled to sum |x|^2 = d."""
    z = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return z * math.sqrt(d / np.sum(np.abs(z) ** 2))


def orthogonal_column_matrix(rng, d):
    """Columns of a random unitary scaled by positive weights, total d."""
    q = random_unitary(rng, d)
    x = q * rng.uniform(0.3, 1.7, size=d)
    return x * math.sqrt(d / np.sum(np.abs(x) ** 2))


def single_violation_matrix(rng, d):
    """Orthogonal-column matrix with one pair mixed by an invertible block.

    Returns (matrix, (j1, j2)); only that column pair has a nonzero
    inner product.
    """
    while True:
        x = orthogonal_column_matrix(rng, d)
        j1, j2 = sorted(rng.choice(d, size=2, replace=False))
        block = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        if abs(np.linalg.det(block)) < 0.3:
            continue
        x[:, [j1, j2]] = x[:, [j1, j2]] @ block
        x *= math.sqrt(d / np.sum(np.abs(x) ** 2))
        g = x.conj().T @ x
        others = [
            abs(g[a, b])
            for a in range(d)
            for b in range(a + 1, d)
            if (a, b) != (j1, j2)
        ]
        if abs(g[j1, j2]) > 1e-3 and (not others or max(others) < 1e-11):
            return x, (int(j1), int(j2))


def uniform_target_matrix(d):
    """All entries equal: the hardest target for ground-pair resources."""
    return np.full((d, d), 1.0 / math.sqrt(d), dtype=np.complex128)


def random_permutation(rng, d):
    return tuple(int(i) for i in rng.permutation(d))


def eig2_closed(h):
    """Closed-form eigenvalues of a 2x2 Hermitian matrix, descending."""
    a = h[0, 0].real
    d_ = h[1, 1].real
    mean = (a + d_) / 2.0
    rad = math.hypot((a - d_) / 2.0, abs(h[0, 1]))
    return np.array([mean + rad, mean - rad])


def _det3(b):
    return (
        b[0, 0] * (b[1, 1] * b[2, 2] - b[1, 2] * b[2, 1])
        - b[0, 1] * (b[1, 0] * b[2, 2] - b[1, 2] * b[2, 0])
        + b[0, 2] * (b[1, 0] * b[2, 1] - b[1, 1] * b[2, 0])
    )


def eig3_closed(h):
    """Characteristic-polynomial roots of a 3x3 Hermitian matrix, descending.

    Trigonometric solution of the depressed cubic; no linear-algebra
    library involved.
    """
    q = np.trace(h).real / 3.0
    off2 = abs(h[0, 1]) ** 2 + abs(h[0, 2]) ** 2 + abs(h[1, 2]) ** 2
    p2 = sum((h[i, i].real - q) ** 2 for i in range(3)) + 2.0 * off2
    p = math.sqrt(p2 / 6.0)
    if p == 0.0:
        return np.full(3, q)
    b = (h - q * np.eye(3)) / p
    r = min(1.0, max(-1.0, _det3(b).real / 2.0))
    phi = math.acos(r) / 3.0
    top = q + 2.0 * p * math.cos(phi)
    low = q + 2.0 * p * math.cos(phi + 2.0 * math.pi / 3.0)
    return np.array([top, 3.0 * q - top - low, low])
