"""Dense complex matrix kernel sized for local dimensions up to 64.

Matrices are numpy arrays of complex128. Every routine is a pure
function of its inputs; nothing here mutates caller data. The
eigensolver is a cyclic Jacobi sweep specialized to Hermitian input,
and the SVD is recovered from the eigendecomposition of A^dag A, which
keeps the whole kernel on a single, well-tested spectral path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceFailure, DimensionMismatch, NotHermitian, NotSquare

# Default tolerance for algebraic predicates (unitarity, Hermiticity,
# violation thresholds downstream).
DEFAULT_TOL = 1e-9

# Iterative routines converge at least this far even when the caller
# asks for less.
_ITERATIVE_FLOOR = 1e-7

_SWEEP_BUDGET = 100


def as_matrix(a) -> np.ndarray:
    """Coerce ``a`` to a fresh 2-D complex128 array, rejecting NaN/Inf."""
    m = np.array(a, dtype=np.complex128)
    if m.ndim != 2:
        raise DimensionMismatch(f"expected a 2-D matrix, got ndim={m.ndim}")
    if m.size and not np.isfinite(m).all():
        raise ValueError("matrix entries must be finite")
    return m


def _require_square(m: np.ndarray, what: str) -> None:
    if m.shape[0] != m.shape[1]:
        raise NotSquare(f"{what} requires a square matrix, got {m.shape[0]}x{m.shape[1]}")


def adjoint(a) -> np.ndarray:
    """Conjugate transpose."""
    return as_matrix(a).conj().T


def matmul(a, b) -> np.ndarray:
    """Matrix product, checking inner dimensions."""
    ma, mb = as_matrix(a), as_matrix(b)
    if ma.shape[1] != mb.shape[0]:
        raise DimensionMismatch(
            f"cannot multiply {ma.shape[0]}x{ma.shape[1]} by {mb.shape[0]}x{mb.shape[1]}"
        )
    return ma @ mb


def trace(a) -> complex:
    """Sum of diagonal entries of a square matrix."""
    m = as_matrix(a)
    _require_square(m, "trace")
    return complex(np.trace(m))


def gram(a) -> np.ndarray:
    """A^dag A: Hermitian, positive semidefinite, one entry per column pair."""
    m = as_matrix(a)
    return m.conj().T @ m


def is_unitary(a, tol: float = DEFAULT_TOL) -> bool:
    """True iff ||A^dag A - I||_F <= tol."""
    m = as_matrix(a)
    _require_square(m, "is_unitary")
    return float(np.linalg.norm(gram(m) - np.eye(m.shape[0]))) <= tol


@dataclass(frozen=True, eq=False)
class HermitianEigenResult:
    """Real spectrum sorted descending, with matching orthonormal columns."""

    values: np.ndarray
    vectors: np.ndarray


def _jacobi_rotate(a: np.ndarray, v: np.ndarray, p: int, q: int) -> None:
    """Annihilate a[p, q] with a unitary plane rotation, in place."""
    apq = a[p, q]
    mag = abs(apq)
    if mag == 0.0:
        return
    diff = a[p, p].real - a[q, q].real
    if mag < abs(diff) * 1e-18:
        # rotation angle below machine noise; first-order root avoids overflow
        t = -mag / diff
    else:
        theta = diff / (2.0 * mag)
        # Smaller-magnitude root of t^2 - 2*theta*t - 1 = 0.
        t = -math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
    c = 1.0 / math.sqrt(1.0 + t * t)
    s = (t * c) * (apq / mag)
    s_conj = np.conj(s)

    col_p = a[:, p] * c - a[:, q] * s_conj
    col_q = a[:, p] * s + a[:, q] * c
    a[:, p] = col_p
    a[:, q] = col_q
    row_p = a[p, :] * c - a[q, :] * s
    row_q = a[p, :] * s_conj + a[q, :] * c
    a[p, :] = row_p
    a[q, :] = row_q
    a[p, q] = 0.0
    a[q, p] = 0.0
    a[p, p] = a[p, p].real
    a[q, q] = a[q, q].real

    vec_p = v[:, p] * c - v[:, q] * s_conj
    vec_q = v[:, p] * s + v[:, q] * c
    v[:, p] = vec_p
    v[:, q] = vec_q


def _offdiag_norm(a: np.ndarray) -> float:
    mask = ~np.eye(a.shape[0], dtype=bool)
    return float(np.linalg.norm(a[mask]))


def hermitian_eig(a, tol: float = DEFAULT_TOL) -> HermitianEigenResult:
    """Full spectrum of a Hermitian matrix by cyclic Jacobi sweeps.

    Converges when the off-diagonal Frobenius mass drops below
    tol * ||A||_F (never looser than the iterative floor). Eigenvalues
    come back descending; ties keep ascending original index.
    """
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    m = as_matrix(a)
    _require_square(m, "hermitian_eig")
    d = m.shape[0]
    fnorm = float(np.linalg.norm(m))
    if float(np.linalg.norm(m - m.conj().T)) > tol * max(fnorm, 1e-300):
        raise NotHermitian(f"matrix is not Hermitian within tol={tol}")

    work = (m + m.conj().T) / 2.0
    vectors = np.eye(d, dtype=np.complex128)
    threshold = min(tol, _ITERATIVE_FLOOR) * fnorm
    # Quadratic convergence is cheap: keep sweeping toward the machine
    # floor while progress is fast, so downstream sqrt(eigenvalue) and
    # singular-vector quotients stay accurate even for small spectra.
    floor = 8e-16 * fnorm

    converged = fnorm == 0.0
    if not converged:
        off = _offdiag_norm(work)
        prev = math.inf
        for _ in range(_SWEEP_BUDGET):
            if off <= floor or (off <= threshold and off > 0.25 * prev):
                converged = True
                break
            prev = off
            for p in range(d - 1):
                for q in range(p + 1, d):
                    _jacobi_rotate(work, vectors, p, q)
            off = _offdiag_norm(work)
        else:
            converged = off <= threshold
    if not converged:
        raise ConvergenceFailure(
            f"Jacobi sweeps did not converge in {_SWEEP_BUDGET} passes (d={d})"
        )

    values = np.real(np.diag(work)).copy()
    order = np.argsort(-values, kind="stable")
    return HermitianEigenResult(values[order], vectors[:, order])


def spectral_norm(a, tol: float = DEFAULT_TOL) -> float:
    """Largest singular value: sqrt of the top eigenvalue of A^dag A."""
    m = as_matrix(a)
    top = hermitian_eig(gram(m), tol).values[0]
    return math.sqrt(max(float(top), 0.0))


def _completion_column(accumulated: list[np.ndarray], d: int) -> np.ndarray:
    """Canonical basis vector orthogonalized against ``accumulated``.

    Picks the candidate with the largest residual (deterministic: first
    index on ties), re-orthogonalizes once, and normalizes.
    """
    eye = np.eye(d, dtype=np.complex128)
    residuals = eye.copy()
    for b in accumulated:
        residuals -= np.outer(b, b.conj() @ eye)
    norms = np.linalg.norm(residuals, axis=0)
    pick = int(np.argmax(norms))
    r = residuals[:, pick]
    for b in accumulated:
        r = r - b * (b.conj() @ r)
    return r / np.linalg.norm(r)


def svd(a, tol: float = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Singular value decomposition A = U diag(S) V^dag of a square matrix.

    Right factors are the eigenvectors of A^dag A; left factors are
    A v_k / s_k, with rank-deficient columns completed to an orthonormal
    set from the canonical basis.
    """
    m = as_matrix(a)
    _require_square(m, "svd")
    d = m.shape[0]
    eig = hermitian_eig(gram(m), tol)
    singulars = np.sqrt(np.clip(eig.values, 0.0, None))
    v = eig.vectors
    s_max = float(singulars[0]) if d else 0.0
    cutoff = tol * s_max

    u = np.zeros((d, d), dtype=np.complex128)
    recovered: list[np.ndarray] = []
    deferred: list[int] = []
    for k in range(d):
        if singulars[k] > cutoff:
            col = (m @ v[:, k]) / singulars[k]
            u[:, k] = col
            recovered.append(col)
        else:
            deferred.append(k)
    for k in deferred:
        col = _completion_column(recovered, d)
        u[:, k] = col
        recovered.append(col)
    return u, singulars, v
