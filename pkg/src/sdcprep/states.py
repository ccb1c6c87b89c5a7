"""Target states, shared resources, Schmidt analysis, column-Gram reports.

Conventions
-----------
A target on two d-level systems is stored as its d x d coefficient
matrix ``x``: the amplitude of |i>_A |j>_B is x[i, j] / sqrt(d), so the
matrix satisfies sum |x[i, j]|^2 = d. Rows index system A, columns
system B.

A shared resource lives on matched ground-state pairs,

    sum_i  c[i] |perm_a[i]>_A |perm_b[i]>_B,

with sum |c[i]|^2 = 1. Identity permutations give the plain form
sum_i c[i] |i>|i>. All indices are zero-based.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import BadLength, DimensionMismatch, NotNormalized
from .linalg import DEFAULT_TOL, as_matrix, gram, svd

# Constructor-level sanity bound; the strict normalization contract is
# enforced by target_from_amplitudes with the caller's tolerance.
_CONSTRUCT_TOL = 1e-6


def _identity_perm(d: int) -> tuple[int, ...]:
    return tuple(range(d))


def _check_perm(perm, d: int, name: str) -> tuple[int, ...]:
    p = tuple(int(i) for i in perm)
    if sorted(p) != list(range(d)):
        raise ValueError(f"{name} must be a permutation of 0..{d - 1}, got {p}")
    return p


@dataclass(frozen=True, eq=False)
class TargetState:
    """State to be prepared, held as its scaled coefficient matrix."""

    d: int
    x: np.ndarray

    def __post_init__(self):
        if int(self.d) < 1:
            raise ValueError("local dimension must be >= 1")
        object.__setattr__(self, "d", int(self.d))
        x = as_matrix(self.x)
        if x.shape != (self.d, self.d):
            raise DimensionMismatch(
                f"coefficient matrix must be {self.d}x{self.d}, got {x.shape[0]}x{x.shape[1]}"
            )
        total = float(np.sum(np.abs(x) ** 2))
        if abs(total - self.d) > _CONSTRUCT_TOL * self.d:
            raise NotNormalized(
                f"sum of squared moduli is {total!r}, expected {self.d}",
                abs(total - self.d),
            )
        x.setflags(write=False)
        object.__setattr__(self, "x", x)

    def amplitudes(self) -> np.ndarray:
        """Unit-normalized amplitude vector over (i, j), row-major."""
        return (self.x / math.sqrt(self.d)).ravel()


@dataclass(frozen=True, eq=False)
class SharedState:
    """Entangled resource over ground-state pairs."""

    c: np.ndarray
    perm_a: tuple[int, ...] = field(default=())
    perm_b: tuple[int, ...] = field(default=())

    def __post_init__(self):
        c = np.array(self.c, dtype=np.complex128).ravel()
        if c.size < 1:
            raise ValueError("shared state needs at least one amplitude")
        if not np.isfinite(c).all():
            raise ValueError("shared amplitudes must be finite")
        total = float(np.sum(np.abs(c) ** 2))
        if abs(total - 1.0) > _CONSTRUCT_TOL:
            raise NotNormalized(
                f"sum of squared moduli is {total!r}, expected 1.0", abs(total - 1.0)
            )
        d = c.size
        pa = _check_perm(self.perm_a, d, "perm_a") if self.perm_a else _identity_perm(d)
        pb = _check_perm(self.perm_b, d, "perm_b") if self.perm_b else _identity_perm(d)
        c.setflags(write=False)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "perm_a", pa)
        object.__setattr__(self, "perm_b", pb)

    @property
    def d(self) -> int:
        return self.c.size

    @classmethod
    def from_weights(cls, weights, perm_a=(), perm_b=()) -> "SharedState":
        """Build from simplex weights |c_i|^2, taking each c_i real >= 0."""
        w = np.asarray(weights, dtype=np.float64)
        return cls(np.sqrt(np.clip(w, 0.0, None)), perm_a, perm_b)


@dataclass(frozen=True, eq=False)
class SchmidtForm:
    """Canonical form sum_k lambdas[k] |basis_a[:,k]> |basis_b[:,k]>."""

    lambdas: np.ndarray
    basis_a: np.ndarray
    basis_b: np.ndarray


class Violation(NamedTuple):
    """Off-diagonal Gram entry above threshold: columns j1 < j2, value gamma."""

    j1: int
    j2: int
    gamma: complex


@dataclass(frozen=True, eq=False)
class GramReport:
    """Column Gram matrix of x together with the exact-preparability verdict."""

    gram: np.ndarray
    column_norms: np.ndarray
    violations: tuple[Violation, ...]
    perfectly_preparable: bool


def target_from_amplitudes(d: int, amps, normalization: str = "unit",
                           tol: float = DEFAULT_TOL) -> TargetState:
    """Build a TargetState from d^2 row-major amplitudes.

    ``unit`` amplitudes must satisfy sum |a|^2 = 1 and are scaled by
    sqrt(d); ``scaled`` amplitudes are stored as given and must satisfy
    sum |a|^2 = d.
    """
    if normalization not in ("unit", "scaled"):
        raise ValueError(f"normalization must be 'unit' or 'scaled', got {normalization!r}")
    flat = np.array(amps, dtype=np.complex128).ravel()
    if flat.size != d * d:
        raise BadLength(f"expected {d * d} amplitudes for d={d}, got {flat.size}")
    if not np.isfinite(flat).all():
        raise ValueError("amplitudes must be finite")
    total = float(np.sum(np.abs(flat) ** 2))
    expected = 1.0 if normalization == "unit" else float(d)
    if abs(total - expected) > tol:
        raise NotNormalized(
            f"{normalization} amplitudes must satisfy sum |a|^2 = {expected}, got {total!r}",
            abs(total - expected),
        )
    x = flat.reshape(d, d)
    if normalization == "unit":
        x = x * math.sqrt(d)
    return TargetState(d, x)


def schmidt_decompose(t: TargetState, tol: float = DEFAULT_TOL) -> SchmidtForm:
    """Schmidt coefficients and local bases of the target.

    With m = x / sqrt(d), returns m = basis_a @ diag(lambdas) @ basis_b.T,
    so the state is sum_k lambdas[k] |e_k>|f_k| with e_k, f_k the columns
    of basis_a, basis_b. lambdas are nonnegative and descending, padded
    with exact zeros up to length d.
    """
    m = t.x / math.sqrt(t.d)
    u, s, v = svd(m, tol)
    return SchmidtForm(lambdas=s, basis_a=u, basis_b=v.conj())


def entanglement_entropy(s: SchmidtForm) -> float:
    """Entropy of the squared Schmidt coefficients, in bits."""
    p = np.abs(np.asarray(s.lambdas, dtype=np.float64)) ** 2
    p = p[p > 0.0]
    return float(-np.sum(p * np.log2(p))) if p.size else 0.0


def column_gram_report(t: TargetState, tol: float = DEFAULT_TOL) -> GramReport:
    """Inner products between columns of x, flagging nonorthogonal pairs.

    The target can be prepared exactly with certainty from a ground-pair
    resource iff no off-diagonal entry exceeds tol in modulus.
    """
    g = gram(t.x)
    norms = np.real(np.diag(g)).copy()
    violations = []
    for j1 in range(t.d - 1):
        for j2 in range(j1 + 1, t.d):
            val = complex(g[j1, j2])
            if abs(val) > tol:
                violations.append(Violation(j1, j2, val))
    g.setflags(write=False)
    norms.setflags(write=False)
    return GramReport(
        gram=g,
        column_norms=norms,
        violations=tuple(violations),
        perfectly_preparable=not violations,
    )


def apply_permutations(t: TargetState, s: SharedState) -> TargetState:
    """Relabel the target so the shared state's pairing becomes plain.

    Returns the target with row i replaced by row perm_a[i] and column j
    by column perm_b[j]; analyses of the permuted target against
    sum_i c[i]|i>|i> are equivalent to analyses of the original target
    against the permuted resource.
    """
    if s.d != t.d:
        raise DimensionMismatch(f"shared state has d={s.d}, target has d={t.d}")
    return TargetState(t.d, t.x[np.ix_(s.perm_a, s.perm_b)])
