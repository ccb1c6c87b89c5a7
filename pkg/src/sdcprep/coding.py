"""Sender operations, success probabilities, and preparability analysis.

The protocol: the two parties share sum_j c_j |j>|j>, the sender applies
an operation Y to her half and forwards it. Exact preparation forces

    c_j * y[i, j] = x[i, j] / sqrt(d)            (feasibility)

entrywise, and the operation succeeds via the two-outcome measurement
{E0 = Y/||Y||, E1 = sqrt(I - E0^dag E0)} with probability
1 / ||Y^dag Y||. Probability one is reachable iff the columns of x are
mutually orthogonal, in which case the weights |c_j|^2 proportional to
the column norms make Y unitary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    InfeasibleShared,
    NegativeEigenvalue,
    NotSingleViolation,
    ZeroColumn,
    ZeroOperator,
)
from .linalg import (
    DEFAULT_TOL,
    as_matrix,
    gram,
    hermitian_eig,
    spectral_norm,
    _completion_column,
    _require_square,
)
from .states import (
    GramReport,
    SharedState,
    TargetState,
    apply_permutations,
    column_gram_report,
)


@dataclass(frozen=True, eq=False)
class KrausPair:
    """Two-outcome measurement elements with e0^dag e0 + e1^dag e1 = I."""

    e0: np.ndarray
    e1: np.ndarray


@dataclass(frozen=True, eq=False)
class PreparationPlan:
    """Everything needed to run the protocol for one target.

    ``y`` satisfies the feasibility constraint against the target after
    reduction by the shared state's permutations. ``free_columns`` lists
    the columns of y that the constraint left unconstrained (the target
    carries no amplitude there); they are filled with an orthonormal
    completion so they never drag the success probability down.
    """

    shared: SharedState
    y: np.ndarray
    kraus: KrausPair
    success_prob: float
    is_perfect: bool
    free_columns: tuple[int, ...]


@dataclass(frozen=True, eq=False)
class ViolationBoundReport:
    """Success-probability floor when exactly one column pair overlaps.

    ``bound`` is (1 + |gamma| / (d |c_k1 c_k2|))^-1 with the weights
    |c_j|^2 = (column norm)/d; ``achieved`` is the probability of the
    plan built from those weights, and ``spectrum`` the eigenvalues of
    y^dag y under that plan (descending).
    """

    pair: tuple[int, int]
    gamma: complex
    bound: float
    spectrum: np.ndarray
    achieved: float


def decide_perfect(t: TargetState, tol: float = DEFAULT_TOL) -> GramReport:
    """Verdict on exact probability-one preparation from a ground-pair resource."""
    return column_gram_report(t, tol)


def canonical_shared(t: TargetState) -> SharedState:
    """Shared state with weights matching the target's column norms.

    |c_j|^2 = (1/d) sum_i |x[i, j]|^2, each c_j real nonnegative. This is
    the choice that achieves probability one whenever that is possible.
    """
    weights = np.sum(np.abs(t.x) ** 2, axis=0) / t.d
    return SharedState.from_weights(weights / np.sum(weights))


def _forced_operation(x: np.ndarray, c: np.ndarray) -> tuple[np.ndarray, tuple[int, ...]]:
    """Solve the feasibility constraint for y given coefficients and weights.

    Columns with c_j = 0 are only legal when the matching column of x is
    zero; those columns of y are unconstrained and get filled with unit
    vectors orthogonal to the span of the constrained columns, so they
    contribute spectral weight exactly 1 and never affect 1/||y^dag y||.
    """
    d = x.shape[0]
    root_d = math.sqrt(d)
    y = np.zeros((d, d), dtype=np.complex128)
    free = []
    for j in range(d):
        if c[j] == 0:
            if np.any(x[:, j] != 0):
                raise InfeasibleShared(
                    f"shared state has no weight on pair {j} but the target "
                    f"has amplitude in column {j}"
                )
            free.append(j)
        else:
            y[:, j] = x[:, j] / (root_d * c[j])
    if free:
        span: list[np.ndarray] = []
        for j in range(d):
            if j in free:
                continue
            r = y[:, j].copy()
            for b in span:
                r -= b * (b.conj() @ r)
            nrm = float(np.linalg.norm(r))
            if nrm > 1e-12:
                span.append(r / nrm)
        for j in free:
            col = _completion_column(span, d)
            y[:, j] = col
            span.append(col)
    return y, tuple(free)


def _top_eigenvalue(y: np.ndarray, tol: float) -> float:
    return max(float(hermitian_eig(gram(y), tol).values[0]), 0.0)


def success_probability(t: TargetState, s: SharedState, tol: float = DEFAULT_TOL) -> float:
    """Probability of the success outcome for the operation forced by s.

    Always in (0, 1]; equals 1 / ||y^dag y|| for the forced y. Raises
    InfeasibleShared when s puts zero weight on a column the target
    needs.
    """
    reduced = apply_permutations(t, s)
    y, _ = _forced_operation(reduced.x, s.c)
    return min(1.0, 1.0 / _top_eigenvalue(y, tol))


def plan_for_shared(t: TargetState, s: SharedState, tol: float = DEFAULT_TOL) -> PreparationPlan:
    """Full preparation plan (operation, Kraus pair, probability) for a given resource."""
    reduced = apply_permutations(t, s)
    y, free = _forced_operation(reduced.x, s.c)
    kraus = kraus_from_operation(y, tol)
    prob = min(1.0, 1.0 / _top_eigenvalue(y, tol))
    return PreparationPlan(
        shared=s,
        y=y,
        kraus=kraus,
        success_prob=prob,
        is_perfect=prob >= 1.0 - tol,
        free_columns=free,
    )


def construct_plan(t: TargetState, tol: float = DEFAULT_TOL) -> PreparationPlan:
    """Plan built on the column-norm shared state.

    When the columns of x are orthogonal this yields a unitary y and
    success probability one; otherwise the probability is strictly
    below one.
    """
    return plan_for_shared(t, canonical_shared(t), tol)


def maximal_baseline(t: TargetState, tol: float = DEFAULT_TOL) -> float:
    """Success probability with the maximally entangled resource (all c_j = 1/sqrt(d)).

    The forced operation is then x itself, so this is
    1 / ||x^dag x||; for orthogonal columns it reduces to one over the
    largest column norm.
    """
    return min(1.0, 1.0 / _top_eigenvalue(t.x, tol))


def single_violation_bound(t: TargetState, tol: float = DEFAULT_TOL,
                           pair: tuple[int, int] | None = None) -> ViolationBoundReport:
    """Probability floor for a target whose columns overlap in exactly one pair.

    With ``pair`` unset, the violating pair is auto-detected and must be
    unique. An explicit ``pair`` overrides detection; any violation
    outside it still raises NotSingleViolation, and a zero overlap at
    the chosen pair is allowed (the bound degenerates to 1).
    """
    report = column_gram_report(t, tol)
    if pair is None:
        if len(report.violations) != 1:
            raise NotSingleViolation(
                f"expected exactly one violating column pair, found {len(report.violations)}"
            )
        k1, k2, gamma = report.violations[0]
    else:
        k1, k2 = sorted(int(k) for k in pair)
        if not (0 <= k1 < k2 < t.d):
            raise ValueError(f"pair must name two distinct columns in 0..{t.d - 1}")
        outside = [v for v in report.violations if (v.j1, v.j2) != (k1, k2)]
        if outside:
            raise NotSingleViolation(
                f"{len(outside)} violating pair(s) outside the requested pair {(k1, k2)}"
            )
        gamma = complex(report.gram[k1, k2])

    a1 = float(report.column_norms[k1])
    a2 = float(report.column_norms[k2])
    if a1 <= 0.0 or a2 <= 0.0:
        raise ZeroColumn(f"column {k1 if a1 <= 0.0 else k2} has zero norm")
    c1 = math.sqrt(a1 / t.d)
    c2 = math.sqrt(a2 / t.d)
    bound = 1.0 / (1.0 + abs(gamma) / (t.d * c1 * c2))

    plan = construct_plan(t, tol)
    spectrum = hermitian_eig(gram(plan.y), tol).values
    return ViolationBoundReport(
        pair=(k1, k2),
        gamma=gamma,
        bound=bound,
        spectrum=spectrum,
        achieved=plan.success_prob,
    )


def kraus_from_operation(y, tol: float = DEFAULT_TOL) -> KrausPair:
    """Measurement pair implementing y probabilistically.

    e0 = y / ||y||; e1 is the Hermitian principal square root of
    I - e0^dag e0, with eigenvalues in [-tol, 0) clamped to zero.
    """
    m = as_matrix(y)
    _require_square(m, "kraus_from_operation")
    norm = spectral_norm(m, tol)
    if norm == 0.0:
        raise ZeroOperator("cannot build a Kraus pair from the zero operation")
    e0 = m / norm
    h = np.eye(m.shape[0]) - gram(e0)
    eig = hermitian_eig(h, tol)
    low = float(eig.values[-1])
    if low < -tol:
        raise NegativeEigenvalue(
            f"I - e0^dag e0 has eigenvalue {low}, beyond -tol={-tol}"
        )
    roots = np.sqrt(np.clip(eig.values, 0.0, None))
    e1 = (eig.vectors * roots) @ eig.vectors.conj().T
    return KrausPair(e0=e0, e1=e1)
