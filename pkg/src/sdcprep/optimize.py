"""Search for the best ground-pair resource over the weight simplex.

Phases of the shared amplitudes never change the success probability
(they conjugate y^dag y by a diagonal unitary), so the search space is
the simplex of weights p_j = |c_j|^2. Columns of the target that are
exactly zero get weight zero and are excluded; on the remaining
coordinates the objective is one over a convex function, so any local
maximum is global.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .coding import success_probability
from .errors import DimensionTooLarge
from .linalg import DEFAULT_TOL, gram
from .states import SharedState, TargetState

_SPREAD_TOL = 1e-10
_REFLECT = 1.0
_EXPAND = 2.0
_CONTRACT = 0.5
_SHRINK = 0.5
_GRID_LIMIT = 4
_CHUNK = 1 << 17


@dataclass(frozen=True, eq=False)
class SeedPoint:
    """Named starting point with its objective value."""

    name: str
    weights: np.ndarray
    value: float


@dataclass(frozen=True, eq=False)
class OptimizationResult:
    """Best shared amplitudes found, with search bookkeeping.

    history holds (evaluation count, best so far) at each improvement;
    the best-so-far sequence is nondecreasing by construction.
    """

    best_c: np.ndarray
    best_prob: float
    method: str
    evaluations: int
    seeds_used: tuple[SeedPoint, ...]
    history: tuple[tuple[int, float], ...]


def objective(t: TargetState, weights, tol: float = DEFAULT_TOL) -> float:
    """Success probability at a simplex point of weights |c_j|^2.

    Infeasible points (zero weight on a column the target needs) score
    0.0 instead of raising, which keeps every search space closed.
    """
    w = np.asarray(weights, dtype=np.float64).ravel()
    if w.size != t.d:
        raise ValueError(f"expected {t.d} weights, got {w.size}")
    if not np.isfinite(w).all():
        raise ValueError("weights must be finite")
    if np.any(w < -1e-12):
        raise ValueError("weights must be nonnegative")
    w = np.clip(w, 0.0, None)
    total = float(w.sum())
    if abs(total - 1.0) > 1e-6:
        raise ValueError(f"weights must sum to one, got {total!r}")
    w = w / total
    column_norms = np.sum(np.abs(t.x) ** 2, axis=0)
    if np.any((w == 0.0) & (column_norms > 0.0)):
        return 0.0
    return success_probability(t, SharedState.from_weights(w), tol)


def _batch_values(gram_support: np.ndarray, d: int, points: np.ndarray) -> np.ndarray:
    """Objective for many support-simplex points at once.

    Uses y^dag y = G_{jk} / (d sqrt(p_j p_k)) directly, with numpy's
    batched Hermitian eigensolver; agrees with ``objective`` pointwise.
    """
    values = np.zeros(points.shape[0])
    feasible = np.all(points > 0.0, axis=1)
    if np.any(feasible):
        p = points[feasible]
        inv = 1.0 / np.sqrt(p)
        m = gram_support[np.newaxis, :, :] * inv[:, :, np.newaxis] * inv[:, np.newaxis, :]
        top = np.linalg.eigvalsh(m / d)[:, -1]
        values[feasible] = np.minimum(1.0, 1.0 / top)
    return values


def _lattice_size(n: int, k: int) -> int:
    return math.comb(n + k - 1, k - 1)


def _grid_resolution(budget: int, k: int) -> int:
    """Largest lattice resolution whose point count fits the budget (>= 1)."""
    if k <= 1 or _lattice_size(2, k) > budget:
        return 1
    hi = 2
    while _lattice_size(hi * 2, k) <= budget:
        hi *= 2
    lo = hi
    hi *= 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _lattice_size(mid, k) <= budget:
            lo = mid
        else:
            hi = mid
    return lo


def _compositions(n: int, k: int):
    """Yield chunked arrays of k nonnegative integers summing to n."""
    if k == 1:
        yield np.array([[n]], dtype=np.int64)
        return
    slots = n + k - 1
    dividers = itertools.combinations(range(slots), k - 1)
    while True:
        block = list(itertools.islice(dividers, _CHUNK))
        if not block:
            return
        arr = np.asarray(block, dtype=np.int64)
        ext = np.hstack([
            np.full((arr.shape[0], 1), -1, dtype=np.int64),
            arr,
            np.full((arr.shape[0], 1), slots, dtype=np.int64),
        ])
        yield np.diff(ext, axis=1) - 1


def _softmax(z: np.ndarray) -> np.ndarray:
    """Map (k-1) free logits (last pinned to 0) onto the open simplex."""
    full = np.append(z, 0.0)
    full -= full.max()
    e = np.exp(full)
    return e / e.sum()


def _nelder_mead(f, x0: np.ndarray, delta: float, max_evals: int):
    """Minimize f from x0; stops on value spread < 1e-10 or the budget.

    Standard coefficients: reflect 1, expand 2, contract 0.5, shrink 0.5.
    Returns (best point, best value, evaluations used).
    """
    n = x0.size
    if max_evals < n + 1:
        return x0, f(x0), 1
    pts = [x0.astype(np.float64)]
    for i in range(n):
        p = pts[0].copy()
        p[i] += delta
        pts.append(p)
    vals = [f(p) for p in pts]
    evals = n + 1

    while evals < max_evals:
        order = np.argsort(vals, kind="stable")
        pts = [pts[i] for i in order]
        vals = [vals[i] for i in order]
        if vals[-1] - vals[0] < _SPREAD_TOL:
            break
        centroid = np.mean(pts[:-1], axis=0)
        xr = centroid + _REFLECT * (centroid - pts[-1])
        fr = f(xr)
        evals += 1
        if fr < vals[0]:
            if evals < max_evals:
                xe = centroid + _EXPAND * (centroid - pts[-1])
                fe = f(xe)
                evals += 1
                if fe < fr:
                    pts[-1], vals[-1] = xe, fe
                else:
                    pts[-1], vals[-1] = xr, fr
            else:
                pts[-1], vals[-1] = xr, fr
        elif fr < vals[-2]:
            pts[-1], vals[-1] = xr, fr
        else:
            if evals >= max_evals:
                break
            if fr < vals[-1]:
                xc = centroid + _CONTRACT * (xr - centroid)
                fc = f(xc)
                evals += 1
                accepted = fc <= fr
            else:
                xc = centroid - _CONTRACT * (centroid - pts[-1])
                fc = f(xc)
                evals += 1
                accepted = fc < vals[-1]
            if accepted:
                pts[-1], vals[-1] = xc, fc
            else:
                for i in range(1, n + 1):
                    if evals >= max_evals:
                        break
                    pts[i] = pts[0] + _SHRINK * (pts[i] - pts[0])
                    vals[i] = f(pts[i])
                    evals += 1

    best = int(np.argmin(vals))
    return pts[best], vals[best], evals


def optimize_shared(t: TargetState, method: str = "nelder_mead",
                    budget: int = 20000, tol: float = DEFAULT_TOL) -> OptimizationResult:
    """Maximize the success probability over shared-state weights.

    Both methods start from the column-norm weights and the uniform
    weights. ``grid`` exhausts the densest simplex lattice that fits the
    budget (local dimension at most 4); ``nelder_mead`` runs the simplex
    search in softmax coordinates from each seed, with one tighter
    restart while budget remains. Deterministic for fixed inputs.
    """
    name = method.replace("-", "_").lower()
    if name not in ("grid", "nelder_mead"):
        raise ValueError(f"method must be 'grid' or 'nelder-mead', got {method!r}")
    if budget < 1:
        raise ValueError("budget must be >= 1")
    if name == "grid" and t.d > _GRID_LIMIT:
        raise DimensionTooLarge(f"grid search supports d <= {_GRID_LIMIT}, got d={t.d}")

    column_norms = np.sum(np.abs(t.x) ** 2, axis=0)
    support = np.flatnonzero(column_norms > 0.0)
    k = support.size

    evaluations = 0
    best_value = -1.0
    best_weights = None
    history: list[tuple[int, float]] = []

    def embed(p_support: np.ndarray) -> np.ndarray:
        w = np.zeros(t.d)
        w[support] = p_support
        return w

    def evaluate(p_support: np.ndarray) -> float:
        nonlocal evaluations, best_value, best_weights
        w = embed(p_support)
        value = objective(t, w, tol)
        evaluations += 1
        if value > best_value:
            best_value = value
            best_weights = w / w.sum()
            history.append((evaluations, value))
        return value

    seeds = []
    construction = column_norms[support] / column_norms[support].sum()
    for seed_name, p in (("construction", construction), ("uniform", np.full(k, 1.0 / k))):
        seeds.append(SeedPoint(name=seed_name, weights=embed(p), value=evaluate(p)))

    if k > 1:
        if name == "grid":
            g_support = gram(t.x)[np.ix_(support, support)]
            resolution = _grid_resolution(max(budget - evaluations, k), k)
            for counts in _compositions(resolution, k):
                points = counts / resolution
                values = _batch_values(g_support, t.d, points)
                idx = int(np.argmax(values))
                if values[idx] > best_value:
                    best_value = float(values[idx])
                    best_weights = embed(points[idx])
                    history.append((evaluations + idx + 1, best_value))
                evaluations += points.shape[0]
        else:
            per_seed = max((budget - evaluations) // len(seeds), 1)
            for seed in seeds:
                allowance = min(per_seed, budget - evaluations)
                if allowance < 1:
                    break
                p0 = seed.weights[support]
                z0 = np.log(p0 / p0[-1])[:-1]

                def f(z):
                    return -evaluate(_softmax(z))

                best_z, _, used = _nelder_mead(f, z0, 0.25, allowance)
                if allowance - used > k:
                    _nelder_mead(f, best_z, 0.01, allowance - used)

    return OptimizationResult(
        best_c=np.sqrt(best_weights),
        best_prob=best_value,
        method=name,
        evaluations=evaluations,
        seeds_used=tuple(seeds),
        history=tuple(history),
    )
