"""Monte-Carlo execution of the two-outcome measurement protocol.

The measurement has trial-independent outcome statistics, so each trial
is a Bernoulli draw at the analytic success probability and the
conditional output state is computed once. Uniform variates come from
numpy's counter-based Philox generator: trial i is fully determined by
(seed, i), and reruns are bit-identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .coding import PreparationPlan
from .errors import ZeroProbabilityBranch
from .linalg import DEFAULT_TOL, gram
from .states import TargetState, apply_permutations

_CHUNK = 1 << 20


@dataclass(frozen=True)
class SimulationConfig:
    trials: int
    seed: int = 0
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        if int(self.trials) < 1:
            raise ValueError("trials must be >= 1")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must fit in an unsigned 64-bit integer")
        object.__setattr__(self, "trials", int(self.trials))
        object.__setattr__(self, "seed", int(self.seed))


@dataclass(frozen=True, eq=False)
class SimulationResult:
    trials: int
    successes: int
    empirical_prob: float
    analytic_prob: float
    mean_success_fidelity: float
    ci_halfwidth: float


def outcome_probability(plan: PreparationPlan, outcome: int) -> float:
    """Chance of the given measurement branch for this plan's resource.

    Outcome 0 is Tr(e0^dag e0 rho_A) with rho_A the sender's reduced
    state diag(|c_j|^2); outcome 1 is its complement.
    """
    if outcome not in (0, 1):
        raise ValueError(f"outcome must be 0 or 1, got {outcome!r}")
    weights = np.abs(plan.shared.c) ** 2
    p0 = float(np.real(np.sum(weights * np.diag(gram(plan.kraus.e0)))))
    p0 = min(1.0, max(0.0, p0))
    return p0 if outcome == 0 else 1.0 - p0


def conditional_output(plan: PreparationPlan, t: TargetState, outcome: int,
                       tol: float = DEFAULT_TOL) -> tuple[np.ndarray, float]:
    """Post-measurement state for one branch, plus its fidelity with the target.

    Returns the d^2 output amplitudes in the original product basis
    (row-major over (i, j)) and |<target|output>|^2. On the success
    branch of a feasible plan the fidelity is 1.
    """
    if outcome not in (0, 1):
        raise ValueError(f"outcome must be 0 or 1, got {outcome!r}")
    reduced = apply_permutations(t, plan.shared)
    element = plan.kraus.e0 if outcome == 0 else plan.kraus.e1
    # Shared state in the reduced frame is sum_j c_j |j>|j>, i.e. diag(c).
    out = element * plan.shared.c[np.newaxis, :]
    weight = float(np.sum(np.abs(out) ** 2))
    if weight <= tol:
        raise ZeroProbabilityBranch(f"branch {outcome} has probability {weight!r}")
    out = out / math.sqrt(weight)
    psi = reduced.x / math.sqrt(t.d)
    fidelity = float(abs(np.sum(psi.conj() * out)) ** 2)
    original = np.zeros((t.d, t.d), dtype=np.complex128)
    original[np.ix_(plan.shared.perm_a, plan.shared.perm_b)] = out
    return original.ravel(), fidelity


def run_protocol(plan: PreparationPlan, t: TargetState,
                 cfg: SimulationConfig) -> SimulationResult:
    """Sample the measurement cfg.trials times and summarize.

    The success-branch fidelity is outcome-independent and computed
    analytically once. ci_halfwidth is the three-sigma normal
    half-width around the empirical rate, with the rate clamped away
    from 0 and 1 for the width computation only.
    """
    p0 = outcome_probability(plan, 0)
    rng = np.random.Generator(np.random.Philox(key=cfg.seed))
    successes = 0
    remaining = cfg.trials
    while remaining > 0:
        block = min(remaining, _CHUNK)
        successes += int(np.count_nonzero(rng.random(block) < p0))
        remaining -= block
    _, fidelity = conditional_output(plan, t, 0, cfg.tol)
    empirical = successes / cfg.trials
    clamp = 1.0 / (cfg.trials + 2)
    p_hat = min(max(empirical, clamp), 1.0 - clamp)
    ci = 3.0 * math.sqrt(p_hat * (1.0 - p_hat) / cfg.trials)
    return SimulationResult(
        trials=cfg.trials,
        successes=successes,
        empirical_prob=empirical,
        analytic_prob=p0,
        mean_success_fidelity=fidelity,
        ci_halfwidth=ci,
    )
