"""Maximal closest reference set: every efficient DMU that can carry weight
in some convex representation of a closest projection.

A single envelopment-form LP finds a representation whose support is
maximal.  Each efficient DMU gets a capped component (alpha, in [0, 1]) and
an uncapped one (beta >= 0); the target point gets the same pair, and the
whole system is homogeneous, so any convex representation can be scaled up
until every DMU that can participate has a strictly positive alpha.
Maximizing the alpha total therefore exposes the union of all supports, and
normalizing by the target's own aggregate recovers the maximal-support
intensity vector.  The box bounds on alpha are exactly the kind of
structure the bounded-variable simplex handles without extra rows.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .data import Dataset
from .efficiency import EfficientSet
from .errors import AnalysisError
from .projection import Projection
from .solver import LinearProgram, SolveStatus, SolverConfig, solve_lp

BORDERLINE_WEIGHT = 1e-9


@dataclass(frozen=True)
class MaxSupportSolution:
    """Optimal capped/uncapped component pairs; index t is the target's pair."""

    alpha: np.ndarray
    beta: np.ndarray
    objective: float


@dataclass(frozen=True)
class McrsResult:
    """Maximal closest reference set of one DMU.

    ``lambda_max`` is the maximal-support intensity vector aligned with
    ``columns`` (the efficient-set dataset indices); ``members`` the dataset
    indices with weight above the zero threshold; ``ucrs`` the (sample)
    unary reference set read off the final projection stage.
    """

    dmu: int
    columns: tuple[int, ...]
    lambda_max: np.ndarray
    members: tuple[int, ...]
    ucrs: tuple[int, ...]


def solve_max_support_lp(dataset: Dataset, j_e: EfficientSet, projection: Projection,
                         cfg: SolverConfig = SolverConfig()) -> MaxSupportSolution:
    """Maximize the number of efficient DMUs active in a representation of the
    projection's target point."""
    x = dataset.input_matrix()
    y = dataset.output_matrix()
    m, s = dataset.m, dataset.s
    t = j_e.size
    idx = list(j_e.indices)
    nv = 2 * (t + 1)  # [alpha (t+1), beta (t+1)]

    a = np.zeros((m + s + 1, nv))
    b = np.zeros(m + s + 1)
    cols_x = np.vstack([x[idx].T, y[idx].T, np.ones((1, t))])          # (m+s+1, t)
    target = np.concatenate([projection.target_inputs, projection.target_outputs, [1.0]])
    a[:, :t] = cols_x
    a[:, t] = -target
    a[:, t + 1:t + 1 + t] = cols_x
    a[:, 2 * t + 1] = -target

    c = np.zeros(nv)
    c[:t + 1] = 1.0
    lower = np.zeros(nv)
    upper = np.full(nv, np.inf)
    upper[:t + 1] = 1.0

    sol = solve_lp(LinearProgram("max", c, a, ("=",) * (m + s + 1), b, lower, upper), cfg)
    if sol.status is not SolveStatus.OPTIMAL:
        # zero is feasible and alpha is boxed, so anything else is a bug
        raise AnalysisError(f"support LP for DMU {dataset.dmus[projection.dmu].name!r} "
                            f"returned {sol.status.value}")
    return MaxSupportSolution(sol.x[:t + 1].copy(), sol.x[t + 1:].copy(), float(sol.objective))


def maximal_weights(sol: MaxSupportSolution, cfg: SolverConfig = SolverConfig()) -> np.ndarray:
    """Intensity vector with maximal support, scaled back to a convex combination."""
    t = sol.alpha.size - 1
    denom = float(sol.alpha[t] + sol.beta[t])
    if denom < 1.0 - cfg.feas_tol * 10:
        # any optimum can be rescaled so the target aggregate reaches 1
        raise AnalysisError(f"support LP target aggregate {denom} below 1")
    return (sol.alpha[:t] + sol.beta[:t]) / denom


def identify_mcrs(dataset: Dataset, j_e: EfficientSet, projection: Projection,
                  cfg: SolverConfig = SolverConfig()) -> McrsResult:
    """MCRS membership plus the maximal intensity weights behind it."""
    sol = solve_max_support_lp(dataset, j_e, projection, cfg)
    lam = maximal_weights(sol, cfg)

    members = []
    for k, j in enumerate(j_e.indices):
        if lam[k] > cfg.zero_tol:
            members.append(j)
        elif lam[k] > BORDERLINE_WEIGHT:
            warnings.warn(
                f"DMU {dataset.dmus[projection.dmu].name!r}: reference weight for "
                f"{dataset.dmus[j].name!r} is borderline ({lam[k]:.3e}); excluded from the MCRS",
                stacklevel=2)

    if projection.stages:
        final = projection.stages[-1].lambdas
        ucrs = tuple(j for k, j in enumerate(j_e.indices) if final[k] > cfg.zero_tol)
    else:
        ucrs = (projection.dmu,)  # efficient DMU: it represents itself
    return McrsResult(projection.dmu, j_e.indices, lam, tuple(members), ucrs)
