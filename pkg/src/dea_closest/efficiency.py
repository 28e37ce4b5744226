"""Two-phase BCC efficiency evaluation under variable returns to scale.

Phase 1 shrinks the radial input factor theta as far as the technology
allows; phase 2 pins theta at that optimum and maximizes the total slack.
A DMU is efficient exactly when theta is 1 and every slack is zero, which
realizes the non-Archimedean objective without ever instantiating an
epsilon coefficient.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import Dataset
from .errors import AnalysisError, SolverLimitError
from .solver import LinearProgram, SolveStatus, SolverConfig, solve_lp


@dataclass(frozen=True)
class EfficiencyResult:
    """BCC score and max-slack completion for one DMU.

    ``slacks`` holds the m input slacks followed by the s output slacks.
    ``lambdas`` is the intensity vector over the full dataset from the
    phase-2 solution.
    """

    dmu: int
    theta: float
    slacks: np.ndarray
    lambdas: np.ndarray
    is_efficient: bool


@dataclass(frozen=True)
class EfficientSet:
    """Ordered index set of the efficient DMUs (dataset order)."""

    indices: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.indices)

    def __contains__(self, o: int) -> bool:
        return o in self.indices


def _bcc_program(dataset: Dataset, o: int, theta_bounds: tuple[float, float],
                 phase2: bool) -> LinearProgram:
    """Envelopment system over variables [theta, lambda (n), s_in (m), s_out (s)].

    Input rows:   sum_j lambda_j x_ij + s_i - theta * x_io = 0
    Output rows:  sum_j lambda_j y_rj - s_{m+r} = y_ro
    Convexity:    sum_j lambda_j = 1
    """
    x = dataset.input_matrix()
    y = dataset.output_matrix()
    n, m, s = dataset.n, dataset.m, dataset.s
    nv = 1 + n + m + s

    a = np.zeros((m + s + 1, nv))
    b = np.zeros(m + s + 1)
    for i in range(m):
        a[i, 0] = -x[o, i]
        a[i, 1:1 + n] = x[:, i]
        a[i, 1 + n + i] = 1.0
    for r in range(s):
        a[m + r, 1:1 + n] = y[:, r]
        a[m + r, 1 + n + m + r] = -1.0
        b[m + r] = y[o, r]
    a[m + s, 1:1 + n] = 1.0
    b[m + s] = 1.0

    c = np.zeros(nv)
    if phase2:
        c[1 + n:] = 1.0
        sense = "max"
    else:
        c[0] = 1.0
        sense = "min"

    lower = np.zeros(nv)
    upper = np.full(nv, np.inf)
    lower[0], upper[0] = theta_bounds
    return LinearProgram(sense, c, a, ("=",) * (m + s + 1), b, lower, upper)


def evaluate_bcc(dataset: Dataset, o: int, cfg: SolverConfig = SolverConfig()) -> EfficiencyResult:
    """Radial score, max-slack completion, and efficiency flag for DMU ``o``."""
    name = dataset.dmus[o].name
    n, m, s = dataset.n, dataset.m, dataset.s

    phase1 = solve_lp(_bcc_program(dataset, o, (0.0, np.inf), phase2=False), cfg)
    if phase1.status is SolveStatus.ITERATION_LIMIT:
        raise SolverLimitError(f"BCC phase 1 for DMU {name!r} hit the iteration limit")
    if phase1.status is not SolveStatus.OPTIMAL:
        # lambda_o = 1, theta = 1 is always feasible, so this is a solver bug
        raise AnalysisError(f"BCC phase 1 for DMU {name!r} returned {phase1.status.value}")
    theta = float(phase1.objective)

    phase2 = solve_lp(_bcc_program(dataset, o, (theta, theta), phase2=True), cfg)
    if phase2.status is SolveStatus.ITERATION_LIMIT:
        raise SolverLimitError(f"BCC phase 2 for DMU {name!r} hit the iteration limit")
    if phase2.status is not SolveStatus.OPTIMAL:
        raise AnalysisError(f"BCC phase 2 for DMU {name!r} returned {phase2.status.value}")

    slacks = phase2.x[1 + n: 1 + n + m + s].copy()
    lambdas = phase2.x[1: 1 + n].copy()
    efficient = theta >= 1.0 - cfg.zero_tol and float(np.abs(slacks).max()) <= cfg.zero_tol
    return EfficiencyResult(o, theta, slacks, lambdas, efficient)


def evaluate_all(dataset: Dataset, cfg: SolverConfig = SolverConfig()) -> list[EfficiencyResult]:
    return [evaluate_bcc(dataset, o, cfg) for o in range(dataset.n)]


def efficient_set(dataset: Dataset, cfg: SolverConfig = SolverConfig()) -> EfficientSet:
    """Indices of every efficient DMU, including non-extreme frontier members."""
    results = evaluate_all(dataset, cfg)
    return EfficientSet(tuple(r.dmu for r in results if r.is_efficient))


def multiplier_score(dataset: Dataset, o: int, cfg: SolverConfig = SolverConfig()) -> float:
    """Radial score from the multiplier (dual) side; internal cross-check only.

    max  sum_r w_out_r y_ro - w0
    s.t. sum_i w_in_i x_io = 1
         sum_r w_out_r y_rj - sum_i w_in_i x_ij - w0 <= 0   for every j
         w >= 0, w0 free
    """
    x = dataset.input_matrix()
    y = dataset.output_matrix()
    n, m, s = dataset.n, dataset.m, dataset.s
    nv = m + s + 1  # [w_in, w_out, w0]

    a = np.zeros((1 + n, nv))
    b = np.zeros(1 + n)
    rel = ["="] + ["<="] * n
    a[0, :m] = x[o]
    b[0] = 1.0
    for j in range(n):
        a[1 + j, :m] = -x[j]
        a[1 + j, m:m + s] = y[j]
        a[1 + j, m + s] = -1.0

    c = np.zeros(nv)
    c[m:m + s] = y[o]
    c[m + s] = -1.0
    lower = np.zeros(nv)
    lower[m + s] = -np.inf
    upper = np.full(nv, np.inf)

    sol = solve_lp(LinearProgram("max", c, a, tuple(rel), b, lower, upper), cfg)
    if sol.status is not SolveStatus.OPTIMAL:
        raise AnalysisError(f"multiplier model for DMU {dataset.dmus[o].name!r} "
                            f"returned {sol.status.value}")
    return float(sol.objective)
