"""Unique closest efficient targets via lexicographic slack minimization.

One MILP per slack, in priority order: minimize the current slack while
every previously optimized slack stays pinned at its optimum.  Feasible
points are exactly the slack vectors that land the DMU on the strongly
efficient frontier: intensity weights over the efficient DMUs describe the
target, a supporting hyperplane with multipliers >= 1 certifies strong
efficiency, and binaries force each efficient DMU to carry weight only if
it lies on that hyperplane (deviation zero).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .data import Dataset, PriorityRanking
from .efficiency import EfficientSet
from .errors import AnalysisError, BigMWarning, SolverLimitError
from .solver import LinearProgram, SolveStatus, SolverConfig, solve_lp, solve_milp

# Pin band for slacks fixed by earlier stages.  Wide enough to absorb the
# solver noise carried between stages, narrow enough that later stages cannot
# visibly trade a pinned slack against their own objective.
LEX_PIN_TOL = 1e-9


@dataclass(frozen=True)
class StageSolution:
    """Snapshot of one lexicographic stage.

    ``slack_index`` is the slack minimized at this stage (0..m-1 inputs,
    m..m+s-1 outputs) and ``value`` its optimum.  The remaining fields are
    the full variable snapshot: intensities over the efficient set, all
    slacks, hyperplane multipliers and intercept, per-DMU deviations below
    the hyperplane, and the indicator binaries.
    """

    stage: int
    slack_index: int
    value: float
    lambdas: np.ndarray
    slacks: np.ndarray
    weights: np.ndarray
    intercept: float
    deviations: np.ndarray
    indicators: np.ndarray


@dataclass(frozen=True)
class Projection:
    """Closest efficient target of one DMU with its stage audit trail."""

    dmu: int
    target_inputs: np.ndarray
    target_outputs: np.ndarray
    slacks: np.ndarray
    stages: tuple[StageSolution, ...]
    priority: PriorityRanking


def build_stage_program(dataset: Dataset, j_e: EfficientSet, o: int,
                        pinned: list[tuple[int, float]], target: int,
                        cfg: SolverConfig = SolverConfig(),
                        lex_pin_tol: float = LEX_PIN_TOL) -> LinearProgram:
    """MILP for one stage: minimize slack ``target`` with ``pinned`` slacks fixed.

    Variables: [lambda (t), slacks (m+s), multipliers (m+s), intercept,
    deviations (t), indicators (t)].  The lambda/indicator exclusivity uses
    the tight bound lambda_k + I_k <= 1 (the convexity row already caps every
    lambda at 1); the deviation/indicator link keeps the configured big-M.
    """
    pinned_idx = {idx for idx, _ in pinned}
    if target in pinned_idx:
        raise ValueError("stage target is already pinned")
    x = dataset.input_matrix()
    y = dataset.output_matrix()
    m, s = dataset.m, dataset.s
    t = j_e.size
    idx = list(j_e.indices)
    big_m = cfg.big_m

    n_slack = m + s
    # column offsets
    c_lam, c_s, c_w, c_w0, c_d, c_i = 0, t, t + n_slack, t + 2 * n_slack, t + 2 * n_slack + 1, t + 2 * n_slack + 1 + t
    nv = c_i + t

    rows = m + s + 1 + 3 * t
    a = np.zeros((rows, nv))
    b = np.zeros(rows)
    rel: list[str] = []

    r = 0
    for i in range(m):  # sum lambda x + s_i = x_o
        a[r, c_lam:c_lam + t] = x[idx, i]
        a[r, c_s + i] = 1.0
        b[r] = x[o, i]
        rel.append("=")
        r += 1
    for j in range(s):  # sum lambda y - s_out = y_o
        a[r, c_lam:c_lam + t] = y[idx, j]
        a[r, c_s + m + j] = -1.0
        b[r] = y[o, j]
        rel.append("=")
        r += 1
    a[r, c_lam:c_lam + t] = 1.0  # convexity
    b[r] = 1.0
    rel.append("=")
    r += 1
    for k in range(t):  # supporting hyperplane with deviation d_k for each efficient DMU
        a[r, c_w:c_w + m] = -x[idx[k]]
        a[r, c_w + m:c_w + m + s] = y[idx[k]]
        a[r, c_w0] = -1.0
        a[r, c_d + k] = 1.0
        rel.append("=")
        r += 1
    for k in range(t):  # d_k <= M I_k
        a[r, c_d + k] = 1.0
        a[r, c_i + k] = -big_m
        rel.append("<=")
        r += 1
    for k in range(t):  # lambda_k and I_k mutually exclusive
        a[r, c_lam + k] = 1.0
        a[r, c_i + k] = 1.0
        b[r] = 1.0
        rel.append("<=")
        r += 1

    lower = np.zeros(nv)
    upper = np.full(nv, np.inf)
    upper[c_lam:c_lam + t] = 1.0
    lower[c_w:c_w + n_slack] = 1.0
    lower[c_w0] = -np.inf
    upper[c_i:c_i + t] = 1.0
    for slack_idx, value in pinned:
        lower[c_s + slack_idx] = value
        upper[c_s + slack_idx] = value + lex_pin_tol

    c = np.zeros(nv)
    c[c_s + target] = 1.0
    binary = np.zeros(nv, dtype=bool)
    binary[c_i:c_i + t] = True
    return LinearProgram("min", c, a, tuple(rel), b, lower, upper, binary)


def _check_big_m(deviations: np.ndarray, big_m: float, dmu_name: str, stage: int) -> bool:
    """True when some deviation crowds the big-M cap (M likely too small)."""
    near = deviations >= big_m * (1.0 - 1e-3)
    if near.any():
        warnings.warn(
            f"DMU {dmu_name!r} stage {stage}: deviation within 0.1% of big-M "
            f"({big_m:g}); increase big_m to avoid a distorted projection",
            BigMWarning, stacklevel=3)
        return True
    return False


def _polish_stage(lp: LinearProgram, x: np.ndarray, t: int, n_slack: int,
                  cfg: SolverConfig) -> np.ndarray:
    """Re-point the stage solution to minimal total deviation.

    The stage objective leaves the hyperplane side of the solution free to
    land anywhere on the optimal face, including vertices where deviations
    sit at the big-M cap for no reason.  Freezing the slacks and indicators
    of the solved point and minimizing the deviation total picks a canonical
    representative, so the big-M hygiene check only fires when the cap is
    genuinely binding.  Falls back to the raw point if the polish LP fails.
    """
    c_s = t
    c_d = t + 2 * n_slack + 1
    c_i = c_d + t
    lower = lp.lower.copy()
    upper = lp.upper.copy()
    slacks = np.maximum(x[c_s:c_s + n_slack], 0.0)
    lower[c_s:c_s + n_slack] = slacks
    upper[c_s:c_s + n_slack] = slacks
    indicators = np.round(x[c_i:c_i + t])
    lower[c_i:c_i + t] = indicators
    upper[c_i:c_i + t] = indicators
    c = np.zeros(lp.n_vars)
    c[c_d:c_d + t] = 1.0
    polish = LinearProgram("min", c, lp.a, lp.relations, lp.b, lower, upper)
    sol = solve_lp(polish, cfg)
    if sol.status is not SolveStatus.OPTIMAL:
        return x
    return sol.x


def closest_projection(dataset: Dataset, j_e: EfficientSet, o: int,
                       priority: PriorityRanking,
                       cfg: SolverConfig = SolverConfig(),
                       lex_pin_tol: float = LEX_PIN_TOL) -> Projection:
    """Lexicographically minimal slack vector and the target it induces.

    The target is unique: whichever optimal intensities/multipliers each
    stage solver happens to report, the slack optima are the same, and the
    target is the DMU moved by exactly those slacks (inputs down, outputs
    up).  Efficient DMUs short-circuit to a zero-slack projection.
    """
    m, s = dataset.m, dataset.s
    if priority.m != m or priority.s != s:
        raise ValueError("priority ranking dimensions do not match the dataset")
    name = dataset.dmus[o].name
    xo = np.array(dataset.dmus[o].inputs)
    yo = np.array(dataset.dmus[o].outputs)

    if o in j_e:
        return Projection(o, xo, yo, np.zeros(m + s), (), priority)

    pinned: list[tuple[int, float]] = []
    stages: list[StageSolution] = []
    t = j_e.size
    n_slack = m + s
    warm: np.ndarray | None = None

    for stage_no, slack_idx in enumerate(priority.order, start=1):
        lp = build_stage_program(dataset, j_e, o, pinned, slack_idx, cfg, lex_pin_tol)
        sol = solve_milp(lp, cfg, warm_start=warm)
        if sol.status in (SolveStatus.NODE_LIMIT, SolveStatus.ITERATION_LIMIT):
            raise SolverLimitError(
                f"projection of DMU {name!r} stage {stage_no} "
                f"(slack {slack_idx}): {sol.status.value}")
        if sol.status is not SolveStatus.OPTIMAL:
            # the frontier dominates every DMU, so each stage is feasible
            raise AnalysisError(
                f"projection of DMU {name!r} stage {stage_no} returned {sol.status.value}")

        c_s = t
        c_w = t + n_slack
        c_w0 = t + 2 * n_slack
        c_d = c_w0 + 1
        c_i = c_d + t
        value = max(float(sol.x[c_s + slack_idx]), 0.0)
        polished = _polish_stage(lp, sol.x, t, n_slack, cfg)
        snapshot = StageSolution(
            stage=stage_no,
            slack_index=slack_idx,
            value=value,
            lambdas=polished[:t].copy(),
            slacks=np.maximum(polished[c_s:c_s + n_slack], 0.0),
            weights=polished[c_w:c_w + n_slack].copy(),
            intercept=float(polished[c_w0]),
            deviations=polished[c_d:c_d + t].copy(),
            indicators=polished[c_i:c_i + t].copy(),
        )
        _check_big_m(snapshot.deviations, cfg.big_m, name, stage_no)
        stages.append(snapshot)
        pinned.append((slack_idx, value))
        warm = sol.x

    # the final stage's joint solution is the projection: its slack vector
    # satisfies every pin and its intensities reproduce the target exactly
    s_star = stages[-1].slacks.copy()
    return Projection(o, xo - s_star[:m], yo + s_star[m:], s_star, tuple(stages), priority)
