"""Exhaustive branch and bound for programs with binary variables.

Branching fixes one fractional binary to 0/1 by pinning its bounds on the
shared standardized system (the matrix is built once per MILP).  Search is
depth-first, diving first into the half the relaxation already leans
toward, and prunes on infeasibility and on relaxation objectives that
cannot beat the incumbent.  With the deterministic simplex underneath,
identical programs always produce identical solutions.
"""

from __future__ import annotations

import numpy as np

from .model import LinearProgram, Solution, SolveStatus, SolverConfig
from .simplex import solve_lp, solve_standardized, standardize


def _warm_objective(lp: LinearProgram, std, x: np.ndarray, cfg: SolverConfig) -> float | None:
    """Min-sense objective of a caller-supplied feasible point, or None if the
    point fails a feasibility screen (then the hint is silently dropped)."""
    if x is None or len(x) != lp.n_vars:
        return None
    tol = 1e-6
    if np.any(x < lp.lower - tol) or np.any(x > lp.upper + tol):
        return None
    lhs = lp.a @ x
    for i, rel in enumerate(lp.relations):
        r = lhs[i] - lp.b[i]
        if rel == "=" and abs(r) > tol:
            return None
        if rel == "<=" and r > tol:
            return None
        if rel == ">=" and r < -tol:
            return None
    vals = x[lp.binary]
    if vals.size and np.abs(vals - np.round(vals)).max() > cfg.int_tol:
        return None
    return float(std.c[: lp.n_vars] @ x)


def solve_milp(lp: LinearProgram, cfg: SolverConfig = SolverConfig(),
               warm_start: np.ndarray | None = None) -> Solution:
    """Solve a mixed binary-linear program to proven optimality.

    ``warm_start`` may carry a known integral-feasible point (typically the
    previous stage of a lexicographic sequence); it only seeds the incumbent
    and never affects which solutions are optimal.

    An unbounded relaxation is reported as UNBOUNDED; exhausting
    ``cfg.max_nodes`` returns NODE_LIMIT with the best incumbent found so
    far, if any.
    """
    if not lp.binary.any():
        return solve_lp(lp, cfg)

    std = standardize(lp)
    bin_idx = np.flatnonzero(lp.binary)

    inc_x: np.ndarray | None = None
    inc_obj = np.inf
    warm = _warm_objective(lp, std, warm_start, cfg)
    if warm is not None:
        inc_x = np.asarray(warm_start, dtype=float).copy()
        inc_obj = warm

    stack = [(std.lower.copy(), std.upper.copy())]
    nodes = 0
    total_iters = 0
    hit_node_limit = False

    while stack:
        if nodes >= cfg.max_nodes:
            hit_node_limit = True
            break
        lo, up = stack.pop()
        status, x, obj, iters, _ = solve_standardized(std, cfg, lo, up)
        nodes += 1
        total_iters += iters

        if status is SolveStatus.INFEASIBLE:
            continue
        if status is SolveStatus.UNBOUNDED:
            return Solution(status, -std.sense_sign * np.inf, None, total_iters, nodes)
        if status is SolveStatus.ITERATION_LIMIT:
            return Solution(status, np.nan, None, total_iters, nodes)
        if obj >= inc_obj - 1e-9 * max(1.0, abs(inc_obj)):
            continue

        vals = x[bin_idx]
        frac = np.abs(vals - np.round(vals))
        if frac.size == 0 or frac.max() <= cfg.int_tol:
            inc_x, inc_obj = x, obj
            continue

        k = int(np.argmin(np.abs(vals[frac > cfg.int_tol] - 0.5)))
        k = int(np.flatnonzero(frac > cfg.int_tol)[k])
        j = int(bin_idx[k])
        preferred = 1.0 if vals[k] >= 0.5 else 0.0
        for value in (1.0 - preferred, preferred):  # preferred branch pops first
            lo_c, up_c = lo.copy(), up.copy()
            lo_c[j] = up_c[j] = value
            stack.append((lo_c, up_c))

    if hit_node_limit:
        if inc_x is not None:
            return Solution(SolveStatus.NODE_LIMIT, std.sense_sign * inc_obj,
                            inc_x[: lp.n_vars].copy(), total_iters, nodes)
        return Solution(SolveStatus.NODE_LIMIT, np.nan, None, total_iters, nodes)
    if inc_x is None:
        return Solution(SolveStatus.INFEASIBLE, np.nan, None, total_iters, nodes)
    return Solution(SolveStatus.OPTIMAL, std.sense_sign * inc_obj,
                    inc_x[: lp.n_vars].copy(), total_iters, nodes)
