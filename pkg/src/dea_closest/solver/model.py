"""Problem and solution containers for the LP/MILP solver."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

RELATIONS = ("=", "<=", ">=")


class SolveStatus(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"
    ITERATION_LIMIT = "iteration_limit"
    NODE_LIMIT = "node_limit"


@dataclass(frozen=True)
class SolverConfig:
    """Tolerances and limits shared by every solve in the pipeline.

    Attributes
    ----------
    feas_tol : constraint/bound satisfaction tolerance.
    pivot_tol : reduced-cost and pivot-element threshold in the simplex.
    int_tol : how far a binary may sit from {0, 1} and still count as integral.
    zero_tol : reporting threshold; values below it are treated as zero when
        classifying efficiency, reference-set membership, and returns to scale.
    big_m : the constant linking intensity weights and hyperplane deviations
        through the indicator binaries in the closest-projection stages.
    max_iterations : simplex pivot budget per LP solve.
    max_nodes : branch-and-bound node budget per MILP solve.
    degen_limit : consecutive degenerate pivots tolerated before the pricing
        rule switches from Dantzig to Bland (anti-cycling).
    """

    feas_tol: float = 1e-9
    pivot_tol: float = 1e-9
    int_tol: float = 1e-6
    zero_tol: float = 1e-7
    big_m: float = 1e5
    max_iterations: int = 20_000
    max_nodes: int = 1_000_000
    degen_limit: int = 50

    def __post_init__(self):
        for name in ("feas_tol", "pivot_tol", "int_tol", "zero_tol"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be strictly positive")
        if self.big_m <= 1:
            raise ValueError("big_m must exceed 1")
        if self.max_iterations <= 0 or self.max_nodes <= 0:
            raise ValueError("iteration and node limits must be positive")


def _as_float_array(value, ndim: int) -> np.ndarray:
    arr = np.asarray(value, dtype=float)
    if arr.ndim != ndim:
        raise ValueError(f"expected a {ndim}-d array, got shape {arr.shape}")
    return arr


@dataclass
class LinearProgram:
    """Dense linear program with per-variable bounds and optional binaries.

    ``a @ x  (relations)  b`` row-wise, ``lower <= x <= upper``, and variables
    flagged in ``binary`` additionally restricted to {0, 1}.  Bounds may be
    ``-inf``/``+inf``; a pair with ``lower == upper`` pins the variable.
    """

    sense: str
    c: np.ndarray
    a: np.ndarray
    relations: tuple[str, ...]
    b: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    binary: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.sense not in ("min", "max"):
            raise ValueError(f"sense must be 'min' or 'max', got {self.sense!r}")
        self.c = _as_float_array(self.c, 1)
        self.a = _as_float_array(self.a, 2)
        self.b = _as_float_array(self.b, 1)
        self.lower = _as_float_array(self.lower, 1)
        self.upper = _as_float_array(self.upper, 1)
        n = self.c.size
        rows = self.a.shape[0]
        if self.a.shape[1] != n:
            raise ValueError(f"matrix has {self.a.shape[1]} columns, objective has {n}")
        if self.b.size != rows:
            raise ValueError(f"matrix has {rows} rows, rhs has {self.b.size}")
        if len(self.relations) != rows:
            raise ValueError(f"matrix has {rows} rows, {len(self.relations)} relations given")
        for rel in self.relations:
            if rel not in RELATIONS:
                raise ValueError(f"unknown row relation {rel!r}")
        self.relations = tuple(self.relations)
        if self.lower.size != n or self.upper.size != n:
            raise ValueError("bound vectors must match the number of variables")
        if np.any(self.lower > self.upper):
            bad = int(np.argmax(self.lower > self.upper))
            raise ValueError(f"variable {bad}: lower bound exceeds upper bound")
        if self.binary is None:
            self.binary = np.zeros(n, dtype=bool)
        else:
            self.binary = np.asarray(self.binary, dtype=bool)
            if self.binary.size != n:
                raise ValueError("binary mask must match the number of variables")
        if np.any(self.lower[self.binary] < -0.0) or np.any(self.upper[self.binary] > 1.0):
            raise ValueError("binary variables must have bounds within [0, 1]")

    @property
    def n_vars(self) -> int:
        return self.c.size

    @property
    def n_rows(self) -> int:
        return self.a.shape[0]


@dataclass
class Solution:
    """Result of an LP or MILP solve.

    ``x`` holds structural variable values only when the status is OPTIMAL
    (or NODE_LIMIT with an incumbent), otherwise None.  ``basis`` lists the
    columns of the internal standardized system that were basic at the final
    iterate; it is diagnostic output used by the optimality-certificate
    checks and is None for MILP solves.
    """

    status: SolveStatus
    objective: float
    x: np.ndarray | None
    iterations: int = 0
    nodes: int = 0
    basis: np.ndarray | None = None
