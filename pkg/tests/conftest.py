"""Shared fixtures: the two reference datasets, random generators, and
brute-force oracles used to cross-check the solver."""

from __future__ import annotations

import itertools

import numpy as np
import pytest

from dea_closest import (Dataset, Dmu, LinearProgram, SolverConfig, SolveStatus,
                         solve_lp)

EIGHT_DMU_CSV = """dmu,in:input,out:output
DMU1,1,2
DMU2,2,5
DMU3,3,6
DMU4,5,8
DMU5,8,8
DMU6,2,1
DMU7,3,3
DMU8,6,4
"""

FOUR_DMU_CSV = """dmu,in:input,out:output
A,2,2
B,3,5
C,6,6
D,4,4
"""


def make_dataset(x: np.ndarray, y: np.ndarray, names=None) -> Dataset:
    x = np.atleast_2d(np.asarray(x, dtype=float))
    y = np.atleast_2d(np.asarray(y, dtype=float))
    n = x.shape[0]
    names = names or [f"U{k + 1}" for k in range(n)]
    dmus = tuple(Dmu(names[k], tuple(x[k]), tuple(y[k])) for k in range(n))
    return Dataset(dmus,
                   tuple(f"x{i + 1}" for i in range(x.shape[1])),
                   tuple(f"y{r + 1}" for r in range(y.shape[1])))


@pytest.fixture(scope="session")
def eight_dmu() -> Dataset:
    """One input, one output; frontier is DMU1-DMU2-DMU4 with DMU3 on the
    second segment; DMU5..DMU8 inefficient."""
    return make_dataset(
        np.array([[1], [2], [3], [5], [8], [2], [3], [6]], dtype=float),
        np.array([[2], [5], [6], [8], [8], [1], [3], [4]], dtype=float),
        names=[f"DMU{k}" for k in range(1, 9)])


@pytest.fixture(scope="session")
def four_dmu() -> Dataset:
    """A, B, C efficient; D inefficient between the B-projections."""
    return make_dataset(
        np.array([[2], [3], [6], [4]], dtype=float),
        np.array([[2], [5], [6], [4]], dtype=float),
        names=["A", "B", "C", "D"])


@pytest.fixture(scope="session")
def cfg() -> SolverConfig:
    return SolverConfig()


def random_dataset(rng: np.random.Generator, max_n: int = 15, max_dim: int = 3) -> Dataset:
    n = int(rng.integers(4, max_n + 1))
    m = int(rng.integers(1, max_dim + 1))
    s = int(rng.integers(1, max_dim + 1))
    x = np.round(rng.uniform(1, 100, size=(n, m)), 3)
    y = np.round(rng.uniform(1, 100, size=(n, s)), 3)
    return make_dataset(x, y)


def random_box_lp(rng: np.random.Generator) -> LinearProgram:
    """Equality-constrained LP with finite box bounds; two thirds are feasible
    by construction, the rest get a random rhs."""
    n = int(rng.integers(3, 9))
    m = int(rng.integers(1, min(5, n - 1) + 1))
    a = np.round(rng.uniform(-3, 3, (m, n)), 2)
    lower = np.round(rng.uniform(-5, 0, n), 2)
    upper = lower + np.round(rng.uniform(0.5, 6, n), 2)
    if rng.integers(3) == 0:
        b = np.round(rng.uniform(-5, 5, m), 2)
    else:
        x0 = lower + rng.uniform(0, 1, n) * (upper - lower)
        b = a @ x0
    c = np.round(rng.uniform(-5, 5, n), 2)
    sense = "min" if rng.integers(2) else "max"
    return LinearProgram(sense, c, a, ("=",) * m, b, lower, upper)


def random_binary_lp(rng: np.random.Generator, max_binaries: int = 10) -> LinearProgram:
    k = int(rng.integers(2, max_binaries + 1))
    nc = int(rng.integers(0, 4))
    n = k + nc
    m = int(rng.integers(1, 4))
    a = np.round(rng.uniform(-4, 4, (m, n)), 2)
    lower = np.zeros(n)
    upper = np.ones(n)
    upper[k:] = np.round(rng.uniform(1, 8, nc), 2)
    rels = tuple(str(rng.choice(["<=", ">=", "="])) for _ in range(m))
    b = np.round(rng.uniform(-3, 5, m), 2)
    c = np.round(rng.uniform(-5, 5, n), 2)
    binary = np.zeros(n, dtype=bool)
    binary[:k] = True
    sense = "min" if rng.integers(2) else "max"
    return LinearProgram(sense, c, a, rels, b, lower, upper, binary)


def enumerate_lp_optimum(lp: LinearProgram, tol: float = 1e-7) -> float | None:
    """Optimal objective by enumerating every basic solution of an
    equality-form LP with finite bounds: pick the basic columns, park each
    nonbasic variable at one of its bounds, solve for the basics, keep the
    feasible ones.  None means infeasible."""
    a, b, c = lp.a, lp.b, lp.c
    assert all(rel == "=" for rel in lp.relations), "oracle needs equality rows"
    assert np.all(np.isfinite(lp.lower)) and np.all(np.isfinite(lp.upper))
    m, n = a.shape
    sign = 1.0 if lp.sense == "min" else -1.0
    best = None
    for basis in itertools.combinations(range(n), m):
        bmat = a[:, list(basis)]
        if abs(np.linalg.det(bmat)) < 1e-10:
            continue
        nonb = [j for j in range(n) if j not in basis]
        choices = [(lp.lower[j],) if lp.lower[j] == lp.upper[j]
                   else (lp.lower[j], lp.upper[j]) for j in nonb]
        for pick in itertools.product(*choices):
            xn = np.array(pick)
            xb = np.linalg.solve(bmat, b - a[:, nonb] @ xn)
            if np.any(xb < lp.lower[list(basis)] - tol):
                continue
            if np.any(xb > lp.upper[list(basis)] + tol):
                continue
            x = np.empty(n)
            x[list(basis)] = xb
            x[nonb] = xn
            v = sign * float(c @ x)
            best = v if best is None else min(best, v)
    return None if best is None else sign * best


def enumerate_milp_optimum(lp: LinearProgram, cfg: SolverConfig) -> float | None:
    """Optimal objective over every 0/1 assignment of the binary mask, each
    assignment evaluated with solve_lp.  None means no assignment is feasible."""
    bins = np.flatnonzero(lp.binary)
    sign = 1.0 if lp.sense == "min" else -1.0
    best = None
    for bits in itertools.product((0.0, 1.0), repeat=len(bins)):
        lo = lp.lower.copy()
        up = lp.upper.copy()
        lo[bins] = bits
        up[bins] = bits
        sub = LinearProgram(lp.sense, lp.c, lp.a, lp.relations, lp.b, lo, up)
        sol = solve_lp(sub, cfg)
        if sol.status is SolveStatus.OPTIMAL:
            v = sign * sol.objective
            best = v if best is None else min(best, v)
    return None if best is None else sign * best
