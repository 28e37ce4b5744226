import numpy as np
import pytest

from dea_closest import LinearProgram, SolverConfig, SolveStatus, solve_lp, solve_milp

from conftest import enumerate_milp_optimum, random_binary_lp


def knapsack() -> LinearProgram:
    # max 3a + 4b + 5c s.t. 2a + 3b + 4c <= 5, binaries; optimum 7 at (1,1,0)
    return LinearProgram("max", [3.0, 4.0, 5.0], [[2.0, 3.0, 4.0]], ("<=",), [5.0],
                         [0.0] * 3, [1.0] * 3, binary=[True] * 3)


def test_knapsack_equals_enumeration(cfg):
    lp = knapsack()
    sol = solve_milp(lp, cfg)
    assert sol.status is SolveStatus.OPTIMAL
    assert sol.objective == pytest.approx(7.0)
    assert sol.objective == pytest.approx(enumerate_milp_optimum(lp, cfg))
    assert sol.x[:2] == pytest.approx([1.0, 1.0], abs=1e-6)
    assert sol.x[2] == pytest.approx(0.0, abs=1e-6)


def test_integral_relaxation_short_circuit(cfg):
    # relaxation optimum already lands on a 0/1 point
    lp = LinearProgram("min", [1.0, -1.0], [[1.0, 1.0]], ("<=",), [1.0],
                       [0.0, 0.0], [1.0, 1.0], binary=[True, True])
    milp = solve_milp(lp, cfg)
    relaxed = solve_lp(LinearProgram("min", lp.c, lp.a, lp.relations, lp.b,
                                     lp.lower, lp.upper), cfg)
    assert milp.status is SolveStatus.OPTIMAL
    assert milp.objective == pytest.approx(relaxed.objective)
    assert milp.nodes == 1


def test_empty_binary_mask_delegates(cfg):
    lp = LinearProgram("min", [1.0, 0.0], [[1.0, 1.0]], ("=",), [1.0],
                       [0.0, 0.0], [1.0, 1.0])
    sol = solve_milp(lp, cfg)
    assert sol.status is SolveStatus.OPTIMAL
    assert sol.objective == pytest.approx(0.0, abs=1e-9)
    assert sol.nodes == 0


def test_infeasible_milp(cfg):
    # a + b = 0.5 has no 0/1 solution
    lp = LinearProgram("min", [1.0, 1.0], [[1.0, 1.0]], ("=",), [0.5],
                       [0.0, 0.0], [1.0, 1.0], binary=[True, True])
    assert solve_milp(lp, cfg).status is SolveStatus.INFEASIBLE


def test_unbounded_root_reported(cfg):
    lp = LinearProgram("min", [-1.0, 0.0], [[0.0, 1.0]], ("<=",), [1.0],
                       [0.0, 0.0], [np.inf, 1.0], binary=[False, True])
    sol = solve_milp(lp, cfg)
    assert sol.status is SolveStatus.UNBOUNDED
    assert sol.objective == -np.inf


def test_node_limit(cfg):
    # force branching, then stop after the root node
    lp = LinearProgram("min", [1.0, 1.0, 1.0],
                       [[2.0, 2.0, 2.0]], (">=",), [3.0],
                       [0.0] * 3, [1.0] * 3, binary=[True] * 3)
    sol = solve_milp(lp, SolverConfig(max_nodes=1))
    assert sol.status is SolveStatus.NODE_LIMIT


def test_warm_start_accepted_and_harmless(cfg):
    lp = knapsack()
    plain = solve_milp(lp, cfg)
    warm = solve_milp(lp, cfg, warm_start=np.array([1.0, 1.0, 0.0]))
    assert warm.status is SolveStatus.OPTIMAL
    assert warm.objective == pytest.approx(plain.objective)
    # infeasible hints are dropped, not trusted
    bogus = solve_milp(lp, cfg, warm_start=np.array([1.0, 1.0, 1.0]))
    assert bogus.objective == pytest.approx(plain.objective)


def test_matches_enumeration_on_random_milps(cfg):
    rng = np.random.default_rng(31415)
    feasible = 0
    for _ in range(25):
        lp = random_binary_lp(rng, max_binaries=8)
        sol = solve_milp(lp, cfg)
        expected = enumerate_milp_optimum(lp, cfg)
        if expected is None:
            assert sol.status is SolveStatus.INFEASIBLE
        else:
            feasible += 1
            assert sol.status is SolveStatus.OPTIMAL
            assert sol.objective == pytest.approx(expected, abs=1e-7)
            frac = np.abs(sol.x[lp.binary] - np.round(sol.x[lp.binary]))
            assert frac.max(initial=0.0) <= cfg.int_tol
    assert feasible > 8


def test_twelve_binaries_equal_enumeration(cfg):
    rng = np.random.default_rng(1212)
    lp = None
    while lp is None or lp.binary.sum() != 12:
        lp = random_binary_lp(rng, max_binaries=12)
    sol = solve_milp(lp, cfg)
    expected = enumerate_milp_optimum(lp, cfg)
    if expected is None:
        assert sol.status is SolveStatus.INFEASIBLE
    else:
        assert sol.status is SolveStatus.OPTIMAL
        assert sol.objective == pytest.approx(expected, abs=1e-7)


def test_determinism(cfg):
    rng = np.random.default_rng(161)
    for _ in range(8):
        lp = random_binary_lp(rng, max_binaries=6)
        a = solve_milp(lp, cfg)
        b = solve_milp(lp, cfg)
        assert a.status is b.status
        assert a.nodes == b.nodes
        if a.status is SolveStatus.OPTIMAL:
            assert np.array_equal(a.x, b.x)
