from __future__ import annotations

import numpy as np
import pytest

from relstate import (
    EffectiveRateUndefined,
    cost,
    effective_rate,
    gen_complete,
    gen_star,
    gen_truth,
    measure,
    mse,
    perf_report,
    rho_star,
)
from relstate.estimator import SchemeConfig, Trajectory, centralized_solve, matrix_iterate
from relstate.graph import from_edge_list

from randnets import random_connected_graph, random_connected_nonbipartite


def _synthetic(ref: np.ndarray, errors: list[np.ndarray], rho: float = 0.0) -> Trajectory:
    states = np.vstack([ref + e for e in errors])
    return Trajectory(states=states, rho=rho, centralized_ref=ref.copy())


# ---------------------------------------------------------------------------
# cost
# ---------------------------------------------------------------------------

def test_cost_zero_at_consistent_truth():
    g = gen_complete(5)
    truth = gen_truth(5)
    ms = measure(g, truth, 0.0, seed=1)
    assert cost(g, ms, truth.values) == 0.0


def test_cost_single_edge_by_hand():
    g = from_edge_list("0 1")
    ms = measure(g, gen_truth(2), 0.0, seed=1)
    # both ordered residuals are (0 - 0 +-1)^2 = 1; half their sum is 1
    assert cost(g, ms, (0.0, 0.0)) == 1.0


def test_cost_minimal_at_centralized_solution():
    rng = np.random.default_rng(3)
    g = random_connected_graph(rng, 5, 12)
    ms = measure(g, gen_truth(g.n), 0.1, seed=8)
    x_star = centralized_solve(g, np.asarray(ms.aggregated))
    base = cost(g, ms, x_star)
    for _ in range(1000):
        delta = rng.normal(size=g.n)
        delta *= rng.uniform(0, 1) / max(1.0, np.linalg.norm(delta))
        assert cost(g, ms, x_star + delta) >= base - 1e-9


def test_cost_validates_dimensions():
    g = gen_complete(3)
    ms = measure(g, gen_truth(3), 0.1, seed=1)
    with pytest.raises(ValueError):
        cost(g, ms, (0.0, 1.0))


# ---------------------------------------------------------------------------
# effective rate
# ---------------------------------------------------------------------------

@pytest.mark.parametrize("factor", [0.1, 0.5, 0.9])
def test_effective_rate_exact_on_geometric_series(factor):
    # zero reference: states carry the error exactly, no cancellation noise
    ref = np.zeros(4)
    direction = np.array([0.0, 1.0, -1.0, 2.0])
    traj = _synthetic(ref, [factor**k * direction for k in range(9)])
    assert effective_rate(traj, k_neg=2) == pytest.approx(factor, abs=1e-12)


def test_effective_rate_constant_error_is_one():
    ref = np.zeros(3)
    traj = _synthetic(ref, [np.array([0.0, 1.0, 2.0])] * 9)
    assert effective_rate(traj, k_neg=2) == 1.0


def test_effective_rate_averages_the_exact_window():
    # 20 rounds, k_neg = 2: ratios at k = 2..17, sixteen of them. All error
    # norms equal except e(18) = 0.25 e(17), so only the last ratio differs.
    ref = np.zeros(2)
    direction = np.array([0.0, 1.0])
    errors = [direction.copy() for _ in range(21)]
    for k in range(18, 21):
        errors[k] = 0.25 * direction
    traj = _synthetic(ref, errors)
    assert effective_rate(traj, k_neg=2) == pytest.approx((15 + 0.25) / 16, abs=1e-12)


def test_effective_rate_requires_enough_rounds():
    ref = np.zeros(2)
    traj = _synthetic(ref, [np.array([0.0, 1.0])] * 5)
    with pytest.raises(ValueError, match="rounds"):
        effective_rate(traj, k_neg=2)


def test_effective_rate_undefined_on_exact_convergence():
    ref = np.array([0.0, 1.0, 2.0])
    traj = _synthetic(ref, [np.zeros(3)] * 9)
    with pytest.raises(EffectiveRateUndefined, match="converged"):
        effective_rate(traj, k_neg=2)


# ---------------------------------------------------------------------------
# mse
# ---------------------------------------------------------------------------

def test_mse_ignores_constant_shift():
    ref = np.array([0.0, 1.0, 2.0])
    traj = _synthetic(ref, [np.zeros(3), np.full(3, 7.5)])
    assert mse(traj) == 0.0


def test_mse_hand_value():
    ref = np.zeros(2)
    traj = _synthetic(ref, [np.zeros(2), np.array([0.0, 0.2])])
    assert mse(traj) == pytest.approx(0.02, abs=1e-15)


def test_mse_complete_graph_superlinear():
    g = gen_complete(36)
    ms = measure(g, gen_truth(36), 0.1, seed=5)
    traj = matrix_iterate(g, ms, SchemeConfig(rho=2.0, rounds=20))
    assert mse(traj) < 1e-12


# ---------------------------------------------------------------------------
# report assembly
# ---------------------------------------------------------------------------

def test_perf_report_fields_and_cost_series():
    g = gen_star(8)
    ms = measure(g, gen_truth(8), 0.1, seed=2)
    plan = rho_star(g)
    traj = matrix_iterate(g, ms, SchemeConfig(rho=plan.rho_star, rounds=20))
    report = perf_report(g, ms, traj)
    assert report.k_bar == 20 and report.k_neg == 2
    assert len(report.cost_series) == 21
    assert report.r_e is not None and 0.0 < report.r_e < 1.0
    assert report.r_e_reason is None
    assert report.cost_series[0] == cost(g, ms, traj.states[0])
    assert report.to_dict()["mse"] == report.mse


def test_perf_report_records_undefined_rate_with_reason():
    g = gen_complete(3)
    ms = measure(g, gen_truth(3), 0.1, seed=5)
    x_star = centralized_solve(g, np.asarray(ms.aggregated))
    errors = [np.array([1.0, 0.5, -0.5])] + [np.zeros(3)] * 8
    report = perf_report(g, ms, _synthetic(x_star, errors))
    assert report.r_e is None
    assert "converged" in report.r_e_reason
    assert report.mse == 0.0


def test_error_series_eventually_monotone_when_contracting():
    # monotone round by round in the degree-weighted kernel-orthogonal norm;
    # across 10-round windows in the Euclidean gauge-aligned norm
    rng = np.random.default_rng(9)
    for _ in range(5):
        g = random_connected_nonbipartite(rng, 5, 10, max_rate=0.97)
        ms = measure(g, gen_truth(g.n), 0.1, seed=int(rng.integers(0, 2**32)))
        plan = rho_star(g)
        traj = matrix_iterate(g, ms, SchemeConfig(rho=plan.rho_star, rounds=40))
        x_star = traj.centralized_ref
        weight = np.sqrt(np.asarray(g.degrees, dtype=float) + plan.rho_star / 2.0)
        kernel = weight / np.linalg.norm(weight)
        weighted = []
        aligned = []
        for state in traj.states:
            z = weight * (state - x_star)
            z -= (kernel @ z) * kernel
            weighted.append(float(np.linalg.norm(z)))
            aligned.append(float(np.linalg.norm((state - state[0]) - (x_star - x_star[0]))))
        for k in range(5, 40):
            assert weighted[k + 1] <= weighted[k] + 1e-12
        for k in range(5, 30):
            assert aligned[k + 10] <= aligned[k] + 1e-12
