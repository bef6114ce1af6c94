"""Least-squares cost and the two run-level performance indexes: effective
convergence rate (mean of successive gauge-aligned error ratios over the
middle rounds) and final mean square error.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .estimator import Trajectory, gauge_align
from .graph import Graph
from .measurement import MeasurementSet


class EffectiveRateUndefined(ValueError):
    """The effective rate is not reportable (e.g. exact convergence makes a
    ratio denominator vanish); the message carries the reason."""


def cost(g: Graph, meas: MeasurementSet, x: Sequence[float]) -> float:
    """h(x) = 1/2 * sum over ordered pairs (i, j) of (x_i - x_j + m_ij)^2."""
    xv = np.asarray(x, dtype=float)
    if xv.shape != (g.n,):
        raise ValueError(f"expected a length-{g.n} state vector, got shape {xv.shape}")
    total = 0.0
    for (i, j), m in meas.pairwise.items():
        r = xv[i] - xv[j] + m
        total += r * r
    return 0.5 * total


def effective_rate(traj: Trajectory, k_neg: int = 2) -> float:
    """Average ratio ||e(k+1)|| / ||e(k)|| over k = k_neg .. rounds-k_neg-1,
    where e(k) is the gauge-aligned error against the centralized solution.
    """
    k_bar = traj.rounds
    if k_neg < 0:
        raise ValueError(f"k_neg must be nonnegative, got {k_neg}")
    if k_bar <= 2 * k_neg:
        raise ValueError(f"need rounds > 2*k_neg, got rounds={k_bar}, k_neg={k_neg}")
    norms = [
        float(np.linalg.norm(gauge_align(traj.states[k], traj.centralized_ref)))
        for k in range(k_neg, k_bar - k_neg + 1)
    ]
    ratios = []
    for idx in range(len(norms) - 1):
        if norms[idx] <= 1e-14:
            raise EffectiveRateUndefined(
                f"error norm underflow at round {k_neg + idx} "
                f"({norms[idx]:.3e}): estimates already converged"
            )
        ratios.append(norms[idx + 1] / norms[idx])
    return float(np.mean(ratios))


def mse(traj: Trajectory) -> float:
    """Mean square of the final gauge-aligned error."""
    err = gauge_align(traj.states[-1], traj.centralized_ref)
    return float(np.mean(err**2))


@dataclass(frozen=True)
class PerfReport:
    """Performance indexes of one run; ``r_e`` is None when undefined and
    ``r_e_reason`` then says why."""

    r_e: float | None
    r_e_reason: str | None
    mse: float
    cost_series: tuple[float, ...]
    k_neg: int
    k_bar: int

    def to_dict(self) -> dict:
        return {
            "r_e": self.r_e,
            "r_e_reason": self.r_e_reason,
            "mse": self.mse,
            "cost_series": list(self.cost_series),
            "k_neg": self.k_neg,
            "k_bar": self.k_bar,
        }


def perf_report(g: Graph, meas: MeasurementSet, traj: Trajectory, k_neg: int = 2) -> PerfReport:
    """Assemble the indexes and the per-round cost series for one trajectory.

    The effective rate needs more than 2*k_neg rounds and nonvanishing error
    norms; runs that don't provide them get r_e = None with the reason."""
    if traj.rounds <= 2 * k_neg:
        r_e: float | None = None
        reason: str | None = (
            f"needs more than {2 * k_neg} rounds to average, run has {traj.rounds}"
        )
    else:
        try:
            r_e = effective_rate(traj, k_neg)
            reason = None
        except EffectiveRateUndefined as exc:
            r_e = None
            reason = str(exc)
    series = tuple(cost(g, meas, traj.states[k]) for k in range(traj.rounds + 1))
    return PerfReport(
        r_e=r_e,
        r_e_reason=reason,
        mse=mse(traj),
        cost_series=series,
        k_neg=k_neg,
        k_bar=traj.rounds,
    )
