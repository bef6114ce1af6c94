"""Least-squares state estimation: centralized minimum-norm solve and the
synchronous distributed iteration, both as a message-passing multi-agent
simulation and as its dense-matrix oracle.

Estimates are identifiable only up to a constant shift (the Laplacian kernel
on a connected graph), so comparisons go through ``gauge_align``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .graph import (
    DisconnectedGraphError,
    Graph,
    graph_digest,
    is_connected,
    operators,
)
from .jsonio import format_float
from .measurement import MeasurementSet
from .spectral import NumericalError

MAX_ROUNDS = 100_000


@dataclass(frozen=True)
class SchemeConfig:
    """Run parameters: penalty (0 selects the plain scheme), round count, and
    initial state (None means all zeros)."""

    rho: float = 0.0
    rounds: int = 20
    initial_state: Sequence[float] | None = None


@dataclass
class AgentState:
    """Everything one agent may touch: its estimate, its own outgoing
    measurements, and the reverse measurements received once at setup."""

    id: int
    x: float
    own_meas: dict[int, float]
    reverse_meas: dict[int, float]
    degree: int


@dataclass
class Trajectory:
    """Estimates of all agents over a run; row k of ``states`` is x(k)."""

    states: np.ndarray
    rho: float
    centralized_ref: np.ndarray
    gauge: str = "subtract-first-component"

    @property
    def rounds(self) -> int:
        return self.states.shape[0] - 1


def gauge_align(x: Sequence[float], ref: Sequence[float], mode: str = "first") -> np.ndarray:
    """Difference of x and ref after removing the unobservable constant shift.

    "first" pins the first component of each vector to zero (the default);
    "mean" pins the mean instead. The result is the zero vector exactly when
    x and ref differ by a constant shift.
    """
    xv = np.asarray(x, dtype=float)
    rv = np.asarray(ref, dtype=float)
    if xv.shape != rv.shape:
        raise ValueError(f"shape mismatch: {xv.shape} vs {rv.shape}")
    if mode == "first":
        return (xv - xv[0]) - (rv - rv[0])
    if mode == "mean":
        return (xv - xv.mean()) - (rv - rv.mean())
    raise ValueError(f"unknown gauge mode {mode!r}")


def centralized_solve(g: Graph, x_tilde: Sequence[float]) -> np.ndarray:
    """Minimum-norm solution of 2 L x = x_tilde via the Laplacian pseudo-inverse.

    Eigenvalues above the rank cutoff n * lambda_max * 2^-52 are inverted and
    the rest zeroed; on a connected graph only the all-ones direction is
    dropped, so the result has zero mean.
    """
    if not is_connected(g):
        raise DisconnectedGraphError("centralized solve requires a connected graph")
    rhs = np.asarray(x_tilde, dtype=float)
    if rhs.shape != (g.n,):
        raise ValueError(f"expected a length-{g.n} vector, got shape {rhs.shape}")
    lap = operators(g).laplacian
    w, v = np.linalg.eigh(lap)
    cutoff = g.n * w[-1] * 2.0**-52
    inv = np.zeros_like(w)
    keep = w > cutoff
    inv[keep] = 1.0 / w[keep]
    return 0.5 * (v @ (inv * (v.T @ rhs)))


def build_system(g: Graph, rho: float) -> tuple[np.ndarray, np.ndarray]:
    """Dense iteration matrix F(rho) and the per-vertex input gain.

    F(rho) = (D + rho/2 I)^-1 (A + rho/2 I) is row stochastic; the gain
    vector 1 / (2 deg + rho) scales the aggregated measurement vector into
    the constant input term.
    """
    if rho < 0:
        raise ValueError(f"penalty must be nonnegative, got {rho}")
    if not is_connected(g):
        raise DisconnectedGraphError("iteration matrix requires a connected graph")
    a = operators(g).adjacency
    degs = np.asarray(g.degrees, dtype=float)
    scale = 1.0 / (2.0 * degs + rho)
    f = scale[:, None] * (2.0 * a + rho * np.eye(g.n))
    gain = scale
    return f, gain


def pp_step(agent: AgentState, neighbor_values: Mapping[int, float], rho: float) -> float:
    """One agent's update from its own state, measurements, and the received
    neighbor estimates:

        (rho * x_i + 2 * sum_j x_j + sum_j (rev_ji - own_ij)) / (2 deg + rho)

    With rho = 0 this is plain neighborhood averaging plus the measurement
    correction; large rho freezes the agent at its previous estimate.
    """
    if set(neighbor_values) != set(agent.own_meas):
        missing = set(agent.own_meas) - set(neighbor_values)
        if missing:
            raise ValueError(f"missing neighbor value(s) for agent {agent.id}: {sorted(missing)}")
        raise ValueError(f"unexpected neighbor value(s) for agent {agent.id}")
    sum_states = sum(neighbor_values[j] for j in agent.own_meas)
    correction = sum(agent.reverse_meas[j] - agent.own_meas[j] for j in agent.own_meas)
    return (rho * agent.x + 2.0 * sum_states + correction) / (2.0 * agent.degree + rho)


def _check_run_inputs(g: Graph, meas: MeasurementSet, cfg: SchemeConfig) -> np.ndarray:
    if not is_connected(g):
        raise DisconnectedGraphError("scheme runs require a connected graph")
    if cfg.rho < 0:
        raise ValueError(f"penalty must be nonnegative, got {cfg.rho}")
    if not (0 <= cfg.rounds <= MAX_ROUNDS):
        raise ValueError(f"rounds must be in [0, {MAX_ROUNDS}], got {cfg.rounds}")
    expected = {(i, j) for i in range(g.n) for j in g.neighbors[i]}
    if set(meas.pairwise) != expected:
        raise ValueError("measurement set does not cover exactly the ordered edge pairs")
    if cfg.initial_state is None:
        x0 = np.zeros(g.n)
    else:
        x0 = np.asarray(cfg.initial_state, dtype=float)
        if x0.shape != (g.n,):
            raise ValueError(f"initial state must have length {g.n}")
    return x0


def _finish(states: np.ndarray, rho: float, ref: np.ndarray) -> Trajectory:
    if not np.all(np.isfinite(states)):
        raise NumericalError("trajectory contains non-finite values")
    return Trajectory(states=states, rho=rho, centralized_ref=ref)


def run_scheme(g: Graph, meas: MeasurementSet, cfg: SchemeConfig) -> Trajectory:
    """Synchronous message-passing run of the distributed scheme.

    Each round every agent broadcasts its estimate to its neighbors, then all
    agents apply ``pp_step`` simultaneously. Agents only ever read their own
    ``AgentState`` and the values received that round, so locality follows
    from the data flow rather than from convention.
    """
    x0 = _check_run_inputs(g, meas, cfg)
    agents = [
        AgentState(
            id=i,
            x=float(x0[i]),
            own_meas={j: meas.pairwise[(i, j)] for j in g.neighbors[i]},
            reverse_meas={j: meas.pairwise[(j, i)] for j in g.neighbors[i]},
            degree=g.degree(i),
        )
        for i in range(g.n)
    ]
    states = np.empty((cfg.rounds + 1, g.n))
    states[0] = x0
    for k in range(cfg.rounds):
        inbox = {agent.id: agent.x for agent in agents}
        new_values = [
            pp_step(agent, {j: inbox[j] for j in g.neighbors[agent.id]}, cfg.rho)
            for agent in agents
        ]
        for agent, value in zip(agents, new_values):
            agent.x = value
        states[k + 1] = new_values
    ref = centralized_solve(g, np.asarray(meas.aggregated))
    return _finish(states, cfg.rho, ref)


def matrix_iterate(g: Graph, meas: MeasurementSet, cfg: SchemeConfig) -> Trajectory:
    """Dense-matrix oracle for ``run_scheme``: x(k+1) = F x(k) + u."""
    x0 = _check_run_inputs(g, meas, cfg)
    f, gain = build_system(g, cfg.rho)
    u = gain * np.asarray(meas.aggregated)
    states = np.empty((cfg.rounds + 1, g.n))
    states[0] = x0
    x = x0.copy()
    for k in range(cfg.rounds):
        x = f @ x + u
        states[k + 1] = x
    ref = centralized_solve(g, np.asarray(meas.aggregated))
    return _finish(states, cfg.rho, ref)


def regularized_objective(
    x_next: Sequence[float],
    x_prev: Sequence[float],
    g: Graph,
    meas: MeasurementSet,
    rho: float,
) -> float:
    """Least-squares cost at x_next plus the proximal anchor term
    (rho/2) ||x_next - x_prev||^2; strictly convex in x_next for rho > 0."""
    from .metrics import cost  # deferred: metrics imports gauge_align from here

    xn = np.asarray(x_next, dtype=float)
    xp = np.asarray(x_prev, dtype=float)
    if xn.shape != xp.shape:
        raise ValueError(f"shape mismatch: {xn.shape} vs {xp.shape}")
    return cost(g, meas, xn) + 0.5 * rho * float(np.sum((xn - xp) ** 2))


def trajectory_to_csv(traj: Trajectory) -> str:
    """CSV form: header "k,x_0,...,x_{n-1}", one row per recorded round."""
    n = traj.states.shape[1]
    lines = ["k," + ",".join(f"x_{i}" for i in range(n))]
    for k in range(traj.states.shape[0]):
        lines.append(f"{k}," + ",".join(format_float(v) for v in traj.states[k]))
    return "\n".join(lines) + "\n"


def trajectory_sidecar(traj: Trajectory, g: Graph, meas: MeasurementSet) -> dict:
    """Metadata accompanying a trajectory export."""
    return {
        "rho": traj.rho,
        "seed": meas.seed,
        "noise_amplitude": meas.noise_amplitude,
        "graph_digest": graph_digest(g),
    }
