"""Ground-truth states, noisy directed relative measurements, and their
aggregation into the per-vertex stacked vector used by the estimators.

Noise draws come from a pinned 64-bit mixing generator with an independent
stream per ordered vertex pair, keyed by (seed, i, j). The recurrence is
normative and documented with test vectors in MEASUREMENT-RNG.md so that any
other implementation can reproduce measurement sets bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .graph import Graph
from .jsonio import format_float

_MASK = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
VERTEX_SALT_A = 0xA0761D6478BD642F
VERTEX_SALT_B = 0xE7037ED1A0B428DB
_MIX_MUL_1 = 0xBF58476D1CE4E5B9
_MIX_MUL_2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    """Finalizing 64-bit avalanche mix (xorshift-multiply, two rounds)."""
    z &= _MASK
    z = ((z ^ (z >> 30)) * _MIX_MUL_1) & _MASK
    z = ((z ^ (z >> 27)) * _MIX_MUL_2) & _MASK
    return z ^ (z >> 31)


def pair_state(seed: int, i: int, j: int) -> int:
    """Initial stream state for the ordered pair (i, j) under ``seed``."""
    s = mix64((seed + GAMMA) & _MASK)
    s = mix64(s ^ (((i + 1) * VERTEX_SALT_A) & _MASK))
    s = mix64(s ^ (((j + 1) * VERTEX_SALT_B) & _MASK))
    return s


def pair_uint64(seed: int, i: int, j: int, index: int = 0) -> int:
    """The ``index``-th 64-bit draw of the (seed, i, j) stream."""
    return mix64((pair_state(seed, i, j) + index * GAMMA) & _MASK)


def pair_unit(seed: int, i: int, j: int, index: int = 0) -> float:
    """Uniform draw in [0, 1) with 53-bit resolution."""
    return (pair_uint64(seed, i, j, index) >> 11) / float(1 << 53)


def pair_noise(seed: int, i: int, j: int, amplitude: float) -> float:
    """Uniform noise in [-amplitude, amplitude) for the ordered pair (i, j)."""
    return amplitude * (2.0 * pair_unit(seed, i, j) - 1.0)


@dataclass(frozen=True)
class GroundTruth:
    """True scalar state per vertex; ``mode`` records how it was built."""

    values: tuple[float, ...]
    mode: str


def gen_truth(
    n: int,
    mode: str = "linear",
    step: float = 1.0,
    values: Sequence[float] | None = None,
) -> GroundTruth:
    """Linear ramp x_i = i * step, or arbitrary custom values."""
    if n < 2:
        raise ValueError(f"need at least 2 vertices, got {n}")
    if mode == "linear":
        return GroundTruth(values=tuple(i * step for i in range(n)), mode="linear")
    if mode == "custom":
        if values is None or len(values) != n:
            raise ValueError(f"custom mode needs exactly {n} values")
        return GroundTruth(values=tuple(float(v) for v in values), mode="custom")
    raise ValueError(f"unknown truth mode {mode!r}")


@dataclass(frozen=True)
class MeasurementSet:
    """All directed relative measurements of a graph plus their aggregation.

    ``pairwise[(i, j)]`` is the noisy reading of x_j - x_i taken at vertex i
    about neighbor j; both directions of every edge are present and carry
    independent noise. ``aggregated[i]`` is the signed sum
    sum_j (pairwise[j, i] - pairwise[i, j]) over the neighbors of i.
    """

    pairwise: dict[tuple[int, int], float]
    aggregated: tuple[float, ...]
    noise_amplitude: float
    seed: int


def measure(g: Graph, truth: GroundTruth, amplitude: float, seed: int) -> MeasurementSet:
    """Draw the full measurement set for ``g`` under uniform noise.

    Ordered pairs are enumerated in ascending (i, j) order; because every
    pair has its own stream keyed by (seed, i, j), identical seeds give
    identical sets regardless of enumeration order.
    """
    if len(truth.values) != g.n:
        raise ValueError(
            f"truth has {len(truth.values)} entries for a {g.n}-vertex graph"
        )
    if amplitude < 0:
        raise ValueError(f"noise amplitude must be nonnegative, got {amplitude}")
    seed &= _MASK
    x = truth.values
    pairwise: dict[tuple[int, int], float] = {}
    for i in range(g.n):
        for j in g.neighbors[i]:
            noise = pair_noise(seed, i, j, amplitude) if amplitude > 0 else 0.0
            pairwise[(i, j)] = x[j] - x[i] + noise
    return MeasurementSet(
        pairwise=pairwise,
        aggregated=tuple(aggregate(g, pairwise)),
        noise_amplitude=amplitude,
        seed=seed,
    )


def aggregate(g: Graph, pairwise: Mapping[tuple[int, int], float]) -> np.ndarray:
    """Per-vertex signed sums of incoming minus outgoing measurements."""
    out = np.zeros(g.n)
    for i in range(g.n):
        for j in g.neighbors[i]:
            try:
                out[i] += pairwise[(j, i)] - pairwise[(i, j)]
            except KeyError as exc:
                raise ValueError(f"measurement for ordered pair {exc} is missing") from None
    return out


def measurements_to_csv(ms: MeasurementSet) -> str:
    """CSV form: header "i,j,value", one ordered pair per row, sorted."""
    lines = ["i,j,value"]
    for (i, j) in sorted(ms.pairwise):
        lines.append(f"{i},{j},{format_float(ms.pairwise[(i, j)])}")
    return "\n".join(lines) + "\n"
