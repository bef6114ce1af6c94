"""Spectra of the iteration matrix family and of the normalized Laplacian,
plus selection of the penalty value that minimizes the worst-case modulus of
the non-unit eigenvalues.

The iteration matrix F(rho) = (D + rho/2 I)^-1 (A + rho/2 I) is similar to
the symmetric matrix (2D + rho I)^-1/2 (2A + rho I) (2D + rho I)^-1/2, so its
spectrum is real and is computed from that symmetric form.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import jsonio
from .graph import DisconnectedGraphError, Graph, is_connected, operators

SOURCE_F = "F_rho"
SOURCE_NORMALIZED_LAPLACIAN = "normalized_laplacian"

#: |sigma_F(rho)| below which the bisection accepts rho as the centroid root.
CENTROID_TOL = 1e-12
#: relative bracket-width floor for the bisection.
BRACKET_TOL = 1e-10


class NumericalError(RuntimeError):
    """Eigensolver or bisection failure; signals a numerical bug, not bad input."""


@dataclass(frozen=True)
class Spectrum:
    """Full real spectrum of one matrix.

    For ``source == SOURCE_F`` the values are sorted descending and the top
    value is 1 (simple on a connected graph). For the normalized Laplacian
    the values are sorted ascending, from 0 to at most 2.
    """

    values: tuple[float, ...]
    source: str
    rho: float | None = None

    def to_json(self, indent: int | None = None) -> str:
        return jsonio.dumps(
            {"values": list(self.values), "source": self.source, "rho": self.rho},
            indent=indent,
        )


@dataclass(frozen=True)
class RhoPlan:
    """Outcome of the penalty optimization for one graph.

    ``rate_lo``/``rate_hi`` bracket the achieved rate using the degree-based
    eigenvalue bounds evaluated at ``rho_star``; ``apriori_rate_lo``/``_hi``
    are the weaker a-priori bounds evaluated at the bracket ends, available
    before ``rho_star`` itself is computed. On graphs whose spectral centroid
    ``sigma_L`` is at most 1 the optimum is rho = 0 and every bound field
    collapses onto ``rate``.
    """

    sigma_L: float
    rho_star: float
    bracket_lo: float
    bracket_hi: float
    rate: float
    rate_lo: float
    rate_hi: float
    rate_sigma0: float
    apriori_rate_lo: float
    apriori_rate_hi: float

    def to_dict(self) -> dict:
        return {
            "sigma_L": self.sigma_L,
            "rho_star": self.rho_star,
            "bracket_lo": self.bracket_lo,
            "bracket_hi": self.bracket_hi,
            "rate": self.rate,
            "rate_lo": self.rate_lo,
            "rate_hi": self.rate_hi,
            "rate_sigma0": self.rate_sigma0,
            "apriori_rate_lo": self.apriori_rate_lo,
            "apriori_rate_hi": self.apriori_rate_hi,
        }

    def to_json(self, indent: int | None = None) -> str:
        return jsonio.dumps(self.to_dict(), indent=indent)


def symmetric_eigenvalues(matrix: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """All eigenvalues of a symmetric matrix, sorted ascending.

    Symmetry is validated to ``tol`` (relative to the largest entry) before
    the solve; failures of the underlying solver surface as NumericalError.
    """
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    scale = max(1.0, float(np.abs(m).max()))
    if float(np.abs(m - m.T).max()) > tol * scale:
        raise ValueError("matrix is not symmetric within tolerance")
    try:
        values = np.linalg.eigvalsh(m)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigenvalue solve failed: {exc}") from exc
    return np.sort(values)


def _require_connected(g: Graph) -> None:
    if not is_connected(g):
        raise DisconnectedGraphError("operation requires a connected graph")


def spectrum_f(g: Graph, rho: float) -> Spectrum:
    """Spectrum of the iteration matrix F(rho), sorted descending."""
    if rho < 0:
        raise ValueError(f"penalty must be nonnegative, got {rho}")
    _require_connected(g)
    a = operators(g).adjacency
    degs = np.asarray(g.degrees, dtype=float)
    inv_sqrt = 1.0 / np.sqrt(2.0 * degs + rho)
    sym = inv_sqrt[:, None] * (2.0 * a + rho * np.eye(g.n)) * inv_sqrt[None, :]
    values = symmetric_eigenvalues(sym)[::-1]
    if abs(values[0] - 1.0) > 1e-10:
        raise NumericalError(
            f"leading eigenvalue of the iteration matrix is {values[0]!r}, expected 1"
        )
    return Spectrum(values=tuple(float(v) for v in values), source=SOURCE_F, rho=float(rho))


def spectrum_normalized_laplacian(g: Graph) -> Spectrum:
    """Spectrum of I - D^-1/2 A D^-1/2, sorted ascending."""
    _require_connected(g)
    values = symmetric_eigenvalues(operators(g).normalized_laplacian)
    if abs(values[0]) > 1e-10:
        raise NumericalError(
            f"smallest normalized-Laplacian eigenvalue is {values[0]!r}, expected 0"
        )
    return Spectrum(
        values=tuple(float(v) for v in values),
        source=SOURCE_NORMALIZED_LAPLACIAN,
        rho=None,
    )


def centroid(spectrum: Spectrum) -> float:
    """Mean of the second eigenvalue and the last one in the stored order.

    Under the descending order of iteration-matrix spectra this averages the
    second-largest and smallest eigenvalues; under the ascending Laplacian
    order, the second-smallest and largest.
    """
    if len(spectrum.values) < 2:
        raise ValueError("centroid needs a spectrum of at least 2 values")
    return 0.5 * (spectrum.values[1] + spectrum.values[-1])


def convergence_rate(spectrum: Spectrum) -> float:
    """Worst-case modulus of the non-unit eigenvalues: max(|v[1]|, |v[-1]|)."""
    if spectrum.source != SOURCE_F:
        raise ValueError(f"rate is defined on iteration-matrix spectra, got {spectrum.source!r}")
    return max(abs(spectrum.values[1]), abs(spectrum.values[-1]))


def _bounds(lam_f0: float, rho: float, d_min: int, d_max: int) -> tuple[float, float]:
    lower = (rho + 2.0 * lam_f0 * d_max) / (rho + 2.0 * d_max)
    upper = (rho + 2.0 * lam_f0 * d_min) / (rho + 2.0 * d_min)
    return lower, upper


def eig_bounds(g: Graph, rho: float, i: int) -> tuple[float, float]:
    """Degree-based sandwich for the i-th descending eigenvalue of F(rho).

    Both bounds are affine in the corresponding eigenvalue of F(0); they
    coincide exactly when the graph is regular.
    """
    if rho <= 0:
        raise ValueError(f"bounds are defined for rho > 0, got {rho}")
    if not (1 <= i <= g.n - 1):
        raise ValueError(f"eigenvalue index must be in [1, {g.n - 1}], got {i}")
    lam_f0 = spectrum_f(g, 0.0).values[i]
    degs = g.degrees
    return _bounds(lam_f0, rho, min(degs), max(degs))


def _bisect_centroid_zero(g: Graph, lo: float, hi: float) -> float:
    """Root of rho -> centroid(spectrum_f(g, rho)) by bisection on [lo, hi]."""
    a = max(0.0, lo - 1e-9)
    b = hi + 1e-9
    c_a = centroid(spectrum_f(g, a))
    c_b = centroid(spectrum_f(g, b))
    if c_a > CENTROID_TOL or c_b < -CENTROID_TOL:
        raise NumericalError(
            f"centroid bisection bracket failure: sigma_F({a})={c_a}, sigma_F({b})={c_b}"
        )
    width_floor = BRACKET_TOL * max(1.0, hi)
    mid = 0.5 * (a + b)
    while b - a > width_floor:
        mid = 0.5 * (a + b)
        c_mid = centroid(spectrum_f(g, mid))
        if abs(c_mid) < CENTROID_TOL:
            return mid
        if c_mid < 0.0:
            a = mid
        else:
            b = mid
    return mid


def rho_star(g: Graph) -> RhoPlan:
    """Optimal penalty and its convergence-rate summary for one graph.

    When the normalized-Laplacian centroid is at most 1 the plain scheme is
    already optimal (rho = 0). Otherwise the optimum is the unique root of
    the iteration-matrix centroid, bracketed by 2 (sigma_L - 1) d_min and
    2 (sigma_L - 1) d_max; on regular graphs the bracket is tight and used
    directly, otherwise the root is found by bisection (the centroid is
    strictly increasing in rho).
    """
    _require_connected(g)
    nl = spectrum_normalized_laplacian(g)
    f0 = spectrum_f(g, 0.0)
    sigma_l = centroid(nl)
    rate_sigma0 = convergence_rate(f0)
    if sigma_l <= 1.0:
        rate = 1.0 - nl.values[1]
        return RhoPlan(
            sigma_L=sigma_l,
            rho_star=0.0,
            bracket_lo=0.0,
            bracket_hi=0.0,
            rate=rate,
            rate_lo=rate,
            rate_hi=rate,
            rate_sigma0=rate_sigma0,
            apriori_rate_lo=rate,
            apriori_rate_hi=rate,
        )
    degs = g.degrees
    d_min, d_max = min(degs), max(degs)
    bracket_lo = 2.0 * (sigma_l - 1.0) * d_min
    bracket_hi = 2.0 * (sigma_l - 1.0) * d_max
    if d_min == d_max:
        rho_opt = bracket_lo
    else:
        rho_opt = _bisect_centroid_zero(g, bracket_lo, bracket_hi)
    rate = convergence_rate(spectrum_f(g, rho_opt))

    lam1, lam_last = f0.values[1], f0.values[-1]
    lo1, up1 = _bounds(lam1, rho_opt, d_min, d_max)
    lo_last, up_last = _bounds(lam_last, rho_opt, d_min, d_max)
    rate_hi = max(-lo_last, up1)
    rate_lo = max(-min(0.0, up_last), max(0.0, lo1))

    lo1_at_lo, _ = _bounds(lam1, bracket_lo, d_min, d_max)
    _, up1_at_hi = _bounds(lam1, bracket_hi, d_min, d_max)
    lo_last_at_lo, _ = _bounds(lam_last, bracket_lo, d_min, d_max)
    _, up_last_at_hi = _bounds(lam_last, bracket_hi, d_min, d_max)
    apriori_hi = max(-lo_last_at_lo, up1_at_hi)
    apriori_lo = max(-min(0.0, up_last_at_hi), max(0.0, lo1_at_lo))

    return RhoPlan(
        sigma_L=sigma_l,
        rho_star=rho_opt,
        bracket_lo=bracket_lo,
        bracket_hi=bracket_hi,
        rate=rate,
        rate_lo=rate_lo,
        rate_hi=rate_hi,
        rate_sigma0=rate_sigma0,
        apriori_rate_lo=apriori_lo,
        apriori_rate_hi=apriori_hi,
    )
