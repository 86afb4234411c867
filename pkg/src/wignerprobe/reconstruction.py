"""Inversion of click statistics and Wigner-value evaluation.

Two routes to the Wigner value are provided: full matrix inversion of the
click model followed by the parity sum, and the direct summation that folds
the loss inverse into the parity factor. Negative components of inverted
statistics are reported, never clipped; they drive the reliability gate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

from .detector import ClickDistribution, ConvolutionMatrix, LossMatrix, loss_matrix_inverse
from .photon_statistics import parity_wigner

# Generous gate: a 16-bin detector at 60% overall efficiency already reaches
# ~6e12, and such systems still invert to useful accuracy. The gate only
# rejects hopeless solves (low-efficiency full-size systems reach 1e30+).
COND_LIMIT = 1e14


class InversionError(RuntimeError):
    """Linear system too ill-conditioned to invert meaningfully."""

    def __init__(self, message: str, condition: float):
        super().__init__(message)
        self.condition = condition


@dataclass(frozen=True)
class EffectiveParams:
    """Overall efficiency and effective displacement of the lab setup."""

    eta1: float
    T: float
    epsilon: float
    eta_total: float
    alpha_total: complex


@dataclass(frozen=True)
class QuasiDistribution:
    """Real vector over photon number; entries may be negative."""

    values: np.ndarray
    source: str = "inverted"
    condition: float = np.nan

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))

    @property
    def min_component(self) -> float:
        return float(self.values.min())

    def __len__(self) -> int:
        return self.values.size


@dataclass(frozen=True)
class ReliabilityReport:
    min_component: float
    threshold: float
    overflow_mass: float
    overflow_limit: float
    reliable: bool


def effective_params(eta1: float, T: float, epsilon: float,
                     gamma: complex) -> EffectiveParams:
    """Map lab parameters to the overall efficiency eta = eps*T*eta1 and the
    total displacement alpha = gamma / sqrt(eta1*T)."""
    for name, v in (("eta1", eta1), ("T", T), ("epsilon", epsilon)):
        if not 0.0 < v <= 1.0:
            raise ValueError(f"{name} must be in (0, 1]")
    return EffectiveParams(
        eta1=eta1, T=T, epsilon=epsilon,
        eta_total=eta1 * T * epsilon,
        alpha_total=gamma / np.sqrt(eta1 * T),
    )


def invert_clicks(p: ClickDistribution, C_recon: ConvolutionMatrix,
                  L: LossMatrix) -> QuasiDistribution:
    """Solve (C L) rho = p for the photon-number quasi-distribution.

    The system is the square truncation at the detector resolution; the
    result may carry negative entries, which are preserved.
    """
    size = p.probs.size
    if C_recon.entries.shape != (size, size):
        raise ValueError("reconstruction convolution matrix must be square "
                         f"of size {size}, got {C_recon.entries.shape}")
    if L.size != size:
        raise ValueError(f"loss matrix size {L.size} != click vector size {size}")
    system = C_recon.entries @ L.entries
    condition = float(np.linalg.cond(system))
    if not np.isfinite(condition) or condition > COND_LIMIT:
        raise InversionError(
            f"click model condition number {condition:.3e} exceeds {COND_LIMIT:.0e}",
            condition,
        )
    values = np.linalg.solve(system, p.probs)
    return QuasiDistribution(values=values, source="inverted", condition=condition)


def invert_loss(probs: np.ndarray, eta: float) -> QuasiDistribution:
    """Apply the analytic triangular loss inverse to photon statistics."""
    v = np.asarray(probs, dtype=float)
    Linv = loss_matrix_inverse(eta, v.size)
    return QuasiDistribution(values=Linv @ v, source="inverted",
                             condition=float(np.linalg.cond(Linv)))


def invert_loss_triangular(probs: np.ndarray, L: LossMatrix) -> QuasiDistribution:
    """Back-substitution route for the pure (upper-triangular) loss system."""
    v = np.asarray(probs, dtype=float)
    if L.size != v.size:
        raise ValueError("size mismatch")
    values = solve_triangular(L.entries, v, lower=False)
    return QuasiDistribution(values=values, source="inverted",
                             condition=float(np.linalg.cond(L.entries)))


def wigner_from_degraded(pL, eta: float, N: int) -> float:
    """Wigner value straight from loss-degraded statistics.

    (2/pi) * sum_{n<=N} (-(2-eta)/eta)^n pL[n]: the parity factor rescaled by
    the detection efficiency, equivalent to inverting the loss first.
    """
    if not 0.0 < eta <= 1.0:
        raise ValueError("eta must be in (0, 1]")
    v = np.asarray(getattr(pL, "probs", getattr(pL, "values", pL)), dtype=float)
    if N > v.size - 1:
        raise ValueError(f"N={N} exceeds vector length {v.size}")
    n = np.arange(N + 1)
    factor = (-(2.0 - eta) / eta) ** n
    return float(2.0 / np.pi * np.dot(factor, v[: N + 1]))


def analytic_wigner_fock1(gamma: complex, T: float) -> float:
    """Closed-form Wigner value of |1> at the phase-space point gamma/sqrt(T)."""
    if not 0.0 < T <= 1.0:
        raise ValueError("T must be in (0, 1]")
    x = abs(gamma) ** 2 / T
    return float(2.0 / np.pi * np.exp(-2.0 * x) * (4.0 * x - 1.0))


def parity_from_quasi(rho: QuasiDistribution) -> float:
    """Alternating parity sum over an inverted quasi-distribution."""
    return parity_wigner(rho.values)


def reliability(rho: QuasiDistribution, threshold: float, overflow_mass: float,
                overflow_limit: float) -> ReliabilityReport:
    """Gate a reconstruction on its most negative component and on the
    probability mass beyond the detector resolution."""
    mc = rho.min_component
    return ReliabilityReport(
        min_component=mc,
        threshold=threshold,
        overflow_mass=overflow_mass,
        overflow_limit=overflow_limit,
        reliable=(mc > threshold) and (overflow_mass <= overflow_limit),
    )
