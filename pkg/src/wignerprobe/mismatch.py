"""Mode-overlap diagnosis from photon-number oscillations.

The displaced single-photon state oscillates: its one-photon component is
fully suppressed at unit displacement when the overlap is perfect, and the
oscillation amplitude shrinks as the overlap degrades. Comparing the vacuum
and one-photon components of the loss-inverted statistics at displacement 0
and 1 therefore measures the overlap directly, with only two settings.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .photon_statistics import fock, mismatch_distribution
from .reconstruction import invert_loss

_CUTOFF = 32


@dataclass(frozen=True)
class OscillationAmplitude:
    """|rho_ii(alpha=1) - rho_ii(alpha=0)| of the inverted statistics."""

    component: int
    value: float


def beta_for_unit_displacement(T: float, eta1: float = 1.0) -> float:
    """Reference-field amplitude giving nominal displacement alpha = 1.

    Calibrated as in the lossy-displacement map alpha = sqrt(1-T) beta /
    sqrt(eta1 T); deliberately independent of the (unknown) overlap.
    """
    if not 0.0 < T < 1.0:
        raise ValueError("T must be in (0, 1)")
    return float(np.sqrt(eta1 * T / (1.0 - T)))


def inverted_components(M: float, T: float, beta: complex,
                        cutoff: int = _CUTOFF) -> np.ndarray:
    """Loss-inverted photon statistics of |1> under the overlap model."""
    dist = mismatch_distribution(fock(1, cutoff), beta, T, M, cutoff)
    return invert_loss(dist.probs, T).values


def oscillation_amplitude(i: int, M: float, T: float,
                          beta_for_alpha1: complex | None = None) -> OscillationAmplitude:
    """Oscillation amplitude A_ii of component i in {0, 1} for input |1>."""
    if i not in (0, 1):
        raise ValueError("only the vacuum (0) and one-photon (1) components "
                         "are defined for the diagnosis")
    if beta_for_alpha1 is None:
        beta_for_alpha1 = beta_for_unit_displacement(T)
    at_one = inverted_components(M, T, beta_for_alpha1)
    at_zero = inverted_components(M, T, 0.0)
    return OscillationAmplitude(component=i, value=float(abs(at_one[i] - at_zero[i])))


def amplitude_curve(i: int, T: float, M_grid) -> list[OscillationAmplitude]:
    """Sample the oscillation amplitude over a grid of overlap values."""
    return [oscillation_amplitude(i, float(M), T) for M in M_grid]


def write_amplitude_csv(path, T: float, M_grid) -> None:
    """Emit columns M, A00, A11 over the overlap grid."""
    grid = list(M_grid)
    if not grid:
        raise ValueError("overlap grid must be nonempty")
    a00 = amplitude_curve(0, T, grid)
    a11 = amplitude_curve(1, T, grid)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["M", "A00", "A11"])
        for M, lo, hi in zip(grid, a00, a11):
            w.writerow([f"{float(M):.17g}", f"{lo.value:.17g}", f"{hi.value:.17g}"])
