"""Time-multiplexed detector model.

A pulse is split by a binary tree of fibre couplers into B = 2^m time bins,
each read by a binary (click / no click) detector. The convolution matrix C
maps photon number to click number; the loss matrix L models binomial loss at
efficiency eta and has an analytic triangular inverse.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from math import comb

import numpy as np

from .photon_statistics import PhotonDistribution, TAIL_TOL


@dataclass(frozen=True)
class TmdConfig:
    """Stage count, per-stage coupler transmissions, and detector efficiency."""

    stages: int
    coupler_ratios: tuple
    detection_efficiency: float = 1.0

    def __post_init__(self):
        if self.stages < 1:
            raise ValueError("need at least one TMD stage")
        ratios = tuple(float(r) for r in self.coupler_ratios)
        object.__setattr__(self, "coupler_ratios", ratios)
        if len(ratios) != self.stages:
            raise ValueError("one coupler ratio per stage required")
        if any(not 0.0 < r < 1.0 for r in ratios):
            raise ValueError("coupler ratios must lie in (0, 1)")
        if not 0.0 < self.detection_efficiency <= 1.0:
            raise ValueError("detection efficiency must be in (0, 1]")

    @property
    def bins(self) -> int:
        return 2**self.stages

    @classmethod
    def balanced(cls, stages: int, detection_efficiency: float = 1.0) -> "TmdConfig":
        return cls(stages, (0.5,) * stages, detection_efficiency)

    @classmethod
    def uniform(cls, stages: int, ratio: float,
                detection_efficiency: float = 1.0) -> "TmdConfig":
        return cls(stages, (ratio,) * stages, detection_efficiency)


@dataclass(frozen=True)
class ConvolutionMatrix:
    """entries[N, n] = P(n photons produce exactly N clicks)."""

    entries: np.ndarray
    bin_probs: np.ndarray

    @property
    def bins(self) -> int:
        return self.bin_probs.size

    @property
    def n_max(self) -> int:
        return self.entries.shape[1] - 1


@dataclass(frozen=True)
class LossMatrix:
    """Upper-triangular binomial loss matrix at efficiency eta."""

    eta: float
    entries: np.ndarray

    @property
    def size(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class ClickDistribution:
    """Probability vector over the click count N in [0, B]."""

    probs: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        object.__setattr__(self, "probs", p)

    def __len__(self) -> int:
        return self.probs.size


def bin_probabilities(cfg: TmdConfig) -> np.ndarray:
    """Probability of a single photon landing in each time bin.

    The bin index encodes the path through the coupler tree, one bit per
    stage: bit 0 takes the transmitted arm with that stage's ratio.
    """
    B = cfg.bins
    out = np.empty(B)
    for b in range(B):
        p = 1.0
        for s, r in enumerate(cfg.coupler_ratios):
            p *= r if (b >> s) & 1 == 0 else 1.0 - r
        out[b] = p
    return out


def build_convolution_matrix(cfg: TmdConfig, n_max: int) -> ConvolutionMatrix:
    """Exact click-number distribution for up to n_max photons.

    n independent photons land in bin i with probability bin_probs[i]; a bin
    clicks when it holds at least one photon. Computed by dynamic programming
    over bins on (photons remaining, clicks so far) with binomial placement
    weights -- exact, no sampling.
    """
    qs = bin_probabilities(cfg)
    B = qs.size
    tail = np.concatenate([np.cumsum(qs[::-1])[::-1], [0.0]])
    entries = np.zeros((B + 1, n_max + 1))
    for n in range(n_max + 1):
        states = {(n, 0): 1.0}
        for i in range(B):
            # probability of falling in bin i given it reached bins i..B-1
            p = 1.0 if i == B - 1 else qs[i] / tail[i]
            new: dict = {}
            for (k, c), pr in states.items():
                for j in range(k + 1):
                    w = comb(k, j) * p**j * (1.0 - p) ** (k - j)
                    if w == 0.0:
                        continue
                    key = (k - j, c + (1 if j > 0 else 0))
                    new[key] = new.get(key, 0.0) + pr * w
            states = new
        for (k, c), pr in states.items():
            entries[c, n] += pr
    return ConvolutionMatrix(entries=entries, bin_probs=qs)


def loss_matrix(eta: float, size: int) -> LossMatrix:
    """L[m, n] = C(n, m) eta^m (1-eta)^(n-m) for m <= n, else 0."""
    if not 0.0 < eta <= 1.0:
        raise ValueError("eta must be in (0, 1]")
    L = np.zeros((size, size))
    for n in range(size):
        for m in range(n + 1):
            L[m, n] = comb(n, m) * eta**m * (1.0 - eta) ** (n - m)
    return LossMatrix(eta=eta, entries=L)


def loss_matrix_inverse(eta: float, size: int) -> np.ndarray:
    """Analytic inverse: entries C(n, m) (eta - 1)^(n-m) / eta^n for m <= n.

    Singular only at eta = 0, which is rejected.
    """
    if not 0.0 < eta <= 1.0:
        raise ValueError("eta must be in (0, 1]; eta = 0 is singular")
    M = np.zeros((size, size))
    for n in range(size):
        for m in range(n + 1):
            M[m, n] = comb(n, m) * (eta - 1.0) ** (n - m) / eta**n
    return M


def forward_clicks(stats: PhotonDistribution, C: ConvolutionMatrix,
                   L: LossMatrix) -> ClickDistribution:
    """Click statistics p = C (L stats) of the detected state."""
    v = stats.probs
    if L.size != v.size:
        raise ValueError(f"loss matrix size {L.size} != statistics length {v.size}")
    degraded = L.entries @ v
    if C.entries.shape[1] != degraded.size:
        raise ValueError(
            f"convolution matrix expects n_max={C.n_max}, got length {degraded.size}"
        )
    return ClickDistribution(C.entries @ degraded)


def write_matrix_csv(entries: np.ndarray, path, row_label: str = "clicks",
                     col_label: str = "photons") -> None:
    """Dump a matrix with count headers for inspection."""
    rows, cols = entries.shape
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow([f"{row_label}\\{col_label}"] + [str(c) for c in range(cols)])
        for r in range(rows):
            w.writerow([str(r)] + [f"{x:.17g}" for x in entries[r]])
