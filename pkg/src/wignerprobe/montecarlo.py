"""Monte Carlo scans of the phase-space probing experiment.

For each displacement on the grid the exact detected photon statistics are
built analytically, truncated at the detector resolution (the neglected tail
is tracked separately as the overflow mass), sampled as a finite ensemble,
convolved with the generation TMD response, and inverted with the
reconstruction model. Repeated runs give mean and spread of the Wigner value;
the pooled ensemble drives the reliability gate.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, replace
from math import comb

import numpy as np

from . import photon_statistics as ps
from .detector import (ClickDistribution, TmdConfig, build_convolution_matrix,
                       loss_matrix, loss_matrix_inverse)
from .reconstruction import (InversionError, ReliabilityReport,
                             invert_clicks, reliability)

_TARGET_CUTOFF = 48


@dataclass(frozen=True)
class ExperimentScenario:
    """Full description of one simulated probing experiment."""

    input_fock_m: int
    eta1: float
    T: float
    epsilon: float
    overlap_M: float
    tmd_generation: TmdConfig
    tmd_reconstruction: TmdConfig
    alpha_grid: tuple
    events_per_run: int = 10**6
    runs: int = 10
    rng_seed: int = 0
    reliability_threshold: float = -0.001
    overflow_limit: float = 0.025

    def __post_init__(self):
        object.__setattr__(self, "alpha_grid",
                           tuple(float(a) for a in self.alpha_grid))
        if self.input_fock_m not in (1, 2):
            raise ValueError("input Fock state must be |1> or |2>")
        if self.events_per_run < 1:
            raise ValueError("events_per_run must be >= 1")
        if self.runs < 2:
            raise ValueError("need at least two runs for a standard deviation")
        if any(a < 0 for a in self.alpha_grid):
            raise ValueError("displacement grid values must be >= 0")

    @property
    def eta_total(self) -> float:
        return self.eta1 * self.T * self.epsilon


@dataclass(frozen=True)
class WignerSample:
    alpha: float
    W_degraded_mean: float
    W_degraded_std: float
    W_reconstructed_mean: float
    W_reconstructed_std: float
    reliability: ReliabilityReport
    degraded_stats: np.ndarray
    inverted_stats: np.ndarray


@dataclass(frozen=True)
class ScanResult:
    samples: list
    boundary: float | None


def sample_clicks(dist, events: int, rng: np.random.Generator) -> np.ndarray:
    """Empirical frequencies of a multinomial draw; sums to exactly 1.

    Accepts any finite probability vector (click or photon statistics).
    """
    p = np.asarray(getattr(dist, "probs", dist), dtype=float)
    p = np.clip(p, 0.0, None)
    counts = rng.multinomial(events, p / p.sum())
    return counts / float(events)


def point_rng(seed: int, point_index: int, run_index: int) -> np.random.Generator:
    """Deterministic per-(point, run) stream.

    Derivation is counter-based: SeedSequence(entropy=seed,
    spawn_key=(point_index, run_index)), so results are independent of
    execution order or thread count.
    """
    return np.random.default_rng(
        np.random.SeedSequence(entropy=seed, spawn_key=(point_index, run_index))
    )


def detected_photon_stats(scn: ExperimentScenario, alpha: float,
                          cutoff: int = _TARGET_CUTOFF) -> np.ndarray:
    """Exact photon statistics arriving at the click detectors.

    With perfect overlap all losses collapse into the overall efficiency and
    the statistics are the lossy displaced Fock state with T replaced by
    eta_total (displacement recalibrated to keep alpha fixed). With imperfect
    overlap the pre-displacement loss acts on the Fock state first, then the
    overlap model, then the detector efficiency.
    """
    eta = scn.eta_total
    m = scn.input_fock_m
    if scn.overlap_M == 1.0:
        gamma_eff = alpha * np.sqrt(eta)
        return ps.lossy_displaced_fock(m, gamma_eff, eta, cutoff).probs
    beta = alpha * np.sqrt(scn.eta1 * scn.T / (1.0 - scn.T))
    weights = np.zeros(cutoff + 1)
    for j in range(m + 1):
        weights[j] = comb(m, j) * scn.eta1**j * (1.0 - scn.eta1) ** (m - j)
    mixed = ps.PhotonDistribution(weights)
    dist = ps.mismatch_distribution(mixed, beta, scn.T, scn.overlap_M, cutoff)
    probs = dist.probs
    if scn.epsilon < 1.0:
        probs = ps.binomial_thin(probs, scn.epsilon)
    return probs


def overflow_mass(scn: ExperimentScenario, alpha: float,
                  cutoff: int = _TARGET_CUTOFF) -> float:
    """Probability of the reconstruction target holding more photons than the
    detector can resolve."""
    B = scn.tmd_reconstruction.bins
    pdet = detected_photon_stats(scn, alpha, cutoff)
    target = loss_matrix_inverse(scn.eta_total, cutoff + 1) @ pdet
    return float(max(0.0, 1.0 - target[: B + 1].sum()))


class _ScanContext:
    """Matrices shared by every grid point of a scan."""

    def __init__(self, scn: ExperimentScenario):
        B = scn.tmd_reconstruction.bins
        if scn.tmd_generation.bins != B:
            raise ValueError("generation and reconstruction TMDs must have "
                             "the same bin count")
        self.bins = B
        # square truncation at the detector resolution; the inversion model
        # and the generator then share the same photon-number space, and the
        # neglected tail is exactly the tracked overflow mass
        self.C_gen = build_convolution_matrix(scn.tmd_generation, B)
        self.C_rec = build_convolution_matrix(scn.tmd_reconstruction, B)
        self.L = loss_matrix(scn.eta_total, B + 1)
        self.C_rec_inv = np.linalg.inv(self.C_rec.entries)


def run_point(scn: ExperimentScenario, alpha: float, point_index: int = 0,
              _context: _ScanContext | None = None) -> WignerSample:
    """Simulate all runs at one phase-space point.

    Each run draws an empirical photon-number ensemble of the truncated
    detected statistics and convolves it with the generation TMD response to
    obtain click statistics (the detector response is exact, so only the
    ensemble is stochastic). The degraded Wigner value deconvolves the clicks
    with the reconstruction TMD only; the reconstructed value additionally
    inverts the loss. Reliability is evaluated on the pooled ensemble.
    """
    ctx = _context if _context is not None else _ScanContext(scn)
    B = ctx.bins
    pdet = detected_photon_stats(scn, alpha)
    trunc = pdet[: B + 1] / pdet[: B + 1].sum()
    overflow = overflow_mass(scn, alpha)

    freqs = []
    w_deg = np.empty(scn.runs)
    w_rec = np.empty(scn.runs)
    failed = None
    for r in range(scn.runs):
        rng = point_rng(scn.rng_seed, point_index, r)
        fphot = sample_clicks(trunc, scn.events_per_run, rng)
        freqs.append(fphot)
        clicks = ClickDistribution(ctx.C_gen.entries @ fphot)
        degraded = ctx.C_rec_inv @ clicks.probs
        w_deg[r] = ps.parity_wigner(degraded)
        try:
            rho = invert_clicks(clicks, ctx.C_rec, ctx.L)
            w_rec[r] = ps.parity_wigner(rho.values)
        except InversionError:
            w_rec[r] = np.nan
            failed = True

    pooled = ClickDistribution(ctx.C_gen.entries @ np.mean(freqs, axis=0))
    try:
        rho_pooled = invert_clicks(pooled, ctx.C_rec, ctx.L)
        report = reliability(rho_pooled, scn.reliability_threshold,
                             overflow, scn.overflow_limit)
        inverted = rho_pooled.values
    except InversionError:
        report = ReliabilityReport(
            min_component=-np.inf, threshold=scn.reliability_threshold,
            overflow_mass=overflow, overflow_limit=scn.overflow_limit,
            reliable=False)
        inverted = np.full(B + 1, np.nan)
        failed = True
    if failed:
        report = replace(report, reliable=False)

    degraded_pooled = ctx.C_rec_inv @ pooled.probs
    return WignerSample(
        alpha=float(alpha),
        W_degraded_mean=float(np.mean(w_deg)),
        W_degraded_std=float(np.std(w_deg, ddof=1)),
        W_reconstructed_mean=float(np.mean(w_rec)),
        W_reconstructed_std=float(np.std(w_rec, ddof=1)),
        reliability=report,
        degraded_stats=degraded_pooled,
        inverted_stats=inverted,
    )


def scan(scn: ExperimentScenario) -> ScanResult:
    """Run every grid point and locate the reliable-range boundary.

    The boundary is the right endpoint of the longest contiguous run of
    reliable grid points (ties resolved toward larger displacement). With
    unbalanced generation couplers the inversion can show a small systematic
    instability at the smallest displacements, so a strict
    all-points-below-must-pass rule would discard an otherwise clean range.
    """
    if not scn.alpha_grid:
        raise ValueError("displacement grid is empty")
    if any(b > a for a, b in zip(scn.alpha_grid[1:], scn.alpha_grid[:-1])):
        raise ValueError("displacement grid must be ascending")
    ctx = _ScanContext(scn)
    samples = [run_point(scn, a, point_index=i, _context=ctx)
               for i, a in enumerate(scn.alpha_grid)]
    return ScanResult(samples=samples, boundary=_boundary(samples))


def _boundary(samples) -> float | None:
    flags = [s.reliability.reliable for s in samples]
    best_len, best_end = 0, None
    start = None
    for i, ok in enumerate(flags):
        if ok and start is None:
            start = i
        if start is not None and (not ok or i == len(flags) - 1):
            end = i if ok else i - 1
            if end - start + 1 >= best_len:
                best_len, best_end = end - start + 1, end
            start = None
    return None if best_end is None else samples[best_end].alpha


def write_scan_csv(path, samples) -> None:
    """Per-point scan summary, byte-stable for a fixed seed."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["alpha", "W_degraded_mean", "W_degraded_std",
                    "W_reconstructed_mean", "W_reconstructed_std",
                    "min_component", "overflow_mass", "reliable"])
        for s in samples:
            w.writerow([
                f"{s.alpha:.17g}",
                f"{s.W_degraded_mean:.17g}", f"{s.W_degraded_std:.17g}",
                f"{s.W_reconstructed_mean:.17g}", f"{s.W_reconstructed_std:.17g}",
                f"{s.reliability.min_component:.17g}",
                f"{s.reliability.overflow_mass:.17g}",
                str(s.reliability.reliable).lower(),
            ])


def write_points_json(path, samples) -> None:
    """Pooled degraded and inverted photon statistics per grid point."""
    payload = [
        {
            "alpha": s.alpha,
            "degraded": [float(x) for x in s.degraded_stats],
            "inverted": [float(x) for x in s.inverted_stats],
        }
        for s in samples
    ]
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
