"""Analytic photon-number statistics of displaced Fock states.

All states are represented by their Fock-diagonal only (probability vectors
over photon number n); the rest of the pipeline never needs coherences.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

import numpy as np
from scipy.special import eval_genlaguerre, gammaln

TAIL_TOL = 1e-9


class TruncationError(ValueError):
    """Raised when a requested cutoff leaves more than the tail budget."""


@dataclass(frozen=True)
class PhotonDistribution:
    """Probability vector over photon number n, truncated at ``cutoff``.

    Entries are nonnegative and sum to 1 up to the truncation budget.
    """

    probs: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        object.__setattr__(self, "probs", p)
        if p.ndim != 1 or p.size == 0:
            raise ValueError("probs must be a nonempty 1-d vector")
        if np.any(p < -1e-12):
            raise ValueError("negative probability entry: %r" % p.min())
        if p.sum() > 1.0 + 1e-9:
            raise ValueError("probabilities sum to more than 1")

    @property
    def cutoff(self) -> int:
        return self.probs.size - 1

    @property
    def tail_mass(self) -> float:
        """Probability mass lost to truncation."""
        return max(0.0, 1.0 - float(self.probs.sum()))

    def require_tail(self, tail_tol: float = TAIL_TOL) -> "PhotonDistribution":
        if self.tail_mass > tail_tol:
            raise TruncationError(
                f"truncated tail {self.tail_mass:.3e} exceeds budget {tail_tol:.1e};"
                " increase the cutoff"
            )
        return self

    def __len__(self) -> int:
        return self.probs.size

    def __getitem__(self, n):
        return self.probs[n]


@dataclass(frozen=True)
class DisplacementSpec:
    """Relation between the lab fields and the effective displacement.

    gamma is the amplitude added at the displacing beamsplitter,
    beta the coherent reference field, alpha_total the displacement seen
    in the reconstructed phase space.
    """

    gamma: complex
    beta: complex
    alpha_total: complex

    @classmethod
    def from_beta(cls, beta: complex, T: float, eta1: float = 1.0) -> "DisplacementSpec":
        if not 0.0 < T <= 1.0:
            raise ValueError("T must be in (0, 1]")
        gamma = np.sqrt(1.0 - T) * beta
        return cls(gamma=gamma, beta=beta, alpha_total=gamma / np.sqrt(eta1 * T))


@dataclass(frozen=True)
class OverlapModel:
    """Effective parameters of the imperfect-overlap displacement.

    Only the product overlap M = t1*t2 enters any implemented formula, so the
    individual mode-match fractions are not stored.
    """

    overlap_M: float
    xi: complex
    zeta_sq: float

    @classmethod
    def from_physical(cls, beta: complex, T: float, M: float) -> "OverlapModel":
        if not 0.0 <= M <= 1.0:
            raise ValueError("overlap M must lie in [0, 1]")
        if not 0.0 < T <= 1.0:
            raise ValueError("T must be in (0, 1]")
        xi = np.sqrt(M) * np.sqrt((1.0 - T) / T) * beta
        zeta_sq = (1.0 - M) * (1.0 - T) * abs(beta) ** 2
        return cls(overlap_M=M, xi=xi, zeta_sq=zeta_sq)


def displaced_fock_prob(m: int, n: int, gamma: complex) -> float:
    """|<n|D(gamma)|m>|^2 via the associated-Laguerre closed form.

    Log-factorial accumulation keeps this stable out to n ~ 64.
    """
    x = abs(gamma) ** 2
    p, q = min(m, n), max(m, n)
    if x == 0.0:
        return 1.0 if n == m else 0.0
    log_pref = -x + (q - p) * np.log(x) + gammaln(p + 1) - gammaln(q + 1)
    lag = eval_genlaguerre(p, q - p, x)
    return float(np.exp(log_pref) * lag * lag)


def displaced_fock(m: int, gamma: complex, cutoff: int,
                   tail_tol: float = TAIL_TOL) -> PhotonDistribution:
    """Photon-number distribution of the displaced Fock state D(gamma)|m>."""
    if m < 0:
        raise ValueError("Fock index m must be >= 0")
    if cutoff < 0:
        raise ValueError("cutoff must be >= 0")
    probs = np.array([displaced_fock_prob(m, n, gamma) for n in range(cutoff + 1)])
    return PhotonDistribution(probs).require_tail(tail_tol)


def lossy_displaced_fock(m: int, gamma: complex, T: float, cutoff: int,
                         tail_tol: float = TAIL_TOL) -> PhotonDistribution:
    """Binomial loss mixture of displaced Fock states.

    probs[n] = sum_j C(m,j) T^j (1-T)^(m-j) |<n|D(gamma)|j>|^2.
    """
    if not 0.0 < T <= 1.0:
        raise ValueError("T must be in (0, 1]; model T=0 as a vacuum input")
    out = np.zeros(cutoff + 1)
    for j in range(m + 1):
        w = comb(m, j) * T**j * (1.0 - T) ** (m - j)
        if w > 0.0:
            out += w * displaced_fock(j, gamma, cutoff, tail_tol=np.inf).probs
    return PhotonDistribution(out).require_tail(tail_tol)


def closed_form_fock1(gamma: complex, T: float, n: int) -> float:
    """Closed-form photon-number probability of the lossy displaced |1>.

    The singular |gamma| -> 0 terms are expanded before division, so the
    analytic limit (binomial loss on one photon) is returned at gamma = 0.
    """
    if not 0.0 < T <= 1.0:
        raise ValueError("T must be in (0, 1]")
    if n < 0:
        raise ValueError("n must be >= 0")
    x = abs(gamma) ** 2
    lead = (1.0 - T) * _poisson_term(x, n)
    if n == 0:
        osc = T * np.exp(-x) * x
    else:
        osc = T * np.exp(-x + (n - 1) * _safe_log(x, n - 1) - gammaln(n + 1)) * (n - x) ** 2
    return float(lead + osc)


def closed_form_fock2(gamma: complex, T: float, n: int) -> float:
    """Closed-form photon-number probability of the lossy displaced |2>."""
    if not 0.0 < T <= 1.0:
        raise ValueError("T must be in (0, 1]")
    if n < 0:
        raise ValueError("n must be >= 0")
    x = abs(gamma) ** 2
    termA = (1.0 - T) ** 2 * _poisson_term(x, n)
    if n == 0:
        termB = 2.0 * (1.0 - T) * T * np.exp(-x) * x
        termC = 0.5 * T**2 * np.exp(-x) * x**2
    elif n == 1:
        termB = 2.0 * (1.0 - T) * T * np.exp(-x) * (1.0 - x) ** 2
        termC = 0.5 * T**2 * np.exp(-x) * x * (x - 2.0) ** 2
    else:
        base = np.exp(-x + (n - 2) * _safe_log(x, n - 2) - gammaln(n + 1))
        termB = 2.0 * (1.0 - T) * T * base * x * (n - x) ** 2
        termC = 0.5 * T**2 * base * ((n - x) ** 2 - n) ** 2
    return float(termA + termB + termC)


def poisson(mean: float, cutoff: int, tail_tol: float = TAIL_TOL) -> PhotonDistribution:
    """Poissonian photon-number distribution."""
    if mean < 0.0:
        raise ValueError("Poisson mean must be >= 0")
    if mean == 0.0:
        probs = np.zeros(cutoff + 1)
        probs[0] = 1.0
        return PhotonDistribution(probs)
    n = np.arange(cutoff + 1)
    probs = np.exp(n * np.log(mean) - mean - gammaln(n + 1))
    return PhotonDistribution(probs).require_tail(tail_tol)


def convolve(a: PhotonDistribution, b: PhotonDistribution) -> PhotonDistribution:
    """Distribution of the sum of two independent photon counts.

    Truncated at the larger of the two cutoffs; the normalization deficit is
    bounded by the sum of the input tails.
    """
    out_len = max(len(a), len(b))
    full = np.convolve(a.probs, b.probs)
    return PhotonDistribution(full[:out_len])


def binomial_thin(probs: np.ndarray, eta: float) -> np.ndarray:
    """Photon statistics after each photon survives independently with
    probability eta (detection at efficiency eta)."""
    if not 0.0 < eta <= 1.0:
        raise ValueError("eta must be in (0, 1]")
    p = np.asarray(probs, dtype=float)
    out = np.zeros_like(p)
    for n in range(p.size):
        if p[n] == 0.0:
            continue
        for k in range(n + 1):
            out[k] += p[n] * comb(n, k) * eta**k * (1.0 - eta) ** (n - k)
    return out


def mismatch_distribution(input_dist: PhotonDistribution, beta: complex, T: float,
                          M: float, cutoff: int) -> PhotonDistribution:
    """Detected statistics under imperfect mode overlap.

    The matched fraction of the signal is displaced by xi and detected with
    efficiency T; the unmatched reference light contributes an independent
    Poissonian of mean zeta_sq. The result is the convolution of the two.
    """
    model = OverlapModel.from_physical(beta, T, M)
    signal = np.zeros(cutoff + 1)
    for m, w in enumerate(input_dist.probs):
        if w > 0.0:
            d = displaced_fock(m, model.xi, cutoff, tail_tol=np.inf).probs
            signal += w * binomial_thin(d, T)
    background = poisson(model.zeta_sq, cutoff, tail_tol=np.inf)
    out = np.convolve(signal, background.probs)[: cutoff + 1]
    return PhotonDistribution(out)


def parity_wigner(stats) -> float:
    """Wigner value (2/pi) * sum_n (-1)^n stats[n].

    Accepts a PhotonDistribution, a quasi-distribution, or a plain vector.
    """
    v = np.asarray(getattr(stats, "probs", getattr(stats, "values", stats)), dtype=float)
    signs = np.where(np.arange(v.size) % 2 == 0, 1.0, -1.0)
    return float(2.0 / np.pi * np.dot(signs, v))


def fock(m: int, cutoff: int) -> PhotonDistribution:
    """Fock state |m> as a photon-number distribution."""
    if not 0 <= m <= cutoff:
        raise ValueError("need 0 <= m <= cutoff")
    probs = np.zeros(cutoff + 1)
    probs[m] = 1.0
    return PhotonDistribution(probs)


def _poisson_term(x: float, n: int) -> float:
    if x == 0.0:
        return 1.0 if n == 0 else 0.0
    return float(np.exp(-x + n * np.log(x) - gammaln(n + 1)))


def _safe_log(x: float, power: int) -> float:
    # log(x) guarded for x == 0 when it is only ever multiplied by power 0
    if x == 0.0:
        return 0.0 if power == 0 else -np.inf
    return float(np.log(x))
