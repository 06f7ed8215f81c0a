"""Gaussian states in the chord representation.

The chord function of a density operator is the double Fourier transform of
its Wigner function,

    w(k, s) = integral dq dp  e^(i*k*q + i*s*p) W(q, p),

so w(0, 0) = 1 encodes unit trace.  A Gaussian state is

    w(r) = exp(-r.T @ Sigma @ r / 2 + i mu.r),        r = (k, s),

where Sigma is the ordinary phase-space covariance matrix (Sigma[0,0] is the
position variance, Sigma[1,1] the momentum variance) and mu = (<q>, <p>).
Hbar = 1 and quadratures are scaled so the ground state has Sigma = I/2.

Physical covariances satisfy det Sigma >= 1/4.  Some of the supported
dissipation models genuinely violate this bound at low temperature, so a
violation warns (:class:`UnphysicalStateWarning`) instead of raising; a
covariance that is not symmetric positive definite is rejected outright
because the state would not even be normalizable.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ChordVector",
    "GaussianChordState",
    "WignerGaussian",
    "UnphysicalStateWarning",
    "coherent_state",
    "evaluate",
    "energy",
    "to_wigner",
    "marginal",
]

# Slack below the det Sigma >= 1/4 purity bound before warning, so states on
# the bound (coherent states) never warn through float noise.
_PURITY_SLACK = 1e-9


class UnphysicalStateWarning(UserWarning):
    """Covariance violates the uncertainty bound det Sigma >= 1/4."""


@dataclass(frozen=True)
class ChordVector:
    k: float
    s: float

    def as_array(self) -> np.ndarray:
        return np.array([self.k, self.s])


def _chord_array(r) -> np.ndarray:
    if isinstance(r, ChordVector):
        return r.as_array()
    arr = np.asarray(r, dtype=float)
    if arr.shape != (2,):
        raise ValueError(f"chord point must have shape (2,), got {arr.shape}")
    return arr


@dataclass(frozen=True)
class GaussianChordState:
    """Gaussian chord function exp(-r.T Sigma r / 2 + i mu.r)."""

    sigma_mat: np.ndarray
    mu: np.ndarray

    def __post_init__(self):
        sm = np.asarray(self.sigma_mat, dtype=float)
        mu = np.asarray(self.mu, dtype=float)
        if sm.shape != (2, 2):
            raise ValueError(f"covariance must be 2x2, got shape {sm.shape}")
        if mu.shape != (2,):
            raise ValueError(f"mean must have shape (2,), got {mu.shape}")
        scale = max(1.0, float(np.max(np.abs(sm))))
        if abs(sm[0, 1] - sm[1, 0]) > 1e-9 * scale:
            raise ValueError("covariance must be symmetric")
        sm = 0.5 * (sm + sm.T)
        det = sm[0, 0] * sm[1, 1] - sm[0, 1] * sm[1, 0]
        if sm[0, 0] <= 0.0 or det <= 0.0:
            raise ValueError("covariance must be positive definite")
        if det < 0.25 - _PURITY_SLACK:
            warnings.warn(
                f"det Sigma = {det:.6g} violates the uncertainty bound 1/4",
                UnphysicalStateWarning,
                stacklevel=2,
            )
        object.__setattr__(self, "sigma_mat", sm)
        object.__setattr__(self, "mu", mu)


def coherent_state(x0: float, p0: float) -> GaussianChordState:
    """Minimal-uncertainty state centered at (x0, p0); Sigma = I/2."""
    return GaussianChordState(0.5 * np.eye(2), np.array([float(x0), float(p0)]))


def evaluate(state: GaussianChordState, r) -> complex:
    """Value of the chord function at r = (k, s)."""
    rr = _chord_array(r)
    quad = rr @ state.sigma_mat @ rr
    return complex(np.exp(-0.5 * quad + 1j * (state.mu @ rr)))


def energy(state: GaussianChordState) -> float:
    """Mean oscillator energy <(q^2 + p^2)/2> = tr(Sigma)/2 + |mu|^2/2.

    Equals minus half the chord-space Laplacian of w at the origin.
    """
    return 0.5 * float(np.trace(state.sigma_mat)) + 0.5 * float(state.mu @ state.mu)


@dataclass(frozen=True)
class WignerGaussian:
    """Normalized Wigner density amplitude * exp(-quadratic in (q, p)).

    ``widths`` holds the exponent coefficients (w_qq, w_qp, w_pp) so that

        W(q, p) = amplitude * exp(-(w_qq dq^2 + w_qp dq dp + w_pp dp^2))

    with (dq, dp) = (q, p) - center.  The density integrates to 1, which
    pins amplitude = sqrt(4*w_qq*w_pp - w_qp^2) / (2*pi).
    """

    widths: tuple[float, float, float]
    center: np.ndarray
    amplitude: float

    def density(self, q, p):
        """Evaluate W on scalars or broadcastable arrays."""
        dq = np.asarray(q, dtype=float) - self.center[0]
        dp = np.asarray(p, dtype=float) - self.center[1]
        wqq, wqp, wpp = self.widths
        return self.amplitude * np.exp(-(wqq * dq * dq + wqp * dq * dp + wpp * dp * dp))


def to_wigner(state: GaussianChordState) -> WignerGaussian:
    """Invert the chord transform in closed form.

    W(q, p) = exp(-(dq, dp) Sigma^{-1} (dq, dp)^T / 2) / (2*pi*sqrt(det Sigma)).
    """
    sm = state.sigma_mat
    det = sm[0, 0] * sm[1, 1] - sm[0, 1] * sm[1, 0]
    if sm[0, 0] <= 0.0 or det <= 0.0:
        raise ValueError("covariance must be positive definite")
    wqq = sm[1, 1] / (2.0 * det)
    wqp = -sm[0, 1] / det
    wpp = sm[0, 0] / (2.0 * det)
    amplitude = 1.0 / (2.0 * math.pi * math.sqrt(det))
    return WignerGaussian((wqq, wqp, wpp), state.mu.copy(), amplitude)


def marginal(state: GaussianChordState, axis: str) -> tuple[float, float]:
    """(mean, variance) of the normalized position or momentum distribution."""
    if axis == "position":
        return float(state.mu[0]), float(state.sigma_mat[0, 0])
    if axis == "momentum":
        return float(state.mu[1]), float(state.sigma_mat[1, 1])
    raise ValueError(f"axis must be 'position' or 'momentum', got {axis!r}")
