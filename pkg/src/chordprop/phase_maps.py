"""Evolution maps, dissipation kernels and drive vectors for the damped oscillator.

In the chord representation (the Fourier transform of the Wigner function,
see chord_state) the reduced dynamics of a damped harmonic oscillator act on
the chord coordinates r = (k, s) through

* a linear map of the plane, returned by :func:`evolution_map`,
* a quadratic attenuation form accumulated along the motion, returned by
  :func:`alpha_kernel` / :func:`dissipation_kernel`,
* and, when an external force lambda*cos(nu*t) drives the oscillator, a real
  phase vector returned by :func:`drive_vector`.

Time is measured in units of the oscillator period (sigma = omega_0 * t) and
all rates are dimensionless.  Three map families cover the supported
dissipation mechanisms, selected by :class:`MapKind`:

``FINITE_TEMP``
    rotation with an exponential envelope, prefactor e^(gamma*sigma) on the
    rotation matrix; generator [[gamma, 1], [-1, gamma]].  Used by the
    thermal quantum-optical master equation at any temperature.
``CL_UNDER``
    underdamped Brownian motion at rate beta < 2, oscillation frequency
    omega = sqrt(1 - beta^2/4); generator [[0, 1], [-1, beta]].
``CL_OVER``
    overdamped Brownian motion at rate beta > 2, with mu = sqrt(beta^2/4 - 1)
    replacing omega and hyperbolic functions replacing trigonometric ones.

Every family satisfies map(0) = I, map(a) @ map(b) = map(a + b), and a pure
exponential determinant: e^(2*gamma*sigma) for FINITE_TEMP, e^(beta*sigma)
for both Brownian regimes.  beta = 2 is critically damped and belongs to
neither Brownian family; requesting it raises :class:`RegimeError` rather
than silently interpolating.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

__all__ = [
    "MapKind",
    "KernelKind",
    "RegimeError",
    "EvolutionMap",
    "QuadraticKernel",
    "DriveVector",
    "generator",
    "evolution_map",
    "compose",
    "inverse",
    "alpha_kernel",
    "dissipation_kernel",
    "drive_vector",
]

# Rates below this are treated as exactly zero where a formula would divide
# by the rate (the limit is always finite and smooth).
_EPS_RATE = 1e-12


class RegimeError(ValueError):
    """A damping rate falls outside the regime a closed form covers."""


class MapKind(Enum):
    FINITE_TEMP = "finite_temp"
    CL_UNDER = "cl_under"
    CL_OVER = "cl_over"


class KernelKind(Enum):
    """Which defining integral a QuadraticKernel holds."""

    ALPHA_IDENTITY = "alpha_identity"  # alpha(sigma) * I, FINITE_TEMP
    A = "A"  # second moments of row 2 of the underdamped map
    B = "B"  # second moments of row 2 of the overdamped map
    C = "C"  # row-1 x row-2 cross moments of the overdamped map


@dataclass(frozen=True)
class EvolutionMap:
    """A 2x2 chord-plane map together with the data that produced it."""

    entries: np.ndarray
    kind: MapKind
    rate: float
    sigma: float


@dataclass(frozen=True)
class QuadraticKernel:
    """Symmetric 2x2 matrix of accumulated dissipation moments.

    For kind C the entry ``entries[0][1]`` holds the full coefficient of the
    k*s cross term of the defining integral, i.e. the integral of
    (m11*m22 + m12*m21).  A quadratic form r.T @ Q @ r reproducing that
    coefficient needs Q with off-diagonal C12/2; models.propagate does this.
    """

    entries: np.ndarray
    kind: KernelKind


@dataclass(frozen=True)
class DriveVector:
    """Accumulated drive response d = (d_k, d_s); the chord factor is e^(-i d.r)."""

    components: np.ndarray
    amplitude: float
    frequency: float


def _check_regime(kind: MapKind, rate: float) -> None:
    if not math.isfinite(rate) or rate < 0.0:
        raise RegimeError(f"damping rate must be finite and nonnegative, got {rate}")
    if kind is MapKind.CL_UNDER and rate >= 2.0:
        if rate == 2.0:
            raise RegimeError("beta = 2 is critically damped and covered by neither Brownian regime")
        raise RegimeError(f"underdamped map requires beta < 2, got beta = {rate}")
    if kind is MapKind.CL_OVER and rate <= 2.0:
        if rate == 2.0:
            raise RegimeError("beta = 2 is critically damped and covered by neither Brownian regime")
        raise RegimeError(f"overdamped map requires beta > 2, got beta = {rate}")


def generator(kind: MapKind, rate: float) -> np.ndarray:
    """Infinitesimal generator G of the family, map(sigma) = expm(sigma*G)."""
    _check_regime(kind, rate)
    if kind is MapKind.FINITE_TEMP:
        return np.array([[rate, 1.0], [-1.0, rate]])
    return np.array([[0.0, 1.0], [-1.0, rate]])


def evolution_map(kind: MapKind, rate: float, sigma: float) -> EvolutionMap:
    """Closed-form chord-plane map for one dissipation family.

    ``rate`` is gamma for FINITE_TEMP and beta for the Brownian kinds.
    ``sigma`` may be negative; propagation of states uses map(-sigma).
    """
    _check_regime(kind, rate)
    if kind is MapKind.FINITE_TEMP:
        pref = math.exp(rate * sigma)
        c, s = math.cos(sigma), math.sin(sigma)
        m = np.array([[c, s], [-s, c]])
        return EvolutionMap(pref * m, kind, rate, sigma)

    if kind is MapKind.CL_UNDER:
        beta = rate
        omega = math.sqrt(1.0 - 0.25 * beta * beta)
        pref = math.exp(0.5 * beta * sigma)
        c = math.cos(omega * sigma)
        s = math.sin(omega * sigma)
        h = 0.5 * beta / omega
        m = np.array([[c - h * s, s / omega], [-s / omega, c + h * s]])
        return EvolutionMap(pref * m, kind, rate, sigma)

    # Overdamped: assemble from the two pure exponentials e^((beta/2 +- mu)*sigma)
    # instead of e^(beta*sigma/2)*cosh(mu*sigma), which would overflow long
    # before the entries themselves do for sigma < 0.
    beta = rate
    mu = math.sqrt(0.25 * beta * beta - 1.0)
    h = 0.5 * beta / mu
    ep = math.exp((0.5 * beta + mu) * sigma)
    em = math.exp((0.5 * beta - mu) * sigma)
    off = 0.5 * (ep - em) / mu
    m = np.array(
        [
            [0.5 * ((1.0 - h) * ep + (1.0 + h) * em), off],
            [-off, 0.5 * ((1.0 + h) * ep + (1.0 - h) * em)],
        ]
    )
    return EvolutionMap(m, kind, rate, sigma)


def compose(a: EvolutionMap, b: EvolutionMap) -> EvolutionMap:
    """Matrix product of two maps from the same family; durations add."""
    if a.kind is not b.kind or a.rate != b.rate:
        raise ValueError("can only compose maps sharing kind and rate")
    return EvolutionMap(a.entries @ b.entries, a.kind, a.rate, a.sigma + b.sigma)


def inverse(a: EvolutionMap) -> EvolutionMap:
    """The map of duration -sigma (exact inverse, no matrix inversion)."""
    return evolution_map(a.kind, a.rate, -a.sigma)


def alpha_kernel(gamma: float, sigma: float) -> float:
    """Accumulated attenuation weight (1 - e^(-2*gamma*sigma)) / (2*gamma).

    Monotone nondecreasing in sigma, saturating at 1/(2*gamma); the
    gamma -> 0 limit is sigma.
    """
    if not math.isfinite(gamma) or gamma < 0.0:
        raise RegimeError(f"damping rate must be finite and nonnegative, got {gamma}")
    if sigma < 0.0:
        raise ValueError(f"duration must be nonnegative, got {sigma}")
    if gamma < _EPS_RATE:
        return sigma
    return -math.expm1(-2.0 * gamma * sigma) / (2.0 * gamma)


def _trig_moments(beta: float, omega: float, sigma: float) -> tuple[float, float, float]:
    # Integrals of e^(-beta*t) * {1, cos(2*omega*t), sin(2*omega*t)} over [0, sigma].
    # The denominators use beta^2 + 4*omega^2 = 4, exact for this map family.
    e = math.exp(-beta * sigma)
    c2 = math.cos(2.0 * omega * sigma)
    s2 = math.sin(2.0 * omega * sigma)
    if beta < _EPS_RATE:
        i0 = sigma
    else:
        i0 = -math.expm1(-beta * sigma) / beta
    ic = (beta - e * (beta * c2 - 2.0 * omega * s2)) / 4.0
    is_ = (2.0 * omega - e * (beta * s2 + 2.0 * omega * c2)) / 4.0
    return i0, ic, is_


def _hyp_moments(beta: float, mu: float, sigma: float) -> tuple[float, float, float]:
    # Integrals of e^(-beta*t) * {1, cosh(2*mu*t), sinh(2*mu*t)} over [0, sigma],
    # split into the pure exponentials e^((2*mu-beta)*t) and e^(-(2*mu+beta)*t)
    # whose exponents are both nonpositive (mu < beta/2), so nothing overflows.
    ta = math.expm1((2.0 * mu - beta) * sigma) / (2.0 * mu - beta)
    tb = -math.expm1(-(2.0 * mu + beta) * sigma) / (2.0 * mu + beta)
    j0 = -math.expm1(-beta * sigma) / beta
    jc = 0.5 * (ta + tb)
    js = 0.5 * (ta - tb)
    return j0, jc, js


def dissipation_kernel(
    kind: MapKind, rate: float, sigma: float
) -> QuadraticKernel | tuple[QuadraticKernel, QuadraticKernel]:
    """Closed-form accumulated dissipation moments of duration sigma >= 0.

    Returns one kernel for FINITE_TEMP (alpha * I) and CL_UNDER (the matrix
    A of second moments of the returning map's second row), and the pair
    (B, C) for CL_OVER, where B collects the second-row second moments and C
    the mixed first-row/second-row moments.  All kernels vanish at sigma = 0;
    alpha*I, A and B are positive semidefinite for every sigma, while C is
    indefinite (its long-time limit is diag(1/2, 0)).
    """
    _check_regime(kind, rate)
    if sigma < 0.0:
        raise ValueError(f"duration must be nonnegative, got {sigma}")

    if kind is MapKind.FINITE_TEMP:
        a = alpha_kernel(rate, sigma)
        return QuadraticKernel(a * np.eye(2), KernelKind.ALPHA_IDENTITY)

    if kind is MapKind.CL_UNDER:
        beta = rate
        omega = math.sqrt(1.0 - 0.25 * beta * beta)
        i0, ic, is_ = _trig_moments(beta, omega, sigma)
        w2 = omega * omega
        a11 = (i0 - ic) / (2.0 * w2)
        a12 = is_ / (2.0 * omega) - beta * (i0 - ic) / (4.0 * w2)
        a22 = (
            0.5 * (i0 + ic)
            - 0.5 * beta * is_ / omega
            + beta * beta * (i0 - ic) / (8.0 * w2)
        )
        m = np.array([[a11, a12], [a12, a22]])
        return QuadraticKernel(m, KernelKind.A)

    beta = rate
    mu = math.sqrt(0.25 * beta * beta - 1.0)
    j0, jc, js = _hyp_moments(beta, mu, sigma)
    m2 = mu * mu
    b11 = (jc - j0) / (2.0 * m2)
    b12 = js / (2.0 * mu) - beta * (jc - j0) / (4.0 * m2)
    b22 = (
        0.5 * (j0 + jc)
        - 0.5 * beta * js / mu
        + beta * beta * (jc - j0) / (8.0 * m2)
    )
    c11 = js / (2.0 * mu) + beta * (jc - j0) / (4.0 * m2)
    c12 = 0.5 * (j0 + jc) - (beta * beta + 4.0) * (jc - j0) / (8.0 * m2)
    c22 = -js / (2.0 * mu) + beta * (jc - j0) / (4.0 * m2)
    bmat = QuadraticKernel(np.array([[b11, b12], [b12, b22]]), KernelKind.B)
    cmat = QuadraticKernel(np.array([[c11, c12], [c12, c22]]), KernelKind.C)
    return bmat, cmat


def drive_vector(
    kind: MapKind,
    rate: float,
    amplitude: float,
    frequency: float,
    tau: float,
    sigma: float,
) -> DriveVector:
    """Accumulated response to the force amplitude*cos(frequency*t).

    ``tau`` is the absolute time at which the evolution window starts, so the
    drive phase is evaluated along [tau, tau + sigma].  Only FINITE_TEMP and
    CL_UNDER have closed forms; CL_OVER is rejected.  An exactly resonant
    drive on an undamped oscillator (rate 0, frequency matching the free
    oscillation) secularly diverges and is rejected as well.
    """
    if kind is MapKind.CL_OVER:
        raise RegimeError("the overdamped family has no driven closed form")
    _check_regime(kind, rate)
    if amplitude < 0.0:
        raise ValueError(f"drive amplitude must be nonnegative, got {amplitude}")

    if kind is MapKind.FINITE_TEMP:
        gamma = rate
        osc = 1.0
    else:
        gamma = 0.5 * rate
        osc = math.sqrt(1.0 - 0.25 * rate * rate)

    dm = complex(frequency - osc, -gamma)
    dp = complex(frequency + osc, -gamma)
    if min(abs(dm), abs(dp)) < 1e-15:
        raise RegimeError("resonant drive on an undamped oscillator has no bounded closed form")

    if amplitude == 0.0 or sigma == 0.0:
        return DriveVector(np.zeros(2), amplitude, frequency)

    phase = cmath.exp(1j * frequency * (tau + sigma))
    pm = phase * (cmath.exp(-1j * dm * sigma) - 1.0) / dm
    pp = phase * (cmath.exp(-1j * dp * sigma) - 1.0) / dp
    d1 = 0.5 * amplitude * (pm - pp).real / osc
    d2 = -0.5 * amplitude * (pm + pp).imag
    if kind is MapKind.CL_UNDER:
        d2 -= 0.5 * rate * d1
    return DriveVector(np.array([d1, d2]), amplitude, frequency)
