"""Dissipation models and exact propagation of Gaussian chord states.

Seven variants are supported.  Four are autonomous:

* ``FINITE_TEMP``: thermal quantum-optical damping at coupling gamma and
  dimensionless temperature D (thermal occupation nbar = 1/(e^(1/D) - 1)).
* ``ZERO_TEMP`` / ``HIGH_TEMP``: the D -> 0 and D >> 1 limits of the same
  equation, kept as their own closed forms.
* ``CL_UNDER``: underdamped Brownian motion, beta = 2*gamma < 2.
* ``CL_OVER``: overdamped Brownian motion, beta > 2, with diffusion
  coefficients (Omega, Lambda, Gamma) fixed by the temperature regime.

Two add a classical force amplitude*cos(frequency*t) on top of the
finite-temperature and underdamped mechanisms (``DRIVEN_FT``,
``DRIVEN_CL``).  The drive shifts the mean of the chord Gaussian and leaves
its covariance untouched.

Propagation is exact: with L the returning chord map of duration sigma and
K(sigma) the accumulated dissipation form,

    Sigma' = L.T @ Sigma @ L + 2 K,      mu' = L.T @ mu - d,

where d is the drive response (zero if undriven).  `propagate_pointwise`
applies the same solution to a single chord value of an arbitrary
(not necessarily Gaussian) initial chord function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable

import numpy as np

from .chord_state import GaussianChordState, _chord_array
from .phase_maps import (
    MapKind,
    RegimeError,
    alpha_kernel,
    dissipation_kernel,
    drive_vector,
    evolution_map,
)

__all__ = [
    "Variant",
    "ODRegime",
    "Drive",
    "ModelParams",
    "propagate",
    "propagate_pointwise",
    "stationary_state",
    "closed_form_energy",
]


class Variant(Enum):
    FINITE_TEMP = "finite_temp"
    ZERO_TEMP = "zero_temp"
    HIGH_TEMP = "high_temp"
    CL_UNDER = "cl_under"
    CL_OVER = "cl_over"
    DRIVEN_FT = "driven_ft"
    DRIVEN_CL = "driven_cl"


_DRIVEN = (Variant.DRIVEN_FT, Variant.DRIVEN_CL)
_CL = (Variant.CL_UNDER, Variant.CL_OVER, Variant.DRIVEN_CL)


class ODRegime(Enum):
    """Temperature regime fixing the overdamped diffusion coefficients."""

    HIGH_T = "high_t"
    LOW_T = "low_t"


@dataclass(frozen=True)
class Drive:
    amplitude: float  # force strength, in units of the natural quadrature scale
    frequency: float  # drive frequency over oscillator frequency


@dataclass(frozen=True)
class ModelParams:
    """Validated parameter set for one dissipation variant.

    gamma is the coupling rate in oscillator units; Brownian variants use
    beta = 2*gamma.  D is the dimensionless temperature k_B T / (hbar w0).
    omega_c (bath cutoff over oscillator frequency) is consumed only by the
    overdamped low-temperature regime.
    """

    variant: Variant
    gamma: float
    D: float = 0.0
    omega_c: float | None = None
    od_regime: ODRegime | None = None
    drive: Drive | None = None

    def __post_init__(self):
        v = self.variant
        if not math.isfinite(self.gamma) or self.gamma <= 0.0:
            raise ValueError(f"gamma must be finite and positive, got {self.gamma}")
        if not math.isfinite(self.D) or self.D < 0.0:
            raise ValueError(f"D must be finite and nonnegative, got {self.D}")

        if v in (Variant.CL_UNDER, Variant.DRIVEN_CL) and self.gamma >= 1.0:
            if self.gamma == 1.0:
                raise RegimeError("gamma = 1 (beta = 2) is critically damped; no regime covers it")
            raise RegimeError(f"underdamped variants need gamma < 1, got {self.gamma}")
        if v is Variant.CL_OVER and self.gamma <= 1.0:
            if self.gamma == 1.0:
                raise RegimeError("gamma = 1 (beta = 2) is critically damped; no regime covers it")
            raise RegimeError(f"the overdamped variant needs gamma > 1, got {self.gamma}")

        if v is Variant.ZERO_TEMP and self.D != 0.0:
            raise ValueError("zero_temp fixes D = 0; use finite_temp for D > 0")
        if v is Variant.HIGH_TEMP and self.D <= 0.0:
            raise ValueError("high_temp requires D > 0")

        if v is Variant.CL_OVER:
            if self.drive is not None:
                raise RegimeError("the overdamped model has no driven solution")
            if self.od_regime is None:
                raise ValueError("cl_over requires od_regime")
            if self.D <= 0.0:
                raise ValueError("cl_over requires D > 0")
            if self.od_regime is ODRegime.LOW_T:
                if self.omega_c is None:
                    raise ValueError("the low-temperature overdamped regime requires omega_c")
                if self.omega_c <= self.beta:
                    raise ValueError(
                        f"omega_c must exceed beta = {self.beta} for a positive diffusion "
                        f"coefficient, got {self.omega_c}"
                    )
            elif self.omega_c is not None:
                raise ValueError("omega_c applies only to the low-temperature overdamped regime")
        else:
            if self.od_regime is not None:
                raise ValueError("od_regime applies only to cl_over")
            if self.omega_c is not None:
                raise ValueError("omega_c applies only to cl_over")

        if v in _DRIVEN:
            if self.drive is None:
                raise ValueError(f"{v.value} requires a drive")
            if not math.isfinite(self.drive.amplitude) or self.drive.amplitude < 0.0:
                raise ValueError("drive amplitude must be finite and nonnegative")
            if not math.isfinite(self.drive.frequency) or self.drive.frequency <= 0.0:
                raise ValueError("drive frequency must be finite and positive")
        elif self.drive is not None and v is not Variant.CL_OVER:
            raise ValueError(f"{v.value} does not accept a drive; use a driven variant")

    # -- derived rates -------------------------------------------------------

    @property
    def beta(self) -> float:
        return 2.0 * self.gamma

    @property
    def nbar(self) -> float:
        """Thermal occupation 1/(e^(1/D) - 1), zero at D = 0."""
        if self.D == 0.0:
            return 0.0
        x = 1.0 / self.D
        if x > 700.0:
            return math.exp(-x)  # e^(1/D) would overflow; relative error ~ e^(-1/D)
        return 1.0 / math.expm1(x)

    @property
    def gamma_plus(self) -> float:
        """Attenuation rate 2*gamma*(nbar + 1/2) of the thermal equation."""
        return 2.0 * self.gamma * (self.nbar + 0.5)

    @property
    def is_driven(self) -> bool:
        return self.variant in _DRIVEN

    @property
    def map_kind(self) -> MapKind:
        if self.variant in (Variant.CL_UNDER, Variant.DRIVEN_CL):
            return MapKind.CL_UNDER
        if self.variant is Variant.CL_OVER:
            return MapKind.CL_OVER
        return MapKind.FINITE_TEMP

    @property
    def map_rate(self) -> float:
        return self.beta if self.variant in _CL else self.gamma

    def overdamped_coefficients(self) -> tuple[float, float, float]:
        """Diffusion coefficients (Omega, Lambda, Gamma) of the overdamped model.

        High temperature: Omega = D, Lambda = 1/(12 D).
        Low temperature:  Omega = (beta/pi) log(omega_c/beta),
                          Lambda = log(beta/(2 pi D)) / (beta pi).
        Both regimes:     Gamma = D + Lambda - Omega.
        """
        if self.variant is not Variant.CL_OVER:
            raise ValueError("overdamped coefficients exist only for cl_over")
        if self.od_regime is ODRegime.HIGH_T:
            om = self.D
            lam = 1.0 / (12.0 * self.D)
        else:
            om = (self.beta / math.pi) * math.log(self.omega_c / self.beta)
            lam = math.log(self.beta / (2.0 * math.pi * self.D)) / (self.beta * math.pi)
        gam = self.D + lam - om
        return om, lam, gam


def _kernel_matrix(params: ModelParams, sigma: float) -> np.ndarray:
    """Accumulated covariance source K with Sigma' = L.T Sigma L + 2 K."""
    v = params.variant
    if v in (Variant.FINITE_TEMP, Variant.DRIVEN_FT):
        return 0.5 * params.gamma_plus * alpha_kernel(params.gamma, sigma) * np.eye(2)
    if v is Variant.ZERO_TEMP:
        return 0.5 * params.gamma * alpha_kernel(params.gamma, sigma) * np.eye(2)
    if v is Variant.HIGH_TEMP:
        return params.gamma * params.D * alpha_kernel(params.gamma, sigma) * np.eye(2)
    if v in (Variant.CL_UNDER, Variant.DRIVEN_CL):
        a = dissipation_kernel(MapKind.CL_UNDER, params.beta, sigma)
        return params.D * params.beta * a.entries
    bmat, cmat = dissipation_kernel(MapKind.CL_OVER, params.beta, sigma)
    om, _, gam = params.overdamped_coefficients()
    c = cmat.entries
    # The C kernel stores the full k*s coefficient; as a quadratic form its
    # off-diagonal carries half of it.
    c_half = np.array([[c[0, 0], 0.5 * c[0, 1]], [0.5 * c[0, 1], c[1, 1]]])
    return om * params.beta * bmat.entries + gam * c_half


def _drive_components(params: ModelParams, tau: float, sigma: float) -> np.ndarray:
    d = drive_vector(
        params.map_kind,
        params.map_rate,
        params.drive.amplitude,
        params.drive.frequency,
        tau,
        sigma,
    )
    return d.components


def propagate(
    state: GaussianChordState, params: ModelParams, tau: float, sigma: float
) -> GaussianChordState:
    """Evolve a Gaussian chord state for a duration sigma starting at time tau.

    tau only matters for driven variants (it sets the drive phase); pass 0
    for autonomous ones.
    """
    ell = evolution_map(params.map_kind, params.map_rate, -sigma).entries
    kmat = _kernel_matrix(params, sigma)
    sig = ell.T @ state.sigma_mat @ ell + 2.0 * kmat
    mu = ell.T @ state.mu
    if params.is_driven:
        mu = mu - _drive_components(params, tau, sigma)
    return GaussianChordState(sig, mu)


def propagate_pointwise(
    w0: Callable[[float, float], complex],
    params: ModelParams,
    tau: float,
    sigma: float,
    r,
) -> complex:
    """Evolved chord-function value at r for an arbitrary initial w0(k, s).

    The solution pulls the point back through the returning map, multiplies
    by the accumulated Gaussian attenuation, and (for driven variants) by the
    drive phase e^(-i d.r).  w0 need not be Gaussian; it must satisfy
    w0(0, 0) = 1 for the result to describe a unit-trace state.
    """
    rr = _chord_array(r)
    ell = evolution_map(params.map_kind, params.map_rate, -sigma).entries
    kmat = _kernel_matrix(params, sigma)
    pulled = ell @ rr
    value = complex(w0(pulled[0], pulled[1])) * math.exp(-float(rr @ kmat @ rr))
    if params.is_driven:
        d = _drive_components(params, tau, sigma)
        value *= complex(np.exp(-1j * float(d @ rr)))
    return value


def stationary_state(params: ModelParams) -> GaussianChordState:
    """Fixed point of the autonomous variants.

    finite_temp: Sigma = (nbar + 1/2) I        zero_temp: Sigma = I/2
    high_temp and cl_under: Sigma = D I
    cl_over: Sigma = diag(Omega + Gamma, Omega)

    Driven variants settle into a limit cycle, not a fixed point, and are
    rejected.
    """
    v = params.variant
    if params.is_driven:
        raise ValueError("driven variants reach a limit cycle, not a stationary state")
    if v is Variant.FINITE_TEMP:
        return GaussianChordState((params.nbar + 0.5) * np.eye(2), np.zeros(2))
    if v is Variant.ZERO_TEMP:
        return GaussianChordState(0.5 * np.eye(2), np.zeros(2))
    if v in (Variant.HIGH_TEMP, Variant.CL_UNDER):
        return GaussianChordState(params.D * np.eye(2), np.zeros(2))
    om, _, gam = params.overdamped_coefficients()
    return GaussianChordState(np.diag([om + gam, om]), np.zeros(2))


def _transient_factor(beta: float, sigma: float, underdamped: bool) -> float:
    """The rotating energy envelope multiplying E(0) in the Brownian forms."""
    q = (1.0 + 0.25 * beta * beta) / (1.0 - 0.25 * beta * beta)
    if underdamped:
        omega = math.sqrt(1.0 - 0.25 * beta * beta)
        c = math.cos(omega * sigma)
        s = math.sin(omega * sigma)
        return math.exp(-beta * sigma) * (c * c + q * s * s)
    # e^(-beta*sigma) cosh^2 and sinh^2 assembled from decaying/growing pure
    # exponentials so large sigma cannot overflow.
    mu = math.sqrt(0.25 * beta * beta - 1.0)
    ep = math.exp((mu - 0.5 * beta) * sigma)
    em = math.exp(-(mu + 0.5 * beta) * sigma)
    ch = 0.5 * (ep + em)
    sh = 0.5 * (ep - em)
    return ch * ch - q * sh * sh


def closed_form_energy(params: ModelParams, e0: float, tau: float, sigma: float) -> float:
    """Mean energy after a duration sigma, from the initial energy e0 alone.

    These are the model-specific textbook transients.  The thermal family is
    exact for every Gaussian initial state.  The Brownian forms are exact
    only when the initial covariance is isotropic and the initial mean is
    zero, and the driven forms additionally assume a zero initial mean; for
    other states energy(propagate(...)) is authoritative and the validation
    suite reports the difference instead of hiding it.
    """
    v = params.variant
    if sigma < 0.0:
        raise ValueError(f"duration must be nonnegative, got {sigma}")
    decay = math.exp(-2.0 * params.gamma * sigma)

    if v is Variant.FINITE_TEMP:
        return e0 * decay + (params.nbar + 0.5) * (1.0 - decay)
    if v is Variant.ZERO_TEMP:
        return e0 * decay + 0.5 * (1.0 - decay)
    if v is Variant.HIGH_TEMP:
        return e0 * decay + params.D * (1.0 - decay)

    if v is Variant.CL_UNDER:
        a = dissipation_kernel(MapKind.CL_UNDER, params.beta, sigma).entries
        return e0 * _transient_factor(params.beta, sigma, True) + params.D * params.beta * (
            a[0, 0] + a[1, 1]
        )
    if v is Variant.CL_OVER:
        bmat, cmat = dissipation_kernel(MapKind.CL_OVER, params.beta, sigma)
        om, _, gam = params.overdamped_coefficients()
        b = bmat.entries
        c = cmat.entries
        return (
            e0 * _transient_factor(params.beta, sigma, False)
            + om * params.beta * (b[0, 0] + b[1, 1])
            + gam * (c[0, 0] + c[1, 1])
        )

    d = _drive_components(params, tau, sigma)
    kick = 0.5 * float(d @ d)
    if v is Variant.DRIVEN_FT:
        return e0 * decay + (params.nbar + 0.5) * (1.0 - decay) + kick
    # Driven Brownian transient, kept in its published shape: the envelope
    # decays at twice the rate of the covariance transient above.  The
    # propagated state is the reference; validation quantifies the mismatch.
    a = dissipation_kernel(MapKind.CL_UNDER, params.beta, sigma).entries
    env = _transient_factor(params.beta, sigma, True) * math.exp(-params.beta * sigma)
    return env * e0 + params.D * params.beta * (a[0, 0] + a[1, 1]) + kick
