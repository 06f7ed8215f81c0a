"""Brute-force numerical checks for the closed-form propagators.

Three independent routes are provided, none of which reuses a closed-form
kernel or solution:

* :func:`characteristics_value` integrates the chord-space transport
  equation along its characteristic curves with fixed-step classical RK4,
  starting from the defining first-order equations of motion rather than the
  solved maps.
* :func:`kernel_quadrature` and :func:`drive_vector_quadrature` evaluate the
  defining time integrals of the dissipation kernels and drive responses
  with adaptive quadrature (only the evolution-map entries enter the
  integrands, and those are themselves checked against their ODEs by
  :func:`map_matrix_rk4`).
* :func:`fock_energy_trace` integrates the thermal master equation for the
  full density matrix in a truncated number basis and reads the energy off
  the diagonal, with explicit trace and truncation diagnostics.

Everything returns plain floats/arrays so tests can pin tolerances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .models import ModelParams, Variant
from .phase_maps import (
    KernelKind,
    MapKind,
    QuadraticKernel,
    generator,
    evolution_map,
)

__all__ = [
    "OracleConfig",
    "FockTraceResult",
    "map_matrix_rk4",
    "characteristics_value",
    "kernel_quadrature",
    "drive_vector_quadrature",
    "fock_energy_trace",
]


@dataclass(frozen=True)
class OracleConfig:
    rk4_step: float = 1e-4   # characteristic and map ODE integration step
    quad_tol: float = 1e-12  # absolute and relative quadrature target
    fock_dim: int = 60       # truncated number-basis size
    fock_step: float = 1e-4  # master-equation integration step

    def __post_init__(self):
        if self.rk4_step <= 0.0 or self.fock_step <= 0.0:
            raise ValueError("integration steps must be positive")
        if self.quad_tol <= 0.0:
            raise ValueError("quadrature tolerance must be positive")
        if self.fock_dim < 10:
            raise ValueError("fock_dim must be at least 10")


def _uniform_steps(sigma: float, step: float) -> tuple[int, float]:
    n = max(1, math.ceil(sigma / step - 1e-12))
    return n, sigma / n


def map_matrix_rk4(kind: MapKind, rate: float, sigma: float, cfg: OracleConfig | None = None) -> np.ndarray:
    """Integrate dX/dt = G X, X(0) = I, with RK4 and return X(sigma).

    Because the system is linear the four RK4 stages collapse into one
    constant step matrix (the degree-4 Taylor polynomial of e^(h G)), applied
    repeatedly.  This is exactly classical RK4, just without per-step stage
    recomputation.
    """
    cfg = cfg or OracleConfig()
    g = generator(kind, rate)
    if sigma == 0.0:
        return np.eye(2)
    n, h = _uniform_steps(abs(sigma), cfg.rk4_step)
    hg = math.copysign(h, sigma) * g
    step = np.eye(2) + hg @ (np.eye(2) + hg @ (np.eye(2) + hg @ (np.eye(2) + hg / 4.0) / 3.0) / 2.0)
    out = np.eye(2)
    for _ in range(n):
        out = step @ out
    return out


def _phase_coefficients(params: ModelParams) -> tuple[float, float, float]:
    """Coefficients (c_kk, c_ss, c_ks) with d(log w)/dt = -(c_kk k^2 + c_ss s^2 + c_ks k s)/2."""
    v = params.variant
    if v in (Variant.FINITE_TEMP, Variant.DRIVEN_FT):
        return params.gamma_plus, params.gamma_plus, 0.0
    if v is Variant.ZERO_TEMP:
        return params.gamma, params.gamma, 0.0
    if v is Variant.HIGH_TEMP:
        c = 2.0 * params.gamma * params.D
        return c, c, 0.0
    if v in (Variant.CL_UNDER, Variant.DRIVEN_CL):
        return 0.0, 2.0 * params.D * params.beta, 0.0
    om, _, gam = params.overdamped_coefficients()
    return 0.0, 2.0 * om * params.beta, 2.0 * gam


def characteristics_value(
    params: ModelParams,
    w0,
    tau: float,
    sigma: float,
    r,
    cfg: OracleConfig | None = None,
):
    """Evolved chord value(s) at r by direct integration along characteristics.

    The transport equation moves chord points along dr/dt = G r while the
    value picks up d(log w)/dt = -(c_ss s^2 + c_ks k s)/2 - i lam cos(nu t) s.
    This routine integrates that system backwards from the query point with
    fixed-step RK4 and evaluates the caller's w0(k, s) at the pulled-back
    point.  ``r`` may be shape (2,) for one point or (2, n) for a batch; w0
    is called with scalar pairs.
    """
    cfg = cfg or OracleConfig()
    if sigma < 0.0:
        raise ValueError(f"duration must be nonnegative, got {sigma}")
    rr = np.asarray(r, dtype=float)
    single = rr.ndim == 1
    pts = rr.reshape(2, -1).copy()

    g = generator(params.map_kind, params.map_rate)
    ckk, css, cks = _phase_coefficients(params)
    lam, nu = 0.0, 1.0
    if params.is_driven:
        lam, nu = params.drive.amplitude, params.drive.frequency

    def rate(q: np.ndarray, t: float) -> np.ndarray:
        out = -0.5 * (ckk * q[0] * q[0] + css * q[1] * q[1] + cks * q[0] * q[1]) + 0j
        if lam != 0.0:
            out = out - 1j * lam * math.cos(nu * t) * q[1]
        return out

    if sigma == 0.0:
        phi = np.zeros(pts.shape[1], dtype=complex)
    else:
        n, h = _uniform_steps(sigma, cfg.rk4_step)
        eye = np.eye(2)
        # Backward flow dq/dv = -G q; the four stage maps are constant.
        a2 = eye - 0.5 * h * g
        a3 = eye - 0.5 * h * (g @ a2)
        a4 = eye - h * (g @ a3)
        step = eye - (h / 6.0) * (g @ (eye + 2.0 * a2 + 2.0 * a3 + a4))
        phi = np.zeros(pts.shape[1], dtype=complex)
        t0 = tau + sigma
        for i in range(n):
            v = i * h
            k1 = rate(pts, t0 - v)
            k2 = rate(a2 @ pts, t0 - v - 0.5 * h)
            k3 = rate(a3 @ pts, t0 - v - 0.5 * h)
            k4 = rate(a4 @ pts, t0 - v - h)
            phi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            pts = step @ pts

    vals = np.array(
        [complex(w0(pts[0, j], pts[1, j])) for j in range(pts.shape[1])], dtype=complex
    ) * np.exp(phi)
    return vals[0] if single else vals


def kernel_quadrature(
    kind: MapKind, rate: float, sigma: float, cfg: OracleConfig | None = None
) -> QuadraticKernel | tuple[QuadraticKernel, QuadraticKernel]:
    """Dissipation kernels by adaptive quadrature of their defining integrals.

    Mirrors the return shape of phase_maps.dissipation_kernel.  For kind C
    the off-diagonal is the full integral of (m11*m22 + m12*m21), matching
    the closed form's convention.
    """
    cfg = cfg or OracleConfig()
    if sigma < 0.0:
        raise ValueError(f"duration must be nonnegative, got {sigma}")
    lim = max(200, int(20 * sigma) + 50)

    def entries(t: float) -> np.ndarray:
        return evolution_map(kind, rate, -t).entries

    def integrate(f) -> float:
        val, _ = quad(f, 0.0, sigma, epsabs=cfg.quad_tol, epsrel=cfg.quad_tol, limit=lim)
        return val

    if kind is MapKind.FINITE_TEMP:
        a = integrate(lambda t: float(np.sum(entries(t)[0] ** 2)))
        return QuadraticKernel(a * np.eye(2), KernelKind.ALPHA_IDENTITY)

    if kind is MapKind.CL_UNDER:
        a11 = integrate(lambda t: entries(t)[1, 0] ** 2)
        a12 = integrate(lambda t: entries(t)[1, 0] * entries(t)[1, 1])
        a22 = integrate(lambda t: entries(t)[1, 1] ** 2)
        return QuadraticKernel(np.array([[a11, a12], [a12, a22]]), KernelKind.A)

    b11 = integrate(lambda t: entries(t)[1, 0] ** 2)
    b12 = integrate(lambda t: entries(t)[1, 0] * entries(t)[1, 1])
    b22 = integrate(lambda t: entries(t)[1, 1] ** 2)
    c11 = integrate(lambda t: entries(t)[0, 0] * entries(t)[1, 0])
    c12 = integrate(
        lambda t: entries(t)[0, 0] * entries(t)[1, 1] + entries(t)[0, 1] * entries(t)[1, 0]
    )
    c22 = integrate(lambda t: entries(t)[0, 1] * entries(t)[1, 1])
    bmat = QuadraticKernel(np.array([[b11, b12], [b12, b22]]), KernelKind.B)
    cmat = QuadraticKernel(np.array([[c11, c12], [c12, c22]]), KernelKind.C)
    return bmat, cmat


def drive_vector_quadrature(
    kind: MapKind,
    rate: float,
    amplitude: float,
    frequency: float,
    tau: float,
    sigma: float,
    cfg: OracleConfig | None = None,
) -> np.ndarray:
    """Drive response components by quadrature of their defining integrals."""
    cfg = cfg or OracleConfig()
    lim = max(200, int(20 * (sigma + frequency * sigma)) + 50)

    def component(col: int) -> float:
        def f(t: float) -> float:
            m = evolution_map(kind, rate, -t).entries
            return amplitude * math.cos(frequency * (tau + sigma - t)) * m[1, col]

        val, _ = quad(f, 0.0, sigma, epsabs=cfg.quad_tol, epsrel=cfg.quad_tol, limit=lim)
        return val

    return np.array([component(0), component(1)])


@dataclass(frozen=True)
class FockTraceResult:
    """Energy trace from the truncated number-basis integration.

    ``reliable`` is False when population leaked into the top two levels
    beyond 1e-8, meaning the truncation touched the dynamics.
    """

    sigmas: np.ndarray
    energies: np.ndarray
    trace_error: float
    top_population: float
    reliable: bool


def _coherent_density(x0: float, p0: float, dim: int) -> np.ndarray:
    amp = complex(x0, p0) / math.sqrt(2.0)
    if amp == 0:
        c = np.zeros(dim, dtype=complex)
        c[0] = 1.0
    else:
        n = np.arange(dim)
        log_fact = np.concatenate(([0.0], np.cumsum(np.log(np.arange(1, dim)))))
        logs = n * np.log(abs(amp)) - 0.5 * log_fact - 0.5 * abs(amp) ** 2
        c = np.exp(logs) * np.exp(1j * n * np.angle(amp))
    return np.outer(c, c.conj())


def fock_energy_trace(
    params: ModelParams,
    initial: tuple[float, float],
    sigma_grid,
    cfg: OracleConfig | None = None,
) -> FockTraceResult:
    """Energies <H> along sigma_grid from the thermal master equation.

    Only the finite_temp variant maps onto the number-basis equation (the
    Brownian generators are not of that form).  The initial state is the
    coherent state at ``initial``.  The density matrix is stepped with RK4
    and re-symmetrized every step; diagnostics report the worst trace error
    and the population of the top two levels across the whole run.
    """
    cfg = cfg or OracleConfig()
    if params.variant is not Variant.FINITE_TEMP:
        raise ValueError("the number-basis oracle covers only the finite_temp variant")
    grid = np.asarray(sigma_grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ValueError("sigma_grid must be a nonempty 1-d sequence")
    if np.any(np.diff(grid) <= 0.0) or grid[0] < 0.0:
        raise ValueError("sigma_grid must be strictly increasing and nonnegative")

    dim = cfg.fock_dim
    n = np.arange(dim, dtype=float)
    g, nb = params.gamma, params.nbar
    ni, nj = n[:, None], n[None, :]
    diag_coef = -1j * (ni - nj) - g * (1.0 + nb) * (ni + nj) - g * nb * (ni + nj + 2.0)
    up = 2.0 * g * (1.0 + nb) * np.sqrt((ni + 1.0) * (nj + 1.0))
    down = 2.0 * g * nb * np.sqrt(ni * nj)
    up_trim = np.ascontiguousarray(up[:-1, :-1])
    down_trim = np.ascontiguousarray(down[1:, 1:])

    rho = _coherent_density(initial[0], initial[1], dim)
    k1 = np.empty_like(rho)
    k2 = np.empty_like(rho)
    k3 = np.empty_like(rho)
    k4 = np.empty_like(rho)
    tmp = np.empty_like(rho)
    buf = np.empty_like(rho)

    def rhs(r: np.ndarray, out: np.ndarray) -> None:
        np.multiply(diag_coef, r, out=out)
        np.multiply(up_trim, r[1:, 1:], out=buf[:-1, :-1])
        out[:-1, :-1] += buf[:-1, :-1]
        np.multiply(down_trim, r[:-1, :-1], out=buf[1:, 1:])
        out[1:, 1:] += buf[1:, 1:]

    weights = n + 0.5
    energies = np.empty(grid.size)
    trace_err = 0.0
    top_pop = 0.0

    def record(idx: int) -> None:
        nonlocal trace_err, top_pop
        d = rho.diagonal().real
        energies[idx] = float(weights @ d)
        trace_err = max(trace_err, abs(float(d.sum()) - 1.0))
        top_pop = max(top_pop, float(d[-2:].sum()))

    t = 0.0
    start = 0
    if grid[0] == 0.0:
        record(0)
        start = 1
    for idx in range(start, grid.size):
        span = grid[idx] - t
        nsteps, h = _uniform_steps(span, cfg.fock_step)
        for _ in range(nsteps):
            rhs(rho, k1)
            np.multiply(k1, 0.5 * h, out=tmp)
            tmp += rho
            rhs(tmp, k2)
            np.multiply(k2, 0.5 * h, out=tmp)
            tmp += rho
            rhs(tmp, k3)
            np.multiply(k3, h, out=tmp)
            tmp += rho
            rhs(tmp, k4)
            k2 += k3
            k2 *= 2.0
            k2 += k1
            k2 += k4
            k2 *= h / 6.0
            rho += k2
            np.conjugate(rho.T, out=tmp)
            rho += tmp
            rho *= 0.5
        t = grid[idx]
        record(idx)

    return FockTraceResult(
        sigmas=grid.copy(),
        energies=energies,
        trace_error=trace_err,
        top_population=top_pop,
        reliable=top_pop <= 1e-8,
    )
