"""Unit and property tests for evolution maps, dissipation kernels, drives."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chordprop.phase_maps import (
    KernelKind,
    MapKind,
    RegimeError,
    alpha_kernel,
    compose,
    dissipation_kernel,
    drive_vector,
    evolution_map,
    generator,
    inverse,
)

ALL_KINDS = (MapKind.FINITE_TEMP, MapKind.CL_UNDER, MapKind.CL_OVER)


def _rate_for(kind: MapKind, u: float) -> float:
    """Map u in [0, 1] to a valid rate for the given family."""
    if kind is MapKind.FINITE_TEMP:
        return 1.5 * u
    if kind is MapKind.CL_UNDER:
        return 0.05 + 1.85 * u
    return 2.1 + 3.0 * u


# ---------------------------------------------------------------------------
# evolution_map
# ---------------------------------------------------------------------------


def test_map_at_zero_is_identity():
    for kind in ALL_KINDS:
        m = evolution_map(kind, _rate_for(kind, 0.3), 0.0)
        assert np.array_equal(m.entries, np.eye(2))


def test_thermal_quarter_turn():
    m = evolution_map(MapKind.FINITE_TEMP, 0.1, math.pi / 2).entries
    expected = math.exp(0.05 * math.pi) * np.array([[0.0, 1.0], [-1.0, 0.0]])
    assert np.max(np.abs(m - expected)) < 1e-14


def test_compose_adds_durations():
    a = evolution_map(MapKind.CL_UNDER, 0.2, 0.7)
    b = evolution_map(MapKind.CL_UNDER, 0.2, 0.3)
    c = compose(a, b)
    direct = evolution_map(MapKind.CL_UNDER, 0.2, 1.0)
    assert c.sigma == pytest.approx(1.0)
    assert np.max(np.abs(c.entries - direct.entries)) < 1e-12


def test_compose_with_identity_is_noop():
    a = evolution_map(MapKind.CL_UNDER, 0.4, 1.3)
    ident = evolution_map(MapKind.CL_UNDER, 0.4, 0.0)
    assert np.max(np.abs(compose(a, ident).entries - a.entries)) == 0.0


def test_compose_rejects_mismatched_maps():
    a = evolution_map(MapKind.FINITE_TEMP, 0.1, 1.0)
    b = evolution_map(MapKind.CL_UNDER, 0.1, 1.0)
    with pytest.raises(ValueError):
        compose(a, b)
    c = evolution_map(MapKind.FINITE_TEMP, 0.2, 1.0)
    with pytest.raises(ValueError):
        compose(a, c)


def test_inverse_is_negative_duration():
    a = evolution_map(MapKind.FINITE_TEMP, 0.5, 1.0)
    inv = inverse(a)
    assert inv.sigma == -1.0
    assert np.array_equal(inv.entries, evolution_map(MapKind.FINITE_TEMP, 0.5, -1.0).entries)


def test_inverse_overdamped_roundtrip():
    a = evolution_map(MapKind.CL_OVER, 3.0, 0.2)
    prod = compose(inverse(a), a).entries
    assert np.max(np.abs(prod - np.eye(2))) < 1e-12


def test_map_rejects_bad_regimes():
    with pytest.raises(RegimeError):
        evolution_map(MapKind.CL_UNDER, 2.0, 1.0)
    with pytest.raises(RegimeError):
        evolution_map(MapKind.CL_UNDER, 2.4, 1.0)
    with pytest.raises(RegimeError):
        evolution_map(MapKind.CL_OVER, 2.0, 1.0)
    with pytest.raises(RegimeError):
        evolution_map(MapKind.CL_OVER, 1.7, 1.0)
    with pytest.raises(RegimeError):
        evolution_map(MapKind.FINITE_TEMP, -0.1, 1.0)
    with pytest.raises(RegimeError):
        evolution_map(MapKind.FINITE_TEMP, math.nan, 1.0)


def test_generator_matches_map_derivative():
    # (map(h) - map(-h)) / 2h -> G as h -> 0
    h = 1e-6
    for kind in ALL_KINDS:
        rate = _rate_for(kind, 0.5)
        g = generator(kind, rate)
        fd = (
            evolution_map(kind, rate, h).entries - evolution_map(kind, rate, -h).entries
        ) / (2.0 * h)
        assert np.max(np.abs(fd - g)) < 1e-9


def test_underdamped_formula_continues_to_overdamped():
    # Evaluating the underdamped entries at imaginary frequency must land on
    # the overdamped map exactly (same analytic function of omega).
    beta = 3.0
    om = 1j * math.sqrt(0.25 * beta * beta - 1.0)
    for sig in (-1.0, 0.3, 1.7):
        pref = np.exp(0.5 * beta * sig)
        c, s = np.cos(om * sig), np.sin(om * sig)
        h = 0.5 * beta / om
        m = pref * np.array([[c - h * s, s / om], [-s / om, c + h * s]])
        n = evolution_map(MapKind.CL_OVER, beta, sig).entries
        assert np.max(np.abs(m - n)) < 1e-12


@settings(max_examples=120, deadline=None)
@given(
    kind=st.sampled_from(ALL_KINDS),
    u=st.floats(0.0, 1.0),
    s1=st.floats(-3.0, 3.0),
    s2=st.floats(-3.0, 3.0),
)
def test_group_law_property(kind, u, s1, s2):
    rate = _rate_for(kind, u)
    a = evolution_map(kind, rate, s1)
    b = evolution_map(kind, rate, s2)
    direct = evolution_map(kind, rate, s1 + s2)
    # normalized by the product's conditioning scale: opposite-sign durations
    # cancel, so the rounding floor tracks |a|*|b|, not the result
    scale = max(1.0, float(np.max(np.abs(a.entries))) * float(np.max(np.abs(b.entries))))
    err = float(np.max(np.abs(compose(a, b).entries - direct.entries))) / scale
    assert err < 1e-11


@settings(max_examples=120, deadline=None)
@given(kind=st.sampled_from(ALL_KINDS), u=st.floats(0.0, 1.0), sig=st.floats(-3.0, 3.0))
def test_determinant_property(kind, u, sig):
    # det map(sigma) = e^(2*gamma*sigma) with gamma = rate (thermal family)
    # or rate/2 (Brownian families).
    rate = _rate_for(kind, u)
    m = evolution_map(kind, rate, sig).entries
    gamma = rate if kind is MapKind.FINITE_TEMP else 0.5 * rate
    expected = math.exp(2.0 * gamma * sig)
    scale = max(expected, abs(m[0, 0] * m[1, 1]) + abs(m[0, 1] * m[1, 0]))
    assert abs(float(np.linalg.det(m)) - expected) / scale < 1e-12


# ---------------------------------------------------------------------------
# alpha_kernel
# ---------------------------------------------------------------------------


def test_alpha_values():
    assert alpha_kernel(0.5, 0.0) == 0.0
    assert alpha_kernel(0.5, 1.0) == pytest.approx(-math.expm1(-1.0), abs=1e-15)
    assert alpha_kernel(0.5, 1.0) == pytest.approx(0.632121, abs=1e-6)
    # saturation at 1/(2*gamma)
    assert alpha_kernel(0.5, 1e4) == pytest.approx(1.0, abs=1e-12)


def test_alpha_zero_rate_limit():
    assert alpha_kernel(0.0, 2.75) == 2.75
    # continuity across the branch
    assert abs(alpha_kernel(1e-13, 2.75) - 2.75) < 1e-10


def test_alpha_rejects_negative_duration():
    with pytest.raises(ValueError):
        alpha_kernel(0.5, -1.0)
    with pytest.raises(RegimeError):
        alpha_kernel(-0.5, 1.0)


@settings(max_examples=60, deadline=None)
@given(g=st.floats(0.0, 2.0), s1=st.floats(0.0, 10.0), s2=st.floats(0.0, 10.0))
def test_alpha_monotone(g, s1, s2):
    lo, hi = sorted((s1, s2))
    assert alpha_kernel(g, hi) >= alpha_kernel(g, lo) - 1e-15


# ---------------------------------------------------------------------------
# dissipation_kernel
# ---------------------------------------------------------------------------


def test_kernels_vanish_at_zero_duration():
    a = dissipation_kernel(MapKind.CL_UNDER, 0.2, 0.0)
    assert np.array_equal(a.entries, np.zeros((2, 2)))
    b, c = dissipation_kernel(MapKind.CL_OVER, 3.0, 0.0)
    assert np.array_equal(b.entries, np.zeros((2, 2)))
    assert np.array_equal(c.entries, np.zeros((2, 2)))


def test_kernel_kinds():
    assert dissipation_kernel(MapKind.FINITE_TEMP, 0.3, 1.0).kind is KernelKind.ALPHA_IDENTITY
    assert dissipation_kernel(MapKind.CL_UNDER, 0.3, 1.0).kind is KernelKind.A
    b, c = dissipation_kernel(MapKind.CL_OVER, 3.0, 1.0)
    assert b.kind is KernelKind.B and c.kind is KernelKind.C


def test_kernel_longtime_limits():
    # A and B saturate at I/(2*beta); C at diag(1/2, 0).
    a = dissipation_kernel(MapKind.CL_UNDER, 0.2, 120.0).entries
    assert np.max(np.abs(a - 2.5 * np.eye(2))) < 1e-8
    b, c = dissipation_kernel(MapKind.CL_OVER, 3.0, 200.0)
    assert np.max(np.abs(b.entries - np.eye(2) / 6.0)) < 1e-10
    assert np.max(np.abs(c.entries - np.diag([0.5, 0.0]))) < 1e-10


def test_kernel_symmetry_exact():
    for kind, rate in ((MapKind.CL_UNDER, 1.1), (MapKind.CL_OVER, 2.7)):
        out = dissipation_kernel(kind, rate, 1.9)
        mats = out if isinstance(out, tuple) else (out,)
        for k in mats:
            assert k.entries[0, 1] == k.entries[1, 0]


@settings(max_examples=80, deadline=None)
@given(u=st.floats(0.0, 1.0), sig=st.floats(0.0, 12.0), over=st.booleans())
def test_accumulation_kernels_positive_semidefinite(u, sig, over):
    kind = MapKind.CL_OVER if over else MapKind.CL_UNDER
    out = dissipation_kernel(kind, _rate_for(kind, u), sig)
    m = (out[0] if over else out).entries
    assert np.min(np.linalg.eigvalsh(m)) > -1e-13


def test_kernel_regime_and_duration_errors():
    with pytest.raises(RegimeError):
        dissipation_kernel(MapKind.CL_UNDER, 2.0, 1.0)
    with pytest.raises(ValueError):
        dissipation_kernel(MapKind.CL_UNDER, 0.2, -0.5)


# ---------------------------------------------------------------------------
# drive_vector
# ---------------------------------------------------------------------------


def test_drive_trivial_cases():
    z = drive_vector(MapKind.FINITE_TEMP, 0.1, 0.0, 1.0, 0.0, 5.0)
    assert np.array_equal(z.components, np.zeros(2))
    z = drive_vector(MapKind.FINITE_TEMP, 0.1, 1.0, 1.0, 0.0, 0.0)
    assert np.max(np.abs(z.components)) < 1e-15


def test_drive_rejects_overdamped_and_resonance():
    with pytest.raises(RegimeError):
        drive_vector(MapKind.CL_OVER, 3.0, 1.0, 1.0, 0.0, 1.0)
    # undamped oscillator driven exactly on resonance has no bounded response
    with pytest.raises(RegimeError):
        drive_vector(MapKind.FINITE_TEMP, 0.0, 1.0, 1.0, 0.0, 1.0)


def test_drive_depends_on_absolute_start_time():
    a = drive_vector(MapKind.CL_UNDER, 0.2, 0.5, 0.7, 0.0, 2.0).components
    b = drive_vector(MapKind.CL_UNDER, 0.2, 0.5, 0.7, 1.3, 2.0).components
    assert np.max(np.abs(a - b)) > 1e-3


@settings(max_examples=60, deadline=None)
@given(
    lam=st.floats(0.0, 4.0),
    nu=st.floats(0.2, 1.8),
    tau=st.floats(0.0, 5.0),
    sig=st.floats(0.0, 5.0),
)
def test_drive_linear_in_amplitude(lam, nu, tau, sig):
    unit = drive_vector(MapKind.FINITE_TEMP, 0.3, 1.0, nu, tau, sig).components
    scaled = drive_vector(MapKind.FINITE_TEMP, 0.3, lam, nu, tau, sig).components
    assert np.max(np.abs(scaled - lam * unit)) < 1e-12 * max(1.0, lam)
