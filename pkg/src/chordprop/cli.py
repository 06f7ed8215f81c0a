"""Command line front end: scenario configs in, CSV/JSON and figures out.

Usage:
    chordprop run <config.json> --out DIR [--no-plot]
    chordprop validate <suite> [--tol X] [--seed N] --out DIR
    chordprop --version

``run`` propagates one scenario and writes, per requested output,
``energy.csv`` (sigma, E_closed_form, E_from_state), ``trajectory.csv``
(sigma, x0_sigma, p0_sigma), ``marginals.csv`` and ``wigner_<sigma>.csv``
grid dumps, plus a rendered PNG next to each CSV (suppress with
``--no-plot``).  Whenever the closed-form and state-derived energy columns
disagree beyond 1e-9 the offending rows go to ``discrepancies.csv`` instead
of being reconciled.  Output is deterministic for a given config.

``validate`` runs one of the cross-check suites {maps, kernels, models,
fock} against the numerical oracles and writes ``validate_<suite>.json``
with one record {check, max_error, tolerance, pass} per check.  Checks whose
``tolerance`` is null are informational (they quantify known deviations of
the published transient-energy shortcuts) and never gate the exit code.

Exit codes:
    0  success
    1  config error (parse failure, unknown key, bad value)
    2  dissipation-regime violation (critical damping, driven overdamped, ...)
    3  I/O failure while writing outputs
    4  at least one gating validation check failed

CSV numbers carry 17 significant digits with LF line endings so files
round-trip exactly for regression comparisons.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .chord_state import (
    GaussianChordState,
    UnphysicalStateWarning,
    coherent_state,
    energy,
    evaluate,
    marginal,
    to_wigner,
)
from .models import (
    Drive,
    ModelParams,
    ODRegime,
    Variant,
    closed_form_energy,
    propagate,
    propagate_pointwise,
    stationary_state,
)
from .oracle import (
    OracleConfig,
    characteristics_value,
    drive_vector_quadrature,
    fock_energy_trace,
    kernel_quadrature,
    map_matrix_rk4,
)
from .phase_maps import (
    MapKind,
    RegimeError,
    alpha_kernel,
    compose,
    dissipation_kernel,
    drive_vector,
    evolution_map,
    inverse,
)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_REGIME = 2
EXIT_IO = 3
EXIT_VALIDATION = 4

_OUTPUTS = ("energy", "trajectory", "wigner_grid", "marginals")
_SUITES = ("maps", "kernels", "models", "fock")
_ENERGY_MISMATCH = 1e-9


class ConfigError(ValueError):
    """Scenario file failed schema validation."""


# ---------------------------------------------------------------------------
# scenario parsing
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Scenario:
    params: ModelParams
    initial: tuple[float, float]
    t_start: float
    t_end: float
    n_points: int
    outputs: tuple[str, ...]
    wigner_window: tuple[float, float, float, float, int, int] | None
    wigner_times: tuple[float, ...]
    seed: int


def _require_keys(obj: dict, allowed: set[str], required: set[str], where: str) -> None:
    unknown = set(obj) - allowed
    if unknown:
        raise ConfigError(f"unknown key(s) in {where}: {', '.join(sorted(unknown))}")
    missing = required - set(obj)
    if missing:
        raise ConfigError(f"missing key(s) in {where}: {', '.join(sorted(missing))}")


def _number(obj: dict, key: str, where: str) -> float:
    val = obj[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ConfigError(f"{where}.{key} must be a number, got {val!r}")
    return float(val)


def _integer(val, where: str) -> int:
    if isinstance(val, bool) or not isinstance(val, int):
        raise ConfigError(f"{where} must be an integer, got {val!r}")
    return val


def _parse_model(obj) -> ModelParams:
    if not isinstance(obj, dict):
        raise ConfigError("model must be an object")
    _require_keys(
        obj,
        {"variant", "gamma", "D", "omega_c", "od_regime", "drive"},
        {"variant", "gamma"},
        "model",
    )
    try:
        variant = Variant(obj["variant"])
    except ValueError:
        names = ", ".join(v.value for v in Variant)
        raise ConfigError(f"model.variant must be one of: {names}") from None
    kwargs = {"variant": variant, "gamma": _number(obj, "gamma", "model")}
    if "D" in obj:
        kwargs["D"] = _number(obj, "D", "model")
    if "omega_c" in obj:
        kwargs["omega_c"] = _number(obj, "omega_c", "model")
    if "od_regime" in obj:
        try:
            kwargs["od_regime"] = ODRegime(obj["od_regime"])
        except ValueError:
            raise ConfigError("model.od_regime must be 'high_t' or 'low_t'") from None
    if "drive" in obj:
        dr = obj["drive"]
        if not isinstance(dr, dict):
            raise ConfigError("model.drive must be an object")
        _require_keys(dr, {"amplitude", "frequency"}, {"amplitude", "frequency"}, "model.drive")
        kwargs["drive"] = Drive(
            _number(dr, "amplitude", "model.drive"), _number(dr, "frequency", "model.drive")
        )
    try:
        return ModelParams(**kwargs)
    except RegimeError:
        raise
    except ValueError as exc:
        raise ConfigError(f"model: {exc}") from None


def parse_scenario(obj) -> Scenario:
    """Validate a decoded config object; unknown keys are errors."""
    if not isinstance(obj, dict):
        raise ConfigError("top-level config must be an object")
    _require_keys(
        obj,
        {"model", "initial", "time_grid", "outputs", "wigner_window", "wigner_times", "seed"},
        {"model", "initial", "time_grid", "outputs"},
        "config",
    )
    params = _parse_model(obj["model"])

    ini = obj["initial"]
    if not isinstance(ini, list) or len(ini) != 2:
        raise ConfigError("initial must be a 2-element array [x0, p0]")
    initial = (_number({"v": ini[0]}, "v", "initial[0]"), _number({"v": ini[1]}, "v", "initial[1]"))

    tg = obj["time_grid"]
    if not isinstance(tg, list) or len(tg) != 3:
        raise ConfigError("time_grid must be [t_start, t_end, n_points]")
    t_start = _number({"v": tg[0]}, "v", "time_grid[0]")
    t_end = _number({"v": tg[1]}, "v", "time_grid[1]")
    n_points = _integer(tg[2], "time_grid[2]")
    if not (t_end > t_start):
        raise ConfigError(f"time_grid requires t_end > t_start, got [{t_start}, {t_end}]")
    if t_start < 0.0:
        raise ConfigError("t_start must be nonnegative")
    if n_points < 2:
        raise ConfigError(f"time_grid needs at least 2 points, got {n_points}")

    outs = obj["outputs"]
    if not isinstance(outs, list) or not outs:
        raise ConfigError(f"outputs must be a nonempty array drawn from {_OUTPUTS}")
    for o in outs:
        if o not in _OUTPUTS:
            raise ConfigError(f"unknown output {o!r}; choose from {_OUTPUTS}")
    if len(set(outs)) != len(outs):
        raise ConfigError("outputs contains duplicates")
    outputs = tuple(outs)

    window = None
    wigner_times: tuple[float, ...] = ()
    if "wigner_grid" in outputs:
        if "wigner_window" not in obj:
            raise ConfigError("wigner_grid output requires wigner_window")
        ww = obj["wigner_window"]
        if not isinstance(ww, list) or len(ww) != 6:
            raise ConfigError("wigner_window must be [q_min, q_max, p_min, p_max, n_q, n_p]")
        qmin = _number({"v": ww[0]}, "v", "wigner_window[0]")
        qmax = _number({"v": ww[1]}, "v", "wigner_window[1]")
        pmin = _number({"v": ww[2]}, "v", "wigner_window[2]")
        pmax = _number({"v": ww[3]}, "v", "wigner_window[3]")
        nq = _integer(ww[4], "wigner_window[4]")
        npp = _integer(ww[5], "wigner_window[5]")
        if qmax <= qmin or pmax <= pmin:
            raise ConfigError("wigner_window bounds must satisfy q_max > q_min and p_max > p_min")
        if nq < 8 or npp < 8:
            raise ConfigError("wigner_window grid dimensions must be at least 8")
        window = (qmin, qmax, pmin, pmax, nq, npp)
        if "wigner_times" in obj:
            wt = obj["wigner_times"]
            if not isinstance(wt, list) or not wt:
                raise ConfigError("wigner_times must be a nonempty array of times")
            times = [_number({"v": x}, "v", "wigner_times") for x in wt]
            for x in times:
                if x < t_start or x > t_end:
                    raise ConfigError(f"wigner time {x} falls outside [{t_start}, {t_end}]")
            wigner_times = tuple(times)
        else:
            wigner_times = (t_end,)
    elif "wigner_window" in obj or "wigner_times" in obj:
        raise ConfigError("wigner_window/wigner_times require the wigner_grid output")

    seed = _integer(obj.get("seed", 0), "seed")
    return Scenario(params, initial, t_start, t_end, n_points, outputs, window, wigner_times, seed)


def load_scenario(path) -> Scenario:
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}") from None
    return parse_scenario(obj)


# ---------------------------------------------------------------------------
# scenario execution
# ---------------------------------------------------------------------------


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _write_csv(path, header, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(x) for x in row])


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def _wigner_tag(sigma: float) -> str:
    return format(float(sigma), "g")


def run_scenario(config_path, out_dir, plot: bool = True) -> int:
    """Execute one scenario config; returns a process exit code."""
    try:
        scn = load_scenario(config_path)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except RegimeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_REGIME

    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        print(f"error: cannot create {out}: {exc}", file=sys.stderr)
        return EXIT_IO

    params = scn.params
    state0 = coherent_state(*scn.initial)
    e0 = energy(state0)
    grid = np.linspace(scn.t_start, scn.t_end, scn.n_points)
    # A state can legitimately leave the physical region (the low-temperature
    # Brownian models relax below the uncertainty bound); collapse the
    # per-state warnings into one summary line instead of one line per point.
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", UnphysicalStateWarning)
        states = [propagate(state0, params, scn.t_start, t - scn.t_start) for t in grid]
    n_bad = sum(1 for w in caught if issubclass(w.category, UnphysicalStateWarning))
    if n_bad:
        dets = [float(np.linalg.det(st.sigma_mat)) for st in states]
        print(
            f"note: {n_bad} of {len(states)} states violate det Sigma >= 1/4 "
            f"(smallest det {min(dets):.6g}); the model relaxes below the quantum bound"
        )

    written: list[str] = []
    try:
        if "energy" in scn.outputs:
            e_closed = np.array(
                [closed_form_energy(params, e0, scn.t_start, t - scn.t_start) for t in grid]
            )
            e_state = np.array([energy(st) for st in states])
            _write_csv(
                out / "energy.csv",
                ["sigma", "E_closed_form", "E_from_state"],
                zip(grid, e_closed, e_state),
            )
            written.append("energy.csv")
            bad = np.abs(e_closed - e_state) > _ENERGY_MISMATCH
            _write_csv(
                out / "discrepancies.csv",
                ["sigma", "E_closed_form", "E_from_state", "abs_diff"],
                zip(grid[bad], e_closed[bad], e_state[bad], np.abs(e_closed - e_state)[bad]),
            )
            written.append("discrepancies.csv")
            if plot:
                plt = _pyplot()
                fig, ax = plt.subplots(figsize=(6.0, 4.0))
                ax.plot(grid, e_state, label="from state", lw=1.5)
                ax.plot(grid, e_closed, "--", label="closed form", lw=1.2)
                ax.set_xlabel("sigma")
                ax.set_ylabel("energy")
                ax.legend()
                fig.savefig(out / "energy.png", dpi=130, bbox_inches="tight")
                plt.close(fig)
                written.append("energy.png")

        if "trajectory" in scn.outputs:
            xs = np.array([st.mu[0] for st in states])
            ps = np.array([st.mu[1] for st in states])
            _write_csv(
                out / "trajectory.csv", ["sigma", "x0_sigma", "p0_sigma"], zip(grid, xs, ps)
            )
            written.append("trajectory.csv")
            if plot:
                plt = _pyplot()
                fig, ax = plt.subplots(figsize=(4.6, 4.6))
                ax.plot(xs, ps, lw=0.9)
                ax.plot([xs[0]], [ps[0]], "o", ms=5)
                ax.set_xlabel("<q>")
                ax.set_ylabel("<p>")
                ax.set_aspect("equal", adjustable="datalim")
                fig.savefig(out / "trajectory.png", dpi=130, bbox_inches="tight")
                plt.close(fig)
                written.append("trajectory.png")

        if "marginals" in scn.outputs:
            rows = []
            for t, st in zip(grid, states):
                qm, qv = marginal(st, "position")
                pm, pv = marginal(st, "momentum")
                rows.append((t, qm, qv, pm, pv))
            _write_csv(
                out / "marginals.csv", ["sigma", "q_mean", "q_var", "p_mean", "p_var"], rows
            )
            written.append("marginals.csv")
            if plot:
                arr = np.array(rows)
                plt = _pyplot()
                fig, axes = plt.subplots(2, 1, figsize=(6.0, 5.4), sharex=True)
                for ax, mean, var, name in (
                    (axes[0], arr[:, 1], arr[:, 2], "q"),
                    (axes[1], arr[:, 3], arr[:, 4], "p"),
                ):
                    sd = np.sqrt(var)
                    ax.plot(arr[:, 0], mean, lw=1.2)
                    ax.fill_between(arr[:, 0], mean - sd, mean + sd, alpha=0.25, lw=0)
                    ax.set_ylabel(f"<{name}> +- sd")
                axes[1].set_xlabel("sigma")
                fig.savefig(out / "marginals.png", dpi=130, bbox_inches="tight")
                plt.close(fig)
                written.append("marginals.png")

        if "wigner_grid" in scn.outputs:
            qmin, qmax, pmin, pmax, nq, npp = scn.wigner_window
            qs = np.linspace(qmin, qmax, nq)
            ps = np.linspace(pmin, pmax, npp)
            qq, pp = np.meshgrid(qs, ps, indexing="ij")
            for t in scn.wigner_times:
                with warnings.catch_warnings():
                    # already summarized once for this run
                    warnings.simplefilter("ignore", UnphysicalStateWarning)
                    st = propagate(state0, params, scn.t_start, t - scn.t_start)
                dens = to_wigner(st).density(qq, pp)
                tag = _wigner_tag(t)
                _write_csv(
                    out / f"wigner_{tag}.csv",
                    ["q", "p", "W"],
                    zip(qq.ravel(), pp.ravel(), dens.ravel()),
                )
                written.append(f"wigner_{tag}.csv")
                if plot:
                    plt = _pyplot()
                    fig, ax = plt.subplots(figsize=(5.2, 4.4))
                    mesh = ax.pcolormesh(qq, pp, dens, shading="auto")
                    fig.colorbar(mesh, ax=ax, label="W")
                    ax.set_xlabel("q")
                    ax.set_ylabel("p")
                    fig.savefig(out / f"wigner_{tag}.png", dpi=130, bbox_inches="tight")
                    plt.close(fig)
                    written.append(f"wigner_{tag}.png")
    except OSError as exc:
        print(f"error: writing outputs failed: {exc}", file=sys.stderr)
        return EXIT_IO

    for name in written:
        print(f"wrote {out / name}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# validation suites
# ---------------------------------------------------------------------------


def _check(name: str, max_error: float, tolerance: float | None, note: str | None = None) -> dict:
    rec = {
        "check": name,
        "max_error": float(max_error),
        "tolerance": tolerance,
        "pass": True if tolerance is None else bool(max_error <= tolerance),
    }
    if note:
        rec["note"] = note
    return rec


def _rand_kind_rate(rng) -> tuple[MapKind, float]:
    kind = (MapKind.FINITE_TEMP, MapKind.CL_UNDER, MapKind.CL_OVER)[int(rng.integers(3))]
    if kind is MapKind.FINITE_TEMP:
        return kind, float(rng.uniform(0.0, 1.5))
    if kind is MapKind.CL_UNDER:
        return kind, float(rng.uniform(0.0, 1.95))
    return kind, float(rng.uniform(2.05, 6.0))


def suite_maps(rng, tol: float | None = None) -> list[dict]:
    # Overdamped map entries grow like e^{(beta/2 + mu)|sigma|} (about 4e7 at
    # the largest draws here), so every identity below is measured relative to
    # the magnitude of the quantities actually combined: a fixed absolute
    # tolerance would silently turn into a requirement of more than 16
    # significant digits the moment the entries leave O(1).
    t11 = tol if tol is not None else 1e-11
    worst_group = 0.0
    worst_inv = 0.0
    worst_det = 0.0
    for _ in range(200):
        kind, rate = _rand_kind_rate(rng)
        s1 = float(rng.uniform(-3.0, 3.0))
        s2 = float(rng.uniform(-3.0, 3.0))
        a = evolution_map(kind, rate, s1)
        b = evolution_map(kind, rate, s2)
        direct = evolution_map(kind, rate, s1 + s2)
        # Opposite-sign durations cancel in the product, so the rounding
        # floor tracks |a|*|b| rather than the (possibly tiny) result.
        scale = max(
            1.0,
            float(np.max(np.abs(a.entries))) * float(np.max(np.abs(b.entries))),
        )
        worst_group = max(
            worst_group, float(np.max(np.abs(compose(a, b).entries - direct.entries))) / scale
        )
        inv = inverse(a)
        ident = compose(a, inv).entries
        pair_scale = max(
            1.0,
            float(np.max(np.abs(a.entries))) * float(np.max(np.abs(inv.entries))),
        )
        worst_inv = max(worst_inv, float(np.max(np.abs(ident - np.eye(2)))) / pair_scale)
        gamma = rate if kind is MapKind.FINITE_TEMP else 0.5 * rate
        expected = math.exp(2.0 * gamma * s1)
        m = a.entries
        # The determinant is a difference of two products that can each dwarf
        # the result; the sum of their magnitudes is the cancellation scale.
        det_scale = max(expected, abs(m[0, 0] * m[1, 1]) + abs(m[0, 1] * m[1, 0]))
        det = float(np.linalg.det(m))
        worst_det = max(worst_det, abs(det - expected) / det_scale)

    worst_ode = 0.0
    cfg = OracleConfig(rk4_step=1e-4)
    for kind, rate in (
        (MapKind.FINITE_TEMP, 0.1),
        (MapKind.FINITE_TEMP, 0.8),
        (MapKind.CL_UNDER, 0.2),
        (MapKind.CL_UNDER, 1.6),
        (MapKind.CL_OVER, 2.5),
        (MapKind.CL_OVER, 4.0),
    ):
        for sig in (2.5, 5.0):
            ref = map_matrix_rk4(kind, rate, sig, cfg)
            got = evolution_map(kind, rate, sig).entries
            ref_scale = max(1.0, float(np.max(np.abs(ref))))
            worst_ode = max(worst_ode, float(np.max(np.abs(got - ref))) / ref_scale)

    # Underdamped formulas evaluated at imaginary frequency reproduce the
    # overdamped map entrywise.
    worst_cont = 0.0
    for sig in (-1.5, 0.4, 2.0):
        beta = 3.0
        om = 1j * math.sqrt(0.25 * beta * beta - 1.0)
        pref = np.exp(0.5 * beta * sig)
        c = np.cos(om * sig)
        s = np.sin(om * sig)
        h = 0.5 * beta / om
        m = pref * np.array([[c - h * s, s / om], [-s / om, c + h * s]])
        n = evolution_map(MapKind.CL_OVER, beta, sig).entries
        worst_cont = max(worst_cont, float(np.max(np.abs(m - n))))

    return [
        _check("group_law", worst_group, t11),
        _check("inverse_law", worst_inv, t11),
        _check("determinant", worst_det, tol if tol is not None else 1e-12),
        _check("ode_consistency", worst_ode, tol if tol is not None else 1e-8),
        _check("analytic_continuation", worst_cont, tol if tol is not None else 1e-10),
    ]


def suite_kernels(rng, tol: float | None = None) -> list[dict]:
    t10 = tol if tol is not None else 1e-10
    worst = {"alpha": 0.0, "A": 0.0, "B": 0.0, "C": 0.0}
    for _ in range(100):
        sig = float(rng.uniform(0.0, 8.0))
        g = float(rng.uniform(0.0, 1.5))
        ref = kernel_quadrature(MapKind.FINITE_TEMP, g, sig).entries
        got = dissipation_kernel(MapKind.FINITE_TEMP, g, sig).entries
        worst["alpha"] = max(worst["alpha"], float(np.max(np.abs(got - ref))))
        b = float(rng.uniform(0.02, 1.95))
        ref = kernel_quadrature(MapKind.CL_UNDER, b, sig).entries
        got = dissipation_kernel(MapKind.CL_UNDER, b, sig).entries
        worst["A"] = max(worst["A"], float(np.max(np.abs(got - ref))))
        b = float(rng.uniform(2.05, 6.0))
        refb, refc = kernel_quadrature(MapKind.CL_OVER, b, sig)
        gotb, gotc = dissipation_kernel(MapKind.CL_OVER, b, sig)
        worst["B"] = max(worst["B"], float(np.max(np.abs(gotb.entries - refb.entries))))
        worst["C"] = max(worst["C"], float(np.max(np.abs(gotc.entries - refc.entries))))

    # The 1/(2 beta) long-time limit is reached to 1e-8 once beta*sigma ~ 24;
    # at beta*sigma = 10 the genuine remaining transient is ~1.2e-4, recorded
    # below as an informational row.
    lim = dissipation_kernel(MapKind.CL_UNDER, 0.2, 120.0).entries
    limit_err = float(np.max(np.abs(lim - 2.5 * np.eye(2))))
    at50 = dissipation_kernel(MapKind.CL_UNDER, 0.2, 50.0).entries
    at50_err = float(np.max(np.abs(at50 - 2.5 * np.eye(2))))

    worst_drive = 0.0
    for _ in range(50):
        kind = (MapKind.FINITE_TEMP, MapKind.CL_UNDER)[int(rng.integers(2))]
        rate = float(rng.uniform(0.02, 1.5 if kind is MapKind.FINITE_TEMP else 1.9))
        lam = float(rng.uniform(0.0, 1.0))
        nu = float(rng.uniform(0.3, 1.7))
        tau = float(rng.uniform(0.0, 6.0))
        sig = float(rng.uniform(0.0, 6.0))
        ref = drive_vector_quadrature(kind, rate, lam, nu, tau, sig)
        got = drive_vector(kind, rate, lam, nu, tau, sig).components
        worst_drive = max(worst_drive, float(np.max(np.abs(got - ref))))

    return [
        _check("alpha_vs_quadrature", worst["alpha"], t10),
        _check("a_vs_quadrature", worst["A"], t10),
        _check("b_vs_quadrature", worst["B"], t10),
        _check("c_vs_quadrature", worst["C"], t10),
        _check("a_longtime_limit", limit_err, tol if tol is not None else 1e-8),
        _check(
            "a_limit_distance_sigma50",
            at50_err,
            None,
            "distance of A(sigma=50, beta=0.2) from the sigma->infinity limit; "
            "the transient decays like e^(-beta sigma), so this is genuinely ~1.2e-4",
        ),
        _check("drive_vs_quadrature", worst_drive, t10),
    ]


def _random_gaussian_state(rng) -> GaussianChordState:
    th = float(rng.uniform(0.0, math.pi))
    c, s = math.cos(th), math.sin(th)
    q = np.array([[c, -s], [s, c]])
    d = np.diag(rng.uniform(0.5, 2.0, 2))
    return GaussianChordState(q @ d @ q.T, rng.uniform(-2.0, 2.0, 2))


def _random_params(rng, variant: Variant) -> ModelParams:
    g = float(rng.uniform(0.05, 0.5))
    d = float(rng.uniform(0.2, 5.0))
    if variant is Variant.ZERO_TEMP:
        return ModelParams(variant, gamma=g)
    if variant is Variant.CL_OVER:
        if rng.integers(2):
            return ModelParams(
                variant, gamma=float(rng.uniform(1.05, 2.5)), D=d, od_regime=ODRegime.HIGH_T
            )
        return ModelParams(
            variant,
            gamma=float(rng.uniform(1.05, 2.5)),
            D=float(rng.uniform(0.01, 0.2)),
            od_regime=ODRegime.LOW_T,
            omega_c=float(rng.uniform(20.0, 100.0)),
        )
    if variant in (Variant.CL_UNDER, Variant.DRIVEN_CL):
        g = float(rng.uniform(0.05, 0.9))
    if variant in (Variant.DRIVEN_FT, Variant.DRIVEN_CL):
        dr = Drive(float(rng.uniform(0.05, 0.5)), float(rng.uniform(0.4, 1.6)))
        return ModelParams(variant, gamma=g, D=d, drive=dr)
    return ModelParams(variant, gamma=g, D=d)


def _oracle_energy(params: ModelParams, tau: float, sigma: float, w0) -> float:
    """Minus half the chord Laplacian of the oracle's w at the origin.

    Second-order central differences at spacings h and h/2, Richardson
    combined, so the truncation error scales like h^4.
    """
    h = 1e-3
    pts = np.array(
        [
            [h, -h, 0.0, 0.0, 0.5 * h, -0.5 * h, 0.0, 0.0],
            [0.0, 0.0, h, -h, 0.0, 0.0, 0.5 * h, -0.5 * h],
        ]
    )
    w = characteristics_value(params, w0, tau, sigma, pts)

    def lap(vals, step):
        return -0.5 * ((vals[0] + vals[1] - 2.0) + (vals[2] + vals[3] - 2.0)).real / (step * step)

    coarse = lap(w[:4], h)
    fine = lap(w[4:], 0.5 * h)
    return (4.0 * fine - coarse) / 3.0


def suite_models(rng, tol: float | None = None) -> list[dict]:
    warnings.simplefilter("ignore")

    worst_semi = 0.0
    for _ in range(50):
        variant = list(Variant)[int(rng.integers(len(Variant)))]
        p = _random_params(rng, variant)
        st = _random_gaussian_state(rng)
        tau = float(rng.uniform(0.0, 4.0))
        s1 = float(rng.uniform(0.0, 2.0))
        s2 = float(rng.uniform(0.0, 2.0))
        two = propagate(propagate(st, p, tau, s1), p, tau + s1, s2)
        one = propagate(st, p, tau, s1 + s2)
        worst_semi = max(
            worst_semi,
            float(np.max(np.abs(two.sigma_mat - one.sigma_mat))),
            float(np.max(np.abs(two.mu - one.mu))),
        )

    autonomous = [
        ModelParams(Variant.FINITE_TEMP, gamma=0.1, D=1.0),
        ModelParams(Variant.ZERO_TEMP, gamma=0.2),
        ModelParams(Variant.HIGH_TEMP, gamma=0.15, D=5.0),
        ModelParams(Variant.CL_UNDER, gamma=0.1, D=5.0),
        ModelParams(Variant.CL_OVER, gamma=1.5, D=5.0, od_regime=ODRegime.HIGH_T),
        ModelParams(Variant.CL_OVER, gamma=1.5, D=0.05, od_regime=ODRegime.LOW_T, omega_c=50.0),
    ]
    worst_fix = 0.0
    worst_conv = 0.0
    for p in autonomous:
        ss = stationary_state(p)
        moved = propagate(ss, p, 0.0, 3.7)
        worst_fix = max(
            worst_fix,
            float(np.max(np.abs(moved.sigma_mat - ss.sigma_mat))),
            float(np.max(np.abs(moved.mu))),
        )
        far = propagate(coherent_state(2.0, 1.0), p, 0.0, 80.0 / p.gamma)
        worst_conv = max(
            worst_conv,
            float(np.max(np.abs(far.sigma_mat - ss.sigma_mat))),
            float(np.max(np.abs(far.mu))),
        )

    worst_point = 0.0
    for variant in Variant:
        for _ in range(3):
            p = _random_params(rng, variant)
            st = _random_gaussian_state(rng)
            w0 = lambda k, s: evaluate(st, (k, s))
            tau = float(rng.uniform(0.0, 3.0))
            sig = float(rng.uniform(0.2, 1.0))
            pts = rng.normal(0.0, 1.2, (2, 20))
            ana = np.array(
                [propagate_pointwise(w0, p, tau, sig, pts[:, j]) for j in range(pts.shape[1])]
            )
            orc = characteristics_value(p, w0, tau, sig, pts)
            worst_point = max(worst_point, float(np.max(np.abs(ana - orc))))

    # Closed-form transient energies.  The thermal family is exact for any
    # Gaussian state; the driven-thermal form assumes zero initial mean.
    worst_thermal = 0.0
    for _ in range(20):
        p = _random_params(
            rng, (Variant.FINITE_TEMP, Variant.ZERO_TEMP, Variant.HIGH_TEMP)[int(rng.integers(3))]
        )
        st = _random_gaussian_state(rng)
        sig = float(rng.uniform(0.0, 6.0))
        got = closed_form_energy(p, energy(st), 0.0, sig)
        ref = energy(propagate(st, p, 0.0, sig))
        worst_thermal = max(worst_thermal, abs(got - ref))
    worst_driven = 0.0
    for _ in range(10):
        p = _random_params(rng, Variant.DRIVEN_FT)
        st = GaussianChordState(_random_gaussian_state(rng).sigma_mat, np.zeros(2))
        tau = float(rng.uniform(0.0, 4.0))
        sig = float(rng.uniform(0.0, 6.0))
        got = closed_form_energy(p, energy(st), tau, sig)
        ref = energy(propagate(st, p, tau, sig))
        worst_driven = max(worst_driven, abs(got - ref))

    # Brownian transients are exact for isotropic zero-mean covariances.
    worst_brown = 0.0
    for p in (
        ModelParams(Variant.CL_UNDER, gamma=0.1, D=5.0),
        ModelParams(Variant.CL_UNDER, gamma=0.45, D=0.5),
        ModelParams(Variant.CL_OVER, gamma=1.5, D=5.0, od_regime=ODRegime.HIGH_T),
        ModelParams(Variant.CL_OVER, gamma=2.2, D=0.05, od_regime=ODRegime.LOW_T, omega_c=50.0),
    ):
        for scale in (0.5, 1.7):
            st = GaussianChordState(scale * np.eye(2), np.zeros(2))
            for sig in (0.4, 1.3, 4.0):
                got = closed_form_energy(p, energy(st), 0.0, sig)
                ref = energy(propagate(st, p, 0.0, sig))
                worst_brown = max(worst_brown, abs(got - ref))

    # The propagated energy itself against the characteristics oracle.
    worst_orc_e = 0.0
    for p in (
        ModelParams(Variant.CL_UNDER, gamma=0.2, D=2.0),
        ModelParams(Variant.CL_OVER, gamma=1.5, D=5.0, od_regime=ODRegime.HIGH_T),
        ModelParams(Variant.DRIVEN_CL, gamma=0.2, D=2.0, drive=Drive(0.4, 0.7)),
        ModelParams(Variant.DRIVEN_FT, gamma=0.15, D=1.0, drive=Drive(0.3, 1.2)),
    ):
        st = coherent_state(1.0, -0.5)
        w0 = lambda k, s: evaluate(st, (k, s))
        ref = _oracle_energy(p, 0.3, 0.8, w0)
        got = energy(propagate(st, p, 0.3, 0.8))
        worst_orc_e = max(worst_orc_e, abs(got - ref))

    # Known deviations of the published shortcut formulas, quantified.
    dev_aniso = 0.0
    p = ModelParams(Variant.CL_UNDER, gamma=0.1, D=5.0)
    st = coherent_state(2.0, 0.0)
    for sig in np.linspace(0.2, 8.0, 25):
        dev_aniso = max(
            dev_aniso,
            abs(
                closed_form_energy(p, energy(st), 0.0, float(sig))
                - energy(propagate(st, p, 0.0, float(sig)))
            ),
        )
    dev_driven_cl = 0.0
    p = ModelParams(Variant.DRIVEN_CL, gamma=0.1, D=5.0, drive=Drive(0.3, 0.7))
    st = coherent_state(0.0, 0.0)
    for sig in np.linspace(0.2, 8.0, 25):
        dev_driven_cl = max(
            dev_driven_cl,
            abs(
                closed_form_energy(p, energy(st), 0.0, float(sig))
                - energy(propagate(st, p, 0.0, float(sig)))
            ),
        )

    # Driving must shift the mean only.
    base = ModelParams(Variant.FINITE_TEMP, gamma=0.1, D=1.0)
    driven = ModelParams(Variant.DRIVEN_FT, gamma=0.1, D=1.0, drive=Drive(0.3, 0.9))
    st = coherent_state(1.0, 0.0)
    worst_dec = 0.0
    for sig in (0.7, 2.0, 11.0):
        a = propagate(st, base, 0.0, sig)
        b = propagate(st, driven, 0.0, sig)
        worst_dec = max(worst_dec, float(np.max(np.abs(a.sigma_mat - b.sigma_mat))))
    pure = ModelParams(Variant.DRIVEN_FT, gamma=0.01, D=0.0, drive=Drive(0.1, 1.0))
    worst_pure = 0.0
    for sig in np.linspace(0.5, 100.0, 60):
        det = float(np.linalg.det(propagate(coherent_state(0, 0), pure, 0.0, float(sig)).sigma_mat))
        worst_pure = max(worst_pure, abs(det - 0.25))

    return [
        _check("semigroup", worst_semi, tol if tol is not None else 1e-10),
        _check("stationary_invariance", worst_fix, tol if tol is not None else 1e-12),
        _check("stationary_convergence", worst_conv, tol if tol is not None else 1e-8),
        _check("pointwise_vs_oracle", worst_point, tol if tol is not None else 1e-8),
        _check("energy_thermal_exact", worst_thermal, tol if tol is not None else 1e-9),
        _check("energy_driven_thermal_zero_mean", worst_driven, tol if tol is not None else 1e-9),
        _check("energy_brownian_isotropic", worst_brown, tol if tol is not None else 1e-9),
        _check("energy_vs_oracle", worst_orc_e, tol if tol is not None else 1e-6),
        _check(
            "energy_shortcut_anisotropic_deviation",
            dev_aniso,
            None,
            "published Brownian transient assumes isotropic zero-mean initial data; "
            "for a displaced state the propagated energy is authoritative",
        ),
        _check(
            "energy_shortcut_driven_brownian_deviation",
            dev_driven_cl,
            None,
            "published driven-Brownian envelope decays at twice the covariance rate; "
            "the propagated energy is authoritative",
        ),
        _check("driven_decoupling", worst_dec, tol if tol is not None else 0.0),
        _check("driven_purity", worst_pure, tol if tol is not None else 1e-10),
    ]


def suite_fock(rng, tol: float | None = None) -> list[dict]:
    p = ModelParams(Variant.FINITE_TEMP, gamma=0.1, D=1.0)
    grid = np.linspace(0.0, 40.0, 9)
    res = fock_energy_trace(p, (0.0, 0.0), grid)
    closed = np.array([closed_form_energy(p, 0.5, 0.0, s) for s in grid])
    worst = float(np.max(np.abs(res.energies - closed)))

    short = np.linspace(0.0, 2.0, 5)
    res_c = fock_energy_trace(p, (1.0, 0.0), short)
    closed_c = np.array([closed_form_energy(p, 1.0, 0.0, s) for s in short])
    worst_c = float(np.max(np.abs(res_c.energies - closed_c)))

    p0 = ModelParams(Variant.FINITE_TEMP, gamma=0.1, D=0.0)
    res_d = fock_energy_trace(p0, (0.0, 0.0), np.linspace(0.0, 1.0, 3))
    worst_dark = float(np.max(np.abs(res_d.energies - 0.5)))

    trace_err = max(res.trace_error, res_c.trace_error, res_d.trace_error)
    top_pop = max(res.top_population, res_c.top_population, res_d.top_population)

    return [
        _check("fock_vs_closed_form", worst, tol if tol is not None else 1e-3),
        _check("fock_coherent_vs_closed_form", worst_c, tol if tol is not None else 1e-4),
        _check("fock_dark_state", worst_dark, tol if tol is not None else 1e-10),
        _check("fock_trace_preserved", trace_err, tol if tol is not None else 1e-10),
        _check("fock_truncation_leakage", top_pop, tol if tol is not None else 1e-8),
    ]


_SUITE_FUNCS = {
    "maps": suite_maps,
    "kernels": suite_kernels,
    "models": suite_models,
    "fock": suite_fock,
}


def run_validate(suite: str, out_dir, tol: float | None = None, seed: int = 0) -> int:
    """Run one validation suite, write its JSON report, return an exit code."""
    if suite not in _SUITE_FUNCS:
        print(f"error: unknown suite {suite!r}; choose from {_SUITES}", file=sys.stderr)
        return EXIT_CONFIG
    rng = np.random.default_rng(seed)
    checks = _SUITE_FUNCS[suite](rng, tol)
    for rec in checks:
        status = "PASS" if rec["pass"] else "FAIL"
        if rec["tolerance"] is None:
            print(f"[{suite}:{rec['check']}] max_error={rec['max_error']:.6e} (informational)")
        else:
            print(
                f"[{suite}:{rec['check']}] max_error={rec['max_error']:.6e} "
                f"tolerance={rec['tolerance']:.1e} {status}"
            )
    all_pass = all(rec["pass"] for rec in checks)
    report = {"suite": suite, "seed": seed, "checks": checks, "all_pass": all_pass}
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        with open(out / f"validate_{suite}.json", "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2)
            fh.write("\n")
    except OSError as exc:
        print(f"error: cannot write report: {exc}", file=sys.stderr)
        return EXIT_IO
    print(f"wrote {out / f'validate_{suite}.json'}")
    return EXIT_OK if all_pass else EXIT_VALIDATION


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="chordprop",
        description="Propagate damped-oscillator chord functions and validate the closed forms.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute a scenario config")
    p_run.add_argument("config", help="path to a scenario JSON file")
    p_run.add_argument("--out", default=".", help="output directory (default: current)")
    p_run.add_argument("--no-plot", action="store_true", help="skip PNG rendering")

    p_val = sub.add_parser("validate", help="run a cross-check suite")
    p_val.add_argument("suite", choices=_SUITES)
    p_val.add_argument("--tol", type=float, default=None, help="override every gating tolerance")
    p_val.add_argument("--seed", type=int, default=0, help="seed for randomized draws")
    p_val.add_argument("--out", default=".", help="output directory (default: current)")

    args = parser.parse_args(argv)
    if args.command == "run":
        return run_scenario(args.config, args.out, plot=not args.no_plot)
    return run_validate(args.suite, args.out, tol=args.tol, seed=args.seed)


if __name__ == "__main__":
    raise SystemExit(main())
