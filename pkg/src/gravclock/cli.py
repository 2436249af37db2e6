"""Command-line interface.

Subcommands map onto the analysis modules: ``delta-tau`` (arm proper-time
difference), ``interfere`` (visibility and port probabilities), ``gme``
(entanglement measures), ``qep`` (equivalence-principle test theory),
``detect`` (log-domain order-of-magnitude estimates), ``sweep`` (parameter
tables), ``verify`` (extremal-path residual study) and ``selftest``
(closed-form versus oracle suites).

Outputs are CSV (default) or JSON, numbers in scientific notation with 17
significant digits; log10 columns carry the ``_log10`` suffix.  A flat
``key = value`` config file supplies defaults that explicit flags override;
unknown keys are rejected.  Exit codes: 0 success, 2 validation error,
3 numerical non-convergence, 64 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys

import numpy as np

from . import __version__
from . import detectability as det
from . import geodesic as geo
from . import interferometry as itf
from . import propertime as pt
from . import qep as qep_mod
from . import spacetime as st
from .clockstate import (
    density_from_state,
    entanglement_of_formation,
    reduced_density,
    state_vector,
    tensor_state,
    von_neumann_entropy,
    witness_value,
)
from .constants import PhysicalConstants, resolve_constants
from .errors import ConfigError, DomainError, GravclockError, NoConvergence
from .logdomain import SignedLog

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NO_CONVERGENCE = 3
EXIT_USAGE = 64


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would sys.exit(2); we want 64
        raise _UsageError(message)


def _fmt(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    x = float(value)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.16e}"


def _json_dump(obj, out: list[str]) -> None:
    if isinstance(obj, dict):
        out.append("{")
        for i, (key, val) in enumerate(obj.items()):
            if i:
                out.append(", ")
            out.append(f'"{key}": ')
            _json_dump(val, out)
        out.append("}")
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for i, val in enumerate(obj):
            if i:
                out.append(", ")
            _json_dump(val, out)
        out.append("]")
    elif isinstance(obj, str):
        out.append('"' + obj.replace("\\", "\\\\").replace('"', '\\"') + '"')
    elif isinstance(obj, (bool, np.bool_)):
        out.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif obj is None:
        out.append("null")
    else:
        x = float(obj)
        if math.isfinite(x):
            out.append(f"{x:.16e}")
        else:
            out.append('"' + _fmt(x) + '"')


def _emit(args, inputs: dict, columns, rows, constants: PhysicalConstants) -> None:
    """Write one result table as CSV or a single JSON object."""
    if args.format == "json":
        meta = {"version": __version__, "constants": {"c": constants.c, "G": constants.G, "hbar": constants.hbar}}
        if len(rows) == 1:
            outputs = dict(zip(columns, rows[0]))
        else:
            outputs = {"columns": list(columns), "rows": [list(r) for r in rows]}
        parts: list[str] = []
        _json_dump({"inputs": inputs, "outputs": outputs, "meta": meta}, parts)
        text = "".join(parts) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
        text = buf.getvalue()
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _read_config(path: str) -> dict:
    values: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
            key, _, text = line.partition("=")
            values[key.strip().replace("-", "_")] = text.strip()
    return values


_COMMON_DEFAULTS = {"format": "csv", "output": None, "config": None, "constants": None}


def _add_common(parser: _Parser) -> None:
    parser.add_argument("--config", help="flat key = value config file; flags override")
    parser.add_argument("--constants", help="constants override file (or $GRAVCLOCK_CONSTANTS)")
    parser.add_argument("--format", choices=("csv", "json"), help="output format (default csv)")
    parser.add_argument("--output", help="output file (default stdout)")


def _merge(args: argparse.Namespace, defaults: dict) -> argparse.Namespace:
    """defaults < config file < explicit flags."""
    merged = dict(_COMMON_DEFAULTS)
    merged.update(defaults)
    supplied = vars(args)
    config_path = supplied.get("config") or merged.get("config")
    if config_path:
        raw = _read_config(config_path)
        known = set(merged)
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"unknown config key(s): {sorted(unknown)}")
        for key, text in raw.items():
            default = merged[key]
            if isinstance(default, bool):
                merged[key] = text.lower() in ("1", "true", "yes")
            elif isinstance(default, int) and not isinstance(default, bool):
                merged[key] = int(float(text))
            else:
                # numeric where possible; names/lists stay as text
                try:
                    merged[key] = float(text)
                except ValueError:
                    merged[key] = text
    for key, val in supplied.items():
        if key in ("command",):
            continue
        merged[key] = val
    out = argparse.Namespace(**merged)
    out.command = supplied["command"]
    return out


def _clock_from(ns) -> itf.ClockModel:
    constants = resolve_constants(ns.constants)
    if ns.E_g is not None or ns.E_e is not None:
        if ns.E_g is None or ns.E_e is None:
            raise ConfigError("provide both --E-g and --E-e, or neither")
        return itf.ClockModel(E_g=ns.E_g, E_e=ns.E_e)
    hbar = constants.hbar
    return itf.ClockModel(
        E_g=(ns.mean_rate - 0.5 * ns.gap_rate) * hbar,
        E_e=(ns.mean_rate + 0.5 * ns.gap_rate) * hbar,
    )


def _delta_tau_from(ns, constants: PhysicalConstants) -> float:
    if ns.delta_tau is not None:
        return ns.delta_tau
    model = st.RotatingMassModel(M=ns.M, J=ns.J)
    geom = pt.InterferometerGeometry(w=ns.w, L=ns.L_ratio * ns.w, v0=ns.v0)
    return pt.delta_tau_interferometer(model, geom, "closed_form", constants).delta_tau


_GEOMETRY_DEFAULTS = {"M": 0.0, "J": 1.0, "w": 1e-3, "v0": 0.0, "L_ratio": 1e3}
_CLOCK_DEFAULTS = {"E_g": None, "E_e": None, "gap_rate": 1e15, "mean_rate": 5e14, "delta_tau": None}


def _add_geometry(parser: _Parser) -> None:
    parser.add_argument("--M", type=float, help="source mass, kg (default 0)")
    parser.add_argument("--J", type=float, help="source angular momentum, kg m^2/s (default 1)")
    parser.add_argument("--w", type=float, help="arm separation, m (default 1e-3)")
    parser.add_argument("--v0", type=float, help="asymptotic speed, m/s (default 0)")
    parser.add_argument("--L-ratio", dest="L_ratio", type=float, help="arm half-length / w (default 1e3)")


def _add_clock(parser: _Parser) -> None:
    parser.add_argument("--E-g", dest="E_g", type=float, help="ground energy, J")
    parser.add_argument("--E-e", dest="E_e", type=float, help="excited energy, J")
    parser.add_argument("--gap-rate", dest="gap_rate", type=float, help="dE/hbar, rad/s (default 1e15)")
    parser.add_argument("--mean-rate", dest="mean_rate", type=float, help="Ebar/hbar, rad/s (default 5e14)")
    parser.add_argument("--delta-tau", dest="delta_tau", type=float, help="arm proper-time difference, s (overrides geometry)")


def _build_parser() -> _Parser:
    parser = _Parser(prog="gravclock", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"gravclock {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("delta-tau", argument_default=argparse.SUPPRESS,
                       help="arm proper-time difference of the interferometer")
    _add_common(p)
    _add_geometry(p)
    p.add_argument("--mode", choices=("closed_form", "quadrature", "both"), help="evaluation route (default closed_form)")

    p = sub.add_parser("interfere", argument_default=argparse.SUPPRESS,
                       help="visibility and detection probabilities")
    _add_common(p)
    _add_geometry(p)
    _add_clock(p)

    p = sub.add_parser("gme", argument_default=argparse.SUPPRESS,
                       help="gravity-mediated entanglement measures")
    _add_common(p)
    _add_geometry(p)
    _add_clock(p)

    p = sub.add_parser("qep", argument_default=argparse.SUPPRESS,
                       help="equivalence-principle test-theory observables")
    _add_common(p)
    _add_geometry(p)
    _add_clock(p)
    p.add_argument("--theta", type=float, help="eigenbasis mixing angle, rad (default 0)")
    p.add_argument("--varphi", type=float, help="relative phase of the mixed eigenstate (default 0)")
    p.add_argument("--prime-gap-rate", dest="prime_gap_rate", type=float, help="dE'/hbar, rad/s (default --gap-rate)")
    p.add_argument("--prime-mean-rate", dest="prime_mean_rate", type=float, help="Ebar'/hbar, rad/s (default --mean-rate)")

    p = sub.add_parser("detect", argument_default=argparse.SUPPRESS,
                       help="log-domain phase estimates and required angular momentum")
    _add_common(p)
    p.add_argument("--clock-rate", dest="clock_rate", type=float, help="dE/hbar, rad/s (default 1e15)")
    p.add_argument("--w", type=float, help="arm separation, m (default 1e-3)")
    p.add_argument("--v0", type=float, help="asymptotic speed, m/s (default 0)")
    p.add_argument("--ell-log10", dest="ell_log10", type=float, help="log10 of J/hbar")
    p.add_argument("--target-phase", dest="target_phase", type=float, help="phase (rad) to solve the required ell for")

    p = sub.add_parser("sweep", argument_default=argparse.SUPPRESS,
                       help="tabulate quantities along one parameter axis")
    _add_common(p)
    p.add_argument("--axis", help=f"one of {', '.join(det.AXES)}")
    p.add_argument("--values", help="comma-separated axis values")
    p.add_argument("--outputs", help=f"comma-separated subset of {', '.join(det.OUTPUTS)}")
    p.add_argument("--clock-rate", dest="clock_rate", type=float, help="dE/hbar, rad/s")
    p.add_argument("--mean-rate", dest="mean_rate", type=float, help="Ebar/hbar, rad/s")
    p.add_argument("--w", type=float, help="arm separation, m")
    p.add_argument("--v0", type=float, help="asymptotic speed, m/s")
    p.add_argument("--ell-log10", dest="ell_log10", type=float, help="log10 of J/hbar")
    p.add_argument("--theta", type=float, help="test-theory mixing angle, rad")

    p = sub.add_parser("verify", argument_default=argparse.SUPPRESS,
                       help="extremal-path residual study in exaggerated units")
    _add_common(p)
    p.add_argument("--n-segments", dest="n_segments", type=int, help="trajectory segments (default 512)")
    p.add_argument("--scales", help="comma-separated perturbation scales (default 0.08..8)")

    p = sub.add_parser("selftest", argument_default=argparse.SUPPRESS,
                       help="closed-form versus oracle equivalence suites")
    _add_common(p)
    p.add_argument("--seed", type=int, help="random seed for sampled suites (default 0)")
    p.add_argument("--samples", type=int, help="random samples per suite (default 2000)")

    return parser


# ---------------------------------------------------------------------------
# subcommand bodies
# ---------------------------------------------------------------------------


def _cmd_delta_tau(ns) -> int:
    constants = resolve_constants(ns.constants)
    model = st.RotatingMassModel(M=ns.M, J=ns.J)
    geom = pt.InterferometerGeometry(w=ns.w, L=ns.L_ratio * ns.w, v0=ns.v0)
    inputs = {"M": ns.M, "J": ns.J, "w": ns.w, "v0": ns.v0, "L_ratio": ns.L_ratio, "mode": ns.mode}
    columns: list[str] = []
    row: list[float] = []
    if ns.mode in ("closed_form", "both"):
        bundle = pt.delta_tau_interferometer(model, geom, "closed_form", constants)
        suffix = "_closed_form" if ns.mode == "both" else ""
        columns += [f"delta_tau{suffix}", f"delta_tau{suffix}_log10"]
        row += [bundle.delta_tau, bundle.log10_delta_tau]
    if ns.mode in ("quadrature", "both"):
        bundle = pt.delta_tau_interferometer(model, geom, "quadrature", constants)
        suffix = "_quadrature" if ns.mode == "both" else ""
        columns += [f"delta_tau{suffix}", f"delta_tau{suffix}_log10"]
        row += [bundle.delta_tau, bundle.log10_delta_tau]
    _emit(ns, inputs, columns, [row], constants)
    return EXIT_OK


def _cmd_interfere(ns) -> int:
    constants = resolve_constants(ns.constants)
    clock = _clock_from(ns)
    delta_tau = _delta_tau_from(ns, constants)
    res = itf.detection_probabilities(clock, delta_tau, constants)
    deficit = itf.visibility(clock, delta_tau, "deficit", constants)
    gap_log = SignedLog.from_linear(itf.gap_phase(clock, delta_tau, constants))
    inputs = {"delta_tau": delta_tau, "E_g": clock.E_g, "E_e": clock.E_e}
    columns = (
        "visibility", "visibility_deficit", "pr_left", "pr_right",
        "phase_mean", "phase_mean_log10", "phase_gap", "phase_gap_log10",
        "delta_tau",
    )
    row = (
        res.visibility, deficit, res.pr_left, res.pr_right,
        res.phase_mean, res.phase_mean_log.log10, gap_log.linear, gap_log.log10,
        delta_tau,
    )
    _emit(ns, inputs, columns, [row], constants)
    return EXIT_OK


def _cmd_gme(ns) -> int:
    constants = resolve_constants(ns.constants)
    clock = _clock_from(ns)
    delta_tau = _delta_tau_from(ns, constants)
    res = itf.gme_entanglement(clock, delta_tau, constants)
    vis = itf.visibility(clock, delta_tau, "direct", constants)
    inputs = {"delta_tau": delta_tau, "E_g": clock.E_g, "E_e": clock.E_e}
    columns = ("visibility", "ee_spc", "ef_sp", "witness", "delta_tau")
    row = (vis, res.ee_spc, res.ef_sp, res.witness, delta_tau)
    _emit(ns, inputs, columns, [row], constants)
    return EXIT_OK


def _cmd_qep(ns) -> int:
    constants = resolve_constants(ns.constants)
    clock = _clock_from(ns)
    delta_tau = _delta_tau_from(ns, constants)
    prime_gap = ns.prime_gap_rate if ns.prime_gap_rate is not None else ns.gap_rate
    prime_mean = ns.prime_mean_rate if ns.prime_mean_rate is not None else ns.mean_rate
    hbar = constants.hbar
    tt = qep_mod.QepTestTheory(
        H_N=np.diag([clock.E_g, clock.E_e]),
        E_g_prime=(prime_mean - 0.5 * prime_gap) * hbar,
        E_e_prime=(prime_mean + 0.5 * prime_gap) * hbar,
        theta=ns.theta,
        varphi=ns.varphi,
    )
    res = qep_mod.qep_gme_entanglement(tt, None, delta_tau, constants)
    inputs = {
        "delta_tau": delta_tau, "theta": ns.theta, "varphi": ns.varphi,
        "E_g_prime": tt.E_g_prime, "E_e_prime": tt.E_e_prime,
        "commutator_ratio": tt.commutator_ratio,
    }
    columns = ("visibility", "xi_phase", "pr_left", "pr_right", "ee_spc", "ef_sp")
    row = (res.visibility, res.xi_delta_tau, res.pr_left, res.pr_right, res.ee_spc, res.ef_sp)
    _emit(ns, inputs, columns, [row], constants)
    return EXIT_OK


def _cmd_detect(ns) -> int:
    constants = resolve_constants(ns.constants)
    per_unit = det.phase_per_unit_ell_log10(ns.clock_rate, ns.w, ns.v0, constants)
    inputs = {"clock_rate": ns.clock_rate, "w": ns.w, "v0": ns.v0}
    columns = ["phase_per_unit_ell_log10"]
    row = [per_unit]
    if ns.ell_log10 is not None:
        inputs["ell_log10"] = ns.ell_log10
        q = det.DetectabilityQuery(ns.clock_rate, ns.w, ns.v0, SignedLog.from_log10(ns.ell_log10))
        columns.append("phase_log10")
        row.append(det.phase_shift_estimate(q, constants))
    if ns.target_phase is not None:
        inputs["target_phase"] = ns.target_phase
        columns.append("log10_ell")
        row.append(det.required_ell(ns.target_phase, ns.clock_rate, ns.w, ns.v0, constants))
    _emit(ns, inputs, columns, [row], constants)
    return EXIT_OK


def _cmd_sweep(ns) -> int:
    constants = resolve_constants(ns.constants)
    if not ns.axis or ns.values is None:
        raise ConfigError("sweep requires --axis and --values")
    values = tuple(float(v) for v in str(ns.values).split(",") if v.strip())
    outputs = tuple(o.strip() for o in str(ns.outputs).split(",") if o.strip()) if ns.outputs else ()
    fixed = {}
    for key in ("clock_rate", "mean_rate", "w", "v0", "ell_log10", "theta"):
        val = getattr(ns, key)
        if val is not None and key != ns.axis:
            fixed[key] = val
    cfg = det.SweepConfig(axis=ns.axis, values=values, outputs=outputs, fixed=fixed)
    table = det.run_sweep(cfg, constants)
    inputs = {"axis": ns.axis, "values": list(values), "outputs": list(outputs), **fixed}
    _emit(ns, inputs, table.columns, list(table.rows), constants)
    return EXIT_OK


def _cmd_verify(ns) -> int:
    constants = PhysicalConstants(c=1.0, G=1.0, hbar=1.0)
    scales = [float(v) for v in str(ns.scales).split(",") if v.strip()]
    model = st.RotatingMassModel(M=1e-6, J=1.25e-3)
    bc = geo.BoundaryConditions(
        st.SpacetimePoint(0.0, 1.0, 0.5 * math.pi, 0.0),
        st.SpacetimePoint(30.0, 1.0, 0.5 * math.pi, 0.3),
    )
    report = geo.verify_first_order(model, bc, scales, constants=constants, n_segments=ns.n_segments)

    radial = geo.solve_extremal_path(
        st.RotatingMassModel(M=1e-6, J=0.0),
        geo.BoundaryConditions(
            st.SpacetimePoint(0.0, 1.0, 0.5 * math.pi, 0.0),
            st.SpacetimePoint(100.0, 1.3, 0.5 * math.pi, 0.0),
        ),
        constants=constants,
        n_segments=ns.n_segments,
    )
    ratios = geo.energy_ratio_samples(st.RotatingMassModel(M=1e-6, J=0.0), radial.path, constants)
    drift = float((ratios.max() - ratios.min()) / abs(ratios.mean()))

    inputs = {"scales": scales, "n_segments": ns.n_segments}
    columns = ("epsilon", "exact_shift", "predicted_shift", "residual")
    rows = [
        (e, ex, pr, r)
        for e, ex, pr, r in zip(
            report.epsilons, report.exact_shifts, report.predicted_shifts, report.residuals
        )
    ]
    if ns.format == "json":
        outputs = {
            "residual_slope": report.slope,
            "energy_ratio_drift": drift,
            "all_converged": report.all_converged,
            "table": {"columns": list(columns), "rows": [list(r) for r in rows]},
        }
        parts: list[str] = []
        _json_dump(
            {
                "inputs": inputs,
                "outputs": outputs,
                "meta": {
                    "version": __version__,
                    "constants": {"c": constants.c, "G": constants.G, "hbar": constants.hbar},
                },
            },
            parts,
        )
        text = "".join(parts) + "\n"
        if ns.output:
            with open(ns.output, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    else:
        summary_rows = rows + [
            ("slope", report.slope, math.nan, math.nan),
            ("drift", drift, math.nan, math.nan),
        ]
        _emit(ns, inputs, columns, summary_rows, constants)
    return EXIT_OK if report.all_converged and radial.converged else EXIT_NO_CONVERGENCE


def _cmd_selftest(ns) -> int:
    constants = resolve_constants(ns.constants)
    rng = np.random.default_rng(ns.seed)
    hbar = constants.hbar
    checks: list[tuple[str, float, float]] = []  # name, worst error, tolerance

    worst_ee = worst_ef = worst_pr = 0.0
    for gap_phase in np.linspace(0.0, 2.0 * math.pi, 10, endpoint=False):
        for mean_phase in np.linspace(0.0, 2.0 * math.pi, 10, endpoint=False):
            clock = itf.ClockModel(
                E_g=(mean_phase - 0.5 * gap_phase) * hbar,
                E_e=(mean_phase + 0.5 * gap_phase) * hbar,
            )
            res = itf.gme_entanglement(clock, 1.0, constants)
            worst_ee = max(
                worst_ee,
                abs(res.ee_spc - von_neumann_entropy(reduced_density(res.state, ["S"]))),
            )
            worst_ef = max(
                worst_ef,
                abs(res.ef_sp - entanglement_of_formation(reduced_density(res.state, ["S", "P"]))),
            )
            state = itf.interferometer_state(clock, 1.0, constants)
            pl = float(np.real(reduced_density(state, ["P"]).matrix[0, 0]))
            worst_pr = max(
                worst_pr, abs(itf.detection_probabilities(clock, 1.0, constants).pr_left - pl)
            )
    checks.append(("gme_entropy_vs_oracle", worst_ee, 1e-10))
    checks.append(("gme_formation_vs_oracle", worst_ef, 1e-10))
    checks.append(("probabilities_vs_state", worst_pr, 1e-12))

    worst_q = 0.0
    for _ in range(100):
        theta = rng.uniform(0.0, 0.5 * math.pi)
        gap = rng.uniform(0.0, 2.0 * math.pi)
        mean = rng.uniform(0.0, 2.0 * math.pi)
        varphi = rng.uniform(0.0, 2.0 * math.pi)
        tt = qep_mod.QepTestTheory(
            H_N=np.diag([0.0, hbar]),
            E_g_prime=(mean - 0.5 * gap) * hbar,
            E_e_prime=(mean + 0.5 * gap) * hbar,
            theta=theta,
            varphi=varphi,
        )
        res = qep_mod.qep_gme_entanglement(tt, None, 1.0, constants)
        chi1, chi2 = qep_mod.qep_arm_states(tt, 1.0, constants)
        worst_q = max(worst_q, abs(abs(np.vdot(chi1, chi2)) - res.visibility))
    checks.append(("qep_visibility_vs_overlap", worst_q, 1e-10))

    worst_w = 0.0
    for _ in range(ns.samples):
        amps_s = rng.normal(size=2) + 1j * rng.normal(size=2)
        amps_p = rng.normal(size=2) + 1j * rng.normal(size=2)
        state = tensor_state(
            [state_vector(amps_s, [("S", 2)]), state_vector(amps_p, [("P", 2)])]
        )
        worst_w = max(worst_w, witness_value(density_from_state(state)))
    checks.append(("witness_on_product_states", worst_w, 1.0 + 1e-9))

    columns = ("check", "value", "bound", "passed")
    rows = [(name, val, tol, val <= tol) for name, val, tol in checks]
    inputs = {"seed": ns.seed, "samples": ns.samples}
    if ns.format == "json":
        outputs = {name: {"value": val, "bound": tol, "passed": val <= tol} for name, val, tol in checks}
        parts: list[str] = []
        _json_dump(
            {
                "inputs": inputs,
                "outputs": outputs,
                "meta": {
                    "version": __version__,
                    "constants": {"c": constants.c, "G": constants.G, "hbar": constants.hbar},
                },
            },
            parts,
        )
        text = "".join(parts) + "\n"
        if ns.output:
            with open(ns.output, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    else:
        _emit(ns, inputs, columns, rows, constants)
    return EXIT_OK if all(val <= tol for _, val, tol in checks) else 1


_DEFAULTS = {
    "delta-tau": {**_GEOMETRY_DEFAULTS, "mode": "closed_form"},
    "interfere": {**_GEOMETRY_DEFAULTS, **_CLOCK_DEFAULTS},
    "gme": {**_GEOMETRY_DEFAULTS, **_CLOCK_DEFAULTS},
    "qep": {
        **_GEOMETRY_DEFAULTS,
        **_CLOCK_DEFAULTS,
        "theta": 0.0,
        "varphi": 0.0,
        "prime_gap_rate": None,
        "prime_mean_rate": None,
    },
    "detect": {"clock_rate": 1e15, "w": 1e-3, "v0": 0.0, "ell_log10": None, "target_phase": None},
    "sweep": {
        "axis": None, "values": None, "outputs": None,
        "clock_rate": None, "mean_rate": None, "w": None, "v0": None,
        "ell_log10": None, "theta": None,
    },
    "verify": {"n_segments": 512, "scales": "0.08,0.16,0.32,0.64,1.28,2.56,5.12,8.0"},
    "selftest": {"seed": 0, "samples": 2000},
}

_HANDLERS = {
    "delta-tau": _cmd_delta_tau,
    "interfere": _cmd_interfere,
    "gme": _cmd_gme,
    "qep": _cmd_qep,
    "detect": _cmd_detect,
    "sweep": _cmd_sweep,
    "verify": _cmd_verify,
    "selftest": _cmd_selftest,
}


def run_command(argv=None) -> int:
    """Parse argv, dispatch, and return the process exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        ns = _merge(args, _DEFAULTS[args.command])
        return _HANDLERS[args.command](ns)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NoConvergence as exc:
        print(f"no convergence: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    except FileNotFoundError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (ConfigError, DomainError, GravclockError, ValueError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


def main(argv=None) -> None:
    sys.exit(run_command(argv))


if __name__ == "__main__":
    main()
