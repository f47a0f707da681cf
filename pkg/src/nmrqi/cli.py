"""Command-line interface: point reports, sweeps, phase diagrams, spectra, reconstruction, validation.

Frequencies given on the command line share the units of ``--j`` and are
divided by J before use, so with the default ``--j 1`` they are the ratios
omega/J. ``--tau`` is always the rescaled temperature k_B T / J.

Every CSV starts with a header row and writes floats with 12 significant
digits, so identical flags give byte-identical output.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .quantifiers import (
    coherence_relative_entropy,
    concurrence_check,
    diagonal_entropy,
    density_eigenvalues,
    mixedness,
    mixedness_closed_form,
    purity,
    von_neumann_entropy,
)
from .reconstruction import (
    EPSILON_THETA,
    POPULATION_TOL,
    DegenerateAngleError,
    NmrObservables,
    reconstruct,
)
from .spectrum import (
    DEFAULT_FLIP_DEG,
    DEFAULT_LINEWIDTH,
    DEFAULT_POINTS,
    SCENARIO_TAU,
    SCENARIO_THETAS_DEG,
    assign_peaks,
    default_axis,
    line_amplitudes,
    scenario_spectra,
    synthesize_trace,
    trace_peaks,
)
from .spin_system import ParameterError, SpinParams, critical_omega_sigma, derive_params, energy_levels
from .thermal import DEFAULT_DEGENERACY_TOL, density_matrix, regime, thermal_state
from .validation import run_validation
from .witness import FieldRatioError, phase_diagram, witness_report

SCHEMA_VERSION = 1
THREADS_ENV = "NMRQI_THREADS"

SWEEP_COLUMNS = {
    "coherence": ["coherence_r", "entropy_s", "diagonal_entropy_sd"],
    "mixedness": ["mixedness_m", "purity", "mixedness_closed_form"],
    "witness": ["witness_w", "singlet_fidelity", "cxx", "cyy", "czz", "verdict", "ppt_verdict"],
}

EPILOG = """\
CSV schemas (header row always present, floats as %.12g):
  sweep          tau, omega_sigma, omega_delta, then
                   coherence: coherence_r, entropy_s, diagonal_entropy_sd
                   mixedness: mixedness_m, purity, mixedness_closed_form (blank at tau = 0)
                   witness:   witness_w, singlet_fidelity, cxx, cyy, czz, verdict, ppt_verdict
  phase-diagram  grid: tau, omega_delta, witness_w, verdict, ppt_verdict
                 boundary: tau, omega_delta, witness_w
  spectra        trace: frequency, intensity (JSON sidecar lists the lines)
  reconstruct    input columns p1z, p2z, p1z2z, theta_deg
                 output: line, status, p1, p2, p3, p4, m_observables, m_populations,
                         linear_entropy, condition_number, message
Frequencies are in units of --j (ratios omega/J with the default --j 1).
Set NMRQI_THREADS to parallelize sweeps and phase diagrams.
"""


class UsageError(Exception):
    """Invalid input that should end the program with exit status 2."""


def fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if value == 0.0:
            value = 0.0  # drop the sign of -0.0
        return format(value, ".12g")
    return str(value)


def write_csv(path, header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    if path is None or str(path) == "-":
        sys.stdout.write(buf.getvalue())
    else:
        Path(path).write_text(buf.getvalue())


def _json_scalar(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def write_json(path, payload):
    text = json.dumps({"schema_version": SCHEMA_VERSION, **payload}, indent=2, sort_keys=True, default=_json_scalar) + "\n"
    if path is None or str(path) == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def thread_count() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise UsageError(f"{THREADS_ENV} must be a positive integer, got {n}")
    return n


def params_from_args(args, **override) -> SpinParams:
    values = {k: getattr(args, k) for k in ("omega_sigma", "omega_delta", "tau")}
    values.update(override)
    raw = SpinParams.from_sum_diff(values["omega_sigma"], values["omega_delta"], args.j, values["tau"])
    return raw.normalized()


def _complex_entry(z):
    return {"re": float(np.real(z)), "im": float(np.imag(z))}


def point_report(p: SpinParams, degeneracy_tol: float = DEFAULT_DEGENERACY_TOL) -> dict:
    st = thermal_state(p, degeneracy_tol)
    rho = st.rho
    d = derive_params(p)
    report = witness_report(rho, p)
    return {
        "params": {
            "omega_sigma": p.omega_sigma,
            "omega_delta": p.omega_delta,
            "tau": p.tau,
            "theta": d.theta,
            "d_gap": d.d_gap,
            "critical_omega_sigma": critical_omega_sigma(1.0, p.omega_delta),
            "regime": regime(p, degeneracy_tol),
        },
        "energies": energy_levels(p).as_array().tolist(),
        "log_z": None if math.isnan(st.log_z) else st.log_z,
        # Z itself is omitted once it overflows a double; log_z stays exact
        "z": math.exp(st.log_z) if st.log_z < 709 else None,
        "populations": st.populations.tolist(),
        "rho": {f"rho{i + 1}{j + 1}": _complex_entry(rho[i, j]) for i in range(4) for j in range(4) if rho[i, j] != 0},
        "state_eigenvalues": density_eigenvalues(rho).tolist(),
        "coherence_r": coherence_relative_entropy(rho),
        "entropy_s": von_neumann_entropy(density_eigenvalues(rho)),
        "diagonal_entropy_sd": diagonal_entropy(rho),
        "mixedness_m": mixedness(rho),
        "mixedness_closed_form": mixedness_closed_form(p) if p.tau > 0 else None,
        "purity": purity(rho),
        "concurrence": concurrence_check(rho),
        "witness": report.as_dict(),
    }


def _format_point(rep: dict) -> str:
    w = rep["witness"]
    prm = rep["params"]
    lines = [
        f"omega_sigma/J = {prm['omega_sigma']:.12g}  omega_delta/J = {prm['omega_delta']:.12g}  tau = {prm['tau']:.12g}",
        f"theta = {math.degrees(prm['theta']):.12g} deg  D/J = {prm['d_gap']:.12g}  regime = {prm['regime']}"
        f"  (crossing at omega_sigma/J = {prm['critical_omega_sigma']:.12g})",
        f"Z = {fmt(rep['z'])}  log Z = {fmt(rep['log_z'])}",
        "populations p1..p4 = " + ", ".join(fmt(x) for x in rep["populations"]),
        "rho (nonzero) = " + ", ".join(f"{k}={fmt(v['re'])}" + (f"{v['im']:+.12g}i" if v["im"] else "") for k, v in rep["rho"].items()),
        f"R = {fmt(rep['coherence_r'])}  S = {fmt(rep['entropy_s'])}  S_diag = {fmt(rep['diagonal_entropy_sd'])}",
        f"M = {fmt(rep['mixedness_m'])}  purity = {fmt(rep['purity'])}  concurrence = {fmt(rep['concurrence'])}",
        f"<W> pauli = {fmt(w['expectation'])}  fidelity form = {fmt(0.5 - w['fidelity'])}  energy form = {fmt(w['energy_form'])}",
        f"correlators (xx, yy, zz) = {fmt(w['cxx'])}, {fmt(w['cyy'])}, {fmt(w['czz'])}",
        f"verdict = {w['verdict']}  ppt = {w['ppt_verdict']}  x-state = {w['x_state_verdict']}",
    ]
    return "\n".join(lines)


def cmd_point(args) -> int:
    p = params_from_args(args)
    rep = point_report(p, args.degeneracy_tol)
    if args.json:
        write_json(args.json, rep)
    if args.json != "-":
        print(_format_point(rep))
    return 0


def grid(start: float, stop: float, num: int) -> np.ndarray:
    if num < 2:
        raise UsageError(f"a sweep needs at least 2 grid points, got {num}")
    return np.linspace(start, stop, num)


def sweep_row(p: SpinParams, quantity: str, degeneracy_tol: float) -> list:
    rho = density_matrix(p, degeneracy_tol)
    head = [p.tau, p.omega_sigma, p.omega_delta]
    if quantity == "coherence":
        return head + [coherence_relative_entropy(rho), von_neumann_entropy(density_eigenvalues(rho)), diagonal_entropy(rho)]
    if quantity == "mixedness":
        closed = mixedness_closed_form(p) if p.tau > 0 else None
        return head + [mixedness(rho), purity(rho), closed]
    rep = witness_report(rho, p)
    return head + [rep.expectation, rep.fidelity, *rep.correlators, str(rep.verdict), str(rep.ppt_verdict)]


def sweep_rows(args) -> list:
    points = grid(args.start, args.stop, args.num)
    if args.axis == "tau" and points.min() < 0:
        raise UsageError("tau grid must be >= 0")
    params = [params_from_args(args, **{args.axis: float(x)}) for x in points]
    workers = thread_count()
    tol = args.degeneracy_tol
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda q: sweep_row(q, args.quantity, tol), params))
    return [sweep_row(q, args.quantity, tol) for q in params]


def cmd_sweep(args) -> int:
    rows = sweep_rows(args)
    write_csv(args.output, ["tau", "omega_sigma", "omega_delta", *SWEEP_COLUMNS[args.quantity]], rows)
    return 0


def cmd_phase_diagram(args) -> int:
    if args.r == 1:
        raise UsageError(
            "field ratio r = 1 is singular: equal Larmor frequencies force omega_delta = 0 "
            "and leave omega_sigma undetermined; choose r != 1"
        )
    if args.tau_min <= 0:
        raise UsageError(f"tau-min must be > 0, got {args.tau_min}")
    taus = grid(args.tau_min, args.tau_max, args.tau_num)
    ods = grid(args.omega_delta_min / args.j, args.omega_delta_max / args.j, args.omega_delta_num)
    pd = phase_diagram(taus, ods, args.r, 1.0, workers=thread_count())
    write_csv(
        args.output,
        ["tau", "omega_delta", "witness_w", "verdict", "ppt_verdict"],
        ([t, od, w, str(v), "" if ppt is None else str(ppt)] for t, od, w, v, ppt in pd.rows()),
    )
    write_csv(args.boundary, ["tau", "omega_delta", "witness_w"], pd.boundary)
    print(f"r = {fmt(args.r)}: {pd.detected_count()} EntangledDetected cells, {len(pd.boundary)} boundary points", file=sys.stderr)
    return 0


def _spectrum_payload(params, theta, flip_deg, linewidth, lines, peaks, extra=None) -> dict:
    payload = {
        "params": {"omega_sigma": params.omega_sigma, "omega_delta": params.omega_delta, "tau": params.tau},
        "theta_deg": math.degrees(theta),
        "flip_angle_deg": flip_deg,
        "linewidth": linewidth,
        "lines": [ln.as_dict() for ln in lines],
        "peaks": peaks,
    }
    payload.update(extra or {})
    return payload


def cmd_spectra(args) -> int:
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    flip = math.radians(args.flip_deg)
    if not 0 <= flip <= math.pi / 2:
        raise UsageError(f"flip angle must lie in [0, 90] degrees, got {args.flip_deg}")
    if args.linewidth <= 0:
        raise UsageError(f"linewidth must be > 0, got {args.linewidth}")
    if args.points < 2:
        raise UsageError(f"points must be >= 2, got {args.points}")

    if args.omega_sigma is not None:
        # single state mode
        p = params_from_args(args, omega_sigma=args.omega_sigma)
        theta = derive_params(p).theta
        rho = density_matrix(p, args.degeneracy_tol)
        lines = line_amplitudes(rho, p, flip, theta)
        trace = synthesize_trace(lines, args.linewidth, default_axis(lines, args.linewidth, args.points))
        peaks = assign_peaks(trace_peaks(trace), lines, 3 * args.linewidth)
        write_csv(out / "spectrum.csv", ["frequency", "intensity"], zip(trace.frequency_axis, trace.intensity))
        write_json(out / "spectrum.json", _spectrum_payload(p, theta, args.flip_deg, args.linewidth, lines, peaks))
        print(out / "spectrum.csv")
        return 0

    for sc in scenario_spectra(args.theta_deg, flip, args.tau, args.linewidth, args.points):
        stem = f"spectrum_theta{sc.theta_deg:g}_{sc.regime}"
        tr = sc.trace
        write_csv(out / f"{stem}.csv", ["frequency", "intensity"], zip(tr.frequency_axis, tr.intensity))
        write_json(
            out / f"{stem}.json",
            _spectrum_payload(sc.params, math.radians(sc.theta_deg), args.flip_deg, args.linewidth, sc.lines, sc.peaks,
                              {"regime": sc.regime}),
        )
        print(out / f"{stem}.csv")
    return 0


RECON_HEADER = [
    "line", "status", "p1", "p2", "p3", "p4", "m_observables", "m_populations",
    "linear_entropy", "condition_number", "message",
]
RECON_INPUT = ("p1z", "p2z", "p1z2z", "theta_deg")


def reconstruct_rows(text: str, tol: float, epsilon_theta: float):
    """Rows for the reconstruct output plus the number of rejected lines."""
    reader = csv.DictReader(io.StringIO(text))
    missing = [c for c in RECON_INPUT if c not in (reader.fieldnames or [])]
    if missing:
        raise UsageError(f"input CSV header lacks column(s): {', '.join(missing)}")
    rows, errors = [], 0
    for rec in reader:
        line = reader.line_num
        try:
            values = [float(rec[c]) for c in RECON_INPUT]
        except (TypeError, ValueError):
            rows.append([line, "error", *[None] * 8, "malformed row: expected 4 numeric fields"])
            errors += 1
            continue
        obs_values, theta = values[:3], math.radians(values[3])
        try:
            res = reconstruct(NmrObservables(*obs_values), theta, epsilon_theta, tol)
        except DegenerateAngleError as exc:
            rows.append([line, "degenerate_theta", *[None] * 8, str(exc)])
            continue
        except ValueError as exc:
            rows.append([line, "error", *[None] * 8, str(exc)])
            errors += 1
            continue
        rows.append([line, "ok", *res.populations, res.m_observables, res.m_populations,
                     res.linear_entropy, res.condition_number, ""])
    return rows, errors


def cmd_reconstruct(args) -> int:
    try:
        text = Path(args.input).read_text() if args.input != "-" else sys.stdin.read()
    except OSError as exc:
        raise UsageError(f"cannot read {args.input}: {exc.strerror}") from None
    rows, errors = reconstruct_rows(text, args.tol, args.epsilon_theta)
    write_csv(args.output, RECON_HEADER, rows)
    for row in rows:
        if row[1] != "ok":
            print(f"{args.input}:{row[0]}: {row[1]}: {row[-1]}", file=sys.stderr)
    return 1 if errors else 0


def cmd_validate(args) -> int:
    results = run_validation()
    for res in results:
        print(res.line())
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return 1 if failed else 0


def _common(parser, tau_default=1.0, need_sigma=True):
    parser.add_argument("--j", type=float, default=1.0, help="scalar coupling J (frequency unit, default 1)")
    if need_sigma:
        parser.add_argument("--omega-sigma", type=float, default=1.0, help="Larmor sum omega1 + omega2 (default 1)")
    parser.add_argument("--omega-delta", type=float, default=0.0, help="Larmor difference omega1 - omega2 (default 0)")
    parser.add_argument("--tau", type=float, default=tau_default, help=f"k_B T / J (default {tau_default:g})")
    parser.add_argument("--degeneracy-tol", type=float, default=DEFAULT_DEGENERACY_TOL,
                        help="ground-manifold tolerance in units of J at tau = 0 (default 1e-9)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nmrqi",
        description="Thermal two-spin NMR system: coherence, mixedness, entanglement witness and spectra.",
        epilog=EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", help="YAML or JSON file with flag defaults; explicit flags win")
    sub = parser.add_subparsers(dest="command", required=True)
    parser.subcommands = sub.choices

    sp = sub.add_parser("point", help="full report at one parameter point")
    _common(sp)
    sp.add_argument("--json", help="also write the report as JSON to this path ('-' for stdout only)")
    sp.set_defaults(func=cmd_point)

    sp = sub.add_parser("sweep", help="quantity along a tau or omega_sigma grid", epilog=EPILOG,
                        formatter_class=argparse.RawDescriptionHelpFormatter)
    _common(sp)
    sp.add_argument("--quantity", choices=sorted(SWEEP_COLUMNS), required=True)
    sp.add_argument("--axis", choices=("tau", "omega_sigma"), required=True)
    sp.add_argument("--start", type=float, required=True)
    sp.add_argument("--stop", type=float, required=True)
    sp.add_argument("--num", type=int, default=101, help="grid points (>= 2)")
    sp.add_argument("--output", "-o", default="-", help="CSV path ('-' for stdout)")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("phase-diagram", help="witness sign over (tau, omega_delta) at field ratio r")
    sp.add_argument("--j", type=float, default=1.0)
    sp.add_argument("--r", type=float, required=True, help="signed Larmor ratio omega1/omega2 (r = 1 is singular)")
    sp.add_argument("--tau-min", type=float, default=0.02)
    sp.add_argument("--tau-max", type=float, default=2.0)
    sp.add_argument("--tau-num", type=int, default=50)
    sp.add_argument("--omega-delta-min", type=float, default=0.0)
    sp.add_argument("--omega-delta-max", type=float, default=5.0)
    sp.add_argument("--omega-delta-num", type=int, default=50)
    sp.add_argument("--output", "-o", default="phase_grid.csv")
    sp.add_argument("--boundary", default="phase_boundary.csv")
    sp.set_defaults(func=cmd_phase_diagram)

    sp = sub.add_parser("spectra", help="scenario spectra (default) or a single state with --omega-sigma")
    _common(sp, tau_default=SCENARIO_TAU, need_sigma=False)
    sp.add_argument("--omega-sigma", type=float, default=None, help="single-state mode at this Larmor sum")
    sp.add_argument("--theta-deg", type=float, nargs="+", default=list(SCENARIO_THETAS_DEG),
                    help="scenario mixing angles in degrees")
    sp.add_argument("--flip-deg", type=float, default=DEFAULT_FLIP_DEG)
    sp.add_argument("--linewidth", type=float, default=DEFAULT_LINEWIDTH, help="Lorentzian HWHM in units of J")
    sp.add_argument("--points", type=int, default=DEFAULT_POINTS)
    sp.add_argument("--outdir", default="spectra")
    sp.set_defaults(func=cmd_spectra)

    sp = sub.add_parser("reconstruct", help="populations and mixedness from observable CSV rows")
    sp.add_argument("input", help="CSV with columns p1z, p2z, p1z2z, theta_deg ('-' for stdin)")
    sp.add_argument("--output", "-o", default="-")
    sp.add_argument("--tol", type=float, default=POPULATION_TOL, help="allowed population excursion outside [0, 1]")
    sp.add_argument("--epsilon-theta", type=float, default=EPSILON_THETA)
    sp.set_defaults(func=cmd_reconstruct)

    sp = sub.add_parser("validate", help="compare closed forms with the numerical oracle")
    sp.set_defaults(func=cmd_validate)
    return parser


def load_config(path: str) -> dict:
    import yaml

    try:
        data = yaml.safe_load(Path(path).read_text())  # JSON is valid YAML
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc.strerror}") from None
    except yaml.YAMLError as exc:
        raise UsageError(f"config {path} is not valid YAML/JSON: {exc}") from None
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise UsageError(f"config {path} must be a mapping of flag names to values")
    return data


def _dest_names(parser) -> set:
    return {a.dest for a in parser._actions}


def _config_defaults(config: dict, command: str, subcommands: dict) -> dict:
    """Flat keys are shared by all subcommands; a section named after the command overrides them."""
    norm = lambda d: {k.replace("-", "_"): v for k, v in d.items()}  # noqa: E731
    flat = norm({k: v for k, v in config.items() if not isinstance(v, dict)})
    sections = {k: v for k, v in config.items() if isinstance(v, dict)}
    everywhere = set().union(*(_dest_names(p) for p in subcommands.values()))
    bad = sorted(set(flat) - everywhere) + sorted(k for k in sections if k not in subcommands)
    section = norm(sections.get(command, {}))
    bad += sorted(set(section) - _dest_names(subcommands[command]))
    if bad:
        raise UsageError(f"unrecognized config key(s): {', '.join(bad)}")
    mine = _dest_names(subcommands[command])
    return {**{k: v for k, v in flat.items() if k in mine}, **section}


def _apply_config(parser, argv) -> str | None:
    """Install config values as subcommand defaults before the real parse."""
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, rest = pre.parse_known_args(argv)
    command = next((tok for tok in rest if tok in parser.subcommands), None)
    if not known.config or command is None:
        return command
    defaults = _config_defaults(load_config(known.config), command, parser.subcommands)
    subparser = parser.subcommands[command]
    subparser.set_defaults(**defaults)
    for action in subparser._actions:
        if action.dest in defaults:
            action.required = False
    return command


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        command = _apply_config(parser, argv)
    except UsageError as exc:
        print(f"nmrqi: error: {exc}", file=sys.stderr)
        return 2
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ParameterError, FieldRatioError) as exc:
        print(f"nmrqi {command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
