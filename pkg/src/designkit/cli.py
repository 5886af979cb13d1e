"""Command-line front end.

Each subcommand wires JSON configs into one module and emits CSV/JSON
artifacts, either to stdout or into ``--out``.  Failures serialize as a
machine-readable error JSON on stderr with exit status 1; usage errors
exit 2.  ``--set key=value`` applies dotted-path overrides to the
loaded spec before anything runs.
"""

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import bemt, explorer, powertrain, presets, wing
from .airfoil import AirfoilPolar
from .errors import ConfigError, DesignError

ROTOR_PRESETS = {
    "final": presets.final_rotor,
    "baseline": presets.baseline_rotor,
    "rpm-study": presets.rpm_study_rotor,
}


def _load_polar(name_or_path):
    if name_or_path is None:
        return AirfoilPolar.bundled("sc1095")
    path = Path(name_or_path)
    if path.suffix.lower() == ".csv" or path.exists():
        return AirfoilPolar.from_csv(path)
    return AirfoilPolar.bundled(str(name_or_path))


def _load_rotor(spec):
    if spec is None:
        return presets.final_rotor()
    if spec in ROTOR_PRESETS:
        return ROTOR_PRESETS[spec]()
    if not Path(spec).exists():
        raise ConfigError(
            f"rotor {spec!r} is neither a preset "
            f"({', '.join(sorted(ROTOR_PRESETS))}) nor a file")
    return bemt.BladeGeometry.from_file(spec)


def _parse_override(raw):
    if "=" not in raw:
        raise ConfigError(f"--set expects key=value, got {raw!r}")
    key, value = raw.split("=", 1)
    try:
        parsed = json.loads(value)
    except json.JSONDecodeError:
        parsed = value
    return key, parsed


def _apply_overrides(data, overrides):
    for raw in overrides or ():
        key, value = _parse_override(raw)
        node = data
        parts = key.split(".")
        for part in parts[:-1]:
            if isinstance(node, list):
                node = node[int(part)]
            else:
                node = node.setdefault(part, {})
        last = parts[-1]
        if isinstance(node, list):
            node[int(last)] = value
        else:
            node[last] = value
    return data


def _load_json(path, overrides):
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    # top-level keys starting with "_" are documentation, not spec fields
    data = {k: v for k, v in data.items() if not k.startswith("_")}
    return _apply_overrides(data, overrides)


def _emit(args, filename, text):
    """Write one artifact; stdout when no --out directory was given."""
    if args.out:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        target = out_dir / filename
        target.write_text(text, encoding="utf-8")
        print(target)
    else:
        sys.stdout.write(text)


def _emit_json(args, filename, payload):
    _emit(args, filename, json.dumps(payload, indent=2, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# subcommands

def cmd_analyze(args):
    geometry = _load_rotor(args.rotor)
    polar = _load_polar(args.polar)
    op = bemt.OperatingPoint.from_rpm(
        args.rpm, v_inf=args.v_inf, rho=args.rho,
        collective=math.radians(args.collective))
    perf = bemt.evaluate_rotor(geometry, op, polar, n_stations=args.n_stations)
    text = perf.CSV_HEADER + "\n" + perf.csv_row() + "\n"
    _emit(args, "performance.csv", text)
    return 0


def _sweep_spec_from_json(data):
    if "rotor" in data:
        geometry = bemt.BladeGeometry.from_dict(data["rotor"])
    else:
        preset = data.get("rotor_preset", "final")
        if preset not in ROTOR_PRESETS:
            raise ConfigError(
                f"unknown rotor_preset {preset!r}; "
                f"expected one of {', '.join(sorted(ROTOR_PRESETS))}")
        geometry = ROTOR_PRESETS[preset]()
    op_data = data.get("op", {})
    op = bemt.OperatingPoint.from_rpm(
        op_data.get("rpm", presets.HOVER_RPM),
        v_inf=op_data.get("v_inf", 0.0),
        rho=op_data.get("rho", 1.225),
        collective=math.radians(op_data.get("collective_deg", 0.0)))
    values = data["values"]
    parameter = data["parameter"]
    if parameter in ("twist", "collective"):
        values = [math.radians(v) for v in values]
    kwargs = {}
    if "collectives_deg" in data:
        kwargs["collectives"] = tuple(
            math.radians(v) for v in data["collectives_deg"])
    if "speeds" in data:
        kwargs["speeds"] = tuple(float(v) for v in data["speeds"])
    if "couple_preset" in data:
        kwargs["couple_preset"] = bool(data["couple_preset"])
    return explorer.SweepSpec(
        base_geometry=geometry, base_op=op, parameter=parameter,
        values=tuple(values), response=data.get("response", "PL_vs_T"),
        polar_name=data.get("polar", "sc1095"), **kwargs)


def cmd_sweep(args):
    data = _load_json(args.spec, args.set)
    spec = _sweep_spec_from_json(data)
    table = explorer.run_sweep(spec)
    _emit(args, "sweep.csv", "\n".join(table.csv_lines()) + "\n")
    return 0


def _optimization_spec_from_json(data):
    kwargs = {}
    if "radius_grid_m" in data:
        kwargs["radius_grid"] = tuple(data["radius_grid_m"])
    if "twist_grid_deg" in data:
        kwargs["twist_grid"] = tuple(
            math.radians(v) for v in data["twist_grid_deg"])
    for key in ("weights", "hover_rpm", "hover_rho", "cruise_rpm",
                "cruise_speed", "cruise_rho", "aspect_ratio", "taper_ratio",
                "n_stations"):
        if key in data:
            kwargs[key] = (tuple(data[key]) if key == "weights"
                           else data[key])
    if "thrust_n" in data:
        kwargs["thrust_constraint"] = data["thrust_n"]
    if "polar" in data:
        kwargs["polar_name"] = data["polar"]
    return explorer.OptimizationSpec(**kwargs)


def cmd_optimize(args):
    data = _load_json(args.spec, args.set) if args.spec else \
        _apply_overrides({}, args.set)
    spec = _optimization_spec_from_json(data)
    result = explorer.optimize(spec, workers=args.workers)
    _emit_json(args, "optimization.json", result.summary_dict())
    if args.out:
        for name in ("cost", "fm", "eta"):
            _emit(args, f"surface_{name}.csv",
                  "\n".join(result.surface_csv_lines(name)) + "\n")
    return 0


def cmd_wing(args):
    data = _load_json(args.spec, args.set) if args.spec else \
        _apply_overrides({}, args.set)
    loading = data.pop("wing_loading_n_m2", 130.0)
    gap = data.pop("gap_m", wing.DEFAULT_GAP)
    inputs = wing.WingDesignInputs.from_dict(data) if data else \
        wing.WingDesignInputs()
    sizing = wing.size_biplane(inputs, loading, gap=gap)
    study = wing.power_vs_wing_loading(
        inputs, np.arange(60.0, 150.01, 2.0))
    payload = {
        "inputs": inputs.to_dict(),
        "sizing": sizing.to_dict(),
        "stall_wing_loading_n_m2": wing.stall_wing_loading(inputs),
        "optimum_wing_loading_n_m2": study.optimum_wing_loading,
    }
    _emit_json(args, "wing.json", payload)
    if args.out:
        lines = ["wing_loading_n_m2,power_w,parasite_w,induced_w"]
        for i in range(study.wing_loading.size):
            lines.append(f"{study.wing_loading[i]:.6g},{study.power[i]:.6g},"
                         f"{study.parasite[i]:.6g},{study.induced[i]:.6g}")
        _emit(args, "wing_loading.csv", "\n".join(lines) + "\n")
    return 0


def cmd_gears(args):
    train = powertrain.build_gear_train()
    budget, _, details = powertrain.design_budget()
    pinion = next(g for g in train if g.role == "E")
    engine_power = budget.required_installed_power
    f_t = powertrain.tangential_force(
        engine_power, budget.engine_rpm, pinion.pitch_diameter)
    width = powertrain.agma_face_width(f_t, pinion.module, 0.303)
    payload = {
        "gears": [g.to_dict() for g in train],
        "overall_reduction": powertrain.train_reduction(train),
        "min_pinion_teeth_ratio_2": powertrain.min_pinion_teeth(2.0),
        "pinion_tangential_force_n": f_t,
        "pinion_required_face_width_mm": width,
        "design_torque_source_hp": engine_power / 745.7,
    }
    _emit_json(args, "gears.json", payload)
    return 0


def cmd_budget(args):
    budget, ledger, details = powertrain.design_budget(margin=args.margin)
    payload = {"budget": budget.to_dict(), "details": details}
    _emit_json(args, "budget.json", payload)
    return 0


def cmd_weights(args):
    ledger = powertrain.iterate_gross_weight(
        fixed=powertrain.default_fixed_masses(payload=args.payload),
        tolerance=args.tolerance, start=args.start)
    _emit(args, "weights.csv", "\n".join(ledger.csv_lines()) + "\n")
    if args.out:
        _emit_json(args, "weights.json", {
            "gross_mass_kg": ledger.gross_mass,
            "iterations": len(ledger.history) - 1,
            "history_kg": list(ledger.history),
        })
    return 0


def cmd_simulate(args):
    from . import flightsim
    if args.mission:
        data = _load_json(args.mission, args.set)
    else:
        data = _apply_overrides({}, args.set)
    waypoints = [
        (w[0], w[1], w[2], math.radians(w[3]))
        for w in data.get("waypoints",
                          [[w[0], w[1], w[2], math.degrees(w[3])]
                           for w in presets.MISSION_WAYPOINTS])]
    params = flightsim.default_params()
    pitch_map = flightsim.PitchMap.from_rotor(
        _load_rotor(args.rotor), _load_polar(args.polar))
    log = flightsim.run_mission(
        waypoints, params=params,
        dt=data.get("dt_s", presets.MISSION_DT),
        capture_radius=data.get("capture_radius_m", presets.MISSION_CAPTURE_RADIUS),
        timeout=data.get("timeout_s", presets.MISSION_TIMEOUT),
        pitch_map=pitch_map)
    _emit(args, "trajectory.csv", "\n".join(log.csv_lines()) + "\n")
    return 0


def cmd_validate(args):
    from . import acceptance
    results = acceptance.run_all(fast=args.fast)
    width = max(len(r.name) for r in results)
    failures = 0
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        failures += 0 if r.passed else 1
        print(f"{r.name:<{width}}  {status}  {r.detail}")
    print(f"{failures} failing / {len(results)} checks")
    return 1 if failures else 0


# ---------------------------------------------------------------------------
# argument wiring

def build_parser():
    parser = argparse.ArgumentParser(
        prog="designkit",
        description="Conceptual design toolkit for a quad-rotor biplane "
                    "tail-sitter: rotor analysis, design-space studies, "
                    "wing and powertrain sizing, hover simulation.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", help="artifact directory (default: stdout)")
        p.add_argument("--set", action="append", metavar="KEY=VALUE",
                       help="dotted-path spec override, repeatable")

    p = sub.add_parser("analyze", help="single-point rotor performance")
    p.add_argument("--rotor", help="rotor JSON or preset "
                   f"({', '.join(ROTOR_PRESETS)})")
    p.add_argument("--polar", help="bundled polar name or CSV path")
    p.add_argument("--rpm", type=float, default=presets.HOVER_RPM)
    p.add_argument("--collective", type=float, default=0.0, help="deg")
    p.add_argument("--v-inf", type=float, default=0.0, help="m/s")
    p.add_argument("--rho", type=float, default=1.225, help="kg/m^3")
    p.add_argument("--n-stations", type=int, default=100)
    common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("sweep", help="parameter sweep from a spec file")
    p.add_argument("--spec", required=True, help="sweep JSON")
    common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("optimize", help="radius x twist grid search")
    p.add_argument("--spec", help="grid JSON (defaults to the design grid)")
    p.add_argument("--workers", type=int, default=None,
                   help="parallel workers (default DESIGNKIT_THREADS or 1)")
    common(p)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("wing", help="biplane wing sizing")
    p.add_argument("--spec", help="wing inputs JSON")
    common(p)
    p.set_defaults(func=cmd_wing)

    p = sub.add_parser("gears", help="transmission table and checks")
    common(p)
    p.set_defaults(func=cmd_gears)

    p = sub.add_parser("budget", help="sized-vehicle power budget")
    p.add_argument("--margin", type=float, default=0.10)
    common(p)
    p.set_defaults(func=cmd_budget)

    p = sub.add_parser("weights", help="gross-weight convergence")
    p.add_argument("--start", type=float, default=16.0, help="kg")
    p.add_argument("--tolerance", type=float, default=0.01, help="kg")
    p.add_argument("--payload", type=float, default=4.257, help="kg")
    common(p)
    p.set_defaults(func=cmd_weights)

    p = sub.add_parser("simulate", help="waypoint mission")
    p.add_argument("--mission", help="mission JSON (defaults to the "
                   "reference square)")
    p.add_argument("--rotor", help="rotor JSON or preset")
    p.add_argument("--polar", help="bundled polar name or CSV path")
    common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("validate", help="run the acceptance checks")
    p.add_argument("--fast", action="store_true",
                   help="skip the long grid-search check")
    common(p)
    p.set_defaults(func=cmd_validate)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DesignError as exc:
        payload = {"error": type(exc).__name__, "message": str(exc)}
        for attr in ("t_max", "required_w", "available_w", "remaining_m",
                     "waypoint_index", "line", "stations", "history"):
            if hasattr(exc, attr):
                value = getattr(exc, attr)
                if isinstance(value, tuple):
                    value = list(value)
                payload[attr] = value
        json.dump(payload, sys.stderr, indent=2, default=str)
        sys.stderr.write("\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
