"""Design-space studies built on the rotor solver.

One-dimensional parameter sweeps (power loading versus thrust,
propulsive efficiency versus speed), collective trimming to a thrust
target, and the weighted radius x twist grid search that selects the
proprotor.  Sweep output is a long-format table
(``param_name,param_value,x,y``) so every curve family serializes the
same way.
"""

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import bemt
from .constants import RHO_CRUISE, RHO_SL
from .errors import ConfigError, NoRootError, TrimError

SWEEP_PARAMETERS = ("aspect_ratio", "taper_ratio", "twist", "rpm",
                    "radius", "collective")
SWEEP_RESPONSES = ("PL_vs_T", "eta_vs_V", "thrust", "power")

#: default collective grid for thrust-type responses [rad]
DEFAULT_COLLECTIVES = tuple(np.radians(np.arange(0.0, 20.01, 0.5)))
#: default airspeed grid for efficiency curves [m/s]
DEFAULT_SPEEDS = tuple(np.arange(2.0, 30.01, 1.0))


def worker_count(default=1):
    """Worker cap from the environment, if set."""
    raw = os.environ.get("DESIGNKIT_THREADS")
    if not raw:
        return default
    try:
        n = int(raw)
    except ValueError as exc:
        raise ConfigError(f"DESIGNKIT_THREADS must be an integer, got {raw!r}") from exc
    return max(1, n)


# ---------------------------------------------------------------------------
# sweeps

@dataclass(frozen=True)
class SweepSpec:
    """One swept parameter, evaluated into response curves.

    For ``twist`` sweeps the preset angle follows the coupling rule
    theta_pre = -theta_tw (tip pitch held while twist changes) unless
    ``couple_preset`` is disabled.
    """

    base_geometry: bemt.BladeGeometry
    base_op: bemt.OperatingPoint
    parameter: str
    values: tuple
    response: str = "PL_vs_T"
    polar_name: str = "sc1095"
    collectives: tuple = DEFAULT_COLLECTIVES
    speeds: tuple = DEFAULT_SPEEDS
    couple_preset: bool = True
    n_stations: int = 100

    def __post_init__(self):
        if self.parameter not in SWEEP_PARAMETERS:
            raise ConfigError(f"unknown sweep parameter {self.parameter!r}")
        if self.response not in SWEEP_RESPONSES:
            raise ConfigError(f"unknown sweep response {self.response!r}")
        if len(self.values) == 0:
            raise ConfigError("sweep needs at least one value")
        if len(self.collectives) == 0 or len(self.speeds) == 0:
            raise ConfigError("collective and speed grids must be non-empty")


def apply_parameter(geometry, op, parameter, value, couple_preset=True):
    """Return (geometry, op) with one parameter replaced.

    Geometry parameters rebuild the blade from its aspect/taper
    description so chord distributions stay consistent.
    """
    if parameter in ("aspect_ratio", "taper_ratio", "twist", "radius"):
        kwargs = dict(
            radius=geometry.radius,
            aspect_ratio=geometry.aspect_ratio,
            taper_ratio=geometry.taper_ratio,
            twist=geometry.twist,
            preset=geometry.preset,
            n_blades=geometry.n_blades,
            root_cutout=geometry.root_cutout,
            name=geometry.name,
        )
        if parameter == "twist":
            kwargs["twist"] = value
            if couple_preset:
                kwargs["preset"] = -value
        else:
            kwargs[parameter] = value
        new_geom = bemt.BladeGeometry.from_aspect_ratio(
            kwargs.pop("radius"), kwargs.pop("aspect_ratio"),
            taper_ratio=kwargs.pop("taper_ratio"), **kwargs)
        return new_geom, op
    if parameter == "rpm":
        return geometry, replace(op, omega=value * math.pi / 30.0)
    if parameter == "collective":
        return geometry, replace(op, collective=value)
    raise ConfigError(f"unknown sweep parameter {parameter!r}")


@dataclass(frozen=True)
class SweepTable:
    parameter: str
    response: str
    rows: tuple          # (param_value, x, y)
    gaps: tuple          # (param_value, x, reason)
    CSV_HEADER = "param_name,param_value,x,y"

    def csv_lines(self):
        lines = [self.CSV_HEADER]
        for value, x, y in self.rows:
            lines.append(f"{self.parameter},{value:.9g},{x:.9g},{y:.9g}")
        return lines

    def curve(self, value, rtol=1e-9):
        """(x, y) arrays for one swept value."""
        xs = [r[1] for r in self.rows if math.isclose(r[0], value, rel_tol=rtol)]
        ys = [r[2] for r in self.rows if math.isclose(r[0], value, rel_tol=rtol)]
        return np.array(xs), np.array(ys)


def _curve_rows(spec, value, geometry, op, polar):
    """Rows and gaps for a single swept value."""
    rows, gaps = [], []
    if spec.response in ("PL_vs_T", "thrust", "power"):
        curve = bemt.thrust_curve(
            geometry, polar, op.rpm, spec.collectives,
            v_inf=op.v_inf, rho=op.rho, n_stations=spec.n_stations)
        for theta, perf, err in zip(curve.collectives, curve.rows, curve.errors):
            x_deg = math.degrees(theta)
            if perf is None:
                gaps.append((value, x_deg, err))
                continue
            if spec.response == "thrust":
                rows.append((value, x_deg, perf.thrust))
            elif spec.response == "power":
                rows.append((value, x_deg, perf.power))
            else:
                if perf.power > 0.0:
                    rows.append((value, perf.thrust, perf.power_loading))
                else:
                    gaps.append((value, x_deg, "non-positive power"))
    elif spec.response == "eta_vs_V":
        for v in spec.speeds:
            try:
                perf = bemt.evaluate_rotor(
                    geometry, replace(op, v_inf=v), polar,
                    n_stations=spec.n_stations)
            except NoRootError as exc:
                gaps.append((value, v, str(exc)))
                continue
            if perf.thrust <= 0.0 or perf.power <= 0.0:
                gaps.append((value, v, "non-propulsive"))
                continue
            rows.append((value, v, perf.eta_p))
    return rows, gaps


def run_sweep(spec, polar=None):
    """Evaluate the sweep into a long-format table.

    Solver failures become gaps rather than aborting the sweep, so a
    partially stalled configuration still reports its feasible branch.
    """
    from .airfoil import AirfoilPolar
    polar = AirfoilPolar.bundled(spec.polar_name) if polar is None else polar
    rows, gaps = [], []
    for value in spec.values:
        geometry, op = apply_parameter(
            spec.base_geometry, spec.base_op, spec.parameter, value,
            couple_preset=spec.couple_preset)
        r, g = _curve_rows(spec, value, geometry, op, polar)
        rows.extend(r)
        gaps.extend(g)
    return SweepTable(parameter=spec.parameter, response=spec.response,
                      rows=tuple(rows), gaps=tuple(gaps))


# ---------------------------------------------------------------------------
# trim

def trim_collective(geometry, op, polar, target_thrust, tolerance=0.1,
                    n_stations=100, collective_limits=(math.radians(-4.0),
                                                       math.radians(24.0))):
    """Collective [rad] that meets ``target_thrust`` [N] at this condition.

    Brackets the target on the rising pre-stall branch of a coarse
    thrust curve, then bisects.  Raises a trim error carrying the
    achievable maximum when the target is beyond it.
    """
    lo, hi = collective_limits
    coarse = np.linspace(lo, hi, 29)
    curve = bemt.thrust_curve(geometry, polar, op.rpm, coarse,
                              v_inf=op.v_inf, rho=op.rho,
                              n_stations=n_stations)
    thrusts = curve.thrust   # NaN where the solver failed
    if np.all(np.isnan(thrusts)):
        raise TrimError("rotor solution failed across the collective range",
                        t_max=float("nan"))
    i_peak = int(np.nanargmax(thrusts))
    t_max = float(thrusts[i_peak])
    if target_thrust > t_max:
        raise TrimError(
            f"target {target_thrust:.1f} N exceeds the achievable "
            f"{t_max:.1f} N at this condition", t_max=t_max)

    # first grid point at or above the target on the rising branch;
    # an exact hit (e.g. zero thrust at zero pitch on a symmetric
    # untwisted blade) returns that collective directly
    idx = None
    for i in range(i_peak + 1):
        if np.isnan(thrusts[i]):
            continue
        if abs(thrusts[i] - target_thrust) < 1e-9:
            return float(coarse[i])
        if thrusts[i] >= target_thrust:
            idx = i
            break
    if idx is None:
        raise TrimError("no rising-branch bracket for the thrust target",
                        t_max=t_max)
    if idx == 0:
        return float(coarse[0])

    a, b = float(coarse[idx - 1]), float(coarse[idx])
    for _ in range(48):
        mid = 0.5 * (a + b)
        perf = bemt.evaluate_rotor(geometry, replace(op, collective=mid),
                                   polar, n_stations=n_stations)
        if perf.thrust < target_thrust:
            a = mid
        else:
            b = mid
        if abs(perf.thrust - target_thrust) < 0.5 * tolerance:
            return mid
    return 0.5 * (a + b)


# ---------------------------------------------------------------------------
# radius x twist optimization

@dataclass(frozen=True)
class OptimizationSpec:
    """Grid search over radius and twist with a weighted two-point cost.

    Each cell is trimmed to the hover thrust target for its figure of
    merit and scanned over collective for its best cruise efficiency:
    cost = w_fm * FM + w_eta * eta_p.
    """

    radius_grid: tuple = (0.26, 0.53, 0.01)       # min, max, step [m]
    twist_grid: tuple = (math.radians(-45.0), math.radians(-8.0),
                         math.radians(1.0))       # min, max, step [rad]
    weights: tuple = (0.3, 0.7)                    # (w_fm, w_eta)
    hover_rpm: float = 3200.0
    hover_rho: float = RHO_SL
    cruise_rpm: float = 2000.0
    cruise_speed: float = 20.0
    cruise_rho: float = RHO_CRUISE
    thrust_constraint: float = 50.0                # [N] per rotor in hover
    aspect_ratio: float = 12.0
    taper_ratio: float = 5.0 / 3.0
    polar_name: str = "sc1095"
    cruise_scan: tuple = (math.radians(2.0), math.radians(24.0),
                          math.radians(1.0))       # collective scan [rad]
    n_stations: int = 100

    def __post_init__(self):
        w_fm, w_eta = self.weights
        if w_fm < 0.0 or w_eta < 0.0 or abs(w_fm + w_eta - 1.0) > 1e-9:
            raise ConfigError("weights must be non-negative and sum to 1")
        for name in ("radius_grid", "twist_grid", "cruise_scan"):
            lo, hi, step = getattr(self, name)
            if step <= 0.0 or hi < lo:
                raise ConfigError(f"{name} must have min <= max and step > 0")

    def radii(self):
        return _grid(*self.radius_grid)

    def twists(self):
        return _grid(*self.twist_grid)


def _grid(lo, hi, step):
    n = int(round((hi - lo) / step)) + 1
    values = lo + step * np.arange(n)
    return values[values <= hi + 1e-9 * max(1.0, abs(hi))]


@dataclass(frozen=True)
class OptimizationResult:
    radii: np.ndarray = field(repr=False)
    twists: np.ndarray = field(repr=False)
    fm: np.ndarray = field(repr=False)             # [n_r, n_tw]
    eta: np.ndarray = field(repr=False)
    cost: np.ndarray = field(repr=False)
    feasible: np.ndarray = field(repr=False)
    hover_collective: np.ndarray = field(repr=False)
    cruise_collective: np.ndarray = field(repr=False)
    r_star: float = 0.0
    twist_star: float = 0.0
    cost_star: float = 0.0
    index: tuple = (0, 0)

    def summary_dict(self):
        return {
            "R_star_m": self.r_star,
            "twist_star_deg": math.degrees(self.twist_star),
            "cost_star": self.cost_star,
        }

    def surface_csv_lines(self, which="cost"):
        """Matrix CSV: rows = radius, columns = twist [deg]."""
        surface = getattr(self, which)
        header = "radius_m\\twist_deg," + ",".join(
            f"{math.degrees(t):.6g}" for t in self.twists)
        lines = [header]
        for i, r in enumerate(self.radii):
            cells = ",".join(f"{surface[i, j]:.9g}" for j in range(len(self.twists)))
            lines.append(f"{r:.6g},{cells}")
        return lines


def _hover_reference_curve(spec, twist, polar):
    """Dense nondimensional hover curve CT(theta0), CP(theta0).

    At fixed aspect ratio, taper, and twist the thrust and power
    coefficients do not depend on the radius, so one dense curve per
    twist serves every radius in the grid.
    """
    geom = bemt.BladeGeometry.from_aspect_ratio(
        0.38, spec.aspect_ratio, taper_ratio=spec.taper_ratio,
        twist=twist, preset=-twist)
    # negative collectives included: with a high preset the thrust
    # target can sit below zero collective on large radii
    thetas = np.radians(np.arange(-12.0, 24.01, 0.25))
    curve = bemt.thrust_curve(geom, polar, spec.hover_rpm, thetas,
                              v_inf=0.0, rho=spec.hover_rho,
                              n_stations=spec.n_stations)
    return thetas, curve.ct, curve.cp


def _evaluate_column(args):
    """All twist cells at one radius; returns per-cell tuples."""
    spec, i_radius, polar, hover_curves = args
    radius = float(spec.radii()[i_radius])
    twists = spec.twists()
    scan_lo, scan_hi, scan_step = spec.cruise_scan
    scan = np.arange(scan_lo, scan_hi + 0.5 * scan_step, scan_step)
    out = []
    for j, twist in enumerate(twists):
        geom = bemt.BladeGeometry.from_aspect_ratio(
            radius, spec.aspect_ratio, taper_ratio=spec.taper_ratio,
            twist=float(twist), preset=float(-twist))

        # hover: trim the nondimensional curve to the thrust target
        thetas, ct_ref, cp_ref = hover_curves[j]
        scale = spec.hover_rho * geom.disc_area \
            * (spec.hover_rpm * math.pi / 30.0 * radius) ** 2
        thrust_ref = ct_ref * scale
        valid = ~np.isnan(thrust_ref)
        fm = eta = math.nan
        theta_h = theta_c = math.nan
        feasible = False
        if np.any(valid):
            t_v = thrust_ref[valid]
            th_v = thetas[valid]
            i_peak = int(np.argmax(t_v))
            rising_t = t_v[:i_peak + 1]
            rising_th = th_v[:i_peak + 1]
            if rising_t.size >= 2 and rising_t[-1] >= spec.thrust_constraint \
                    and rising_t[0] <= spec.thrust_constraint:
                theta_h = float(np.interp(spec.thrust_constraint,
                                          rising_t, rising_th))
                hover_op = bemt.OperatingPoint.from_rpm(
                    spec.hover_rpm, rho=spec.hover_rho, collective=theta_h)
                try:
                    perf_h = bemt.evaluate_rotor(geom, hover_op, polar,
                                                 n_stations=spec.n_stations)
                    fm = perf_h.figure_of_merit
                    feasible = math.isfinite(fm)
                except NoRootError:
                    feasible = False

        if feasible:
            cruise = bemt.thrust_curve(
                geom, polar, spec.cruise_rpm, scan,
                v_inf=spec.cruise_speed, rho=spec.cruise_rho,
                n_stations=spec.n_stations)
            etas = np.array([
                (p.eta_p if (p is not None and p.power > 0.0 and p.thrust > 0.0)
                 else math.nan)
                for p in cruise.rows])
            if np.any(np.isfinite(etas)):
                k = int(np.nanargmax(etas))
                eta = float(etas[k])
                theta_c = float(scan[k])
            else:
                feasible = False

        out.append((j, feasible, fm, eta, theta_h, theta_c))
    return i_radius, out


def optimize(spec=None, polar=None, workers=None):
    """Fill the radius x twist surfaces and locate the best cell.

    Infeasible cells (hover target unreachable or no cruise solution)
    carry cost -inf.  Ties resolve toward the smaller radius, then the
    smaller twist magnitude.
    """
    from .airfoil import AirfoilPolar
    spec = OptimizationSpec() if spec is None else spec
    polar = AirfoilPolar.bundled(spec.polar_name) if polar is None else polar
    workers = worker_count() if workers is None else max(1, workers)

    radii = spec.radii()
    twists = spec.twists()
    n_r, n_t = len(radii), len(twists)
    if n_r == 0 or n_t == 0:
        raise ConfigError("optimization grids are empty")

    hover_curves = [_hover_reference_curve(spec, float(tw), polar)
                    for tw in twists]

    shape = (n_r, n_t)
    fm = np.full(shape, math.nan)
    eta = np.full(shape, math.nan)
    theta_h = np.full(shape, math.nan)
    theta_c = np.full(shape, math.nan)
    feasible = np.zeros(shape, dtype=bool)

    jobs = [(spec, i, polar, hover_curves) for i in range(n_r)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            columns = list(pool.map(_evaluate_column, jobs))
    else:
        columns = [_evaluate_column(job) for job in jobs]
    for i_radius, cells in columns:
        for j, ok, fm_ij, eta_ij, th_h, th_c in cells:
            feasible[i_radius, j] = ok
            fm[i_radius, j] = fm_ij
            eta[i_radius, j] = eta_ij
            theta_h[i_radius, j] = th_h
            theta_c[i_radius, j] = th_c

    w_fm, w_eta = spec.weights
    cost = np.where(feasible, w_fm * fm + w_eta * eta, -math.inf)
    if not feasible.any():
        raise TrimError("every cell of the optimization grid is infeasible",
                        t_max=float("nan"))

    # argmax with ties toward smaller radius, then smaller |twist|
    best = (0, 0)
    best_cost = -math.inf
    order = sorted(
        ((i, j) for i in range(n_r) for j in range(n_t)),
        key=lambda ij: (radii[ij[0]], abs(twists[ij[1]])))
    for i, j in order:
        if cost[i, j] > best_cost:
            best_cost = float(cost[i, j])
            best = (i, j)

    return OptimizationResult(
        radii=radii, twists=twists, fm=fm, eta=eta, cost=cost,
        feasible=feasible, hover_collective=theta_h, cruise_collective=theta_c,
        r_star=float(radii[best[0]]), twist_star=float(twists[best[1]]),
        cost_star=best_cost, index=best)
