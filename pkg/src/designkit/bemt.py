"""Blade element momentum theory for proprotors in hover and axial flight.

The classical small-angle BEMT breaks down on proprotors that see large
inflow angles (slow tip speed, high axial speed, big collective).  This
module keeps the full trigonometry: at each radial station the sectional
thrust/torque from blade element theory is balanced against momentum
theory with swirl and a Prandtl-style tip loss evaluated at the actual
inflow angle.  Everything reduces to one transcendental equation per
station in the inflow angle phi,

    g(phi) = (r sin(phi) - mu cos(phi)) sin(phi)
             - sign(phi) * sigma/(8 r) * [ mu (cl sin(phi) + cd cos(phi)) / K_P
                                         + r  (cl cos(phi) - cd sin(phi)) / K_T ]

written here nondimensionally (speeds divided by tip speed, so mu is the
axial advance ratio and r the station position).  K_T and K_P are the
momentum deficit factors built from the tip-loss function

    F = (2/pi) arccos(exp(-f)),   f = (Nb/2) (1 - r) / (r |sin(phi)|)
    K_T = 1 - (1 - F) cos(phi),   K_P = 1 - (1 - F) sin(phi)

g has at least one sign change on (0, pi/2) for any lifting condition
(and on (-pi/2, 0) for descending/negative-lift states); the solver
brackets the first crossing on a 200-slice scan and polishes it by
bisection, vectorised over stations and collectives at once.

Once phi is known the resultant section speed follows from the torque
balance, U/(Omega R) = r / B2(phi), and all loads are recovered in closed
form.  Integrating the per-station loads over the span (midpoint rule)
gives CT, CP and the dimensional performance numbers.

Conventions: radial positions are nondimensional (r = y/R in [0, 1)),
angles in radians, SI units throughout.  CT = T / (rho A (Omega R)^2),
CP = P / (rho A (Omega R)^3) with A = pi R^2.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .constants import RHO_SL, RPM_TO_RAD_S
from .errors import GeometryError, NoRootError

# scan/bisect settings for the per-station root find
SCAN_SLICES = 200         # slices over (0, pi/2) for the first sign change
SCAN_EPS = 1.0e-6         # keep phi = 0 (a spurious fixed point) out of the scan
BISECT_ITERS = 60         # enough to hit float resolution of the bracket
ZERO_LIFT_CL = 1.0e-12    # |cl| below this in hover pins phi = 0 exactly
_TINY = 1.0e-15


# ---------------------------------------------------------------------------
# geometry and operating point
# ---------------------------------------------------------------------------

@dataclass
class BladeGeometry:
    """Proprotor blade description.

    Chord and built-in pitch can be linear laws (root/tip chord, linear
    twist plus preset) or explicit tables over nondimensional radius.
    The collective pitch law is

        theta(r) = collective + preset + twist * r

    so with the usual preset = -twist coupling the tip section sits at
    the commanded collective.  Tables give the built-in distribution at
    zero collective and override the linear law.

    Parameters
    ----------
    radius : float
        Rotor radius R [m].
    n_blades : int
        Blade count Nb.
    root_cutout : float
        Nondimensional start of the lifting span [-], in (0, 1).
    root_chord, tip_chord : float
        Chord [m] at r = 0 and r = 1 for the linear law.
    twist : float
        Linear twist rate [rad] over r in [0, 1] (negative washout).
    preset : float
        Root pitch offset [rad].
    pitch_table : (N, 2) array, optional
        Columns (r, theta [rad]); built-in pitch at zero collective.
    chord_table : (N, 2) array, optional
        Columns (r, chord [m]).
    """

    radius: float
    n_blades: int = 2
    root_cutout: float = 0.10
    root_chord: float | None = None
    tip_chord: float | None = None
    twist: float = 0.0
    preset: float = 0.0
    pitch_table: np.ndarray | None = None
    chord_table: np.ndarray | None = None
    name: str = ""

    def __post_init__(self):
        if self.radius <= 0.0:
            raise GeometryError(f"radius must be positive, got {self.radius}")
        if self.n_blades < 1:
            raise GeometryError(f"need at least one blade, got {self.n_blades}")
        if not 0.0 < self.root_cutout < 1.0:
            raise GeometryError(f"root cutout must lie in (0, 1), got {self.root_cutout}")
        if self.chord_table is not None:
            self.chord_table = np.asarray(self.chord_table, dtype=float)
            tab = self.chord_table
            if tab.ndim != 2 or tab.shape[1] != 2 or tab.shape[0] < 2:
                raise GeometryError("chord_table must be (N>=2, 2): columns (r, chord_m)")
            if np.any(np.diff(tab[:, 0]) <= 0.0):
                raise GeometryError("chord_table r column must be strictly increasing")
            if np.any(tab[:, 1] <= 0.0):
                raise GeometryError("chord_table chords must be positive")
        elif self.root_chord is None:
            raise GeometryError("provide root_chord/tip_chord or a chord_table")
        else:
            if self.tip_chord is None:
                self.tip_chord = self.root_chord
            if self.root_chord <= 0.0 or self.tip_chord <= 0.0:
                raise GeometryError("chords must be positive")
        if self.pitch_table is not None:
            self.pitch_table = np.asarray(self.pitch_table, dtype=float)
            tab = self.pitch_table
            if tab.ndim != 2 or tab.shape[1] != 2 or tab.shape[0] < 2:
                raise GeometryError("pitch_table must be (N>=2, 2): columns (r, theta_rad)")
            if np.any(np.diff(tab[:, 0]) <= 0.0):
                raise GeometryError("pitch_table r column must be strictly increasing")

    # -- distributions ---------------------------------------------------

    def chord(self, r):
        """Chord [m] at nondimensional radius r (scalar or array)."""
        r = np.asarray(r, dtype=float)
        if self.chord_table is not None:
            return np.interp(r, self.chord_table[:, 0], self.chord_table[:, 1])
        return self.root_chord + (self.tip_chord - self.root_chord) * r

    def pitch(self, r, collective=0.0):
        """Local blade pitch theta [rad] at radius r for a collective."""
        r = np.asarray(r, dtype=float)
        if self.pitch_table is not None:
            return collective + np.interp(r, self.pitch_table[:, 0], self.pitch_table[:, 1])
        return collective + self.preset + self.twist * r

    def local_solidity(self, r):
        """sigma(r) = Nb c(r) / (pi R)."""
        return self.n_blades * self.chord(r) / (math.pi * self.radius)

    # -- scalar descriptors ---------------------------------------------

    @property
    def mean_chord(self):
        """Span-mean chord [m] (simple average of the linear law; trapezoid
        mean of a chord table)."""
        if self.chord_table is not None:
            rr, cc = self.chord_table[:, 0], self.chord_table[:, 1]
            return float(np.trapezoid(cc, rr) / (rr[-1] - rr[0]))
        return 0.5 * (self.root_chord + self.tip_chord)

    @property
    def aspect_ratio(self):
        """Blade aspect ratio AR = R / mean chord."""
        return self.radius / self.mean_chord

    @property
    def taper_ratio(self):
        """Root over tip chord."""
        return float(self.chord(0.0) / self.chord(1.0))

    @property
    def solidity(self):
        """Rotor solidity Nb c_mean / (pi R)."""
        return self.n_blades * self.mean_chord / (math.pi * self.radius)

    @property
    def disc_area(self):
        """Disc area pi R^2 [m^2]."""
        return math.pi * self.radius ** 2

    # -- constructors / serialisation -----------------------------------

    @classmethod
    def from_aspect_ratio(cls, radius, aspect_ratio, taper_ratio=1.0, twist=0.0,
                          preset=0.0, n_blades=2, root_cutout=0.10, name=""):
        """Build a linearly tapered blade from AR = R/c_mean and
        taper = c_root/c_tip, holding the mean chord."""
        if aspect_ratio <= 0.0 or taper_ratio <= 0.0:
            raise GeometryError("aspect_ratio and taper_ratio must be positive")
        c_mean = radius / aspect_ratio
        c_root = 2.0 * c_mean * taper_ratio / (1.0 + taper_ratio)
        c_tip = 2.0 * c_mean / (1.0 + taper_ratio)
        return cls(radius=radius, n_blades=n_blades, root_cutout=root_cutout,
                   root_chord=c_root, tip_chord=c_tip, twist=twist, preset=preset,
                   name=name)

    def to_dict(self):
        d = {
            "radius_m": self.radius,
            "n_blades": self.n_blades,
            "root_cutout": self.root_cutout,
        }
        if self.name:
            d["name"] = self.name
        if self.chord_table is not None:
            d["chord_table"] = [[float(r), float(c)] for r, c in self.chord_table]
        else:
            d["root_chord_m"] = self.root_chord
            d["tip_chord_m"] = self.tip_chord
        if self.pitch_table is not None:
            d["pitch_table"] = [[float(r), math.degrees(t)] for r, t in self.pitch_table]
        else:
            d["twist_deg"] = math.degrees(self.twist)
            d["preset_deg"] = math.degrees(self.preset)
        return d

    @classmethod
    def from_dict(cls, d):
        try:
            kwargs = {
                "radius": float(d["radius_m"]),
                "n_blades": int(d.get("n_blades", 2)),
                "root_cutout": float(d.get("root_cutout", 0.10)),
                "name": str(d.get("name", "")),
            }
        except KeyError as exc:
            raise GeometryError(f"rotor description missing field {exc}") from None
        if "chord_table" in d:
            kwargs["chord_table"] = np.asarray(d["chord_table"], dtype=float)
        else:
            kwargs["root_chord"] = float(d["root_chord_m"])
            kwargs["tip_chord"] = float(d.get("tip_chord_m", d["root_chord_m"]))
        if "pitch_table" in d:
            tab = np.asarray(d["pitch_table"], dtype=float)
            tab[:, 1] = np.radians(tab[:, 1])
            kwargs["pitch_table"] = tab
        else:
            kwargs["twist"] = math.radians(float(d.get("twist_deg", 0.0)))
            kwargs["preset"] = math.radians(float(d.get("preset_deg", 0.0)))
        return cls(**kwargs)

    @classmethod
    def from_file(cls, path):
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    def to_file(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, indent=2)
            fh.write("\n")


@dataclass
class OperatingPoint:
    """Rotor operating condition.

    omega [rad/s], axial freestream v_inf [m/s] (>= 0), density rho
    [kg/m^3], collective pitch [rad].
    """

    omega: float
    v_inf: float = 0.0
    rho: float = RHO_SL
    collective: float = 0.0

    def __post_init__(self):
        if self.omega <= 0.0:
            raise GeometryError(f"omega must be positive, got {self.omega}")
        if self.v_inf < 0.0:
            raise GeometryError(f"v_inf must be >= 0, got {self.v_inf}")
        if self.rho <= 0.0:
            raise GeometryError(f"rho must be positive, got {self.rho}")

    @classmethod
    def from_rpm(cls, rpm, v_inf=0.0, rho=RHO_SL, collective=0.0):
        return cls(omega=rpm * RPM_TO_RAD_S, v_inf=v_inf, rho=rho, collective=collective)

    @property
    def rpm(self):
        return self.omega / RPM_TO_RAD_S

    def tip_speed(self, radius):
        """Omega R [m/s]."""
        return self.omega * radius

    def advance_ratio(self, radius):
        """mu = v_inf / (Omega R)."""
        return self.v_inf / self.tip_speed(radius)


# ---------------------------------------------------------------------------
# per-station residual and vectorised root find
# ---------------------------------------------------------------------------

def _tip_loss(phi_sin, phi_cos, abs_sin, r, n_blades):
    """Tip-loss F and momentum factors (K_T, K_P) at inflow angle phi."""
    f = 0.5 * n_blades * (1.0 - r) / np.maximum(r * abs_sin, _TINY)
    F = (2.0 / math.pi) * np.arccos(np.exp(-np.minimum(f, 700.0)))
    one_minus_f = 1.0 - F
    k_t = 1.0 - one_minus_f * phi_cos
    k_p = 1.0 - one_minus_f * phi_sin
    return F, k_t, k_p


def _residual(phi, r, pitch, sigma, mu, n_blades, polar):
    """Nondimensional station residual g(phi); arrays broadcast."""
    s = np.sin(phi)
    c = np.cos(phi)
    abs_s = np.abs(s)
    cl, cd = polar.cl_cd(pitch - phi)
    _, k_t, k_p = _tip_loss(s, c, abs_s, r, n_blades)
    # cl, cd resolved along/normal to the local velocity:
    #   C_R cos(phi+gamma) = cl cos(phi) - cd sin(phi)
    #   C_R sin(phi+gamma) = cl sin(phi) + cd cos(phi)
    blade = (sigma / (8.0 * r)) * (mu * (cl * s + cd * c) / k_p
                                   + r * (cl * c - cd * s) / k_t)
    return (r * s - mu * c) * s - np.sign(phi) * blade


def _scan_bracket(r, pitch, sigma, mu, n_blades, polar, lo_arr, hi_arr, g_lo_arr,
                  found, phi_lo, phi_hi):
    """Scan [phi_lo, phi_hi] in SCAN_SLICES slices; record the first sign
    change per element into (lo_arr, hi_arr, g_lo_arr).  Mutates in place."""
    grid = np.linspace(phi_lo, phi_hi, SCAN_SLICES + 1)
    g_prev = _residual(grid[0], r, pitch, sigma, mu, n_blades, polar)
    for k in range(1, grid.size):
        g_new = _residual(grid[k], r, pitch, sigma, mu, n_blades, polar)
        cross = (~found) & (g_prev * g_new <= 0.0) & np.isfinite(g_prev) & np.isfinite(g_new)
        if np.any(cross):
            lo_arr[cross] = grid[k - 1]
            hi_arr[cross] = grid[k]
            g_lo_arr[cross] = g_prev[cross]
            found |= cross
        g_prev = g_new
    return found


def _solve_phi_grid(r, pitch, sigma, mu, n_blades, polar, allow_negative=True):
    """Inflow angle phi for every element of a broadcast (pitch, r) grid.

    Returns (phi, solved, residual).  Elements with no bracket anywhere
    come back with solved = False and phi = nan; callers decide whether
    that is fatal.
    """
    shape = np.broadcast_shapes(np.shape(r), np.shape(pitch))
    r_b = np.broadcast_to(np.asarray(r, dtype=float), shape)
    pitch_b = np.broadcast_to(np.asarray(pitch, dtype=float), shape)
    sigma_b = np.broadcast_to(np.asarray(sigma, dtype=float), shape)

    lo = np.full(shape, np.nan)
    hi = np.full(shape, np.nan)
    g_lo = np.full(shape, np.nan)
    found = np.zeros(shape, dtype=bool)

    # hover fixed point: zero section lift at phi = 0 is the exact solution
    pinned = np.zeros(shape, dtype=bool)
    if mu == 0.0:
        cl0, _ = polar.cl_cd(pitch_b)
        pinned = np.abs(cl0) < ZERO_LIFT_CL
        found |= pinned

    _scan_bracket(r_b, pitch_b, sigma_b, mu, n_blades, polar, lo, hi, g_lo,
                  found, SCAN_EPS, 0.5 * math.pi - SCAN_EPS)
    if allow_negative and not np.all(found):
        _scan_bracket(r_b, pitch_b, sigma_b, mu, n_blades, polar, lo, hi, g_lo,
                      found, -0.5 * math.pi + SCAN_EPS, -SCAN_EPS)

    solve = found & ~pinned
    if np.any(solve):
        # bisection, vectorised; unbracketed elements carry nan through
        work_lo = np.where(solve, lo, 0.25)
        work_hi = np.where(solve, hi, 0.5)
        work_gl = np.where(solve, g_lo, 1.0)
        for _ in range(BISECT_ITERS):
            mid = 0.5 * (work_lo + work_hi)
            g_mid = _residual(mid, r_b, pitch_b, sigma_b, mu, n_blades, polar)
            same = g_mid * work_gl > 0.0
            work_lo = np.where(same, mid, work_lo)
            work_gl = np.where(same, g_mid, work_gl)
            work_hi = np.where(same, work_hi, mid)
        phi = np.where(solve, 0.5 * (work_lo + work_hi), np.nan)
    else:
        phi = np.full(shape, np.nan)
    phi = np.where(pinned, 0.0, phi)

    res = np.where(found, _residual(phi, r_b, pitch_b, sigma_b, mu, n_blades, polar), np.nan)
    res = np.where(pinned, 0.0, res)
    return phi, found, res


def _recover(phi, r, pitch, sigma, mu, n_blades, polar):
    """Flow state and per-station loads once phi is known.

    The section resultant speed comes from the torque-side balance,
    U/(Omega R) = r / B2(phi); at the residual root the thrust-side
    balance gives the identical value, so both momentum equations hold.
    """
    s = np.sin(phi)
    c = np.cos(phi)
    abs_s = np.abs(s)
    alpha = pitch - phi
    cl, cd = polar.cl_cd(alpha)
    F, k_t, k_p = _tip_loss(s, c, abs_s, r, n_blades)

    cr_sin = cl * s + cd * c          # C_R sin(phi + gamma)
    cr_cos = cl * c - cd * s          # C_R cos(phi + gamma)
    b2 = c + sigma * cr_sin / (8.0 * k_p * np.maximum(abs_s, _TINY) * r)
    u = np.where(np.abs(s) < _TINY, r, r / b2)   # phi = 0: no induced flow

    lam = u * s
    xi = u * c
    lam_i = lam - mu
    xi_i = r - xi
    dct_dr = 0.5 * sigma * u * u * cr_cos
    dcp_dr = 0.5 * sigma * u * u * cr_sin * r
    return {
        "alpha": alpha, "cl": cl, "cd": cd, "tip_loss": F,
        "k_t": k_t, "k_p": k_p, "lam": lam, "xi": xi,
        "lam_i": lam_i, "xi_i": xi_i, "dct_dr": dct_dr, "dcp_dr": dcp_dr,
    }


# ---------------------------------------------------------------------------
# results containers
# ---------------------------------------------------------------------------

@dataclass
class StationSolution:
    """Converged inflow state at one radial station (nondimensional
    speeds are fractions of tip speed)."""

    r: float
    phi: float            # inflow angle [rad]
    alpha: float          # section angle of attack [rad]
    cl: float
    cd: float
    tip_loss: float       # Prandtl F [-]
    k_t: float
    k_p: float
    lam: float            # axial flow ratio (v_inf + w_i)/(Omega R)
    xi: float             # swirl flow ratio (Omega y - u_i)/(Omega R)
    lam_i: float          # induced axial ratio
    xi_i: float           # induced swirl ratio
    dct_dr: float
    dcp_dr: float
    residual: float


@dataclass
class InflowSolution:
    """Arrays of the converged station states over the blade span."""

    r: np.ndarray
    phi: np.ndarray
    alpha: np.ndarray
    cl: np.ndarray
    cd: np.ndarray
    tip_loss: np.ndarray
    k_t: np.ndarray
    k_p: np.ndarray
    lam: np.ndarray
    xi: np.ndarray
    lam_i: np.ndarray
    xi_i: np.ndarray
    dct_dr: np.ndarray
    dcp_dr: np.ndarray
    residual: np.ndarray

    def station(self, j):
        """The j-th station as a scalar :class:`StationSolution`."""
        return StationSolution(**{k: float(getattr(self, k)[j]) for k in (
            "r", "phi", "alpha", "cl", "cd", "tip_loss", "k_t", "k_p",
            "lam", "xi", "lam_i", "xi_i", "dct_dr", "dcp_dr", "residual")})


@dataclass
class RotorPerformance:
    """Integrated rotor performance at one operating point."""

    ct: float             # thrust coefficient [-]
    cp: float             # power coefficient [-]
    thrust: float         # [N]
    power: float          # [W]
    figure_of_merit: float  # hover only; nan in axial flight
    power_loading: float  # T/P [N/W]
    eta_p: float          # propulsive efficiency CT mu / CP; 0 in hover
    advance_ratio: float  # mu [-]
    collective: float     # theta0 [rad]
    v_inf: float          # [m/s]
    rpm: float
    rho: float
    radius: float

    CSV_HEADER = "theta0_deg,v_inf,rpm,CT,CP,T_N,P_W,FM,PL,eta_p"

    def csv_row(self):
        fm = "" if math.isnan(self.figure_of_merit) else f"{self.figure_of_merit:.6f}"
        return (f"{math.degrees(self.collective):.4f},{self.v_inf:.4f},{self.rpm:.2f},"
                f"{self.ct:.8e},{self.cp:.8e},{self.thrust:.6f},{self.power:.6f},"
                f"{fm},{self.power_loading:.8f},{self.eta_p:.6f}")


# ---------------------------------------------------------------------------
# public solver entry points
# ---------------------------------------------------------------------------

def station_grid(root_cutout, n_stations):
    """Midpoint stations and weight: n cells spanning [cutout, 1]."""
    if n_stations < 16:
        raise GeometryError(f"need at least 16 stations, got {n_stations}")
    dr = (1.0 - root_cutout) / n_stations
    r = root_cutout + dr * (np.arange(n_stations) + 0.5)
    return r, dr


def solve_station(geometry, op, polar, r):
    """Converged inflow state at a single nondimensional station r.

    Raises :class:`NoRootError` if the residual has no sign change on
    (-pi/2, pi/2).
    """
    if not 0.0 < r < 1.0:
        raise GeometryError(f"station must lie in (0, 1), got {r}")
    mu = op.advance_ratio(geometry.radius)
    pitch = float(geometry.pitch(r, op.collective))
    sigma = float(geometry.local_solidity(r))
    phi, found, res = _solve_phi_grid(np.array([r]), np.array([pitch]),
                                      np.array([sigma]), mu, geometry.n_blades, polar)
    if not found[0]:
        raise NoRootError(
            f"no inflow-angle root at r={r:.4f} (pitch {math.degrees(pitch):.2f} deg, "
            f"mu {mu:.4f})", stations=[r],
            bracket=(-0.5 * math.pi + SCAN_EPS, 0.5 * math.pi - SCAN_EPS))
    state = _recover(phi, np.array([r]), np.array([pitch]), np.array([sigma]),
                     mu, geometry.n_blades, polar)
    return StationSolution(r=float(r), phi=float(phi[0]), residual=float(res[0]),
                           **{k: float(v[0]) for k, v in state.items()})


def _integrate(phi, r, dr, pitch, sigma, mu, n_blades, polar):
    """Station recovery plus span integration; returns (ct, cp, inflow)."""
    state = _recover(phi, r, pitch, sigma, mu, n_blades, polar)
    ct = float(np.sum(state["dct_dr"]) * dr)
    cp = float(np.sum(state["dcp_dr"]) * dr)
    return ct, cp, state

def _performance(ct, cp, geometry, op):
    mu = op.advance_ratio(geometry.radius)
    v_tip = op.tip_speed(geometry.radius)
    area = geometry.disc_area
    thrust = ct * op.rho * area * v_tip ** 2
    power = cp * op.rho * area * v_tip ** 3
    if mu == 0.0:
        eta_p = 0.0
        fm = ct ** 1.5 / (math.sqrt(2.0) * cp) if ct > 0.0 and cp > 0.0 else math.nan
    else:
        eta_p = ct * mu / cp if cp != 0.0 else math.nan
        fm = math.nan
    pl = thrust / power if power != 0.0 else math.inf
    return RotorPerformance(
        ct=ct, cp=cp, thrust=thrust, power=power, figure_of_merit=fm,
        power_loading=pl, eta_p=eta_p, advance_ratio=mu,
        collective=op.collective, v_inf=op.v_inf, rpm=op.rpm, rho=op.rho,
        radius=geometry.radius)


def evaluate_rotor(geometry, op, polar, n_stations=100, return_inflow=False):
    """Integrated CT, CP and dimensional performance at one operating point.

    Midpoint rule over ``n_stations`` equal cells on [root_cutout, 1].
    Raises :class:`NoRootError` naming the failed stations if any station
    does not converge.
    """
    r, dr = station_grid(geometry.root_cutout, n_stations)
    mu = op.advance_ratio(geometry.radius)
    pitch = geometry.pitch(r, op.collective)
    sigma = geometry.local_solidity(r)
    phi, found, res = _solve_phi_grid(r, pitch, sigma, mu, geometry.n_blades, polar)
    if not np.all(found):
        bad = r[~found]
        raise NoRootError(
            f"inflow solve failed at {bad.size} station(s): r = "
            + ", ".join(f"{x:.4f}" for x in bad[:8]),
            stations=bad.tolist(),
            bracket=(-0.5 * math.pi + SCAN_EPS, 0.5 * math.pi - SCAN_EPS))
    ct, cp, state = _integrate(phi, r, dr, pitch, sigma, mu, geometry.n_blades, polar)
    perf = _performance(ct, cp, geometry, op)
    if return_inflow:
        inflow = InflowSolution(r=r, phi=phi, residual=res, **state)
        return perf, inflow
    return perf


@dataclass
class ThrustCurve:
    """Thrust/power versus collective at fixed speed and RPM.

    ``rows[i]`` is the :class:`RotorPerformance` for ``collectives[i]``, or
    None with a message in ``errors[i]`` if that collective failed.
    """

    collectives: np.ndarray
    rows: list
    errors: list

    def _array(self, attr):
        return np.array([math.nan if p is None else getattr(p, attr) for p in self.rows])

    @property
    def thrust(self):
        return self._array("thrust")

    @property
    def power(self):
        return self._array("power")

    @property
    def ct(self):
        return self._array("ct")

    @property
    def cp(self):
        return self._array("cp")

    def csv_lines(self):
        lines = [RotorPerformance.CSV_HEADER]
        lines += [p.csv_row() for p in self.rows if p is not None]
        return lines


def thrust_curve(geometry, polar, rpm, collectives, v_inf=0.0, rho=RHO_SL,
                 n_stations=100):
    """Sweep collective at fixed RPM and axial speed; one batched solve.

    Stations that fail to converge invalidate only their own row.
    """
    collectives = np.atleast_1d(np.asarray(collectives, dtype=float))
    op0 = OperatingPoint.from_rpm(rpm, v_inf=v_inf, rho=rho)
    r, dr = station_grid(geometry.root_cutout, n_stations)
    mu = op0.advance_ratio(geometry.radius)
    base = geometry.pitch(r, 0.0)
    pitch = collectives[:, None] + base[None, :]
    sigma = np.broadcast_to(geometry.local_solidity(r), pitch.shape)
    r2 = np.broadcast_to(r, pitch.shape)

    phi, found, _ = _solve_phi_grid(r2, pitch, sigma, mu, geometry.n_blades, polar)
    state = _recover(phi, r2, pitch, sigma, mu, geometry.n_blades, polar)
    ct_rows = np.sum(state["dct_dr"], axis=1) * dr
    cp_rows = np.sum(state["dcp_dr"], axis=1) * dr

    rows, errors = [], []
    ok_rows = np.all(found, axis=1)
    for i, theta0 in enumerate(collectives):
        if ok_rows[i]:
            op = replace(op0, collective=float(theta0))
            rows.append(_performance(float(ct_rows[i]), float(cp_rows[i]), geometry, op))
            errors.append(None)
        else:
            bad = r[~found[i]]
            rows.append(None)
            errors.append(f"no inflow root at r = {', '.join(f'{x:.3f}' for x in bad[:5])}")
    return ThrustCurve(collectives=collectives, rows=rows, errors=errors)


# ---------------------------------------------------------------------------
# polynomial blade description (small propeller validation case)
# ---------------------------------------------------------------------------

def geometry_from_polynomials(pitch_coeffs, chord_coeffs, radius, n_points=50,
                              n_blades=2, root_cutout=0.10, name="polynomial blade"):
    """Blade from polynomial fits of pitch and chord along the span.

    The polynomials are functions of the *dimensional* radial position in
    centimetres (the usual way small-propeller fits are published):
    pitch_coeffs give local pitch in degrees, chord_coeffs the chord in
    centimetres; both highest power first (``np.polyval`` order).
    Tabulates ``n_points`` stations over the cutout-to-tip span.
    """
    r = np.linspace(root_cutout, 1.0, n_points)
    y_cm = r * radius * 100.0
    theta = np.radians(np.polyval(pitch_coeffs, y_cm))
    chord_m = np.polyval(chord_coeffs, y_cm) / 100.0
    if np.any(chord_m <= 0.0):
        raise GeometryError("chord polynomial goes non-positive inside the span")
    return BladeGeometry(radius=radius, n_blades=n_blades, root_cutout=root_cutout,
                         pitch_table=np.column_stack([r, theta]),
                         chord_table=np.column_stack([r, chord_m]),
                         name=name)
