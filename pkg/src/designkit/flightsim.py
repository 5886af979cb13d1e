"""Hover-regime simulator for the variable-pitch quadrotor.

World frame is north-east-down (z positive down); attitude is ZYX Euler
(yaw-pitch-roll).  Rotors sit at the corners of a square of half-side
``arm_length``:

    1: (+l, +l)   2: (-l, +l)   3: (-l, -l)   4: (+l, -l)

with spin directions (-, +, -, +) so adjacent rotors counter-rotate.
Thrust per rotor is K_F * C_T; reaction torque follows the 3/2-power
law in C_T.  Control allocation linearizes that law about hover, and
the blade-pitch map comes from the rotor solver rather than bench data.
"""

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import bemt
from .constants import G, RHO_SL
from .errors import ConfigError, MissionTimeout, SimulationAbort

SPIN = np.array([-1.0, 1.0, -1.0, 1.0])
GIMBAL_LIMIT = math.radians(85.0)
MAX_DT = 0.01   # [s]


# ---------------------------------------------------------------------------
# parameters, state

@dataclass(frozen=True)
class VehicleParams:
    mass: float                      # [kg]
    inertia: tuple                   # (Ixx, Iyy, Izz) [kg m^2]
    arm_length: float                # [m] rotor offset, both axes
    k_f: float                       # [N] thrust per unit C_T
    rotor_radius: float              # [m]
    gravity: float = G
    ct_hover: float = None           # filled from mass/k_f when omitted

    def __post_init__(self):
        if min(self.mass, self.arm_length, self.k_f, self.rotor_radius,
               self.gravity, *self.inertia) <= 0.0:
            raise ConfigError("vehicle parameters must be positive")
        trim = self.mass * self.gravity / (4.0 * self.k_f)
        if self.ct_hover is None:
            object.__setattr__(self, "ct_hover", trim)
        elif abs(self.ct_hover - trim) > 1e-9 * trim:
            raise ConfigError(
                f"ct_hover {self.ct_hover:.3e} inconsistent with the trim "
                f"value {trim:.3e}")

    @property
    def hover_thrust(self):
        return self.mass * self.gravity

    @property
    def yaw_gain(self):
        """Moment per unit C_T in the hover-linearized yaw row [N m]."""
        return self.k_f * self.rotor_radius * math.sqrt(self.ct_hover / 2.0)


def default_params(mass=18.507, rotor_radius=0.38, rpm=3200.0, rho=RHO_SL,
                   arm_length=0.5, inertia=(2.4, 1.7, 4.1)):
    """Parameters for the reference vehicle.

    K_F is the thrust nondimensionalization at the hover tip speed, so
    C_T here is the same coefficient the rotor solver reports.  Inertias
    are ledger-based estimates (point rotors at the corners, wings as
    spanwise rods), overridable per config.
    """
    tip_speed = rpm * math.pi / 30.0 * rotor_radius
    k_f = rho * math.pi * rotor_radius ** 2 * tip_speed ** 2
    return VehicleParams(mass=mass, inertia=inertia, arm_length=arm_length,
                         k_f=k_f, rotor_radius=rotor_radius)


@dataclass
class VehicleState:
    position: np.ndarray = field(default_factory=lambda: np.zeros(3))
    velocity: np.ndarray = field(default_factory=lambda: np.zeros(3))
    euler: np.ndarray = field(default_factory=lambda: np.zeros(3))
    rates: np.ndarray = field(default_factory=lambda: np.zeros(3))  # body

    def copy(self):
        return VehicleState(self.position.copy(), self.velocity.copy(),
                            self.euler.copy(), self.rates.copy())

    def pack(self):
        return np.concatenate([self.position, self.velocity,
                               self.euler, self.rates])

    @classmethod
    def unpack(cls, vec):
        return cls(vec[0:3].copy(), vec[3:6].copy(),
                   vec[6:9].copy(), vec[9:12].copy())


@dataclass(frozen=True)
class ControlCommand:
    thrust: float                    # [N]
    moments: tuple                   # (l, m, n) [N m]

    def __post_init__(self):
        values = (self.thrust, *self.moments)
        if not all(math.isfinite(v) for v in values):
            raise ConfigError("control command must be finite")


# ---------------------------------------------------------------------------
# kinematics

def rotation_matrix(euler):
    """Body-to-world rotation for ZYX Euler angles."""
    phi, theta, psi = euler
    cph, sph = math.cos(phi), math.sin(phi)
    cth, sth = math.cos(theta), math.sin(theta)
    cps, sps = math.cos(psi), math.sin(psi)
    return np.array([
        [cth * cps, sph * sth * cps - cph * sps, cph * sth * cps + sph * sps],
        [cth * sps, sph * sth * sps + cph * cps, cph * sth * sps - sph * cps],
        [-sth, sph * cth, cph * cth],
    ])


def euler_rate_matrix(euler):
    """Maps body rates to Euler-angle rates; singular at |theta| = 90 deg."""
    phi, theta, _ = euler
    cph, sph = math.cos(phi), math.sin(phi)
    cth, tth = math.cos(theta), math.tan(theta)
    return np.array([
        [1.0, sph * tth, cph * tth],
        [0.0, cph, -sph],
        [0.0, sph / cth, cph / cth],
    ])


# ---------------------------------------------------------------------------
# controllers

@dataclass(frozen=True)
class GainSet:
    """Per-axis PID gains; attitude axes (roll, pitch, yaw), position (x, y, z)."""

    att_p: tuple = (86.0, 61.0, 37.0)
    att_i: tuple = (2.0, 2.0, 1.0)
    att_d: tuple = (23.0, 16.0, 20.0)
    pos_p: tuple = (1.44, 1.44, 1.44)
    pos_i: tuple = (0.05, 0.05, 0.05)
    pos_d: tuple = (2.16, 2.16, 2.16)
    att_integrator_limit: float = 0.5
    pos_integrator_limit: float = 1.0

    def __post_init__(self):
        gains = (self.att_p + self.att_i + self.att_d
                 + self.pos_p + self.pos_i + self.pos_d)
        if min(gains) < 0.0:
            raise ConfigError("PID gains must be non-negative")
        if self.att_integrator_limit <= 0.0 or self.pos_integrator_limit <= 0.0:
            raise ConfigError("integrator limits must be positive")


DEFAULT_GAINS = GainSet()


class AttitudeController:
    """PID on Euler-angle error; moments oppose the error."""

    def __init__(self, gains=DEFAULT_GAINS):
        self.gains = gains
        self.integral = np.zeros(3)

    def reset(self):
        self.integral[:] = 0.0

    def update(self, state, euler_desired, dt):
        g = self.gains
        error = state.euler - np.asarray(euler_desired, dtype=float)
        self.integral += error * dt
        np.clip(self.integral, -g.att_integrator_limit,
                g.att_integrator_limit, out=self.integral)
        euler_rates = euler_rate_matrix(state.euler) @ state.rates
        moments = (-np.asarray(g.att_p) * error
                   - np.asarray(g.att_i) * self.integral
                   - np.asarray(g.att_d) * euler_rates)
        return moments


class PositionController:
    """PID position loop producing total thrust and tilt commands."""

    def __init__(self, gains=DEFAULT_GAINS, params=None):
        self.gains = gains
        self.params = default_params() if params is None else params
        self.integral = np.zeros(3)
        self.tilt_limited = False
        self.thrust_clamped = False

    def reset(self):
        self.integral[:] = 0.0
        self.tilt_limited = False
        self.thrust_clamped = False

    def update(self, state, position_desired, yaw_desired, dt,
               accel_feedforward=(0.0, 0.0, 0.0)):
        g = self.gains
        p = self.params
        error = state.position - np.asarray(position_desired, dtype=float)
        self.integral += error * dt
        np.clip(self.integral, -g.pos_integrator_limit,
                g.pos_integrator_limit, out=self.integral)
        accel_fb = (-np.asarray(g.pos_p) * error
                    - np.asarray(g.pos_i) * self.integral
                    - np.asarray(g.pos_d) * state.velocity)
        # demanded specific force: desired accel minus gravity (z down)
        accel = np.asarray(accel_feedforward, dtype=float) + accel_fb \
            - np.array([0.0, 0.0, p.gravity])
        thrust = p.mass * float(np.linalg.norm(accel))
        self.thrust_clamped = False
        if thrust <= 0.0:
            thrust = p.hover_thrust
            self.thrust_clamped = True
            u = np.array([0.0, 0.0, 1.0])
        else:
            u = -p.mass * accel / thrust

        cps, sps = math.cos(yaw_desired), math.sin(yaw_desired)
        self.tilt_limited = False
        s_phi = u[0] * sps - u[1] * cps
        if abs(s_phi) > 1.0:
            s_phi = math.copysign(1.0, s_phi)
            self.tilt_limited = True
        phi_d = math.asin(s_phi)
        s_theta = (u[0] * cps + u[1] * sps) / math.cos(phi_d)
        if abs(s_theta) > 1.0:
            s_theta = math.copysign(1.0, s_theta)
            self.tilt_limited = True
        theta_d = math.asin(s_theta)
        return thrust, phi_d, theta_d


def attitude_pid(state, euler_desired, gains=DEFAULT_GAINS, dt=0.005):
    """Single stateless update with a zero integrator."""
    return AttitudeController(gains).update(state, euler_desired, dt)


def position_controller(state, position_desired, yaw_desired=0.0,
                        gains=DEFAULT_GAINS, params=None, dt=0.005):
    """Single stateless update with a zero integrator."""
    return PositionController(gains, params).update(
        state, position_desired, yaw_desired, dt)


# ---------------------------------------------------------------------------
# allocation

def allocate(command, params):
    """Thrust coefficients (C_T1..4) realizing the commanded wrench.

    Inverts the hover-linearized mixing

        T = K_F (C1 + C2 + C3 + C4)
        l = K_F l_a (-C1 - C2 + C3 + C4)
        m = K_F l_a ( C1 - C2 - C3 + C4)
        n = K_F R sqrt(C_Th/2) (-C1 + C2 - C3 + C4)

    which is orthogonal, so the solution is the quarter-sum pattern
    below.  The exact reaction torque follows C_T^(3/2); the linearized
    row overpredicts how much differential is needed by a factor that
    the yaw loop absorbs.
    """
    p = params
    if p.k_f <= 0.0 or p.arm_length <= 0.0:
        raise ConfigError("allocation needs positive k_f and arm length")
    l, m, n = command.moments
    a = command.thrust / p.k_f
    b = l / (p.k_f * p.arm_length)
    c = m / (p.k_f * p.arm_length)
    d = n / p.yaw_gain
    return 0.25 * np.array([
        a - b + c - d,
        a - b - c + d,
        a + b - c - d,
        a + b + c + d,
    ])


def mixing_forward(cts, params, exact_yaw=False):
    """(T, l, m, n) produced by the given thrust coefficients."""
    p = params
    cts = np.asarray(cts, dtype=float)
    thrust = p.k_f * cts.sum()
    l = p.k_f * p.arm_length * (-cts[0] - cts[1] + cts[2] + cts[3])
    m = p.k_f * p.arm_length * (cts[0] - cts[1] - cts[2] + cts[3])
    if exact_yaw:
        n = p.k_f * p.rotor_radius / math.sqrt(2.0) * float(
            np.sum(SPIN * np.sign(cts) * np.abs(cts) ** 1.5))
    else:
        n = p.yaw_gain * float(np.sum(SPIN * cts))
    return thrust, l, m, n


# ---------------------------------------------------------------------------
# pitch map

class PitchMap:
    """Monotone collective <-> thrust-coefficient map for one rotor.

    Built from the rotor solver at the hover operating point and
    restricted to the rising pre-stall branch so the inverse is
    single-valued.  Queries outside the achievable range clamp and
    raise the ``saturated`` flag.
    """

    def __init__(self, collectives, cts):
        collectives = np.asarray(collectives, dtype=float)
        cts = np.asarray(cts, dtype=float)
        keep = np.isfinite(cts)
        collectives, cts = collectives[keep], cts[keep]
        if cts.size < 3:
            raise ConfigError("pitch map needs at least three valid points")
        peak = int(np.argmax(cts))
        self.collectives = collectives[:peak + 1]
        self.cts = cts[:peak + 1]
        if self.cts.size < 3 or np.any(np.diff(self.cts) <= 0.0):
            raise ConfigError("pitch map is not monotone below the peak")

    @classmethod
    def from_rotor(cls, geometry, polar, rpm=3200.0, rho=RHO_SL,
                   collectives=None, n_stations=100):
        if collectives is None:
            collectives = np.radians(np.arange(-4.0, 20.01, 0.5))
        curve = bemt.thrust_curve(geometry, polar, rpm, collectives,
                                  v_inf=0.0, rho=rho, n_stations=n_stations)
        return cls(collectives, curve.ct)

    @property
    def ct_range(self):
        return float(self.cts[0]), float(self.cts[-1])

    def pitch(self, ct):
        """(collective [rad], saturated) for a requested C_T."""
        lo, hi = self.ct_range
        saturated = ct < lo or ct > hi
        clamped = min(max(ct, lo), hi)
        return float(np.interp(clamped, self.cts, self.collectives)), saturated

    def ct(self, collective):
        """Forward map on the stored branch."""
        return float(np.interp(collective, self.collectives, self.cts))


def ct_to_pitch(ct, pitch_map):
    """Collective [rad] for a thrust coefficient; clamps out-of-range."""
    return pitch_map.pitch(ct)


# ---------------------------------------------------------------------------
# rigid-body dynamics

def _derivatives(vec, cts, params):
    p = params
    state = VehicleState.unpack(vec)
    thrust, l, m, n = mixing_forward(cts, p, exact_yaw=True)
    r_bw = rotation_matrix(state.euler)
    accel = np.array([0.0, 0.0, p.gravity]) \
        - (thrust / p.mass) * r_bw[:, 2]
    inertia = np.asarray(p.inertia)
    omega = state.rates
    moments = np.array([l, m, n])
    omega_dot = (moments - np.cross(omega, inertia * omega)) / inertia
    euler_dot = euler_rate_matrix(state.euler) @ omega
    return np.concatenate([state.velocity, accel, euler_dot, omega_dot])


def step_dynamics(state, cts, params, dt):
    """Advance one fixed RK4 step under constant thrust coefficients.

    Forces and moments follow the quadrotor mixing with the exact
    3/2-power reaction torque.  Aborts near the Euler pitch singularity.
    """
    if not 0.0 < dt <= MAX_DT:
        raise ConfigError(f"dt must lie in (0, {MAX_DT}] s")
    cts = np.asarray(cts, dtype=float)
    vec = state.pack()
    k1 = _derivatives(vec, cts, params)
    k2 = _derivatives(vec + 0.5 * dt * k1, cts, params)
    k3 = _derivatives(vec + 0.5 * dt * k2, cts, params)
    k4 = _derivatives(vec + dt * k3, cts, params)
    new = vec + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    out = VehicleState.unpack(new)
    if abs(out.euler[1]) > GIMBAL_LIMIT:
        raise SimulationAbort(
            f"pitch {math.degrees(out.euler[1]):.1f} deg beyond the "
            f"{math.degrees(GIMBAL_LIMIT):.0f} deg Euler limit")
    return out


# ---------------------------------------------------------------------------
# missions

@dataclass(frozen=True)
class MissionLog:
    time: np.ndarray = field(repr=False)
    position: np.ndarray = field(repr=False)       # [N, 3]
    euler: np.ndarray = field(repr=False)          # [N, 3]
    euler_desired: np.ndarray = field(repr=False)  # [N, 3]
    thrust: np.ndarray = field(repr=False)
    moments: np.ndarray = field(repr=False)        # [N, 3]
    cts: np.ndarray = field(repr=False)            # [N, 4]
    pitches: np.ndarray = field(repr=False)        # [N, 4] collective [rad]
    capture_times: tuple = ()
    CSV_HEADER = ("t,x,y,z,phi,theta,psi,T,l,m,n,"
                  "ct1,ct2,ct3,ct4,theta01,theta02,theta03,theta04")

    @property
    def final_position(self):
        return self.position[-1]

    def csv_lines(self):
        lines = [self.CSV_HEADER]
        for i in range(self.time.size):
            row = [f"{self.time[i]:.4f}"]
            row += [f"{v:.6g}" for v in self.position[i]]
            row += [f"{v:.6g}" for v in self.euler[i]]
            row.append(f"{self.thrust[i]:.6g}")
            row += [f"{v:.6g}" for v in self.moments[i]]
            row += [f"{v:.6g}" for v in self.cts[i]]
            row += [f"{v:.6g}" for v in self.pitches[i]]
            lines.append(",".join(row))
        return lines


def run_mission(waypoints, params=None, gains=DEFAULT_GAINS, dt=0.005,
                capture_radius=0.1, timeout=20.0, pitch_map=None,
                initial_state=None, hold_time=1.0):
    """Fly the waypoint list and log every step.

    Each waypoint is (x, y, z, yaw); the next one engages once the
    vehicle is inside ``capture_radius``.  After the last capture the
    controller holds position for ``hold_time`` to settle.  A waypoint
    that stays uncaptured past ``timeout`` raises a mission timeout
    carrying the distance still to go.
    """
    waypoints = [tuple(map(float, w)) for w in waypoints]
    if not waypoints:
        raise ConfigError("mission needs at least one waypoint")
    params = default_params() if params is None else params
    state = VehicleState() if initial_state is None else initial_state.copy()

    att = AttitudeController(gains)
    pos = PositionController(gains, params)
    ct_lo, ct_hi = (0.0, math.inf) if pitch_map is None else pitch_map.ct_range

    rows = {k: [] for k in ("t", "pos", "eul", "eud", "T", "M", "ct", "th")}
    capture_times = []
    t = 0.0
    wp_index = 0
    wp_clock = 0.0
    settle = None
    while True:
        target = waypoints[wp_index]
        thrust, phi_d, theta_d = pos.update(state, target[:3], target[3], dt)
        euler_d = np.array([phi_d, theta_d, target[3]])
        moments = att.update(state, euler_d, dt)
        cts = allocate(ControlCommand(thrust, tuple(moments)), params)
        cts = np.clip(cts, max(ct_lo, 0.0), ct_hi)
        if pitch_map is None:
            pitches = np.full(4, math.nan)
        else:
            pitches = np.array([pitch_map.pitch(c)[0] for c in cts])

        rows["t"].append(t)
        rows["pos"].append(state.position.copy())
        rows["eul"].append(state.euler.copy())
        rows["eud"].append(euler_d)
        rows["T"].append(thrust)
        rows["M"].append(moments.copy())
        rows["ct"].append(cts.copy())
        rows["th"].append(pitches)

        state = step_dynamics(state, cts, params, dt)
        t += dt
        wp_clock += dt

        distance = float(np.linalg.norm(state.position - np.array(target[:3])))
        if settle is None:
            if distance <= capture_radius:
                capture_times.append(t)
                if wp_index + 1 < len(waypoints):
                    wp_index += 1
                    wp_clock = 0.0
                else:
                    settle = hold_time
            elif wp_clock > timeout:
                raise MissionTimeout(
                    f"waypoint {wp_index} not captured after {timeout:.0f} s",
                    remaining_m=distance, waypoint_index=wp_index)
        else:
            settle -= dt
            if settle <= 0.0:
                break

    return MissionLog(
        time=np.array(rows["t"]),
        position=np.array(rows["pos"]),
        euler=np.array(rows["eul"]),
        euler_desired=np.array(rows["eud"]),
        thrust=np.array(rows["T"]),
        moments=np.array(rows["M"]),
        cts=np.array(rows["ct"]),
        pitches=np.array(rows["th"]),
        capture_times=tuple(capture_times))
