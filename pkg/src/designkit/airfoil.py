"""Sectional aerodynamics: airfoil polars and angle-of-attack lookups.

A polar is a table of (alpha, cl, cd) samples.  Lookups inside the sampled
range use linear interpolation; outside it one of two stall models applies:

``clamp``
    hold the end-row values (cheap, adequate for narrow sweeps)
``flat-plate-blend``
    fade linearly, over a 10 deg band past each table edge, into the
    flat-plate laws cl = 1.1 sin(2a), cd = 1.7 sin^2(a), which remain valid
    to +/-90 deg.  This is what deep-stall root sections see when a highly
    twisted blade hovers.

Tables can come from a CSV file, from an analytic lift-curve description
(:class:`ParametricPolarSpec`), or from the two bundled rotor airfoils
("sc1095" cambered, "naca0012" symmetric).  Bundled tables are assembled
from published low-Mach section characteristics and are replaceable data,
not calibrated truth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .errors import PolarDataError, PolarFormatError

# Blend width between table-edge values and the flat-plate laws [rad]
BLEND_WIDTH = math.radians(10.0)

STALL_MODELS = ("clamp", "flat-plate-blend")

# Recommended minimum sampled range [rad]; narrower tables still load but
# lean on the stall model unusually early.
RECOMMENDED_RANGE = math.radians(20.0)


def flat_plate(alpha):
    """Flat-plate section coefficients, valid at any angle of attack.

    cl = 1.1 sin(2a), cd = 1.7 sin^2(a).
    """
    a = np.asarray(alpha, dtype=float)
    return 1.1 * np.sin(2.0 * a), 1.7 * np.sin(a) ** 2


@dataclass(frozen=True)
class ParametricPolarSpec:
    """Analytic polar: linear lift curve with a hard cap, parabolic drag.

    cl = cl_alpha * (a - alpha0), clipped to +/- cl_max beyond the stall
    angle; cd = cd0 + cd2 * (a - alpha0)^2.

    Parameters
    ----------
    cl_alpha : float
        Lift-curve slope [1/rad].
    alpha0 : float
        Zero-lift angle of attack [rad].
    cd0 : float
        Minimum drag coefficient [-].
    cd2 : float
        Quadratic drag rise [1/rad^2].
    cl_max : float
        Lift cap magnitude [-].
    alpha_stall : float
        Stall angle magnitude [rad]; sets how far the tabulated range
        extends past the linear region.
    """

    cl_alpha: float = 2.0 * math.pi
    alpha0: float = 0.0
    cd0: float = 0.008
    cd2: float = 0.8
    cl_max: float = 1.2
    alpha_stall: float = math.radians(12.0)

    def __post_init__(self):
        if self.cl_alpha <= 0.0:
            raise PolarDataError(f"cl_alpha must be positive, got {self.cl_alpha}")
        if self.cd0 < 0.0 or self.cd2 < 0.0:
            raise PolarDataError("drag coefficients cd0, cd2 must be >= 0")
        if self.cl_max <= 0.0 or self.alpha_stall <= 0.0:
            raise PolarDataError("cl_max and alpha_stall must be positive")


class AirfoilPolar:
    """Tabulated (alpha, cl, cd) with interpolation and a stall model.

    Parameters
    ----------
    alpha : array_like
        Angles of attack [rad], strictly increasing, at least 3 samples.
    cl, cd : array_like
        Lift and drag coefficients at ``alpha``; cd must be >= 0.
    name : str
        Label carried through outputs.
    stall_model : {"clamp", "flat-plate-blend"}
        Behaviour outside the sampled range.
    """

    def __init__(self, alpha, cl, cd, name="polar", stall_model="flat-plate-blend"):
        alpha = np.atleast_1d(np.asarray(alpha, dtype=float))
        cl = np.atleast_1d(np.asarray(cl, dtype=float))
        cd = np.atleast_1d(np.asarray(cd, dtype=float))
        if not (alpha.shape == cl.shape == cd.shape) or alpha.ndim != 1:
            raise PolarDataError("alpha, cl, cd must be 1-D arrays of equal length")
        if alpha.size < 3:
            raise PolarDataError(f"need at least 3 samples, got {alpha.size}")
        if not np.all(np.isfinite(alpha)) or not np.all(np.isfinite(cl)) or not np.all(np.isfinite(cd)):
            raise PolarDataError("polar samples must be finite")
        if np.any(np.diff(alpha) <= 0.0):
            raise PolarDataError("alpha samples must be strictly increasing")
        if np.any(cd < 0.0):
            raise PolarDataError("cd must be non-negative")
        if stall_model not in STALL_MODELS:
            raise PolarDataError(f"unknown stall model {stall_model!r}; choose from {STALL_MODELS}")
        self.alpha = alpha
        self.cl = cl
        self.cd = cd
        self.name = name
        self.stall_model = stall_model

    # -- properties ------------------------------------------------------

    @property
    def alpha_min(self):
        return float(self.alpha[0])

    @property
    def alpha_max(self):
        return float(self.alpha[-1])

    def covers_recommended_range(self):
        """True if the table spans at least +/-20 deg."""
        return self.alpha_min <= -RECOMMENDED_RANGE and self.alpha_max >= RECOMMENDED_RANGE

    # -- lookup ----------------------------------------------------------

    def lookup(self, alpha):
        """Interpolate (cl, cd, gamma) at angle(s) of attack [rad].

        gamma = atan2(cd, cl) is the sectional drag-to-lift angle.  Scalar
        input gives scalar floats; array input gives arrays of the same
        shape.  Total (not per-step) extrapolation behaviour is set by the
        stall model.
        """
        a = np.asarray(alpha, dtype=float)
        scalar = a.ndim == 0
        cl, cd = self.cl_cd(np.atleast_1d(a))
        gamma = np.arctan2(cd, cl)
        if scalar:
            return float(cl[0]), float(cd[0]), float(gamma[0])
        return cl, cd, gamma

    def cl_cd(self, alpha):
        """Like :meth:`lookup` but without the drag-to-lift angle; the
        fast path for solver inner loops (array in, arrays out)."""
        a = np.asarray(alpha, dtype=float)
        cl = np.interp(a, self.alpha, self.cl)   # clamps at the ends
        cd = np.interp(a, self.alpha, self.cd)
        if self.stall_model == "flat-plate-blend":
            below = a < self.alpha_min
            above = a > self.alpha_max
            if np.any(below) or np.any(above):
                cl_fp, cd_fp = flat_plate(a)
                # distance past the nearer table edge, 0 inside the table
                over = np.where(above, a - self.alpha_max,
                                np.where(below, self.alpha_min - a, 0.0))
                w = np.clip(over / BLEND_WIDTH, 0.0, 1.0)
                cl = (1.0 - w) * cl + w * cl_fp
                cd = (1.0 - w) * cd + w * cd_fp
        return cl, cd

    # -- constructors ----------------------------------------------------

    @classmethod
    def from_csv(cls, path, name=None, stall_model="flat-plate-blend"):
        """Load a ``alpha_deg,cl,cd`` CSV.  '#' starts a comment; blank
        lines are skipped; a header row is optional."""
        rows = []
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                parts = [p.strip() for p in line.replace("\t", ",").split(",") if p.strip()]
                if lineno == 1 or not rows:
                    # tolerate a single header row of column names
                    try:
                        vals = [float(p) for p in parts]
                    except ValueError:
                        if any(ch.isalpha() for ch in line):
                            continue
                        raise PolarFormatError(f"unparseable row {line!r}", line=lineno)
                else:
                    try:
                        vals = [float(p) for p in parts]
                    except ValueError:
                        raise PolarFormatError(f"unparseable row {line!r}", line=lineno)
                if len(vals) != 3:
                    raise PolarFormatError(
                        f"expected 3 columns (alpha_deg, cl, cd), got {len(vals)}", line=lineno)
                rows.append(vals)
        if len(rows) < 3:
            raise PolarDataError(f"{path}: need at least 3 data rows, got {len(rows)}")
        arr = np.asarray(rows, dtype=float)
        if name is None:
            name = str(path)
        return cls(np.radians(arr[:, 0]), arr[:, 1], arr[:, 2],
                   name=name, stall_model=stall_model)

    @classmethod
    def from_parametric(cls, spec, n_samples=101, stall_model="flat-plate-blend",
                        name="parametric"):
        """Tabulate a :class:`ParametricPolarSpec`.

        The sampled range is centred on alpha0 and extends past the stall
        angle by the blend width (at least +/-25 deg), so lookups inside
        the linear region reproduce the analytic values exactly.
        """
        if n_samples < 3:
            raise PolarDataError(f"n_samples must be >= 3, got {n_samples}")
        span = max(spec.alpha_stall + BLEND_WIDTH, math.radians(25.0))
        a = spec.alpha0 + np.linspace(-span, span, int(n_samples))
        cl = np.clip(spec.cl_alpha * (a - spec.alpha0), -spec.cl_max, spec.cl_max)
        cd = spec.cd0 + spec.cd2 * (a - spec.alpha0) ** 2
        return cls(a, cl, cd, name=name, stall_model=stall_model)

    @classmethod
    def bundled(cls, name, stall_model="flat-plate-blend"):
        """Load one of the packaged polars ("sc1095" or "naca0012")."""
        key = name.lower().replace("-", "").replace(" ", "")
        files = {"sc1095": "sc1095.csv", "naca0012": "naca0012.csv"}
        if key not in files:
            raise PolarDataError(f"no bundled polar {name!r}; available: {sorted(files)}")
        ref = resources.files("designkit.data").joinpath(files[key])
        with resources.as_file(ref) as path:
            polar = cls.from_csv(path, name=key, stall_model=stall_model)
        return polar

    def __repr__(self):
        return (f"AirfoilPolar({self.name!r}, {self.alpha.size} samples, "
                f"[{math.degrees(self.alpha_min):+.1f}, {math.degrees(self.alpha_max):+.1f}] deg, "
                f"stall={self.stall_model})")


# -- module-level operation surface -------------------------------------

def load_polar(path, fmt="csv", stall_model="flat-plate-blend"):
    """Load a polar table from file.  Only the CSV format is defined."""
    if fmt != "csv":
        raise PolarDataError(f"unsupported polar format {fmt!r}")
    return AirfoilPolar.from_csv(path, stall_model=stall_model)


def lookup(polar, alpha):
    """(cl, cd, gamma) of ``polar`` at angle(s) of attack [rad]."""
    return polar.lookup(alpha)


def from_parametric(spec, n_samples=101, stall_model="flat-plate-blend"):
    """Tabulated polar from an analytic description."""
    return AirfoilPolar.from_parametric(spec, n_samples=n_samples, stall_model=stall_model)
