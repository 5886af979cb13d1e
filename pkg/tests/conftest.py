"""Shared fixtures: bundled polars and the reference rotors.

Session-scoped because polar loading hits the filesystem and the
geometry constructors validate on every call; everything here is
immutable from the tests' point of view.
"""

import pytest

from designkit import presets
from designkit.airfoil import AirfoilPolar, ParametricPolarSpec


@pytest.fixture(scope="session")
def sc1095():
    return AirfoilPolar.bundled("sc1095")


@pytest.fixture(scope="session")
def naca0012():
    return AirfoilPolar.bundled("naca0012")


@pytest.fixture(scope="session")
def baseline_rotor():
    return presets.baseline_rotor()


@pytest.fixture(scope="session")
def rpm_study_rotor():
    return presets.rpm_study_rotor()


@pytest.fixture(scope="session")
def final_rotor():
    return presets.final_rotor()


@pytest.fixture(scope="session")
def linear_polar():
    """Clean analytic polar for closed-form oracles: linear lift, no drag."""
    spec = ParametricPolarSpec(cl_alpha=5.7, alpha0=0.0, cd0=0.0, cd2=0.0,
                               cl_max=2.0, alpha_stall=0.5)
    return AirfoilPolar.from_parametric(spec, n_samples=201)
