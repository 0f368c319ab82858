import math

import pytest

from optocool.errors import DomainError
from optocool.params import (CONSTANTS, AtomCloudSpec, DriveSpec, EnvironmentSpec, MirrorSpec,
                             amplitude_from_power, optomech_coupling, power_from_amplitude,
                             rabi_frequency, thermal_occupation)

NU = 2 * math.pi * 32e3
MASS = 3510 * 240e-6 * 12e-6 * 0.66e-6


def test_amplitude_identity():
    # alpha^2 = P lambda / (c^2 hbar) for a drive at wavelength lambda
    lam, power = 780e-9, 10e-3
    omega0 = 2 * math.pi * CONSTANTS.c / lam
    expect = power * lam / (CONSTANTS.c**2 * CONSTANTS.hbar)
    assert amplitude_from_power(power, omega0) ** 2 == pytest.approx(expect, rel=1e-13)


def test_power_round_trip():
    omega0 = 2.4e15
    for p in (0.0, 1e-9, 3.3e-3, 12.0):
        assert power_from_amplitude(amplitude_from_power(p, omega0), omega0) == pytest.approx(p, rel=1e-14)


def test_coupling_matches_radiation_pressure_estimate():
    mirror = MirrorSpec(NU, MASS)
    lam, power = 780e-9, 10e-3
    drive = DriveSpec.from_power(2 * math.pi * CONSTANTS.c / lam, power)
    mu = optomech_coupling(drive, mirror)
    k = 2 * math.pi / lam
    assert mu**2 == pytest.approx(2 * k * power / (CONSTANTS.c * MASS * NU), rel=1e-12)
    assert mu**2 == pytest.approx(400, rel=0.01)


def test_q0_is_derived():
    m = MirrorSpec(NU, MASS)
    assert m.q0 == pytest.approx(math.sqrt(CONSTANTS.hbar / (2 * MASS * NU)))
    assert MirrorSpec(NU, 4 * MASS).q0 == pytest.approx(m.q0 / 2)


def test_env_rate():
    assert MirrorSpec(NU, MASS).env_rate == 0.0
    assert MirrorSpec(NU, MASS, 1.5e6).env_rate == pytest.approx(NU / 1.5e6)


def test_thermal_occupation():
    m = MirrorSpec(NU, MASS)
    assert thermal_occupation(10e-3, m) == pytest.approx(6511, rel=1e-3)
    assert thermal_occupation(0.0, m) == 0.0
    assert EnvironmentSpec(10e-3, m).n_thermal == thermal_occupation(10e-3, m)


def test_rabi_round_trip():
    d = DriveSpec.from_rabi(2.4e15, 5.0, 0.3, 0.1)
    assert rabi_frequency(d) == pytest.approx(5.0, rel=1e-14)
    assert d.loss == pytest.approx(0.4)


@pytest.mark.parametrize("build", [
    lambda: MirrorSpec(0.0, 1.0),
    lambda: MirrorSpec(1.0, -1.0),
    lambda: MirrorSpec(1.0, 1.0, 0.0),
    lambda: DriveSpec(1.0, -1.0),
    lambda: DriveSpec(1.0, 1.0, gamma=-0.1),
    lambda: DriveSpec.from_rabi(1.0, 1.0, 0.0),
    lambda: AtomCloudSpec(-1, 0.0, 0.0),
    lambda: AtomCloudSpec(1.5, 0.0, 0.0),
    lambda: AtomCloudSpec(3, -1.0, 0.0),
    lambda: amplitude_from_power(-1.0, 1.0),
    lambda: thermal_occupation(-1.0, MirrorSpec(1.0, 1.0)),
])
def test_domain_errors(build):
    with pytest.raises(DomainError):
        build()


def test_empty_cloud_allowed():
    cloud = AtomCloudSpec(0, 10.0, 0.0)
    assert cloud.tau == pytest.approx(20.0 / CONSTANTS.c)
