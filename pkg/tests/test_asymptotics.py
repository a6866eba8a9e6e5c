import math

import numpy as np
import pytest

from casimir_spheres import asymptotics as asy


def test_zero_temperature_value():
    assert asy.e_ad(0.0) == pytest.approx(-143.0 / 8.0, rel=1e-15)
    assert asy.e_low_T(0.0) == -143.0 / 8.0


def test_classical_slope():
    for z in (1e3, 1e4):
        assert asy.e_ad(z) / z == pytest.approx(-15.0 / 4.0, rel=1e-10)


def test_series_closed_form_seam():
    # both evaluations agree to near machine precision across the crossover
    for z in (0.55, 0.59, 0.61, 0.65):
        series = asy._series(np.array([z]), 0)[0]
        closed = asy._closed_form(np.array([z]), 0)[0]
        assert series == pytest.approx(closed, rel=5e-13)


def test_energy_ratio_local_maximum():
    z_star, height = asy.find_e_ratio_max()
    assert z_star == pytest.approx(1.0388, abs=1e-3)
    assert 1.0 < z_star < 1.1
    assert (height - 1.0) == pytest.approx(1e-4, rel=0.2)


def test_entropy_zero_at_origin_and_t5_law():
    assert asy.s_ad(0.0) == 0.0
    for z in (1e-3, 3e-3):
        assert asy.s_ad(z) / z**5 == pytest.approx(1.0 / 18.0, rel=1e-4)


def test_two_entropy_zeros():
    z1, z2 = asy.find_entropy_zeros()
    assert 1.0 < z1 < 1.1
    assert 3.0 < z2 < 3.5
    assert asy.s_ad(0.5 * (z1 + z2)) < 0
    assert asy.s_ad(0.5 * z1) > 0
    assert asy.s_ad(2.0 * z2) > 0


def test_maximum_between_entropy_zeros():
    z1, z2 = asy.find_entropy_zeros()
    z_star, _ = asy.find_e_ratio_max()
    assert z1 - 1e-6 <= z_star <= z2 + 1e-6


def test_derivative_identity_against_finite_differences():
    # rel 1e-8 where S is resolvable; an absolute floor covers the
    # differencing noise near the entropy zeros and the deep low-T tail
    zs = np.geomspace(0.01, 50.0, 60)
    for z in zs:
        h = 1e-3 * max(z, 0.5)
        d1 = (asy.e_ad(z + h) - asy.e_ad(z - h)) / (2 * h)
        d2 = (asy.e_ad(z + 0.5 * h) - asy.e_ad(z - 0.5 * h)) / h
        fd = (4 * d2 - d1) / 3.0
        assert abs(float(asy.s_ad(z)) + fd) <= 1e-8 * max(abs(fd), 1e-2)


def test_force_values_and_identity():
    assert asy.f_ad(0.0) == pytest.approx(-125.125, rel=1e-14)
    for z in (1e3, 5e3):
        assert asy.f_ad(z) / z == pytest.approx(-45.0 / 2.0, rel=1e-9)
    zs = np.linspace(0.0, 100.0, 3000)
    assert np.all(asy.f_ad(zs) < 0)


def test_force_equals_dimensional_derivative():
    """F_ad = 7 E_ad - z E_ad' must reproduce -dE/dd at fixed T."""
    from casimir_spheres.constants import HBAR_C
    from casimir_spheres.geometry import Geometry, ThermalPoint

    R = 1e-7
    d0 = 1e-5
    T = 30.0

    def energy(d):
        z = ThermalPoint.from_temperature(T, Geometry(R=R, d=d)).z
        return HBAR_C * R**6 / (2 * math.pi * d**7) * float(asy.e_ad(z))

    h = 1e-5 * d0
    d1 = (energy(d0 + h) - energy(d0 - h)) / (2 * h)
    d2 = (energy(d0 + 0.5 * h) - energy(d0 - 0.5 * h)) / h
    force_fd = -(4 * d2 - d1) / 3.0
    z0 = ThermalPoint.from_temperature(T, Geometry(R=R, d=d0)).z
    force_ad = float(asy.f_ad(z0)) * HBAR_C * R**6 / (2 * math.pi * d0**8)
    assert force_ad == pytest.approx(force_fd, rel=1e-6)


def test_low_T_expansion_order():
    """e_ad - e_low_T = O(z^10): observed order >= 9 between z=0.05 and 0.1."""
    d1 = abs(asy.e_ad(0.1) - asy.e_low_T(0.1))
    d2 = abs(asy.e_ad(0.05) - asy.e_low_T(0.05))
    order = math.log2(d1 / max(d2, 1e-300))
    assert order >= 9.0


def test_high_T_expansion_residual():
    z = 20.0
    resid = abs(asy.e_ad(z) - asy.e_high_T(z))
    assert resid <= 1e-12 * abs(asy.e_ad(z))


def test_expansions_bound_from_correct_sides():
    # low-T form overshoots |E| slightly below the crossover, classical
    # undershoots above; checked empirically on validity windows
    z_lo = np.linspace(0.05, 0.8, 20)
    assert np.all(asy.e_ad(z_lo) <= asy.e_low_T(z_lo) + 1e-12)
    z_hi = np.linspace(3.0, 10.0, 20)
    assert np.all(asy.e_ad(z_hi) <= asy.e_high_T(z_hi) + 1e-12)


def test_entropy_high_T_form_consistency():
    for z in (1.0, 2.5, 6.0):
        h = 1e-6
        fd = -(asy.e_high_T(z + h) - asy.e_high_T(z - h)) / (2 * h)
        assert asy.s_high_T(z) == pytest.approx(fd, rel=1e-7)


def test_low_T_entropy_terms():
    # S = z^5/18 - (1144/12600) z^7 + ...
    z = 0.05
    assert asy.s_low_T(z) == pytest.approx(z**5 / 18.0 - 1144.0 / 12600.0 * z**7,
                                           rel=1e-14)


def test_negative_z_rejected():
    with pytest.raises(ValueError):
        asy.e_ad(-0.1)
