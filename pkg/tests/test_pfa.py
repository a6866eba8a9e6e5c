import math

import numpy as np
import pytest

from casimir_spheres import pfa
from casimir_spheres.constants import HBAR_C, K_B, ZETA_3, thermal_wavelength
from casimir_spheres.pfa import PfaPoint


def temperature_for_x(ell: float, x: float) -> float:
    return HBAR_C * x / (2.0 * math.pi * K_B * ell)


def test_li3_at_one():
    assert pfa.li3(1.0) == pytest.approx(ZETA_3, abs=1e-14)


def test_li_polylogarithms_selfconsistent():
    # Landen/reflection region must match the direct series region seamlessly
    for w in (0.5, 0.75, 0.819, 0.821, 0.9, 0.99):
        direct = sum(w**k / k**3 for k in range(1, 4000))
        assert pfa.li3(w) == pytest.approx(direct, rel=1e-13)
        direct2 = sum(w**k / k**2 for k in range(1, 4000))
        assert pfa.li2(w) == pytest.approx(direct2, rel=1e-12)


def test_plate_energy_zero_temperature():
    a = 1e-6
    assert pfa.plate_energy_density(a, 0.0) == pytest.approx(
        -HBAR_C * math.pi**2 / (720.0 * a**3), rel=1e-14)


def test_plate_energy_classical_limit():
    a = 1e-6
    T = 1e5
    assert pfa.plate_energy_density(a, T) == pytest.approx(
        -K_B * T * ZETA_3 / (8.0 * math.pi * a**2), rel=1e-12)


def test_plate_energy_scaling_at_t0():
    a = 3e-7
    assert pfa.plate_energy_density(2 * a, 0.0) == pytest.approx(
        pfa.plate_energy_density(a, 0.0) / 8.0, rel=1e-14)
    assert pfa.plate_energy_density(a, 120.0) < 0


def test_energy_sum_against_oracle(testdata):
    data = testdata("pfa_oracle.json")
    assert len(data["cases"]) == 20
    for case in data["cases"]:
        got = pfa.pfa_energy_x(case["x"])
        assert got == pytest.approx(float(case["value"]), rel=1e-12)


def test_energy_quantum_limit():
    # x -> 0: E -> -hbar c pi^3 R/(1440 ell^2); in x-units x*G(x) -> pi^4/180
    ratio = 1e-4 * pfa.pfa_energy_x(1e-4) / (math.pi**4 / 180.0)
    assert abs(ratio - 1.0) <= 1e-6


def test_energy_classical_limit():
    assert pfa.pfa_energy_x(50.0) == pytest.approx(0.5 * ZETA_3, rel=1e-10)


def test_energy_sum_dimensional_branches():
    R, ell = 1e-6, 1e-9
    T = temperature_for_x(ell, 50.0)
    point = PfaPoint(ell=ell, R=R, T=T)
    assert pfa.pfa_energy_sum(point) == pytest.approx(
        pfa.pfa_classical_limit(ell, R, T), rel=1e-10)
    assert pfa.pfa_energy_sum(PfaPoint(ell=ell, R=R, T=0.0)) == \
        pfa.pfa_quantum_limit(ell, R)


def test_monotonic_in_temperature():
    R, ell = 1e-6, 1e-8
    vals = []
    for x in (0.1, 0.3, 1.0, 3.0, 10.0):
        point = PfaPoint(ell=ell, R=R, T=temperature_for_x(ell, x))
        vals.append(pfa.pfa_energy_sum(point))
    assert all(b < a for a, b in zip(vals, vals[1:]))  # grows in magnitude


def test_finite_R_integral_converges_to_sum():
    R = 1e-6
    T = 300.0
    ell = 1e-4 * R
    full = pfa.pfa_finite_R_integral(ell, R, T)
    short = pfa.pfa_energy_sum(PfaPoint(ell=ell, R=R, T=T))
    assert full == pytest.approx(short, rel=1e-3)


def test_finite_R_integral_zero_T_against_quantum_limit():
    R = 1e-6
    ell = 1e-4 * R
    assert pfa.pfa_finite_R_integral(ell, R, 0.0) == pytest.approx(
        pfa.pfa_quantum_limit(ell, R), rel=1e-3)


def test_finite_R_reduction_at_moderate_gap():
    R = 1e-6
    T = 300.0
    ell = 0.5 * R
    full = pfa.pfa_finite_R_integral(ell, R, T)
    short = pfa.pfa_energy_sum(PfaPoint(ell=ell, R=R, T=T))
    assert abs(full) < abs(short)


def test_integrand_vanishes_at_equator():
    # the (1 - t) weight kills the contribution at t = 1
    R, ell, T = 1e-6, 1e-8, 100.0
    val = (1.0 - 1.0) * pfa.plate_energy_density(ell + 2 * R, T)
    assert val == 0.0


def test_entropy_positive_on_grid():
    xs = np.geomspace(1e-3, 100.0, 1000)
    vals = np.array([pfa.pfa_entropy_x(x) for x in xs])
    assert np.all(vals >= 0.0)


def test_entropy_low_T_slope():
    # S ~ (k_B pi^3 R / 36)(k_B T/hbar c): adimensionally s_x -> (pi^2/18) x
    slope = pfa.pfa_entropy_x(1e-4) / 1e-4
    assert slope == pytest.approx(math.pi**2 / 18.0, rel=1e-3)


def test_entropy_classical_value():
    R, ell = 1e-6, 1e-8
    assert pfa.pfa_entropy_x(60.0) == pytest.approx(0.5 * ZETA_3, rel=1e-12)
    point = PfaPoint(ell=ell, R=R, T=temperature_for_x(ell, 60.0))
    assert pfa.pfa_entropy(point) == pytest.approx(
        pfa.pfa_entropy_classical(ell, R), rel=1e-10)


def test_thermodynamic_consistency():
    R, ell = 1e-6, 5e-8
    T = 300.0
    h = 1e-4 * T
    d1 = (pfa.pfa_energy_sum(PfaPoint(ell=ell, R=R, T=T + h))
          - pfa.pfa_energy_sum(PfaPoint(ell=ell, R=R, T=T - h))) / (2 * h)
    d2 = (pfa.pfa_energy_sum(PfaPoint(ell=ell, R=R, T=T + 0.5 * h))
          - pfa.pfa_energy_sum(PfaPoint(ell=ell, R=R, T=T - 0.5 * h))) / h
    s_fd = -(4 * d2 - d1) / 3.0
    assert pfa.pfa_entropy(PfaPoint(ell=ell, R=R, T=T)) == \
        pytest.approx(s_fd, rel=1e-8)
    hl = 1e-5 * ell
    d1 = (pfa.pfa_energy_sum(PfaPoint(ell=ell + hl, R=R, T=T))
          - pfa.pfa_energy_sum(PfaPoint(ell=ell - hl, R=R, T=T))) / (2 * hl)
    d2 = (pfa.pfa_energy_sum(PfaPoint(ell=ell + 0.5 * hl, R=R, T=T))
          - pfa.pfa_energy_sum(PfaPoint(ell=ell - 0.5 * hl, R=R, T=T))) / hl
    f_fd = -(4 * d2 - d1) / 3.0
    assert pfa.pfa_force(PfaPoint(ell=ell, R=R, T=T)) == \
        pytest.approx(f_fd, rel=1e-8)


def test_force_negative_everywhere():
    R, ell = 1e-6, 1e-8
    for x in np.geomspace(1e-3, 50, 40):
        point = PfaPoint(ell=ell, R=R, T=temperature_for_x(ell, x))
        assert pfa.pfa_force(point) < 0
    assert pfa.pfa_force(PfaPoint(ell=ell, R=R, T=0.0)) < 0


def test_point_validation():
    with pytest.raises(ValueError):
        PfaPoint(ell=-1e-9, R=1e-6, T=1.0)
    with pytest.raises(ValueError):
        PfaPoint(ell=1e-9, R=1e-6, T=-1.0)
