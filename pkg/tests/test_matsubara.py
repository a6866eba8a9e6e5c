import math

import numpy as np
import pytest

from casimir_spheres import asymptotics as asy
from casimir_spheres import matsubara as mats
from casimir_spheres.constants import HBAR_C, K_B
from casimir_spheres.errors import NonConvergenceError
from casimir_spheres.geometry import Geometry, ThermalPoint


def test_geometry_invariants():
    geo = Geometry.from_ratio(0.25, d=2.0)
    assert geo.R == pytest.approx(0.5)
    assert geo.ell == pytest.approx(1.0)
    with pytest.raises(ValueError):
        Geometry(R=1.0, d=1.5)
    with pytest.raises(ValueError):
        Geometry.from_ratio(0.6)


def test_thermal_point_roundtrip():
    geo = Geometry.from_ratio(0.1, d=1e-6)
    tp = ThermalPoint.from_z(2.0, geo)
    assert tp.z == pytest.approx(2.0)
    assert geo.d / tp.lambda_T == pytest.approx(2.0, rel=1e-12)
    t0 = ThermalPoint.from_temperature(0.0, geo)
    assert t0.z == 0.0 and math.isinf(t0.lambda_T)


def test_classical_limit_coefficient():
    """E(z=50)/(-15 kT R^6/4 d^6) -> 1 at r = 0.01 (within 1 percent)."""
    ratio = mats.free_energy_ad(0.01, 50.0, tol=1e-9) / (-15.0 * 50.0 / 4.0)
    assert 0.99 <= ratio <= 1.01


def test_closed_form_agreement_at_unit_z():
    val = mats.free_energy_ad(0.01, 1.0, tol=1e-9)
    assert val == pytest.approx(float(asy.e_ad(1.0)), rel=1e-3)


def test_r6_scaling_of_energy():
    e1 = mats.free_energy_ad(0.005, 1.0, tol=1e-8)
    e2 = mats.free_energy_ad(0.01, 1.0, tol=1e-8)
    assert e2 / e1 == pytest.approx(1.0, rel=2e-3)  # E_ad is r-free at leading order


def test_zero_t_energy_coefficient():
    ratio = mats.zero_T_energy_ad(0.01, tol=1e-7) / (-143.0 / 8.0)
    assert 0.99 <= ratio <= 1.01


def test_zero_t_stronger_binding_at_close_separation():
    """|E| at r = 0.45 exceeds the dipole asymptotic prediction."""
    e45 = mats.zero_T_energy_ad(0.45, tol=1e-6)
    assert e45 < -143.0 / 8.0


def test_t_continuity_to_zero_temperature():
    lhs = mats.free_energy_ad(0.01, 0.01, tol=1e-9) / mats.zero_T_energy_ad(0.01, tol=1e-8)
    rhs = asy.e_low_T(0.01) / asy.e_low_T(0.0)
    assert abs(lhs - rhs) < 1e-4


def test_static_term_properties():
    geo = Geometry.from_ratio(0.01)
    st = mats.static_term(geo)
    assert st < 0
    assert st == pytest.approx(-7.5 * 0.01**6, rel=1e-3)


def test_static_term_node_ladder_consistency():
    """Extrapolations from two different node ladders agree tightly."""
    geo = Geometry.from_ratio(0.45)
    a = mats.static_term(geo, tol=1e-7)
    b = mats.static_term(geo, tol=1e-7, nodes=(1e-4, 5e-5, 2.5e-5))
    assert a == pytest.approx(b, rel=1e-6)


def test_high_temperature_only_static_survives():
    geo = Geometry.from_ratio(0.01)
    res = mats.free_energy(geo, ThermalPoint.from_z(50.0, geo), tol=1e-9)
    st = mats.static_term(geo)
    assert abs(res.energy / res.per_term[0] - 1.0) < 1e-6
    assert res.per_term[0] == pytest.approx(0.5 * ThermalPoint.from_z(50.0, geo).kT * st)


def test_per_term_negativity_and_tail():
    geo = Geometry.from_ratio(0.05)
    res = mats.free_energy(geo, ThermalPoint.from_z(1.0, geo), tol=1e-8)
    assert res.energy < 0
    assert all(t < 0 for t in res.per_term)
    assert res.tail_bound >= 0
    assert res.method == "matsubara_sum"
    assert res.n_terms_used == len(res.per_term)


def test_zero_temperature_dispatch():
    geo = Geometry.from_ratio(0.05, d=1e-6)
    res = mats.free_energy(geo, ThermalPoint.from_temperature(0.0, geo), tol=1e-6)
    assert res.method == "zero_T_quadrature"
    assert res.energy < 0


def test_free_energy_dimensional_consistency():
    """E in joules equals the adimensional value times hbar c R^6/(2 pi d^7)."""
    geo = Geometry.from_ratio(0.02, d=1e-6)
    tp = ThermalPoint.from_z(1.0, geo)
    res = mats.free_energy(geo, tp, tol=1e-8)
    conv = HBAR_C * geo.R**6 / (2.0 * math.pi * geo.d**7)
    assert res.energy / conv == pytest.approx(
        mats.free_energy_ad(0.02, 1.0, tol=1e-8), rel=1e-9)


@pytest.fixture(scope="module")
def table():
    return mats.DeterminantTable(0.02, tol=1e-9)


class TestDeterminantTable:

    def test_matches_direct_sum(self, table):
        for z in (0.1, 1.0, 5.0):
            direct = mats.free_energy_ad(0.02, z, tol=1e-9)
            assert table.e_ad(z) == pytest.approx(direct, rel=3e-8)

    def test_entropy_matches_asymptotics(self, table):
        # physical r^2-scale multipole corrections shift the entropy by a
        # few times 1e-3 of the classical scale at r = 0.02
        for z in (0.5, 1.0, 2.0, 5.0):
            assert table.s_ad(z) == pytest.approx(float(asy.s_ad(z)),
                                                  rel=2e-2, abs=6e-3)

    def test_zero_t_integral(self, table):
        quad = mats.zero_T_energy_ad(0.02, tol=1e-7)
        assert table.e_ad_zero_T() == pytest.approx(quad, rel=1e-5)

    def test_classical_anchor(self, table):
        s_cl = -table.g0 / (2.0 * 0.02**6)
        assert table.s_ad(30.0) == pytest.approx(s_cl, rel=1e-9)
