import math

import numpy as np
import pytest

from casimir_spheres import specfun


def test_closed_form_examples_l0():
    pair = specfun.scaled_bessel_half(0, 1.0)
    assert pair.i_scaled == pytest.approx(
        math.sqrt(2.0 / math.pi) * math.sinh(1.0) * math.exp(-1.0), rel=1e-14)
    assert pair.k_scaled == pytest.approx(math.sqrt(math.pi / 2.0), rel=1e-14)


def test_small_argument_leading_order_l1():
    # I_{3/2}(x) e^{-x} / x^{3/2} -> sqrt(2/pi)/3
    for x in (1e-6, 1e-5):
        pair = specfun.scaled_bessel_half(1, x)
        assert pair.i_scaled / x**1.5 == pytest.approx(
            math.sqrt(2.0 / math.pi) / 3.0, rel=1e-4)


def test_oracle_grid(testdata):
    """2000-case golden comparison at relative 1e-12 for both entries."""
    data = testdata("bessel_oracle.json")
    assert len(data["cases"]) == 2100
    worst = 0.0
    for case in data["cases"]:
        pair = specfun.scaled_bessel_half(case["l"], case["x"])
        worst = max(worst,
                    abs(pair.i_scaled / float(case["i_scaled"]) - 1.0),
                    abs(pair.k_scaled / float(case["k_scaled"]) - 1.0))
    assert worst <= 1e-12


def test_wronskian_identity():
    for x in (1e-4, 1e-2, 0.7, 5.0, 42.0):
        i, k = specfun.scaled_bessel_ladder(20, x)
        resid = np.abs((i[:-1] * k[1:] + i[1:] * k[:-1]) * x - 1.0)
        assert np.max(resid) <= 1e-12


def test_three_term_recurrences():
    for x in (1e-3, 0.3, 2.0, 30.0):
        i, k = specfun.scaled_bessel_ladder(21, x)
        ls = np.arange(1, 21)
        # I_{nu-1} - I_{nu+1} = (2 nu / x) I_nu with nu = l + 1/2
        res_i = np.abs(i[ls - 1] - i[ls + 1] - (2 * ls + 1) / x * i[ls])
        res_k = np.abs(k[ls + 1] - k[ls - 1] - (2 * ls + 1) / x * k[ls])
        scale_i = np.maximum(np.abs(i[ls - 1]), 1e-300)
        scale_k = np.abs(k[ls + 1])
        assert np.max(res_i / scale_i) <= 1e-11
        assert np.max(res_k / scale_k) <= 1e-11


def test_k_increasing_in_order():
    for x in (1e-3, 1.0, 10.0):
        _, k = specfun.scaled_bessel_ladder(25, x)
        assert np.all(np.diff(k) > 0)


def test_positive_entries():
    for l in (0, 3, 17):
        for x in (1e-4, 1.0, 50.0):
            pair = specfun.scaled_bessel_half(l, x)
            assert pair.i_scaled > 0 and pair.k_scaled > 0
            assert math.isfinite(pair.i_scaled) and math.isfinite(pair.k_scaled)


def test_domain_errors():
    with pytest.raises(ValueError):
        specfun.scaled_bessel_half(2, 0.0)
    with pytest.raises(ValueError):
        specfun.scaled_bessel_half(2, -1.0)
    with pytest.raises(OverflowError):
        specfun.scaled_bessel_half(201, 1.0)
    with pytest.raises(ValueError):
        specfun.bessel_ratio_mm(1, -0.5)


def test_ratio_small_argument_law():
    # I_{3/2}/K_{3/2} -> 2 x^3 / (3 pi), i.e. T_MM -> -x^3/3
    for x in (1e-3, 1e-2):
        ratio = specfun.bessel_ratio_mm(1, x)
        assert ratio == pytest.approx(2.0 * x**3 / (3.0 * math.pi), rel=2e-3)


def test_ratio_monotone_in_x():
    xs = np.geomspace(1e-3, 20.0, 40)
    for l in (0, 1, 4):
        vals = np.array([specfun.bessel_ratio_mm(l, x) for x in xs])
        assert np.all(vals > 0)
        assert np.all(np.diff(vals) > 0)


def test_frozen_value_l5():
    # precomputed with the independent finite closed-form sums (30 digits)
    pair = specfun.scaled_bessel_half(5, 2.5)
    assert pair.i_scaled == pytest.approx(0.001232634316935735648, rel=1e-13)
    assert pair.k_scaled == pytest.approx(67.018913403966220793, rel=1e-13)


def test_frozen_ratio_l2():
    assert specfun.bessel_ratio_mm(2, 4.0) == pytest.approx(
        213.9422960176033036, rel=1e-12)


def test_khat_ladder_against_direct():
    # khat_p = (2/pi) x^{p+1} e^x k_p(x) via half-integer K ladder
    for x in (0.05, 1.3, 9.0):
        lk = specfun.log_khat_spherical_ladder(12, x)
        _, khalf = specfun.scaled_bessel_ladder(12, x)
        k_sph_scaled = math.sqrt(math.pi / (2 * x)) * khalf  # k_p e^{+x}
        ps = np.arange(13)
        direct = np.log(2.0 / math.pi * x**(ps + 1) * k_sph_scaled)
        assert np.max(np.abs(lk - direct)) < 1e-12
