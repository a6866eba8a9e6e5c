r"""Closed-form large-separation thermodynamics.

When both spheres are far apart (R << d) the free energy is dominated by
the dipole channel and the Matsubara sum can be done in closed form.  With
``w = e^{-2z}`` and ``z = d / lambda_T``:

.. math::
    E_{ad}(z) = -\frac{z\,\mathcal N(z, w)}{4 (1 - w)^5}, \qquad
    \mathcal N = \sum_{j=0}^{5} w^j\, n_j(z),

where the ``n_j`` are the quartic polynomials tabulated below.  The
adimensional entropy and force follow from exact identities,
``S_ad = -dE_ad/dz`` and ``F_ad = 7 E_ad - z dE_ad/dz``.

Near z = 0 the (1-w)^{-5} pole cancels against a fifth-order zero of the
numerator; the closed form then loses all digits, so a frozen Taylor
series (generated symbolically once, verified against high-precision
evaluation in the tests) serves z below the crossover.  The expansion is
even: E_ad = -143/8 - z^6/108 + (143/12600) z^8 - ..., which makes the
low-temperature entropy start at z^5/18.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .errors import BracketingFailureError

__all__ = ["e_ad", "s_ad", "f_ad", "e_low_T", "e_high_T", "s_low_T",
           "s_high_T", "f_low_T", "f_high_T", "find_entropy_zeros",
           "find_e_ratio_max", "E_AD_0"]

# numerator polynomials n_j(z), j = 0..5 (coefficients of z^0..z^4)
_NPOLY = np.array([
    [15.0, 0.0, 0.0, 0.0, 0.0],
    [-45.0, 60.0, 58.0, 36.0, 18.0],
    [30.0, -180.0, -58.0, 108.0, 198.0],
    [30.0, 180.0, -58.0, -108.0, 198.0],
    [-45.0, -60.0, 58.0, -36.0, 18.0],
    [15.0, 0.0, 0.0, 0.0, 0.0],
])
# dn_j/dz
_NPOLY_D = _NPOLY[:, 1:] * np.arange(1, 5)[None, :]
# d^2 n_j / dz^2
_NPOLY_D2 = _NPOLY_D[:, 1:] * np.arange(1, 4)[None, :]

# Taylor coefficients of E_ad around z = 0 (exact rationals, generated
# symbolically from the closed form; only even orders appear).
_SERIES = {
    0: -143.0 / 8.0,
    6: -1.0 / 108.0,
    8: 143.0 / 12600.0,
    10: -323.0 / 62370.0,
    12: 15893.0 / 10216206.0,
    14: -899.0 / 2432430.0,
    16: 133829.0 / 1772199000.0,
    18: -77337521.0 / 5568470782875.0,
    20: 8206717.0 / 3472402415625.0,
    22: -4117199.0 / 10866955103550.0,
    24: 850674363509.0 / 14685059779182292500.0,
    26: -44081377.0 / 5172252669478125.0,
    28: 17584779501901.0 / 14478298978719904453125.0,
    30: -136130292160879.0 / 807889083012570668484375.0,
}
_SERIES_ORDERS = np.array(sorted(_SERIES))
_SERIES_COEF = np.array([_SERIES[k] for k in _SERIES_ORDERS])

E_AD_0 = -143.0 / 8.0

# crossover between series and closed form; the series truncation error at
# z = 0.6 is ~(0.6/pi)^32 and the closed form has lost ~5 digits there
_Z_SWITCH = 0.6


def _poly_eval(coeffs: np.ndarray, z: np.ndarray) -> np.ndarray:
    out = np.zeros_like(z)
    for c in coeffs[::-1]:
        out = out * z + c
    return out


def _closed_form(z: np.ndarray, order: int):
    """E_ad and its first ``order`` z-derivatives from the w-form (z > 0).

    With G = N/(4(1-w)^5) and w' = -2w:
    N'  = N_z - 2 M1,                     M1 = sum_j j w^j n_j,
    N'' = N_zz - 4 M1z + 4 M2,            M2 = sum_j j^2 w^j n_j,
    G'  = [N' - 10 w N/(1-w)] / (4(1-w)^5),
    G'' = [N'' - 20 w N'/(1-w) + 20 w N/(1-w) + 120 w^2 N/(1-w)^2]
          / (4(1-w)^5),
    and E = -zG, E' = -G - zG', E'' = -2G' - zG''.
    """
    w = np.exp(-2.0 * z)
    one_w = -np.expm1(-2.0 * z)
    wj = [w**j for j in range(6)]
    n_val = sum(wj[j] * _poly_eval(_NPOLY[j], z) for j in range(6))
    v5 = 1.0 / (4.0 * one_w**5)
    g = n_val * v5
    e = -z * g
    if order == 0:
        return e
    n_z = sum(wj[j] * _poly_eval(_NPOLY_D[j], z) for j in range(6))
    m1 = sum(j * wj[j] * _poly_eval(_NPOLY[j], z) for j in range(1, 6))
    n_p = n_z - 2.0 * m1
    g_p = (n_p - 10.0 * w * n_val / one_w) * v5
    e_p = -g - z * g_p
    if order == 1:
        return e, e_p
    n_zz = sum(wj[j] * _poly_eval(_NPOLY_D2[j], z) for j in range(6))
    m1z = sum(j * wj[j] * _poly_eval(_NPOLY_D[j], z) for j in range(1, 6))
    m2 = sum(j * j * wj[j] * _poly_eval(_NPOLY[j], z) for j in range(1, 6))
    n_pp = n_zz - 4.0 * m1z + 4.0 * m2
    g_pp = (n_pp - 20.0 * w * n_p / one_w + 20.0 * w * n_val / one_w
            + 120.0 * w * w * n_val / one_w**2) * v5
    e_pp = -2.0 * g_p - z * g_pp
    return e, e_p, e_pp


def _series(z: np.ndarray, order: int):
    """Series evaluation of E_ad and derivatives for small z."""
    zz = np.asarray(z, dtype=float)
    e = np.zeros_like(zz)
    e1 = np.zeros_like(zz)
    e2 = np.zeros_like(zz)
    for k, c in zip(_SERIES_ORDERS, _SERIES_COEF):
        zk = zz**int(k)
        e += c * zk
        if k >= 1:
            e1 += c * k * zz**int(k - 1)
        if k >= 2:
            e2 += c * k * (k - 1) * zz**int(k - 2)
    if order == 0:
        return e
    if order == 1:
        return e, e1
    return e, e1, e2


def _dispatch(z, order: int):
    z = np.asarray(z, dtype=float)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    if np.any(z < 0):
        raise ValueError("z must be >= 0")
    small = z < _Z_SWITCH
    outs = [np.empty_like(z) for _ in range(order + 1)]
    if np.any(small):
        res = _series(z[small], order)
        res = (res,) if order == 0 else res
        for o, arr in zip(outs, res):
            o[small] = arr
    if np.any(~small):
        res = _closed_form(z[~small], order)
        res = (res,) if order == 0 else res
        for o, arr in zip(outs, res):
            o[~small] = arr
    if scalar:
        outs = [float(o[0]) for o in outs]
    return outs[0] if order == 0 else tuple(outs)


def e_ad(z):
    """Adimensional large-separation free energy E_ad(z) = 2 pi d^7 E/(hbar c R^6).

    Valid for any z >= 0; E_ad(0) = -143/8 and E_ad -> -(15/4) z as z -> inf.
    """
    return _dispatch(z, 0)


def s_ad(z):
    """Adimensional entropy S_ad(z) = -dE_ad/dz (analytic derivative)."""
    _, e1 = _dispatch(z, 1)
    return -e1


def s_ad_prime(z):
    """dS_ad/dz, used for force nonmonotonicity scans."""
    _, _, e2 = _dispatch(z, 2)
    return -e2


def f_ad(z):
    """Adimensional force F_ad(z) = 7 E_ad(z) - z dE_ad/dz; negative for all z."""
    e, e1 = _dispatch(z, 1)
    return 7.0 * e - z * e1


def f_ad_prime(z):
    """dF_ad/dz = z S_ad'(z) - 6 S_ad(z) = 6 E_ad' - z E_ad''; negative
    values mark the window where the force decreases with temperature at
    fixed separation."""
    _, e1, e2 = _dispatch(z, 2)
    return 6.0 * e1 - z * e2


def e_low_T(z):
    """Quantum-side expansion: -143/8 - z^6/108 + (143/12600) z^8."""
    zz = np.asarray(z, dtype=float)
    out = E_AD_0 - zz**6 / 108.0 + (143.0 / 12600.0) * zz**8
    return float(out) if out.ndim == 0 else out


def e_high_T(z):
    """Classical-side form: -(15/4) z - (z/2)(15+30z+29z^2+18z^3+9z^4) e^{-2z}."""
    zz = np.asarray(z, dtype=float)
    poly = 15.0 + 30.0 * zz + 29.0 * zz**2 + 18.0 * zz**3 + 9.0 * zz**4
    out = -3.75 * zz - 0.5 * zz * poly * np.exp(-2.0 * zz)
    return float(out) if out.ndim == 0 else out


def s_low_T(z):
    """Low-temperature entropy z^5/18 - (1144/12600) z^7."""
    zz = np.asarray(z, dtype=float)
    out = zz**5 / 18.0 - (1144.0 / 12600.0) * zz**7
    return float(out) if out.ndim == 0 else out


def s_high_T(z):
    """Classical-side entropy 15/4 + (15+30z+27z^2+14z^3+9z^4-18z^5) e^{-2z}/2."""
    zz = np.asarray(z, dtype=float)
    poly = 15.0 + 30.0 * zz + 27.0 * zz**2 + 14.0 * zz**3 + 9.0 * zz**4 - 18.0 * zz**5
    out = 3.75 + 0.5 * poly * np.exp(-2.0 * zz)
    return float(out) if out.ndim == 0 else out


def f_low_T(z):
    """Quantum-side force 7 E_ad(0) + O(z^6) terms of the expansion."""
    zz = np.asarray(z, dtype=float)
    out = 7.0 * E_AD_0 - zz**6 / 108.0 + (143.0 / 12600.0) * zz**8 \
        - zz * (-6.0 * zz**5 / 108.0 + 8.0 * (143.0 / 12600.0) * zz**7)
    return float(out) if out.ndim == 0 else out


def f_high_T(z):
    """Classical-side force 7 e_high + z s_high."""
    return 7.0 * e_high_T(z) + z * s_high_T(z)


def find_entropy_zeros(z_lo: float = 1e-3, z_hi: float = 20.0) -> tuple[float, float]:
    """The two positive zeros of S_ad (three zeros counting the origin).

    Located by sign scanning plus Brent refinement; raises
    BracketingFailure if the sign pattern (+, -, +) is absent.
    """
    grid = np.geomspace(z_lo, z_hi, 4000)
    s = s_ad(grid)
    sign_changes = np.nonzero(np.diff(np.sign(s)) != 0)[0]
    if len(sign_changes) != 2:
        raise BracketingFailureError(
            f"expected exactly two sign changes of S_ad, found {len(sign_changes)}")
    roots = []
    for i in sign_changes:
        roots.append(brentq(lambda x: s_ad(x), grid[i], grid[i + 1],
                            xtol=1e-12, rtol=8.9e-16))
    return roots[0], roots[1]


def find_e_ratio_max(z_lo: float = 0.5, z_hi: float = 1.5) -> tuple[float, float]:
    """Location and height of the local maximum of E/E_0 = E_ad(z)/E_ad(0).

    The ratio exceeds 1 by about 1e-4 slightly above z = 1; the maximum
    coincides with the first entropy zero.
    """
    res = minimize_scalar(lambda x: -e_ad(x) / E_AD_0, bounds=(z_lo, z_hi),
                          method="bounded",
                          options={"xatol": 1e-12})
    if not res.success:
        raise BracketingFailureError("E/E0 maximisation failed")
    z_star = float(res.x)
    height = float(e_ad(z_star) / E_AD_0)
    if not z_lo < z_star < z_hi:
        raise BracketingFailureError("E/E0 maximum not interior to the bracket")
    return z_star, height
