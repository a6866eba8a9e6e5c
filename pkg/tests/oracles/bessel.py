"""Half-integer modified Bessel functions from the finite closed-form sums.

For integer l >= 0:

    K_{l+1/2}(x) = sqrt(pi/(2x)) e^{-x} sum_{k=0}^{l} c_k(l) / (2x)^k,
    I_{l+1/2}(x) = (1/sqrt(2 pi x)) [ e^{x} sum_k (-1)^k c_k(l)/(2x)^k
                   + (-1)^{l+1} e^{-x} sum_k c_k(l)/(2x)^k ],
    c_k(l) = (l+k)! / (k! (l-k)!).

Evaluated in mpmath arithmetic with enough guard digits to absorb the
cancellation of the I sum at small argument (the two exponential branches
agree to ~(x/l)^l there).
"""

from __future__ import annotations

import mpmath as mp

from .result import OracleResult


def _coeffs(l: int):
    return [mp.mpf(mp.factorial(l + k)) / (mp.factorial(k) * mp.factorial(l - k))
            for k in range(l + 1)]


def scaled_pair(l: int, x_str: str, digits: int = 30):
    """(I_{l+1/2} e^{-x}, K_{l+1/2} e^{+x}) as mpf values at ``digits``."""
    # the two exponential branches cancel to ~(x/2)^{2l} x combinatorics at
    # small argument; budget twice the naive loss estimate plus margin
    x_rough = float(mp.mpf(x_str))
    guard = int(2 * l * max(0.0, -mp.log10(x_rough))
                + 2 * l * mp.log10(l + 2)) + 60
    with mp.workdps(digits + guard):
        x = mp.mpf(x_str)
        c = _coeffs(l)
        inv = 1 / (2 * x)
        s_plus = mp.fsum(ck * inv**k for k, ck in enumerate(c))
        s_alt = mp.fsum((-1)**k * ck * inv**k for k, ck in enumerate(c))
        k_scaled = mp.sqrt(mp.pi / (2 * x)) * s_plus
        i_unscaled_times_emx = (s_alt + (-1)**(l + 1) * mp.e**(-2 * x) * s_plus) \
            / mp.sqrt(2 * mp.pi * x)
        return +i_unscaled_times_emx, +k_scaled


def oracle_bessel(l: int, x_str: str, digits: int = 30) -> tuple[OracleResult, OracleResult]:
    """Scaled pair as OracleResults (decimal strings with ``digits`` digits)."""
    i_s, k_s = scaled_pair(l, x_str, digits)
    with mp.workdps(digits):
        return (OracleResult(mp.nstr(+i_s, digits), digits,
                             "finite closed-form sum, mpmath"),
                OracleResult(mp.nstr(+k_s, digits), digits,
                             "finite closed-form sum, mpmath"))


def wronskian_residual(l: int, x_str: str, digits: int = 40):
    """|I_nu K_nu' ... | combination residual: i(l) k(l+1) + i(l+1) k(l) - 1/x."""
    with mp.workdps(digits + 20):
        x = mp.mpf(x_str)
        i0, k0 = scaled_pair(l, x_str, digits + 10)
        i1, k1 = scaled_pair(l + 1, x_str, digits + 10)
        return abs(i0 * k1 + i1 * k0 - 1 / x)
