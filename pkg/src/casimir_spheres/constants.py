"""Physical and mathematical constants used across the package.

All internal computations are done in adimensional variables; these
constants only enter when converting to/from SI quantities at the API
boundary.
"""

import math

# hbar*c pinned to 197.3269804 MeV*fm, expressed in SI (J*m).
# 197.3269804e6 eV * 1.602176634e-19 J/eV * 1e-15 m
HBAR_C = 197.3269804e6 * 1.602176634e-19 * 1e-15  # J*m

# Boltzmann constant, SI 2019 exact value.
K_B = 1.380649e-23  # J/K

# Riemann zeta values entering the proximity-force sums.
ZETA_3 = 1.2020569031595942854
ZETA_2 = math.pi**2 / 6.0


def thermal_wavelength(T: float) -> float:
    """hbar*c / (2*pi*k_B*T) in metres; infinite at T = 0."""
    if T < 0:
        raise ValueError("temperature must be >= 0")
    if T == 0:
        return math.inf
    return HBAR_C / (2.0 * math.pi * K_B * T)


def temperature_from_z(z: float, d: float) -> float:
    """Temperature such that d / thermal_wavelength == z, for separation d in metres."""
    if z < 0:
        raise ValueError("z must be >= 0")
    if d <= 0:
        raise ValueError("separation must be > 0")
    return z * HBAR_C / (2.0 * math.pi * K_B * d)
