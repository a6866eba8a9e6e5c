"""Two-sphere configuration and thermal state."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .constants import HBAR_C, K_B, thermal_wavelength, temperature_from_z


@dataclass(frozen=True)
class Geometry:
    """Two equal spheres of radius R with centre distance d (d > 2R).

    Lengths are in consistent units (metres for SI output; use d = 1 for
    purely adimensional work).  ``ell`` is the surface-to-surface gap.
    """

    R: float
    d: float
    ell: float = field(init=False)

    def __post_init__(self):
        if self.R <= 0:
            raise ValueError("sphere radius must be > 0")
        if self.d <= 2.0 * self.R:
            raise ValueError(
                f"centre distance d={self.d:g} must exceed 2R={2 * self.R:g} "
                "(spheres may not overlap)")
        object.__setattr__(self, "ell", self.d - 2.0 * self.R)

    @classmethod
    def from_ratio(cls, r: float, d: float = 1.0) -> "Geometry":
        """Geometry with aspect ratio r = R/d (0 < r < 1/2)."""
        if not 0.0 < r < 0.5:
            raise ValueError("aspect ratio r must lie in (0, 1/2)")
        return cls(R=r * d, d=d)

    @property
    def r(self) -> float:
        """Aspect ratio R/d."""
        return self.R / self.d


@dataclass(frozen=True)
class ThermalPoint:
    """Temperature with derived thermal wavelength and z = d/lambda_T."""

    T: float
    lambda_T: float
    z: float

    @classmethod
    def from_temperature(cls, T: float, geometry: Geometry) -> "ThermalPoint":
        lam = thermal_wavelength(T)
        z = 0.0 if math.isinf(lam) else geometry.d / lam
        return cls(T=T, lambda_T=lam, z=z)

    @classmethod
    def from_z(cls, z: float, geometry: Geometry) -> "ThermalPoint":
        T = temperature_from_z(z, geometry.d)
        lam = thermal_wavelength(T)
        return cls(T=T, lambda_T=lam, z=z)

    @property
    def kT(self) -> float:
        return K_B * self.T


def energy_scale_ad(geometry: Geometry) -> float:
    """Conversion factor from adimensional E_ad to energy: hbar*c*R^6/(2*pi*d^7)."""
    return HBAR_C * geometry.R**6 / (2.0 * math.pi * geometry.d**7)
