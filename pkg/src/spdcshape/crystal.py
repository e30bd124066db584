"""Crystal dispersion and wavevector geometry.

Refractive indices, longitudinal wavenumbers inside the crystal, the
degenerate noncollinear emission angle, and refraction at the exit face.
All quantities SI (meters, rad/s, rad/m); Sellmeier fits take micrometers
internally, converted at the call boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import (
    EvanescentWaveError,
    NoPhaseMatchingError,
    TotalInternalReflectionError,
    WavelengthOutOfRangeError,
)

SPEED_OF_LIGHT = 299792458.0  # m/s


@dataclass(frozen=True)
class ConstantIndex:
    """Dispersionless medium: n(lambda) = n for every wavelength."""

    n: float
    branch: str = "ordinary"  # documentation label only

    def __post_init__(self):
        if self.n <= 0:
            raise ValueError(f"refractive index must be positive, got {self.n}")

    def index(self, wavelength_m):
        wavelength_m = np.asarray(wavelength_m, dtype=float)
        if np.any(wavelength_m <= 0):
            raise ValueError("wavelength must be positive")
        if wavelength_m.shape:
            return np.full(wavelength_m.shape, self.n)
        return float(self.n)


@dataclass(frozen=True)
class SellmeierIndex:
    """Single/multi-pole Sellmeier fit: n^2 = a0 + sum_j b_j/(L^2 - c_j) + d*L^2, L in um.

    Evaluation outside the declared validity window raises
    WavelengthOutOfRangeError; the fit is only trusted inside it.
    """

    a0: float
    poles: tuple  # ((b_j, c_j), ...) with c_j in um^2
    d: float = 0.0
    window_um: tuple = (0.4, 3.0)
    branch: str = "ordinary"

    def index(self, wavelength_m):
        lam_um = np.asarray(wavelength_m, dtype=float) * 1e6
        lo, hi = self.window_um
        bad = (lam_um < lo) | (lam_um > hi)
        if np.any(bad):
            offender = float(np.atleast_1d(lam_um)[np.atleast_1d(bad)][0])
            raise WavelengthOutOfRangeError(offender * 1e-6, self.window_um)
        l2 = lam_um * lam_um
        n2 = self.a0 + self.d * l2
        for b, cpole in self.poles:
            n2 = n2 + b / (l2 - cpole)
        return np.sqrt(n2)


# LiIO3 (lithium iodate, negative uniaxial), single-pole Sellmeier fits as
# tabulated in the standard nonlinear-optics handbooks (Dmitriev, Gurzadyan
# & Nikogosyan, "Handbook of Nonlinear Optical Crystals").  The set is
# validated in-tree by the degenerate emission angle it predicts for a
# 405 nm pump (17.36 deg, against the 17.1 +- 0.5 deg gate) rather than by
# the raw coefficients.
LIIO3_ORDINARY = SellmeierIndex(
    a0=3.4095,
    poles=((0.047664, 0.033991),),
    window_um=(0.40, 3.0),
    branch="ordinary",
)
# Pump propagates at 90 deg to the optic axis (walk-off-free cut), so the
# extraordinary index is the principal value with no angle dependence.
LIIO3_EXTRAORDINARY = SellmeierIndex(
    a0=2.9163,
    poles=((0.034514, 0.031034),),
    window_um=(0.40, 3.0),
    branch="extraordinary",
)
VACUUM = ConstantIndex(1.0)

DISPERSION_MODELS = {
    "vacuum": VACUUM,
    "liio3-ordinary": LIIO3_ORDINARY,
    "liio3-extraordinary": LIIO3_EXTRAORDINARY,
}


def dispersion_by_name(name: str):
    """Resolve a named dispersion model from the registry."""
    try:
        return DISPERSION_MODELS[name]
    except KeyError:
        raise KeyError(
            f"unknown dispersion model {name!r}; known: {sorted(DISPERSION_MODELS)}"
        ) from None


@dataclass(frozen=True)
class CrystalConfig:
    """Crystal length, per-wave dispersion, and internal emission angles.

    phi1/phi2 are the signed internal emission angles (radians) of the
    signal and idler with respect to the pump axis; the symmetric degenerate
    geometry uses phi2 = -phi1.
    """

    length: float  # m
    pump_index: object = VACUUM
    signal_index: object = VACUUM
    idler_index: object = VACUUM
    phi1: float = 0.0  # rad
    phi2: float = 0.0  # rad

    def __post_init__(self):
        if self.length <= 0:
            raise ValueError(f"crystal length must be positive, got {self.length}")
        if abs(self.phi1) >= math.pi / 2 or abs(self.phi2) >= math.pi / 2:
            raise ValueError("emission angles must satisfy |phi| < pi/2")

    def with_degenerate_angles(self, pump_wavelength: float) -> "CrystalConfig":
        """Copy with phi1 solved from phase matching and phi2 = -phi1."""
        phi = degenerate_emission_angle(self, pump_wavelength)
        return replace(self, phi1=phi, phi2=-phi)


def refractive_index(model, wavelength: float):
    """n(lambda) for a dispersion model; wavelength in meters."""
    return model.index(wavelength)


def group_index(model, wavelength: float, step: float = 1e-11) -> float:
    """n_g = n - lambda dn/dlambda via central difference (step in meters).

    Used only by the scan-range heuristics, not by the amplitude itself.
    """
    n = float(model.index(wavelength))
    dn = (float(model.index(wavelength + step)) - float(model.index(wavelength - step))) / (2 * step)
    return n - wavelength * dn


def longitudinal_wavenumber(omega: float, n: float, transverse) -> float:
    """k_z = sqrt((omega n / c)^2 - |p|^2) for a propagating plane wave.

    Args:
        omega: angular frequency, rad/s.
        n: refractive index at that frequency.
        transverse: transverse wavevector pair (p_x, p_y), rad/m.

    Raises:
        EvanescentWaveError: if |p| > omega n / c (outside the paraxial cone).
    """
    px, py = transverse
    k = omega * n / SPEED_OF_LIGHT
    arg = k * k - px * px - py * py
    if arg < 0:
        raise EvanescentWaveError(
            f"|p| = {math.hypot(px, py):.6g} rad/m exceeds omega n/c = {k:.6g} rad/m"
        )
    return math.sqrt(arg)


def degenerate_emission_angle(crystal: CrystalConfig, pump_wavelength: float) -> float:
    """Internal emission angle phi with Delta_k = Delta_0 = 0 on axis.

    Solves cos(phi) = k_p / (2 k_s) at the degenerate frequencies
    (lambda_s = lambda_i = 2 lambda_p) for the collinear-pump geometry with
    phi2 = -phi1.

    Raises:
        NoPhaseMatchingError: if k_p > 2 k_s (no real angle).
    """
    omega_p = 2 * math.pi * SPEED_OF_LIGHT / pump_wavelength
    omega_s = omega_p / 2
    n_p = float(crystal.pump_index.index(pump_wavelength))
    n_s = float(crystal.signal_index.index(2 * pump_wavelength))
    k_p = omega_p * n_p / SPEED_OF_LIGHT
    k_s = omega_s * n_s / SPEED_OF_LIGHT
    ratio = k_p / (2 * k_s)
    if ratio > 1.0:
        raise NoPhaseMatchingError(
            f"k_p/(2 k_s) = {ratio:.6f} > 1: no degenerate emission angle at "
            f"{pump_wavelength * 1e9:.1f} nm"
        )
    return math.acos(ratio)


def internal_to_external_angle(theta_internal: float, n: float) -> float:
    """Snell refraction at a flat exit face normal to the pump axis.

    Raises:
        TotalInternalReflectionError: if |n sin(theta)| > 1.
    """
    s = n * math.sin(theta_internal)
    if abs(s) > 1.0:
        raise TotalInternalReflectionError(
            f"n sin(theta) = {s:.6f} exceeds 1 (critical angle passed)"
        )
    return math.asin(s)
