"""Two-photon mode function of noncollinear type-I downconversion.

Evaluates the pump envelope, the longitudinal (Delta_k) and transverse
(Delta_0) phase mismatches, and the complex amplitude

    Phi = E0(omega_s + omega_i, p_x + q_x, Delta_0)
          * sinc(Delta_k L / 2) * exp(-i Delta_k L / 2)

with Delta_k = k_p - k_s cos(phi1) - k_i cos(phi2) - p_y sin(phi1)
- q_y sin(phi2) and Delta_0 = p_y cos(phi1) + q_y cos(phi2)
- k_s sin(phi1) - k_i sin(phi2), where k_p is evaluated at transverse
pump wavevector (p_x + q_x, Delta_0).  All indices are evaluated at the
running (sampled) frequencies, not frozen at the central values.

Conventions (these fix every width downstream):
  * pump spatial field exp(-|x|^2 / w0^2), i.e. w0 is the 1/e^2 intensity
    radius, giving the wavevector amplitude exp(-|P|^2 w0^2 / 4);
  * pump spectral envelope is Gaussian in angular frequency with the
    configured FWHM applied to the *intensity*; bandwidth 0 means a
    monochromatic pump whose spectral factor is identically 1 (the
    frequency integral collapses in the detection module);
  * arguments outside the propagating cone give exactly zero amplitude.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .crystal import SPEED_OF_LIGHT, CrystalConfig
from .errors import EvanescentWaveError

_TWO_LN2 = 2.0 * math.log(2.0)


@dataclass(frozen=True)
class PumpConfig:
    """Pump beam: central wavelength, waist, spectral width, amplitude scale.

    lambda0 in meters; w0 is the 1/e^2 intensity waist radius in meters;
    bandwidth_fwhm is the spectral FWHM of the intensity in meters of
    wavelength (0 = monochromatic).  amplitude is a dimensionless overall
    scale (rates are relative, so it only rescales outputs).
    """

    lambda0: float
    w0: float
    bandwidth_fwhm: float = 0.0
    amplitude: float = 1.0

    def __post_init__(self):
        if self.lambda0 <= 0:
            raise ValueError("lambda0 must be positive")
        if self.w0 <= 0:
            raise ValueError("w0 must be positive")
        if self.bandwidth_fwhm < 0:
            raise ValueError("bandwidth_fwhm must be >= 0")

    @property
    def omega0(self) -> float:
        return 2 * math.pi * SPEED_OF_LIGHT / self.lambda0

    @property
    def omega_fwhm(self) -> float:
        """Intensity FWHM in angular frequency (first-order conversion)."""
        return 2 * math.pi * SPEED_OF_LIGHT * self.bandwidth_fwhm / self.lambda0**2

    @property
    def omega_sigma(self) -> float:
        """Intensity Gaussian sigma in angular frequency (0 if monochromatic)."""
        return self.omega_fwhm / (2 * math.sqrt(_TWO_LN2))


@dataclass(frozen=True)
class Geometry:
    """Crystal plus the central signal/idler wavelengths (meters)."""

    crystal: CrystalConfig
    signal_wavelength: float
    idler_wavelength: float

    def __post_init__(self):
        if self.signal_wavelength <= 0 or self.idler_wavelength <= 0:
            raise ValueError("central wavelengths must be positive")

    @property
    def omega_s0(self) -> float:
        return 2 * math.pi * SPEED_OF_LIGHT / self.signal_wavelength

    @property
    def omega_i0(self) -> float:
        return 2 * math.pi * SPEED_OF_LIGHT / self.idler_wavelength


def check_energy_conservation(pump: PumpConfig, geom: Geometry, rel_tol: float = 1e-9):
    """Require 1/lambda_p = 1/lambda_s + 1/lambda_i at the central values."""
    lhs = 1.0 / pump.lambda0
    rhs = 1.0 / geom.signal_wavelength + 1.0 / geom.idler_wavelength
    if abs(lhs - rhs) > rel_tol * lhs:
        raise ValueError(
            "central wavelengths violate energy conservation: "
            f"1/{pump.lambda0:.6e} != 1/{geom.signal_wavelength:.6e} + 1/{geom.idler_wavelength:.6e}"
        )


@dataclass(frozen=True)
class BiphotonEvaluation:
    """Amplitude at one point plus the mismatch intermediates for inspection.

    delta_k/delta_0 are NaN when the point is outside the propagating cone
    (where phi is exactly 0 by convention).
    """

    phi: complex
    delta_k: float
    delta_0: float


def sinc(x):
    """sin(x)/x with sinc(0) = 1 (unnormalized convention)."""
    return np.sinc(np.asarray(x) / np.pi)


def pump_envelope(pump: PumpConfig, omega_p, x_wavevector, y_wavevector):
    """Pump amplitude E0 at pump frequency and transverse wavevector.

    The spatial factor is exp(-(Px^2 + Py^2) w0^2 / 4); the spectral factor
    is the intensity-FWHM Gaussian amplitude in (omega_p - omega_p0), or
    identically 1 for a monochromatic config.  Returns complex (the pump is
    taken flat-phased at its waist).
    """
    omega_p = np.asarray(omega_p, dtype=float)
    px = np.asarray(x_wavevector, dtype=float)
    py = np.asarray(y_wavevector, dtype=float)
    spatial = np.exp(-(px * px + py * py) * pump.w0**2 / 4.0)
    if pump.bandwidth_fwhm > 0:
        detune = omega_p - pump.omega0
        spectral = np.exp(-_TWO_LN2 * (detune / pump.omega_fwhm) ** 2)
    else:
        spectral = 1.0
    return (pump.amplitude * spatial * spectral).astype(complex)


def _mismatches(geom: Geometry, omega_s, omega_i, px, py, qx, qy):
    """Vectorized Delta_k, Delta_0 and the propagating-cone mask.

    Returns (delta_k, delta_0, valid); mismatch entries are computed with
    clamped square roots where invalid and must be masked by the caller.
    """
    c = SPEED_OF_LIGHT
    cr = geom.crystal
    omega_s = np.asarray(omega_s, dtype=float)
    omega_i = np.asarray(omega_i, dtype=float)
    px = np.asarray(px, dtype=float)
    py = np.asarray(py, dtype=float)
    qx = np.asarray(qx, dtype=float)
    qy = np.asarray(qy, dtype=float)
    omega_p = omega_s + omega_i

    n_s = cr.signal_index.index(2 * math.pi * c / omega_s)
    n_i = cr.idler_index.index(2 * math.pi * c / omega_i)
    n_p = cr.pump_index.index(2 * math.pi * c / omega_p)

    ks_sq = (omega_s * n_s / c) ** 2 - px * px - py * py
    ki_sq = (omega_i * n_i / c) ** 2 - qx * qx - qy * qy
    valid = (ks_sq >= 0) & (ki_sq >= 0)
    k_s = np.sqrt(np.where(ks_sq > 0, ks_sq, 0.0))
    k_i = np.sqrt(np.where(ki_sq > 0, ki_sq, 0.0))

    cos1, sin1 = math.cos(cr.phi1), math.sin(cr.phi1)
    cos2, sin2 = math.cos(cr.phi2), math.sin(cr.phi2)

    delta_0 = py * cos1 + qy * cos2 - k_s * sin1 - k_i * sin2
    pump_x = px + qx
    kp_sq = (omega_p * n_p / c) ** 2 - pump_x * pump_x - delta_0 * delta_0
    valid = valid & (kp_sq >= 0)
    k_p = np.sqrt(np.where(kp_sq > 0, kp_sq, 0.0))

    delta_k = k_p - k_s * cos1 - k_i * cos2 - py * sin1 - qy * sin2
    return delta_k, delta_0, valid


def delta_k(geom: Geometry, omega_s: float, omega_i: float, p, q) -> float:
    """Longitudinal phase mismatch Delta_k (rad/m) at a single point.

    Raises:
        EvanescentWaveError: if any wave is outside its propagating cone
        (callers that need a total function use mode_function, which maps
        the same condition to zero amplitude).
    """
    dk, _, valid = _mismatches(geom, omega_s, omega_i, p[0], p[1], q[0], q[1])
    if not np.all(valid):
        raise EvanescentWaveError("evanescent wave component in delta_k input")
    return float(dk)


def delta_0(geom: Geometry, omega_s: float, omega_i: float, p, q) -> float:
    """Transverse (y) phase mismatch Delta_0 (rad/m) at a single point."""
    _, d0, valid = _mismatches(geom, omega_s, omega_i, p[0], p[1], q[0], q[1])
    if not np.all(valid):
        raise EvanescentWaveError("evanescent wave component in delta_0 input")
    return float(d0)


def amplitude(geom: Geometry, pump: PumpConfig, omega_s, omega_i, px, py, qx, qy):
    """Vectorized complex mode function (broadcasts over all arguments)."""
    dk, d0, valid = _mismatches(geom, omega_s, omega_i, px, py, qx, qy)
    omega_p = np.asarray(omega_s, dtype=float) + np.asarray(omega_i, dtype=float)
    env = pump_envelope(pump, omega_p, np.asarray(px) + np.asarray(qx), d0)
    half = dk * (geom.crystal.length / 2.0)
    phi = env * sinc(half) * np.exp(-1j * half)
    return np.where(valid, phi, 0.0 + 0.0j), dk, d0, valid


def intensity(geom: Geometry, pump: PumpConfig, omega_s, omega_i, px, py, qx, qy):
    """Vectorized |Phi|^2 in real arithmetic (the detection hot path)."""
    dk, d0, valid = _mismatches(geom, omega_s, omega_i, px, py, qx, qy)
    omega_p = np.asarray(omega_s, dtype=float) + np.asarray(omega_i, dtype=float)
    pump_x = np.asarray(px) + np.asarray(qx)
    env_sq = np.exp(-(pump_x * pump_x + d0 * d0) * pump.w0**2 / 2.0)
    if pump.bandwidth_fwhm > 0:
        detune = omega_p - pump.omega0
        env_sq = env_sq * np.exp(-2.0 * _TWO_LN2 * (detune / pump.omega_fwhm) ** 2)
    s = sinc(dk * (geom.crystal.length / 2.0))
    return np.where(valid, pump.amplitude**2 * env_sq * s * s, 0.0)


def mode_function(geom: Geometry, pump: PumpConfig, omega_s: float, omega_i: float,
                  p, q) -> BiphotonEvaluation:
    """Two-photon amplitude Phi at (omega_s, omega_i, p, q).

    Total function: evanescent arguments yield phi = 0 (with NaN recorded
    for the mismatches, which are undefined there).
    """
    phi, dk, d0, valid = amplitude(geom, pump, omega_s, omega_i, p[0], p[1], q[0], q[1])
    if not np.all(valid):
        return BiphotonEvaluation(0.0 + 0.0j, float("nan"), float("nan"))
    return BiphotonEvaluation(complex(phi), float(dk), float(d0))


def mode_function_thin_crystal(geom: Geometry, pump: PumpConfig, p, q):
    """L -> 0 limit: the pump's spatial wavevector amplitude at the summed
    transverse wavevector, with no sinc factor.

    Evaluated at (p_x + q_x, p_y cos(phi1) + q_y cos(phi2)) for the
    monochromatic degenerate interpretation.
    """
    cr = geom.crystal
    px = np.asarray(p[0], dtype=float)
    py = np.asarray(p[1], dtype=float)
    qx = np.asarray(q[0], dtype=float)
    qy = np.asarray(q[1], dtype=float)
    y_arg = py * math.cos(cr.phi1) + qy * math.cos(cr.phi2)
    out = pump_envelope(pump, pump.omega0, px + qx, y_arg)
    return complex(out) if out.ndim == 0 else out
