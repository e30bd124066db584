"""Detector-plane rates through the 2-f imaging systems.

A lens at focal distance f maps transverse wavevector at the crystal to
position at the detector plane, p = 2 pi x / (lambda f).  The point rate
is |Phi|^2 at the mapped wavevectors; the integrated rate adds the
frequency integrals over the pump spectrum and filter bands and the area
integrals over both pinholes as a tensor-product quadrature of up to six
dimensions.

Collapse conventions (exact, used by the point-rate reduction):
  * pump frequency axis active iff the pump bandwidth is nonzero,
    otherwise pinned at omega_p0 with unit weight;
  * signal frequency axis active iff a filter is configured or the pump is
    broadband; when collapsed, omega_s and omega_i are pinned at their own
    central values;
  * each pinhole axis collapses to a single center point of unit weight at
    diameter 0.

The chromatic dependence of the 2-f map itself is switchable: the default
"frozen" mode uses the central wavelengths in the mapping (the literal
printed rate formula); "running" mode maps each sampled frequency with its
own wavelength.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import biphoton
from .biphoton import Geometry, PumpConfig
from .crystal import SPEED_OF_LIGHT
from .errors import NumericalError
from .quadrature import QuadratureSettings, disc_grid, gauss_legendre

_FOUR_LN2 = 4.0 * math.log(2.0)
_SQRT_8LN2 = 2.0 * math.sqrt(2.0 * math.log(2.0))


@dataclass(frozen=True)
class DetectionConfig:
    """2-f focal length, filters, pinholes, and the fixed idler position."""

    focal_length: float  # m
    filter_center_s: float = 810e-9  # m
    filter_center_i: float = 810e-9  # m
    filter_fwhm: float | None = None  # m; None = flat (no filters)
    pinhole_diameter_s: float = 0.0  # m; 0 = ideal point detector
    pinhole_diameter_i: float = 0.0  # m
    idler_position: tuple = (0.0, 0.0)  # m
    map_mode: str = "frozen"  # "frozen" | "running"

    def __post_init__(self):
        if self.focal_length <= 0:
            raise ValueError("focal_length must be positive")
        if self.pinhole_diameter_s < 0 or self.pinhole_diameter_i < 0:
            raise ValueError("pinhole diameters must be >= 0")
        if self.filter_fwhm is not None and self.filter_fwhm <= 0:
            raise ValueError("filter_fwhm must be positive or None")
        if self.map_mode not in ("frozen", "running"):
            raise ValueError(f"map_mode must be 'frozen' or 'running', got {self.map_mode!r}")


@dataclass(frozen=True)
class RatePoint:
    """Integrated rate at one detector-position pair with its quadrature
    self-consistency estimate (|value - value_at_half_nodes| / |value|)."""

    x1: tuple
    x2: tuple
    rate: float
    quadrature_estimate: float
    converged: bool


def position_to_wavevector(x, wavelength: float, focal_length: float):
    """Map detector-plane position(s) to transverse wavevector, 2 pi x/(lambda f)."""
    if wavelength <= 0 or focal_length <= 0:
        raise ValueError("wavelength and focal length must be positive")
    return np.asarray(x, dtype=float) * (2.0 * math.pi / (wavelength * focal_length))


def filter_transmission(omega, center: float, fwhm: float | None):
    """Intensity transmission of a Gaussian interference filter.

    The passband is Gaussian in wavelength with the given FWHM about the
    center wavelength (both in meters), evaluated at the sampled angular
    frequency; peak transmission is 1 and `None` means no filter (flat 1).
    """
    omega = np.asarray(omega, dtype=float)
    if fwhm is None:
        return np.ones_like(omega) if omega.shape else 1.0
    lam = 2.0 * math.pi * SPEED_OF_LIGHT / omega
    t = np.exp(-_FOUR_LN2 * ((lam - center) / fwhm) ** 2)
    return t if omega.shape else float(t)


def coincidence_point(geom: Geometry, pump: PumpConfig, det: DetectionConfig,
                      x1, x2) -> float:
    """Point-detector coincidence rate |Phi(2 pi x1/(lambda_s0 f), ...)|^2.

    Monochromatic central-frequency evaluation; the signal map uses the
    signal central wavelength and the idler map the idler one (identical
    for the degenerate presets).
    """
    p = position_to_wavevector(x1, geom.signal_wavelength, det.focal_length)
    q = position_to_wavevector(x2, geom.idler_wavelength, det.focal_length)
    val = biphoton.intensity(geom, pump, geom.omega_s0, geom.omega_i0,
                             p[0], p[1], q[0], q[1])
    return float(val)


def _signal_window(geom: Geometry, det: DetectionConfig, settings: QuadratureSettings):
    """Signal-frequency window (rad/s) from the filter, override, or default."""
    if settings.omega_s_window_nm is not None:
        half_nm = settings.omega_s_window_nm
        center = det.filter_center_s if det.filter_fwhm is not None else geom.signal_wavelength
    elif det.filter_fwhm is not None:
        sigma_lam = det.filter_fwhm / _SQRT_8LN2
        half_nm = 3.0 * sigma_lam * 1e9
        center = det.filter_center_s
    else:
        half_nm = settings.no_filter_window_nm
        center = geom.signal_wavelength
    lam_lo = center - half_nm * 1e-9
    lam_hi = center + half_nm * 1e-9
    return (2.0 * math.pi * SPEED_OF_LIGHT / lam_hi,
            2.0 * math.pi * SPEED_OF_LIGHT / lam_lo)


def _frequency_axes(geom: Geometry, pump: PumpConfig, det: DetectionConfig,
                    settings: QuadratureSettings):
    """Nodes/weights for the (omega_p, omega_s) axes with collapse rules."""
    if pump.bandwidth_fwhm > 0:
        half = settings.omega_p_sigmas * pump.omega_sigma
        wp, wp_w = gauss_legendre(settings.omega_p_nodes,
                                  pump.omega0 - half, pump.omega0 + half)
    else:
        wp, wp_w = np.array([pump.omega0]), np.array([1.0])

    omega_s_active = det.filter_fwhm is not None or pump.bandwidth_fwhm > 0
    if omega_s_active:
        lo, hi = _signal_window(geom, det, settings)
        ws, ws_w = gauss_legendre(settings.omega_s_nodes, lo, hi)
    else:
        ws, ws_w = np.array([geom.omega_s0]), np.array([1.0])
    return wp, wp_w, ws, ws_w, omega_s_active


def _map_wavelengths(geom: Geometry, det: DetectionConfig, omega_s, omega_i):
    """Per-sample mapping wavelengths for the 2-f systems."""
    if det.map_mode == "running":
        lam_s = 2.0 * math.pi * SPEED_OF_LIGHT / omega_s
        lam_i = 2.0 * math.pi * SPEED_OF_LIGHT / omega_i
    else:
        lam_s = np.full_like(np.asarray(omega_s, dtype=float), geom.signal_wavelength)
        lam_i = np.full_like(np.asarray(omega_i, dtype=float), geom.idler_wavelength)
    return lam_s, lam_i


def _integrated_rate(geom: Geometry, pump: PumpConfig, det: DetectionConfig,
                     x1, x2, settings: QuadratureSettings) -> float:
    wp, wp_w, ws, ws_w, omega_s_active = _frequency_axes(geom, pump, det, settings)
    pts_s, w_s = disc_grid(det.pinhole_diameter_s, settings.radial_nodes,
                           settings.angular_nodes)
    pts_i, w_i = disc_grid(det.pinhole_diameter_i, settings.radial_nodes,
                           settings.angular_nodes)
    xs = np.asarray(x1, dtype=float)[None, :] + pts_s  # (Ds, 2)
    xi = np.asarray(x2, dtype=float)[None, :] + pts_i  # (Di, 2)
    two_pi_f = 2.0 * math.pi / det.focal_length

    total = 0.0
    # chunk over the pump-frequency axis; inner arrays are (Ns, Ds, Di)
    for a, wa in zip(wp, wp_w):
        if omega_s_active:
            omega_i = a - ws
        else:
            omega_i = np.array([geom.omega_i0])  # exact central pin
        t_s = filter_transmission(ws, det.filter_center_s, det.filter_fwhm)
        t_i = filter_transmission(omega_i, det.filter_center_i, det.filter_fwhm)
        lam_s, lam_i = _map_wavelengths(geom, det, ws, omega_i)

        px = (two_pi_f * xs[:, 0][None, :] / lam_s[:, None])[:, :, None]
        py = (two_pi_f * xs[:, 1][None, :] / lam_s[:, None])[:, :, None]
        qx = (two_pi_f * xi[:, 0][None, :] / lam_i[:, None])[:, None, :]
        qy = (two_pi_f * xi[:, 1][None, :] / lam_i[:, None])[:, None, :]

        inten = biphoton.intensity(geom, pump, ws[:, None, None], omega_i[:, None, None],
                                   px, py, qx, qy)
        weighted = inten * (ws_w * t_s * t_i)[:, None, None]
        weighted = weighted * w_s[None, :, None] * w_i[None, None, :]
        total += wa * float(np.sum(weighted))
    return total


def coincidence_integrated(geom: Geometry, pump: PumpConfig, det: DetectionConfig,
                           x1, x2, settings: QuadratureSettings) -> RatePoint:
    """Filter/pinhole-integrated coincidence rate at (x1, x2).

    Tensor quadrature over the active subset of (omega_p, omega_s, signal
    pinhole, idler pinhole); the convergence estimate compares against a
    run with every active axis at half the node count and is flagged (not
    fatal) when it exceeds the configured threshold.
    """
    value = _integrated_rate(geom, pump, det, x1, x2, settings)
    coarse = _integrated_rate(geom, pump, det, x1, x2, _halved(settings))
    if not math.isfinite(value):
        raise NumericalError(f"non-finite integrated rate at x1={tuple(x1)}, x2={tuple(x2)}")
    estimate = abs(value - coarse) / max(abs(value), 1e-300)
    return RatePoint(
        x1=tuple(np.asarray(x1, dtype=float)),
        x2=tuple(np.asarray(x2, dtype=float)),
        rate=value,
        quadrature_estimate=estimate,
        converged=estimate <= settings.convergence_threshold,
    )


def _halved(settings: QuadratureSettings) -> QuadratureSettings:
    return settings.scaled(0.5)


def _singles_q_windows(geom: Geometry, pump: PumpConfig, x1, det: DetectionConfig):
    """Symmetric idler-wavevector windows covering the envelope support and
    the phase-matching stripe (including its quadratic walk at large p_x)."""
    p = position_to_wavevector(x1, geom.signal_wavelength, det.focal_length)
    cr = geom.crystal
    s1 = abs(math.sin(cr.phi1))
    c1 = math.cos(cr.phi1)
    qx_half = abs(p[0]) + 10.0 / pump.w0
    if s1 > 1e-12:
        n_s0 = float(cr.signal_index.index(geom.signal_wavelength))
        k_s0 = geom.omega_s0 * n_s0 / SPEED_OF_LIGHT
        stripe_shift = c1 * p[0] ** 2 / (k_s0 * s1)
        lobe = 2.0 * math.pi / (cr.length * s1)
        qy_half = abs(p[1]) + stripe_shift + 8.0 * lobe + 4.0 / pump.w0
    else:
        qy_half = abs(p[1]) + 10.0 / pump.w0
    return qx_half, qy_half


def singles_rate(geom: Geometry, pump: PumpConfig, det: DetectionConfig,
                 x1, settings: QuadratureSettings) -> float:
    """Signal-arm singles rate: the integrated-rate integrand marginalized
    over all idler transverse wavevectors, with the idler pinhole and
    filter removed.

    The idler marginal is taken directly in wavevector space on symmetric
    Gauss-Legendre windows wide enough for the pump envelope and the
    phase-matching stripe at the scanned position (rates are relative, so
    the constant position/wavevector Jacobian is dropped).
    """
    wp, wp_w, ws, ws_w, omega_s_active = _frequency_axes(geom, pump, det, settings)
    pts_s, w_s = disc_grid(det.pinhole_diameter_s, settings.radial_nodes,
                           settings.angular_nodes)
    xs = np.asarray(x1, dtype=float)[None, :] + pts_s
    two_pi_f = 2.0 * math.pi / det.focal_length

    qx_half, qy_half = _singles_q_windows(geom, pump, x1, det)
    qx, qx_w = gauss_legendre(settings.singles_qx_nodes, -qx_half, qx_half)
    qy, qy_w = gauss_legendre(settings.singles_qy_nodes, -qy_half, qy_half)

    total = 0.0
    # double loop over the frequency axes; inner arrays are (Ds, Nqx, Nqy)
    for a, wa in zip(wp, wp_w):
        for b, wb, tb in zip(ws, ws_w,
                             np.atleast_1d(filter_transmission(ws, det.filter_center_s,
                                                               det.filter_fwhm))):
            omega_i = (a - b) if omega_s_active else geom.omega_i0
            lam_s, _ = _map_wavelengths(geom, det, np.asarray([b]), np.asarray([omega_i]))
            px = (two_pi_f * xs[:, 0] / lam_s[0])[:, None, None]
            py = (two_pi_f * xs[:, 1] / lam_s[0])[:, None, None]
            inten = biphoton.intensity(geom, pump, b, omega_i, px, py,
                                       qx[None, :, None], qy[None, None, :])
            weighted = inten * w_s[:, None, None] * qx_w[None, :, None] * qy_w[None, None, :]
            total += wa * wb * tb * float(np.sum(weighted))
    if not math.isfinite(total):
        raise NumericalError(f"non-finite singles rate at x1={tuple(np.asarray(x1))}")
    return total
