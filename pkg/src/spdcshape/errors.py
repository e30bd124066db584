"""Exception taxonomy shared across the package."""


class SpdcShapeError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(SpdcShapeError):
    """Invalid or unresolvable scenario configuration (CLI exit code 2)."""


class NumericalError(SpdcShapeError):
    """Non-finite or otherwise unusable numerical result (CLI exit code 3)."""


class WavelengthOutOfRangeError(SpdcShapeError):
    """Dispersion model evaluated outside its declared validity window."""

    def __init__(self, wavelength_m: float, window_um: tuple):
        self.wavelength_m = wavelength_m
        self.window_um = window_um
        super().__init__(
            f"wavelength {wavelength_m * 1e9:.3f} nm outside validity window "
            f"[{window_um[0]:.3f}, {window_um[1]:.3f}] um"
        )


class EvanescentWaveError(SpdcShapeError):
    """Transverse wavevector outside the propagating (paraxial) cone.

    Raised by the scalar wavevector/phase-mismatch APIs; the amplitude layer
    maps the same condition to exactly zero amplitude instead.
    """


class NoPhaseMatchingError(SpdcShapeError):
    """No real emission angle exists (k_p > 2 k_s at degeneracy)."""


class TotalInternalReflectionError(SpdcShapeError):
    """Internal angle exceeds the critical angle at the exit face."""


class PeakAtEdgeError(SpdcShapeError):
    """Profile maximum sits on the scan boundary; width extraction refused."""


class AllZeroProfileError(SpdcShapeError):
    """Scan range does not cover the coincidence peak (all rates zero)."""
