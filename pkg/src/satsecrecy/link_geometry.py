"""Link-budget arithmetic: ground-station radiation pattern, free-space
loss, arc-distance geometry, and mean-SNR composition."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .srf_channel import SrfParams, moment


@dataclass(frozen=True)
class AntennaPattern:
    """Sidelobe-envelope gain law of the ground station.

    Below ``phi_min`` the law is undefined; the gain is clamped to the
    configurable ``boresight_gain_dbi`` (default: the envelope's value at
    phi = 1 degree).
    """

    phi_min_deg: float = 1.0
    boresight_gain_dbi: float = 32.0

    def __post_init__(self):
        if not (0.0 < self.phi_min_deg < 48.0):
            raise ValueError(f"phi_min_deg must lie in (0, 48), got {self.phi_min_deg}")


@dataclass(frozen=True)
class LinkBudget:
    """Composite transmit term, receive gain, wavelength and distance.

    ``p_a`` is the noise-normalized transmit composite (transmit power times
    transmit gain over noise power), linear and dimensionless.
    """

    p_a: float
    rx_gain: float
    wavelength_m: float
    distance_m: float

    def __post_init__(self):
        for name in ("p_a", "rx_gain", "wavelength_m", "distance_m"):
            v = getattr(self, name)
            if not (v > 0.0 and math.isfinite(v)):
                raise ValueError(f"{name} must be positive, got {v}")


@dataclass(frozen=True)
class Geometry:
    """Off-boresight angle toward the eavesdropper and its orbit radius."""

    phi_deg: float
    d_e_m: float

    def __post_init__(self):
        if not (0.0 <= self.phi_deg <= 180.0):
            raise ValueError(f"phi_deg must lie in [0, 180], got {self.phi_deg}")
        if not (self.d_e_m > 0.0):
            raise ValueError(f"d_e_m must be positive, got {self.d_e_m}")


def itu_pattern_gain_dbi(pattern: AntennaPattern, phi_deg: float) -> float:
    """Reference radiation-pattern gain at off-boresight angle phi.

    32 - 25*log10(phi) dBi on [phi_min, 48 deg), -10 dBi on [48, 180 deg],
    clamped to the boresight gain inside the main-beam region.
    """
    if not (0.0 <= phi_deg <= 180.0):
        raise ValueError(f"phi_deg must lie in [0, 180], got {phi_deg}")
    if phi_deg < pattern.phi_min_deg:
        return pattern.boresight_gain_dbi
    if phi_deg < 48.0:
        return 32.0 - 25.0 * math.log10(phi_deg)
    return -10.0


def free_space_loss(wavelength_m: float, distance_m: float,
                    squared: bool = False) -> float:
    """Free-space loss factor lambda/(4*pi*d), applied as a linear multiplier.

    The unsquared form is dimensionally an amplitude ratio; ``squared=True``
    selects the conventional power-loss form (lambda/(4*pi*d))^2.  Both are
    kept behind this one switch so either convention is reproducible; the
    mean-SNR calibration used by the experiment presets cancels the choice.
    """
    if not (wavelength_m > 0.0 and distance_m > 0.0):
        raise ValueError("wavelength_m and distance_m must be positive")
    loss = wavelength_m / (4.0 * math.pi * distance_m)
    return loss * loss if squared else loss


def arc_offset_angle(d_eb_m: float, d_e_m: float) -> float:
    """Off-boresight angle in degrees subtended by arc distance d_eb."""
    if not (d_e_m > 0.0):
        raise ValueError(f"d_e_m must be positive, got {d_e_m}")
    if not (d_eb_m >= 0.0):
        raise ValueError(f"d_eb_m must be nonnegative, got {d_eb_m}")
    return math.degrees(d_eb_m / d_e_m)


def mean_snr(link: LinkBudget, tx_gain_linear: float, srf: SrfParams,
             fspl_squared: bool = False) -> float:
    """Mean SNR: p_a * tx gain * rx gain * free-space loss * E[|h|^2]."""
    if not (tx_gain_linear > 0.0):
        raise ValueError(f"tx_gain_linear must be positive, got {tx_gain_linear}")
    loss = free_space_loss(link.wavelength_m, link.distance_m, fspl_squared)
    return link.p_a * tx_gain_linear * link.rx_gain * loss * moment(srf, 2.0)


def calibrate_to_mean_snr(target_snr_db: float, srf: SrfParams) -> float:
    """Composite linear scale s with s * E[|h|^2] equal to the target mean SNR.

    Back-solves the product p_a * gains * loss when the scenario pins the
    mean SNR directly instead of a full link budget.
    """
    return 10.0 ** (target_snr_db / 10.0) / moment(srf, 2.0)
