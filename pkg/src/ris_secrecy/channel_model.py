"""Line-of-sight mm-Wave channels for the Alice -> RIS -> {Bob, Eve} link.

All powers are kept in linear watts internally. dB and dBm only appear in
the constructors' arguments.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

HALF_WAVELENGTH = 0.5


def _check_angle(name: str, value: float) -> None:
    if not math.isfinite(value) or not 0.0 < value < math.pi:
        raise ValidationError(name, f"angle must lie in the open interval (0, pi), got {value!r}")


def _check_positive(name: str, value: float) -> None:
    if not math.isfinite(value) or value <= 0:
        raise ValidationError(name, f"must be positive, got {value!r}")


@dataclass(frozen=True)
class SystemConfig:
    """Scalar parameters of the scenario.

    Defaults reproduce the 28 GHz case study: 20 W transmit power,
    -174 dBm/Hz noise density over 100 MHz, and the path-loss fit
    alpha = 61.4 dB, beta = 2.
    """

    m_tx_antennas: int = 4
    n_ris_elements: int = 8
    tx_power_watts: float = 20.0
    noise_density_dbm_hz: float = -174.0
    bandwidth_hz: float = 1e8
    pathloss_alpha_db: float = 61.4
    pathloss_beta: float = 2.0
    element_spacing_ratio: float = HALF_WAVELENGTH

    def __post_init__(self):
        for name in ("m_tx_antennas", "n_ris_elements"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)) or value < 1:
                raise ValidationError(name, f"must be a positive integer, got {value!r}")
        _check_positive("tx_power_watts", self.tx_power_watts)
        _check_positive("bandwidth_hz", self.bandwidth_hz)
        _check_positive("element_spacing_ratio", self.element_spacing_ratio)
        for name in ("noise_density_dbm_hz", "pathloss_alpha_db", "pathloss_beta"):
            if not math.isfinite(getattr(self, name)):
                raise ValidationError(name, "must be finite")
        if self.element_spacing_ratio != HALF_WAVELENGTH:
            warnings.warn(
                "element_spacing_ratio != 0.5: the eta/ergodic bound formulas assume "
                "half-wavelength spacing and will not match Monte Carlo results",
                stacklevel=3,
            )

    @property
    def noise_power_watts(self) -> float:
        return noise_power_watts(self.noise_density_dbm_hz, self.bandwidth_hz)

    @property
    def tx_snr(self) -> float:
        """Transmit power over noise power, P / sigma_n^2 (linear)."""
        return self.tx_power_watts / self.noise_power_watts

    def path_loss(self, distance_m: float) -> float:
        return path_loss_linear(distance_m, self.pathloss_alpha_db, self.pathloss_beta)


@dataclass(frozen=True)
class LinkGeometry:
    """Angles (radians) and RIS-relative distances (meters) of one realization.

    Attributes:
        aod_alice_rad: departure angle at Alice's array.
        aoa_ris_rad: arrival angle at the RIS.
        aod_bob_rad: departure angle from the RIS toward Bob.
        aod_eve_rad: departure angle from the RIS toward Eve.
        dist_alice_ris_m, dist_ris_bob_m, dist_ris_eve_m: link lengths.
    """

    aod_alice_rad: float = math.pi / 4
    aoa_ris_rad: float = 3 * math.pi / 4
    aod_bob_rad: float = math.pi / 4
    aod_eve_rad: float = math.pi / 3
    dist_alice_ris_m: float = 15.0
    dist_ris_bob_m: float = 20.0
    dist_ris_eve_m: float = 30.0

    def __post_init__(self):
        for name in ("aod_alice_rad", "aoa_ris_rad", "aod_bob_rad", "aod_eve_rad"):
            _check_angle(name, getattr(self, name))
        for name in ("dist_alice_ris_m", "dist_ris_bob_m", "dist_ris_eve_m"):
            _check_positive(name, getattr(self, name))


@dataclass(frozen=True)
class ChannelSet:
    """Channels of one realization.

    The Alice-RIS channel G = sqrt(l_A) g_ris g_alice_ris^H is rank one and is
    kept in this factored form; ``cascade_matrix`` builds the dense M x N
    product only on request.
    """

    g_alice_ris: np.ndarray
    g_ris: np.ndarray
    g_bob: np.ndarray
    g_eve: np.ndarray
    pathloss_alice: float
    pathloss_bob: float
    pathloss_eve: float

    @property
    def h_bob(self) -> np.ndarray:
        return math.sqrt(self.pathloss_bob) * self.g_bob

    @property
    def h_eve(self) -> np.ndarray:
        return math.sqrt(self.pathloss_eve) * self.g_eve

    def cascade_matrix(self) -> np.ndarray:
        """Dense N x M matrix G (tests and debugging only)."""
        return math.sqrt(self.pathloss_alice) * np.outer(self.g_ris, self.g_alice_ris.conj())


def steering_vector(n: int, angle_rad: float, spacing_ratio: float = HALF_WAVELENGTH) -> np.ndarray:
    """Response of an n-element uniform linear array.

    Entry k is exp(-j 2 pi k (d/lambda) cos(angle)), k = 0..n-1.
    """
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise ValidationError("n", f"array size must be a positive integer, got {n!r}")
    _check_angle("angle_rad", angle_rad)
    _check_positive("spacing_ratio", spacing_ratio)
    k = np.arange(int(n))
    vec = np.exp(-2j * np.pi * spacing_ratio * math.cos(angle_rad) * k)
    vec[0] = 1.0
    return vec


def path_loss_linear(distance_m: float, alpha_db: float = 61.4, beta: float = 2.0) -> float:
    """Linear power gain l with -10 log10(l) = alpha + 10 beta log10(d)."""
    if not math.isfinite(distance_m) or distance_m <= 0:
        raise ValidationError("distance_m", f"must be positive, got {distance_m!r}")
    loss_db = alpha_db + beta * 10.0 * math.log10(distance_m)
    return 10.0 ** (-loss_db / 10.0)


def path_loss_linear_array(distance_m, alpha_db: float = 61.4, beta: float = 2.0) -> np.ndarray:
    d = np.asarray(distance_m, dtype=float)
    if np.any(~(d > 0)):
        raise ValidationError("distance_m", "all distances must be positive")
    return 10.0 ** (-(alpha_db + beta * 10.0 * np.log10(d)) / 10.0)


def noise_power_watts(density_dbm_hz: float = -174.0, bandwidth_hz: float = 1e8) -> float:
    """Thermal noise power sigma_n^2 in watts for a density in dBm/Hz."""
    if not math.isfinite(bandwidth_hz) or bandwidth_hz <= 0:
        raise ValidationError("bandwidth_hz", f"must be positive, got {bandwidth_hz!r}")
    return 10.0 ** ((density_dbm_hz + 10.0 * math.log10(bandwidth_hz) - 30.0) / 10.0)


def build_channels(cfg: SystemConfig, geom: LinkGeometry) -> ChannelSet:
    m, n, r = cfg.m_tx_antennas, cfg.n_ris_elements, cfg.element_spacing_ratio
    return ChannelSet(
        g_alice_ris=steering_vector(m, geom.aod_alice_rad, r),
        g_ris=steering_vector(n, geom.aoa_ris_rad, r),
        g_bob=steering_vector(n, geom.aod_bob_rad, r),
        g_eve=steering_vector(n, geom.aod_eve_rad, r),
        pathloss_alice=cfg.path_loss(geom.dist_alice_ris_m),
        pathloss_bob=cfg.path_loss(geom.dist_ris_bob_m),
        pathloss_eve=cfg.path_loss(geom.dist_ris_eve_m),
    )
