"""Received SNRs and secrecy rates.

Rates are in bps/Hz (log base 2) and carry the per-realization [.]^+ clamp.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel_model import LinkGeometry, SystemConfig, _check_angle, build_channels
from .errors import ValidationError
from .reflection import PhaseShiftProfile, Precoder, effective_channel, mrt_precoder, optimal_phase_shifts


@dataclass(frozen=True)
class SecrecySample:
    snr_bob: float
    snr_eve: float
    secrecy_rate_bps_hz: float

    @classmethod
    def from_snrs(cls, snr_bob: float, snr_eve: float) -> "SecrecySample":
        return cls(snr_bob, snr_eve, secrecy_rate(snr_bob, snr_eve))


def received_snrs(cfg: SystemConfig, channels, profile: PhaseShiftProfile,
                  precoder: Precoder | None = None) -> tuple[float, float]:
    """SNRs (linear) at Bob and Eve for a given RIS profile.

    Evaluates P |h^H Theta G w|^2 / sigma_n^2 for both receivers. With the
    default MRT precoder this equals (l_A l_x M P / sigma_n^2) |g_x^H Theta g_R|^2.
    """
    noise = cfg.noise_power_watts
    if not noise > 0:
        raise ValidationError("noise_power_watts", f"must be positive, got {noise!r}")
    if precoder is None:
        precoder = mrt_precoder(channels, profile)
    w = precoder.weights
    amp_bob = np.dot(effective_channel(channels.h_bob, profile, channels), w)
    amp_eve = np.dot(effective_channel(channels.h_eve, profile, channels), w)
    scale = cfg.tx_power_watts / noise
    return scale * abs(amp_bob) ** 2, scale * abs(amp_eve) ** 2


def secrecy_rate(snr_bob: float, snr_eve: float) -> float:
    """[log2(1 + snr_bob) - log2(1 + snr_eve)]^+."""
    if not (snr_bob >= 0 and snr_eve >= 0):
        raise ValidationError("snr", f"SNRs must be nonnegative, got ({snr_bob!r}, {snr_eve!r})")
    return max(0.0, math.log2(1.0 + snr_bob) - math.log2(1.0 + snr_eve))


def secrecy_sample(cfg: SystemConfig, geom: LinkGeometry) -> SecrecySample:
    """Full pipeline: channels, optimal RIS profile, MRT, SNRs, rate."""
    channels = build_channels(cfg, geom)
    profile = optimal_phase_shifts(geom.aoa_ris_rad, geom.aod_bob_rad,
                                   cfg.n_ris_elements, cfg.element_spacing_ratio)
    return SecrecySample.from_snrs(*received_snrs(cfg, channels, profile))


def bob_eve_correlation_sq(n: int, aod_bob_rad: float, aod_eve_rad: float,
                           spacing_ratio: float = 0.5) -> float:
    """|g_E^H g_B|^2 = |sum_k exp(j k x)|^2, x = 2 pi (d/lambda)(cos psi_E - cos psi_B).

    Summing over the phase difference keeps co-directional Bob and Eve at
    exactly N^2.
    """
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise ValidationError("n", f"must be a positive integer, got {n!r}")
    _check_angle("aod_bob_rad", aod_bob_rad)
    _check_angle("aod_eve_rad", aod_eve_rad)
    x = 2.0 * math.pi * spacing_ratio * (math.cos(aod_eve_rad) - math.cos(aod_bob_rad))
    return float(abs(np.exp(1j * x * np.arange(n)).sum()) ** 2)


def secrecy_rate_closed_form(cfg: SystemConfig, geom: LinkGeometry) -> float:
    """Secrecy rate under the optimal RIS profile and MRT, in closed form.

    Bob's SNR is l_A l_B M N^2 P / sigma^2; Eve's is l_A l_E M P / sigma^2
    times |g_E^H g_B|^2. The Alice-side angles drop out.
    """
    common = cfg.path_loss(geom.dist_alice_ris_m) * cfg.m_tx_antennas * cfg.tx_snr
    n = cfg.n_ris_elements
    snr_bob = common * cfg.path_loss(geom.dist_ris_bob_m) * n * n
    snr_eve = common * cfg.path_loss(geom.dist_ris_eve_m) * bob_eve_correlation_sq(
        n, geom.aod_bob_rad, geom.aod_eve_rad, cfg.element_spacing_ratio)
    return secrecy_rate(snr_bob, snr_eve)


# Below this |sin(x/2)| the Dirichlet-kernel ratio loses digits; sum explicitly.
_KERNEL_CUTOFF = 1e-3


def correlation_sq_batch(n: int, aod_bob_rad, aod_eve_rad, spacing_ratio: float = 0.5) -> np.ndarray:
    """Vectorized |g_E^H g_B|^2 via the Dirichlet kernel sin^2(nx/2) / sin^2(x/2).

    x = 2 pi (d/lambda)(cos aod_eve - cos aod_bob). Entries whose denominator
    is tiny are summed term by term instead.
    """
    psi_b, psi_e = np.broadcast_arrays(np.asarray(aod_bob_rad, dtype=float),
                                       np.asarray(aod_eve_rad, dtype=float))
    x = 2.0 * np.pi * spacing_ratio * (np.cos(psi_e) - np.cos(psi_b))
    half = np.sin(0.5 * x)
    out = np.empty(x.shape)
    regular = np.abs(half) >= _KERNEL_CUTOFF
    out[regular] = (np.sin(0.5 * n * x[regular]) / half[regular]) ** 2
    near = ~regular
    if np.any(near):
        k = np.arange(n)
        terms = np.exp(1j * np.multiply.outer(x[near], k))
        out[near] = np.abs(terms.sum(axis=-1)) ** 2
    return out


def closed_form_rates(cfg: SystemConfig, pathloss_alice, pathloss_bob, pathloss_eve,
                      correlation_sq) -> np.ndarray:
    """Vectorized clamped secrecy rate given path losses and |g_E^H g_B|^2 (broadcasting)."""
    common = np.asarray(pathloss_alice) * cfg.m_tx_antennas * cfg.tx_snr
    n = cfg.n_ris_elements
    snr_bob = common * np.asarray(pathloss_bob) * (n * n)
    snr_eve = common * np.asarray(pathloss_eve) * np.asarray(correlation_sq)
    return np.maximum(0.0, np.log2(1.0 + snr_bob) - np.log2(1.0 + snr_eve))
