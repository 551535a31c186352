"""RIS phase-shift design and MRT precoding at Alice."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel_model import HALF_WAVELENGTH, ChannelSet, _check_angle
from .errors import DegenerateCascadeError, ValidationError

TWO_PI = 2.0 * math.pi
DEGENERATE_CASCADE_NORM = 1e-30


@dataclass(frozen=True)
class PhaseShiftProfile:
    """Per-element RIS phase shifts, reduced modulo 2 pi."""

    phases_rad: np.ndarray

    def __post_init__(self):
        phases = np.mod(np.asarray(self.phases_rad, dtype=float).ravel(), TWO_PI)
        if phases.size == 0 or not np.all(np.isfinite(phases)):
            raise ValidationError("phases_rad", "need at least one finite phase")
        object.__setattr__(self, "phases_rad", phases)

    def __len__(self) -> int:
        return self.phases_rad.size

    @property
    def coefficients(self) -> np.ndarray:
        """Diagonal of Theta: exp(j theta_k)."""
        return np.exp(1j * self.phases_rad)

    def apply(self, vec: np.ndarray) -> np.ndarray:
        """Theta @ vec, without materializing the diagonal matrix."""
        vec = np.asarray(vec)
        if vec.shape[-1] != len(self):
            raise ValidationError("vec", f"length {vec.shape[-1]} != {len(self)} RIS elements")
        return self.coefficients * vec


@dataclass(frozen=True)
class Precoder:
    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=complex).ravel()
        norm = np.linalg.norm(w)
        if not abs(norm - 1.0) <= 1e-12:
            raise ValidationError("weights", f"precoder must have unit norm, got {norm!r}")
        object.__setattr__(self, "weights", w)


def optimal_phase_shifts(aoa_ris_rad: float, aod_bob_rad: float, n: int,
                         spacing_ratio: float = HALF_WAVELENGTH) -> PhaseShiftProfile:
    """Phase profile that turns the incident RIS response into Bob's signature.

    theta_k = k * 2 pi (d/lambda)(cos(aoa) - cos(aod_bob)), k = 0..n-1, so that
    Theta g_ris = g_bob elementwise and the gain toward Bob is exactly n.
    """
    _check_angle("aoa_ris_rad", aoa_ris_rad)
    _check_angle("aod_bob_rad", aod_bob_rad)
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise ValidationError("n", f"must be a positive integer, got {n!r}")
    step = TWO_PI * spacing_ratio * (math.cos(aoa_ris_rad) - math.cos(aod_bob_rad))
    return PhaseShiftProfile(step * np.arange(int(n)))


def beamforming_gain(g_target: np.ndarray, profile: PhaseShiftProfile, g_ris: np.ndarray) -> float:
    """|g_target^H Theta g_ris|."""
    g_target = np.asarray(g_target)
    g_ris = np.asarray(g_ris)
    if not (g_target.shape == g_ris.shape == (len(profile),)):
        raise ValidationError(
            "g_target",
            f"length mismatch: target {g_target.shape}, ris {g_ris.shape}, profile {len(profile)}",
        )
    return float(abs(np.vdot(g_target, profile.apply(g_ris))))


def effective_channel(h: np.ndarray, profile: PhaseShiftProfile, channels: ChannelSet) -> np.ndarray:
    """Row vector h^H Theta G of length M, using the rank-one factorization of G."""
    scalar = math.sqrt(channels.pathloss_alice) * np.vdot(h, profile.apply(channels.g_ris))
    return scalar * channels.g_alice_ris.conj()


def mrt_precoder(channels: ChannelSet, profile: PhaseShiftProfile) -> Precoder:
    """Maximal-ratio transmission toward Bob: w = (h_B^H Theta G)^H / ||h_B^H Theta G||."""
    eff = effective_channel(channels.h_bob, profile, channels)
    norm = float(np.linalg.norm(eff))
    if norm < DEGENERATE_CASCADE_NORM:
        raise DegenerateCascadeError(
            f"cascade gain toward Bob is {norm:.3e}; Bob sits in a reflection null"
        )
    return Precoder(eff.conj() / norm)
