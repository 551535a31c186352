"""Closed-form ergodic machinery: Bessel J0, eta(N), and the secrecy-rate bounds."""

from __future__ import annotations

import math

import numpy as np

from .channel_model import SystemConfig
from .errors import AssumptionViolation, ValidationError

EULER_GAMMA = 0.57721566490153286

SERIES_CUTOFF = 12.0
_SERIES_TOL = 1e-18
_MIN_HANKEL_TERMS = 6


def _j0_series(x: np.ndarray) -> np.ndarray:
    """Ascending series sum_k (-x^2/4)^k / (k!)^2."""
    q = -0.25 * x * x
    term = np.ones_like(x)
    total = np.ones_like(x)
    k = 0
    while True:
        k += 1
        term = term * q / (k * k)
        total = total + term
        if np.max(np.abs(term), initial=0.0) < _SERIES_TOL:
            return total


def _j0_hankel(x: np.ndarray) -> np.ndarray:
    """Hankel expansion sqrt(2/(pi x)) [P cos(x - pi/4) - Q sin(x - pi/4)].

    With t_k = prod_{j<=k} (2j-1)^2 / (k! (8x)^k):
    P = 1 - t_2 + t_4 - ..., Q = -t_1 + t_3 - ...
    Both series are asymptotic, so each entry stops at its smallest term
    (never before six corrections) or once terms drop below 1e-18.
    """
    p = np.ones_like(x)
    q = np.zeros_like(x)
    term = np.ones_like(x)
    prev = np.full_like(x, np.inf)
    active = np.ones(x.shape, dtype=bool)
    k = 0
    while np.any(active) and k < 100:
        k += 1
        term = term * (2 * k - 1) ** 2 / (8.0 * k * x)
        if k > _MIN_HANKEL_TERMS:
            active &= (term < prev) & (prev > _SERIES_TOL)
        if k % 2:
            q = np.where(active, q + (-1) ** ((k + 1) // 2) * term, q)
        else:
            p = np.where(active, p + (-1) ** (k // 2) * term, p)
        prev = np.where(active, term, prev)
    phase = x - 0.25 * math.pi
    return np.sqrt(2.0 / (math.pi * x)) * (p * np.cos(phase) - q * np.sin(phase))


def bessel_j0(x):
    """Bessel function of the first kind, order zero.

    Power series for |x| < 12, Hankel asymptotic expansion beyond.
    Accepts scalars or arrays.
    """
    arr = np.abs(np.asarray(x, dtype=float))
    if not np.all(np.isfinite(arr)):
        raise ValidationError("x", "J0 argument must be finite")
    out = np.empty(arr.shape)
    small = arr < SERIES_CUTOFF
    if np.any(small):
        out[small] = _j0_series(arr[small])
    if np.any(~small):
        out[~small] = _j0_hankel(arr[~small])
    return float(out) if out.ndim == 0 else out


def bessel_j0_asymptotic(x):
    """Leading-order large-argument form sqrt(2/(pi x)) cos(x - pi/4)."""
    x = np.asarray(x, dtype=float)
    out = np.sqrt(2.0 / (np.pi * x)) * np.cos(x - 0.25 * np.pi)
    return float(out) if out.ndim == 0 else out


def eta(n: int) -> float:
    """Large-N approximation of E|g_E^H g_B|^2 under independent U(0, pi) angles.

    eta = N - (2/pi^2)(N-1) + (2N/pi^2)(ln N + gamma), natural log.
    """
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise ValidationError("n", f"must be a positive integer, got {n!r}")
    c = 2.0 / math.pi ** 2
    return n - c * (n - 1) + c * n * (math.log(n) + EULER_GAMMA)


def expected_correlation_sq_exact(n: int) -> float:
    """E|g_E^H g_B|^2 before the large-argument step: N + 2 sum_{k<N} (N-k) J0(k pi)^2."""
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise ValidationError("n", f"must be a positive integer, got {n!r}")
    k = np.arange(1, int(n))
    return float(n + 2.0 * np.sum((n - k) * np.asarray(bessel_j0(k * math.pi)) ** 2))


def _check_loss(name: str, value: float) -> None:
    if not (math.isfinite(value) and value > 0):
        raise ValidationError(name, f"path loss must be positive, got {value!r}")


def ergodic_lower_bound(cfg: SystemConfig, l_a: float, l_b: float, l_e: float) -> float:
    """Jensen lower bound on the ergodic secrecy rate (bps/Hz).

    log2(1 + l_A l_B M N^2 P/sigma^2) - log2(1 + l_A l_E M P eta / sigma^2).
    Requires l_B >= l_E. The value is not clamped and may be negative.
    """
    for name, value in (("l_a", l_a), ("l_b", l_b), ("l_e", l_e)):
        _check_loss(name, value)
    if l_b < l_e:
        raise AssumptionViolation(
            f"bound requires l_B >= l_E (Bob no farther than Eve); got l_B={l_b:.6g} < l_E={l_e:.6g}"
        )
    n = cfg.n_ris_elements
    common = l_a * cfg.m_tx_antennas * cfg.tx_snr
    return math.log2(1.0 + common * l_b * n * n) - math.log2(1.0 + common * l_e * eta(n))


def saturation_limit(n: int, l_b: float, l_e: float) -> float:
    """High-SNR limit of the lower bound, log2(N^2 l_B / (eta l_E))."""
    _check_loss("l_b", l_b)
    _check_loss("l_e", l_e)
    return math.log2(n * n * l_b / (eta(n) * l_e))


def asymptotic_bound(n: int, l_b: float, l_e: float) -> float:
    """Large-N, large-M form log2(N pi^2 l_B / (2 l_E)).

    Independent of M, P, sigma^2 and l_A. Note eta grows like (2N/pi^2) ln N,
    so this expression exceeds ``saturation_limit`` by about log2(ln N + gamma).
    """
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise ValidationError("n", f"must be a positive integer, got {n!r}")
    _check_loss("l_b", l_b)
    _check_loss("l_e", l_e)
    return math.log2(n * math.pi ** 2 * l_b / (2.0 * l_e))
