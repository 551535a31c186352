"""Monte Carlo engine for ergodic secrecy rates.

Trials are processed in fixed-size blocks. Block ``b`` draws from its own
generator seeded by ``SeedSequence(seed, spawn_key=(b,))``, so the random
stream of every trial depends only on (seed, trial index) and results are
bit-identical for any worker count.
"""

from __future__ import annotations

import dataclasses
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .bounds import ergodic_lower_bound
from .channel_model import LinkGeometry, SystemConfig
from .errors import AssumptionViolation, ValidationError
from .secrecy_metrics import closed_form_rates, correlation_sq_batch, secrecy_sample

log = logging.getLogger(__name__)

BLOCK_SIZE = 1 << 15

ANGLE_FIELDS = {
    "aod_alice": "aod_alice_rad",
    "aoa_ris": "aoa_ris_rad",
    "aod_bob": "aod_bob_rad",
    "aod_eve": "aod_eve_rad",
}
# Draws one angle per trial and uses it for both Bob and Eve.
SHARED_BOB_EVE = "bob_eve_shared"
_DRAW_ORDER = ("aod_alice", "aoa_ris", "aod_bob", "aod_eve", SHARED_BOB_EVE)

SWEEP_PARAMETERS = ("M", "N", "d_B", "P")


@dataclass(frozen=True)
class MonteCarloSpec:
    trials: int = 100_000
    seed: int = 20221
    randomize: frozenset = field(default_factory=lambda: frozenset({"aod_bob", "aod_eve"}))
    workers: int = 1

    def __post_init__(self):
        if isinstance(self.trials, bool) or int(self.trials) != self.trials or self.trials < 1:
            raise ValidationError("trials", f"must be a positive integer, got {self.trials!r}")
        if isinstance(self.seed, bool) or int(self.seed) != self.seed or not 0 <= self.seed < 2 ** 64:
            raise ValidationError("seed", f"must be an unsigned 64-bit integer, got {self.seed!r}")
        if int(self.workers) != self.workers or self.workers < 1:
            raise ValidationError("workers", f"must be a positive integer, got {self.workers!r}")
        names = frozenset(self.randomize)
        unknown = names - set(_DRAW_ORDER)
        if unknown:
            raise ValidationError("randomize", f"unknown angle names {sorted(unknown)}; "
                                               f"choose from {list(_DRAW_ORDER)}")
        if SHARED_BOB_EVE in names and names & {"aod_bob", "aod_eve"}:
            raise ValidationError("randomize", f"{SHARED_BOB_EVE} excludes aod_bob/aod_eve")
        object.__setattr__(self, "randomize", names)
        object.__setattr__(self, "trials", int(self.trials))
        object.__setattr__(self, "seed", int(self.seed))


@dataclass(frozen=True)
class ErgodicEstimate:
    mean_rate_bps_hz: float
    std_error: float
    trials: int

    @classmethod
    def from_samples(cls, samples: np.ndarray) -> "ErgodicEstimate":
        n = samples.size
        std = float(np.std(samples, ddof=1)) if n > 1 else 0.0
        return cls(float(np.mean(samples)), std / math.sqrt(n), n)


def _block_bounds(trials: int) -> list[tuple[int, int]]:
    return [(start, min(start + BLOCK_SIZE, trials)) for start in range(0, trials, BLOCK_SIZE)]


def _block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(block,))))


def _uniform_open(rng: np.random.Generator, size: int) -> np.ndarray:
    """U(0, pi) with both endpoints excluded."""
    angles = rng.uniform(0.0, math.pi, size)
    zero = angles <= 0.0
    while np.any(zero):
        angles[zero] = rng.uniform(0.0, math.pi, int(zero.sum()))
        zero = angles <= 0.0
    return angles


def draw_angles(mc: MonteCarloSpec, geom: LinkGeometry, rng: np.random.Generator,
                size: int) -> dict[str, np.ndarray]:
    """Per-trial angles for one block, keyed by LinkGeometry field name."""
    out = {attr: np.full(size, getattr(geom, attr)) for attr in ANGLE_FIELDS.values()}
    for name in _DRAW_ORDER:
        if name not in mc.randomize:
            continue
        draw = _uniform_open(rng, size)
        if name == SHARED_BOB_EVE:
            out["aod_bob_rad"] = draw
            out["aod_eve_rad"] = draw.copy()
        else:
            out[ANGLE_FIELDS[name]] = draw
    return out


def _run_blocks(mc: MonteCarloSpec, block_fn: Callable[[np.random.Generator, int], np.ndarray]) -> np.ndarray:
    blocks = _block_bounds(mc.trials)

    def work(i: int) -> np.ndarray:
        start, stop = blocks[i]
        return block_fn(_block_rng(mc.seed, i), stop - start)

    if mc.workers > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=mc.workers) as pool:
            parts = list(pool.map(work, range(len(blocks))))
    else:
        parts = [work(i) for i in range(len(blocks))]
    return np.concatenate(parts)


def secrecy_rate_samples(cfg: SystemConfig, geom_template: LinkGeometry, mc: MonteCarloSpec,
                         method: str = "closed_form") -> np.ndarray:
    """Per-trial clamped secrecy rates, in trial-index order.

    ``method="closed_form"`` evaluates the optimal-reflection rate vectorized;
    ``method="pipeline"`` builds channels, RIS profile and MRT precoder per
    trial (slow; parity checks only).
    """
    if method not in ("closed_form", "pipeline"):
        raise ValidationError("method", f"unknown method {method!r}")
    l_a = cfg.path_loss(geom_template.dist_alice_ris_m)
    l_b = cfg.path_loss(geom_template.dist_ris_bob_m)
    l_e = cfg.path_loss(geom_template.dist_ris_eve_m)

    def block(rng: np.random.Generator, size: int) -> np.ndarray:
        angles = draw_angles(mc, geom_template, rng, size)
        if method == "pipeline":
            return np.array([
                secrecy_sample(cfg, dataclasses.replace(
                    geom_template, **{k: float(v[i]) for k, v in angles.items()})).secrecy_rate_bps_hz
                for i in range(size)
            ])
        corr = correlation_sq_batch(cfg.n_ris_elements, angles["aod_bob_rad"],
                                    angles["aod_eve_rad"], cfg.element_spacing_ratio)
        return closed_form_rates(cfg, l_a, l_b, l_e, corr)

    return _run_blocks(mc, block)


def ergodic_secrecy_rate_mc(cfg: SystemConfig, geom_template: LinkGeometry, mc: MonteCarloSpec,
                            method: str = "closed_form") -> ErgodicEstimate:
    """Ergodic secrecy rate: mean of the per-trial rate over the randomized angles."""
    if not mc.randomize:
        raise ValidationError("randomize", "ergodic estimates need at least one randomized angle")
    return ErgodicEstimate.from_samples(secrecy_rate_samples(cfg, geom_template, mc, method))


def expected_gain_sq_mc(n: int, mc: MonteCarloSpec, spacing_ratio: float = 0.5) -> ErgodicEstimate:
    """Brute-force E|g_E^H g_B|^2 over independent U(0, pi) Bob/Eve angles.

    Builds both steering vectors explicitly for every trial and takes the
    inner product; ``mc.randomize`` is ignored.
    """
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise ValidationError("n", f"must be a positive integer, got {n!r}")
    n = int(n)
    k = np.arange(n)
    chunk = max(1, (1 << 22) // n)

    def block(rng: np.random.Generator, size: int) -> np.ndarray:
        psi_b = _uniform_open(rng, size)
        psi_e = _uniform_open(rng, size)
        out = np.empty(size)
        for lo in range(0, size, chunk):
            hi = min(lo + chunk, size)
            g_b = np.exp(-2j * np.pi * spacing_ratio * np.multiply.outer(np.cos(psi_b[lo:hi]), k))
            g_e = np.exp(-2j * np.pi * spacing_ratio * np.multiply.outer(np.cos(psi_e[lo:hi]), k))
            g_b[:, 0] = 1.0
            g_e[:, 0] = 1.0
            out[lo:hi] = np.abs(np.einsum("tk,tk->t", g_e.conj(), g_b)) ** 2
        return out

    return ErgodicEstimate.from_samples(_run_blocks(mc, block))


@dataclass(frozen=True)
class SweepPoint:
    value: float
    estimate: ErgodicEstimate | None
    lower_bound: float | None
    error: str | None = None


def apply_parameter(cfg: SystemConfig, geom: LinkGeometry, parameter: str, value):
    """Return (cfg, geom) with one sweep parameter replaced."""
    if parameter == "M":
        if int(value) != value:
            raise ValidationError("m_tx_antennas", f"must be an integer, got {value!r}")
        return dataclasses.replace(cfg, m_tx_antennas=int(value)), geom
    if parameter == "N":
        if int(value) != value:
            raise ValidationError("n_ris_elements", f"must be an integer, got {value!r}")
        return dataclasses.replace(cfg, n_ris_elements=int(value)), geom
    if parameter == "d_B":
        return cfg, dataclasses.replace(geom, dist_ris_bob_m=float(value))
    if parameter == "P":
        return dataclasses.replace(cfg, tx_power_watts=float(value)), geom
    raise ValidationError("parameter", f"must be one of {SWEEP_PARAMETERS}, got {parameter!r}")


def sweep(cfg_base: SystemConfig, parameter: str, values: Sequence, geom: LinkGeometry,
          mc: MonteCarloSpec) -> list[SweepPoint]:
    """Ergodic rate (and its lower bound where valid) for each parameter value.

    Invalid values produce a point with ``error`` set; the sweep continues.
    """
    if parameter not in SWEEP_PARAMETERS:
        raise ValidationError("parameter", f"must be one of {SWEEP_PARAMETERS}, got {parameter!r}")
    if len(values) == 0:
        raise ValidationError("values", "sweep needs at least one value")
    points = []
    for value in values:
        try:
            cfg, g = apply_parameter(cfg_base, geom, parameter, value)
            estimate = ergodic_secrecy_rate_mc(cfg, g, mc)
        except (ValidationError, ValueError, TypeError) as exc:
            log.warning("sweep %s=%r skipped: %s", parameter, value, exc)
            points.append(SweepPoint(value, None, None, str(exc)))
            continue
        try:
            bound = ergodic_lower_bound(cfg, cfg.path_loss(g.dist_alice_ris_m),
                                        cfg.path_loss(g.dist_ris_bob_m), cfg.path_loss(g.dist_ris_eve_m))
        except AssumptionViolation:
            bound = None
        points.append(SweepPoint(value, estimate, bound))
    return points
