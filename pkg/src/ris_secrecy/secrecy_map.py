"""Secrecy areas: rate maps over Bob positions for a fixed Eve.

The RIS sits at the coordinate origin. Bob positions are given in polar form
(departure angle psi_B, distance d_B) on a regular grid. Angle samples are
cell centres of ``psi_range``; distance samples are the right edges of the
radial cells, so the grid reaches ``dist_range[1]`` but never 0.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field

import numpy as np

from .channel_model import LinkGeometry, SystemConfig, path_loss_linear_array
from .errors import ValidationError
from .secrecy_metrics import closed_form_rates, correlation_sq_batch, secrecy_rate_closed_form
from .simulation import MonteCarloSpec, ergodic_secrecy_rate_mc

HALF_PI = 0.5 * math.pi


@dataclass(frozen=True)
class MapSpec:
    psi_range: tuple[float, float] = (0.0, HALF_PI)
    dist_range: tuple[float, float] = (0.0, 40.0)
    psi_steps: int = 181
    dist_steps: int = 400
    thresholds_bps_hz: tuple[float, ...] = (1.0, 2.0, 4.0)

    def __post_init__(self):
        lo, hi = self.psi_range
        if not 0.0 <= lo < hi <= HALF_PI:
            raise ValidationError("psi_range", f"need 0 <= lo < hi <= pi/2, got {self.psi_range}")
        lo, hi = self.dist_range
        if not 0.0 <= lo < hi:
            raise ValidationError("dist_range", f"need 0 <= lo < hi, got {self.dist_range}")
        for name in ("psi_steps", "dist_steps"):
            value = getattr(self, name)
            if int(value) != value or value < 2:
                raise ValidationError(name, f"need an integer >= 2, got {value!r}")
        th = tuple(float(t) for t in self.thresholds_bps_hz)
        if any(t < 0 for t in th) or list(th) != sorted(th):
            raise ValidationError("thresholds_bps_hz", f"need nonnegative ascending values, got {th}")
        object.__setattr__(self, "psi_range", tuple(map(float, self.psi_range)))
        object.__setattr__(self, "dist_range", tuple(map(float, self.dist_range)))
        object.__setattr__(self, "thresholds_bps_hz", th)

    def psi_values(self) -> np.ndarray:
        lo, hi = self.psi_range
        return lo + (np.arange(self.psi_steps) + 0.5) * (hi - lo) / self.psi_steps

    def dist_values(self) -> np.ndarray:
        lo, hi = self.dist_range
        return lo + (np.arange(self.dist_steps) + 1.0) * (hi - lo) / self.dist_steps


@dataclass
class SecrecyGrid:
    """Rates on a (psi_B, d_B) grid; ``rates[i, j]`` is at psi[i], dist[j]."""

    psi_rad: np.ndarray
    dist_m: np.ndarray
    rates: np.ndarray
    eve_psi_rad: float
    eve_dist_m: float
    metadata: dict = field(default_factory=dict)

    def region_mask(self, r0: float) -> np.ndarray:
        return self.rates >= r0

    def region_cells(self, r0: float) -> int:
        return int(np.count_nonzero(self.region_mask(r0)))

    def long_rows(self):
        """(psi_rad, dist_m, rate) rows, angle-major."""
        for i, psi in enumerate(self.psi_rad):
            for j, d in enumerate(self.dist_m):
                yield float(psi), float(d), float(self.rates[i, j])


@dataclass(frozen=True)
class Contour:
    threshold: float
    points: list
    full_area: bool = False
    zero_area: bool = False


def _check_eve(geom: LinkGeometry) -> None:
    if not 0.0 < geom.aod_eve_rad < HALF_PI:
        raise ValidationError("aod_eve_rad", f"Eve's direction must lie in (0, pi/2), got {geom.aod_eve_rad!r}")


def compute_map(cfg: SystemConfig, geom: LinkGeometry, spec: MapSpec,
                mc: MonteCarloSpec | None = None) -> SecrecyGrid:
    """Secrecy rate at every Bob position on the grid.

    ``geom`` supplies Eve's position and the Alice-side geometry; its Bob
    fields are ignored. By default each cell is the closed-form rate. Passing
    ``mc`` averages every cell over ``mc.randomize`` instead (slow).
    """
    _check_eve(geom)
    psi = spec.psi_values()
    dist = spec.dist_values()
    if mc is None:
        l_a = cfg.path_loss(geom.dist_alice_ris_m)
        l_e = cfg.path_loss(geom.dist_ris_eve_m)
        l_b = path_loss_linear_array(dist, cfg.pathloss_alpha_db, cfg.pathloss_beta)
        corr = correlation_sq_batch(cfg.n_ris_elements, psi, geom.aod_eve_rad, cfg.element_spacing_ratio)
        rates = closed_form_rates(cfg, l_a, l_b[None, :], l_e, corr[:, None])
        mode = "closed_form"
    else:
        rates = np.empty((psi.size, dist.size))
        for i, p in enumerate(psi):
            for j, d in enumerate(dist):
                cell = dataclasses.replace(geom, aod_bob_rad=float(p), dist_ris_bob_m=float(d))
                rates[i, j] = ergodic_secrecy_rate_mc(cfg, cell, mc).mean_rate_bps_hz
        mode = "monte_carlo"
    meta = {"mode": mode, "m_tx_antennas": cfg.m_tx_antennas, "n_ris_elements": cfg.n_ris_elements}
    if mc is not None:
        meta.update(seed=mc.seed, trials=mc.trials)
    return SecrecyGrid(psi, dist, rates, geom.aod_eve_rad, geom.dist_ris_eve_m, meta)


def max_secure_distance(cfg: SystemConfig, geom: LinkGeometry, psi_b: float, r0: float,
                        d_max: float = 40.0, d_min: float = 1e-3, tol: float = 0.01) -> float | None:
    """Largest d_B along direction psi_b whose secrecy rate still reaches r0.

    The rate is decreasing in d_B, so bisection on the closed form applies.
    Returns ``d_max`` if the whole segment qualifies and None if even
    ``d_min`` fails.
    """
    if r0 < 0:
        raise ValidationError("r0", f"threshold must be nonnegative, got {r0!r}")

    def rate(d: float) -> float:
        return secrecy_rate_closed_form(
            cfg, dataclasses.replace(geom, aod_bob_rad=psi_b, dist_ris_bob_m=d))

    if rate(d_max) >= r0:
        return d_max
    if rate(d_min) < r0:
        return None
    lo, hi = d_min, d_max
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if rate(mid) >= r0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def extract_contour(grid: SecrecyGrid, r0: float) -> Contour:
    """Points where the rate crosses r0 along each angular column.

    Crossings are located by linear interpolation in d_B between adjacent
    cells. Points are ordered by angle, then distance.
    """
    mask = grid.region_mask(r0)
    points = []
    for i, psi in enumerate(grid.psi_rad):
        col = grid.rates[i] - r0
        idx = np.nonzero((col[:-1] >= 0) != (col[1:] >= 0))[0]
        for j in idx:
            a, b = col[j], col[j + 1]
            t = a / (a - b)
            d = grid.dist_m[j] + t * (grid.dist_m[j + 1] - grid.dist_m[j])
            points.append((float(psi), float(d)))
    return Contour(float(r0), points,
                   full_area=not points and bool(mask.all()),
                   zero_area=not points and not mask.any())


def column_index(grid: SecrecyGrid, psi: float) -> int:
    return int(np.argmin(np.abs(grid.psi_rad - psi)))
