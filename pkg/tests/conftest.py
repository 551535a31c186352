import math

import mpmath
import pytest

from ris_secrecy import LinkGeometry, SystemConfig

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def j0_power_series(x, dps: int = 60) -> float:
    """Independent J0 oracle: ascending series in multiprecision arithmetic."""
    with mpmath.workdps(dps):
        x = mpmath.mpf(x)
        q = -(x * x) / 4
        term = mpmath.mpf(1)
        total = mpmath.mpf(1)
        k = 0
        while True:
            k += 1
            term = term * q / (k * k)
            total += term
            if k > 5 and abs(term) < mpmath.mpf(10) ** (-dps + 5):
                return float(total)


@pytest.fixture
def map_setting():
    """Secrecy-map setting: M=32, N=8, Eve at 20*sqrt(2) m along pi/4."""
    cfg = SystemConfig(m_tx_antennas=32, n_ris_elements=8)
    geom = LinkGeometry(aod_alice_rad=math.pi / 4, aoa_ris_rad=3 * math.pi / 4,
                        aod_bob_rad=math.pi / 4, aod_eve_rad=math.pi / 4,
                        dist_alice_ris_m=5 * math.sqrt(2), dist_ris_bob_m=10.0,
                        dist_ris_eve_m=20 * math.sqrt(2))
    return cfg, geom


@pytest.fixture
def sweep_geom():
    return LinkGeometry(aod_alice_rad=math.pi / 4, aoa_ris_rad=3 * math.pi / 4,
                        dist_alice_ris_m=15.0, dist_ris_bob_m=20.0, dist_ris_eve_m=30.0)
