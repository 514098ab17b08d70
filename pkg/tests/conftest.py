import math
import sys
from pathlib import Path

import pytest

from celldim import scenario as sc

sys.path.insert(0, str(Path(__file__).parent))

R = 300.0


def users_to_intensity(users, radius=R):
    return users / (math.pi * radius ** 2)


def desk(gamma=3.8, users=10.0, probabilities=(0.5, 0.5)):
    """Reference cell at a given exponent and mean number of users."""
    return sc.reference_scenario(gamma, users_to_intensity(users), probabilities)


def toy_scenario(rates=(500.0,), probabilities=(1.0,), gamma=2.0, radius=1.0, intensity=1.0,
                 n_max=8, bandwidth=250.0, min_sinr=1.0, noise=1.0, attenuation=1.0,
                 shadowing=(0.0, 0.0)):
    """Scenario with ``P K = attenuation`` and unit reference power."""
    return sc.CellScenario(
        radius_m=radius, intensity=intensity, max_subchannels_per_user=n_max,
        classes=tuple(sc.ServiceClass(c, p) for c, p in zip(rates, probabilities)),
        radio=sc.RadioParams(1.0, noise, None, 1.0, gamma, bandwidth, min_sinr, attenuation),
        shadowing=sc.ShadowingParams(*shadowing))


@pytest.fixture
def reference():
    return desk()


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "REPORT", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda l: int(l.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
