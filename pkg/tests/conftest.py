import warnings

import pytest

from pldopt.link import LinkScenario


@pytest.fixture(autouse=True)
def _quiet_threshold_warnings():
    with warnings.catch_warnings():
        warnings.filterwarnings("ignore", message="key thresholds at 0.5")
        yield


@pytest.fixture
def scn():
    """Default setup at z_eve = -5 dB, 2 mW budget."""
    return LinkScenario.from_db(0.0, -5.0, p_total=2.0)
