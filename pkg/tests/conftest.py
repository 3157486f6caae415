
import numpy as np
import pytest

from tfsdc.combs import CombSpec, make_biphoton_comb
from tfsdc.presets import load_preset


@pytest.fixture(scope="session")
def ppln():
    return load_preset("ppln")


@pytest.fixture(scope="session")
def ppktp():
    return load_preset("ppktp")


@pytest.fixture
def unit_spec():
    # dimensionless comb: spacing 1 rad/s, period 2 pi
    return CombSpec(0.0, 1.0, truncation=8)


@pytest.fixture
def optical_spec():
    return CombSpec.from_fsr(20e9, truncation=6)


@pytest.fixture
def biphoton(optical_spec):
    return make_biphoton_comb(optical_spec)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(mod.RESULTS, key=lambda s: int(s.split()[1].rstrip("]"))):
            terminalreporter.write_line(line)
