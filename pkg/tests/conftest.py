import pytest

from voa.affine import AffineSpec, build_affine, build_quotient
from voa.formal import Q
from voa.heisenberg import HeisenbergSpec, build_m1
from voa.lattice import LatticeSpec, build_lattice_voa
from voa.virasoro import build_virasoro


@pytest.fixture
def m1():
    return build_m1(HeisenbergSpec(1))


@pytest.fixture
def m1_rank2():
    return build_m1(HeisenbergSpec(2))


@pytest.fixture
def va1():
    return build_lattice_voa(LatticeSpec.preset("A1"), name="A1")


@pytest.fixture
def vhalf():
    return build_virasoro(Q(1, 2))


@pytest.fixture
def aff1():
    return build_affine(AffineSpec(1))


@pytest.fixture
def l10():
    return build_quotient(AffineSpec(1), cap=4)


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in module.summary_lines():
        terminalreporter.write_line(line)
