import pytest

from siccost import DieSpec, WaferSpec

WAFER_300 = dict(
    diameter=300, wafer_cost=2250, wafer_yield=0.9, defect_density=1e-7, masking_levels=4,
    wafers_per_week_min=5000, wafers_per_week_max=8000,
)
DIE_300 = dict(die_area=10, testing_cost=0.15, packaging_cost=0.08, final_test_yield=0.992)
WAFER_450 = dict(
    diameter=450, wafer_cost=3000, wafer_yield=0.875, defect_density=1.25e-7, masking_levels=4,
    wafers_per_week_min=5000, wafers_per_week_max=8000,
)
DIE_450 = dict(die_area=10, testing_cost=0.2, packaging_cost=0.1, final_test_yield=0.985)


@pytest.fixture
def config_300():
    return WaferSpec(**WAFER_300), DieSpec(**DIE_300)


@pytest.fixture
def config_300_secure():
    return WaferSpec(**WAFER_300), DieSpec(**{**DIE_300, "die_area": 11})


@pytest.fixture
def config_450():
    return WaferSpec(**WAFER_450), DieSpec(**DIE_450)


ACCEPTANCE_LINES = []
# nodeid -> passed, for every invariant-marked test run in this session
INVARIANT_OUTCOMES = {}
INVARIANT_NODEIDS = set()


def pytest_collection_modifyitems(items):
    INVARIANT_NODEIDS.update(i.nodeid for i in items if i.get_closest_marker("invariant"))
    # the invariant criterion reads the outcomes above, so it must run last
    last = [i for i in items if i.get_closest_marker("after_invariants")]
    items[:] = [i for i in items if i not in last] + last


def pytest_runtest_logreport(report):
    if report.nodeid in INVARIANT_NODEIDS and (report.when == "call" or report.outcome != "passed"):
        INVARIANT_OUTCOMES[report.nodeid] = INVARIANT_OUTCOMES.get(report.nodeid, True) and report.passed


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
