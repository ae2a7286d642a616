import sys
from pathlib import Path

import pytest

from txanon import kernels
from txanon.taxonomy import load_taxonomy
from txanon.translog import parse_transactions

DATA = Path(__file__).parent / "data"
BACKENDS = kernels.available()


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA


@pytest.fixture(scope="session")
def food():
    return load_taxonomy((DATA / "food.tsv").read_text())


@pytest.fixture(scope="session")
def baskets(food):
    return parse_transactions((DATA / "baskets.tsv").read_text(), food)


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param



def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[1].rstrip("]"))):
            terminalreporter.write_line(line)
