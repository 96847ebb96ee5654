import shutil

import pytest

from .. import assets, factories


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="Run the tests marked slow.")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(autouse=True)
def enable_db_access_for_all_tests(db):
    pass


@pytest.fixture
def run():
    return factories.VerificationRunFactory()


@pytest.fixture
def assets_copy(tmp_path, monkeypatch):
    """A writable copy of the bundled data directory, in use for the test."""
    target = tmp_path / "data"
    shutil.copytree(assets.data_dir(), target)
    monkeypatch.setenv("WORDREP_ASSETS", str(target))
    return target
