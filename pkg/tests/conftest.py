import pytest

from floorgain import ScenarioParams


@pytest.fixture(scope="session")
def preset_1ghz_75() -> ScenarioParams:
    return ScenarioParams.from_db(1e9, -30.0, -75.0)


@pytest.fixture(scope="session")
def preset_1ghz_90() -> ScenarioParams:
    return ScenarioParams.from_db(1e9, -30.0, -90.0)


@pytest.fixture(scope="session")
def preset_1ghz_100() -> ScenarioParams:
    return ScenarioParams.from_db(1e9, -30.0, -100.0)


@pytest.fixture(scope="session")
def preset_28ghz_100() -> ScenarioParams:
    return ScenarioParams.from_db(2.8e10, -30.0, -100.0)
