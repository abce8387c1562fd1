import pytest

from crcforge import ConvCode, build_tables, collect_iees, expand_and_dedup


@pytest.fixture(scope="session")
def code1317():
    return ConvCode(["13", "17"], 3)


@pytest.fixture(scope="session")
def db70(code1317):
    # One database reused across design, spectrum, and reuse tests.
    return collect_iees(code1317, 18, 70)


@pytest.fixture(scope="session")
def paths70(db70):
    return expand_and_dedup(build_tables(db70, 70, 18), 70)
