import os

import pytest

from mmcbrace.census import enumerate_mmc_regular
from mmcbrace.families import all_descriptors, build_family_brace
from mmcbrace.zmod import GroupShape


@pytest.fixture(autouse=True)
def _no_env_bound(monkeypatch):
    monkeypatch.delenv("BRACE_CENSUS_BOUND", raising=False)


@pytest.fixture(scope="session")
def census_m3():
    return enumerate_mmc_regular(GroupShape(2, (1, 4)), 3)


@pytest.fixture(scope="session")
def census_m3_cyclic():
    return enumerate_mmc_regular(GroupShape(2, (5,)), 3)


@pytest.fixture(scope="session")
def census_m4():
    return enumerate_mmc_regular(GroupShape(2, (1, 5)), 4)


@pytest.fixture(scope="session")
def census_m4_cyclic():
    return enumerate_mmc_regular(GroupShape(2, (6,)), 4)


@pytest.fixture(scope="session")
def descriptor_braces_m3():
    return [(d, build_family_brace(d)) for d in all_descriptors(3)]


@pytest.fixture(scope="session")
def descriptor_braces_m4():
    return [(d, build_family_brace(d)) for d in all_descriptors(4)]
