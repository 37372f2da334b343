"""Shared fixtures: bundled instances and the checklist results."""

import pytest

from schoolmatch import deferred_acceptance, example1, example2, example3


@pytest.fixture(scope="session")
def e1_7():
    return example1(7)


@pytest.fixture(scope="session")
def e1_7_da(e1_7):
    matching, trace = deferred_acceptance(e1_7)
    return matching, trace


@pytest.fixture(scope="session")
def e2():
    return example2()


@pytest.fixture(scope="session")
def e3():
    return example3()


@pytest.fixture(scope="session")
def verify_results():
    from schoolmatch import verification

    return verification.run_all()
