import pytest

from abundancy.sieve import sieve_b


@pytest.fixture(scope="session")
def table2():
    # shared across stats/cli/acceptance tests; ~0.3 s once
    return sieve_b(2, 1_000_000)


@pytest.fixture(scope="session")
def table3():
    return sieve_b(3, 1_000_000)
