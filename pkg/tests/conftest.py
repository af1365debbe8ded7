import pytest

from primecycles.analytic import make_constants
from primecycles.cycle_classes import CycleClassSpec
from primecycles.exact_enum import build_table
from primecycles.primes import build_sieve


@pytest.fixture(scope="session")
def sieve_small():
    return build_sieve(10_000)


@pytest.fixture(scope="session")
def sieve_big():
    # covers nth_prime(1e6) = 15485863 and the direct Mertens sum at 1e7
    return build_sieve(16_000_000)


@pytest.fixture(scope="session")
def primes_spec(sieve_small):
    return CycleClassSpec.primes(sieve_small)


@pytest.fixture(scope="session")
def primes_spec_big(sieve_big):
    return CycleClassSpec.primes(sieve_big)


@pytest.fixture(scope="session")
def constants():
    return make_constants()


@pytest.fixture(scope="session")
def table300(primes_spec):
    return build_table(primes_spec, 300, mode="both")


@pytest.fixture(scope="session")
def float_table_1e5(primes_spec_big):
    return build_table(primes_spec_big, 100_000, mode="float")


@pytest.fixture(scope="session")
def fast_table_1e5(primes_spec_big):
    return build_table(primes_spec_big, 100_000, mode="float",
                       use_fast_path=True)
