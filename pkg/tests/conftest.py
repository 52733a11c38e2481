import pytest

from amortcheck import explore, get_case


@pytest.fixture(scope="session")
def explored():
    """Explore registered cases at their documented bounds, memoized."""
    cache = {}

    def run(name):
        if name not in cache:
            cache[name] = explore(get_case(name))
        return cache[name]

    return run
