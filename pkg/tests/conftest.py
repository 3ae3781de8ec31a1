import pytest
from hypothesis import settings

settings.register_profile("suite", deadline=None, max_examples=60)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def small_groups():
    """A spread of small groups used by several property tests."""
    from bipcayley.groups import build_group
    return [build_group(orders) for orders in
            ([2], [4], [2, 2], [6], [8], [4, 2], [2, 2, 2], [3, 6], [2, 4, 2])]
