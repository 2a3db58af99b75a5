import pytest

from rcfluct import get_distribution
from rcfluct.distributions import BUILTIN_KINDS


@pytest.fixture(params=BUILTIN_KINDS)
def dist(request):
    return get_distribution(request.param)
