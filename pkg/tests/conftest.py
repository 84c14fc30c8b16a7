from functools import lru_cache

import pytest

from qmink import qalgebra as qa
from qmink.catalog import CaseSpec, default_grid
from qmink.structures import structures_for


@lru_cache(maxsize=None)
def cached_structures(spec: CaseSpec):
    return structures_for(spec)


@lru_cache(maxsize=None)
def cached_table(spec: CaseSpec):
    return qa.build_rewrite_table(cached_structures(spec).R)


GRID = default_grid()
CLASSICAL = CaseSpec(1, t=1.0)


@pytest.fixture(params=GRID, ids=lambda s: s.label())
def grid_spec(request):
    return request.param
