import random

import pytest

from app.algebra.field import GF, QQ
from app.presentations.maps import make_map
from app.presentations.ring import make_ring
from app.verify.generator import GenParams


def ring(vars, relations=lambda *v: (), field=QQ, N=6, **kw):
    """Build K[vars]/(relations); ``relations`` receives the variables as polynomials."""
    R = make_ring(field, vars, (), N)
    rels = relations(*R.variables())
    return make_ring(field, vars, rels, N, **kw)


@pytest.fixture
def plane():
    """QQ[x,y]."""
    return ring(("x", "y"))


@pytest.fixture
def line_t():
    return ring(("t",))


@pytest.fixture
def line_y():
    return ring(("y",))


@pytest.fixture
def square_map(line_t, line_y):
    """QQ[t] -> QQ[y], t |-> y^2: flat but not basically regular."""
    (y,) = line_y.variables()
    return make_map(line_t, line_y, [y**2], name="f")


@pytest.fixture
def gf5_params():
    return GenParams(field="GF(5)", seed=7, trunc_degree=5)


@pytest.fixture
def rng():
    return random.Random(1234)


@pytest.fixture
def gf5():
    return GF(5)


@pytest.fixture
def build():
    """The ``ring`` builder, for tests that need their own presentations."""
    return ring
