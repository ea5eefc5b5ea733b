import sys
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from leafspace.foliation import LinearFoliation
from leafspace.scalars import QuadScalar

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ROOT = Path(__file__).resolve().parents[1]
SCENARIOS = ROOT / "scenarios"

S2 = QuadScalar.sqrt(2)

KRONECKER = LinearFoliation(((QuadScalar(1), S2),), "kronecker")
CIRCLES = LinearFoliation(((QuadScalar(1), QuadScalar(0)),), "circles")
KRONECKER_X_S1 = LinearFoliation(((QuadScalar(1), S2, QuadScalar(0)),), "plane")
SHIPPED = {"kronecker": KRONECKER, "circles": CIRCLES, "plane": KRONECKER_X_S1}


def q(*args):
    """q(a) rational, q(a, b) = a + b sqrt 2."""
    return QuadScalar(*args, 2) if len(args) == 2 else QuadScalar(args[0])


fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@st.composite
def quads(draw, d=2, nonzero=False):
    a = draw(fractions)
    b = draw(fractions)
    x = QuadScalar(a, b, d)
    if nonzero and not x:
        x = QuadScalar(a + 1, b, d)
    return x


@pytest.fixture
def kronecker():
    return KRONECKER


def as_float(x: QuadScalar) -> float:
    return float(x.a) + float(x.b) * x.d ** 0.5


def frac(x):
    return Fraction(x)
