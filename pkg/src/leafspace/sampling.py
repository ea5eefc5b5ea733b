"""Seeded random objects for the verification suites and the tests."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from functools import lru_cache

from .diffeology import DForm, GeneratedDiffeology, dform_mode_space, zero_dform
from .foliation import LinearFoliation, basic_mode_space
from .forms import AffineMap, DiffForm
from .linalg import rank
from .scalars import ZERO, QuadScalar, TrigScalar, iter_modes


def random_rational(rng: random.Random, bound: int = 3) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, 3))


def random_quad(rng: random.Random, d: int = 2, irrational: float = 0.5, nonzero: bool = False) -> QuadScalar:
    while True:
        a = random_rational(rng)
        b = random_rational(rng) if d > 1 and rng.random() < irrational else 0
        x = QuadScalar(a, b, d)
        if x or not nonzero:
            return x


def random_frequency(rng: random.Random, n: int, bound: int = 2) -> tuple[QuadScalar, ...]:
    return tuple(QuadScalar(rng.randint(-bound, bound)) for _ in range(n))


def random_trig(rng: random.Random, n: int, d: int = 2, max_terms: int = 5, bound: int = 2) -> TrigScalar:
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        k = random_frequency(rng, n, bound)
        terms[k] = (random_quad(rng, d), random_quad(rng, d))
    return TrigScalar(n, terms)


def random_form(rng: random.Random, n: int, degree: int | None = None, d: int = 2, max_terms: int = 5, bound: int = 2) -> DiffForm:
    """A form with at most ``max_terms`` (multi-index, mode) terms."""
    if degree is None:
        degree = rng.randint(0, n)
    indices = list(itertools.combinations(range(n), degree))
    terms: dict = {}
    for _ in range(rng.randint(1, max_terms)):
        idx = rng.choice(indices)
        piece = random_trig(rng, n, d, 1, bound)
        terms[idx] = terms[idx] + piece if idx in terms else piece
    return DiffForm(n, degree, terms)


def random_affine(rng: random.Random, source: int, target: int, d: int = 2, integer: bool | None = None) -> AffineMap:
    """Random affine map; integer matrices may carry quarter-turn phases, others have zero phase."""
    if integer is None:
        integer = rng.random() < 0.5
    if integer:
        m = [[QuadScalar(rng.randint(-2, 2)) for _ in range(source)] for _ in range(target)]
        c = [QuadScalar(rng.randint(-3, 3)) for _ in range(target)]
    else:
        m = [[random_quad(rng, d) for _ in range(source)] for _ in range(target)]
        c = [ZERO] * target
    return AffineMap(tuple(map(tuple, m)), tuple(c), source)


def random_tangent(rng: random.Random, foliation: LinearFoliation, d: int = 2) -> tuple[QuadScalar, ...]:
    coeffs = [random_quad(rng, d) for _ in foliation.vectors]
    return tuple(sum((c * v[i] for c, v in zip(coeffs, foliation.vectors)), ZERO) for i in range(foliation.n))


def random_invertible(rng: random.Random, p: int, d: int = 2) -> list[list[QuadScalar]]:
    while True:
        m = [[random_quad(rng, d) for _ in range(p)] for _ in range(p)]
        if rank(m) == p:
            return m


@lru_cache(maxsize=None)
def _basic_bases(foliation: LinearFoliation, r: int, bound: int) -> tuple[DiffForm, ...]:
    out = []
    for k in iter_modes(foliation.n, bound):
        out += basic_mode_space(foliation, k, r)
    return tuple(out)


def _combination(rng: random.Random, basis, zero, d: int, max_terms: int):
    out = zero
    if not basis:
        return out
    for b in rng.sample(basis, min(len(basis), rng.randint(1, max_terms))):
        out = out + b.scale(random_quad(rng, d, nonzero=True))
    return out


def random_basic_form(rng: random.Random, foliation: LinearFoliation, degree: int | None = None, d: int = 2,
                      bound: int = 2, max_terms: int = 5) -> DiffForm:
    """Random combination of at most ``max_terms`` basic mode-space basis vectors."""
    if degree is None:
        degree = rng.choice([r for r in range(foliation.n + 1) if _basic_bases(foliation, r, bound)])
    basis = list(_basic_bases(foliation, degree, bound))
    return _combination(rng, basis, DiffForm(foliation.n, degree), d, max_terms)


@lru_cache(maxsize=None)
def _dform_bases(space: GeneratedDiffeology, r: int, bound: int) -> tuple[DForm, ...]:
    out = []
    for k in iter_modes(space.n, bound):
        out += dform_mode_space(space, k, r)
    return tuple(out)


def random_compatible_dform(rng: random.Random, space: GeneratedDiffeology, degree: int | None = None, d: int = 2,
                            bound: int = 2, max_terms: int = 5) -> DForm:
    """Random element of the solved compatibility space, from at most ``max_terms`` basis vectors."""
    if degree is None:
        degree = rng.choice([r for r in range(space.n + 1) if _dform_bases(space, r, bound)])
    basis = list(_dform_bases(space, degree, bound))
    return _combination(rng, basis, zero_dform(space, degree), d, max_terms)
