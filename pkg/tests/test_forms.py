import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import S2, q
from leafspace import sampling
from leafspace.forms import (
    AffineMap,
    DiffForm,
    directional_derivative,
    exterior_d,
    interior_product,
    lie_derivative,
    pullback,
    render,
    wedge,
)
from leafspace.scalars import PhaseError, QuadScalar, TrigScalar

dx = DiffForm.dx
seeds = st.integers(0, 2 ** 32 - 1)
dims = st.integers(1, 3)


def fn(f):
    return DiffForm.function(f)


def kernel_form():
    return dx(2, 0, S2) - dx(2, 1)


LEAF = AffineMap.linear([[1], [S2]])


# --- examples ----------------------------------------------------------------


def test_wedge_examples():
    assert wedge(dx(2, 0), dx(2, 1)) == DiffForm.basis(2, (0, 1))
    assert wedge(dx(2, 1), dx(2, 0)) == -DiffForm.basis(2, (0, 1))
    c = dx(1, 0, TrigScalar.cos((1,)))
    s = dx(1, 0, TrigScalar.sin((1,)))
    assert not wedge(c, s)


def test_exterior_d_examples():
    assert exterior_d(fn(TrigScalar.cos((1,)))) == dx(1, 0, -TrigScalar.sin((1,)))
    assert not exterior_d(dx(2, 0))
    got = exterior_d(dx(2, 0, TrigScalar.cos((0, 1))))
    assert got == DiffForm.basis(2, (0, 1), TrigScalar.sin((0, 1)))


def test_pullback_examples():
    assert not pullback(LEAF, kernel_form())
    assert not pullback(LEAF, DiffForm.basis(2, (0, 1)))
    rng = random.Random(3)
    x = sampling.random_form(rng, 3)
    assert pullback(AffineMap.identity(3), x) == x


def test_pullback_of_cos_along_leaf():
    got = pullback(LEAF, dx(2, 1, TrigScalar.cos((1, 0))))
    assert got == dx(1, 0, TrigScalar.cos((1,), S2))


def test_pullback_phase_error():
    shift = AffineMap.translation(1, [QuadScalar(1)])
    assert pullback(shift, fn(TrigScalar.cos((1,)))) == fn(-TrigScalar.sin((1,)))
    with pytest.raises(PhaseError):
        pullback(shift, fn(TrigScalar.cos((S2,))))


def test_pullback_dimension_mismatch():
    with pytest.raises(ValueError):
        pullback(AffineMap.identity(3), dx(2, 0))


def test_interior_product_examples():
    v = (1, S2)
    assert interior_product(v, DiffForm.basis(2, (0, 1))) == dx(2, 1) - dx(2, 0, S2)
    zero = interior_product(v, fn(TrigScalar.cos((1, 0))))
    assert not zero and zero.degree == 0
    assert not interior_product((1, 0), dx(2, 1))


def test_lie_derivative_examples():
    assert lie_derivative((1, 0), fn(TrigScalar.cos((1, 0)))) == fn(-TrigScalar.sin((1, 0)))
    for j in range(3):
        assert not lie_derivative((q(1), q(2, -1), q(0)), dx(3, j))
    assert not lie_derivative((1, S2), kernel_form())


def test_lie_derivative_of_kernel_form_by_direct_expansion():
    # closed and annihilated by i_v, so both Cartan terms vanish separately
    x = kernel_form()
    assert not exterior_d(x)
    assert not interior_product((1, S2), x)
    assert not directional_derivative((1, S2), x)


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        wedge(dx(2, 0), dx(3, 0))
    with pytest.raises(ValueError):
        interior_product((1, 2, 3), dx(2, 0))


def test_bad_multi_index():
    with pytest.raises(ValueError):
        DiffForm(2, 2, {(1, 0): 1})
    with pytest.raises(ValueError):
        DiffForm(2, 1, {(2,): 1})


def test_render():
    x = DiffForm.basis(2, (0, 1), TrigScalar.sin((0, 1))) + DiffForm.basis(2, (0, 1), 0)
    assert render(x) == "(sin(x2))·dx1∧dx2"
    assert render(kernel_form()) == "(√2)·dx1 - dx2"
    assert render(DiffForm.zero(3, 2)) == "0"


def test_affine_compose():
    f = AffineMap.linear([[1, 0], [0, 1], [1, 1]], [0, 1, 2])
    g = AffineMap.linear([[2], [3]], [1, 0])
    h = f.compose(g)
    assert h.matrix == ((2,), (3,), (5,))
    assert h.phase == (1, 1, 3)
    with pytest.raises(ValueError):
        g.compose(f)


# --- properties --------------------------------------------------------------


@given(seeds, dims)
def test_d_squared(seed, n):
    x = sampling.random_form(random.Random(seed), n)
    assert not exterior_d(exterior_d(x))


@given(seeds, dims)
def test_graded_leibniz(seed, n):
    rng = random.Random(seed)
    x = sampling.random_form(rng, n)
    y = sampling.random_form(rng, n, rng.randint(0, n - x.degree))
    sign = -1 if x.degree % 2 else 1
    assert exterior_d(wedge(x, y)) == wedge(exterior_d(x), y) + wedge(x, exterior_d(y)).scale(sign)


@given(seeds, dims)
def test_graded_commutativity(seed, n):
    rng = random.Random(seed)
    x = sampling.random_form(rng, n)
    y = sampling.random_form(rng, n)
    sign = -1 if (x.degree * y.degree) % 2 else 1
    assert wedge(x, y) == wedge(y, x).scale(sign)


@given(seeds, dims)
def test_pullback_functorial_and_commutes_with_d(seed, n):
    rng = random.Random(seed)
    x = sampling.random_form(rng, n)
    g = sampling.random_affine(rng, rng.randint(1, 3), n, integer=True)
    f = sampling.random_affine(rng, rng.randint(1, 3), g.source)
    assert pullback(g.compose(f), x) == pullback(f, pullback(g, x))
    assert pullback(g, exterior_d(x)) == exterior_d(pullback(g, x))


@given(seeds, dims)
def test_pullback_respects_wedge(seed, n):
    rng = random.Random(seed)
    x = sampling.random_form(rng, n)
    y = sampling.random_form(rng, n)
    g = sampling.random_affine(rng, rng.randint(1, 3), n)
    assert pullback(g, wedge(x, y)) == wedge(pullback(g, x), pullback(g, y))


@given(seeds, dims)
def test_cartan_against_directional_derivative(seed, n):
    rng = random.Random(seed)
    x = sampling.random_form(rng, n)
    v = [sampling.random_quad(rng) for _ in range(n)]
    assert lie_derivative(v, x) == directional_derivative(v, x)


@given(seeds, dims)
def test_contraction_squares_to_zero_and_is_derivation(seed, n):
    rng = random.Random(seed)
    x = sampling.random_form(rng, n)
    y = sampling.random_form(rng, n)
    v = [sampling.random_quad(rng) for _ in range(n)]
    assert not interior_product(v, interior_product(v, x))
    if x.degree:
        sign = -1 if x.degree % 2 else 1
        lhs = interior_product(v, wedge(x, y))
        assert lhs == wedge(interior_product(v, x), y) + wedge(x, interior_product(v, y)).scale(sign)


@given(seeds, dims)
def test_lie_derivative_product_rule(seed, n):
    rng = random.Random(seed)
    x = sampling.random_form(rng, n)
    y = sampling.random_form(rng, n)
    v = [sampling.random_quad(rng) for _ in range(n)]
    assert lie_derivative(v, wedge(x, y)) == wedge(lie_derivative(v, x), y) + wedge(x, lie_derivative(v, y))


@given(seeds)
def test_pullback_numerically(seed):
    # h^* (f dx_i) at t equals f(h(t)) times the i-th row of M, checked in floats
    rng = random.Random(seed)
    x = sampling.random_form(rng, 2, degree=1)
    h = sampling.random_affine(rng, 1, 2, integer=False)
    t = rng.uniform(-2, 2)
    point = [float(h.matrix[i][0]) * t for i in range(2)]
    expected = sum(x.terms[(i,)].evaluate(point) * float(h.matrix[i][0]) for i in range(2) if (i,) in x.terms)
    got = pullback(h, x).evaluate([t]).get((0,), 0.0)
    assert abs(got - expected) < 1e-8
