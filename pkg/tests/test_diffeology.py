import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import CIRCLES, KRONECKER, KRONECKER_X_S1, S2, SHIPPED
from leafspace import sampling
from leafspace.diffeology import (
    B_inverse,
    B_map,
    DForm,
    DiffeologyError,
    F_map,
    G_map,
    GeneratedDiffeology,
    IncompletePresentationError,
    NotBasicError,
    RelationWitness,
    check_dform,
    dform_d,
    dform_mode_space,
    dform_pullback,
    lift_independence_check,
    lifted_diffeology,
    make_quotient_plot,
    make_torus_plot,
    pi_star,
    projection,
    smooth_map,
    standard_quotient_diffeology,
    standard_torus_diffeology,
    zero_dform,
)
from leafspace.cohomology import quotient_betti
from leafspace.foliation import is_basic
from leafspace.forms import AffineMap, DiffForm, exterior_d, pullback
from leafspace.scalars import QuadScalar, TrigScalar

dx = DiffForm.dx
KERNEL = dx(2, 0, S2) - dx(2, 1)
LEAF = AffineMap.linear([[1], [S2]])
T2 = standard_torus_diffeology(2)
QK = standard_quotient_diffeology(KRONECKER)
seeds = st.integers(0, 2 ** 32 - 1)


def test_quotient_plots():
    cover = make_quotient_plot(AffineMap.identity(2), KRONECKER, "q")
    assert cover.is_quotient and cover.domain_dim == 2
    point = make_quotient_plot(AffineMap.constant_map(0, [1, 2]), KRONECKER, "pt")
    assert point.domain_dim == 0
    leaf = make_quotient_plot(LEAF, KRONECKER, "leaf")
    assert leaf.body == LEAF


def test_alternate_lift_must_project_to_same_plot():
    with pytest.raises(DiffeologyError):
        make_quotient_plot(AffineMap.identity(2), KRONECKER, "q", alternates=(AffineMap.translation(2, [0, 1]),))
    ok = make_quotient_plot(AffineMap.identity(2), KRONECKER, "q", alternates=(AffineMap.translation(2, [1, S2]),))
    assert len(ok.lifts) == 2


def test_witness_must_intertwine():
    gens = (make_torus_plot(AffineMap.identity(1), "q"), make_torus_plot(AffineMap.linear([[2]]), "double"))
    with pytest.raises(DiffeologyError, match="does not intertwine"):
        GeneratedDiffeology(1, gens, (RelationWitness("double", "q", AffineMap.linear([[3]])),))


def test_check_dform_examples():
    assert check_dform(zero_dform(T2, 1))
    omega = dx(2, 0, TrigScalar.cos((1, 1)))
    assert check_dform(F_map(omega, T2))
    # dt on one generator, 0 on a generator related by the identity
    gens = (make_torus_plot(AffineMap.identity(1), "q"), make_torus_plot(AffineMap.identity(1), "copy"))
    space = GeneratedDiffeology(1, gens, (RelationWitness("copy", "q", AffineMap.identity(1)),))
    bad = DForm(space, 1, {"q": dx(1, 0), "copy": DiffForm.zero(1, 1)})
    verdict = check_dform(bad)
    assert not verdict and "copy<-q" in verdict.witness


def test_dform_d():
    const = F_map(DiffForm.constant(2, 5), T2)
    assert not dform_d(const)
    omega = dx(2, 1, TrigScalar.sin((2, 1)))
    assert dform_d(F_map(omega, T2)) == F_map(exterior_d(omega), T2)


@given(seeds)
def test_dform_d_squared(seed):
    theta = sampling.random_compatible_dform(random.Random(seed), QK)
    assert not dform_d(dform_d(theta))


def test_dform_pullback_identity_and_constant():
    theta = F_map(dx(2, 0, TrigScalar.cos((1, 0))) + dx(2, 1), T2)
    ident = smooth_map(T2, T2, AffineMap.identity(2))
    assert dform_pullback(ident, theta) == theta
    const = smooth_map(T2, T2, AffineMap.constant_map(2, [0, 0]))
    assert not dform_pullback(const, theta)
    f0 = F_map(DiffForm.function(TrigScalar.cos((1, 0), 3)), T2)
    pulled = dform_pullback(const, f0)
    assert all(c == DiffForm.constant(c.dim, 3) for c in pulled.components.values())


@given(seeds)
def test_dform_pullback_functorial(seed):
    rng = random.Random(seed)
    a = AffineMap.linear([[rng.randint(-2, 2) for _ in range(2)] for _ in range(2)], [rng.randint(-3, 3), 0])
    b = AffineMap.linear([[rng.randint(-2, 2) for _ in range(2)] for _ in range(2)])
    f, g = smooth_map(T2, T2, a), smooth_map(T2, T2, b)
    theta = F_map(sampling.random_form(rng, 2), T2)
    assert dform_pullback(g.compose(f), theta) == dform_pullback(f, dform_pullback(g, theta))
    assert dform_pullback(f, theta) == F_map(pullback(a, G_map(theta)), T2)


def test_plot_not_generated():
    lone = GeneratedDiffeology(1, (make_torus_plot(AffineMap.linear([[2]]), "double"),))
    with pytest.raises(DiffeologyError, match="plot not generated"):
        smooth_map(standard_torus_diffeology(1), lone, AffineMap.identity(1))


def test_smooth_map_rejects_non_lattice_matrix():
    with pytest.raises(DiffeologyError):
        smooth_map(T2, T2, AffineMap.linear([[S2, 0], [0, 1]]))


def test_map_must_preserve_leaves():
    with pytest.raises(DiffeologyError, match="leaves"):
        smooth_map(QK, QK, AffineMap.linear([[0, 1], [1, 0]]))


# --- F and G -----------------------------------------------------------------


def test_F_examples():
    assert not F_map(DiffForm.zero(2, 1), T2)
    assert F_map(dx(2, 0), T2)["q"] == dx(2, 0)
    line = GeneratedDiffeology(2, (make_torus_plot(AffineMap.identity(2), "q"), make_torus_plot(LEAF, "beta")))
    got = F_map(dx(2, 1, TrigScalar.cos((1, 0))), line)["beta"]
    assert got == dx(1, 0, TrigScalar.cos((1,), S2))


def test_G_examples():
    omega = dx(2, 0, TrigScalar.cos((1, 2))) + dx(2, 1, 3)
    assert G_map(F_map(omega, T2)) == omega
    assert not G_map(zero_dform(T2, 2))


def test_G_rejects_half_integer_frequency():
    line = standard_torus_diffeology(1)
    theta = DForm(line, 1, {g.name: DiffForm(1, 1) for g in line.generators})
    comps = dict(theta.components)
    comps["q"] = dx(1, 0, TrigScalar.cos((Fraction(1, 2),)))
    with pytest.raises(DiffeologyError, match="not chart-consistent"):
        G_map(DForm(line, 1, comps))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_torus_presentation_is_complete(n):
    space = standard_torus_diffeology(n)
    assert space.missing() == []
    assert set(space.determining_maps()) == set(space.names)


# --- pi^*, B and B^-1 --------------------------------------------------------


def test_pi_star_examples():
    assert not pi_star(zero_dform(QK, 1))
    theta = B_inverse(KERNEL, KRONECKER, QK)
    pulled = pi_star(theta)
    for g in pulled.space.generators:
        assert pulled[g.name] == pullback(g.body, KERNEL)
    const = B_inverse(DiffForm.constant(2, 7), KRONECKER, QK)
    assert all(c == DiffForm.constant(c.dim, 7) for c in pi_star(const).components.values())


def test_pi_star_requires_quotient():
    with pytest.raises(DiffeologyError):
        pi_star(zero_dform(T2, 0))


def test_projection_lands_in_lifted_torus():
    pi = projection(QK)
    assert pi.source == lifted_diffeology(QK)
    assert all(tname == name for name, (tname, _) in pi.matches.items())


def test_B_examples():
    assert B_map(B_inverse(KERNEL, KRONECKER, QK)) == KERNEL
    assert not B_map(zero_dform(QK, 1))
    assert B_map(B_inverse(DiffForm.constant(2, QuadScalar(3, 1, 2)), KRONECKER, QK)) == DiffForm.constant(2, QuadScalar(3, 1, 2))


def test_B_inverse_components():
    theta = B_inverse(KERNEL, KRONECKER, QK)
    assert theta["q"] == KERNEL
    # leaf1(t, s) = t + s v: the ds part is i_v KERNEL = 0, the t part is KERNEL itself
    assert theta["leaf1"] == DiffForm(3, 1, {(0,): TrigScalar.constant(3, S2), (1,): TrigScalar.constant(3, -1)})
    assert check_dform(theta)
    const = B_inverse(DiffForm.constant(2), KRONECKER, QK)
    assert const.degree == 0 and all(c == DiffForm.constant(c.dim) for c in const.components.values())


def test_B_inverse_rejects_non_basic():
    with pytest.raises(NotBasicError):
        B_inverse(dx(2, 0), KRONECKER, QK)


def test_lift_independence_examples():
    assert lift_independence_check(KERNEL, LEAF, (1, S2), KRONECKER)
    assert not lift_independence_check(dx(2, 0), LEAF, (1, S2), KRONECKER)
    assert lift_independence_check(dx(2, 0), LEAF, (0, 0), KRONECKER)


@pytest.mark.parametrize("name", sorted(SHIPPED))
@given(seed=seeds)
def test_B_is_basic_and_round_trips(name, seed):
    f = SHIPPED[name]
    space = standard_quotient_diffeology(f)
    rng = random.Random(seed)
    theta = sampling.random_compatible_dform(rng, space)
    b = B_map(theta)
    assert is_basic(b, f)
    assert B_inverse(b, f, space) == theta
    assert bool(pi_star(theta)) == bool(theta)


# --- presentations -----------------------------------------------------------


def test_standard_quotient_presentation_complete():
    for f in (KRONECKER, CIRCLES, KRONECKER_X_S1):
        assert standard_quotient_diffeology(f).missing() == []


def _without(space, predicate):
    wits = tuple(w for w in space.witnesses if not predicate(w))
    return GeneratedDiffeology(space.n, space.generators, wits, space.foliation, space.name)


def test_missing_leafwise_witness_is_reported():
    partial = _without(QK, lambda w: w.kind == "leafwise")
    problems = partial.missing()
    assert any("leaf direction v1" in p for p in problems)
    with pytest.raises(IncompletePresentationError, match="insufficient relation witnesses"):
        quotient_betti(KRONECKER, partial)


def test_missing_periodicity_is_reported():
    partial = _without(QK, lambda w: w.kind == "lattice" and w.map.phase[1])
    assert any("periodicity along x2" in p for p in partial.missing())


def test_unrelated_generator_is_reported():
    extra = make_quotient_plot(LEAF, KRONECKER, "stray")
    space = GeneratedDiffeology(2, QK.generators + (extra,), QK.witnesses, KRONECKER)
    assert any("'stray'" in p for p in space.missing())


def test_no_covering_generator():
    space = GeneratedDiffeology(2, (make_quotient_plot(LEAF, KRONECKER, "leaf"),), (), KRONECKER)
    assert space.missing() == ["no covering generator (identity lift R^n -> T^n)"]


def test_leafwise_constraint_cuts_mode_spaces():
    # without leafwise witnesses the covering component is unconstrained along leaves
    partial = _without(QK, lambda w: w.kind == "leafwise")
    assert len(dform_mode_space(partial, (0, 0), 1)) == 2
    assert len(dform_mode_space(QK, (0, 0), 1)) == 1
    assert dform_mode_space(QK, (1, 1), 0) == []
