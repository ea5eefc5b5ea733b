"""Seeded randomized verification suites.

Each suite draws ``trials`` random inputs and checks exact identities.  The
first failure stops the suite and is reported with the offending objects
rendered as forms.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .cohomology import DEFAULT_K, basic_betti, quotient_betti
from .diffeology import (
    B_inverse,
    B_map,
    F_map,
    G_map,
    GeneratedDiffeology,
    check_dform,
    dform_d,
    dform_mode_space,
    lift_independence_check,
    pi_star,
    standard_quotient_diffeology,
    standard_torus_diffeology,
)
from .foliation import LinearFoliation, is_basic
from .forms import DiffForm, directional_derivative, exterior_d, interior_product, lie_derivative, pullback, render, wedge
from .linalg import rank
from .scalars import iter_modes
from . import sampling

SUITES = ("calculus", "thm3", "thm4", "thm5", "injectivity")


@dataclass
class SuiteResult:
    suite: str
    trials: int
    ok: bool = True
    counterexample: str | None = None
    log: list[str] = field(default_factory=list)

    def fail(self, check: str, **objects: object) -> SuiteResult:
        self.ok = False
        parts = [check] + [f"{k} = {render(v) if isinstance(v, DiffForm) else v}" for k, v in objects.items()]
        self.counterexample = "; ".join(parts)
        return self


def verify_calculus(n: int, seed: int = 0, trials: int = 100, d: int = 2) -> SuiteResult:
    """d^2 = 0, graded Leibniz, pullback functoriality and d-commutation, Cartan, L_v product rule, i_v^2 = 0."""
    rng = random.Random(seed)
    res = SuiteResult("calculus", trials)
    for _ in range(trials):
        x = sampling.random_form(rng, n, d=d)
        y = sampling.random_form(rng, n, rng.randint(0, n - x.degree), d=d)
        v = [sampling.random_quad(rng, d) for _ in range(n)]
        if exterior_d(exterior_d(x)):
            return res.fail("d(dx) != 0", x=x)
        lhs = exterior_d(wedge(x, y))
        sign = -1 if x.degree % 2 else 1
        rhs = wedge(exterior_d(x), y) + wedge(x, exterior_d(y)).scale(sign)
        if lhs != rhs:
            return res.fail("graded Leibniz", x=x, y=y)
        m = rng.randint(1, 3)
        s = rng.randint(1, 3)
        g = sampling.random_affine(rng, m, n, d)
        g_integer = all(e.is_integer for row in g.matrix for e in row)
        # an irrational g sends integer modes to irrational ones; f must then carry no phase
        f = sampling.random_affine(rng, s, m, d, integer=None if g_integer else False)
        if pullback(g.compose(f), x) != pullback(f, pullback(g, x)):
            return res.fail("pullback functoriality", x=x, g=g, f=f)
        if pullback(g, exterior_d(x)) != exterior_d(pullback(g, x)):
            return res.fail("pullback commutes with d", x=x, g=g)
        lie = lie_derivative(v, x)
        if lie != directional_derivative(v, x):
            return res.fail("Cartan formula", x=x, v=tuple(map(str, v)))
        cartan = interior_product(v, exterior_d(x))
        if x.degree:
            cartan = cartan + exterior_d(interior_product(v, x))
        if lie != cartan:
            return res.fail("L_v = i_v d + d i_v", x=x)
        if lie_derivative(v, wedge(x, y)) != wedge(lie, y) + wedge(x, lie_derivative(v, y)):
            return res.fail("L_v product rule", x=x, y=y)
        if interior_product(v, interior_product(v, x)):
            return res.fail("i_v i_v != 0", x=x)
    res.log.append(f"{trials} trials on T^{n}")
    return res


def verify_thm3(n: int, seed: int = 0, trials: int = 100, d: int = 2, K: int = DEFAULT_K) -> SuiteResult:
    """G o F = id, F o G = id, and both commute with d, on the standard presentation of T^n."""
    rng = random.Random(seed)
    space = standard_torus_diffeology(n)
    res = SuiteResult("thm3", trials)
    for _ in range(trials):
        omega = sampling.random_form(rng, n, d=d, bound=K)
        F_omega = F_map(omega, space)
        if not check_dform(F_omega):
            return res.fail("F(ω) incompatible", omega=omega)
        if G_map(F_omega) != omega:
            return res.fail("G(F(ω)) != ω", omega=omega)
        if dform_d(F_omega) != F_map(exterior_d(omega), space):
            return res.fail("F does not commute with d", omega=omega)
        theta = sampling.random_compatible_dform(rng, space, d=d, bound=K)
        if F_map(G_map(theta), space) != theta:
            return res.fail("F(G(θ)) != θ", theta=theta)
        if G_map(dform_d(theta)) != exterior_d(G_map(theta)):
            return res.fail("G does not commute with d", theta=theta)
    res.log.append(f"{trials} trials on T^{n}")
    return res


def verify_thm4(foliation: LinearFoliation, seed: int = 0, trials: int = 100, d: int = 2, K: int = DEFAULT_K,
                space: GeneratedDiffeology | None = None) -> SuiteResult:
    """B(θ) is basic for compatible θ over the leaf space."""
    rng = random.Random(seed)
    space = space or standard_quotient_diffeology(foliation)
    res = SuiteResult("thm4", trials)
    for _ in range(trials):
        theta = sampling.random_compatible_dform(rng, space, d=d, bound=K)
        if not check_dform(theta):
            return res.fail("sampled θ incompatible", theta=theta)
        b = B_map(theta)
        verdict = is_basic(b, foliation)
        if not verdict:
            return res.fail(f"B(θ) not basic: {verdict.witness}", theta=theta, B=b)
    res.log.append(f"{trials} compatible D-forms on {space.name}")
    return res


def verify_injectivity(foliation: LinearFoliation, seed: int = 0, trials: int = 100, d: int = 2, K: int = DEFAULT_K,
                       space: GeneratedDiffeology | None = None) -> SuiteResult:
    """pi^* has trivial kernel: sampled θ != 0 map to nonzero forms, and pi^* is injective on every mode space."""
    rng = random.Random(seed)
    space = space or standard_quotient_diffeology(foliation)
    res = SuiteResult("injectivity", trials)
    for _ in range(trials):
        theta = sampling.random_compatible_dform(rng, space, d=d, bound=K)
        if bool(pi_star(theta)) != bool(theta):
            return res.fail("π^*θ = 0 with θ != 0", theta=theta)
    # constructive: the image of a basis of each mode space is independent
    for k in iter_modes(space.n, K):
        for r in range(space.n + 1):
            basis = dform_mode_space(space, k, r)
            if not basis:
                continue
            images = [pi_star(b) for b in basis]
            rows = [_flat_dform(img) for img in images]
            keys = sorted({key for row in rows for key in row}, key=repr)
            mat = [[row.get(key, 0) for key in keys] for row in rows]
            if rank(mat) != len(basis):
                return res.fail(f"π^* has a kernel in mode {tuple(map(str, k))}, degree {r}")
    res.log.append(f"{trials} samples and the mode spaces with |k| <= {K}")
    return res


def _flat_dform(theta) -> dict:
    out = {}
    for name, comp in theta.components.items():
        for idx, coeff in comp.terms.items():
            for k, (c, s) in coeff.terms.items():
                out[(name, idx, tuple(map(str, k)), 0)] = c
                out[(name, idx, tuple(map(str, k)), 1)] = s
    return out


def verify_thm5(foliation: LinearFoliation, seed: int = 0, trials: int = 100, homotopies: int = 10, d: int = 2,
                K: int = DEFAULT_K, space: GeneratedDiffeology | None = None) -> SuiteResult:
    """B o B^-1 = id, B^-1 o B = id, lift independence, L_v ω = 0, and equal Betti numbers."""
    rng = random.Random(seed)
    space = space or standard_quotient_diffeology(foliation)
    n = foliation.n
    res = SuiteResult("thm5", trials)
    for _ in range(trials):
        omega = sampling.random_basic_form(rng, foliation, d=d, bound=K)
        theta = B_inverse(omega, foliation, space)
        if B_map(theta) != omega:
            return res.fail("B(B^-1(ω)) != ω", omega=omega)
        if dform_d(theta) != B_inverse(exterior_d(omega), foliation, space):
            return res.fail("B^-1 does not commute with d", omega=omega)
        for v in foliation.vectors:
            if lie_derivative(v, omega):
                return res.fail("L_v ω != 0", omega=omega, v=tuple(map(str, v)))
        for _ in range(homotopies):
            beta = sampling.random_affine(rng, rng.randint(1, n), n, d, integer=False)
            w = sampling.random_tangent(rng, foliation, d)
            verdict = lift_independence_check(omega, beta, w, foliation)
            if not verdict:
                return res.fail(f"lift dependence: {verdict.witness}", omega=omega, beta=beta, w=tuple(map(str, w)))
        other = sampling.random_compatible_dform(rng, space, d=d, bound=K)
        if B_inverse(B_map(other), foliation, space) != other:
            return res.fail("B^-1(B(θ)) != θ", theta=other)
    qb = quotient_betti(foliation, space, K)
    bb = basic_betti(foliation, K)
    if qb.betti != bb.betti:
        return res.fail(f"quotient Betti {qb.betti} != basic Betti {bb.betti}")
    res.log.append(f"B∘B^-1 = id on {trials} basic forms; {trials * homotopies} tangential homotopies")
    res.log.append(f"quotient = basic = {list(bb.betti)}")
    return res
