"""Finitely presented diffeologies on tori and their leaf spaces.

A presentation lists generator plots and relation witnesses.  A witness
``(source, target, h)`` records ``target o h = source`` (on the torus, or
after projecting to the leaf space), and every D-form must satisfy
``theta[source] = h^* theta[target]`` along it.

The covering generator ``q = id : R^n -> T^n`` stands in for an atlas: every
chart is a restriction of ``q^{-1}``, and chart overlaps differ by lattice
translations, which the presentation records as witnesses on ``q``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .foliation import LinearFoliation, homotopy_pullback_constant, is_basic, tangential_homotopy
from .forms import AffineMap, DiffForm, exterior_d, pullback, render
from .linalg import in_span, nullspace, rank
from .modes import canonical_mode, mode_basis_forms
from .scalars import ONE, ZERO, PhaseError, QuadScalar
from .verdict import Verdict

__all__ = [
    "DiffeologyError",
    "IncompletePresentationError",
    "NotBasicError",
    "Plot",
    "RelationWitness",
    "GeneratedDiffeology",
    "DForm",
    "DiffeologicalMap",
    "make_torus_plot",
    "make_quotient_plot",
    "standard_torus_diffeology",
    "standard_quotient_diffeology",
    "lifted_diffeology",
    "check_dform",
    "dform_d",
    "dform_pullback",
    "smooth_map",
    "projection",
    "F_map",
    "G_map",
    "pi_star",
    "B_map",
    "B_inverse",
    "lift_independence_check",
    "dform_mode_space",
    "dform_from_root",
]

ROOT = "q"
PERIOD = QuadScalar(4)  # 2 pi in quarter turns


class DiffeologyError(ValueError):
    pass


class IncompletePresentationError(DiffeologyError):
    """The witnesses leave some directions of the D-form complex unconstrained."""


class NotBasicError(ValueError):
    pass


@dataclass(frozen=True)
class Plot:
    """A plot into ``T^n`` or into the leaf space ``T^n / F``.

    Quotient plots keep their lifts; the first is canonical, the others are
    alternative lifts of the same plot and must differ from it by leaf
    directions.
    """

    name: str
    lifts: tuple[AffineMap, ...]
    foliation: LinearFoliation | None = None

    def __post_init__(self) -> None:
        if not self.lifts:
            raise DiffeologyError(f"plot {self.name!r} needs a body map")
        base = self.lifts[0]
        for other in self.lifts[1:]:
            if (other.source, other.target) != (base.source, base.target):
                raise DiffeologyError(f"lifts of {self.name!r} have different shapes")
        if self.foliation is None:
            if len(self.lifts) > 1:
                raise DiffeologyError(f"torus plot {self.name!r} cannot carry alternative lifts")
        else:
            if base.target != self.foliation.n:
                raise DiffeologyError(f"plot {self.name!r} does not land in T^{self.foliation.n}")
            for other in self.lifts[1:]:
                if _difference_kind(other - base, self.foliation) is None:
                    raise DiffeologyError(f"lifts of {self.name!r} do not project to the same plot")

    @property
    def body(self) -> AffineMap:
        return self.lifts[0]

    @property
    def domain_dim(self) -> int:
        return self.body.source

    @property
    def is_quotient(self) -> bool:
        return self.foliation is not None


def make_torus_plot(beta: AffineMap, name: str = "alpha") -> Plot:
    return Plot(name, (beta,))


def make_quotient_plot(
    beta: AffineMap, foliation: LinearFoliation, name: str = "alpha", alternates: Sequence[AffineMap] = ()
) -> Plot:
    """The plot ``pi o beta`` with ``beta`` stored as its lift."""
    if beta.target != foliation.n:
        raise DiffeologyError("lift does not land in the foliated torus")
    return Plot(name, (beta, *alternates), foliation)


def _is_lattice(phase: Sequence[QuadScalar]) -> bool:
    return all(x.is_integer and int(x.a) % 4 == 0 for x in phase)


def _difference_kind(diff: AffineMap, foliation: LinearFoliation | None) -> str | None:
    """Classify ``f - g`` for two maps into the torus.

    ``exact``: equal maps, ``lattice``: equal on the torus, ``leafwise``:
    equal on the leaf space.  None: not related.
    """
    linear_zero = not any(x for row in diff.matrix for x in row)
    if linear_zero and not any(diff.phase):
        return "exact"
    if linear_zero and _is_lattice(diff.phase):
        return "lattice"
    if foliation is None:
        return None
    vecs = [list(v) for v in foliation.vectors]
    if all(in_span(vecs, col) for col in diff.columns()) and (
        _is_lattice(diff.phase) or in_span(vecs, diff.phase)
    ):
        return "leafwise"
    return None


def _leaf_directions(diff: AffineMap) -> list[tuple[QuadScalar, ...]]:
    """Constant leaf vectors whose homotopies certify a leafwise difference."""
    out = [c for c in diff.columns() if any(c)]
    if any(diff.phase) and not _is_lattice(diff.phase):
        out.append(diff.phase)
    return out


@dataclass(frozen=True)
class RelationWitness:
    """``target o map = source``; ``map`` goes from the source domain to the target domain."""

    source: str
    target: str
    map: AffineMap
    kind: str = field(default="", compare=False)


@dataclass(frozen=True)
class GeneratedDiffeology:
    """Generators and relation witnesses presenting a diffeology on ``T^n`` or ``T^n / F``."""

    n: int
    generators: tuple[Plot, ...]
    witnesses: tuple[RelationWitness, ...] = ()
    foliation: LinearFoliation | None = None
    name: str = field(default="D", compare=False)

    def __post_init__(self) -> None:
        names = [g.name for g in self.generators]
        if len(set(names)) != len(names):
            raise DiffeologyError("generator names must be unique")
        by_name = {g.name: g for g in self.generators}
        for g in self.generators:
            if g.body.target != self.n:
                raise DiffeologyError(f"generator {g.name!r} does not land in T^{self.n}")
            if (g.foliation is None) != (self.foliation is None) or (
                g.foliation is not None and g.foliation != self.foliation
            ):
                raise DiffeologyError(f"generator {g.name!r} targets a different space")
        checked = []
        for w in self.witnesses:
            if w.source not in by_name or w.target not in by_name:
                raise DiffeologyError(f"witness {w.source}->{w.target} names an unknown generator")
            src, tgt = by_name[w.source], by_name[w.target]
            if w.map.source != src.domain_dim or w.map.target != tgt.domain_dim:
                raise DiffeologyError(f"witness {w.source}->{w.target} has the wrong shape")
            kind = _difference_kind(tgt.body.compose(w.map) - src.body, self.foliation)
            if kind is None:
                raise DiffeologyError(f"witness {w.source}->{w.target} does not intertwine its generators")
            checked.append(RelationWitness(w.source, w.target, w.map, kind))
        object.__setattr__(self, "witnesses", tuple(checked))

    @property
    def is_quotient(self) -> bool:
        return self.foliation is not None

    def generator(self, name: str) -> Plot:
        for g in self.generators:
            if g.name == name:
                return g
        raise KeyError(name)

    @property
    def names(self) -> list[str]:
        return [g.name for g in self.generators]

    def root(self) -> Plot | None:
        ident = AffineMap.identity(self.n)
        for g in self.generators:
            if g.body == ident:
                return g
        return None

    def determining_maps(self) -> dict[str, AffineMap]:
        """For each generator reachable from the covering, a map ``m`` with ``theta_g = m^* theta_q``."""
        root = self.root()
        if root is None:
            return {}
        det = {root.name: AffineMap.identity(self.n)}
        changed = True
        while changed:
            changed = False
            for w in self.witnesses:
                if w.source not in det and w.target in det:
                    det[w.source] = det[w.target].compose(w.map)
                    changed = True
        return det

    def missing(self) -> list[str]:
        """Human-readable list of directions the witnesses fail to constrain."""
        problems = []
        root = self.root()
        if root is None:
            return ["no covering generator (identity lift R^n -> T^n)"]
        det = self.determining_maps()
        for g in self.generators:
            if g.name not in det:
                problems.append(f"generator {g.name!r} is not related to the covering generator")
        periods = [w.map.phase for w in self.witnesses if w.source == root.name and w.target == root.name and w.kind == "lattice"]
        for j in range(self.n):
            unit = tuple(PERIOD if i == j else ZERO for i in range(self.n))
            neg = tuple(-x for x in unit)
            if not any(p == unit or p == neg for p in periods):
                problems.append(f"periodicity along x{j + 1} (no 2π translation witness on {root.name!r})")
        if self.foliation is not None:
            seen: list[list[QuadScalar]] = []
            for w in self.witnesses:
                if w.kind != "leafwise":
                    continue
                diff = self.generator(w.target).body.compose(w.map) - self.generator(w.source).body
                seen += [list(c) for c in _leaf_directions(diff)]
            for j, v in enumerate(self.foliation.vectors):
                if not in_span(seen, v):
                    problems.append(f"leaf direction v{j + 1} = ({', '.join(map(str, v))}) has no leafwise witness")
        return problems

    def require_complete(self) -> None:
        problems = self.missing()
        if problems:
            raise IncompletePresentationError("insufficient relation witnesses: " + "; ".join(problems))


def standard_torus_diffeology(n: int) -> GeneratedDiffeology:
    """Covering generator, a diagonal line, a quarter-turn shift, and the lattice witnesses."""
    ident = AffineMap.identity(n)
    diag = AffineMap.linear([[ONE] for _ in range(n)])
    shift_phase = [ONE] + [ZERO] * (n - 1)
    shifted = AffineMap.translation(n, shift_phase)
    generators = (
        make_torus_plot(ident, ROOT),
        make_torus_plot(diag, "diag"),
        make_torus_plot(shifted, "shift"),
    )
    witnesses = [
        RelationWitness("diag", ROOT, diag),
        RelationWitness("shift", ROOT, shifted),
    ]
    witnesses += _lattice_witnesses(n)
    return GeneratedDiffeology(n, generators, tuple(witnesses), None, f"T^{n}")


def _lattice_witnesses(n: int) -> list[RelationWitness]:
    return [
        RelationWitness(ROOT, ROOT, AffineMap.translation(n, [PERIOD if i == j else ZERO for i in range(n)]))
        for j in range(n)
    ]


def standard_quotient_diffeology(foliation: LinearFoliation) -> GeneratedDiffeology:
    """Covering generator, one leafwise generator per tangent vector, lattice witnesses.

    The leafwise generator ``leaf_j(t, s) = pi(t + s v_j)`` is related to the
    covering twice: exactly through its lift, and through ``pr_1`` on the leaf
    space.  The covering also carries an alternative lift shifted along
    ``v_1``.
    """
    n = foliation.n
    ident = AffineMap.identity(n)
    shifted = AffineMap.translation(n, foliation.vectors[0])
    generators = [make_quotient_plot(ident, foliation, ROOT, alternates=(shifted,))]
    witnesses = []
    pr1 = AffineMap.linear([[ONE if i == j else ZERO for j in range(n + 1)] for i in range(n)])
    for j, v in enumerate(foliation.vectors):
        lift = ident.extend(v)
        name = f"leaf{j + 1}"
        generators.append(make_quotient_plot(lift, foliation, name))
        witnesses.append(RelationWitness(name, ROOT, lift))
        witnesses.append(RelationWitness(name, ROOT, pr1))
    witnesses += _lattice_witnesses(n)
    return GeneratedDiffeology(n, tuple(generators), tuple(witnesses), foliation, f"T^{n}/{foliation.name}")


def lifted_diffeology(quotient: GeneratedDiffeology) -> GeneratedDiffeology:
    """The torus diffeology generated by the canonical lifts, keeping the witnesses that hold on ``T^n``."""
    if not quotient.is_quotient:
        raise DiffeologyError("expected a leaf-space presentation")
    gens = tuple(make_torus_plot(g.body, g.name) for g in quotient.generators)
    wits = tuple(RelationWitness(w.source, w.target, w.map) for w in quotient.witnesses if w.kind in ("exact", "lattice"))
    return GeneratedDiffeology(quotient.n, gens, wits, None, f"T^{quotient.n}")


# ---------------------------------------------------------------------------
# D-forms


@dataclass(frozen=True, eq=False)
class DForm:
    """A family ``{theta_alpha}`` of forms indexed by the generators of ``space``."""

    space: GeneratedDiffeology
    degree: int
    components: Mapping[str, DiffForm]

    def __post_init__(self) -> None:
        comps = dict(self.components)
        for g in self.space.generators:
            if g.name not in comps:
                raise DiffeologyError(f"no component for generator {g.name!r}")
            c = comps[g.name]
            if c.dim != g.domain_dim:
                raise DiffeologyError(f"component {g.name!r} lives on {c.dim} coordinates, plot domain is R^{g.domain_dim}")
            if c.terms and c.degree != self.degree:
                raise DiffeologyError(f"component {g.name!r} has degree {c.degree}, expected {self.degree}")
        extra = set(comps) - set(self.space.names)
        if extra:
            raise DiffeologyError(f"components for unknown generators {sorted(extra)}")
        object.__setattr__(self, "components", {g.name: comps[g.name] for g in self.space.generators})

    def __getitem__(self, name: str) -> DiffForm:
        return self.components[name]

    @property
    def root(self) -> DiffForm:
        r = self.space.root()
        if r is None:
            raise DiffeologyError("presentation has no covering generator")
        return self.components[r.name]

    def __bool__(self) -> bool:
        return any(bool(c) for c in self.components.values())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DForm):
            return NotImplemented
        return self.space == other.space and self.components == other.components

    def __add__(self, other: DForm) -> DForm:
        if self.space != other.space:
            raise DiffeologyError("D-forms on different diffeologies")
        if not other:
            return self
        if not self:
            return other
        if self.degree != other.degree:
            raise DiffeologyError("cannot add D-forms of different degrees")
        return DForm(self.space, self.degree, {k: self[k] + other[k] for k in self.components})

    def scale(self, c: object) -> DForm:
        return DForm(self.space, self.degree, {k: v.scale(c) for k, v in self.components.items()})

    def __str__(self) -> str:
        return "{" + ", ".join(f"{k}: {render(v)}" for k, v in self.components.items()) + "}"


def zero_dform(space: GeneratedDiffeology, degree: int) -> DForm:
    return DForm(space, degree, {g.name: DiffForm(g.domain_dim, degree) for g in space.generators})


def check_dform(theta: DForm, space: GeneratedDiffeology | None = None) -> Verdict:
    """Verify ``theta[source] = h^* theta[target]`` on every relation witness."""
    space = space or theta.space
    for g in space.generators:
        if g.name not in theta.components:
            return Verdict.failed(f"no component on generator {g.name!r}")
    for w in space.witnesses:
        try:
            pulled = pullback(w.map, theta[w.target])
        except PhaseError as exc:
            return Verdict.failed(f"witness {w.source}<-{w.target}: {exc}", w)
        if pulled != theta[w.source]:
            return Verdict.failed(
                f"witness {w.source}<-{w.target} ({w.kind}): h^*θ = {render(pulled)} but θ_{w.source} = {render(theta[w.source])}",
                w,
            )
    return Verdict.passed()


def dform_d(theta: DForm) -> DForm:
    out = DForm(theta.space, theta.degree + 1, {k: exterior_d(v) for k, v in theta.components.items()})
    verdict = check_dform(out)
    if not verdict:
        raise DiffeologyError(f"d broke compatibility: {verdict.witness}")
    return out


@dataclass(frozen=True)
class DiffeologicalMap:
    """A map between presented spaces, recorded on generators.

    ``affine`` acts on torus coordinates; ``matches[name] = (target, h)``
    says ``f o alpha_name = beta_target o h``.
    """

    source: GeneratedDiffeology
    target: GeneratedDiffeology
    affine: AffineMap
    matches: Mapping[str, tuple[str, AffineMap]]

    def compose(self, inner: DiffeologicalMap) -> DiffeologicalMap:
        """``self o inner``."""
        if inner.target != self.source:
            raise DiffeologyError("maps are not composable")
        matches = {}
        for name, (mid, h1) in inner.matches.items():
            tgt, h2 = self.matches[mid]
            matches[name] = (tgt, h2.compose(h1))
        return DiffeologicalMap(inner.source, self.target, self.affine.compose(inner.affine), matches)


def smooth_map(
    source: GeneratedDiffeology,
    target: GeneratedDiffeology,
    affine: AffineMap,
    matches: Mapping[str, tuple[str, AffineMap]] | None = None,
) -> DiffeologicalMap:
    """Build and verify ``f: source -> target`` given by ``affine`` on the tori.

    Unmatched generators are matched to a target generator with the same body,
    else to the target's covering generator.
    """
    if affine.source != source.n or affine.target != target.n:
        raise DiffeologyError("affine map has the wrong shape")
    if source.is_quotient and not target.is_quotient:
        raise DiffeologyError("a map out of a leaf space needs a leaf-space target in this model")
    if source.is_quotient:
        tvecs = [list(v) for v in target.foliation.vectors]
        for v in source.foliation.vectors:
            image = [sum((a * b for a, b in zip(row, v)), ZERO) for row in affine.matrix]
            if not in_span(tvecs, image):
                raise DiffeologyError("map does not send leaves to leaves")
    # the torus map itself must respect the lattice
    if not all(x.is_integer for row in affine.matrix for x in row):
        raise DiffeologyError("torus map must have an integer matrix")
    given = dict(matches or {})
    out = {}
    root = target.root()
    for g in source.generators:
        composed = affine.compose(g.body)
        if g.name in given:
            tname, h = given[g.name]
            tgt = target.generator(tname)
            if _difference_kind(tgt.body.compose(h) - composed, target.foliation) is None:
                raise DiffeologyError(f"declared match for {g.name!r} does not hold")
            out[g.name] = (tname, h)
            continue
        same = next((t for t in target.generators if t.body == composed), None)
        if same is not None:
            out[g.name] = (same.name, AffineMap.identity(g.domain_dim))
        elif root is not None:
            out[g.name] = (root.name, composed)
        else:
            raise DiffeologyError(f"plot not generated: f o {g.name} has no match in the target")
    return DiffeologicalMap(source, target, affine, out)


def projection(quotient: GeneratedDiffeology, torus: GeneratedDiffeology | None = None) -> DiffeologicalMap:
    """The leaf projection ``pi: T^n -> T^n / F``."""
    torus = torus or lifted_diffeology(quotient)
    return smooth_map(torus, quotient, AffineMap.identity(quotient.n))


def dform_pullback(f: DiffeologicalMap, theta: DForm) -> DForm:
    """``(f^* theta)_alpha = theta_{f o alpha}``, read through the recorded matches."""
    if theta.space != f.target:
        raise DiffeologyError("D-form does not live on the target of the map")
    comps = {}
    for g in f.source.generators:
        if g.name not in f.matches:
            raise DiffeologyError(f"plot not generated: no match for {g.name!r}")
        tname, h = f.matches[g.name]
        comps[g.name] = pullback(h, theta[tname])
    return DForm(f.source, theta.degree, comps)


# ---------------------------------------------------------------------------
# the comparison maps


def F_map(omega: DiffForm, space: GeneratedDiffeology) -> DForm:
    """``F(omega) = {alpha^* omega}``."""
    if space.is_quotient:
        raise DiffeologyError("F is defined on a torus diffeology")
    if omega.dim != space.n:
        raise DiffeologyError("form and diffeology live on different tori")
    return DForm(space, omega.degree, {g.name: pullback(g.body, omega) for g in space.generators})


def G_map(theta: DForm, space: GeneratedDiffeology | None = None) -> DiffForm:
    """Read the covering component and check it is 2π-periodic."""
    space = space or theta.space
    root = space.root()
    if root is None:
        raise DiffeologyError("G needs the covering generator")
    comp = theta[root.name]
    for k in comp.frequencies():
        if not all(x.is_integer for x in k):
            raise DiffeologyError(f"not chart-consistent: frequency ({', '.join(map(str, k))}) is not integer")
    return DiffForm(space.n, theta.degree, comp.terms)


def pi_star(theta: DForm, torus: GeneratedDiffeology | None = None) -> DForm:
    if not theta.space.is_quotient:
        raise DiffeologyError("pi^* takes a D-form on the leaf space")
    return dform_pullback(projection(theta.space, torus), theta)


def B_map(theta: DForm) -> DiffForm:
    """``B = G o pi^*``."""
    return G_map(pi_star(theta))


def lift_independence_check(omega: DiffForm, beta: AffineMap, w: Sequence[object], foliation: LinearFoliation) -> Verdict:
    """Certify ``beta^* omega = gamma^* omega`` for ``gamma = beta + w`` via ``H_t^* omega`` being constant in ``t``."""
    return homotopy_pullback_constant(tangential_homotopy(beta, w, foliation), omega)


def _lift_pairs(space: GeneratedDiffeology) -> Iterable[tuple[str, AffineMap, AffineMap]]:
    """Pairs of lifts that project to the same plot: declared alternates and leafwise witnesses."""
    for g in space.generators:
        for alt in g.lifts[1:]:
            yield g.name, g.body, alt
    for w in space.witnesses:
        if w.kind == "leafwise":
            yield f"{w.source}<-{w.target}", space.generator(w.source).body, space.generator(w.target).body.compose(w.map)


def B_inverse(omega: DiffForm, foliation: LinearFoliation, space: GeneratedDiffeology) -> DForm:
    """``theta_{pi o beta} = beta^* omega`` for a basic ``omega``."""
    if space.foliation != foliation:
        raise DiffeologyError("presentation belongs to another foliation")
    verdict = is_basic(omega, foliation)
    if not verdict:
        raise NotBasicError(f"form is not basic: {verdict.witness}")
    for label, beta, gamma in _lift_pairs(space):
        for w in _leaf_directions(gamma - beta):
            v = lift_independence_check(omega, beta, w, foliation)
            if not v:
                raise AssertionError(f"lift dependence on {label} along ({', '.join(map(str, w))}): {v.witness}")
    theta = DForm(space, omega.degree, {g.name: pullback(g.body, omega) for g in space.generators})
    verdict = check_dform(theta)
    if not verdict:
        raise AssertionError(f"B^-1 produced an incompatible family: {verdict.witness}")
    return theta


# ---------------------------------------------------------------------------
# mode-wise solution of the compatibility constraints


def dform_from_root(space: GeneratedDiffeology, root_form: DiffForm) -> DForm:
    det = space.determining_maps()
    missing = [g.name for g in space.generators if g.name not in det]
    if missing:
        raise IncompletePresentationError(f"generators {missing} are not determined by the covering component")
    return DForm(space, root_form.degree, {g.name: pullback(det[g.name], root_form) for g in space.generators})


def _flatten(x: DiffForm, keys: dict, tag: str) -> dict[int, QuadScalar]:
    out = {}
    for idx, coeff in x.terms.items():
        for k, (c, s) in coeff.terms.items():
            for part, val in ((0, c), (1, s)):
                if val:
                    key = keys.setdefault((tag, idx, k, part), len(keys))
                    out[key] = val
    return out


def dform_mode_space(space: GeneratedDiffeology, k: Sequence[object], r: int) -> list[DForm]:
    """Basis of compatible degree-``r`` D-forms whose covering component lies in mode ``k``."""
    k = canonical_mode(k)
    n = space.n
    candidates = mode_basis_forms(n, k, r)
    if not candidates:
        return []
    det = space.determining_maps()
    keys: dict = {}
    columns = []
    for form in candidates:
        comps = {name: pullback(m, form) for name, m in det.items()}
        col: dict[int, QuadScalar] = {}
        for i, w in enumerate(space.witnesses):
            gap = comps[w.source] - pullback(w.map, comps[w.target])
            col.update(_flatten(gap, keys, f"w{i}"))
        columns.append(col)
    rows = [[col.get(key, ZERO) for col in columns] for key in range(len(keys))]
    basis = nullspace(rows, len(candidates))
    out = []
    for vec in basis:
        root_form = DiffForm(n, r)
        for c, form in zip(vec, candidates):
            if c:
                root_form = root_form + form.scale(c)
        out.append(dform_from_root(space, root_form))
    return out
