"""Linear foliations of tori and the basic-form machinery."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .forms import AffineMap, DiffForm, exterior_d, interior_product, pullback, render
from .linalg import in_span, nullspace, rank
from .modes import canonical_mode, mode_form, mode_labels, mode_vector
from .scalars import QuadScalar
from .verdict import Verdict

__all__ = [
    "LinearFoliation",
    "TangentialHomotopy",
    "NotTangentialError",
    "is_basic",
    "basic_mode_space",
    "tangential_homotopy",
    "homotopy_pullback_constant",
]


class NotTangentialError(ValueError):
    """A deformation direction does not lie in the tangent distribution."""


@dataclass(frozen=True)
class LinearFoliation:
    """Foliation of ``T^n`` by the translates of ``span(vectors)``."""

    vectors: tuple[tuple[QuadScalar, ...], ...]
    name: str = field(default="F", compare=False)

    def __post_init__(self) -> None:
        vecs = tuple(tuple(QuadScalar.coerce(x) for x in v) for v in self.vectors)
        if not vecs:
            raise ValueError("a foliation needs at least one tangent vector")
        n = len(vecs[0])
        if any(len(v) != n for v in vecs):
            raise ValueError("tangent vectors must share the torus dimension")
        if len(vecs) >= n:
            raise ValueError(f"leaf dimension {len(vecs)} must be below the torus dimension {n}")
        if rank([list(v) for v in vecs]) != len(vecs):
            raise ValueError("tangent vectors are linearly dependent")
        object.__setattr__(self, "vectors", vecs)

    @property
    def n(self) -> int:
        return len(self.vectors[0])

    @property
    def p(self) -> int:
        return len(self.vectors)

    @property
    def q(self) -> int:
        return self.n - self.p

    def is_tangent(self, w: Sequence[QuadScalar]) -> bool:
        return in_span([list(v) for v in self.vectors], [QuadScalar.coerce(x) for x in w])

    def annihilates(self, k: Sequence[QuadScalar]) -> bool:
        """True when the frequency ``k`` is constant along the leaves."""
        return all(not sum((a * b for a, b in zip(k, v)), QuadScalar(0)) for v in self.vectors)

    def rebased(self, matrix: Sequence[Sequence[QuadScalar]], name: str | None = None) -> LinearFoliation:
        """Same distribution, spanned by ``matrix @ vectors`` (``matrix`` invertible)."""
        n = self.n
        vecs = []
        for row in matrix:
            vecs.append(tuple(sum((c * v[i] for c, v in zip(row, self.vectors)), QuadScalar(0)) for i in range(n)))
        return LinearFoliation(tuple(vecs), name or self.name)

    def __str__(self) -> str:
        inner = "; ".join("(" + ", ".join(map(str, v)) + ")" for v in self.vectors)
        return f"{self.name}: span[{inner}] on T^{self.n}"


def is_basic(x: DiffForm, foliation: LinearFoliation) -> Verdict:
    """Check ``i_v x = 0`` and ``i_v dx = 0`` for every tangent generator ``v``."""
    if x.dim != foliation.n:
        raise ValueError("form and foliation live on different tori")
    dx = exterior_d(x)
    for j, v in enumerate(foliation.vectors):
        c = interior_product(v, x)
        if c:
            return Verdict.failed(f"i_v{j + 1} ω = {render(c)}", c)
        c = interior_product(v, dx)
        if c:
            return Verdict.failed(f"i_v{j + 1} dω = {render(c)}", c)
    return Verdict.passed()


def basic_mode_space(foliation: LinearFoliation, k: Sequence[object], r: int) -> list[DiffForm]:
    """Exact basis of the degree-``r`` basic forms with coefficients in mode ``k``."""
    n = foliation.n
    k = canonical_mode(k)
    labels = mode_labels(n, k, r)
    if not labels:
        return []
    columns = []
    for col in range(len(labels)):
        e = [QuadScalar(int(i == col)) for i in range(len(labels))]
        form = mode_form(n, k, r, e)
        dform = exterior_d(form)
        coords: list[QuadScalar] = []
        for v in foliation.vectors:
            if r > 0:
                coords += mode_vector(interior_product(v, form), k, r - 1)
            coords += mode_vector(interior_product(v, dform), k, r)
        columns.append(coords)
    rows = [[columns[c][i] for c in range(len(labels))] for i in range(len(columns[0]))]
    return [mode_form(n, k, r, vec) for vec in nullspace(rows, len(labels))]


@dataclass(frozen=True)
class TangentialHomotopy:
    """``H(y, t) = base(y) + t * direction``, a leafwise deformation of ``base``.

    The tangential path through a base point ``y0`` is ``t -> H(y0, t)``.
    """

    base: AffineMap
    direction: tuple[QuadScalar, ...]
    foliation: LinearFoliation

    @property
    def map(self) -> AffineMap:
        return self.base.extend(self.direction)


def tangential_homotopy(beta: AffineMap, w: Sequence[object], foliation: LinearFoliation) -> TangentialHomotopy:
    w = tuple(QuadScalar.coerce(x) for x in w)
    if len(w) != beta.target:
        raise ValueError("direction length must equal the torus dimension")
    if not foliation.is_tangent(w):
        raise NotTangentialError(f"not a tangential deformation: {tuple(map(str, w))} is outside the leaf directions")
    return TangentialHomotopy(beta, w, foliation)


def homotopy_pullback_constant(h: TangentialHomotopy, x: DiffForm) -> Verdict:
    """Is ``H_t^* x`` independent of ``t``?  The homotopy parameter is the last coordinate."""
    pulled = pullback(h.map, x)
    t = h.base.source
    for idx, coeff in sorted(pulled.terms.items()):
        if t in idx:
            return Verdict.failed(f"d{_tname(t)} component {render(DiffForm(pulled.dim, pulled.degree, {idx: coeff}))}", pulled)
        for freq in coeff.frequencies():
            if freq[t]:
                return Verdict.failed(f"coefficient of {idx} depends on the homotopy parameter: {coeff}", pulled)
    return Verdict.passed(pulled)


def _tname(t: int) -> str:
    return f"x{t + 1}"
