"""Exterior calculus on forms with trigonometric-polynomial coefficients."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping, Sequence

from .linalg import det, matmul, matvec
from .scalars import ONE, ZERO, QuadScalar, TrigScalar, format_phase, trig_mul, trig_partial, trig_substitute_affine

__all__ = [
    "AffineMap",
    "DiffForm",
    "wedge",
    "exterior_d",
    "pullback",
    "interior_product",
    "lie_derivative",
]


def _merge_sign(i: tuple[int, ...], j: tuple[int, ...]) -> tuple[int, tuple[int, ...]] | None:
    """Sign and sorted index of ``dx_I ^ dx_J``; None when an index repeats."""
    if set(i) & set(j):
        return None
    inversions = sum(1 for a in i for b in j if a > b)
    return (-1 if inversions % 2 else 1), tuple(sorted(i + j))


class DiffForm:
    """A degree-``r`` form on ``dim`` coordinates.

    ``terms`` maps strictly increasing multi-indices to nonzero coefficients.
    """

    __slots__ = ("dim", "degree", "terms")

    def __init__(self, dim: int, degree: int, terms: Mapping[tuple[int, ...], TrigScalar] | None = None):
        if degree < 0:
            raise ValueError("negative degree")
        self.dim = dim
        self.degree = degree
        clean: dict[tuple[int, ...], TrigScalar] = {}
        if degree <= dim:
            for idx, coeff in (terms or {}).items():
                idx = tuple(idx)
                if len(idx) != degree or list(idx) != sorted(set(idx)) or (idx and not 0 <= idx[0] <= idx[-1] < dim):
                    raise ValueError(f"bad multi-index {idx} for a {degree}-form on {dim} coordinates")
                if not isinstance(coeff, TrigScalar):
                    coeff = TrigScalar.constant(dim, coeff)
                if coeff.n != dim:
                    raise ValueError("coefficient coordinate count does not match the form")
                if idx in clean:
                    coeff = clean[idx] + coeff
                if coeff:
                    clean[idx] = coeff
                else:
                    clean.pop(idx, None)
        self.terms = clean

    # constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, dim: int, degree: int = 0) -> DiffForm:
        return cls(dim, degree)

    @classmethod
    def function(cls, f: TrigScalar) -> DiffForm:
        return cls(f.n, 0, {(): f})

    @classmethod
    def constant(cls, dim: int, value: object = 1) -> DiffForm:
        return cls.function(TrigScalar.constant(dim, value))

    @classmethod
    def basis(cls, dim: int, index: Sequence[int], coeff: object = 1) -> DiffForm:
        """The form ``coeff * dx_{i1} ^ ... ^ dx_{ir}`` (index in any order)."""
        index = tuple(index)
        if len(set(index)) < len(index):
            return cls(dim, len(index))
        order = sorted(range(len(index)), key=index.__getitem__)
        inversions = sum(1 for a in range(len(order)) for b in range(a + 1, len(order)) if order[a] > order[b])
        if not isinstance(coeff, TrigScalar):
            coeff = TrigScalar.constant(dim, coeff)
        if inversions % 2:
            coeff = -coeff
        return cls(dim, len(index), {tuple(sorted(index)): coeff})

    @classmethod
    def dx(cls, dim: int, j: int, coeff: object = 1) -> DiffForm:
        return cls.basis(dim, (j,), coeff)

    # algebra --------------------------------------------------------------

    def _check(self, other: DiffForm) -> None:
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DiffForm):
            return NotImplemented
        if self.dim != other.dim:
            return False
        if not self.terms and not other.terms:
            return True
        return self.degree == other.degree and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.dim, self.degree, frozenset(self.terms.items())))

    def __add__(self, other: DiffForm) -> DiffForm:
        self._check(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        if self.degree != other.degree:
            raise ValueError("cannot add forms of different degrees")
        terms = dict(self.terms)
        for idx, c in other.terms.items():
            terms[idx] = terms[idx] + c if idx in terms else c
        return DiffForm(self.dim, self.degree, terms)

    def __neg__(self) -> DiffForm:
        return DiffForm(self.dim, self.degree, {i: -c for i, c in self.terms.items()})

    def __sub__(self, other: DiffForm) -> DiffForm:
        return self + (-other)

    def scale(self, factor: object) -> DiffForm:
        if isinstance(factor, TrigScalar):
            return DiffForm(self.dim, self.degree, {i: trig_mul(factor, c) for i, c in self.terms.items()})
        return DiffForm(self.dim, self.degree, {i: c.scale(factor) for i, c in self.terms.items()})

    def __mul__(self, factor: object) -> DiffForm:
        return self.scale(factor)

    __rmul__ = __mul__

    def __xor__(self, other: DiffForm) -> DiffForm:
        return wedge(self, other)

    def frequencies(self) -> set[tuple]:
        return {k for c in self.terms.values() for k in c.terms}

    def evaluate(self, point: Sequence[float]) -> dict[tuple[int, ...], float]:
        """Floating-point coefficients at a point; a sanity check only."""
        return {i: c.evaluate(point) for i, c in self.terms.items()}

    def __repr__(self) -> str:
        return f"DiffForm(dim={self.dim}, degree={self.degree}, {self})"

    def __str__(self) -> str:
        return render(self)


def render(x: DiffForm) -> str:
    """Deterministic text: multi-indices lexicographic, frequencies lexicographic."""
    if not x.terms:
        return "0"
    parts = []
    for idx in sorted(x.terms):
        coeff = x.terms[idx]
        basis = "∧".join(f"dx{j + 1}" for j in idx)
        text = str(coeff)
        if not basis:
            parts.append(text)
        elif coeff == 1:
            parts.append(basis)
        elif coeff == -1:
            parts.append("-" + basis)
        else:
            parts.append(f"({text})·{basis}")
    out = parts[0]
    for p in parts[1:]:
        out += f" - {p[1:]}" if p.startswith("-") and not p.startswith("-(") else f" + {p}"
    return out


@dataclass(frozen=True)
class AffineMap:
    """``t -> M t + c`` from R^source into R^target (or a torus covering it).

    ``matrix`` has ``target`` rows and ``source`` columns; ``phase`` is in
    quarter turns, so ``4`` is a full period ``2 pi``.
    """

    matrix: tuple[tuple[QuadScalar, ...], ...]
    phase: tuple[QuadScalar, ...]
    source: int

    def __post_init__(self) -> None:
        matrix = tuple(tuple(QuadScalar.coerce(x) for x in row) for row in self.matrix)
        phase = tuple(QuadScalar.coerce(x) for x in self.phase)
        if len(phase) != len(matrix):
            raise ValueError("phase length must equal the number of matrix rows")
        if any(len(row) != self.source for row in matrix):
            raise ValueError(f"every matrix row needs {self.source} entries")
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "phase", phase)

    @classmethod
    def linear(cls, matrix: Sequence[Sequence[object]], phase: Sequence[object] | None = None) -> AffineMap:
        rows = [list(r) for r in matrix]
        source = len(rows[0]) if rows else 0
        if phase is None:
            phase = [ZERO] * len(rows)
        return cls(tuple(tuple(r) for r in rows), tuple(phase), source)

    @classmethod
    def identity(cls, n: int) -> AffineMap:
        return cls.linear([[ONE if i == j else ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def translation(cls, n: int, phase: Sequence[object]) -> AffineMap:
        return cls.linear(cls.identity(n).matrix, phase)

    @classmethod
    def constant_map(cls, source: int, point: Sequence[object]) -> AffineMap:
        return cls(tuple(() if source == 0 else (ZERO,) * source for _ in point), tuple(point), source)

    @property
    def target(self) -> int:
        return len(self.matrix)

    def column(self, j: int) -> tuple[QuadScalar, ...]:
        return tuple(row[j] for row in self.matrix)

    def columns(self) -> list[tuple[QuadScalar, ...]]:
        return [self.column(j) for j in range(self.source)]

    def compose(self, inner: AffineMap) -> AffineMap:
        """``self o inner``."""
        if inner.target != self.source:
            raise ValueError(f"cannot compose: inner lands in R^{inner.target}, outer starts at R^{self.source}")
        if self.source == 0:
            return AffineMap(tuple(() if inner.source == 0 else (ZERO,) * inner.source for _ in self.matrix), self.phase, inner.source)
        m = matmul(self.matrix, inner.matrix) if inner.source else [[] for _ in self.matrix]
        c = [x + y for x, y in zip(matvec(self.matrix, inner.phase), self.phase)]
        return AffineMap(tuple(tuple(r) for r in m), tuple(c), inner.source)

    def __matmul__(self, inner: AffineMap) -> AffineMap:
        return self.compose(inner)

    def __sub__(self, other: AffineMap) -> AffineMap:
        if (self.source, self.target) != (other.source, other.target):
            raise ValueError("shape mismatch")
        m = tuple(tuple(x - y for x, y in zip(r1, r2)) for r1, r2 in zip(self.matrix, other.matrix))
        return AffineMap(m, tuple(x - y for x, y in zip(self.phase, other.phase)), self.source)

    def extend(self, direction: Sequence[QuadScalar]) -> AffineMap:
        """``(y, t) -> self(y) + t * direction`` on one more source coordinate."""
        m = tuple(row + (QuadScalar.coerce(w),) for row, w in zip(self.matrix, direction))
        return AffineMap(m, self.phase, self.source + 1)

    def __str__(self) -> str:
        rows = []
        for row, c in zip(self.matrix, self.phase):
            lin = " + ".join(f"({x})t{j + 1}" for j, x in enumerate(row) if x) or "0"
            rows.append(lin if not c else f"{lin} + {format_phase(c)}")
        return "(" + ", ".join(rows) + ")"


# ---------------------------------------------------------------------------
# operations


def wedge(x: DiffForm, y: DiffForm) -> DiffForm:
    x._check(y)
    degree = x.degree + y.degree
    terms: dict[tuple[int, ...], TrigScalar] = {}
    for i, ci in x.terms.items():
        for j, cj in y.terms.items():
            merged = _merge_sign(i, j)
            if merged is None:
                continue
            sign, idx = merged
            c = trig_mul(ci, cj)
            if sign < 0:
                c = -c
            terms[idx] = terms[idx] + c if idx in terms else c
    return DiffForm(x.dim, degree, terms)


def exterior_d(x: DiffForm) -> DiffForm:
    terms: dict[tuple[int, ...], TrigScalar] = {}
    for idx, c in x.terms.items():
        for j in range(x.dim):
            if j in idx:
                continue
            dc = trig_partial(c, j)
            if not dc:
                continue
            # dx_j ^ dx_I: move dx_j past the entries of I below j
            pos = sum(1 for i in idx if i < j)
            new = tuple(sorted(idx + (j,)))
            if pos % 2:
                dc = -dc
            terms[new] = terms[new] + dc if new in terms else dc
    return DiffForm(x.dim, x.degree + 1, terms)


def pullback(h: AffineMap, x: DiffForm) -> DiffForm:
    """``h^* x`` for an affine ``h`` landing in the coordinates of ``x``."""
    if h.target != x.dim:
        raise ValueError(f"map lands in R^{h.target} but the form lives on {x.dim} coordinates")
    r = x.degree
    s = h.source
    if r > s:
        return DiffForm(s, r)
    targets = list(itertools.combinations(range(s), r))
    terms: dict[tuple[int, ...], TrigScalar] = {}
    for idx, c in x.terms.items():
        f = trig_substitute_affine(c, h.matrix, h.phase)
        if not f:
            continue
        for j in targets:
            minor = det([[h.matrix[a][b] for b in j] for a in idx])
            if minor:
                g = f.scale(minor)
                terms[j] = terms[j] + g if j in terms else g
    return DiffForm(s, r, terms)


def interior_product(v: Sequence[object], x: DiffForm) -> DiffForm:
    """Contraction with a constant vector field.

    A 0-form contracts to the zero 0-form, not to a degree -1 object.
    """
    v = [QuadScalar.coerce(a) for a in v]
    if len(v) != x.dim:
        raise ValueError(f"vector of length {len(v)} on {x.dim} coordinates")
    if x.degree == 0:
        return DiffForm(x.dim, 0)
    terms: dict[tuple[int, ...], TrigScalar] = {}
    for idx, c in x.terms.items():
        for p, j in enumerate(idx):
            if not v[j]:
                continue
            new = idx[:p] + idx[p + 1:]
            g = c.scale(v[j] if p % 2 == 0 else -v[j])
            terms[new] = terms[new] + g if new in terms else g
    return DiffForm(x.dim, x.degree - 1, terms)


def lie_derivative(v: Sequence[object], x: DiffForm) -> DiffForm:
    """Cartan's formula ``i_v d + d i_v`` for a constant field ``v``."""
    first = interior_product(v, exterior_d(x))
    if x.degree == 0:
        return first
    return first + exterior_d(interior_product(v, x))


def directional_derivative(v: Sequence[object], x: DiffForm) -> DiffForm:
    """Coefficient-wise ``sum_j v_j d/dx_j``; equals the Lie derivative for constant ``v``."""
    v = [QuadScalar.coerce(a) for a in v]
    terms = {}
    for idx, c in x.terms.items():
        acc = TrigScalar(x.dim)
        for j, vj in enumerate(v):
            if vj:
                acc = acc + trig_partial(c, j).scale(vj)
        terms[idx] = acc
    return DiffForm(x.dim, x.degree, terms)
