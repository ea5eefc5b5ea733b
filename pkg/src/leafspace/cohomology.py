"""Cohomology of tori, of linear foliations, and of the leaf space.

The exterior differential maps each Fourier mode into itself, so every
complex here splits into finite mode complexes.  Cohomology is the direct sum
of the mode cohomologies; the truncation ``K`` only bounds which modes are
enumerated, and no approximation is involved inside the trig-polynomial
model.  For ``k != 0`` the unconstrained mode complex is acyclic (contracting
with ``v / (k.v)`` is a homotopy), matching the smooth picture in which only
invariant forms carry cohomology on a torus.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Sequence

from .forms import DiffForm, exterior_d
from .foliation import LinearFoliation, basic_mode_space
from .linalg import rank, solve
from .modes import canonical_mode, mode_basis_forms, mode_labels, mode_vector
from .scalars import QuadScalar, iter_modes

if TYPE_CHECKING:
    from .diffeology import GeneratedDiffeology

__all__ = [
    "ModeComplex",
    "BettiTable",
    "build_mode_complex",
    "betti",
    "de_rham_betti",
    "basic_betti",
    "quotient_betti",
]

DEFAULT_K = 2


@dataclass(frozen=True)
class ModeComplex:
    """Finite cochain complex of one Fourier mode.

    ``bases[r]`` spans the degree-``r`` space; ``differentials[r]`` is the
    matrix of ``d`` from degree ``r`` to ``r + 1`` in those bases (rows index
    the target basis).
    """

    n: int
    mode: tuple[QuadScalar, ...]
    bases: tuple[tuple[DiffForm, ...], ...]
    differentials: tuple[tuple[tuple[QuadScalar, ...], ...], ...]
    label: str = "deRham"

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.bases)

    def d_squared_vanishes(self) -> bool:
        for r in range(len(self.differentials) - 1):
            a, b = self.differentials[r], self.differentials[r + 1]
            for i in range(len(b)):
                for j in range(len(a[0]) if a else 0):
                    if sum((b[i][m] * a[m][j] for m in range(len(a))), QuadScalar(0)):
                        return False
        return True


def _coordinates(form: DiffForm, k: tuple, r: int, basis: Sequence[DiffForm], full: bool) -> list[QuadScalar]:
    vec = mode_vector(form, k, r)
    if full:
        return vec
    cols = [mode_vector(b, k, r) for b in basis]
    coeffs = solve(cols, vec)
    if coeffs is None:
        raise ArithmeticError(f"d left the constrained space in mode {k}, degree {r}")
    return coeffs


def complex_from_bases(n: int, k: tuple, bases: Sequence[Sequence[DiffForm]], label: str, full: bool = False) -> ModeComplex:
    """Assemble the differentials of a mode complex spanned by ``bases``."""
    diffs = []
    for r in range(n):
        target = bases[r + 1]
        cols = [_coordinates(exterior_d(b), k, r + 1, target, full) for b in bases[r]]
        diffs.append(tuple(tuple(cols[j][i] for j in range(len(cols))) for i in range(len(target))))
    return ModeComplex(n, k, tuple(tuple(b) for b in bases), tuple(diffs), label)


def build_mode_complex(n: int, k: Sequence[object], constraint: LinearFoliation | None = None) -> ModeComplex:
    k = canonical_mode(k)
    if len(k) != n:
        raise ValueError("mode length must equal the torus dimension")
    if constraint is None:
        bases = [mode_basis_forms(n, k, r) for r in range(n + 1)]
        return complex_from_bases(n, k, bases, "deRham", full=True)
    if constraint.n != n:
        raise ValueError("foliation lives on a different torus")
    if any(not x.is_integer for x in k):
        raise ValueError("torus modes must be integer")
    bases = [basic_mode_space(constraint, k, r) for r in range(n + 1)]
    return complex_from_bases(n, k, bases, "basic")


def betti(c: ModeComplex) -> tuple[int, ...]:
    """``dim ker d_r - rank d_{r-1}`` in every degree."""
    ranks = [rank([list(row) for row in m], len(c.bases[r])) if m else 0 for r, m in enumerate(c.differentials)]
    out = []
    for r, dim in enumerate(c.dims):
        out_rank = ranks[r] if r < len(ranks) else 0
        in_rank = ranks[r - 1] if r > 0 else 0
        out.append(dim - out_rank - in_rank)
    return tuple(out)


@dataclass(frozen=True)
class BettiTable:
    complex: str
    K: int
    betti: tuple[int, ...]
    modes_used: tuple[tuple[int, ...], ...] = ()
    foliation: str | None = field(default=None)

    def to_dict(self) -> dict:
        return {
            "complex": self.complex,
            "K": self.K,
            "betti": list(self.betti),
            "modes_used": [list(m) for m in self.modes_used],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def render(self) -> str:
        head = f"{self.complex} cohomology, |k|_inf <= {self.K}"
        if self.foliation:
            head += f", {self.foliation}"
        lines = [head, "  degree  rank"]
        lines += [f"  {r:>6}  {b:>4}" for r, b in enumerate(self.betti)]
        return "\n".join(lines)


def _int_mode(k: tuple) -> tuple[int, ...]:
    return tuple(int(x.a) for x in k)


def _sum_modes(n: int, K: int, per_mode) -> tuple[tuple[int, ...], tuple[tuple[int, ...], ...]]:
    """Add up mode cohomologies; a mode is recorded when its complex is nonzero."""
    if K < 0:
        raise ValueError("truncation K must be >= 0")
    total = [0] * (n + 1)
    used = []
    for k in iter_modes(n, K):
        c = per_mode(k)
        if c is None or not any(c.dims):
            continue
        used.append(_int_mode(k))
        total = [x + y for x, y in zip(total, betti(c))]
    return tuple(total), tuple(used)


def de_rham_betti(n: int, K: int = DEFAULT_K) -> BettiTable:
    b, used = _sum_modes(n, K, lambda k: build_mode_complex(n, k))
    return BettiTable("deRham", K, b, used)


def basic_betti(foliation: LinearFoliation, K: int = DEFAULT_K) -> BettiTable:
    """Basic Betti numbers over the modes in the box.

    Only modes with ``k.v = 0`` for every tangent ``v`` carry basic forms; for
    an irrational direction that is ``k = 0`` alone, for rational directions
    the contributing modes form a sublattice and each adds its own block.
    """
    n = foliation.n

    def per_mode(k):
        if not foliation.annihilates(k):
            return None
        return build_mode_complex(n, k, foliation)

    b, used = _sum_modes(n, K, per_mode)
    return BettiTable("basic", K, b, used, foliation.name)


def quotient_betti(foliation: LinearFoliation, generators: GeneratedDiffeology, K: int = DEFAULT_K) -> BettiTable:
    """Betti numbers of the D-form complex of the presented leaf space."""
    from .diffeology import dform_mode_space

    if generators.foliation != foliation:
        raise ValueError("diffeology presentation belongs to a different foliation")
    n = foliation.n
    generators.require_complete()

    def per_mode(k):
        bases = [[t.root for t in dform_mode_space(generators, k, r)] for r in range(n + 1)]
        if not any(bases):
            return None
        return complex_from_bases(n, k, bases, "quotient")

    b, used = _sum_modes(n, K, per_mode)
    return BettiTable("quotient", K, b, used, foliation.name)


def mode_dims(n: int, k: Sequence[object]) -> tuple[int, ...]:
    k = canonical_mode(k)
    return tuple(len(mode_labels(n, k, r)) for r in range(n + 1))
