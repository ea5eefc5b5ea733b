"""Coordinates on a single Fourier mode of degree-r forms.

For a canonical integer frequency ``k != 0`` the mode space of degree ``r``
has basis ``cos(k.x) dx_I`` and ``sin(k.x) dx_I`` over increasing ``I``; for
``k = 0`` only the constants ``dx_I`` remain.
"""

from __future__ import annotations

import itertools
from typing import Sequence

from .forms import DiffForm
from .scalars import ONE, ZERO, QuadScalar, TrigScalar, canonical_frequency


class ModeError(ValueError):
    """A form has a component outside the requested mode."""


def mode_labels(n: int, k: tuple, r: int) -> list[tuple[tuple[int, ...], int]]:
    """Basis labels ``(I, part)`` with part 0 for cos and 1 for sin."""
    parts = (0,) if not any(k) else (0, 1)
    return [(idx, p) for idx in itertools.combinations(range(n), r) for p in parts]


def mode_form(n: int, k: tuple, r: int, vector: Sequence[QuadScalar]) -> DiffForm:
    labels = mode_labels(n, k, r)
    if len(vector) != len(labels):
        raise ValueError("vector length does not match the mode space")
    terms: dict[tuple[int, ...], list[QuadScalar]] = {}
    for (idx, part), x in zip(labels, vector):
        if x:
            terms.setdefault(idx, [ZERO, ZERO])[part] = x
    return DiffForm(n, r, {idx: TrigScalar(n, {k: (c, s)}) for idx, (c, s) in terms.items()})


def mode_basis_forms(n: int, k: tuple, r: int) -> list[DiffForm]:
    size = len(mode_labels(n, k, r))
    return [mode_form(n, k, r, [ONE if i == j else ZERO for i in range(size)]) for j in range(size)]


def mode_vector(x: DiffForm, k: tuple, r: int) -> list[QuadScalar]:
    """Coordinates of ``x`` in the mode-``k`` basis; raises :class:`ModeError` if ``x`` leaves the mode."""
    if x.terms and x.degree != r:
        raise ModeError(f"expected degree {r}, got {x.degree}")
    out = []
    for idx, part in mode_labels(x.dim, k, r):
        coeff = x.terms.get(idx)
        pair = coeff.terms.get(k) if coeff is not None else None
        out.append(pair[part] if pair is not None else ZERO)
    for idx, coeff in x.terms.items():
        if any(freq != k for freq in coeff.terms):
            raise ModeError(f"coefficient of {idx} has frequencies outside mode {k}")
    return out


def canonical_mode(k: Sequence[object]) -> tuple[QuadScalar, ...]:
    return canonical_frequency(k)[0]
