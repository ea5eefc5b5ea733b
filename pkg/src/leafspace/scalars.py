"""Exact scalars: the real quadratic field Q(sqrt d) and trigonometric polynomials.

Tori are R^n / (2 pi Z)^n.  A :class:`TrigScalar` is a finite sum
``c cos(k.theta) + s sin(k.theta)`` with coefficients and frequency entries in
Q(sqrt d).  Affine phases are measured in quarter turns (units of pi/2), the
only phases at which cos and sin take exact values.
"""

from __future__ import annotations

import itertools
import math
import re
from fractions import Fraction
from functools import lru_cache, total_ordering
from typing import Iterable, Iterator, Mapping, Sequence, Union

__all__ = [
    "FieldMismatchError",
    "PhaseError",
    "QuadScalar",
    "TrigScalar",
    "Frequency",
    "parse_quad",
    "parse_phase",
    "format_phase",
    "quad_arith",
    "canonical_frequency",
    "trig_mul",
    "trig_partial",
    "trig_substitute_affine",
    "iter_modes",
    "ZERO",
    "ONE",
]


class FieldMismatchError(ValueError):
    """Raised when scalars from two different quadratic fields meet."""


class PhaseError(ValueError):
    """Raised when an affine phase is not a whole number of quarter turns."""


RationalLike = Union[int, Fraction]


@lru_cache(maxsize=None)
def _is_squarefree(d: int) -> bool:
    if d < 1:
        return False
    p = 2
    while p * p <= d:
        if d % (p * p) == 0:
            return False
        p += 1
    return True


@total_ordering
class QuadScalar:
    """An element ``a + b*sqrt(d)`` of Q(sqrt d).

    Rationals (``b == 0``) are stored with ``d = 1`` so they combine with any
    field.  Two irrational operands must share ``d``.
    """

    __slots__ = ("a", "b", "d", "_hash")

    def __init__(self, a: RationalLike = 0, b: RationalLike = 0, d: int = 1) -> None:
        a = Fraction(a)
        b = Fraction(b)
        if d != 1 and not _is_squarefree(d):
            raise ValueError(f"discriminant {d} is not a square-free integer >= 1")
        if d == 1:
            a, b = a + b, Fraction(0)
        if b == 0:
            d = 1
        self.a = a
        self.b = b
        self.d = d
        self._hash = None

    @classmethod
    def _raw(cls, a: Fraction, b: Fraction, d: int) -> QuadScalar:
        obj = object.__new__(cls)
        if b == 0:
            d = 1
        obj.a = a
        obj.b = b
        obj.d = d
        obj._hash = None
        return obj

    @classmethod
    def sqrt(cls, d: int) -> QuadScalar:
        return cls(0, 1, d)

    @staticmethod
    def coerce(x: object) -> QuadScalar:
        if isinstance(x, QuadScalar):
            return x
        if isinstance(x, (int, Fraction)):
            return QuadScalar._raw(Fraction(x), Fraction(0), 1)
        raise TypeError(f"cannot interpret {x!r} as an exact scalar")

    def _field(self, other: QuadScalar) -> int:
        if self.d == other.d or other.d == 1:
            return self.d
        if self.d == 1:
            return other.d
        raise FieldMismatchError(f"mixing Q(sqrt {self.d}) with Q(sqrt {other.d})")

    # arithmetic -----------------------------------------------------------

    def __add__(self, other: object) -> QuadScalar:
        try:
            o = QuadScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return QuadScalar._raw(self.a + o.a, self.b + o.b, self._field(o))

    __radd__ = __add__

    def __sub__(self, other: object) -> QuadScalar:
        try:
            o = QuadScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return QuadScalar._raw(self.a - o.a, self.b - o.b, self._field(o))

    def __rsub__(self, other: object) -> QuadScalar:
        return QuadScalar.coerce(other) - self

    def __neg__(self) -> QuadScalar:
        return QuadScalar._raw(-self.a, -self.b, self.d)

    def __mul__(self, other: object) -> QuadScalar:
        try:
            o = QuadScalar.coerce(other)
        except TypeError:
            return NotImplemented
        d = self._field(o)
        if not self.b and not o.b:
            return QuadScalar._raw(self.a * o.a, Fraction(0), 1)
        return QuadScalar._raw(
            self.a * o.a + self.b * o.b * d, self.a * o.b + self.b * o.a, d
        )

    __rmul__ = __mul__

    def inverse(self) -> QuadScalar:
        if not self:
            raise ZeroDivisionError("division by zero in Q(sqrt d)")
        if not self.b:
            return QuadScalar._raw(1 / self.a, Fraction(0), 1)
        norm = self.a * self.a - self.b * self.b * self.d
        return QuadScalar._raw(self.a / norm, -self.b / norm, self.d)

    def __truediv__(self, other: object) -> QuadScalar:
        try:
            o = QuadScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other: object) -> QuadScalar:
        return QuadScalar.coerce(other) * self.inverse()

    def conjugate(self) -> QuadScalar:
        return QuadScalar._raw(self.a, -self.b, self.d)

    # comparison -----------------------------------------------------------

    def sign(self) -> int:
        """Exact sign of the real number ``a + b sqrt d``."""
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0 or sa == sb:
            return sa or sb
        if sa == 0:
            return sb
        # opposite signs: compare a^2 with b^2 d
        lhs = self.a * self.a
        rhs = self.b * self.b * self.d
        return sa if lhs > rhs else sb

    def __bool__(self) -> bool:
        return bool(self.a) or bool(self.b)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, QuadScalar):
            return self.a == other.a and self.b == other.b and self.d == other.d
        if isinstance(other, (int, Fraction)):
            return not self.b and self.a == other
        return NotImplemented

    def __lt__(self, other: object) -> bool:
        try:
            o = QuadScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return (self - o).sign() < 0

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.a) if not self.b else hash((self.a, self.b, self.d))
        return self._hash

    # conversions ----------------------------------------------------------

    @property
    def is_rational(self) -> bool:
        return not self.b

    @property
    def is_integer(self) -> bool:
        return not self.b and self.a.denominator == 1

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def __repr__(self) -> str:
        return f"QuadScalar({self})"

    def __str__(self) -> str:
        if not self.b:
            return str(self.a)
        root = f"√{self.d}"
        if self.b == 1:
            tail = root
        elif self.b == -1:
            tail = "-" + root
        else:
            tail = f"{self.b}{root}"
        if not self.a:
            return tail
        if tail.startswith("-"):
            return f"{self.a}{tail}"
        return f"{self.a}+{tail}"


ZERO = QuadScalar(0)
ONE = QuadScalar(1)
HALF = QuadScalar(Fraction(1, 2))

_RAT = r"\d+(?:/\d+)?"
_QUAD_RE = re.compile(
    rf"""^\s*
    (?:(?P<asign>[+-])?\s*(?P<a>{_RAT})(?![\d/])(?!\s*\*?\s*(?:√|sqrt)))?    # rational part
    \s*
    (?:(?P<bsign>[+-])?\s*(?P<b>{_RAT})?\s*\*?\s*
       (?:√|sqrt)\s*\(?\s*(?P<d>\d+)\s*\)?
       (?:\s*/\s*(?P<bden>\d+))?)?                          # irrational part
    \s*$""",
    re.VERBOSE,
)


def parse_quad(text: str, d: int) -> QuadScalar:
    """Parse ``"3/2"``, ``"1+2√2"``, ``"-√2"`` or ``"1/2 - sqrt(2)/3"`` in Q(sqrt d).

    The radicand written in the string must equal ``d``.
    """
    m = _QUAD_RE.match(text)
    if not m or (m.group("a") is None and m.group("d") is None):
        raise ValueError(f"malformed scalar {text!r}")
    a = Fraction(m.group("a") or 0)
    if m.group("asign") == "-":
        a = -a
    if m.group("d") is None:
        return QuadScalar(a)
    if m.group("a") is not None and m.group("bsign") is None:
        raise ValueError(f"malformed scalar {text!r}: missing sign before radical")
    radicand = int(m.group("d"))
    if radicand != d:
        raise ValueError(f"scalar {text!r} uses √{radicand} but the field is Q(√{d})")
    b = Fraction(m.group("b") or 1)
    if m.group("bden"):
        b /= int(m.group("bden"))
    if m.group("bsign") == "-":
        b = -b
    return QuadScalar(a, b, d)


_PHASE_RE = re.compile(r"^\s*([+-]?\s*(?:\d+(?:/\d+)?)?)\s*\*?\s*(π|pi)?\s*(?:/\s*(\d+))?\s*$")


_PAREN_PHASE_RE = re.compile(r"^\s*\((?P<coef>[^()]*)\)\s*\*?\s*(?:π|pi)\s*(?:/\s*(?P<den>\d+))?\s*$")


def parse_phase(text: str, d: int = 1) -> QuadScalar:
    """Parse a phase such as ``"0"``, ``"π/2"``, ``"-3π/2"``, ``"2pi"`` or ``"(√2)π/2"``.

    Returns the phase in quarter turns.  A bare number without π is taken as
    a multiple of π/2 so that machine-written files stay short.
    """
    m = _PAREN_PHASE_RE.match(text)
    if m:
        return parse_quad(m.group("coef"), d) * 2 / int(m.group("den") or 1)
    m = _PHASE_RE.match(text)
    if not m or not (m.group(1).strip("+- ") or m.group(2)):
        raise ValueError(f"malformed phase {text!r}")
    coef = m.group(1).replace(" ", "")
    coef = Fraction(-1 if coef == "-" else 1 if coef in ("", "+") else coef)
    den = int(m.group(3) or 1)
    if m.group(2) is None:
        if m.group(3) is not None:
            raise ValueError(f"malformed phase {text!r}")
        return QuadScalar(coef)
    return QuadScalar(coef * 2 / den)


def format_phase(quarters: QuadScalar) -> str:
    if not quarters:
        return "0"
    half_turns = quarters.a / 2
    if not quarters.is_rational:
        return f"({quarters})π/2"
    num, den = half_turns.numerator, half_turns.denominator
    head = {1: "", -1: "-"}.get(num, str(num))
    return f"{head}π" if den == 1 else f"{head}π/{den}"


def quad_arith(x: QuadScalar, y: QuadScalar, op: str) -> QuadScalar:
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise ValueError(f"unknown operation {op!r}")


# ---------------------------------------------------------------------------
# trigonometric polynomials

Frequency = tuple  # tuple[QuadScalar, ...]


def canonical_frequency(k: Sequence[QuadScalar]) -> tuple[tuple[QuadScalar, ...], int]:
    """Return ``(k', s)`` with ``k' = s*k`` and the first nonzero entry positive."""
    k = tuple(QuadScalar.coerce(x) for x in k)
    for x in k:
        s = x.sign()
        if s > 0:
            return k, 1
        if s < 0:
            return tuple(-y for y in k), -1
    return k, 1


def _freq_add(k1: tuple, k2: tuple) -> tuple:
    return tuple(x + y for x, y in zip(k1, k2))


def _freq_sub(k1: tuple, k2: tuple) -> tuple:
    return tuple(x - y for x, y in zip(k1, k2))


def _is_zero_freq(k: tuple) -> bool:
    return not any(k)


def _sort_key(k: tuple) -> tuple:
    # canonical frequencies are lex-positive, so the zero mode sorts first
    return k


class TrigScalar:
    """Finite trigonometric polynomial on ``n`` coordinates, in normal form.

    ``terms`` maps a canonical frequency to ``(cos_coeff, sin_coeff)``.
    """

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Mapping[tuple, tuple[QuadScalar, QuadScalar]] | None = None):
        self.n = n
        acc: dict[tuple, list[QuadScalar]] = {}
        for k, (c, s) in (terms or {}).items():
            if len(k) != n:
                raise ValueError(f"frequency {k} has length {len(k)}, expected {n}")
            _accumulate(acc, k, QuadScalar.coerce(c), QuadScalar.coerce(s))
        self.terms = _finish(acc)

    @classmethod
    def _from_acc(cls, n: int, acc: dict) -> TrigScalar:
        obj = object.__new__(cls)
        obj.n = n
        obj.terms = _finish(acc)
        return obj

    @classmethod
    def constant(cls, n: int, value: object = 1) -> TrigScalar:
        return cls(n, {(ZERO,) * n: (QuadScalar.coerce(value), ZERO)})

    @classmethod
    def zero(cls, n: int) -> TrigScalar:
        return cls(n)

    @classmethod
    def cos(cls, k: Sequence, coeff: object = 1) -> TrigScalar:
        k = tuple(QuadScalar.coerce(x) for x in k)
        return cls(len(k), {k: (QuadScalar.coerce(coeff), ZERO)})

    @classmethod
    def sin(cls, k: Sequence, coeff: object = 1) -> TrigScalar:
        k = tuple(QuadScalar.coerce(x) for x in k)
        return cls(len(k), {k: (ZERO, QuadScalar.coerce(coeff))})

    def _check(self, other: TrigScalar) -> None:
        if self.n != other.n:
            raise ValueError(f"coordinate count mismatch: {self.n} vs {other.n}")

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, TrigScalar):
            return self.n == other.n and self.terms == other.terms
        if isinstance(other, (int, Fraction, QuadScalar)):
            return self == TrigScalar.constant(self.n, other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.n, frozenset(self.terms.items())))

    def __add__(self, other: TrigScalar) -> TrigScalar:
        if not isinstance(other, TrigScalar):
            other = TrigScalar.constant(self.n, other)
        self._check(other)
        acc = {k: list(v) for k, v in self.terms.items()}
        for k, (c, s) in other.terms.items():
            _accumulate(acc, k, c, s, canonical=True)
        return TrigScalar._from_acc(self.n, acc)

    __radd__ = __add__

    def __neg__(self) -> TrigScalar:
        obj = object.__new__(TrigScalar)
        obj.n = self.n
        obj.terms = {k: (-c, -s) for k, (c, s) in self.terms.items()}
        return obj

    def __sub__(self, other: TrigScalar) -> TrigScalar:
        if not isinstance(other, TrigScalar):
            other = TrigScalar.constant(self.n, other)
        return self + (-other)

    def scale(self, factor: object) -> TrigScalar:
        factor = QuadScalar.coerce(factor)
        if not factor:
            return TrigScalar(self.n)
        obj = object.__new__(TrigScalar)
        obj.n = self.n
        obj.terms = {k: (c * factor, s * factor) for k, (c, s) in self.terms.items()}
        return obj

    def __mul__(self, other: object) -> TrigScalar:
        if isinstance(other, TrigScalar):
            return trig_mul(self, other)
        if isinstance(other, (int, Fraction, QuadScalar)):
            return self.scale(other)
        return NotImplemented

    __rmul__ = __mul__

    def frequencies(self) -> list[tuple]:
        return sorted(self.terms, key=_sort_key)

    def evaluate(self, theta: Sequence[float]) -> float:
        """Floating-point value at a point; a sanity check only."""
        total = 0.0
        for k, (c, s) in self.terms.items():
            phase = sum(float(ki) * t for ki, t in zip(k, theta))
            total += float(c) * math.cos(phase) + float(s) * math.sin(phase)
        return total

    def __repr__(self) -> str:
        return f"TrigScalar({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for k in self.frequencies():
            c, s = self.terms[k]
            if _is_zero_freq(k):
                parts.append(str(c))
                continue
            arg = _format_arg(k)
            if c:
                parts.append(_coeff_prefix(c) + f"cos({arg})")
            if s:
                parts.append(_coeff_prefix(s) + f"sin({arg})")
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out


def _coeff_prefix(c: QuadScalar) -> str:
    if c == 1:
        return ""
    if c == -1:
        return "-"
    text = str(c)
    return f"({text})·" if ("+" in text or "-" in text[1:]) else f"{text}·"


def _format_arg(k: tuple) -> str:
    pieces = []
    for j, x in enumerate(k):
        if not x:
            continue
        name = f"x{j + 1}"
        if x == 1:
            p = name
        elif x == -1:
            p = "-" + name
        else:
            text = str(x)
            p = f"({text}){name}" if ("+" in text or "-" in text[1:]) else f"{text}{name}"
        pieces.append(p)
    out = pieces[0]
    for p in pieces[1:]:
        out += f"-{p[1:]}" if p.startswith("-") else f"+{p}"
    return out


def _accumulate(acc: dict, k: tuple, c: QuadScalar, s: QuadScalar, canonical: bool = False) -> None:
    if not canonical:
        k, sign = canonical_frequency(k)
        if sign < 0:
            s = -s
    if _is_zero_freq(k):
        s = ZERO
    slot = acc.get(k)
    if slot is None:
        acc[k] = [c, s]
    else:
        slot[0] = slot[0] + c
        slot[1] = slot[1] + s


def _finish(acc: dict) -> dict:
    return {k: (c, s) for k, (c, s) in acc.items() if c or s}


def trig_mul(x: TrigScalar, y: TrigScalar) -> TrigScalar:
    """Product in normal form via the product-to-sum identities."""
    x._check(y)
    acc: dict = {}
    for k1, (c1, s1) in x.terms.items():
        for k2, (c2, s2) in y.terms.items():
            plus = _freq_add(k1, k2)
            minus = _freq_sub(k1, k2)
            # cos A cos B = (cos(A-B) + cos(A+B))/2, sin A sin B = (cos(A-B) - cos(A+B))/2
            # sin A cos B = (sin(A+B) + sin(A-B))/2, cos A sin B = (sin(A+B) - sin(A-B))/2
            cc, ss, sc, cs = c1 * c2, s1 * s2, s1 * c2, c1 * s2
            if cc or ss or sc or cs:
                _accumulate(acc, minus, (cc + ss) * HALF, (sc - cs) * HALF)
                _accumulate(acc, plus, (cc - ss) * HALF, (sc + cs) * HALF)
    return TrigScalar._from_acc(x.n, acc)


def trig_partial(x: TrigScalar, j: int) -> TrigScalar:
    if not 0 <= j < x.n:
        raise IndexError(f"coordinate {j} out of range for {x.n} coordinates")
    out = {}
    for k, (c, s) in x.terms.items():
        kj = k[j]
        if kj:
            out[k] = (s * kj, -c * kj)
    obj = object.__new__(TrigScalar)
    obj.n = x.n
    obj.terms = {k: v for k, v in out.items() if v[0] or v[1]}
    return obj


# cos(phi + m pi/2), sin(phi + m pi/2) in terms of (cos phi, sin phi), for m mod 4
_SHIFT = {
    0: ((1, 0), (0, 1)),
    1: ((0, -1), (1, 0)),
    2: ((-1, 0), (0, -1)),
    3: ((0, 1), (-1, 0)),
}


def trig_substitute_affine(
    x: TrigScalar,
    matrix: Sequence[Sequence[QuadScalar]],
    phase: Sequence[QuadScalar] | None = None,
) -> TrigScalar:
    """Compose ``x`` with ``t -> M t + c``.

    ``matrix`` has one row per coordinate of ``x`` and one column per source
    coordinate.  ``phase`` is given in quarter turns; every ``k.c`` that occurs
    must be an integer, otherwise :class:`PhaseError` is raised.
    """
    rows = len(matrix)
    if rows != x.n:
        raise ValueError(f"matrix has {rows} rows, expected {x.n}")
    src = len(matrix[0]) if rows else 0
    if phase is None:
        phase = (ZERO,) * rows
    acc: dict = {}
    for k, (c, s) in x.terms.items():
        newk = tuple(
            sum((k[i] * matrix[i][j] for i in range(rows) if k[i] and matrix[i][j]), ZERO)
            for j in range(src)
        )
        shift = sum((k[i] * phase[i] for i in range(rows) if k[i] and phase[i]), ZERO)
        if not shift.is_integer:
            raise PhaseError(f"phase {format_phase(shift)} is not exactly representable")
        (cc, cs), (sc, ss) = _SHIFT[int(shift.a) % 4]
        # c cos(phi+m) + s sin(phi+m) = (c*cc + s*sc) cos(phi) + (c*cs + s*ss) sin(phi)
        _accumulate(acc, newk, c * cc + s * sc, c * cs + s * ss)
    return TrigScalar._from_acc(src, acc)


def iter_modes(n: int, bound: int) -> Iterator[tuple[QuadScalar, ...]]:
    """Canonical integer frequencies with sup-norm at most ``bound``, zero first."""
    modes = []
    for k in itertools.product(range(-bound, bound + 1), repeat=n):
        if next((x for x in k if x), 0) >= 0:
            modes.append(k)
    modes.sort(key=lambda k: (max(map(abs, k), default=0), k))
    for k in modes:
        yield tuple(QuadScalar(x) for x in k)


def as_quads(values: Iterable[object]) -> tuple[QuadScalar, ...]:
    return tuple(QuadScalar.coerce(v) for v in values)
