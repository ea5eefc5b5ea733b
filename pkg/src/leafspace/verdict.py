from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Verdict:
    """A yes/no answer that carries the offending object on failure.

    Truthiness follows ``ok``, so a verdict can be used directly in ``if``
    and ``assert`` statements.
    """

    ok: bool
    witness: str | None = None
    detail: object = None

    def __bool__(self) -> bool:
        return self.ok

    @classmethod
    def passed(cls, detail: object = None) -> Verdict:
        return cls(True, None, detail)

    @classmethod
    def failed(cls, witness: str, detail: object = None) -> Verdict:
        return cls(False, witness, detail)
