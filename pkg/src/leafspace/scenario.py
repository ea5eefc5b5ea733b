"""Scenario files: a foliated torus, a leaf-space presentation and a task list.

Scenarios are TOML documents.  Every number that enters the exact arithmetic
is written as a string (``"3/2"``, ``"1+2√2"``); phases are written with π
(``"π/2"``, ``"2π"``).  See ``scenarios/kronecker.scn`` for a complete
example.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import tomli_w

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from .cohomology import DEFAULT_K
from .diffeology import GeneratedDiffeology, Plot, RelationWitness, standard_quotient_diffeology, standard_torus_diffeology
from .foliation import LinearFoliation
from .forms import AffineMap
from .scalars import QuadScalar, format_phase, parse_phase, parse_quad

TASKS = (
    "derham-betti",
    "basic-betti",
    "quotient-betti",
    "verify-calculus",
    "verify-thm3",
    "verify-thm4",
    "verify-thm5",
    "verify-injectivity",
)


class ScenarioError(ValueError):
    """Parse or validation failure; the message names the line/column or the field."""


@dataclass(frozen=True)
class Scenario:
    name: str
    d: int
    n: int
    K: int = DEFAULT_K
    foliation: LinearFoliation | None = None
    diffeology: GeneratedDiffeology | None = None
    diffeology_preset: str = "standard"
    tasks: tuple[str, ...] = ()
    seed: int = 0
    trials: int = 100

    def quotient(self) -> GeneratedDiffeology:
        if self.foliation is None:
            raise ScenarioError("scenario has no foliation")
        if self.diffeology is not None:
            return self.diffeology
        return standard_quotient_diffeology(self.foliation)

    def torus(self) -> GeneratedDiffeology:
        return standard_torus_diffeology(self.n)

    # serialization -------------------------------------------------------

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"name": self.name, "d": self.d, "n": self.n, "K": self.K}
        out["seed"] = self.seed
        out["trials"] = self.trials
        out["tasks"] = list(self.tasks)
        if self.foliation is not None:
            out["foliation"] = {
                "name": self.foliation.name,
                "vectors": [[str(x) for x in v] for v in self.foliation.vectors],
            }
        if self.diffeology is not None:
            out["diffeology"] = {
                "preset": "none",
                "generators": [_plot_dict(g) for g in self.diffeology.generators],
                "witnesses": [
                    {"source": w.source, "target": w.target, **_map_dict(w.map)} for w in self.diffeology.witnesses
                ],
            }
        elif self.foliation is not None:
            out["diffeology"] = {"preset": self.diffeology_preset}
        return out

    def dumps(self) -> str:
        return tomli_w.dumps(self.to_dict())


def _map_dict(m: AffineMap) -> dict[str, Any]:
    out: dict[str, Any] = {"matrix": [[str(x) for x in row] for row in m.matrix], "phase": [format_phase(c) for c in m.phase]}
    if m.source == 0:
        out["domain"] = 0
    return out


def _plot_dict(p: Plot) -> dict[str, Any]:
    out: dict[str, Any] = {"name": p.name, "lift": _map_dict(p.body)}
    if len(p.lifts) > 1:
        out["alternates"] = [_map_dict(m) for m in p.lifts[1:]]
    return out


def _require(table: dict, key: str, kind: type, where: str) -> Any:
    if key not in table:
        raise ScenarioError(f"{where}: missing field {key!r}")
    value = table[key]
    if kind is int and isinstance(value, bool) or not isinstance(value, kind):
        raise ScenarioError(f"{where}.{key}: expected {kind.__name__}, got {type(value).__name__}")
    return value


def _scalar(text: Any, d: int, where: str) -> QuadScalar:
    if isinstance(text, int) and not isinstance(text, bool):
        return QuadScalar(text)
    if not isinstance(text, str):
        raise ScenarioError(f"{where}: expected an exact number string")
    try:
        return parse_quad(text, d)
    except ValueError as exc:
        raise ScenarioError(f"{where}: {exc}") from None


def _phase(text: Any, d: int, where: str) -> QuadScalar:
    if isinstance(text, int) and not isinstance(text, bool):
        return QuadScalar(text)
    if not isinstance(text, str):
        raise ScenarioError(f"{where}: expected a phase string")
    try:
        return parse_phase(text, d)
    except ValueError as exc:
        raise ScenarioError(f"{where}: {exc}") from None


def _affine(table: Any, d: int, where: str) -> AffineMap:
    if not isinstance(table, dict):
        raise ScenarioError(f"{where}: expected a table with matrix and phase")
    rows = _require(table, "matrix", list, where)
    matrix = []
    for i, row in enumerate(rows):
        if not isinstance(row, list):
            raise ScenarioError(f"{where}.matrix[{i}]: expected a list")
        matrix.append([_scalar(x, d, f"{where}.matrix[{i}][{j}]") for j, x in enumerate(row)])
    phase_raw = table.get("phase", ["0"] * len(matrix))
    if not isinstance(phase_raw, list):
        raise ScenarioError(f"{where}.phase: expected a list")
    phase = [_phase(x, d, f"{where}.phase[{i}]") for i, x in enumerate(phase_raw)]
    source = table.get("domain", len(matrix[0]) if matrix else 0)
    try:
        return AffineMap(tuple(map(tuple, matrix)), tuple(phase), source)
    except ValueError as exc:
        raise ScenarioError(f"{where}: {exc}") from None


def parse_scenario(text: str, source: str = "<scenario>") -> Scenario:
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ScenarioError(f"{source}: parse error {exc}") from None
    name = _require(doc, "name", str, source)
    d = _require(doc, "d", int, source)
    if d < 1:
        raise ScenarioError(f"{source}.d: discriminant must be >= 1")
    try:
        QuadScalar(0, 1, d)
    except ValueError as exc:
        raise ScenarioError(f"{source}.d: {exc}") from None
    n = _require(doc, "n", int, source)
    if n < 1:
        raise ScenarioError(f"{source}.n: torus dimension must be >= 1")
    K = doc.get("K", DEFAULT_K)
    if not isinstance(K, int) or K < 0:
        raise ScenarioError(f"{source}.K: expected a nonnegative integer")
    seed = doc.get("seed", 0)
    trials = doc.get("trials", 100)
    if not isinstance(seed, int) or not isinstance(trials, int) or trials < 1:
        raise ScenarioError(f"{source}: seed must be an integer and trials a positive integer")
    tasks = doc.get("tasks", [])
    if not isinstance(tasks, list):
        raise ScenarioError(f"{source}.tasks: expected a list")
    for t in tasks:
        if t not in TASKS:
            raise ScenarioError(f"{source}.tasks: unknown task {t!r} (known: {', '.join(TASKS)})")

    foliation = None
    if "foliation" in doc:
        ft = doc["foliation"]
        if not isinstance(ft, dict):
            raise ScenarioError(f"{source}.foliation: expected a table")
        vecs_raw = _require(ft, "vectors", list, f"{source}.foliation")
        vecs = []
        for i, v in enumerate(vecs_raw):
            where = f"{source}.foliation.vectors[{i}]"
            if not isinstance(v, list) or len(v) != n:
                raise ScenarioError(f"{where}: expected {n} entries")
            vecs.append(tuple(_scalar(x, d, f"{where}[{j}]") for j, x in enumerate(v)))
        try:
            foliation = LinearFoliation(tuple(vecs), ft.get("name", name))
        except ValueError as exc:
            raise ScenarioError(f"{source}.foliation: {exc}") from None

    diffeology = None
    preset = "standard"
    if "diffeology" in doc:
        dt = doc["diffeology"]
        if not isinstance(dt, dict):
            raise ScenarioError(f"{source}.diffeology: expected a table")
        if foliation is None:
            raise ScenarioError(f"{source}.diffeology: a leaf-space presentation needs a foliation")
        preset = dt.get("preset", "standard")
        if preset not in ("standard", "none"):
            raise ScenarioError(f"{source}.diffeology.preset: expected 'standard' or 'none'")
        if preset == "none":
            diffeology = _explicit_diffeology(dt, n, d, foliation, f"{source}.diffeology")
    return Scenario(name, d, n, K, foliation, diffeology, preset, tuple(tasks), seed, trials)


def _explicit_diffeology(dt: dict, n: int, d: int, foliation: LinearFoliation, where: str) -> GeneratedDiffeology:
    gens = []
    for i, g in enumerate(_require(dt, "generators", list, where)):
        w = f"{where}.generators[{i}]"
        if not isinstance(g, dict):
            raise ScenarioError(f"{w}: expected a table")
        gname = _require(g, "name", str, w)
        lifts = [_affine(_require(g, "lift", dict, w), d, f"{w}.lift")]
        lifts += [_affine(a, d, f"{w}.alternates[{j}]") for j, a in enumerate(g.get("alternates", []))]
        try:
            gens.append(Plot(gname, tuple(lifts), foliation))
        except ValueError as exc:
            raise ScenarioError(f"{w}: {exc}") from None
    wits = []
    for i, x in enumerate(dt.get("witnesses", [])):
        w = f"{where}.witnesses[{i}]"
        if not isinstance(x, dict):
            raise ScenarioError(f"{w}: expected a table")
        wits.append(RelationWitness(_require(x, "source", str, w), _require(x, "target", str, w), _affine(x, d, w)))
    try:
        return GeneratedDiffeology(n, tuple(gens), tuple(wits), foliation, f"T^{n}/{foliation.name}")
    except ValueError as exc:
        raise ScenarioError(f"{where}: {exc}") from None


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioError(f"cannot read {path}: {exc.strerror}") from None
    return parse_scenario(text, str(path))
