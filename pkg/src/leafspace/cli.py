"""Command-line front end.

    leafspace run --scenario scenarios/kronecker.scn
    leafspace betti quotient --scenario scenarios/kronecker.scn --json out.json
    leafspace verify thm5 --scenario scenarios/kronecker.scn --trials 200

Exit status: 0 when every task succeeds, 1 when a verification fails,
2 on input errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from dataclasses import dataclass, field
from typing import Sequence

from . import __version__
from .cohomology import BettiTable, basic_betti, de_rham_betti, quotient_betti
from .diffeology import DiffeologyError
from .scenario import TASKS, Scenario, ScenarioError, load_scenario
from .verify import SUITES, SuiteResult, verify_calculus, verify_injectivity, verify_thm3, verify_thm4, verify_thm5

log = logging.getLogger("leafspace")

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


@dataclass
class Report:
    scenario: str
    seed: int
    results: list[dict] = field(default_factory=list)
    timings: dict[str, float] = field(default_factory=dict)

    @property
    def failed(self) -> bool:
        return any(r["status"] == "fail" for r in self.results)

    def to_dict(self) -> dict:
        # timings are left out so reports stay byte-identical across runs
        return {"scenario": self.scenario, "results": self.results, "seed": self.seed, "version": __version__}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def betti_command(kind: str, scenario: Scenario, K: int | None = None) -> BettiTable:
    K = scenario.K if K is None else K
    if kind == "derham":
        return de_rham_betti(scenario.n, K)
    if scenario.foliation is None:
        raise ScenarioError(f"{kind} cohomology needs a [foliation] section")
    if kind == "basic":
        return basic_betti(scenario.foliation, K)
    if kind == "quotient":
        return quotient_betti(scenario.foliation, scenario.quotient(), K)
    raise ScenarioError(f"unknown cohomology {kind!r}")


def verify(suite: str, scenario: Scenario, seed: int, trials: int, K: int | None = None) -> SuiteResult:
    K = scenario.K if K is None else K
    if suite == "calculus":
        return verify_calculus(scenario.n, seed, trials, scenario.d)
    if suite == "thm3":
        return verify_thm3(scenario.n, seed, trials, scenario.d, K)
    if scenario.foliation is None:
        raise ScenarioError(f"suite {suite} needs a [foliation] section")
    args = dict(seed=seed, trials=trials, d=scenario.d, K=K, space=scenario.quotient())
    if suite == "thm4":
        return verify_thm4(scenario.foliation, **args)
    if suite == "thm5":
        return verify_thm5(scenario.foliation, **args)
    if suite == "injectivity":
        return verify_injectivity(scenario.foliation, **args)
    raise ScenarioError(f"unknown suite {suite!r}")


def run_task(task: str, scenario: Scenario, seed: int, trials: int, K: int | None) -> dict:
    if task.endswith("-betti"):
        kind = {"derham-betti": "derham", "basic-betti": "basic", "quotient-betti": "quotient"}[task]
        table = betti_command(kind, scenario, K)
        return {"task": task, "status": "value", "betti": list(table.betti), "table": table.to_dict()}
    suite = task.removeprefix("verify-")
    res = verify(suite, scenario, seed, trials, K)
    out = {"task": task, "status": "pass" if res.ok else "fail", "trials": res.trials}
    if res.counterexample:
        out["counterexample"] = res.counterexample
    if res.log:
        out["log"] = res.log
    return out


def run_scenario(scenario: Scenario, tasks: Sequence[str] | None = None, seed: int | None = None,
                 trials: int | None = None, K: int | None = None) -> Report:
    """Execute the tasks in order and collect their results."""
    seed = scenario.seed if seed is None else seed
    trials = scenario.trials if trials is None else trials
    report = Report(scenario.name, seed)
    for task in scenario.tasks if tasks is None else tasks:
        if task not in TASKS:
            raise ScenarioError(f"unknown task {task!r}")
        start = time.perf_counter()
        report.results.append(run_task(task, scenario, seed, trials, K))
        report.timings[task] = time.perf_counter() - start
        log.info("%s: %s (%.2fs)", task, report.results[-1]["status"], report.timings[task])
    return report


def _print_report(report: Report, out) -> None:
    print(f"scenario {report.scenario} (seed {report.seed})", file=out)
    for r in report.results:
        line = f"  {r['task']:<20} {r['status']:<6}"
        if "betti" in r:
            line += " betti " + " ".join(map(str, r["betti"]))
        line += f"  [{report.timings.get(r['task'], 0.0):.2f}s]"
        print(line, file=out)
        if "counterexample" in r:
            print(f"    counterexample: {r['counterexample']}", file=out)


def _write_json(path: str | None, payload: str) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(payload)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="leafspace", description="Exact cohomology of foliated tori and their leaf spaces.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--scenario", required=True, help="scenario file (TOML)")
        p.add_argument("--K", type=int, default=None, help="mode truncation |k|_inf <= K")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--trials", type=int, default=None)
        p.add_argument("--json", default=None, help="write the JSON report here")

    run = sub.add_parser("run", help="run the scenario's tasks")
    common(run)
    run.add_argument("--task", action="append", choices=TASKS, help="override the task list (repeatable)")

    betti = sub.add_parser("betti", help="print a Betti table")
    betti.add_argument("kind", choices=("derham", "basic", "quotient"))
    common(betti)

    ver = sub.add_parser("verify", help="run one verification suite")
    ver.add_argument("suite", choices=SUITES)
    common(ver)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        scenario = load_scenario(args.scenario)
        if args.command == "run":
            report = run_scenario(scenario, args.task, args.seed, args.trials, args.K)
        elif args.command == "betti":
            report = run_scenario(scenario, [f"{args.kind}-betti"], args.seed, args.trials, args.K)
            table = report.results[0]["table"]
            print(BettiTable(table["complex"], table["K"], tuple(table["betti"]),
                             tuple(map(tuple, table["modes_used"])), scenario.name).render())
            print(json.dumps(table, sort_keys=True))
        else:
            report = run_scenario(scenario, [f"verify-{args.suite}"], args.seed, args.trials, args.K)
    except (ScenarioError, DiffeologyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.command != "betti":
        _print_report(report, sys.stdout)
    _write_json(args.json, report.to_json())
    return EXIT_FAIL if report.failed else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
