"""Batch scenario runner, commutativity checks and report output."""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import os
import tempfile
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Callable, Optional, Sequence

import numpy as np

from .algorithms import (
    COMMUTE_TOL,
    HoppingHamiltonian,
    ScenarioResult,
    classical_probabilities,
    evolve_single_excitation,
    grover_pipeline,
    multiplicative_order,
    run_grover,
    run_linear_sim,
    run_nonlinear_counterexample,
    run_period_finding,
    shipped_maps,
    single_excitation_state,
)
from .codecs import (
    GlobalAssignmentTable,
    c2_define,
    c2_interpret,
    c3_define,
    fig1_records,
    synthetic_directory,
)
from .errors import PreconditionError, QciError, ValidationError
from .ledger import COUNTERS, CostLedger, GrowthClass, fit_growth
from .qtm import ApiCall, ProgramSpec, registered_calls, specify_api_call, specify_qtm_program
from .statevector import measure_qubit_marginals

log = logging.getLogger(__name__)

KINDS = ("grover", "period", "linsim", "nonlinear", "qtm-cost")
REPORT_FIELDS = (
    "scenario",
    "n",
    "N",
    "definition_steps",
    "parameter_steps",
    "interpretation_steps",
    "baseline_steps",
    "quantum_oracle_queries",
    "quantum_gate_count",
    "correct",
)
WORKERS_ENV = "QCI_WORKERS"


@dataclass
class ScenarioConfig:
    kind: str
    sizes: list = field(default_factory=list)
    seeds: list = field(default_factory=lambda: [0])
    params: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValidationError(f"unknown scenario kind {self.kind!r}; expected one of {KINDS}")
        self.sizes = [int(s) for s in self.sizes]
        self.seeds = [int(s) for s in self.seeds]
        if not self.seeds:
            raise ValidationError("at least one seed is required")
        bounds = {"grover": (2, 12), "linsim": (1, 10), "nonlinear": (1, 14), "qtm-cost": (0, 20)}
        if self.kind in bounds:
            lo, hi = bounds[self.kind]
            if not self.sizes:
                raise ValidationError(f"{self.kind} needs a size sweep")
            bad = [s for s in self.sizes if not lo <= s <= hi]
            if bad:
                raise ValidationError(f"{self.kind} sizes {bad} outside {lo}..{hi}")

    @classmethod
    def from_dict(cls, data: dict) -> "ScenarioConfig":
        return cls(
            kind=data["kind"],
            sizes=data.get("sizes", []),
            seeds=data.get("seeds", [0]),
            params=data.get("params", {}),
        )


@dataclass
class SuiteConfig:
    scenarios: list
    workers: int = 1


def load_config(path) -> SuiteConfig:
    """Read a flat JSON suite file.

    The document is either a single scenario object or
    ``{"scenarios": [...], "workers": k}``.
    """
    with open(path) as fh:
        data = json.load(fh)
    return parse_config(data)


def parse_config(data) -> SuiteConfig:
    if isinstance(data, list):
        data = {"scenarios": data}
    elif "kind" in data:
        data = {"scenarios": [data]}
    scenarios = [ScenarioConfig.from_dict(item) for item in data["scenarios"]]
    return SuiteConfig(scenarios, int(data.get("workers", 1)))


def default_config_path() -> Path:
    return Path(str(resources.files("qci") / "data" / "default_suite.json"))


def default_config() -> SuiteConfig:
    return load_config(default_config_path())


def derive_seed(base_seed: int, seed: int) -> int:
    return int(np.random.SeedSequence([base_seed, seed]).generate_state(1, np.uint64)[0])


# -- job expansion --------------------------------------------------------


def _grover_jobs(cfg: ScenarioConfig, base_seed: int):
    use_fixture = cfg.params.get("directory") == "fig1"
    for n in cfg.sizes:
        for seed in cfg.seeds:
            def job(n=n, seed=seed):
                s = derive_seed(base_seed, seed)
                if use_fixture:
                    records = fig1_records()
                else:
                    records = synthetic_directory(n, s)
                query = cfg.params.get("query")
                if query is None:
                    pick = np.random.default_rng([s, n, 1]).integers(len(records))
                    query = records[int(pick)][0]
                return run_grover(n, records, query, seed, indexed=bool(cfg.params.get("indexed")))

            yield "grover", n, seed, job


def _period_jobs(cfg: ScenarioConfig, base_seed: int):
    for a, M in cfg.params.get("cases", [[7, 15]]):
        for seed in cfg.seeds:
            def job(a=a, M=M, seed=seed):
                result = run_period_finding(a, M, derive_seed(base_seed, seed))
                result.seed = seed
                return result

            yield "period", None, seed, job


def _linsim_jobs(cfg: ScenarioConfig, base_seed: int):
    topology = cfg.params.get("topology", "chain")
    t = float(cfg.params.get("t", 1.0))
    initial = cfg.params.get("initial", "site0")
    name = f"linsim-{topology}"
    for n in cfg.sizes:
        for seed in cfg.seeds:
            def job(n=n, seed=seed):
                h = getattr(HoppingHamiltonian, topology)(n)
                if initial == "random":
                    rng = np.random.default_rng([derive_seed(base_seed, seed), n])
                    c = rng.standard_normal(n) + 1j * rng.standard_normal(n)
                    c /= np.linalg.norm(c)
                else:
                    c = np.zeros(n, dtype=complex)
                    c[0] = 1.0
                return run_linear_sim(h, c, t, seed=seed, scenario=name)

            yield name, n, seed, job


def _nonlinear_jobs(cfg: ScenarioConfig, base_seed: int):
    names = cfg.params.get("maps", ["identity", "lookup3", "logistic20"])
    for n in cfg.sizes:
        domain = [f"x{i + 1}" for i in range(n)]
        maps = shipped_maps(domain)
        for name in names:
            for seed in cfg.seeds:
                def job(name=name, seed=seed, domain=domain, maps=maps):
                    rng = np.random.default_rng(derive_seed(base_seed, seed))
                    label = domain[int(rng.integers(len(domain)))]
                    return run_nonlinear_counterexample(
                        domain, maps[name], label, name=f"nonlinear-{name}", seed=seed
                    )

                yield f"nonlinear-{name}", n, seed, job


def qtm_cost_rows(m: int) -> list[ScenarioResult]:
    """Price a full program-register specification and every API call."""
    program_ledger = CostLedger()
    program_cost = specify_qtm_program(ProgramSpec(m, [0] * (1 << m)), program_ledger)
    rows = [
        ScenarioResult("qtm-program", m, 1 << m, program_ledger, program_cost == 1 << m,
                       {"cost": program_cost})
    ]
    for name, mode, arity in registered_calls():
        ledger = CostLedger()
        cost = specify_api_call(ApiCall(name, [0] * arity, mode), ledger)
        ok = cost == arity + 1
        if arity < (1 << m) - 1:
            ok = ok and cost < program_cost
        label = f"qtm-api-{name}" + (f"-{mode}" if mode else "")
        rows.append(ScenarioResult(label, m, 1 << m, ledger, ok, {"cost": cost}))
    return rows


def _qtm_jobs(cfg: ScenarioConfig, base_seed: int):
    for m in cfg.sizes:
        for seed in cfg.seeds:
            yield "qtm-cost", m, seed, (lambda m=m: qtm_cost_rows(m))


_EXPANDERS = {
    "grover": _grover_jobs,
    "period": _period_jobs,
    "linsim": _linsim_jobs,
    "nonlinear": _nonlinear_jobs,
    "qtm-cost": _qtm_jobs,
}


# -- suite ----------------------------------------------------------------


@dataclass
class Report:
    rows: list
    growth: dict = field(default_factory=dict)

    @property
    def all_correct(self) -> bool:
        return all(r.correct for r in self.rows)

    def records(self) -> list[dict]:
        return [row_record(r) for r in self.rows]


def row_record(result: ScenarioResult) -> dict:
    record = {"scenario": result.scenario, "n": result.n, "N": result.N}
    record.update({c: getattr(result.ledger, c) for c in COUNTERS})
    record["correct"] = bool(result.correct)
    return record


def _execute(entry) -> list[ScenarioResult]:
    name, n, seed, job = entry
    try:
        out = job()
    except Exception as exc:  # captured per row so one bad scenario cannot hide the rest
        log.warning("scenario %s n=%s seed=%s failed: %s", name, n, seed, exc)
        n_val = n if n is not None else 0
        return [
            ScenarioResult(name, n_val, 1 << n_val, CostLedger(), False, seed=seed,
                           error=f"{type(exc).__name__}: {exc}")
        ]
    return out if isinstance(out, list) else [out]


def resolve_workers(configured: int = 1) -> int:
    env = os.environ.get(WORKERS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            log.warning("ignoring non-integer %s=%r", WORKERS_ENV, env)
    return max(1, configured)


def summarize_growth(rows: Sequence[ScenarioResult]) -> dict:
    """Fit a growth class per scenario name and counter.

    Counts are averaged over seeds at each ``N`` first.  Entries are
    ``None`` where fewer than four distinct sizes were run.
    """
    by_name: dict[str, dict[int, list[CostLedger]]] = defaultdict(lambda: defaultdict(list))
    for row in rows:
        if row.error is None:
            by_name[row.scenario][row.N].append(row.ledger)
    summary = {}
    for name, by_N in by_name.items():
        fits: dict[str, Optional[GrowthClass]] = {}
        for counter in COUNTERS + ("interface_steps",):
            points = [
                (N, float(np.mean([getattr(led, counter) for led in ledgers])))
                for N, ledgers in sorted(by_N.items())
            ]
            fits[counter] = fit_growth(points) if len(points) >= 4 else None
        summary[name] = fits
    return summary


def run_suite(config, base_seed: int = 0, workers: Optional[int] = None) -> Report:
    if isinstance(config, ScenarioConfig):
        config = SuiteConfig([config])
    entries = [
        entry
        for scenario in config.scenarios
        for entry in _EXPANDERS[scenario.kind](scenario, base_seed)
    ]
    workers = resolve_workers(config.workers if workers is None else workers)
    if workers == 1:
        chunks = [_execute(e) for e in entries]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_execute, entries))
    rows = [row for chunk in chunks for row in chunk]
    return Report(rows, summarize_growth(rows))


# -- diagram checks -------------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    commutes: bool
    classical: object
    quantum: object
    detail: str = ""


def verify_diagram3_grover(
    records: Sequence[tuple[str, int]],
    query: str,
    table: Optional[GlobalAssignmentTable] = None,
) -> Verdict:
    """Compare a direct directory lookup with the stipulated quantum route."""
    classical = next((tuple(r) for r in records if r[0] == query), None)
    if table is None:
        table = c3_define(records)
    try:
        quantum, _ = grover_pipeline(table, query)
    except QciError as exc:
        return Verdict(False, classical, None, f"{type(exc).__name__}: {exc}")
    return Verdict(classical == tuple(quantum), classical, tuple(quantum))


def verify_diagram3_period(a: int, M: int, seed: int = 0) -> Verdict:
    classical = multiplicative_order(a, M)
    quantum = run_period_finding(a, M, seed).payload["period"]
    return Verdict(classical == quantum, classical, quantum)


def verify_diagram3(kind: str, **instance) -> Verdict:
    if kind == "grover":
        return verify_diagram3_grover(**instance)
    if kind == "period":
        return verify_diagram3_period(**instance)
    raise PreconditionError(f"diagram 3 check needs a Case 1 or Case 3 scenario, got {kind!r}")


def verify_diagram4(
    hamiltonian: HoppingHamiltonian,
    initial: Sequence[complex],
    t: float,
    classical: Callable = classical_probabilities,
) -> Verdict:
    """Compare register-path probabilities with a classical model."""
    n = hamiltonian.n
    codec = c2_define([f"x{i + 1}" for i in range(n)], "zero")
    state = evolve_single_excitation(single_excitation_state(initial), hamiltonian, t)
    quantum = np.array([p for _, p in c2_interpret(codec, measure_qubit_marginals(state)).payload])
    reference = np.asarray(classical(hamiltonian, initial, t))
    gap = float(np.max(np.abs(quantum - reference)))
    return Verdict(gap <= COMMUTE_TOL, reference, quantum, f"max discrepancy {gap:.3e}")


def shipped_verifications(seed: int = 0) -> list[tuple[str, Verdict]]:
    """Diagram checks run by ``qci verify``."""
    out = []
    fixture = fig1_records()
    for phone, _ in fixture:
        out.append((f"diagram3 grover fig1 {phone}", verify_diagram3_grover(fixture, phone)))
    for a, M in [(2, 3), (2, 5), (7, 15), (2, 21)]:
        out.append((f"diagram3 period a={a} M={M}", verify_diagram3_period(a, M, seed)))
    for topology in ("chain", "ring"):
        for n in (2, 4, 8):
            h = getattr(HoppingHamiltonian, topology)(n)
            initial = np.zeros(n, dtype=complex)
            initial[0] = 1.0
            for t in (0.0, 0.5, math.pi / 2, 3.0):
                out.append((f"diagram4 {topology} n={n} t={t:.4g}", verify_diagram4(h, initial, t)))
    return out


# -- output ---------------------------------------------------------------


def render_csv(report: Report) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=REPORT_FIELDS, lineterminator="\n")
    writer.writeheader()
    for record in report.records():
        record["correct"] = "true" if record["correct"] else "false"
        writer.writerow(record)
    return buf.getvalue()


def render_json(report: Report) -> str:
    return json.dumps(report.records(), indent=2) + "\n"


def emit_report(report: Report, fmt: str, path) -> Path:
    """Write the report atomically (temp file in the same directory, then rename)."""
    if not report.rows:
        raise PreconditionError("refusing to write an empty report")
    renderers = {"csv": render_csv, "json": render_json}
    if fmt not in renderers:
        raise ValidationError(f"unknown report format {fmt!r}")
    text = renderers[fmt](report)
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def format_summary(report: Report) -> str:
    lines = [f"{len(report.rows)} rows, {sum(not r.correct for r in report.rows)} incorrect"]
    for name, fits in sorted(report.growth.items()):
        fit = fits.get("interface_steps")
        lines.append(f"  {name:<28} interface cost: {fit if fit else 'n/a (fewer than 4 sizes)'}")
    for row in report.rows:
        if row.error:
            lines.append(f"  error in {row.scenario} n={row.n} seed={row.seed}: {row.error}")
    return "\n".join(lines)
