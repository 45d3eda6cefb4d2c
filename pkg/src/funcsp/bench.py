"""Benchmark harness: build instances, run backends, cross-validate, emit CSV
and plot-ready series files.

Backends: ``fd`` (AC-3 + labeling), ``asp`` (stable models of the compact
encoding), ``abduce`` (abductive framework reduced to the same constraint
store), ``mf`` (table search), and the two degraded labeling modes ``bt``
(check constraints as their variables become ground) and ``gt``
(generate-and-test).  Every solution any backend emits is validated
against the spec semantics, and all backends that complete on an
instance must agree on satisfiability.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass, field

from . import asp as asp_mod
from . import core
from . import fd as fd_mod
from . import model_finder
from .abduction import decode_fd_solution, framework_from_spec, reduce_to_fd
from .grounding import ground
from .problems import GenConfig, Graph, coloring_spec, gen_graph, queens_spec
from .transform import add_open_declarations, decode_model, functions_to_predicates

BACKENDS = ("fd", "asp", "abduce", "mf", "bt", "gt")

CSV_HEADER = "problem,param,arcs,backend,heuristic,status,time_ms,backtracks,choices,solutions,seed"


@dataclass
class RunRecord:
    problem: str
    param: int
    arcs: int | None
    backend: str
    heuristic: str
    status: str
    time_ms: int
    backtracks: int
    choices: int
    solutions_found: int
    seed: int

    def csv_row(self) -> str:
        arcs = "" if self.arcs is None else str(self.arcs)
        return (f"{self.problem},{self.param},{arcs},{self.backend},{self.heuristic},"
                f"{self.status},{self.time_ms},{self.backtracks},{self.choices},"
                f"{self.solutions_found},{self.seed}")


@dataclass
class Instance:
    problem: str
    param: int
    seed: int
    arcs: int | None
    spec: core.CspSpec


@dataclass
class SuiteResult:
    records: list[RunRecord] = field(default_factory=list)
    disagreements: list[str] = field(default_factory=list)
    flags: list[str] = field(default_factory=list)


def queens_instance(n: int) -> Instance:
    return Instance("queens", n, 0, None, queens_spec(n))


def coloring_instance(vertices: int, edge_prob: float, colors: int, seed: int) -> Instance:
    g = gen_graph(GenConfig(vertices, edge_prob, seed))
    return Instance("coloring", vertices, seed, g.n_edges, coloring_spec(g, colors))


def coloring_instance_from_graph(g: Graph, colors: int, seed: int = 0) -> Instance:
    return Instance("coloring", g.n_vertices, seed, g.n_edges, coloring_spec(g, colors))


def run_backend(spec: core.CspSpec, backend: str, heuristic: str = "ffc",
                mode: str = "first", limit: int | None = None,
                timeout_s: float | None = None):
    """Run one backend; returns (interpretations, stats, complete, timed_out,
    truncated, heuristic_used)."""
    deadline = None if timeout_s is None else time.monotonic() + timeout_s
    if backend in ("fd", "abduce", "bt", "gt"):
        if backend == "abduce":
            # the abductive route: view the spec as a framework, then hand the
            # same constraints a constraint program would post to the FD solver
            framework_from_spec(spec)
        store, cells = reduce_to_fd(spec)
        consistency = {"fd": "ac3", "abduce": "ac3", "bt": "check-only", "gt": "none"}[backend]
        heur = heuristic if backend in ("fd", "abduce") else "lex"
        res = fd_mod.label(store, heuristic=heur, consistency=consistency,
                           mode=mode, limit=limit, deadline=deadline)
        interps = [decode_fd_solution(spec, cells, sol) for sol in res.solutions]
        return interps, store.stats, res.complete, res.timed_out, res.truncated, heur
    if backend == "asp":
        t = functions_to_predicates(spec)
        prog = add_open_declarations(t, compact=True)
        sorts = {s.name: s.size for s in spec.sorts}
        g = ground(prog, sorts, spec.fact_tables())
        res = asp_mod.solve(g, mode=mode, limit=limit, deadline=deadline)
        interps = []
        for m in res.solutions:
            atoms = {g.atoms[a] for a in m}
            interps.append(decode_model(t, spec, atoms))
        return interps, res.stats, res.complete, res.timed_out, res.truncated, ""
    if backend == "mf":
        res = model_finder.find_models(spec, mode=mode, limit=limit, deadline=deadline)
        return res.solutions, res.stats, res.complete, res.timed_out, res.truncated, ""
    raise ValueError(f"unknown backend {backend!r}")


def run_instance(inst: Instance, backend: str, heuristic: str = "ffc",
                 mode: str = "first", timeout_s: float = 60.0) -> tuple[RunRecord, list]:
    t0 = time.monotonic()
    interps, stats, complete, timed_out, truncated, heur = run_backend(
        inst.spec, backend, heuristic=heuristic, mode=mode, timeout_s=timeout_s)
    elapsed_ms = int(round((time.monotonic() - t0) * 1000))

    if timed_out:
        status = "timeout"
        interps = []  # timeout runs never contribute solutions
    elif truncated:
        status = "truncated"
    elif interps:
        status = "sat"
    else:
        status = "unsat"

    for interp in interps:
        violations = core.check(inst.spec, interp)
        if violations:
            raise RuntimeError(
                f"backend {backend} emitted an invalid solution on "
                f"{inst.problem} param={inst.param}: {violations[:3]}")
    rec = RunRecord(
        problem=inst.problem, param=inst.param, arcs=inst.arcs, backend=backend,
        heuristic=heur, status=status, time_ms=elapsed_ms,
        backtracks=stats.backtracks, choices=stats.choices,
        solutions_found=len(interps), seed=inst.seed)
    return rec, interps


def default_config() -> dict:
    return {
        "timeout_s": 60.0,
        "mode": "first",
        "heuristic": "ffc",
        "queens": [
            {"backends": ["fd", "abduce"], "ns": list(range(4, 21, 2))},
            {"backends": ["asp", "mf", "bt"], "ns": list(range(4, 13))},
            {"backends": ["gt"], "ns": list(range(4, 8))},
        ],
        "coloring": [
            {"backends": ["fd", "asp", "abduce", "mf"],
             "vertices": list(range(10, 61, 10)),
             "edge_prob": 0.2, "colors": 4, "seed": 1},
        ],
    }


class ConfigError(ValueError):
    pass


def _validate_config(config: dict) -> None:
    known = {"timeout_s", "mode", "heuristic", "queens", "coloring"}
    for key in config:
        if key not in known:
            raise ConfigError(f"unknown config key {key!r}")
    if config.get("mode", "first") not in ("first", "all"):
        raise ConfigError(f"bad mode {config.get('mode')!r}")
    if config.get("heuristic", "ffc") not in ("ffc", "lex"):
        raise ConfigError(f"bad heuristic {config.get('heuristic')!r}")
    for job in config.get("queens", []):
        for b in job.get("backends", []):
            if b not in BACKENDS:
                raise ConfigError(f"unknown backend {b!r}")
        if not job.get("ns"):
            raise ConfigError("queens job without ns")
    for job in config.get("coloring", []):
        for b in job.get("backends", []):
            if b not in BACKENDS:
                raise ConfigError(f"unknown backend {b!r}")
        if not job.get("vertices"):
            raise ConfigError("coloring job without vertices")


def run_suite(config: dict | None = None) -> SuiteResult:
    """Run every (instance, backend) pair of the config and cross-validate."""
    config = config if config is not None else default_config()
    _validate_config(config)
    timeout_s = float(config.get("timeout_s", 60.0))
    mode = config.get("mode", "first")
    heuristic = config.get("heuristic", "ffc")

    plan: list[tuple[Instance, str]] = []
    instances: dict[tuple, Instance] = {}

    def instance_for(key, build):
        if key not in instances:
            instances[key] = build()
        return instances[key]

    for job in config.get("queens", []):
        for n in job["ns"]:
            inst = instance_for(("queens", n), lambda n=n: queens_instance(n))
            for b in job["backends"]:
                plan.append((inst, b))
    for job in config.get("coloring", []):
        colors = job.get("colors", 4)
        prob = job.get("edge_prob", 0.2)
        seed = job.get("seed", 1)
        for nv in job["vertices"]:
            inst = instance_for(("coloring", nv, seed),
                                lambda nv=nv: coloring_instance(nv, prob, colors, seed))
            for b in job["backends"]:
                plan.append((inst, b))

    result = SuiteResult()
    for inst, backend in plan:
        rec, _ = run_instance(inst, backend, heuristic=heuristic, mode=mode,
                              timeout_s=timeout_s)
        result.records.append(rec)

    result.disagreements.extend(agreement_failures(result.records))
    result.flags.extend(trend_flags(result.records))
    result.records.sort(key=lambda r: (r.problem, r.param, r.backend))
    return result


def agreement_failures(records: list[RunRecord]) -> list[str]:
    """Instances on which backends that completed disagree on sat/unsat."""
    by_instance: dict[tuple, dict[str, str]] = {}
    for r in records:
        if r.status in ("sat", "unsat"):
            by_instance.setdefault((r.problem, r.param, r.seed), {})[r.backend] = r.status
    out = []
    for key, statuses in sorted(by_instance.items()):
        if len(set(statuses.values())) > 1:
            detail = " ".join(f"{b}={s}" for b, s in sorted(statuses.items()))
            out.append(f"{key[0]} param={key[1]} seed={key[2]}: {detail}")
    return out


def trend_flags(records: list[RunRecord]) -> list[str]:
    """Check the expected backtrack ordering between the stable-model and
    the consistency-based backend on queens; inversions are reported, not
    failed, since the propagation strength of the two solvers differs."""
    flags = []
    queens = [r for r in records if r.problem == "queens"]
    by_n: dict[int, dict[str, RunRecord]] = {}
    for r in queens:
        by_n.setdefault(r.param, {})[r.backend] = r
    for n, recs in sorted(by_n.items()):
        if "asp" in recs and "fd" in recs:
            if recs["asp"].backtracks <= recs["fd"].backtracks:
                flags.append(
                    f"queens n={n}: asp backtracks ({recs['asp'].backtracks}) "
                    f"not above fd ({recs['fd'].backtracks})")
    return flags


def emit_csv(records: list[RunRecord], path: str) -> None:
    if not records:
        raise ValueError("no records to emit")
    rows = sorted(records, key=lambda r: (r.problem, r.param, r.backend))
    with open(path, "w") as f:
        f.write(CSV_HEADER + "\n")
        for r in rows:
            f.write(r.csv_row() + "\n")


def emit_series(records: list[RunRecord], directory: str) -> list[str]:
    """One whitespace-separated series file per (problem, backend):
    ``param time_ms backtracks``, sorted by param."""
    if not records:
        raise ValueError("no records to emit")
    os.makedirs(directory, exist_ok=True)
    groups: dict[tuple[str, str], list[RunRecord]] = {}
    for r in records:
        groups.setdefault((r.problem, r.backend), []).append(r)
    written = []
    for (problem, backend), recs in sorted(groups.items()):
        path = os.path.join(directory, f"{problem}_{backend}.dat")
        with open(path, "w") as f:
            for r in sorted(recs, key=lambda r: r.param):
                f.write(f"{r.param} {r.time_ms} {r.backtracks}\n")
        written.append(path)
    return written
