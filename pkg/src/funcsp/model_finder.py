"""Naive finite model generation directly over function tables.

Table cells are decided one by one in a fixed order (functions in
declaration order, domain elements ascending) with values tried
ascending.  Ground axiom instances are indexed by the last cell they
read, so each one is evaluated exactly when its inputs become decided;
a violated instance prunes the current value.  Unlike a grounder-based
approach, nothing is materialized beyond this instance index.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass

from .core import (Abs, App, Cmp, Const, CspSpec, Interpretation, Var,
                   eval_cmp, guard_holds, validate)
from .result import SolveResult


@dataclass
class MfStats:
    choices: int = 0
    backtracks: int = 0
    checks: int = 0
    elapsed_ms: float = 0.0


def _read_cells(e, binding, cell_index, out: set[int]) -> None:
    if isinstance(e, (Var, Const)):
        return
    if isinstance(e, App):
        if not isinstance(e.arg, (Var, Const)):
            raise NotImplementedError(
                "nested or computed function arguments are not supported by the model finder")
        x = binding[e.arg.name] if isinstance(e.arg, Var) else e.arg.value
        out.add(cell_index[(e.func, x)])
        return
    if isinstance(e, Abs):
        _read_cells(e.arg, binding, cell_index, out)
        return
    _read_cells(e.lhs, binding, cell_index, out)
    _read_cells(e.rhs, binding, cell_index, out)


def find_models(spec: CspSpec, mode: str = "all", limit: int | None = None,
                deadline: float | None = None, check_at_leaf: bool = False) -> SolveResult:
    """Search the space of total function tables for models of the spec.

    ``check_at_leaf`` disables early instance checking (every instance is
    then tested only on complete tables); it exists to cross-validate
    that the lazy index never changes the model set.
    """
    if mode not in ("first", "all"):
        raise ValueError(f"unknown mode {mode!r}")
    diags = validate(spec)
    if diags:
        raise ValueError("invalid spec: " + "; ".join(diags))
    t0 = time.monotonic()
    sizes = {s.name: s.size for s in spec.sorts}
    facts = spec.fact_tables()

    cells: list[tuple[str, int]] = []
    cell_index: dict[tuple[str, int], int] = {}
    cell_range: list[int] = []
    for f in spec.funcs:
        for x in range(sizes[f.arg_sorts[0]]):
            cell_index[(f.name, x)] = len(cells)
            cells.append((f.name, x))
            cell_range.append(sizes[f.result_sort])
    n_cells = len(cells)

    # ground the axioms into (comparisons, binding) instances, indexed by
    # the highest cell they read in assignment order
    triggers: list[list[tuple[tuple[Cmp, ...], dict[str, int]]]] = [[] for _ in range(n_cells)]
    constant_instances: list[tuple[tuple[Cmp, ...], dict[str, int]]] = []
    for ax in spec.axioms:
        names = [v for v, _ in ax.vars]
        ranges = [range(sizes[s]) for _, s in ax.vars]
        for values in itertools.product(*ranges):
            binding = dict(zip(names, values))
            if not guard_holds(ax, binding, facts):
                continue
            read: set[int] = set()
            for c in ax.body:
                _read_cells(c.lhs, binding, cell_index, read)
                _read_cells(c.rhs, binding, cell_index, read)
            inst = (ax.body, binding)
            if read:
                triggers[max(read)].append(inst)
            else:
                constant_instances.append(inst)

    stats = MfStats()
    res = SolveResult(stats=stats)
    tables: dict[str, list[int]] = {
        f.name: [0] * sizes[f.arg_sorts[0]] for f in spec.funcs
    }

    for cmps, binding in constant_instances:
        if not all(eval_cmp(c, tables, binding) for c in cmps):
            stats.elapsed_ms = (time.monotonic() - t0) * 1000.0
            return res  # a cell-free instance fails: no models at all

    def instances_ok(cell: int) -> bool:
        if check_at_leaf:
            if cell != n_cells - 1:
                return True
            pending = itertools.chain.from_iterable(triggers)
        else:
            pending = triggers[cell]
        for cmps, binding in pending:
            stats.checks += 1
            if not all(eval_cmp(c, tables, binding) for c in cmps):
                return False
        return True

    def rec(cell: int) -> bool:
        if cell == n_cells:
            res.solutions.append(Interpretation({k: tuple(v) for k, v in tables.items()}))
            if mode == "first":
                return True
            if limit is not None and len(res.solutions) >= limit:
                res.truncated = True
                return True
            return False
        if deadline is not None and time.monotonic() > deadline:
            res.timed_out = True
            return True
        fname, x = cells[cell]
        row = tables[fname]
        for v in range(cell_range[cell]):
            stats.choices += 1
            row[x] = v
            if instances_ok(cell) and rec(cell + 1):
                return True
            stats.backtracks += 1
        row[x] = 0
        return False

    if n_cells == 0:
        res.solutions.append(Interpretation({}))
    else:
        rec(0)
    res.complete = (not res.timed_out and not res.truncated
                    and not (mode == "first" and res.solutions))
    stats.elapsed_ms = (time.monotonic() - t0) * 1000.0
    return res
