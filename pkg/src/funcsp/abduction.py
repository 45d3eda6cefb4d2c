"""Abductive frameworks, generalized stable models, and the reduction of
a function-based spec to finite-domain constraints.

A framework is a program with designated open (abducible) predicates and
integrity denials.  Its solutions are the sets of abduced atoms whose
stable models satisfy the denials; translating the framework by adding
complement rules for the abducibles yields an ordinary program whose
stable models correspond one-to-one with those solutions.  For actually
solving specs, the abductive route reduces to the same finite-domain
store a constraint program would post, with the brute-force search over
abduced sets kept as the ground-truth oracle.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping

from . import asp
from .core import (Abs, Add, App, Cmp, Const, CspSpec, EQ, Expr, LT, NE,
                   Sub, Var, eval_expr, guard_holds, validate)
from .fd import AbsDiffNotEqual, BinaryTable, FdStore, NotEqual, NotEqualOffset
from .grounding import ground
from .program import NormalProgram, Rule
from .transform import TransformResult, functions_to_predicates, open_pair

GROUND_ABDUCIBLE_LIMIT = 16

GroundAtomKey = tuple[str, tuple[int, ...]]


class UnsupportedAxiom(ValueError):
    """Axiom body not expressible as supported binary constraints."""


@dataclass(frozen=True)
class AbductiveFramework:
    program: NormalProgram
    abducibles: frozenset[str]
    integrity: tuple[Rule, ...]

    def __post_init__(self) -> None:
        for r in self.program.rules:
            if r.head is not None and r.head.pred in self.abducibles:
                raise ValueError(f"abducible {r.head.pred!r} occurs in a rule head")
        for r in self.integrity:
            if not r.is_denial:
                raise ValueError("integrity constraints must be denials")


@dataclass(frozen=True)
class GsmSolution:
    delta: frozenset[GroundAtomKey]
    model: frozenset[GroundAtomKey]


def framework_from_spec(spec: CspSpec) -> tuple[AbductiveFramework, TransformResult]:
    """Read a spec as an abductive framework: the function predicates are
    the abducibles, all generated denials are integrity constraints."""
    t = functions_to_predicates(spec)
    prog = NormalProgram(dict(t.program.predicates), list(t.program.rules), [])
    fw = AbductiveFramework(prog, frozenset(t.open_predicates), tuple(t.program.denials))
    return fw, t


def ground_abducible_atoms(fw: AbductiveFramework, sorts: Mapping[str, int]) -> list[GroundAtomKey]:
    out: list[GroundAtomKey] = []
    for pred in sorted(fw.abducibles):
        arg_sorts = fw.program.predicates.get(pred)
        if arg_sorts is None:
            raise ValueError(f"abducible {pred!r} is not declared")
        for args in itertools.product(*(range(sorts[s]) for s in arg_sorts)):
            out.append((pred, args))
    return out


def _is_definite(prog: NormalProgram) -> bool:
    return all(not r.neg and not r.neg_doms for r in prog.rules)


def gsm_bruteforce(fw: AbductiveFramework, sorts: Mapping[str, int],
                   facts: Mapping[str, set[tuple[int, ...]]] | None = None) -> list[GsmSolution]:
    """Try every subset of the ground abducible atoms and keep those whose
    stable models satisfy the integrity constraints."""
    universe = ground_abducible_atoms(fw, sorts)
    if len(universe) > GROUND_ABDUCIBLE_LIMIT:
        raise ValueError(
            f"refusing brute force over {len(universe)} ground abducibles "
            f"(limit {GROUND_ABDUCIBLE_LIMIT})")

    base = fw.program.copy()
    base.denials = list(fw.program.denials) + list(fw.integrity)
    g = ground(base, sorts, facts)
    for pred, args in universe:
        g.atom_id(pred, args)
    denial_keys = [( [g.atoms[a] for a in pos], [g.atoms[a] for a in neg] )
                   for pos, neg in g.denials]
    rules_keyed = [(g.atoms[h], tuple(g.atoms[a] for a in pos), tuple(g.atoms[a] for a in neg))
                   for h, pos, neg in g.rules]

    out: list[GsmSolution] = []
    definite = _is_definite(fw.program)
    for mask in range(1 << len(universe)):
        delta = frozenset(universe[i] for i in range(len(universe)) if mask >> i & 1)
        if definite:
            models = [_least_model(rules_keyed, delta)]
        else:
            models = _stable_models_with_facts(g, rules_keyed, delta)
        for model in models:
            ok = True
            for pos, neg in denial_keys:
                if all(a in model for a in pos) and not any(a in model for a in neg):
                    ok = False
                    break
            if ok:
                out.append(GsmSolution(delta, frozenset(model)))
    return out


def _least_model(rules_keyed, delta: frozenset[GroundAtomKey]) -> set[GroundAtomKey]:
    derived = set(delta)
    changed = True
    while changed:
        changed = False
        for head, pos, neg in rules_keyed:
            if head not in derived and all(a in derived for a in pos):
                derived.add(head)
                changed = True
    return derived


def _stable_models_with_facts(g, rules_keyed, delta: frozenset[GroundAtomKey]) -> list[set[GroundAtomKey]]:
    from .program import GroundProgram

    g2 = GroundProgram()
    for pred, args in g.atoms:
        g2.atom_id(pred, args)
    for h, pos, neg in g.rules:
        g2.add_rule(h, pos, neg)
    for key in sorted(delta):
        g2.add_rule(g2.atom_id(*key), (), ())
    res = asp.solve(g2, mode="all")
    return [set(g2.atoms[a] for a in m) for m in res.solutions]


def to_stable(fw: AbductiveFramework) -> NormalProgram:
    """Translate the framework to a normal program: complement rules open
    up the abducibles, integrity constraints become plain denials."""
    prog = fw.program.copy()
    prog.denials.extend(fw.integrity)
    for pred in sorted(fw.abducibles):
        open_pair(prog, pred)
    return prog


def decode_stable_model(fw: AbductiveFramework, atoms: set[GroundAtomKey]) -> GsmSolution:
    """Split a stable model of the translated program into (delta, model)."""
    from .transform import COMPLEMENT_PREFIX

    comp = {COMPLEMENT_PREFIX + p for p in fw.abducibles}
    delta = frozenset(a for a in atoms if a[0] in fw.abducibles)
    model = frozenset(a for a in atoms if a[0] not in comp)
    return GsmSolution(delta, model)


# ---------------------------------------------------------------------------
# reduction to finite-domain constraints


def _cells_of(e: Expr, binding, out: list[tuple[str, int]]) -> None:
    if isinstance(e, (Var, Const)):
        return
    if isinstance(e, App):
        if not isinstance(e.arg, (Var, Const)):
            raise UnsupportedAxiom(f"nested function application {e!r}")
        x = binding[e.arg.name] if isinstance(e.arg, Var) else e.arg.value
        cell = (e.func, x)
        if cell not in out:
            out.append(cell)
        return
    if isinstance(e, Abs):
        _cells_of(e.arg, binding, out)
        return
    _cells_of(e.lhs, binding, out)
    _cells_of(e.rhs, binding, out)


def _ground_value(e: Expr, binding) -> int | None:
    """Value of a cell-free expression, None if it reads any table."""
    try:
        return eval_expr(e, {}, binding)
    except Exception:
        return None


def _app_cell(e: Expr, binding) -> tuple[str, int] | None:
    if isinstance(e, App) and isinstance(e.arg, (Var, Const)):
        x = binding[e.arg.name] if isinstance(e.arg, Var) else e.arg.value
        return (e.func, x)
    return None


def _constraint_for(cmp: Cmp, binding, var_of, sizes, axiom_name: str):
    """Translate one ground body comparison into an FdConstraint, a unary
    domain restriction ('unary', var, allowed values), or a constant."""
    cells: list[tuple[str, int]] = []
    _cells_of(cmp.lhs, binding, cells)
    _cells_of(cmp.rhs, binding, cells)
    if len(cells) > 2:
        raise UnsupportedAxiom(
            f"axiom {axiom_name!r}: comparison reads {len(cells)} cells, only binary supported")
    if not cells:
        a = eval_expr(cmp.lhs, {}, binding)
        b = eval_expr(cmp.rhs, {}, binding)
        return ("const", eval_cmp_values(cmp.op, a, b))
    if len(cells) == 1:
        (fname, x) = cells[0]
        v = var_of[(fname, x)]

        def holds(val: int) -> bool:
            tables = {fname: _single_table(sizes[fname][0], x, val)}
            a = eval_expr(cmp.lhs, tables, binding)
            b = eval_expr(cmp.rhs, tables, binding)
            return eval_cmp_values(cmp.op, a, b)

        allowed = [val for val in range(sizes[fname][1]) if holds(val)]
        return ("unary", v, allowed)

    (f1, x1), (f2, x2) = cells
    v1, v2 = var_of[(f1, x1)], var_of[(f2, x2)]
    if cmp.op == NE:
        c1 = _app_cell(cmp.lhs, binding)
        c2 = _app_cell(cmp.rhs, binding)
        # f(s) != g(t)
        if c1 == (f1, x1) and c2 == (f2, x2):
            return ("cons", NotEqual(v1, v2))
        # |f(s) - g(t)| != d
        if isinstance(cmp.lhs, Abs) and isinstance(cmp.lhs.arg, Sub):
            ca = _app_cell(cmp.lhs.arg.lhs, binding)
            cb = _app_cell(cmp.lhs.arg.rhs, binding)
            d = _ground_value(cmp.rhs, binding)
            if ca is not None and cb is not None and d is not None:
                return ("cons", AbsDiffNotEqual(var_of[ca], var_of[cb], d))
        # f(s) != g(t) + c / g(t) - c
        if c1 is not None and isinstance(cmp.rhs, (Add, Sub)):
            cb = _app_cell(cmp.rhs.lhs, binding)
            off = _ground_value(cmp.rhs.rhs, binding)
            if cb is not None and off is not None:
                return ("cons", NotEqualOffset(v1, var_of[cb],
                                               off if isinstance(cmp.rhs, Add) else -off))
    # generic fallback: tabulate the allowed value pairs
    d1 = sizes[f1][1]
    d2 = sizes[f2][1]
    allowed = set()
    for a in range(d1):
        for b in range(d2):
            tables = _pair_tables(sizes, f1, x1, a, f2, x2, b)
            if eval_cmp_values(cmp.op,
                               eval_expr(cmp.lhs, tables, binding),
                               eval_expr(cmp.rhs, tables, binding)):
                allowed.add((a, b))
    return ("cons", BinaryTable(v1, v2, frozenset(allowed)))


def eval_cmp_values(op: str, a: int, b: int) -> bool:
    if op == EQ:
        return a == b
    if op == NE:
        return a != b
    if op == LT:
        return a < b
    return a <= b


def _single_table(dom: int, x: int, val: int) -> tuple[int, ...]:
    t = [0] * dom
    t[x] = val
    return tuple(t)


def _pair_tables(sizes, f1, x1, a, f2, x2, b):
    if f1 == f2:
        t = [0] * sizes[f1][0]
        t[x1] = a
        t[x2] = b
        return {f1: tuple(t)}
    return {f1: _single_table(sizes[f1][0], x1, a),
            f2: _single_table(sizes[f2][0], x2, b)}


def reduce_to_fd(spec: CspSpec) -> tuple[FdStore, list[tuple[str, int]]]:
    """One FD variable per function-table cell; each ground axiom instance
    becomes the matching constraints.  Returns the store and the cell
    list mapping variable ids back to (function, element)."""
    diags = validate(spec)
    if diags:
        raise ValueError("invalid spec: " + "; ".join(diags))
    sort_sizes = {s.name: s.size for s in spec.sorts}
    sizes = {f.name: (sort_sizes[f.arg_sorts[0]], sort_sizes[f.result_sort]) for f in spec.funcs}
    facts = spec.fact_tables()

    store = FdStore()
    cells: list[tuple[str, int]] = []
    var_of: dict[tuple[str, int], int] = {}
    for f in spec.funcs:
        for x in range(sizes[f.name][0]):
            var_of[(f.name, x)] = store.add_var(range(sizes[f.name][1]))
            cells.append((f.name, x))

    for ax in spec.axioms:
        names = [v for v, _ in ax.vars]
        ranges = [range(sort_sizes[s]) for _, s in ax.vars]
        for values in itertools.product(*ranges):
            binding = dict(zip(names, values))
            if not guard_holds(ax, binding, facts):
                continue
            for cmp in ax.body:
                kind = _constraint_for(cmp, binding, var_of, sizes, ax.name)
                if kind[0] == "const":
                    if not kind[1]:
                        store.consistent = False
                elif kind[0] == "unary":
                    if not store.restrict(kind[1], kind[2]):
                        store.consistent = False
                else:
                    if not store.post(kind[1]):
                        store.consistent = False
    return store, cells


def decode_fd_solution(spec: CspSpec, cells: list[tuple[str, int]], values) -> "Interpretation":
    from .core import Interpretation

    sort_sizes = {s.name: s.size for s in spec.sorts}
    tables = {f.name: [0] * sort_sizes[f.arg_sorts[0]] for f in spec.funcs}
    for (fname, x), v in zip(cells, values):
        tables[fname][x] = v
    return Interpretation({k: tuple(v) for k, v in tables.items()})
