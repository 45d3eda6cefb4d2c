"""Many-sorted, function-based constraint problem representation.

A problem is described by finite sorts, unary function symbols between
sorts, fact relations, and universally quantified axioms of the form
``guard -> body``.  A candidate solution is an :class:`Interpretation`,
one total value table per function symbol; it is a solution exactly when
:func:`check` returns no violations.  Every solving backend in this
package is validated against these semantics.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Mapping, Union

EQ = "="
NE = "!="
LT = "<"
LE = "<="

CMP_OPS = (EQ, NE, LT, LE)


class EvalError(ValueError):
    """Raised when expression evaluation leaves the declared sorts."""


# ---------------------------------------------------------------------------
# expressions


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    value: int


@dataclass(frozen=True)
class App:
    """Application of a unary function symbol to an argument expression."""

    func: str
    arg: "Expr"


@dataclass(frozen=True)
class Add:
    lhs: "Expr"
    rhs: "Expr"


@dataclass(frozen=True)
class Sub:
    lhs: "Expr"
    rhs: "Expr"


@dataclass(frozen=True)
class Abs:
    arg: "Expr"


Expr = Union[Var, Const, App, Add, Sub, Abs]


@dataclass(frozen=True)
class Cmp:
    """Builtin comparison between two integer-valued expressions."""

    op: str
    lhs: Expr
    rhs: Expr

    def __post_init__(self) -> None:
        if self.op not in CMP_OPS:
            raise ValueError(f"unknown comparison operator {self.op!r}")


@dataclass(frozen=True)
class FactAtom:
    """Guard literal testing membership in a fact relation."""

    rel: str
    args: tuple[Expr, ...]


GuardLit = Union[Cmp, FactAtom]


# ---------------------------------------------------------------------------
# signature


@dataclass(frozen=True)
class Sort:
    """Finite sort; elements are canonically 0..size-1."""

    name: str
    size: int
    elem_names: tuple[str, ...] | None = None


@dataclass(frozen=True)
class FuncSymbol:
    """Unary function symbol from one sort to another."""

    name: str
    arg_sorts: tuple[str, ...]
    result_sort: str


@dataclass(frozen=True)
class FactRelation:
    name: str
    arg_sorts: tuple[str, ...]
    tuples: frozenset[tuple[int, ...]]


@dataclass(frozen=True)
class Axiom:
    """Universally quantified constraint: whenever guard holds, body must hold.

    The guard is a conjunction of builtin comparisons and fact atoms over
    the quantified variables only (no function applications); the body is
    a conjunction of comparisons over arbitrary expressions.
    """

    name: str
    vars: tuple[tuple[str, str], ...]  # (variable, sort)
    guard: tuple[GuardLit, ...]
    body: tuple[Cmp, ...]


@dataclass(frozen=True)
class CspSpec:
    sorts: tuple[Sort, ...]
    funcs: tuple[FuncSymbol, ...]
    facts: tuple[FactRelation, ...] = ()
    axioms: tuple[Axiom, ...] = ()

    def sort(self, name: str) -> Sort:
        for s in self.sorts:
            if s.name == name:
                return s
        raise KeyError(name)

    def func(self, name: str) -> FuncSymbol:
        for f in self.funcs:
            if f.name == name:
                return f
        raise KeyError(name)

    def fact_tables(self) -> dict[str, frozenset[tuple[int, ...]]]:
        return {r.name: r.tuples for r in self.facts}


@dataclass(frozen=True)
class Interpretation:
    """One total value table per function symbol."""

    tables: Mapping[str, tuple[int, ...]]

    def table(self, func: str) -> tuple[int, ...]:
        return self.tables[func]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Interpretation) and dict(self.tables) == dict(other.tables)

    def __hash__(self) -> int:
        return hash(tuple(sorted((k, v) for k, v in self.tables.items())))


@dataclass(frozen=True)
class Violation:
    axiom: str
    binding: tuple[tuple[str, int], ...]


# ---------------------------------------------------------------------------
# validation


def validate(spec: CspSpec) -> list[str]:
    """Return all well-formedness violations of a spec; empty means valid."""
    diags: list[str] = []
    sort_sizes: dict[str, int] = {}
    for s in spec.sorts:
        if s.name in sort_sizes:
            diags.append(f"duplicate sort name {s.name!r}")
        if s.size < 1:
            diags.append(f"sort {s.name!r} has non-positive size {s.size}")
        if s.elem_names is not None and len(s.elem_names) != s.size:
            diags.append(f"sort {s.name!r} has {len(s.elem_names)} element names for size {s.size}")
        sort_sizes[s.name] = s.size

    seen: set[str] = set()
    for f in spec.funcs:
        if f.name in seen:
            diags.append(f"duplicate symbol name {f.name!r}")
        seen.add(f.name)
        if len(f.arg_sorts) != 1:
            diags.append(f"function {f.name!r}: unsupported arity {len(f.arg_sorts)} (only unary functions)")
        for s in (*f.arg_sorts, f.result_sort):
            if s not in sort_sizes:
                diags.append(f"function {f.name!r} references unknown sort {s!r}")

    for r in spec.facts:
        if r.name in seen:
            diags.append(f"duplicate symbol name {r.name!r}")
        seen.add(r.name)
        for s in r.arg_sorts:
            if s not in sort_sizes:
                diags.append(f"fact relation {r.name!r} references unknown sort {s!r}")
        for t in r.tuples:
            if len(t) != len(r.arg_sorts):
                diags.append(f"fact relation {r.name!r}: tuple {t} has wrong arity")
            else:
                for v, s in zip(t, r.arg_sorts):
                    if s in sort_sizes and not 0 <= v < sort_sizes[s]:
                        diags.append(f"fact relation {r.name!r}: element {v} outside sort {s!r}")

    funcs = {f.name: f for f in spec.funcs}
    rels = {r.name: r for r in spec.facts}
    for ax in spec.axioms:
        var_sorts: dict[str, str] = {}
        for v, s in ax.vars:
            if v in var_sorts:
                diags.append(f"axiom {ax.name!r}: duplicate variable {v!r}")
            if s not in sort_sizes:
                diags.append(f"axiom {ax.name!r}: variable {v!r} has unknown sort {s!r}")
            var_sorts[v] = s
        for lit in ax.guard:
            if isinstance(lit, Cmp):
                for e in (lit.lhs, lit.rhs):
                    diags.extend(_check_expr(e, ax, var_sorts, funcs, in_guard=True))
            else:
                rel = rels.get(lit.rel)
                if rel is None:
                    diags.append(f"axiom {ax.name!r}: unknown fact relation {lit.rel!r}")
                elif len(lit.args) != len(rel.arg_sorts):
                    diags.append(f"axiom {ax.name!r}: fact atom {lit.rel!r} has wrong arity")
                for e in lit.args:
                    diags.extend(_check_expr(e, ax, var_sorts, funcs, in_guard=True))
        for cmp in ax.body:
            for e in (cmp.lhs, cmp.rhs):
                diags.extend(_check_expr(e, ax, var_sorts, funcs, in_guard=False))
    return diags


def _check_expr(e: Expr, ax: Axiom, var_sorts: dict[str, str],
                funcs: dict[str, FuncSymbol], in_guard: bool) -> list[str]:
    diags: list[str] = []
    if isinstance(e, Var):
        if e.name not in var_sorts:
            diags.append(f"axiom {ax.name!r}: unquantified variable {e.name!r}")
    elif isinstance(e, Const):
        pass
    elif isinstance(e, App):
        if in_guard:
            diags.append(f"axiom {ax.name!r}: function application {e.func!r} in guard")
        if e.func not in funcs:
            diags.append(f"axiom {ax.name!r}: unknown function {e.func!r}")
        diags.extend(_check_expr(e.arg, ax, var_sorts, funcs, in_guard))
    elif isinstance(e, Abs):
        diags.extend(_check_expr(e.arg, ax, var_sorts, funcs, in_guard))
    else:
        diags.extend(_check_expr(e.lhs, ax, var_sorts, funcs, in_guard))
        diags.extend(_check_expr(e.rhs, ax, var_sorts, funcs, in_guard))
    return diags


# ---------------------------------------------------------------------------
# evaluation


def eval_expr(e: Expr, tables: Mapping[str, tuple[int, ...]], binding: Mapping[str, int]) -> int:
    if isinstance(e, Var):
        try:
            return binding[e.name]
        except KeyError:
            raise EvalError(f"unbound variable {e.name!r}") from None
    if isinstance(e, Const):
        return e.value
    if isinstance(e, App):
        table = tables.get(e.func)
        if table is None:
            raise EvalError(f"no table for function {e.func!r}")
        i = eval_expr(e.arg, tables, binding)
        if not 0 <= i < len(table):
            raise EvalError(f"argument {i} of {e.func!r} outside sort of size {len(table)}")
        return table[i]
    if isinstance(e, Add):
        return eval_expr(e.lhs, tables, binding) + eval_expr(e.rhs, tables, binding)
    if isinstance(e, Sub):
        return eval_expr(e.lhs, tables, binding) - eval_expr(e.rhs, tables, binding)
    if isinstance(e, Abs):
        return abs(eval_expr(e.arg, tables, binding))
    raise TypeError(f"not an expression: {e!r}")


def eval_cmp(c: Cmp, tables: Mapping[str, tuple[int, ...]], binding: Mapping[str, int]) -> bool:
    a = eval_expr(c.lhs, tables, binding)
    b = eval_expr(c.rhs, tables, binding)
    if c.op == EQ:
        return a == b
    if c.op == NE:
        return a != b
    if c.op == LT:
        return a < b
    return a <= b


def guard_holds(ax: Axiom, binding: Mapping[str, int],
                facts: Mapping[str, frozenset[tuple[int, ...]]] | None) -> bool:
    """Evaluate an axiom guard under a binding; guards never read tables."""
    for lit in ax.guard:
        if isinstance(lit, Cmp):
            if not eval_cmp(lit, {}, binding):
                return False
        else:
            if facts is None:
                raise ValueError(f"guard of axiom {ax.name!r} needs fact tables")
            args = tuple(eval_expr(e, {}, binding) for e in lit.args)
            if args not in facts.get(lit.rel, frozenset()):
                return False
    return True


def eval_axiom(ax: Axiom, interp: Interpretation, binding: Mapping[str, int],
               facts: Mapping[str, frozenset[tuple[int, ...]]] | None = None) -> bool:
    """True iff the guard implies the body under the given interpretation."""
    for v, _ in ax.vars:
        if v not in binding:
            raise ValueError(f"binding does not cover variable {v!r}")
    if not guard_holds(ax, binding, facts):
        return True
    return all(eval_cmp(c, interp.tables, binding) for c in ax.body)


def check(spec: CspSpec, interp: Interpretation) -> list[Violation]:
    """Return every violated ground axiom instance; empty means solution."""
    sizes = {s.name: s.size for s in spec.sorts}
    for f in spec.funcs:
        table = interp.tables.get(f.name)
        if table is None:
            raise ValueError(f"interpretation missing table for {f.name!r}")
        if len(table) != sizes[f.arg_sorts[0]]:
            raise ValueError(f"table for {f.name!r} is not total")
        rng = sizes[f.result_sort]
        if any(not 0 <= v < rng for v in table):
            raise ValueError(f"table for {f.name!r} leaves range sort {f.result_sort!r}")

    facts = spec.fact_tables()
    out: list[Violation] = []
    for ax in spec.axioms:
        names = [v for v, _ in ax.vars]
        ranges = [range(sizes[s]) for _, s in ax.vars]
        for values in itertools.product(*ranges):
            binding = dict(zip(names, values))
            if not eval_axiom(ax, interp, binding, facts):
                out.append(Violation(ax.name, tuple(zip(names, values))))
    return out


def all_interpretations(spec: CspSpec) -> Iterator[Interpretation]:
    """Enumerate every total interpretation (brute-force oracle helper)."""
    sizes = {s.name: s.size for s in spec.sorts}
    per_func = []
    for f in spec.funcs:
        dom = sizes[f.arg_sorts[0]]
        rng = sizes[f.result_sort]
        per_func.append([tuple(t) for t in itertools.product(range(rng), repeat=dom)])
    for combo in itertools.product(*per_func):
        yield Interpretation({f.name: t for f, t in zip(spec.funcs, combo)})


def solutions_bruteforce(spec: CspSpec) -> list[Interpretation]:
    """All solutions by exhaustive table enumeration; small instances only."""
    return [i for i in all_interpretations(spec) if not check(spec, i)]
