"""Naive grounder: full instantiation over sorts with builtin filtering.

Variables range over the sorts recorded in the program's predicate
declarations and domain literals.  Builtin comparisons are evaluated per
instance (false ones delete the instance, true ones drop out of the
body), fact literals are resolved against the fact tables, and domain
literals never survive into the ground program.
"""

from __future__ import annotations

import itertools
from typing import Collection, Mapping

from .core import Const, Var, eval_cmp
from .program import AnyCmp, Atom, GroundProgram, NormalProgram, Rule, format_atom


class GroundingError(ValueError):
    pass


def _term_value(t, binding: Mapping[str, int]) -> int:
    return binding[t.name] if isinstance(t, Var) else t.value


def _builtin_holds(b, binding: Mapping[str, int]) -> bool:
    if isinstance(b, AnyCmp):
        return any(eval_cmp(c, {}, binding) for c in b.cmps)
    return eval_cmp(b, {}, binding)


def _expr_vars(e, out: list[str]) -> None:
    if isinstance(e, Var):
        if e.name not in out:
            out.append(e.name)
    elif isinstance(e, Const):
        pass
    elif hasattr(e, "arg"):
        _expr_vars(e.arg, out)
    else:
        _expr_vars(e.lhs, out)
        _expr_vars(e.rhs, out)


def _rule_label(rule: Rule) -> str:
    head = format_atom(rule.head) if rule.head else ":-"
    return rule.tag or head


def ground(program: NormalProgram, sorts: Mapping[str, int],
           facts: Mapping[str, Collection[tuple[int, ...]]] | None = None) -> GroundProgram:
    """Instantiate every rule over the sorts of its variables."""
    facts = {k: set(v) for k, v in (facts or {}).items()}
    g = GroundProgram()
    for rule in itertools.chain(program.rules, program.denials):
        _ground_rule(g, program, rule, sorts, facts)
    return g


def _ground_rule(g: GroundProgram, program: NormalProgram, rule: Rule,
                 sorts: Mapping[str, int],
                 facts: dict[str, set[tuple[int, ...]]]) -> None:
    var_sorts: dict[str, str] = {}
    restricted: set[str] = set()
    order: list[str] = []

    def note(v: str, sort: str, positive: bool) -> None:
        old = var_sorts.get(v)
        if old is not None and old != sort:
            raise GroundingError(
                f"rule {_rule_label(rule)!r}: variable {v!r} used at sorts {old!r} and {sort!r}")
        var_sorts[v] = sort
        if positive:
            restricted.add(v)
        if v not in order:
            order.append(v)

    def note_atom(a: Atom, positive: bool) -> None:
        decl = program.predicates.get(a.pred)
        if decl is None:
            raise GroundingError(f"rule {_rule_label(rule)!r}: undeclared predicate {a.pred!r}")
        if len(decl) != len(a.args):
            raise GroundingError(f"rule {_rule_label(rule)!r}: arity mismatch for {a.pred!r}")
        for t, s in zip(a.args, decl):
            if isinstance(t, Var):
                note(t.name, s, positive)

    for a in rule.pos:
        note_atom(a, positive=True)
    for d in rule.doms:
        if isinstance(d.term, Var):
            note(d.term.name, d.sort, positive=True)
    for a in rule.neg:
        note_atom(a, positive=False)
    for d in rule.neg_doms:
        if isinstance(d.term, Var):
            note(d.term.name, d.sort, positive=False)
    if rule.head is not None:
        note_atom(rule.head, positive=False)

    builtin_vars: list[str] = []
    for b in rule.builtins:
        cmps = b.cmps if isinstance(b, AnyCmp) else (b,)
        for c in cmps:
            _expr_vars(c.lhs, builtin_vars)
            _expr_vars(c.rhs, builtin_vars)
    for v in itertools.chain(builtin_vars, var_sorts):
        if v not in restricted:
            raise GroundingError(
                f"rule {_rule_label(rule)!r} is not range-restricted: variable {v!r} "
                "occurs in no positive body or domain literal")
        if v not in var_sorts:
            raise GroundingError(f"rule {_rule_label(rule)!r}: variable {v!r} has no sort")

    for s in set(var_sorts.values()):
        if s not in sorts:
            raise GroundingError(f"rule {_rule_label(rule)!r}: unknown sort {s!r}")

    # Negative domain literals over in-sort values can never hold.
    if rule.neg_doms:
        return

    ranges = [range(sorts[var_sorts[v]]) for v in order]
    # a declared predicate is fact-resolved iff a table was supplied for it
    pos_atoms = [a for a in rule.pos if a.pred not in facts]
    fact_atoms = [a for a in rule.pos if a.pred in facts]

    for values in itertools.product(*ranges):
        binding = dict(zip(order, values))
        ok = True
        for a in fact_atoms:
            if tuple(_term_value(t, binding) for t in a.args) not in facts[a.pred]:
                ok = False
                break
        if not ok:
            continue
        for b in rule.builtins:
            if not _builtin_holds(b, binding):
                ok = False
                break
        if not ok:
            continue
        pos_ids = tuple(g.atom_id(a.pred, tuple(_term_value(t, binding) for t in a.args))
                        for a in pos_atoms)
        neg_ids = tuple(g.atom_id(a.pred, tuple(_term_value(t, binding) for t in a.args))
                        for a in rule.neg)
        if rule.head is None:
            g.add_denial(pos_ids, neg_ids)
        else:
            head_id = g.atom_id(rule.head.pred,
                                tuple(_term_value(t, binding) for t in rule.head.args))
            g.add_rule(head_id, pos_ids, neg_ids)
