"""Normal logic programs with builtins, and their ground form.

Rules are kept function-free: atom arguments are variables or integer
constants, arithmetic lives only in builtin comparison literals.  Sort
membership appears as explicit domain literals which the grounder
resolves; domain predicates are never materialized as ground atoms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Union

from .core import Cmp, Const, Var

Term = Union[Var, Const]


@dataclass(frozen=True)
class Atom:
    pred: str
    args: tuple[Term, ...] = ()


@dataclass(frozen=True)
class DomLit:
    """Sort-membership literal, e.g. row(Y)."""

    sort: str
    term: Term


@dataclass(frozen=True)
class AnyCmp:
    """Disjunction of comparisons, true when at least one member holds."""

    cmps: tuple[Cmp, ...]


Builtin = Union[Cmp, AnyCmp]


@dataclass(frozen=True)
class Rule:
    """head <- pos, doms, not neg, not neg_doms, builtins; head None = denial."""

    head: Atom | None
    pos: tuple[Atom, ...] = ()
    neg: tuple[Atom, ...] = ()
    doms: tuple[DomLit, ...] = ()
    neg_doms: tuple[DomLit, ...] = ()
    builtins: tuple[Builtin, ...] = ()
    tag: str = ""

    @property
    def is_denial(self) -> bool:
        return self.head is None


@dataclass
class NormalProgram:
    """Rules plus headless denials, with per-predicate argument sorts."""

    predicates: dict[str, tuple[str, ...]] = field(default_factory=dict)
    rules: list[Rule] = field(default_factory=list)
    denials: list[Rule] = field(default_factory=list)

    def declare(self, pred: str, sorts: tuple[str, ...]) -> None:
        old = self.predicates.get(pred)
        if old is not None and old != sorts:
            raise ValueError(f"predicate {pred!r} redeclared with different sorts")
        self.predicates[pred] = sorts

    def add(self, rule: Rule) -> None:
        if rule.head is not None and isinstance(rule.head, Atom) is False:
            raise TypeError("rule head must be an atom or None")
        (self.denials if rule.is_denial else self.rules).append(rule)

    def copy(self) -> "NormalProgram":
        return NormalProgram(dict(self.predicates), list(self.rules), list(self.denials))


def format_term(t: Term) -> str:
    return t.name if isinstance(t, Var) else str(t.value)


def format_atom(a: Atom) -> str:
    if not a.args:
        return a.pred
    return f"{a.pred}({','.join(format_term(t) for t in a.args)})"


class GroundProgram:
    """Propositional program over a dense, deduplicated atom universe."""

    def __init__(self) -> None:
        self.atoms: list[tuple[str, tuple[int, ...]]] = []
        self._index: dict[tuple[str, tuple[int, ...]], int] = {}
        self.rules: list[tuple[int, tuple[int, ...], tuple[int, ...]]] = []
        self.denials: list[tuple[tuple[int, ...], tuple[int, ...]]] = []

    @property
    def n_atoms(self) -> int:
        return len(self.atoms)

    def atom_id(self, pred: str, args: tuple[int, ...] = ()) -> int:
        key = (pred, args)
        i = self._index.get(key)
        if i is None:
            i = len(self.atoms)
            self.atoms.append(key)
            self._index[key] = i
        return i

    def lookup(self, pred: str, args: tuple[int, ...] = ()) -> int | None:
        return self._index.get((pred, args))

    def name(self, i: int) -> str:
        pred, args = self.atoms[i]
        if not args:
            return pred
        return f"{pred}({','.join(str(a) for a in args)})"

    def add_rule(self, head: int, pos: Iterable[int], neg: Iterable[int]) -> None:
        self.rules.append((head, tuple(pos), tuple(neg)))

    def add_denial(self, pos: Iterable[int], neg: Iterable[int]) -> None:
        self.denials.append((tuple(pos), tuple(neg)))

    def atoms_of(self, pred: str) -> list[int]:
        return [i for i, (p, _) in enumerate(self.atoms) if p == pred]

    def model_names(self, model: Iterable[int]) -> list[str]:
        return sorted(self.name(i) for i in model)

    def dump(self) -> str:
        """One rule per line: ``h :- a, not b.``; denials ``:- a, not b.``"""
        lines = []
        for head, pos, neg in self.rules:
            body = [self.name(a) for a in pos] + [f"not {self.name(a)}" for a in neg]
            if body:
                lines.append(f"{self.name(head)} :- {', '.join(body)}.")
            else:
                lines.append(f"{self.name(head)}.")
        for pos, neg in self.denials:
            body = [self.name(a) for a in pos] + [f"not {self.name(a)}" for a in neg]
            lines.append(f":- {', '.join(body)}.")
        return "\n".join(lines) + ("\n" if lines else "")
