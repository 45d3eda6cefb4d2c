"""Translation of function-based specs into normal logic programs.

Each unary function f : s1 -> s2 becomes an open binary predicate f/2
constrained to be total and functional; axioms become denials whose
bodies pair the guard with the negation of the axiom body.  Declaring
the open predicates with complement rules then makes the stable models
of the grounded program correspond exactly to the spec's solutions.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import (Abs, Add, App, Cmp, Const, CspSpec, EQ, Expr, FactAtom,
                   Interpretation, LE, LT, NE, Sub, Var, validate)
from .program import AnyCmp, Atom, DomLit, NormalProgram, Rule

HAS_PREFIX = "has_"
COMPLEMENT_PREFIX = "non_"


@dataclass
class TransformResult:
    program: NormalProgram
    open_predicates: set[str]
    decode_map: dict[str, str]  # open predicate -> function symbol


def _negate(c: Cmp) -> Cmp:
    if c.op == EQ:
        return Cmp(NE, c.lhs, c.rhs)
    if c.op == NE:
        return Cmp(EQ, c.lhs, c.rhs)
    if c.op == LT:
        return Cmp(LE, c.rhs, c.lhs)
    return Cmp(LT, c.rhs, c.lhs)


class _AppExtractor:
    """Replaces function applications with fresh variables, innermost first."""

    def __init__(self, taken: set[str]):
        self.taken = set(taken)
        self.cells: dict[App, Var] = {}
        self.atoms: list[Atom] = []
        self._n = 0

    def _fresh(self) -> Var:
        while True:
            self._n += 1
            name = f"_V{self._n}"
            if name not in self.taken:
                self.taken.add(name)
                return Var(name)

    def strip(self, e: Expr) -> Expr:
        if isinstance(e, (Var, Const)):
            return e
        if isinstance(e, App):
            arg = self.strip(e.arg)
            key = App(e.func, arg)
            v = self.cells.get(key)
            if v is None:
                v = self._fresh()
                self.cells[key] = v
                if not isinstance(arg, (Var, Const)):
                    raise ValueError(f"function argument {arg!r} is not a term")
                self.atoms.append(Atom(e.func, (arg, v)))
            return v
        if isinstance(e, Abs):
            return Abs(self.strip(e.arg))
        if isinstance(e, Add):
            return Add(self.strip(e.lhs), self.strip(e.rhs))
        return Sub(self.strip(e.lhs), self.strip(e.rhs))


def functions_to_predicates(spec: CspSpec) -> TransformResult:
    """Rewrite every function symbol as an open predicate with its
    totality and functionality constraints, and every axiom as a denial."""
    diags = validate(spec)
    if diags:
        raise ValueError("invalid spec: " + "; ".join(diags))

    prog = NormalProgram()
    open_preds: set[str] = set()
    decode: dict[str, str] = {}

    for r in spec.facts:
        prog.declare(r.name, r.arg_sorts)

    for f in spec.funcs:
        dom, rng = f.arg_sorts[0], f.result_sort
        p = f.name
        has_p = HAS_PREFIX + p
        if has_p in prog.predicates or p in prog.predicates:
            raise ValueError(f"predicate name collision for function {p!r}")
        prog.declare(p, (dom, rng))
        prog.declare(has_p, (dom,))
        open_preds.add(p)
        decode[p] = f.name

        x, y, z = Var("X"), Var("Y"), Var("Z")
        # has_p(X) <- d(Y), p(X,Y).
        prog.add(Rule(head=Atom(has_p, (x,)), pos=(Atom(p, (x, y)),),
                      doms=(DomLit(rng, y),), tag=f"support:{p}"))
        # has_p(X) <= d_p(X): the function is defined on its whole domain.
        prog.add(Rule(head=None, neg=(Atom(has_p, (x,)),),
                      doms=(DomLit(dom, x),), tag=f"total:{p}"))
        # d_p(X) <= p(X,Y): no values outside the domain (vacuous here,
        # since grounding already confines X to its sort; kept for shape).
        prog.add(Rule(head=None, pos=(Atom(p, (x, y)),),
                      neg_doms=(DomLit(dom, x),), tag=f"domain:{p}"))
        # Y = Z <= p(X,Y), p(X,Z): at most one value per point.
        prog.add(Rule(head=None, pos=(Atom(p, (x, y)), Atom(p, (x, z))),
                      builtins=(Cmp(NE, y, z),), tag=f"functional:{p}"))

    for ax in spec.axioms:
        taken = {v for v, _ in ax.vars}
        ex = _AppExtractor(taken)
        guard_atoms: list[Atom] = []
        guard_cmps: list[Cmp] = []
        for lit in ax.guard:
            if isinstance(lit, FactAtom):
                args = []
                for e in lit.args:
                    if not isinstance(e, (Var, Const)):
                        raise ValueError(f"axiom {ax.name!r}: fact argument {e!r} is not a term")
                    args.append(e)
                guard_atoms.append(Atom(lit.rel, tuple(args)))
            else:
                guard_cmps.append(lit)
        negated = tuple(_negate(Cmp(c.op, ex.strip(c.lhs), ex.strip(c.rhs))) for c in ax.body)
        violated: tuple = ()
        if len(negated) == 1:
            violated = (negated[0],)
        elif negated:
            violated = (AnyCmp(negated),)
        prog.add(Rule(head=None,
                      pos=tuple(guard_atoms) + tuple(ex.atoms),
                      builtins=tuple(guard_cmps) + violated,
                      tag=f"axiom:{ax.name}"))

    return TransformResult(prog, open_preds, decode)


def open_pair(prog: NormalProgram, pred: str, compact_domain: str | None = None) -> None:
    """Add the two complement rules that leave ``pred`` open."""
    sorts = prog.predicates.get(pred)
    if sorts is None:
        raise ValueError(f"unknown open predicate {pred!r}")
    comp = COMPLEMENT_PREFIX + pred
    prog.declare(comp, sorts)
    args = tuple(Var(f"X{i + 1}") for i in range(len(sorts)))
    doms = tuple(DomLit(s, v) for s, v in zip(sorts, args))
    prog.add(Rule(head=Atom(pred, args), neg=(Atom(comp, args),),
                  doms=doms, tag=f"choice:{pred}"))
    prog.add(Rule(head=Atom(comp, args), neg=(Atom(pred, args),),
                  doms=doms, tag=f"choice:{comp}"))


def add_open_declarations(t: TransformResult, compact: bool = False) -> NormalProgram:
    """Return the program extended with complement rules for every open
    predicate; in compact form the redundant domain denial is dropped."""
    prog = t.program.copy()
    if compact:
        prog.denials = [d for d in prog.denials if not d.tag.startswith("domain:")]
    for pred in sorted(t.open_predicates):
        open_pair(prog, pred)
    return prog


def decode_model(t: TransformResult, spec: CspSpec, atoms: set[tuple[str, tuple[int, ...]]]) -> Interpretation:
    """Read the open-predicate atoms of a stable model back into tables."""
    sizes = {s.name: s.size for s in spec.sorts}
    tables: dict[str, list[int | None]] = {}
    for pred, fname in t.decode_map.items():
        f = spec.func(fname)
        tables[fname] = [None] * sizes[f.arg_sorts[0]]
    for pred, args in atoms:
        fname = t.decode_map.get(pred)
        if fname is None:
            continue
        x, y = args
        if tables[fname][x] is not None:
            raise ValueError(f"model not functional at {pred}({x},_)")
        tables[fname][x] = y
    for fname, tab in tables.items():
        if any(v is None for v in tab):
            raise ValueError(f"model not total for {fname!r}")
    return Interpretation({k: tuple(v) for k, v in tables.items()})
