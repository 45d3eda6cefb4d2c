"""funcsp: declarative function-based CSPs with four solving backends.

Problems are stated once as a many-sorted theory (sorts, unary functions,
fact relations, guarded axioms) and solved by finite-domain consistency
search, stable-model search over the translated logic program, an
abductive reduction, or naive finite model finding, all checked against
the same evaluation semantics.
"""

from .core import (Abs, Add, App, Axiom, Cmp, Const, CspSpec, FactAtom,
                   FactRelation, FuncSymbol, Interpretation, Sort, Sub, Var,
                   check, eval_axiom, validate)
from .problems import GenConfig, Graph, coloring_spec, gen_graph, queens_spec
from .result import SolveResult

__version__ = "0.1.0"

__all__ = [
    "Abs", "Add", "App", "Axiom", "Cmp", "Const", "CspSpec", "FactAtom",
    "FactRelation", "FuncSymbol", "GenConfig", "Graph", "Interpretation",
    "SolveResult", "Sort", "Sub", "Var", "check", "coloring_spec",
    "eval_axiom", "gen_graph", "queens_spec", "validate",
]
