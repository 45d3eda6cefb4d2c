"""Problem builders, the 4-colorable random graph generator, and DIMACS I/O."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .core import (Abs, App, Axiom, Cmp, CspSpec, FactAtom, FactRelation,
                   FuncSymbol, LT, NE, Sort, Sub, Var)


@dataclass(frozen=True)
class Graph:
    n_vertices: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self) -> None:
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < self.n_vertices and 0 <= v < self.n_vertices):
                raise ValueError(f"edge ({u},{v}) outside 0..{self.n_vertices - 1}")
            if u > v:
                raise ValueError(f"edge ({u},{v}) not normalized (want u < v)")

    @property
    def n_edges(self) -> int:
        return len(self.edges)


def make_graph(n_vertices: int, edges) -> Graph:
    norm = frozenset((min(u, v), max(u, v)) for u, v in edges)
    return Graph(n_vertices, norm)


@dataclass(frozen=True)
class GenConfig:
    n_vertices: int
    edge_prob: float
    seed: int
    classes: int = 4

    def __post_init__(self) -> None:
        if not 0.0 <= self.edge_prob <= 1.0:
            raise ValueError(f"edge probability {self.edge_prob} outside [0,1]")
        if self.classes < 1:
            raise ValueError("need at least one class")
        if self.n_vertices < 0:
            raise ValueError("negative vertex count")


def queens_spec(n: int) -> CspSpec:
    """Board with one queen per column: a function from columns to rows,
    no two queens on the same row or diagonal."""
    if n < 1:
        raise ValueError(f"need at least one queen, got {n}")
    col = Sort("col", n, tuple(str(i + 1) for i in range(n)))
    row = Sort("row", n, tuple(str(i + 1) for i in range(n)))
    pos = FuncSymbol("pos", ("col",), "row")
    c1, c2 = Var("C1"), Var("C2")
    axiom = Axiom(
        name="no_attack",
        vars=(("C1", "col"), ("C2", "col")),
        guard=(Cmp(LT, c1, c2),),
        body=(
            Cmp(NE, App("pos", c1), App("pos", c2)),
            Cmp(NE, Abs(Sub(App("pos", c1), App("pos", c2))), Sub(c2, c1)),
        ),
    )
    return CspSpec(sorts=(col, row), funcs=(pos,), axioms=(axiom,))


def coloring_spec(g: Graph, k: int) -> CspSpec:
    """A function from vertices to colors, distinct across every edge."""
    if k < 1:
        raise ValueError(f"need at least one color, got {k}")
    sv = Sort("vertex", g.n_vertices, tuple(f"v{v + 1}" for v in range(g.n_vertices)))
    sc = Sort("color", k, tuple(str(c + 1) for c in range(k)))
    col = FuncSymbol("col", ("vertex",), "color")
    edge = FactRelation("edge", ("vertex", "vertex"),
                        frozenset(tuple(e) for e in g.edges))
    v1, v2 = Var("V1"), Var("V2")
    axiom = Axiom(
        name="distinct_colors",
        vars=(("V1", "vertex"), ("V2", "vertex")),
        guard=(FactAtom("edge", (v1, v2)),),
        body=(Cmp(NE, App("col", v1), App("col", v2)),),
    )
    return CspSpec(sorts=(sv, sc), funcs=(col,), facts=(edge,), axioms=(axiom,))


def gen_graph(cfg: GenConfig) -> Graph:
    """Random complete-multipartite-style graph, properly colorable by
    construction.

    Vertices are assigned to ``classes`` color classes round-robin
    (vertex v is in class v mod classes); each cross-class pair (u, v)
    with u < v, visited in ascending order, is included independently
    with probability ``edge_prob``.  Pairs within a class are never
    included, so the class map itself is a proper coloring.  The draw
    uses the stdlib Mersenne Twister seeded with ``seed``, one draw per
    cross-class pair, which makes the output a pure function of the
    config.
    """
    rng = random.Random(cfg.seed)
    edges = set()
    for u in range(cfg.n_vertices):
        for v in range(u + 1, cfg.n_vertices):
            if u % cfg.classes == v % cfg.classes:
                continue
            if rng.random() < cfg.edge_prob:
                edges.add((u, v))
    return Graph(cfg.n_vertices, frozenset(edges))


def class_map(cfg: GenConfig) -> list[int]:
    """The generator's coloring witness."""
    return [v % cfg.classes for v in range(cfg.n_vertices)]


class DimacsError(ValueError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


def read_dimacs(text: str) -> Graph:
    """Parse DIMACS col format; 1-based in the file, 0-based in memory."""
    n = None
    edges: set[tuple[int, int]] = set()
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if n is not None:
                raise DimacsError(line_no, "duplicate problem line")
            if len(parts) != 4 or parts[1] != "edge":
                raise DimacsError(line_no, f"malformed problem line {line!r}")
            try:
                n = int(parts[2])
                int(parts[3])
            except ValueError:
                raise DimacsError(line_no, f"malformed problem line {line!r}") from None
            if n < 0:
                raise DimacsError(line_no, "negative vertex count")
        elif parts[0] == "e":
            if n is None:
                raise DimacsError(line_no, "edge before problem line")
            if len(parts) != 3:
                raise DimacsError(line_no, f"malformed edge line {line!r}")
            try:
                u, v = int(parts[1]), int(parts[2])
            except ValueError:
                raise DimacsError(line_no, f"malformed edge line {line!r}") from None
            if not (1 <= u <= n and 1 <= v <= n):
                raise DimacsError(line_no, f"endpoint outside 1..{n}")
            if u == v:
                raise DimacsError(line_no, f"self-loop at vertex {u}")
            edges.add((min(u, v) - 1, max(u, v) - 1))
        else:
            raise DimacsError(line_no, f"unrecognized line {line!r}")
    if n is None:
        raise DimacsError(0, "missing problem line")
    return Graph(n, frozenset(edges))


def write_dimacs(g: Graph) -> str:
    """Normalized form: sorted edges, 1-based vertices."""
    lines = [f"p edge {g.n_vertices} {g.n_edges}"]
    for u, v in sorted(g.edges):
        lines.append(f"e {u + 1} {v + 1}")
    return "\n".join(lines) + "\n"
