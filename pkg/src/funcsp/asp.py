"""Stable-model search over ground programs.

Deterministic propagation (forward rule firing, unsupported-atom
falsification, denial conflict and unit forcing) drives a chronological
backtracking search; every complete candidate is verified against the
reduct-based stability test before it is reported, so the search stays
correct even though the propagation is deliberately incomplete.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .program import GroundProgram
from .result import SolveResult

TRUE = 1
FALSE = -1
UNKNOWN = 0

BRUTE_FORCE_ATOM_LIMIT = 20


@dataclass
class AspStats:
    choices: int = 0
    backtracks: int = 0
    propagations: int = 0
    elapsed_ms: float = 0.0


class PartialAssignment:
    """Three-valued assignment with a trail for chronological undo."""

    __slots__ = ("val", "trail")

    def __init__(self, n_atoms: int):
        self.val = [UNKNOWN] * n_atoms
        self.trail: list[int] = []

    def mark(self) -> int:
        return len(self.trail)

    def set(self, atom: int, value: int) -> None:
        self.val[atom] = value
        self.trail.append(atom)

    def true_atoms(self) -> frozenset[int]:
        return frozenset(i for i, v in enumerate(self.val) if v == TRUE)

    def as_dict(self) -> dict[int, bool]:
        return {i: v == TRUE for i, v in enumerate(self.val) if v != UNKNOWN}


class _Engine:
    """Counter-based propagation state for one ground program."""

    def __init__(self, g: GroundProgram):
        self.g = g
        n = g.n_atoms
        self.assign = PartialAssignment(n)
        self.stats = AspStats()

        self.rule_head = [r[0] for r in g.rules]
        self.rule_pos = [r[1] for r in g.rules]
        self.rule_neg = [r[2] for r in g.rules]
        self.den_pos = [d[0] for d in g.denials]
        self.den_neg = [d[1] for d in g.denials]

        nr = len(g.rules)
        nd = len(g.denials)
        self.rule_nontrue = [len(p) + len(ng) for p, ng in zip(self.rule_pos, self.rule_neg)]
        self.rule_false = [0] * nr
        self.den_nontrue = [len(p) + len(ng) for p, ng in zip(self.den_pos, self.den_neg)]
        self.den_false = [0] * nd

        self.occ_pos_rule: list[list[int]] = [[] for _ in range(n)]
        self.occ_neg_rule: list[list[int]] = [[] for _ in range(n)]
        self.heads_of: list[list[int]] = [[] for _ in range(n)]
        self.occ_pos_den: list[list[int]] = [[] for _ in range(n)]
        self.occ_neg_den: list[list[int]] = [[] for _ in range(n)]
        for r in range(nr):
            self.heads_of[self.rule_head[r]].append(r)
            for a in self.rule_pos[r]:
                self.occ_pos_rule[a].append(r)
            for a in self.rule_neg[r]:
                self.occ_neg_rule[a].append(r)
        self.den_members: list[tuple[int, ...]] = []
        for d in range(nd):
            for a in self.den_pos[d]:
                self.occ_pos_den[a].append(d)
            for a in self.den_neg[d]:
                self.occ_neg_den[a].append(d)
            self.den_members.append(tuple(set(self.den_pos[d]) | set(self.den_neg[d])))

        self.support = [len(self.heads_of[a]) for a in range(n)]
        # denial pressure per atom: how many still-unresolved denials touch it
        self.score = [len(set(self.occ_pos_den[a]) | set(self.occ_neg_den[a])) for a in range(n)]
        self.n_assigned = 0

    # -- initial consequences ------------------------------------------------

    def initial_queue(self) -> list[tuple[int, int]]:
        q: list[tuple[int, int]] = []
        for a in range(self.g.n_atoms):
            if self.support[a] == 0:
                q.append((a, FALSE))
        for r, nt in enumerate(self.rule_nontrue):
            if nt == 0:
                q.append((self.rule_head[r], TRUE))
        for d, nt in enumerate(self.den_nontrue):
            if nt == 1:
                self._force_last(d, q)
        return q

    def has_empty_denial(self) -> bool:
        return any(nt == 0 for nt in self.den_nontrue)

    # -- propagation ---------------------------------------------------------

    def propagate(self, queue: list[tuple[int, int]]) -> bool:
        """Drive the queue to fixpoint; False signals a conflict."""
        val = self.assign.val
        conflict = False
        qi = 0
        while qi < len(queue):
            atom, value = queue[qi]
            qi += 1
            cur = val[atom]
            if cur == value:
                continue
            if cur != UNKNOWN:
                conflict = True
                continue
            self.assign.set(atom, value)
            self.n_assigned += 1
            self.stats.propagations += 1
            if value == TRUE:
                for r in self.occ_pos_rule[atom]:
                    self.rule_nontrue[r] -= 1
                    if self.rule_nontrue[r] == 0 and self.rule_false[r] == 0:
                        queue.append((self.rule_head[r], TRUE))
                for r in self.occ_neg_rule[atom]:
                    self.rule_false[r] += 1
                    if self.rule_false[r] == 1:
                        h = self.rule_head[r]
                        self.support[h] -= 1
                        if self.support[h] == 0:
                            if val[h] == TRUE:
                                conflict = True
                            else:
                                queue.append((h, FALSE))
                for d in self.occ_pos_den[atom]:
                    self.den_nontrue[d] -= 1
                    if self.den_false[d] == 0:
                        if self.den_nontrue[d] == 0:
                            conflict = True
                        elif self.den_nontrue[d] == 1:
                            self._force_last(d, queue)
                for d in self.occ_neg_den[atom]:
                    self.den_false[d] += 1
                    if self.den_false[d] == 1:
                        for m in self.den_members[d]:
                            self.score[m] -= 1
            else:
                for r in self.occ_pos_rule[atom]:
                    self.rule_false[r] += 1
                    if self.rule_false[r] == 1:
                        h = self.rule_head[r]
                        self.support[h] -= 1
                        if self.support[h] == 0:
                            if val[h] == TRUE:
                                conflict = True
                            else:
                                queue.append((h, FALSE))
                for r in self.occ_neg_rule[atom]:
                    self.rule_nontrue[r] -= 1
                    if self.rule_nontrue[r] == 0 and self.rule_false[r] == 0:
                        queue.append((self.rule_head[r], TRUE))
                for d in self.occ_neg_den[atom]:
                    self.den_nontrue[d] -= 1
                    if self.den_false[d] == 0:
                        if self.den_nontrue[d] == 0:
                            conflict = True
                        elif self.den_nontrue[d] == 1:
                            self._force_last(d, queue)
                for d in self.occ_pos_den[atom]:
                    self.den_false[d] += 1
                    if self.den_false[d] == 1:
                        for m in self.den_members[d]:
                            self.score[m] -= 1
        return not conflict

    def _force_last(self, d: int, queue: list[tuple[int, int]]) -> None:
        # exactly one body literal of denial d is unassigned: falsify it
        val = self.assign.val
        for a in self.den_pos[d]:
            if val[a] == UNKNOWN:
                queue.append((a, FALSE))
                return
        for a in self.den_neg[d]:
            if val[a] == UNKNOWN:
                queue.append((a, TRUE))
                return

    # -- undo ----------------------------------------------------------------

    def undo_to(self, mark: int) -> None:
        val = self.assign.val
        trail = self.assign.trail
        while len(trail) > mark:
            atom = trail.pop()
            value = val[atom]
            val[atom] = UNKNOWN
            self.n_assigned -= 1
            if value == TRUE:
                for r in self.occ_pos_rule[atom]:
                    self.rule_nontrue[r] += 1
                for r in self.occ_neg_rule[atom]:
                    self.rule_false[r] -= 1
                    if self.rule_false[r] == 0:
                        self.support[self.rule_head[r]] += 1
                for d in self.occ_pos_den[atom]:
                    self.den_nontrue[d] += 1
                for d in self.occ_neg_den[atom]:
                    self.den_false[d] -= 1
                    if self.den_false[d] == 0:
                        for m in self.den_members[d]:
                            self.score[m] += 1
            else:
                for r in self.occ_pos_rule[atom]:
                    self.rule_false[r] -= 1
                    if self.rule_false[r] == 0:
                        self.support[self.rule_head[r]] += 1
                for r in self.occ_neg_rule[atom]:
                    self.rule_nontrue[r] += 1
                for d in self.occ_neg_den[atom]:
                    self.den_nontrue[d] += 1
                for d in self.occ_pos_den[atom]:
                    self.den_false[d] -= 1
                    if self.den_false[d] == 0:
                        for m in self.den_members[d]:
                            self.score[m] += 1

    # -- branching -----------------------------------------------------------

    def choose(self) -> int:
        """Unknown atom under the most denial pressure, ties by lowest id."""
        val = self.assign.val
        score = self.score
        best = -1
        best_score = -1
        for a in range(self.g.n_atoms):
            if val[a] == UNKNOWN and score[a] > best_score:
                best = a
                best_score = score[a]
        return best


def propagate(g: GroundProgram, assignment: dict[int, bool] | None = None) -> dict[int, bool] | None:
    """Extend a partial assignment to the propagation fixpoint.

    Returns the extended assignment as an atom -> truth mapping, or None
    on conflict.
    """
    eng = _Engine(g)
    if eng.has_empty_denial():
        return None
    queue = eng.initial_queue()
    for atom, value in (assignment or {}).items():
        queue.append((atom, TRUE if value else FALSE))
    if not eng.propagate(queue):
        return None
    return eng.assign.as_dict()


def is_stable(g: GroundProgram, m) -> bool:
    """Reduct test: m satisfies all denials and equals the least model of
    the program reduced by m."""
    mset = m if isinstance(m, (set, frozenset)) else set(m)
    for pos, neg in g.denials:
        if all(a in mset for a in pos) and not any(a in mset for a in neg):
            return False
    # least model of the reduct, by counter-based forward chaining
    derived = [False] * g.n_atoms
    queue: list[int] = []
    missing: list[int] = []
    watchers: list[list[int]] = [[] for _ in range(g.n_atoms)]
    kept_heads: list[int] = []
    for idx, (head, pos, neg) in enumerate(g.rules):
        if any(a in mset for a in neg):
            continue  # rule deleted by the reduct
        k = len(kept_heads)
        kept_heads.append(head)
        need = 0
        for a in pos:
            if not derived[a]:
                need += 1
                watchers[a].append(k)
        missing.append(need)
        if need == 0:
            if not derived[head]:
                derived[head] = True
                queue.append(head)
    qi = 0
    while qi < len(queue):
        a = queue[qi]
        qi += 1
        for k in watchers[a]:
            missing[k] -= 1
            if missing[k] == 0:
                h = kept_heads[k]
                if not derived[h]:
                    derived[h] = True
                    queue.append(h)
    if len(queue) != len(mset):
        return False
    return all(derived[a] for a in mset)


def enumerate_bruteforce(g: GroundProgram) -> set[frozenset[int]]:
    """Stability-test every subset of the atom universe."""
    n = g.n_atoms
    if n > BRUTE_FORCE_ATOM_LIMIT:
        raise ValueError(f"refusing brute force over {n} atoms (limit {BRUTE_FORCE_ATOM_LIMIT})")
    out: set[frozenset[int]] = set()
    for mask in range(1 << n):
        m = frozenset(a for a in range(n) if mask >> a & 1)
        if is_stable(g, m):
            out.add(m)
    return out


def solve(g: GroundProgram, mode: str = "all", limit: int | None = None,
          deadline: float | None = None) -> SolveResult:
    """Enumerate stable models by propagation plus chronological search.

    ``mode="first"`` stops at the first model; ``limit`` truncates the
    enumeration; ``deadline`` is an absolute ``time.monotonic`` cutoff.
    """
    if mode not in ("first", "all"):
        raise ValueError(f"unknown mode {mode!r}")
    t0 = time.monotonic()
    eng = _Engine(g)
    res = SolveResult(stats=eng.stats)
    models: list[frozenset[int]] = res.solutions

    def finish(complete: bool) -> SolveResult:
        res.complete = complete
        eng.stats.elapsed_ms = (time.monotonic() - t0) * 1000.0
        return res

    if eng.has_empty_denial():
        return finish(True)
    if not eng.propagate(eng.initial_queue()):
        return finish(True)

    # decision stack: (atom, trail mark before the decision)
    stack: list[tuple[int, int]] = []
    failed = not_done = True
    conflict = False
    while True:
        if deadline is not None and (eng.stats.choices & 0x3F) == 0 and time.monotonic() > deadline:
            res.timed_out = True
            return finish(False)
        if not conflict and eng.n_assigned == g.n_atoms:
            candidate = eng.assign.true_atoms()
            if is_stable(g, candidate):
                models.append(candidate)
                if mode == "first":
                    return finish(False)
                if limit is not None and len(models) >= limit:
                    res.truncated = True
                    return finish(False)
            conflict = True  # exhaust this leaf and continue
        if conflict:
            # unwind to the most recent open decision and take its complement
            while stack:
                atom, mark = stack.pop()
                eng.undo_to(mark)
                eng.stats.backtracks += 1
                if eng.propagate([(atom, FALSE)]):
                    conflict = False
                    break
            else:
                return finish(True)
            if conflict:
                continue
        atom = eng.choose()
        if atom < 0:
            conflict = eng.n_assigned != g.n_atoms
            if not conflict:
                continue
            return finish(True)
        eng.stats.choices += 1
        stack.append((atom, eng.assign.mark()))
        conflict = not eng.propagate([(atom, TRUE)])
