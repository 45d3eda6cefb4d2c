"""Finite-domain solver: AC-3 consistency, labeling, and the naive modes.

Domains are small integer sets held as index bitmasks; every constraint
is binary and is compiled at post time into two support tables, one per
direction.  ``label`` searches depth-first with a choice of variable
heuristic and of consistency level: full AC-3 maintenance, checking a
constraint as soon as both its variables are ground, or no checking at
all until an assignment is complete (which runs on the vectorized leaf
kernels instead of a Python node loop).
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from . import kernels
from .result import SolveResult


@dataclass(frozen=True)
class NotEqual:
    x: int
    y: int


@dataclass(frozen=True)
class AbsDiffNotEqual:
    """|x - y| != d."""

    x: int
    y: int
    d: int


@dataclass(frozen=True)
class NotEqualOffset:
    """x != y + c."""

    x: int
    y: int
    c: int


@dataclass(frozen=True)
class BinaryTable:
    x: int
    y: int
    allowed: frozenset[tuple[int, int]]


FdConstraint = Union[NotEqual, AbsDiffNotEqual, NotEqualOffset, BinaryTable]


def allows(c: FdConstraint, a: int, b: int) -> bool:
    """Does the constraint accept x=a, y=b (actual values, not indices)?"""
    if isinstance(c, NotEqual):
        return a != b
    if isinstance(c, AbsDiffNotEqual):
        return abs(a - b) != c.d
    if isinstance(c, NotEqualOffset):
        return a != b + c.c
    return (a, b) in c.allowed


@dataclass(frozen=True)
class FdVar:
    id: int
    domain: tuple[int, ...]
    original: tuple[int, ...]


@dataclass
class FdStats:
    choices: int = 0
    backtracks: int = 0
    propagations: int = 0
    deletions: int = 0
    tested: int = 0
    elapsed_ms: float = 0.0


class FdStore:
    """Decision variables, posted constraints, and search statistics."""

    def __init__(self) -> None:
        self.values: list[tuple[int, ...]] = []  # per var, sorted value list
        self.masks: list[int] = []  # current domain, bitmask over value indices
        self.orig_masks: list[int] = []
        self.constraints: list[FdConstraint] = []
        self._sup: list[tuple[list[int], list[int]]] = []  # per constraint (sup_x, sup_y)
        self._adj: list[list[int]] = []  # var -> constraint indices
        self.stats = FdStats()
        self.consistent = True

    @property
    def n_vars(self) -> int:
        return len(self.values)

    def add_var(self, values: Iterable[int]) -> int:
        vals = tuple(sorted(set(values)))
        if not vals:
            raise ValueError("empty initial domain")
        self.values.append(vals)
        self.masks.append((1 << len(vals)) - 1)
        self.orig_masks.append((1 << len(vals)) - 1)
        self._adj.append([])
        return len(self.values) - 1

    def var(self, i: int) -> FdVar:
        vals = self.values[i]
        dom = tuple(vals[k] for k in range(len(vals)) if self.masks[i] >> k & 1)
        return FdVar(i, dom, vals)

    def domains(self) -> list[tuple[int, ...]]:
        return [self.var(i).domain for i in range(self.n_vars)]

    def restrict(self, i: int, values: Iterable[int]) -> bool:
        """Intersect a domain with a value set (unary constraints)."""
        keep = set(values)
        vals = self.values[i]
        mask = 0
        for k in range(len(vals)):
            if self.masks[i] >> k & 1 and vals[k] in keep:
                mask |= 1 << k
        self.stats.deletions += (self.masks[i].bit_count() - mask.bit_count())
        self.masks[i] = mask
        if mask == 0:
            self.consistent = False
            return False
        return self.propagate_ac3([(ci, 0) for ci in self._adj[i]] +
                                  [(ci, 1) for ci in self._adj[i]])

    def post(self, c: FdConstraint) -> bool:
        """Record a constraint and propagate it; False on a domain wipeout."""
        for v in (c.x, c.y):
            if not 0 <= v < self.n_vars:
                raise ValueError(f"unknown variable {v}")
        if isinstance(c, BinaryTable):
            ok_x = set(self.values[c.x])
            ok_y = set(self.values[c.y])
            for a, b in c.allowed:
                if a not in ok_x or b not in ok_y:
                    raise ValueError(f"table pair ({a},{b}) outside original domains")
        ci = len(self.constraints)
        self.constraints.append(c)
        xv, yv = self.values[c.x], self.values[c.y]
        sup_x = [0] * len(xv)
        sup_y = [0] * len(yv)
        for i, a in enumerate(xv):
            for j, b in enumerate(yv):
                if allows(c, a, b):
                    sup_x[i] |= 1 << j
                    sup_y[j] |= 1 << i
        self._sup.append((sup_x, sup_y))
        self._adj[c.x].append(ci)
        self._adj[c.y].append(ci)
        ok = self.propagate_ac3([(ci, 0), (ci, 1)])
        if not ok:
            self.consistent = False
        return ok

    def _revise(self, ci: int, side: int) -> int:
        """Prune the side-th variable of constraint ci; -1 on wipeout,
        else the number of values removed."""
        c = self.constraints[ci]
        if side == 0:
            v, other, sup = c.x, c.y, self._sup[ci][0]
        else:
            v, other, sup = c.y, c.x, self._sup[ci][1]
        self.stats.propagations += 1
        mask = self.masks[v]
        other_mask = self.masks[other]
        new = 0
        k = mask
        while k:
            low = k & -k
            i = low.bit_length() - 1
            if sup[i] & other_mask:
                new |= low
            k ^= low
        removed = mask.bit_count() - new.bit_count()
        if removed:
            self.masks[v] = new
            self.stats.deletions += removed
        if new == 0:
            return -1
        return removed

    def propagate_ac3(self, seed: Sequence[tuple[int, int]] | None = None) -> bool:
        """Revise arcs to the arc-consistent fixpoint; False on wipeout."""
        if seed is None:
            work = [(ci, s) for ci in range(len(self.constraints)) for s in (0, 1)]
        else:
            work = list(seed)
        queued = set(work)
        qi = 0
        while qi < len(work):
            ci, side = work[qi]
            qi += 1
            queued.discard((ci, side))
            r = self._revise(ci, side)
            if r < 0:
                return False
            if r:
                c = self.constraints[ci]
                changed = c.x if side == 0 else c.y
                for cj in self._adj[changed]:
                    c2 = self.constraints[cj]
                    nb_side = 1 if c2.x == changed else 0
                    if cj == ci and nb_side == side:
                        continue
                    arc = (cj, nb_side)
                    if arc not in queued:
                        queued.add(arc)
                        work.append(arc)
        return True

    # -- search ----------------------------------------------------------

    def _degree(self, i: int, labeled: list[bool]) -> int:
        deg = 0
        for ci in self._adj[i]:
            c = self.constraints[ci]
            other = c.y if c.x == i else c.x
            if not labeled[other]:
                deg += 1
        return deg

    def _select(self, heuristic: str, labeled: list[bool]) -> int:
        best = -1
        best_key = None
        for i in range(self.n_vars):
            if labeled[i]:
                continue
            if heuristic == "lex":
                return i
            key = (self.masks[i].bit_count(), -self._degree(i, labeled), i)
            if best_key is None or key < best_key:
                best, best_key = i, key
        return best


def label(store: FdStore, heuristic: str = "ffc", consistency: str = "ac3",
          mode: str = "first", limit: int | None = None,
          deadline: float | None = None, trace: list | None = None) -> SolveResult:
    """Depth-first labeling; values are tried in ascending order.

    ``trace``, when given, collects every attempted partial assignment as
    a tuple of (var, value) pairs (not supported for consistency="none").
    """
    if heuristic not in ("ffc", "lex"):
        raise ValueError(f"unknown heuristic {heuristic!r}")
    if consistency not in ("ac3", "check-only", "none"):
        raise ValueError(f"unknown consistency level {consistency!r}")
    if mode not in ("first", "all"):
        raise ValueError(f"unknown mode {mode!r}")
    t0 = time.monotonic()
    res = SolveResult(stats=store.stats)
    if not store.consistent:
        store.stats.elapsed_ms = (time.monotonic() - t0) * 1000.0
        return res
    if consistency == "none":
        if trace is not None:
            raise ValueError("trace is not supported for consistency='none'")
        res = _enumerate_leaves(store, mode, limit, deadline)
    else:
        res = _dfs(store, heuristic, consistency, mode, limit, deadline, trace)
    store.stats.elapsed_ms += (time.monotonic() - t0) * 1000.0
    return res


def _dfs(store: FdStore, heuristic: str, consistency: str, mode: str,
         limit: int | None, deadline: float | None, trace: list | None) -> SolveResult:
    res = SolveResult(stats=store.stats)
    stats = store.stats
    n = store.n_vars
    labeled = [False] * n
    assignment: list[tuple[int, int]] = []  # (var, value index)
    values = store.values

    def value_of(i: int, k: int) -> int:
        return values[i][k]

    def snapshot() -> list[int]:
        return list(store.masks)

    def out_of_time() -> bool:
        return deadline is not None and time.monotonic() > deadline

    def consistent_with_labeled(i: int, a: int) -> bool:
        for ci in store._adj[i]:
            c = store.constraints[ci]
            other = c.y if c.x == i else c.x
            if not labeled[other]:
                continue
            b = store.var(other).domain[0]
            ok = allows(c, a, b) if c.x == i else allows(c, b, a)
            if not ok:
                return False
        return True

    def rec() -> bool:
        """True = stop the whole search."""
        if all(labeled):
            stats.tested += 1
            res.solutions.append(tuple(store.var(i).domain[0] for i in range(n)))
            if mode == "first":
                return True
            if limit is not None and len(res.solutions) >= limit:
                res.truncated = True
                return True
            return False
        if out_of_time():
            res.timed_out = True
            return True
        i = store._select(heuristic, labeled)
        mask = store.masks[i]
        k = mask
        while k:
            low = k & -k
            vi = low.bit_length() - 1
            k ^= low
            a = value_of(i, vi)
            stats.choices += 1
            if trace is not None:
                trace.append(tuple(assignment) + ((i, a),))
            saved = snapshot()
            store.masks[i] = low
            labeled[i] = True
            assignment.append((i, a))
            ok = True
            if consistency == "ac3":
                ok = store.propagate_ac3([(ci, 1 if store.constraints[ci].x == i else 0)
                                          for ci in store._adj[i]])
            else:
                ok = consistent_with_labeled(i, a)
            if ok and rec():
                return True
            assignment.pop()
            labeled[i] = False
            store.masks[:] = saved
            stats.backtracks += 1
        return False

    rec()
    res.complete = (not res.timed_out and not res.truncated
                    and not (mode == "first" and res.solutions))
    return res


def _enumerate_leaves(store: FdStore, mode: str, limit: int | None,
                      deadline: float | None) -> SolveResult:
    """Generate-and-test over the full assignment space via the leaf kernels.

    The reported counters are those of the canonical depth-first
    enumeration in variable-id order with ascending values; the chunked
    kernel visits the same leaves in the same order.
    """
    res = SolveResult(stats=store.stats)
    stats = store.stats
    n = store.n_vars
    doms = [store.var(i).domain for i in range(n)]
    sizes_list = [len(d) for d in doms]
    sizes = np.asarray(sizes_list, np.int64)
    div, total = kernels.make_divisors(sizes_list)

    tables = []
    for c in store.constraints:
        mat = [[allows(c, a, b) for b in doms[c.y]] for a in doms[c.x]]
        tables.append((c.x, c.y, mat))
    cons_x, cons_y, allowed = kernels.pack_tables(sizes_list, tables)

    def decode(k: int) -> tuple[int, ...]:
        return tuple(doms[i][(k // int(div[i])) % sizes_list[i]] for i in range(n))

    def dfs_assignments(last_leaf: int) -> int:
        # distinct prefixes (depth >= 1) among leaves 0..last_leaf
        return sum(last_leaf // int(div[i]) + 1 for i in range(n))

    stopped_at: int | None = None  # leaf index where the scan stopped
    chunk = 1 << 17
    k0 = 0
    while k0 < total:
        if deadline is not None and time.monotonic() > deadline:
            res.timed_out = True
            stopped_at = k0 - 1
            break
        k1 = min(k0 + chunk, total)
        ok = kernels.leaf_block(k0, k1, sizes, div, cons_x, cons_y, allowed)
        hits = np.nonzero(ok)[0]
        done = False
        for h in hits:
            res.solutions.append(decode(k0 + int(h)))
            if mode == "first":
                stopped_at = k0 + int(h)
                done = True
                break
            if limit is not None and len(res.solutions) >= limit:
                res.truncated = True
                stopped_at = k0 + int(h)
                done = True
                break
        if done:
            break
        k0 = k1

    if stopped_at is None:
        # full enumeration: every assignment was made and retracted
        made = dfs_assignments(total - 1) if total and n else 0
        stats.tested += total
        stats.choices += made
        stats.backtracks += made
        res.complete = True
    elif stopped_at < 0:
        res.complete = False
    else:
        stats.tested += stopped_at + 1
        made = dfs_assignments(stopped_at)
        stats.choices += made
        stats.backtracks += made - n
        res.complete = False
    return res
