"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s``.  The suite favors the
property/oracle checks over absolute timings; timings of the original
systems are not reproducible and are not asserted anywhere.
"""

import itertools
import random
import time
from contextlib import contextmanager

from funcsp import asp
from funcsp.abduction import (decode_fd_solution, decode_stable_model,
                              ground_abducible_atoms, gsm_bruteforce,
                              reduce_to_fd, to_stable)
from funcsp.bench import (agreement_failures, default_config, emit_series,
                          run_instance, run_suite, queens_instance, trend_flags)
from funcsp.core import check
from funcsp.fd import label
from funcsp.grounding import ground
from funcsp.model_finder import find_models
from funcsp.problems import (GenConfig, class_map, coloring_spec, gen_graph,
                             queens_spec)
from funcsp.program import GroundProgram
from funcsp.transform import (add_open_declarations, decode_model,
                              functions_to_predicates)

BACKENDS = ("fd", "asp", "abduce", "mf", "bt", "gt")


@contextmanager
def criterion(num, label_text):
    try:
        yield
    except BaseException:
        print(f"[acceptance] C{num} {label_text}: FAIL")
        raise
    print(f"[acceptance] C{num} {label_text}: PASS")


def queens_count_oracle(n):
    count = 0
    for p in itertools.permutations(range(n)):
        if all(abs(p[i] - p[j]) != j - i
               for i in range(n) for j in range(i + 1, n)):
            count += 1
    return count


def backend_solution_count(n, backend):
    rec, interps = run_instance(queens_instance(n), backend, mode="all",
                                timeout_s=55)
    assert rec.status in ("sat", "unsat"), f"{backend} n={n}: {rec.status}"
    for interp in interps:
        assert check(queens_spec(n), interp) == []
    return rec.solutions_found


def test_c1_solution_count_oracle():
    with criterion(1, "queens solution counts match the permutation oracle"):
        t0 = time.monotonic()
        expected = {n: queens_count_oracle(n) for n in range(4, 9)}
        assert expected[4] == 2 and expected[8] == 92
        for n in range(4, 9):
            for backend in BACKENDS:
                got = backend_solution_count(n, backend)
                assert got == expected[n], (backend, n, got, expected[n])
        elapsed = time.monotonic() - t0
        assert elapsed < 60.0, f"criterion must finish under a minute, took {elapsed:.1f}s"


def test_c2_cross_backend_agreement_on_default_sweep():
    with criterion(2, "cross-backend sat agreement on the default sweep"):
        # the sweep instances are the defaults; the per-run timeout is
        # dialed down so stragglers bow out quickly, and timed-out runs are
        # excluded from the agreement check by the harness contract
        config = default_config()
        config["timeout_s"] = 15.0
        result = run_suite(config)
        assert result.records
        assert result.disagreements == [], result.disagreements
        completed = [r for r in result.records if r.status in ("sat", "unsat")]
        assert agreement_failures(completed) == []
        sat = [r for r in completed if r.status == "sat"]
        assert all(r.solutions_found >= 1 for r in sat)


def random_ground_program(rng):
    g = GroundProgram()
    n_atoms = rng.randint(1, 12)
    for i in range(n_atoms):
        g.atom_id(f"a{i}")
    for _ in range(rng.randint(0, 15)):
        pool = list(range(n_atoms))
        rng.shuffle(pool)
        n_pos = rng.randint(0, 2)
        n_neg = rng.randint(0, 2)
        pos = pool[:n_pos]
        neg = pool[n_pos:n_pos + n_neg]
        if rng.random() < 0.25:
            g.add_denial(pos, neg)
        else:
            g.add_rule(rng.randrange(n_atoms), pos, neg)
    return g


def test_c3_stable_model_oracle_equivalence():
    with criterion(3, "solve(all) equals subset brute force on 500 programs"):
        t0 = time.monotonic()
        rng = random.Random(987654321)
        for trial in range(500):
            g = random_ground_program(rng)
            got = set(asp.solve(g, mode="all").solutions)
            expected = asp.enumerate_bruteforce(g)
            assert got == expected, f"trial {trial}:\n{g.dump()}"
        assert time.monotonic() - t0 < 300.0


def random_framework(rng):
    from funcsp.abduction import AbductiveFramework
    from funcsp.program import Atom, NormalProgram, Rule

    n_ab = rng.randint(1, 4)
    n_extra = rng.randint(1, 4)
    ab = [f"ab{i}" for i in range(n_ab)]
    extra = [f"p{i}" for i in range(n_extra)]
    atoms = ab + extra
    prog = NormalProgram()
    for a in atoms:
        prog.declare(a, ())
    for _ in range(rng.randint(0, 8)):
        head = rng.choice(extra)
        pool = [a for a in atoms if a != head]
        rng.shuffle(pool)
        pos = pool[: rng.randint(0, 2)]
        neg = [a for a in pool[2:4] if rng.random() < 0.5]
        prog.add(Rule(head=Atom(head), pos=tuple(Atom(a) for a in pos),
                      neg=tuple(Atom(a) for a in neg)))
    denials = []
    for _ in range(rng.randint(0, 3)):
        pool = list(atoms)
        rng.shuffle(pool)
        denials.append(Rule(head=None,
                            pos=tuple(Atom(a) for a in pool[: rng.randint(0, 2)]),
                            neg=tuple(Atom(a) for a in pool[2: 2 + rng.randint(0, 2)])))
    return AbductiveFramework(prog, frozenset(ab), tuple(denials))


def test_c4_abduction_equivalence_theorem():
    with criterion(4, "gsm brute force equals stable models of the translation"):
        rng = random.Random(13572468)
        for trial in range(200):
            fw = random_framework(rng)
            gsm = gsm_bruteforce(fw, {})
            g = ground(to_stable(fw), {}, {})
            res = asp.solve(g, mode="all")
            models = [{g.atoms[a] for a in m} for m in res.solutions]
            decoded = [decode_stable_model(fw, m) for m in models]
            assert {d.delta for d in decoded} == {s.delta for s in gsm}, f"trial {trial}"
            universe = set(ground_abducible_atoms(fw, {}))
            gsm_pairs = {(s.delta, s.model) for s in gsm}
            for full, d in zip(models, decoded):
                complement = {("non_" + p, args) for (p, args) in universe - d.delta}
                assert full == d.model | complement, f"trial {trial}"
                assert (d.delta, d.model) in gsm_pairs, f"trial {trial}"
            assert len(models) == len(gsm), f"trial {trial}"


def stable_models_decoded(spec, compact):
    t = functions_to_predicates(spec)
    prog = add_open_declarations(t, compact=compact)
    g = ground(prog, {s.name: s.size for s in spec.sorts}, spec.fact_tables())
    res = asp.solve(g, mode="all")
    assert res.complete
    interps = {decode_model(t, spec, {g.atoms[a] for a in m}) for m in res.solutions}
    projections = {
        frozenset(g.atoms[a] for a in m if g.atoms[a][0] in t.open_predicates)
        for m in res.solutions}
    return interps, projections


def test_c5_transformation_fidelity():
    with criterion(5, "stable models = model finder = fd solutions"):
        specs = [queens_spec(4), queens_spec(5)]
        for seed, nv in ((11, 6), (12, 7), (13, 8)):
            g = gen_graph(GenConfig(nv, 0.35, seed, classes=3))
            specs.append(coloring_spec(g, 3))
        for spec in specs:
            compact_interps, compact_proj = stable_models_decoded(spec, compact=True)
            full_interps, full_proj = stable_models_decoded(spec, compact=False)
            assert compact_proj == full_proj
            assert compact_interps == full_interps
            mf_models = set(find_models(spec, mode="all").solutions)
            store, cells = reduce_to_fd(spec)
            fd_models = {decode_fd_solution(spec, cells, v)
                         for v in label(store, mode="all").solutions}
            assert compact_interps == mf_models == fd_models
            for interp in mf_models:
                assert check(spec, interp) == []


def random_fd_store(rng):
    from funcsp.fd import (AbsDiffNotEqual, BinaryTable, FdStore, NotEqual,
                           NotEqualOffset)

    n = rng.randint(2, 6)
    s = FdStore()
    for _ in range(n):
        s.add_var(range(rng.randint(1, 6)))
    for _ in range(rng.randint(0, 2 * n)):
        x, y = rng.randrange(n), rng.randrange(n)
        if x == y:
            continue
        kind = rng.randrange(4)
        if kind == 0:
            c = NotEqual(x, y)
        elif kind == 1:
            c = AbsDiffNotEqual(x, y, rng.randint(0, 5))
        elif kind == 2:
            c = NotEqualOffset(x, y, rng.randint(-2, 2))
        else:
            pairs = {(a, b) for a in s.var(x).original for b in s.var(y).original
                     if rng.random() < 0.7}
            c = BinaryTable(x, y, frozenset(pairs))
        if not s.post(c):
            break
    return s


def test_c6_ac3_soundness_and_confluence():
    with criterion(6, "AC-3 prunes no solution value; fixpoint order-independent"):
        from funcsp.fd import FdStore, allows

        rng = random.Random(5050)
        for trial in range(100):
            s = random_fd_store(rng)
            doms = [s.var(i).original for i in range(s.n_vars)]
            solutions = [combo for combo in itertools.product(*doms)
                         if all(allows(c, combo[c.x], combo[c.y]) for c in s.constraints)]
            if not s.consistent:
                assert solutions == []
                continue
            s.propagate_ac3()
            for i in range(s.n_vars):
                pruned = set(doms[i]) - set(s.var(i).domain)
                for sol in solutions:
                    assert sol[i] not in pruned, f"trial {trial}"
            # replay the same constraints, revising in the opposite order
            s2 = FdStore()
            for d in doms:
                s2.add_var(d)
            for c in s.constraints:
                s2.post(c)
            arcs = [(ci, side) for ci in range(len(s2.constraints)) for side in (0, 1)]
            assert s2.propagate_ac3(list(reversed(arcs)))
            assert s2.domains() == s.domains(), f"trial {trial}"


def test_c7_trend_replication(tmp_path):
    with criterion(7, "asp outbacktracks fd on queens 8..12; gt tests |D|^n leaves"):
        config = {
            "timeout_s": 15.0,
            "mode": "first",
            "heuristic": "ffc",
            "queens": [{"backends": ["fd", "asp"], "ns": [8, 9, 10, 11, 12]}],
        }
        result = run_suite(config)
        series = emit_series(result.records, str(tmp_path))
        assert sorted(p.rsplit("/", 1)[-1] for p in series) == [
            "queens_asp.dat", "queens_fd.dat"]
        by_backend = {}
        for r in result.records:
            by_backend.setdefault(r.backend, {})[r.param] = r
        inversions = []
        for n in (8, 9, 10, 11, 12):
            asp_rec = by_backend["asp"][n]
            fd_rec = by_backend["fd"][n]
            if asp_rec.backtracks <= fd_rec.backtracks:
                inversions.append(n)
        # expected ordering holds, or the suite flagged the inversion
        flagged = trend_flags(result.records)
        for n in inversions:
            assert any(f"n={n}:" in f for f in flagged), "inversion must be flagged"
        if inversions:
            print(f"[acceptance] C7 note: ordering inverted at n={inversions}, flagged")
        else:
            assert flagged == []

        # generate-and-test visits every full assignment
        for n in (4, 5, 6):
            store, _ = reduce_to_fd(queens_spec(n))
            label(store, consistency="none", mode="all")
            assert store.stats.tested == n ** n


def test_c8_generator_contract():
    with criterion(8, "1000 seeded graphs pass the class-map coloring check"):
        for seed in range(1000):
            cfg = GenConfig(30, 0.2, seed)
            g = gen_graph(cfg)
            cm = class_map(cfg)
            for u, v in g.edges:
                assert cm[u] != cm[v], f"seed {seed}"
        # exact determinism under a fixed seed
        cfg = GenConfig(30, 0.2, 424242)
        assert gen_graph(cfg) == gen_graph(cfg)
