import time

import pytest

from funcsp.core import (Axiom, Cmp, Const, CspSpec, FuncSymbol,
                         Interpretation, Sort, check, solutions_bruteforce)
from funcsp.model_finder import find_models
from funcsp.problems import coloring_spec, make_graph, queens_spec


def k_complete(n):
    return make_graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def test_queens4_models():
    res = find_models(queens_spec(4), mode="all")
    assert sorted(i.tables["pos"] for i in res.solutions) == [(1, 3, 0, 2), (2, 0, 3, 1)]
    assert res.complete


def test_triangle_coloring_models():
    res = find_models(coloring_spec(k_complete(3), 3), mode="all")
    assert len(res.solutions) == 6


def test_k5_with_4_colors_unsat():
    res = find_models(coloring_spec(k_complete(5), 4), mode="all")
    assert res.solutions == []
    assert res.complete


def test_model_set_equals_bruteforce_check():
    for spec in (queens_spec(4), coloring_spec(k_complete(3), 3),
                 coloring_spec(make_graph(4, [(0, 1), (2, 3)]), 2)):
        got = set(find_models(spec, mode="all").solutions)
        assert got == set(solutions_bruteforce(spec))


def test_all_returned_models_pass_check():
    spec = coloring_spec(make_graph(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]), 3)
    res = find_models(spec, mode="all")
    for interp in res.solutions:
        assert check(spec, interp) == []


def test_early_checking_matches_leaf_checking():
    for spec in (queens_spec(5), coloring_spec(k_complete(4), 3)):
        early = find_models(spec, mode="all")
        late = find_models(spec, mode="all", check_at_leaf=True)
        assert early.solutions == late.solutions
        # lazy evaluation prunes, so it never does more work
        assert early.stats.choices <= late.stats.choices


def test_first_mode_and_limit():
    spec = queens_spec(6)
    first = find_models(spec, mode="first")
    assert len(first.solutions) == 1
    assert not first.complete
    limited = find_models(spec, mode="all", limit=2)
    assert len(limited.solutions) == 2
    assert limited.truncated


def test_deadline():
    res = find_models(queens_spec(9), mode="all", deadline=time.monotonic())
    assert res.timed_out


def test_invalid_spec_rejected():
    spec = CspSpec(sorts=(Sort("s", 2),), funcs=(FuncSymbol("f", ("s", "s"), "s"),))
    with pytest.raises(ValueError, match="invalid spec"):
        find_models(spec)


def test_spec_without_functions_has_one_empty_model():
    spec = CspSpec(sorts=(Sort("s", 3),), funcs=())
    res = find_models(spec, mode="all")
    assert res.solutions == [Interpretation({})]


def test_constant_false_axiom_means_no_models():
    spec = CspSpec(
        sorts=(Sort("s", 2),),
        funcs=(FuncSymbol("f", ("s",), "s"),),
        axioms=(Axiom("never", (), (), (Cmp("=", Const(0), Const(1)),)),),
    )
    assert find_models(spec, mode="all").solutions == []
