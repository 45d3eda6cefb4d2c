import numpy as np
import pytest

from funcsp import kernels


def random_problem(rng, n, dmax, m):
    sizes = [rng.integers(1, dmax + 1) for _ in range(n)]
    sizes = [int(s) for s in sizes]
    tables = []
    for _ in range(m):
        x = int(rng.integers(0, n))
        y = int(rng.integers(0, n))
        mat = rng.random((sizes[x], sizes[y])) < 0.8
        tables.append((x, y, mat))
    return sizes, tables


def test_make_divisors():
    div, total = kernels.make_divisors([4, 3, 2])
    assert list(div) == [6, 2, 1]
    assert total == 24
    div, total = kernels.make_divisors([])
    assert total == 1


def test_numpy_block_matches_reference():
    rng = np.random.default_rng(5)
    sizes, tables = random_problem(rng, 4, 4, 6)
    div, total = kernels.make_divisors(sizes)
    cons_x, cons_y, allowed = kernels.pack_tables(sizes, tables)
    got = kernels.leaf_block(0, total, np.asarray(sizes, np.int64), div,
                             cons_x, cons_y, allowed, impl="numpy")
    for k in range(total):
        vals = [(k // int(div[i])) % sizes[i] for i in range(4)]
        expected = all(t[2][vals[t[0]]][vals[t[1]]] for t in tables)
        assert bool(got[k]) == expected


def test_numba_and_numpy_paths_agree():
    try:
        kernels._try_numba()
    except Exception:
        pytest.skip("numba unavailable")
    rng = np.random.default_rng(11)
    for _ in range(5):
        sizes, tables = random_problem(rng, 5, 3, 8)
        div, total = kernels.make_divisors(sizes)
        cons_x, cons_y, allowed = kernels.pack_tables(sizes, tables)
        a = kernels.leaf_block(0, total, np.asarray(sizes, np.int64), div,
                               cons_x, cons_y, allowed, impl="numpy")
        b = kernels.leaf_block(0, total, np.asarray(sizes, np.int64), div,
                               cons_x, cons_y, allowed, impl="numba")
        assert np.array_equal(a, b)


def test_env_flag_selection(monkeypatch):
    monkeypatch.setenv(kernels.ENV_FLAG, "numpy")
    assert kernels.active_backend() == "numpy"
    monkeypatch.setenv(kernels.ENV_FLAG, "bogus")
    with pytest.raises(ValueError):
        kernels.active_backend()


def test_unknown_impl_rejected():
    div, total = kernels.make_divisors([2])
    cons_x, cons_y, allowed = kernels.pack_tables([2], [])
    with pytest.raises(ValueError):
        kernels.leaf_block(0, 2, np.asarray([2], np.int64), div,
                           cons_x, cons_y, allowed, impl="cuda")


def test_no_constraints_all_pass():
    div, total = kernels.make_divisors([3, 2])
    cons_x, cons_y, allowed = kernels.pack_tables([3, 2], [])
    out = kernels.leaf_block(0, total, np.asarray([3, 2], np.int64), div,
                             cons_x, cons_y, allowed, impl="numpy")
    assert out.all() and len(out) == 6
