import numpy as np
import pytest

from minrank import _kernels as K


def _check_rref(orig, red, rank, piv, p):
    """Independent check: shape of the echelon form and row-space containment."""
    assert np.all(red[rank:] == 0)
    for r, c in enumerate(piv):
        col = red[:, c]
        assert col[r] == 1 and np.count_nonzero(col) == 1
        assert np.all(red[r, :c] == 0)
    # every original row equals the combination of echelon rows given by its pivot entries
    for row in orig % p:
        combo = (row[piv].astype(object) @ red[:rank].astype(object)) % p if rank else np.zeros_like(row)
        assert np.array_equal(combo, row)


@pytest.mark.parametrize("p", [2, 5, 101, 65521, 2**31 - 1])
@pytest.mark.parametrize("shape", [(1, 1), (4, 7), (9, 3), (30, 30)])
def test_rref_paths_agree(p, shape):
    rng = np.random.default_rng(shape[0] * 31 + p % 97)
    A = rng.integers(0, p, size=shape)
    if shape[0] > 3:
        A[2] = (A[0] * 3 + A[1]) % p
    a1, a2 = A.copy(), A.copy()
    r1, pv1 = K.rref_numba(a1, p)
    r2, pv2 = K.rref_numpy(a2, p)
    assert r1 == r2 and np.array_equal(pv1, pv2) and np.array_equal(a1, a2)
    _check_rref(A, a1, r1, pv1, p)


def test_rank_of_low_rank_product():
    rng = np.random.default_rng(0)
    p = 101
    B, C = rng.integers(0, p, (20, 4)), rng.integers(0, p, (4, 25))
    assert K.rank_mod_p(B @ C % p, p) <= 4
    assert K.rank_mod_p(np.zeros((3, 3), dtype=np.int64), p) == 0
    assert K.rank_mod_p(np.eye(5, dtype=np.int64), p) == 5


@pytest.mark.parametrize("p", [2, 5, 101])
def test_batch_rank_paths_agree(p):
    rng = np.random.default_rng(p)
    mats = rng.integers(0, p, size=(500, 3, 4))
    mats[::4, 2] = mats[::4, 0] * 2 % p
    mats[::7] = 0
    r1 = K.batch_rank_numba(mats, p)
    r2 = K.batch_rank_numpy(mats, p)
    assert np.array_equal(r1, r2)
    ref = np.array([K.rank_mod_p(m, p) for m in mats])
    assert np.array_equal(r1, ref)


def test_backend_flag():
    assert K.BACKEND in ("numba", "numpy")
    assert K.rref is (K.rref_numba if K.USE_NUMBA else K.rref_numpy)
