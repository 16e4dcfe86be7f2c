import itertools
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from minrank._kernels import batch_rank_numpy
from minrank.multipoly import Polynomial, parse_polynomial
from minrank.polymatrix import (
    DegreeError,
    DegreeMatrix,
    InstanceError,
    PolyMatrix,
    check_homogenization_commutes,
    degree_matrix_from_offsets,
    expected_minor_degree,
    homogenization_mismatch,
    homogenize_matrix,
    minor_determinant,
    minors,
    random_instance,
    validate_degree_matrix,
)

P = 101


def test_degree_matrix_from_offsets():
    D = degree_matrix_from_offsets((1, 1, 2), (0, 1, 1))
    assert D.to_list() == [[1, 2, 2], [1, 2, 2], [2, 3, 3]]
    assert DegreeMatrix.constant(2, 3, 4).to_list() == [[4, 4, 4], [4, 4, 4]]
    with pytest.raises(DegreeError):
        degree_matrix_from_offsets((1, 0), (0, 1))


def test_validate_degree_matrix():
    D = validate_degree_matrix([[1, 2], [2, 3]])
    assert D.row_offsets == (1, 2) and D.col_offsets == (0, 1)
    with pytest.raises(DegreeError, match="additivity"):
        validate_degree_matrix([[1, 1], [1, 2]])
    assert validate_degree_matrix([[5]]).to_list() == [[5]]


def test_rows_sorted_by_first_column():
    D = validate_degree_matrix([[3, 4], [1, 2], [2, 3]])
    assert D.to_list() == [[1, 2], [2, 3], [3, 4]]
    assert D.row_order == (1, 2, 0)


offsets = st.lists(st.integers(0, 3), min_size=1, max_size=4)


@given(offsets, offsets)
def test_offsets_roundtrip(e, f):
    grid = [[a + b + 1 for b in f] for a in e]
    D = validate_degree_matrix(grid)
    assert sorted(map(list, D.entries)) == sorted(grid)
    for i in range(D.m):
        for j in range(D.n):
            assert D[i, j] == D.row_offsets[i] + D.col_offsets[j]


def test_random_instance_shapes():
    inst = random_instance("classical", 3, 3, 1, 4, p=P, rng=3)
    assert len(inst.scalar_matrices) == 4
    assert all(f.degree == 1 and f.is_homogeneous() and f.nvars == 4 for row in inst.matrix.entries for f in row)
    gen = random_instance("generalized", 3, 3, 1, 4, DegreeMatrix.constant(3, 3, 2), P, True, 3)
    for row in gen.matrix.entries:
        for f in row:
            assert f.is_homogeneous() and f.degree == 2 and len(f) <= 10
    assert max(len(f) for row in gen.matrix.entries for f in row) == 10


def test_random_instance_seed_determinism():
    a = random_instance("generalized", 2, 3, 1, 3, DegreeMatrix.constant(2, 3, 2), P, False, 11)
    b = random_instance("generalized", 2, 3, 1, 3, DegreeMatrix.constant(2, 3, 2), P, False, 11)
    assert a.matrix.entries == b.matrix.entries


def test_affine_entries_have_exact_degree():
    D = degree_matrix_from_offsets((1, 2), (0, 1, 1))
    inst = random_instance("generalized", 2, 3, 1, 3, D, 5, False, 1)
    inst.matrix.validate()
    assert not inst.matrix.is_homogeneous()


@pytest.mark.parametrize("args", [(3, 3, 3, 4), (4, 3, 1, 4), (3, 3, 1, 0)])
def test_random_instance_rejects_bad_params(args):
    with pytest.raises(InstanceError):
        random_instance("classical", *args, p=P, rng=0)


def _var(i, k=2):
    return Polynomial.variable(i, k, P)


def test_minor_determinant_examples():
    x1, x2 = _var(0), _var(1)
    zero = Polynomial.zero(2, P)
    assert minor_determinant([[x1, zero], [zero, x2]]) == x1 * x2
    row = [x1 + x2, x1]
    assert minor_determinant([row, row]).is_zero()
    a, b, c, d = (parse_polynomial(t, 2, P) for t in ("x1", "x2 + 1", "3", "x1*x2"))
    assert minor_determinant([[a, b], [c, d]]) == a * d - b * c


def _perm_det(mat):
    """Oracle: Leibniz permutation expansion."""
    s = len(mat)
    total = Polynomial.zero(mat[0][0].nvars, mat[0][0].p)
    for perm in itertools.permutations(range(s)):
        inv = sum(1 for i in range(s) for j in range(i + 1, s) if perm[i] > perm[j])
        term = Polynomial.constant(1, total.nvars, total.p)
        for i, j in enumerate(perm):
            term = term * mat[i][j]
        total = total - term if inv % 2 else total + term
    return total


@pytest.mark.parametrize("seed", range(5))
def test_determinant_matches_permutation_expansion(seed):
    for size in (3, 4):
        inst = random_instance("generalized", size, size, 1, 3, DegreeMatrix.constant(size, size, 1), P, False, seed)
        mat = [list(r) for r in inst.matrix.entries]
        assert minor_determinant(mat) == _perm_det(mat)


def test_minor_counts_and_order():
    inst = random_instance("classical", 3, 4, 1, 3, p=P, rng=1)
    sys2 = minors(inst.matrix, 2)
    assert sys2.count == comb(3, 2) * comb(4, 2) == 18
    assert list(sys2.index_sets) == sorted(sys2.index_sets)
    assert minors(inst.matrix, 1).count == 12
    assert minors(random_instance("classical", 3, 3, 1, 4, p=P, rng=1).matrix, 2).count == 9
    with pytest.raises(InstanceError):
        minors(inst.matrix, 4)


def test_minors_of_2x2_is_determinant():
    inst = random_instance("classical", 2, 2, 1, 2, p=P, rng=5)
    (g,) = minors(inst.matrix, 2).generators
    e = inst.matrix.entries
    assert g == e[0][0] * e[1][1] - e[0][1] * e[1][0]


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 3), st.integers(0, 3), st.integers(0, 2), st.integers(0, 2), st.integers(0, 10**6))
def test_homogeneous_minor_degrees(e1, e2, f1, f2, seed):
    D = degree_matrix_from_offsets((e1 + 1, e2 + 1), (0, f1, f2))
    inst = random_instance("generalized", 2, 3, 1, 2, D, P, True, seed)
    ms = minors(inst.matrix, 2)
    for g, (rows, cols) in zip(ms.generators, ms.index_sets):
        assert g.is_homogeneous()
        if g:
            assert g.degree == expected_minor_degree(inst.degrees, rows, cols)


def _points(p, k):
    return np.array(list(itertools.product(range(p), repeat=k)), dtype=np.int64)


@pytest.mark.parametrize("seed", range(4))
def test_minors_vanish_exactly_on_rank_locus(seed):
    # oracle: evaluate the scalar matrix and take its rank at every point of F_5^2
    p, k = 5, 2
    for kind, D, homog in (("classical", None, True), ("generalized", DegreeMatrix.constant(3, 3, 1), False)):
        inst = random_instance(kind, 3, 3, 1, k, D, p, homog, seed)
        gens = minors(inst.matrix, 2).generators
        pts = _points(p, k)
        vals = np.array([inst.matrix.evaluate(tuple(pt)) for pt in pts])
        low = batch_rank_numpy(vals, p) <= 1
        vanish = np.array([all(g.evaluate(tuple(pt)).value == 0 for g in gens) for pt in pts])
        assert (low == vanish).all()


def test_homogenize_matrix_examples():
    inst = random_instance("classical", 2, 2, 1, 2, p=P, rng=0)
    H = homogenize_matrix(inst.matrix)
    assert all(h == f.extend_ambient() for hr, fr in zip(H.entries, inst.matrix.entries) for h, f in zip(hr, fr))
    entry = parse_polynomial("x1 + 1", 1, P)
    M = PolyMatrix(((entry,),), DegreeMatrix.constant(1, 1, 1))
    assert homogenize_matrix(M).entries[0][0] == parse_polynomial("x1 + x2", 2, P)
    aff = random_instance("generalized", 2, 3, 1, 3, degree_matrix_from_offsets((1, 2), (0, 1, 1)), P, False, 4)
    assert homogenize_matrix(aff.matrix).is_homogeneous()


def test_commutation_holds_for_conforming_and_homogeneous():
    aff = random_instance("generalized", 3, 3, 1, 3, degree_matrix_from_offsets((1, 1, 2), (0, 1, 1)), P, False, 9)
    assert check_homogenization_commutes(aff.matrix, 1)
    hom = random_instance("classical", 3, 3, 1, 4, p=P, rng=9)
    assert check_homogenization_commutes(hom.matrix, 1)


def test_commutation_fails_when_top_parts_cancel():
    # top-degree parts are proportional, so the 2x2 minor drops to degree 1
    grid = [["x1 + 1", "x1"], ["x1", "x1 + 2"]]
    M = PolyMatrix(
        tuple(tuple(parse_polynomial(t, 1, P) for t in row) for row in grid), DegreeMatrix.constant(2, 2, 1)
    )
    (f,) = minors(M, 2).generators
    assert f == parse_polynomial("3*x1 + 2", 1, P)
    assert not check_homogenization_commutes(M, 1)
    assert homogenization_mismatch(M, 1) == ((0, 1), (0, 1))


def test_polymatrix_validate():
    D = DegreeMatrix.constant(1, 2, 2)
    f = parse_polynomial("x1", 1, P)
    with pytest.raises(InstanceError, match="degree"):
        PolyMatrix(((f, f),), D).validate()
    z = Polynomial.zero(1, P)
    with pytest.raises(InstanceError, match="zero"):
        PolyMatrix(((z, f),), D).validate()
