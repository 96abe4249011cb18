import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from tandisp.ringcat import (
    FiniteAlgebra, bundled_f2_algebras, check_pushout, check_T_preserves_pushout, commuting_cocones,
    dual_numbers, dual_numbers_hom, enumerate_homs, f2, f2_dual, identity_hom, inverse_matrix,
    iterate_dual, rank, tensor_over,
)

import oracle

# F2[x, eps]/(x^2, eps^2) on the basis 1, x, eps, x*eps, written out by hand
DUAL_OF_DUAL = {
    (0, 0): [1, 0, 0, 0], (0, 1): [0, 1, 0, 0], (0, 2): [0, 0, 1, 0], (0, 3): [0, 0, 0, 1],
    (1, 1): [0, 0, 0, 0], (1, 2): [0, 0, 0, 1], (1, 3): [0, 0, 0, 0],
    (2, 2): [0, 0, 0, 0], (2, 3): [0, 0, 0, 0], (3, 3): [0, 0, 0, 0],
}


def _table(products, d):
    t = [[None] * d for _ in range(d)]
    for (i, j), v in products.items():
        t[i][j] = t[j][i] = v
    return t


def test_dual_numbers_of_f2():
    T = dual_numbers(f2())
    assert T.dim == 2 and T.size == 4
    assert not T.validate()
    eps = np.array([0, 1])
    assert not T.mul(eps, eps).any()


def test_dual_preserves_identity_and_doubles():
    A = f2_dual()
    h = dual_numbers_hom(identity_hom(A))
    assert np.array_equal(h.matrix, np.eye(4, dtype=np.int64))
    assert iterate_dual(A, 2).dim == 4 * A.dim


def test_dual_of_dual_matches_hand_table():
    T = dual_numbers(f2_dual())
    # library basis is 1, x, eps*1, eps*x
    for i, j in itertools.product(range(4), repeat=2):
        expect = _table(DUAL_OF_DUAL, 4)[i][j]
        assert list(T.mult[i, j]) == expect


def test_sixteen_element_pushout():
    M, N = f2(), f2_dual()
    f = enumerate_homs(M, N)[0]
    po = tensor_over(M, N, N, f, f)
    assert po.algebra.dim == 4 and po.algebra.size == 16
    mult_n = _table({(0, 0): [1, 0], (0, 1): [0, 1], (1, 1): [0, 0]}, 2)
    assert oracle.gf2_pushout_dim(1, 2, 2, mult_n, mult_n, [[1, 0]], [[1, 0]]) == 4


def test_two_hundred_fifty_six_element_comparison():
    M, N = f2(), f2_dual()
    f = enumerate_homs(M, N)[0]
    po = tensor_over(M, N, N, f, f)
    rep = check_T_preserves_pushout(po, depth=1)
    level = rep["levels"][0]
    assert rep["holds"]
    assert level["dim_T_of_pushout"] == level["dim_pushout_of_T"] == 8
    assert 2 ** level["dim_pushout_of_T"] == 256
    # independent count: TN (x)_{TM} TE with TM = F2[eps] acting through 1 and eps
    mult_tn = _table(DUAL_OF_DUAL, 4)
    f_t = [[1, 0, 0, 0], [0, 0, 1, 0]]
    assert oracle.gf2_pushout_dim(2, 4, 4, mult_tn, mult_tn, f_t, f_t) == 8


def test_trivial_pushout_is_identity():
    for A in bundled_f2_algebras():
        po = tensor_over(A, A, A, identity_hom(A), identity_hom(A))
        assert po.algebra.dim == A.dim
        assert po.into_N.is_bijective()
        assert check_T_preserves_pushout(po, depth=2)["holds"]


def test_pushout_along_identity_gives_other_leg():
    M, E = f2(), f2_dual()
    g = enumerate_homs(M, E)[0]
    po = tensor_over(M, M, E, identity_hom(M), g)
    assert po.algebra.dim == E.dim and po.into_E.is_bijective()


def test_free_module_dimension_formula():
    # every bundled algebra is free over F2, so dim(N (x)_F2 E) = dim N * dim E
    M = f2()
    algs = bundled_f2_algebras()
    for N, E in itertools.product(algs, repeat=2):
        f, g = enumerate_homs(M, N)[0], enumerate_homs(M, E)[0]
        assert tensor_over(M, N, E, f, g).algebra.dim * M.dim == N.dim * E.dim


def test_universal_property_against_all_cocones():
    algs = bundled_f2_algebras()
    M, N = f2(), f2_dual()
    f = enumerate_homs(M, N)[0]
    po = tensor_over(M, N, N, f, f)
    rep = check_pushout(po, commuting_cocones(po, algs))
    assert rep["holds"] and rep["cocones_tested"] > 0


def test_skew_table_rejected():
    m = np.zeros((2, 2, 2), dtype=np.int64)
    m[0, 0] = [1, 0]
    m[0, 1] = [0, 1]
    m[1, 0] = [0, 0]
    A = FiniteAlgebra(2, ("1", "x"), m, [1, 0])
    assert "commutativity" in A.validate()


def test_hom_counts():
    A, B = f2_dual(), bundled_f2_algebras()[2]  # F2 x F2
    # F2[x]/x^2 -> F2 x F2 must send x to a nilpotent, so only to 0
    assert len(enumerate_homs(A, B)) == 1
    # identity, swap, and the two projections followed by the diagonal
    assert len(enumerate_homs(B, B)) == 4


@given(st.lists(st.lists(st.integers(0, 1), min_size=5, max_size=5), min_size=0, max_size=7))
def test_rank_matches_bit_oracle(rows):
    mat = np.array(rows, dtype=np.int64).reshape(len(rows), 5)
    bits = [int("".join(map(str, r)), 2) for r in rows]
    assert rank(mat, 2) == oracle.gf2_rank(bits)


@given(st.lists(st.integers(0, 4), min_size=9, max_size=9))
def test_inverse_mod_5(entries):
    a = np.array(entries, dtype=np.int64).reshape(3, 3)
    inv = inverse_matrix(a, 5)
    det = round(np.linalg.det(a)) % 5
    assert (inv is None) == (det == 0)
    if inv is not None:
        assert np.array_equal((a @ inv) % 5, np.eye(3, dtype=np.int64))


@given(st.sampled_from(bundled_f2_algebras()), st.data())
def test_multiplication_laws_on_elements(A, data):
    x, y, z = (np.array(data.draw(st.lists(st.integers(0, 1), min_size=A.dim, max_size=A.dim)))
               for _ in range(3))
    assert np.array_equal(A.mul(x, y), A.mul(y, x))
    assert np.array_equal(A.mul(A.mul(x, y), z), A.mul(x, A.mul(y, z)))
    assert np.array_equal(A.mul(A.unit, x), x % 2)


@pytest.mark.parametrize("k", [1, 2])
def test_dual_hom_is_hom(k):
    for A, B in itertools.product(bundled_f2_algebras(), repeat=2):
        for h in enumerate_homs(A, B):
            for _ in range(k):
                h = dual_numbers_hom(h)
            assert not h.validate()
