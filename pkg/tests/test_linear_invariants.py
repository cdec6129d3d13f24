from itertools import product

import numpy as np
import pytest

from app.algebra import Algebra, AlgebraPair, StructureTensor
from app.catalog import get_pair, reference_pairs
from app.errors import UnknownInvariant
from app.linear_invariants import (
    InvariantKind,
    assemble_system,
    general_matrices,
    identity_defect,
    invariant_space,
    matrix_vector,
    unknown_labels,
)
from app.matrices import identity, matmul, matrix_text
from app.nonlinear import grid_matrix, grid_solve
from app.vectorized import grid_chunk

D = InvariantKind.DERIVATION
C = InvariantKind.CENTROID
Q = InvariantKind.QUASI_CENTROID


def test_labels_follow_image_then_source():
    assert unknown_labels(2, ("d",)) == ("d1_1", "d2_1", "d1_2", "d2_2")
    assert assemble_system(get_pair("A2_2", "A2_3"), D).shape == (2 * 4 * 2, 4)


def test_two_dim_derivations():
    space = invariant_space(get_pair("A2_2", "A2_3"), D)
    assert space.dim == 2
    assert [matrix_text(m) for m in general_matrices(space)] == [[["0", "0"], ["d2_1", "d2_2"]]]
    space = invariant_space(get_pair("A2_2", "A2_4"), D)
    assert space.dim == 1
    assert matrix_text(general_matrices(space)[0]) == [["0", "0"], ["0", "d2_2"]]


def test_two_dim_centroid_is_the_scalars():
    for second in ("A2_3", "A2_4"):
        pair = get_pair("A2_2", second)
        space = invariant_space(pair, C)
        assert space.dim == 1
        assert space.contains(matrix_vector([identity(2)]))
        assert invariant_space(pair, Q).dim == 1


def test_zero_pair_has_everything():
    pair = get_pair("Zero_2", "Zero_2")
    assert invariant_space(pair, D).dim == 4
    assert invariant_space(pair, C).dim == 4
    assert invariant_space(pair, InvariantKind.QUASI_DERIVATION).dim == 8
    assert invariant_space(pair, InvariantKind.GENERALIZED_DERIVATION).dim == 12


def test_three_and_four_dim_examples():
    pair = get_pair("A3_1", "A3_3")
    assert invariant_space(pair, D).dim == 0
    assert invariant_space(pair, C).dim == 1
    four = invariant_space(get_pair("A4_1", "A4_2"), D)
    assert four.dim == 1
    (m,) = general_matrices(four)
    assert [(r, c) for r in range(4) for c in range(4) if not m[r][c].is_zero] == [(2, 2)]


def test_quasi_derivation_records_its_projection():
    space = invariant_space(get_pair("A2_2", "A2_3"), InvariantKind.QUASI_DERIVATION)
    assert space.meta_value("projection_dim") is not None
    assert space.meta_value("projection_dim") <= space.dim


def test_general_elements_satisfy_their_identities():
    for ref in reference_pairs(2) + reference_pairs(3)[:6]:
        pair = ref.pair()
        for kind in InvariantKind:
            space = invariant_space(pair, kind)
            assert identity_defect(pair, kind, general_matrices(space)) == [], (ref.key, kind)


def _commutator(a, b):
    ab, ba = matmul(a, b), matmul(b, a)
    return tuple(tuple(x - y for x, y in zip(r1, r2)) for r1, r2 in zip(ab, ba))


def test_closure_properties_on_reference_pairs():
    for ref in reference_pairs(2) + reference_pairs(3):
        pair = ref.pair()
        n = pair.dim
        cent = invariant_space(pair, C)
        quasi = invariant_space(pair, Q)
        assert cent.contains(matrix_vector([identity(n)])), ref.key
        assert all(quasi.contains(v) for v in cent.basis), ref.key
        der = invariant_space(pair, D)
        mats = [der.as_matrices(v)[0] for v in der.basis]
        for a in mats:
            for b in mats:
                assert der.contains(matrix_vector([_commutator(a, b)])), ref.key


def test_unknown_kind():
    with pytest.raises(UnknownInvariant):
        InvariantKind.parse("antiderivation")


def _random_associative(count, seed):
    cells = np.array(list(product((-1, 0, 1), repeat=8)), dtype=np.int64).reshape(-1, 2, 2, 2)
    outer = np.einsum("bijm,bmkr->bijkr", cells, cells)
    inner = np.einsum("bjkm,bimr->bijkr", cells, cells)
    pool = cells[~(outer - inner).reshape(len(cells), -1).any(axis=1)]
    rng = np.random.default_rng(seed)
    picks = rng.choice(len(pool), size=count, replace=False)
    out = []
    for t in pool[picks]:
        entries = [(i, j, k, int(t[i, j, k])) for i, j, k in product(range(2), repeat=3) if t[i, j, k]]
        out.append(StructureTensor.from_products(2, entries))
    return out


def test_nullspace_agrees_with_the_integer_grid():
    for idx, tensor in enumerate(_random_associative(20, seed=7)):
        a = Algebra(f"R{idx}", tensor)
        pair = AlgebraPair(a, a)
        space = invariant_space(pair, D)
        hits = set(grid_solve(pair, D, 1))
        for cand in grid_chunk(2, 1, 0, 81):
            key = tuple(tuple(int(x) for x in row) for row in cand)
            assert space.contains(matrix_vector([grid_matrix(key)])) == (key in hits), (idx, key)
