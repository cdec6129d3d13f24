import numpy as np
import pytest

from app.algebra import AlgebraPair, transport
from app.catalog import reference_pairs
from app.cohomology import CohomologyMode, second_cohomology
from app.linear_invariants import InvariantKind, invariant_space
from app.matrices import as_matrix, determinant

REFS = [(ref, 3) for ref in reference_pairs(2)] + [(ref, 1) for ref in reference_pairs(3)]
SEED = 20240529


def _invertible(n, count, seed):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        m = as_matrix(rng.integers(-2, 3, size=(n, n)).tolist())
        if not determinant(m).is_zero:
            out.append(m)
    return out


def _moved(pair, p):
    return AlgebraPair(transport(pair.first, p, pair.first.name), transport(pair.second, p, pair.second.name))


def _cohomology_dims(pair, mode):
    res = second_cohomology(pair, mode)
    return res.dim_Z2, res.dim_B2, res.dim_B2_in_Z2, res.dim_H2


@pytest.mark.parametrize("ref, count", REFS, ids=lambda r: getattr(r, "key", str(r)))
def test_dimensions_survive_a_change_of_basis(ref, count):
    pair = ref.pair()
    before = {kind: invariant_space(pair, kind).dim for kind in InvariantKind}
    cohomology = {mode: _cohomology_dims(pair, mode) for mode in CohomologyMode}
    for k, p in enumerate(_invertible(pair.dim, count, SEED + REFS.index((ref, count)))):
        moved = _moved(pair, p)
        for kind in InvariantKind:
            assert invariant_space(moved, kind).dim == before[kind], (ref.key, kind, k)
        for mode in CohomologyMode:
            assert _cohomology_dims(moved, mode) == cohomology[mode], (ref.key, mode, k)
