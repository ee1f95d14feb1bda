import random

import pytest

from src.errors import HomogeneityError, IntegrityError
from src.grading import Tau
from src.tau_linalg import (
    ColumnReducer,
    MonomialMatrix,
    Subquotient,
    cokernel_min_gens,
    kernel,
    reduce,
)


def test_entries_follow_weights():
    m = MonomialMatrix.from_support([3, 1], [1], [0b11])
    assert m.entry(0, 0) == Tau(2)
    assert m.entry(1, 0) == Tau(0)
    assert m.entries() == {(0, 0): Tau(2), (1, 0): Tau(0)}


def test_negative_exponent_rejected():
    with pytest.raises(HomogeneityError):
        MonomialMatrix.from_support([0], [1], [0b1])
    with pytest.raises(HomogeneityError):
        MonomialMatrix.from_entries([2], [0], {(0, 0): Tau(1)})


def test_cokernel_of_tau_power_is_torsion():
    desc = cokernel_min_gens(MonomialMatrix.from_support([2], [0], [0b1]))
    assert [(g.weight, g.order) for g in desc.generators] == [(2, 2)]


def test_unit_pivot_kills_row():
    # 행 0 = τ, 행 1 = 1 : 행 1 이 피벗, 행 0 은 자유 생성원으로 남음
    m = MonomialMatrix.from_support([1, 0], [0], [0b11])
    desc = cokernel_min_gens(m)
    assert [(g.weight, g.order) for g in desc.generators] == [(1, None)]
    assert reduce(m).pivot_exponents == [0]


def test_zero_matrix_cokernel_is_free():
    desc = cokernel_min_gens(MonomialMatrix.zero([0, 3], []))
    assert [(g.weight, g.is_free) for g in desc.generators] == [(0, True), (3, True)]


def test_kernel_and_solve():
    m = MonomialMatrix.from_support([0], [0, 0], [0b1, 0b1])
    weights, inclusion = kernel(m)
    assert weights.weights == (0,)
    assert inclusion.columns == (0b11,)
    reducer = ColumnReducer(MonomialMatrix.from_support([2, 0], [0, 0], [0b01, 0b10]))
    assert reducer.rank == 2
    assert reducer.solve(0b11, 0) == 0b11
    assert reducer.solve(0b01, 1) is None


def test_subquotient_torsion_projection():
    q = Subquotient([0], cycles=[(0b1, 0)], boundaries=[(0b1, -2)])
    assert [(x.weight, x.order) for x in q.summands] == [(0, 2)]
    assert q.project(0b1, 0) == {0: 0}
    assert q.project(0b1, -1) == {0: 1}
    assert q.project(0b1, -2) == {}
    assert q.lift({0: 0}) == 0b1


def test_subquotient_rejects_boundary_outside_cycles():
    with pytest.raises(IntegrityError):
        Subquotient([0, 0], cycles=[(0b01, 0)], boundaries=[(0b10, 0)])
    q = Subquotient([0, 0], cycles=[(0b01, 0)], boundaries=[])
    assert not q.is_cycle(0b10, 0)
    with pytest.raises(IntegrityError):
        q.project(0b10, 0)


def _random_matrix(rng):
    rw = [rng.randrange(4) for _ in range(rng.randint(1, 6))]
    cw = [rng.randrange(4) for _ in range(rng.randint(1, 6))]
    columns = []
    for w in cw:
        col = 0
        for i, r in enumerate(rw):
            if r >= w and rng.random() < 0.5:
                col |= 1 << i
        columns.append(col)
    return MonomialMatrix.from_support(rw, cw, columns)


@pytest.mark.parametrize("seed", range(40))
def test_reduce_is_idempotent(seed):
    m = _random_matrix(random.Random(seed))
    red = reduce(m)
    again = reduce(red.matrix)
    assert again.matrix == red.matrix
    assert sorted(again.pivots) == sorted(red.pivots)
    assert again.row_transform == [1 << i for i in range(m.n_rows)]
    assert again.col_transform == [1 << j for j in range(m.n_cols)]
    for col in red.matrix.columns:
        assert bin(col).count("1") <= 1
