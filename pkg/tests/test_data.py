import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from genrel.data import Dataset, build_dataset, counts, make_fold_plan
from genrel.errors import (
    EmptyDataset,
    MismatchedPlan,
    NonFiniteValue,
    NoTraitObserved,
    RaggedRows,
    TooFewObservations,
)


class TestBuildDataset:
    def test_full_overlap_counts(self):
        d = build_dataset([([1.0, 2.0], 0.5, 1.5), ([0.0, 1.0], 1.0, 2.0), ([3.0, 1.0], 2.0, 0.0)])
        assert (d.n_rows, d.n_y, d.n_z, d.n_0) == (3, 3, 3, 3)

    def test_non_overlap_counts(self):
        d = build_dataset([([1.0], 0.5, None), ([2.0], 1.0, None),
                           ([3.0], None, 1.5), ([4.0], None, 2.5)])
        assert (d.n_rows, d.n_y, d.n_z, d.n_0) == (4, 2, 2, 0)

    def test_row_without_traits(self):
        with pytest.raises(NoTraitObserved) as exc:
            build_dataset([([1.0], 0.5, None), ([2.0], None, None)])
        assert exc.value.row == 1

    def test_ragged(self):
        with pytest.raises(RaggedRows):
            build_dataset([([1.0, 2.0], 0.5, 1.0), ([2.0], 1.0, 1.0)])

    def test_empty(self):
        with pytest.raises(EmptyDataset):
            build_dataset([])

    def test_non_finite(self):
        with pytest.raises(NonFiniteValue):
            build_dataset([([np.inf], 0.5, 1.0), ([1.0], 1.0, 2.0)])


class TestFromArrays:
    def test_nan_marks_missing(self):
        d = Dataset.from_arrays(np.eye(3), [1.0, np.nan, 2.0], [np.nan, 1.0, 3.0])
        np.testing.assert_array_equal(d.t_y, [True, False, True])
        np.testing.assert_array_equal(d.t_z, [False, True, True])
        assert d.y[1] == 0.0 and d.z[0] == 0.0

    def test_arrays_are_read_only(self):
        d = Dataset.from_arrays(np.eye(2), [1.0, 2.0], [3.0, 4.0])
        with pytest.raises(ValueError):
            d.x[0, 0] = 5.0

    def test_swap_traits(self, rng):
        from conftest import random_dataset
        d = random_dataset(rng)
        s = d.swap_traits()
        np.testing.assert_array_equal(s.y, d.z)
        np.testing.assert_array_equal(s.t_z, d.t_y)


def _patterned(n_both, n_y_only, n_z_only, p=2, seed=0):
    rng = np.random.default_rng(seed)
    n = n_both + n_y_only + n_z_only
    t_y = np.r_[np.ones(n_both + n_y_only, bool), np.zeros(n_z_only, bool)]
    t_z = np.r_[np.ones(n_both, bool), np.zeros(n_y_only, bool), np.ones(n_z_only, bool)]
    return Dataset.from_arrays(rng.standard_normal((n, p)), rng.standard_normal(n),
                               rng.standard_normal(n), t_y, t_z)


class TestFoldPlan:
    def test_full_overlap_four_rows(self):
        d = _patterned(4, 0, 0)
        f = make_fold_plan(d, seed=3)
        assert sorted(np.bincount(f.assignment)[1:]) == [2, 2]

    def test_deterministic(self):
        d = _patterned(7, 5, 3)
        np.testing.assert_array_equal(make_fold_plan(d, 11).assignment,
                                      make_fold_plan(d, 11).assignment)

    def test_too_few(self):
        with pytest.raises(TooFewObservations):
            make_fold_plan(_patterned(0, 1, 3), 0)

    def test_counts_full_overlap(self):
        d = _patterned(6, 0, 0)
        sc = counts(d, make_fold_plan(d, 0))
        for fc in sc.folds:
            assert (fc.n_y, fc.n_z, fc.n_0, fc.n) == (3, 3, 3, 3)

    def test_counts_non_overlap(self):
        d = _patterned(0, 4, 4)
        sc = counts(d, make_fold_plan(d, 0))
        for fc in sc.folds:
            assert (fc.n_y, fc.n_z, fc.n_0, fc.n) == (2, 2, 0, 4)

    def test_mismatched_plan(self):
        a, b = _patterned(6, 0, 0, seed=1), _patterned(6, 0, 0, seed=2)
        with pytest.raises(MismatchedPlan):
            counts(b, make_fold_plan(a, 0))

    def test_odd_both_stratum_extra_to_fold_one(self):
        d = _patterned(5, 0, 0)
        sc = counts(d, make_fold_plan(d, 4))
        assert sc.folds[0].n_0 == 3 and sc.folds[1].n_0 == 2

    @given(st.integers(0, 15), st.integers(0, 15), st.integers(0, 15), st.integers(0, 2**32 - 1))
    def test_invariants(self, nb, ny, nz, seed):
        if nb + ny < 2 or nb + nz < 2:
            return
        d = _patterned(nb, ny, nz)
        f = make_fold_plan(d, seed)
        assert set(np.unique(f.assignment)) <= {1, 2}
        assert f.assignment.shape == (d.n_rows,)
        sc = counts(d, f)
        a, b = sc.folds
        assert abs(a.n_y - b.n_y) <= 1
        assert abs(a.n_z - b.n_z) <= 1
        assert abs(a.n_0 - b.n_0) <= 1
        for fc in sc.folds:
            assert fc.n == fc.n_y + fc.n_z - fc.n_0
        assert a.n_y + b.n_y == d.n_y and a.n_z + b.n_z == d.n_z and a.n + b.n == d.n_rows

    @given(st.integers(2, 12), st.integers(0, 12), st.integers(0, 12), st.integers(0, 1000))
    def test_trait_swap_symmetric(self, nb, ny, nz, seed):
        d = _patterned(nb, ny, nz)
        np.testing.assert_array_equal(make_fold_plan(d, seed).assignment,
                                      make_fold_plan(d.swap_traits(), seed).assignment)
