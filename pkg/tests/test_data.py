import logging

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from symlat import NUM_FOLDS, build_store, density, make_folds, split
from symlat.data import _store_from_canonical


class TestBuildStore:
    def test_canonicalizes_orientation(self):
        store = build_store([(3, 1, 5.0)], n=4)
        assert len(store) == 1
        e = store.entry(0)
        assert (e.i, e.j, e.value) == (1, 3, 5.0)

    def test_keeps_diagonal(self):
        store = build_store([(0, 0, 2.0)], n=1)
        assert len(store) == 1
        assert store.entry(0).i == store.entry(0).j == 0
        assert store.diagonal_count == 1

    def test_merges_mirrored_duplicates(self, caplog):
        # Oracle: group triples by canonical pair and count survivors.
        raw = [(1, 2, 4.0), (2, 1, 4.0)]
        groups = {tuple(sorted(t[:2])) for t in raw}
        with caplog.at_level(logging.WARNING, logger="symlat.data"):
            store = build_store(raw, n=3)
        assert len(store) == len(groups) == 1
        assert store.entry(0).value == 4.0
        assert "duplicate" in caplog.text

    def test_duplicate_merge_keeps_last_value(self):
        store = build_store([(0, 1, 1.0), (1, 0, 9.0)], n=2)
        assert store.entry(0).value == 9.0

    def test_rejects_negative_value_naming_triple(self):
        with pytest.raises(ValueError, match=r"\(0, 1, -2\.0\)"):
            build_store([(0, 1, -2.0)], n=2)

    def test_rejects_out_of_range_index(self):
        with pytest.raises(ValueError, match="out of range"):
            build_store([(0, 5, 1.0)], n=3)

    def test_empty_store_allowed(self):
        store = build_store([], n=10)
        assert len(store) == 0

    def test_store_is_immutable(self):
        store = build_store([(0, 1, 1.0)], n=2)
        with pytest.raises(ValueError):
            store.vv[0] = 2.0

    @given(
        triples=st.lists(
            st.tuples(
                st.integers(0, 7),
                st.integers(0, 7),
                st.floats(0, 100, allow_nan=False),
            ),
            max_size=30,
        )
    )
    @settings(max_examples=60)
    def test_invariants_hold_for_arbitrary_input(self, triples):
        store = build_store(triples, n=8)
        assert np.all(store.ii <= store.jj)
        assert np.all(store.vv >= 0)
        assert len(store) <= len({tuple(sorted(t[:2])) for t in triples})


class TestDensity:
    def test_symmetric_count_formula(self):
        # Three off-diagonal entries and one diagonal on n=4: the known set
        # of the symmetric matrix has 2*3 + 1 = 7 of 16 cells.
        store = build_store([(0, 1, 1.0), (0, 2, 1.0), (2, 3, 1.0), (1, 1, 1.0)], n=4)
        assert store.known_count == 7
        assert density(store) == 7 / 16

    def test_empty_matrix(self):
        assert density(build_store([], n=10)) == 0.0

    def test_full_matrix_has_density_one(self):
        n = 5
        iu, ju = np.triu_indices(n)
        store = _store_from_canonical(n, iu, ju, np.ones(iu.size))
        assert density(store) == 1.0

    @pytest.mark.parametrize(
        "known,n,expected_pct",
        [
            (1021786, 4181, 5.85),
            (1182124, 5194, 4.38),
            (2795876, 2573, 42.23),
            (95188, 16726, 0.03),
        ],
    )
    def test_reference_dataset_percentages(self, known, n, expected_pct):
        # Published statistics for four public networks: the known count
        # over n^2 reproduces the quoted density to two decimal places.
        assert round(100.0 * known / (n * n), 2) == expected_pct

    def test_mock_store_matches_reference_density(self):
        # Build an actual (mock) store with the known count of the largest
        # reference network and confirm density() reproduces its figure.
        n, known = 4181, 1021786
        stored = known // 2
        iu, ju = np.triu_indices(n, k=1)  # off-diagonal only
        store = _store_from_canonical(n, iu[:stored], ju[:stored], np.ones(stored))
        assert store.known_count == known
        assert round(100.0 * density(store), 2) == 5.85


class TestMakeFolds:
    def test_divisible_counts(self):
        store = _uniform_store(100)
        plan = make_folds(store, seed=0)
        assert [plan.fold_size(f) for f in range(NUM_FOLDS)] == [10] * NUM_FOLDS

    def test_reference_scale_fold_sizes(self):
        # Oracle: integer division. 1021786 = 10 * 102178 + 6.
        m = 1021786
        store = _uniform_store(m)
        plan = make_folds(store, seed=3)
        sizes = {plan.fold_size(f) for f in range(NUM_FOLDS)}
        q, r = divmod(m, NUM_FOLDS)
        assert sizes == {q, q + 1}
        assert sum(plan.fold_size(f) for f in range(NUM_FOLDS)) == m

    def test_deterministic_for_fixed_seed(self):
        store = _uniform_store(57)
        a = make_folds(store, seed=42)
        b = make_folds(store, seed=42)
        assert np.array_equal(a.fold_of, b.fold_of)

    def test_seed_changes_assignment(self):
        store = _uniform_store(57)
        a = make_folds(store, seed=1)
        b = make_folds(store, seed=2)
        assert not np.array_equal(a.fold_of, b.fold_of)

    def test_rejects_fewer_than_ten_entries(self):
        store = _uniform_store(9)
        with pytest.raises(ValueError, match="at least 10"):
            make_folds(store, seed=0)

    @given(m=st.integers(10, 400), seed=st.integers(0, 2**32 - 1))
    @settings(max_examples=40)
    def test_partition_property(self, m, seed):
        plan = make_folds(_uniform_store(m), seed=seed)
        sizes = [plan.fold_size(f) for f in range(NUM_FOLDS)]
        assert sum(sizes) == m
        assert max(sizes) - min(sizes) <= 1


class TestSplit:
    def test_forced_sizes_with_ten_entries(self):
        plan = make_folds(_uniform_store(10), seed=0)
        train, validation, test = split(plan, 0)
        assert (len(train), len(validation), len(test)) == (7, 1, 2)

    def test_wraparound_rotation(self):
        plan = make_folds(_uniform_store(30), seed=0)
        _, validation, test = split(plan, 9)
        assert set(plan.fold_of[validation]) == {9}
        assert set(plan.fold_of[test]) == {0, 1}

    def test_rejects_bad_rotation(self):
        plan = make_folds(_uniform_store(30), seed=0)
        with pytest.raises(ValueError, match="rotation"):
            split(plan, 10)

    @pytest.mark.parametrize("rotation", range(NUM_FOLDS))
    def test_disjoint_cover_every_rotation(self, rotation):
        m = 103
        plan = make_folds(_uniform_store(m), seed=5)
        train, validation, test = split(plan, rotation)
        merged = np.concatenate([train, validation, test])
        assert len(merged) == m
        assert len(np.unique(merged)) == m  # disjoint and covering

    def test_each_fold_tests_in_exactly_two_rotations(self):
        plan = make_folds(_uniform_store(60), seed=8)
        test_appearances = {f: 0 for f in range(NUM_FOLDS)}
        for rotation in range(NUM_FOLDS):
            _, _, test = split(plan, rotation)
            for f in set(plan.fold_of[test]):
                test_appearances[f] += 1
        assert all(count == 2 for count in test_appearances.values())


def _uniform_store(m: int):
    """A store with m distinct canonical pairs (geometry irrelevant for folds)."""
    n = int(np.ceil((np.sqrt(8 * m + 1) - 1) / 2)) + 1
    iu, ju = np.triu_indices(n)
    return _store_from_canonical(n, iu[:m], ju[:m], np.full(m, 0.5))
