import numpy as np
import pytest

from scenevat.errors import InputError
from scenevat.matrix import (
    check_dissim,
    check_permutation,
    euclidean_dissim,
    invert_permutation,
    pairwise_dissim,
    permute_matrix,
    validate_dissim,
    zscore,
)

from conftest import random_dissim


def test_euclidean_right_triangle():
    m = euclidean_dissim(np.array([[0.0, 0.0], [3.0, 4.0]]))
    assert m.tolist() == [[0.0, 5.0], [5.0, 0.0]]


def test_euclidean_identical_rows():
    m = euclidean_dissim(np.array([[1.0, 2.0], [1.0, 2.0]]))
    assert m[0, 1] == 0.0


def test_euclidean_three_rows():
    f = np.array([[1.0, 2.0, 2.0], [0.0, 0.0, 0.0], [1.0, 0.0, 0.0]])
    m = euclidean_dissim(f)
    assert m[0, 1] == pytest.approx(3.0, abs=1e-12)
    assert m[0, 2] == pytest.approx(2.8284271, abs=1e-7)
    assert m[1, 2] == pytest.approx(1.0, abs=1e-12)


def test_euclidean_rejects_nonfinite_naming_row():
    f = np.ones((4, 3))
    f[2, 1] = np.nan
    with pytest.raises(InputError, match="row 2"):
        euclidean_dissim(f)


def test_euclidean_one_dimensional_input_is_column():
    m = euclidean_dissim(np.array([0.0, 1.0, 10.0]))
    assert m.shape == (3, 3)
    assert m[0, 2] == 10.0


def test_validate_passes_on_euclidean_outputs():
    rng = np.random.Generator(np.random.Philox(key=1))
    for _ in range(20):
        f = rng.normal(size=(rng.integers(1, 30), rng.integers(1, 6)))
        assert validate_dissim(euclidean_dissim(f)) is None


def test_validate_names_asymmetry():
    m = np.zeros((2, 2))
    m[0, 1] = 1.0
    msg = validate_dissim(m)
    assert msg is not None and "(0, 1)" in msg and "symmetr" in msg


def test_validate_names_negative_entry():
    m = np.zeros((2, 2))
    m[0, 1] = m[1, 0] = -1.0
    msg = validate_dissim(m)
    assert msg is not None and "negative" in msg


def test_validate_names_nonzero_diagonal():
    m = np.zeros((2, 2))
    m[1, 1] = 0.5
    assert "diagonal" in validate_dissim(m)


def test_triangle_inequality_on_random_features():
    rng = np.random.Generator(np.random.Philox(key=2))
    f = rng.normal(size=(40, 5))
    m = euclidean_dissim(f)
    for _ in range(300):
        i, j, k = rng.integers(0, 40, size=3)
        assert m[i, k] <= m[i, j] + m[j, k] + 1e-9


def test_permute_identity():
    m = random_dissim(np.random.Generator(np.random.Philox(key=3)), 5)
    assert np.array_equal(permute_matrix(m, np.arange(5)), m)


def test_permute_swap_2x2():
    m = np.array([[0.0, 2.0], [2.0, 0.0]])
    assert np.array_equal(permute_matrix(m, [1, 0]), m)


def test_permute_3x3_index_chase():
    m = random_dissim(np.random.Generator(np.random.Philox(key=4)), 3)
    p = [2, 0, 1]
    out = permute_matrix(m, p)
    for i in range(3):
        for j in range(3):
            assert out[i, j] == m[p[i], p[j]]


def test_permute_then_inverse_is_exact():
    rng = np.random.Generator(np.random.Philox(key=5))
    m = random_dissim(rng, 17)
    p = rng.permutation(17)
    back = permute_matrix(permute_matrix(m, p), invert_permutation(p))
    assert np.array_equal(back, m)


def test_permute_preserves_entry_multiset():
    rng = np.random.Generator(np.random.Philox(key=6))
    m = random_dissim(rng, 12)
    p = rng.permutation(12)
    out = permute_matrix(m, p)
    assert np.array_equal(np.sort(out.ravel()), np.sort(m.ravel()))


def test_permute_length_mismatch():
    m = random_dissim(np.random.Generator(np.random.Philox(key=7)), 4)
    with pytest.raises(InputError):
        permute_matrix(m, [0, 1, 2])


def test_check_permutation_rejects_repeats():
    with pytest.raises(InputError):
        check_permutation([0, 1, 1], 3)


def test_tiled_path_matches_untiled_bitwise():
    rng = np.random.Generator(np.random.Philox(key=8))
    f = rng.normal(size=(137, 23))
    full = euclidean_dissim(f, tile=4096)
    for tile in (7, 16, 137):
        assert np.array_equal(euclidean_dissim(f, tile=tile), full)


def test_pairwise_custom_metric_hook():
    # pluggable pair function: L1 on a toy set
    def l1(a, b):
        return np.abs(a[:, None, :] - b[None, :, :]).sum(axis=2)

    f = np.array([[0.0, 0.0], [1.0, 2.0]])
    m = pairwise_dissim(f, pair_fn=l1)
    assert m[0, 1] == 3.0
    assert validate_dissim(m) is None


def test_zscore_standardizes_and_keeps_constant_dims():
    rng = np.random.Generator(np.random.Philox(key=9))
    f = rng.normal(loc=3.0, scale=2.0, size=(50, 3))
    f[:, 2] = 7.0  # constant dimension stays put
    z = zscore(f)
    assert np.abs(z[:, :2].mean(axis=0)).max() < 1e-12
    assert np.abs(z[:, :2].std(axis=0) - 1.0).max() < 1e-12
    assert np.array_equal(z[:, 2], np.zeros(50))


def test_standardize_flag_changes_distances():
    f = np.array([[0.0, 0.0], [1.0, 100.0]])
    raw = euclidean_dissim(f)
    std = euclidean_dissim(f, standardize=True)
    assert raw[0, 1] > 50.0
    assert std[0, 1] == pytest.approx(np.sqrt(2.0) * 2.0, rel=1e-12)


def test_check_dissim_raises_with_message():
    with pytest.raises(InputError):
        check_dissim(np.array([[0.0, 1.0], [2.0, 0.0]]))
