import numpy as np
import pytest
from hypothesis import given, strategies as st

from discrete_nash import count_points, detect_partition, dump_problem, generate, generate_two_groups


@given(st.integers(0, 2**31 - 1), st.sampled_from([0.0, 0.01, 0.1, 2.0]), st.sampled_from([(1, 1), (2, 2), (3, 1), (4, 3)]))
def test_symmetric_part_spectrum(seed, h, shape):
    p = generate(*shape, (-1, 1), (-5, 5), h, (0.2, 1.7), seed=seed)
    lam = np.linalg.eigvalsh(p.matrix.symmetric_part)
    assert lam.min() > 0
    assert lam.min() >= 0.2 - 1e-9 and lam.max() <= 1.7 + 1e-9


@given(st.integers(0, 2**31 - 1))
def test_two_group_spectrum_and_partition(seed):
    p = generate_two_groups(3, 2, (-1, 1), (-5, 5), 0.1, (0.2, 1.7), seed=seed, density=0.6)
    lam = np.linalg.eigvalsh(p.matrix.symmetric_part)
    assert lam.min() >= 0.2 - 1e-9 and lam.max() <= 1.7 + 1e-9
    assert detect_partition(p).is_valid_for(p)


def test_h_zero_is_symmetric():
    M = generate(3, 2, h=0.0, seed=1).matrix.M
    np.testing.assert_allclose(M, M.T, atol=1e-14)


def test_noise_only_touches_cross_player_entries():
    a = generate(2, 3, h=0.0, seed=5).matrix.M
    b = generate(2, 3, h=0.3, seed=5).matrix.M
    diff = a != b
    assert not diff[:3, :3].any() and not diff[3:, 3:].any()
    assert diff[:3, 3:].any()


def test_same_seed_same_instance():
    assert dump_problem(generate(3, 2, seed=42)) == dump_problem(generate(3, 2, seed=42))
    assert dump_problem(generate(3, 2, seed=42)) != dump_problem(generate(3, 2, seed=43))


def test_table_size():
    p = generate(2, 1, bounds=(-500, 500), seed=0)
    assert count_points(p.box) == 1002001


def test_b_range_respected():
    p = generate(4, 2, b_range=(2, 3), seed=3)
    assert np.all((p.matrix.bhat >= 2) & (p.matrix.bhat <= 3))


@pytest.mark.parametrize("kwargs", [dict(h=-1), dict(eig_range=(0, 1)), dict(eig_range=(2, 1)),
                                    dict(bounds=(3, 2)), dict(b_range=(1, 0))])
def test_invalid_ranges(kwargs):
    with pytest.raises(ValueError):
        generate(2, 1, **kwargs)
