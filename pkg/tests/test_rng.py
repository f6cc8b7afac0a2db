import numpy as np
import pytest

from iltlab.rng import RngStream, derive_stream


def test_same_coordinates_same_draws():
    a = RngStream(5, 2, (1, 3)).generator().random(16)
    b = RngStream(5, 2, (1, 3)).generator().random(16)
    assert np.array_equal(a, b)


def test_children_and_replicates_differ():
    base = RngStream(5, 2)
    draws = [
        base.generator().random(4),
        base.child(0).generator().random(4),
        base.child(1).generator().random(4),
        RngStream(5, 3).generator().random(4),
        RngStream(6, 2).generator().random(4),
    ]
    for i in range(len(draws)):
        for j in range(i + 1, len(draws)):
            assert not np.array_equal(draws[i], draws[j])


def test_path_length_is_part_of_the_key():
    # (0,) vs () and (0, 0) vs (0,) must not collide
    keys = {tuple(RngStream(1, 0, p).key) for p in [(), (0,), (0, 0)]}
    assert len(keys) == 3


def test_generator_restarts_at_counter_zero():
    s = RngStream(9)
    g = s.generator()
    g.random(100)
    assert np.array_equal(s.generator().random(3), RngStream(9).generator().random(3))


def test_derive_stream():
    assert derive_stream(3, 4) == RngStream(3, 4)


@pytest.mark.parametrize("bad", [-1, 2**64, 1.5])
def test_rejects_bad_coordinates(bad):
    with pytest.raises(ValueError):
        RngStream(bad)
