import math

import numpy as np
import pytest

from vcslab import disc
from vcslab.errors import DomainError, ValidationError


def test_make_disc_tuple_examples():
    t = disc.make_disc_tuple(2, [(0.5, 0.0)])
    assert t.a == 0.5
    t = disc.make_disc_tuple(3, [(0.3, 0.0), (0.4, math.pi / 2)])
    assert abs(t.a - 0.5) <= 1e-15
    assert abs(t.theta - math.pi / 2) <= 1e-15
    with pytest.raises(DomainError):
        disc.make_disc_tuple(2, [(1.0, 0.0)])
    with pytest.raises(DomainError):
        disc.make_disc_tuple(2, [(-0.1, 0.0)])
    with pytest.raises(ValidationError):
        disc.make_disc_tuple(3, [(0.1, 0.0)])
    with pytest.raises(ValidationError):
        disc.make_disc_tuple(1, [])


def test_angles_normalized():
    t = disc.make_disc_tuple(3, [(0.1, -math.pi / 2), (0.2, 5 * math.pi)])
    assert all(0.0 <= a < 2 * math.pi for a in t.angles)
    assert abs(t.angles[0] - 1.5 * math.pi) <= 1e-15
    assert abs(t.angles[1] - math.pi) <= 1e-14


def test_b_seq_examples():
    t = disc.make_disc_tuple(4, [(0.3, 0), (0.4, 0), (0.5, 0)])
    assert disc.b_seq(t) == pytest.approx((0.25,), abs=1e-16)
    assert disc.b_seq(disc.make_disc_tuple(3, [(0.3, 0), (0.4, 0)])) == ()
    t = disc.make_disc_tuple(5, [(0.1, 0), (0.2, 0), (0.2, 0), (0.4, 0)])
    b = disc.b_seq(t)
    assert b[0] == pytest.approx(0.05, abs=1e-16)
    assert b[1] == pytest.approx(0.09, abs=1e-16)


@pytest.mark.parametrize("n", [4, 5, 6, 7])
def test_b_seq_complements_to_a_squared(n):
    for t in disc.sample_uniform(n, 20, n):
        r2 = [r * r for r in t.radii]
        b = disc.b_seq(t)
        assert all(x <= y for x, y in zip(b, b[1:]))
        for j, bj in enumerate(b, start=1):
            assert abs(bj + math.fsum(r2[j + 1 :]) - t.a2) <= 1e-15


def test_measure_density_general():
    assert disc.measure_density_general(disc.make_disc_tuple(3, [(0.0, 0), (0.4, 0)])) == 0.0
    assert disc.measure_density_general(disc.make_disc_tuple(3, [(0.3, 0), (0.4, 0)])) == pytest.approx(0.12, abs=1e-16)
    assert disc.measure_density_general(disc.make_disc_tuple(2, [(0.5, 0)])) == 0.5


def test_measure_density_general_permutation_symmetric(rng):
    radii = rng.uniform(0, 1, 5)
    t1 = disc.make_disc_tuple(6, [(r, 0) for r in radii])
    t2 = disc.make_disc_tuple(6, [(r, 0) for r in radii[::-1]])
    assert abs(disc.measure_density_general(t1) - disc.measure_density_general(t2)) <= 1e-17


def test_measure_density_su11():
    assert disc.measure_density_su11(0.0) == 0.0
    assert disc.measure_density_su11(1 - 1e-12) == pytest.approx(1 / (4 * math.pi), rel=1e-10)
    assert disc.measure_density_su11(0.5) == pytest.approx(0.5 / (math.pi * 1.5625), rel=1e-15)
    assert abs(disc.measure_density_su11(0.5) - 0.10186) < 1e-5
    with pytest.raises(DomainError):
        disc.measure_density_su11(1.0)


def test_sample_uniform_determinism_and_validity():
    a = disc.sample_uniform(4, 5, 7)
    b = disc.sample_uniform(4, 5, 7)
    assert a == b
    (one,) = disc.sample_uniform(3, 1, 0)
    assert one.n == 3 and all(0 <= r < 1 for r in one.radii)


def test_sample_uniform_mean_radius():
    count = 10 ** 5
    radii = np.array([t.radii[0] for t in disc.sample_uniform(2, count, 11)])
    sigma = (1 / math.sqrt(12)) / math.sqrt(count)
    assert abs(radii.mean() - 0.5) <= 3 * sigma
