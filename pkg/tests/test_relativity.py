import math
import random

import pytest

from emflow import (
    Boost,
    EMField,
    PlaneWaveSpec,
    SpaceTimePoint,
    UnitSystem,
    Vec3,
    boost_event,
    boost_field,
    boosted_source,
    energy_density,
    invariants,
    is_null,
    reactive_density_from_invariants,
    standing_plane_wave,
    traveling_plane_wave,
)

UNITS = UnitSystem()


def _random_field(rng, span=10.0):
    return EMField(
        Vec3(rng.uniform(-span, span), rng.uniform(-span, span), rng.uniform(-span, span)),
        Vec3(rng.uniform(-span, span), rng.uniform(-span, span), rng.uniform(-span, span)),
    )


def _random_boost(rng, max_speed=0.9):
    while True:
        beta = Vec3(
            rng.uniform(-max_speed, max_speed),
            rng.uniform(-max_speed, max_speed),
            rng.uniform(-max_speed, max_speed),
        )
        if beta.norm() <= max_speed:
            return Boost(beta)


def test_boost_rejects_superluminal_speeds():
    with pytest.raises(ValueError):
        Boost(Vec3(1.0, 0.0, 0.0))
    with pytest.raises(ValueError):
        Boost(Vec3(0.8, 0.8, 0.0))
    with pytest.raises(ValueError):
        Boost(Vec3(1.0 - 1e-13, 0.0, 0.0))
    Boost(Vec3(0.999999, 0.0, 0.0))  # admissible


def test_gamma_determinant_identity():
    rng = random.Random(41)
    for _ in range(1000):
        b = _random_boost(rng, max_speed=0.99)
        assert abs(b.gamma * math.sqrt(1.0 - b.beta.norm2()) - 1.0) <= 1e-14
        assert b.gamma >= 1.0


def test_zero_boost_is_identity():
    b = Boost(Vec3(0, 0, 0))
    p = SpaceTimePoint(Vec3(1.5, -2.0, 0.25), 3.0)
    q = boost_event(p, b, UNITS)
    assert q.r == p.r and q.t == p.t
    f = EMField(Vec3(1, 2, 3), Vec3(4, 5, 6))
    g = boost_field(f, b)
    assert g.e == f.e and g.b == f.b


def test_origin_event_is_a_fixed_point():
    rng = random.Random(42)
    origin = SpaceTimePoint(Vec3(0, 0, 0), 0.0)
    for _ in range(50):
        q = boost_event(origin, _random_boost(rng), UNITS)
        assert q.r.norm() == 0.0 and q.t == 0.0


@pytest.mark.parametrize("c", [1.0, 2.0])
def test_minkowski_interval_is_preserved(c):
    units = UnitSystem(c=c)
    rng = random.Random(43)
    for _ in range(1000):
        p = SpaceTimePoint(
            Vec3(rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)),
            rng.uniform(-5, 5),
        )
        q = boost_event(p, _random_boost(rng), units)
        s_before = (c * p.t) ** 2 - p.r.norm2()
        s_after = (c * q.t) ** 2 - q.r.norm2()
        assert abs(s_after - s_before) <= 1e-12 * (1.0 + abs(s_before))


def test_boost_of_null_wave_sample_by_hand():
    # sample E = x_hat, B = y_hat boosted by 0.5 c along z: both fields
    # shrink to gamma/2 and the sample stays null
    gamma = 1.0 / math.sqrt(0.75)
    f = EMField(Vec3(1, 0, 0), Vec3(0, 1, 0))
    g = boost_field(f, Boost(Vec3(0, 0, 0.5)))
    assert g.e.x == pytest.approx(gamma / 2.0, rel=1e-15)
    assert (abs(g.e.y), abs(g.e.z)) == (0.0, 0.0)
    assert g.b.y == pytest.approx(gamma / 2.0, rel=1e-15)
    assert (abs(g.b.x), abs(g.b.z)) == (0.0, 0.0)
    assert reactive_density_from_invariants(g) <= 1e-15


def test_invariants_survive_random_boosts():
    rng = random.Random(44)
    for _ in range(2000):
        f = _random_field(rng)
        g = boost_field(f, _random_boost(rng))
        before = invariants(f)
        after = invariants(g)
        assert abs(after.e2_minus_b2 - before.e2_minus_b2) <= 1e-10 * (
            1.0 + abs(before.e2_minus_b2)
        )
        assert abs(after.e_dot_b - before.e_dot_b) <= 1e-10 * (1.0 + abs(before.e_dot_b))


def test_reactive_density_survives_random_boosts():
    rng = random.Random(45)
    for _ in range(2000):
        f = _random_field(rng)
        g = boost_field(f, _random_boost(rng))
        r_before = reactive_density_from_invariants(f)
        r_after = reactive_density_from_invariants(g)
        assert abs(r_after - r_before) <= 1e-9 * max(r_before, 1e-30)


def test_energy_density_alone_is_not_invariant():
    f = EMField(Vec3(1, 0, 0), Vec3(0, 1, 0))
    u_rest = energy_density(f)
    u_moved = energy_density(boost_field(f, Boost(Vec3(0, 0, 0.5))))
    assert abs(u_moved - u_rest) > 1e-3


def test_boosted_source_with_zero_beta_is_identity():
    source = standing_plane_wave(1.0, 1.0, UNITS)
    moved = boosted_source(source, Boost(Vec3(0, 0, 0)), UNITS)
    rng = random.Random(46)
    for _ in range(25):
        p = SpaceTimePoint(Vec3(0, 0, rng.uniform(-5, 5)), rng.uniform(-5, 5))
        f, g = source.evaluate(p), moved.evaluate(p)
        assert (f.e - g.e).norm() == 0.0
        assert (f.b - g.b).norm() == 0.0


def test_boosted_source_round_trip():
    source = standing_plane_wave(1.0, 1.0, UNITS)
    rng = random.Random(47)
    for _ in range(200):
        b = _random_boost(rng, max_speed=0.8)
        round_trip = boosted_source(boosted_source(source, b, UNITS), b.inverse(), UNITS)
        p = SpaceTimePoint(
            Vec3(rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3)),
            rng.uniform(-3, 3),
        )
        f, g = source.evaluate(p), round_trip.evaluate(p)
        assert (f.e - g.e).norm() <= 1e-10
        assert (f.b - g.b).norm() <= 1e-10


def test_boosted_plane_wave_stays_null_everywhere_sampled():
    wave = traveling_plane_wave(PlaneWaveSpec(amplitude=1.0, omega=1.0, direction=+1), UNITS)
    rng = random.Random(48)
    for _ in range(100):
        moving = boosted_source(wave, _random_boost(rng, max_speed=0.8), UNITS)
        p = SpaceTimePoint(
            Vec3(rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)),
            rng.uniform(-5, 5),
        )
        assert is_null(moving.evaluate(p), tol=1e-12)


def test_boost_preserves_source_free_flag():
    source = standing_plane_wave(1.0, 1.0, UNITS)
    assert boosted_source(source, Boost(Vec3(0.3, 0, 0)), UNITS).source_free
