import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pigbc.channel import (
    IDENTITY,
    AdditiveNoise,
    Amplifier,
    Attenuator,
    Channel,
    GaussianMoments,
    apply_to_moments,
    compose,
    compose_canonical,
    composition_rule,
    heaviside,
    make_channel,
    oracle_compose,
    to_canonical,
)
from pigbc.errors import DomainError

TOL = 1e-12

xs = st.floats(0.0, 3.0, allow_nan=False)
ms = st.floats(0.0, 2.0, allow_nan=False)
channels = st.builds(Channel, xs, ms)


def close(a: Channel, b: Channel, tol=TOL):
    return abs(a.x - b.x) <= tol and abs(a.M - b.M) <= tol


def test_make_channel():
    assert make_channel(0.6, 0.1) == Channel(0.6, 0.1)
    assert make_channel(0, 0) == Channel(0.0, 0.0)


@pytest.mark.parametrize("x, M", [(-1, 0), (0, -0.1), (math.nan, 0), (1, math.inf)])
def test_make_channel_rejects(x, M):
    with pytest.raises(DomainError):
        make_channel(x, M)


def test_heaviside_at_zero():
    assert heaviside(0.0) == 1.0
    assert heaviside(-1e-300) == 0.0


def test_to_canonical_examples():
    att = to_canonical(Channel(0.5, 0.1))
    assert isinstance(att, Attenuator)
    assert att.eta == 0.5 and att.N == pytest.approx(0.2, abs=TOL)
    assert to_canonical(Channel(1, 0.3)) == AdditiveNoise(0.3)
    assert to_canonical(Channel(2, 0.5)) == Amplifier(2.0, 0.5)


@given(channels)
def test_canonical_round_trip(c):
    back = to_canonical(c).to_channel()
    assert back.x == c.x
    assert abs(back.M - c.M) <= TOL * max(1.0, c.M)


@pytest.mark.parametrize(
    "inner, outer, expected",
    [
        ((0.5, 0.1), (0.5, 0.1), (0.25, 0.15)),
        ((2, 0), (2, 0), (4, 0)),
        ((2, 0), (0.5, 0.2), (1, 0.7)),
        ((1, 0.2), (1, 0.3), (1, 0.5)),
    ],
)
def test_compose_examples(inner, outer, expected):
    got = compose(Channel(*inner), Channel(*outer))
    assert close(got, Channel(*expected))
    assert close(oracle_compose(Channel(*inner), Channel(*outer)), Channel(*expected))


def test_oracle_matches_on_mixed_pair():
    a, b = Channel(0.9, 0.05), Channel(1.2, 0.02)
    assert close(oracle_compose(a, b), compose(a, b))


def test_compose_canonical_c1():
    out = compose_canonical(Attenuator(0.5, 0.2), Attenuator(0.5, 0.2))
    assert isinstance(out, Attenuator)
    assert out.eta == 0.25
    # (1 - 0.25) N3 = 0.5*0.2 + 0.5*0.5*0.2
    assert out.N == pytest.approx(0.2, abs=TOL)


def test_compose_canonical_c2():
    assert compose_canonical(Amplifier(2, 0), Amplifier(2, 0)) == Amplifier(4.0, 0.0)


def test_compose_canonical_c3_boundary_is_additive():
    inner, outer = Amplifier(2.0, 0.3), Attenuator(0.5, 0.1)
    out = compose_canonical(inner, outer)
    assert isinstance(out, AdditiveNoise)
    assert out.N == pytest.approx(compose(inner.to_channel(), outer.to_channel()).M, abs=TOL)


@pytest.mark.parametrize(
    "inner, outer, rule",
    [
        (Attenuator(0.5, 0.1), Attenuator(0.7, 0.2), "C1"),
        (Amplifier(1.5, 0.1), Amplifier(2.0, 0.2), "C2"),
        (Amplifier(1.5, 0.1), Attenuator(0.5, 0.2), "C3.1"),
        (Amplifier(3.0, 0.1), Attenuator(0.5, 0.2), "C3.2"),
        (Attenuator(0.5, 0.1), Amplifier(1.5, 0.2), "C4.1"),
        (Attenuator(0.5, 0.1), Amplifier(3.0, 0.2), "C4.2"),
        (AdditiveNoise(0.1), Amplifier(3.0, 0.2), "C0"),
    ],
)
def test_all_rule_branches(inner, outer, rule):
    assert composition_rule(inner, outer) == rule
    got = compose_canonical(inner, outer).to_channel()
    ref = compose(inner.to_channel(), outer.to_channel())
    assert close(got, ref)


def test_rule_branches_hit_by_random_pairs():
    rng = np.random.default_rng(7)
    seen = set()
    for _ in range(500):
        a = Channel(rng.uniform(0, 3), rng.uniform(0, 2))
        b = Channel(rng.uniform(0, 3), rng.uniform(0, 2))
        seen.add(composition_rule(to_canonical(a), to_canonical(b)))
    assert {"C1", "C2", "C3.1", "C3.2", "C4.1", "C4.2"} <= seen


@given(channels, channels)
def test_closure_and_oracle(a, b):
    c = compose(a, b)
    assert c.x >= 0 and c.M >= 0
    assert close(c, oracle_compose(a, b), tol=1e-11)
    assert close(c, compose_canonical(to_canonical(a), to_canonical(b)).to_channel(), tol=1e-11)


@given(channels, channels, channels)
def test_associativity(a, b, c):
    left = compose(compose(a, b), c)
    right = compose(a, compose(b, c))
    assert close(left, right, tol=1e-11)


@given(channels)
def test_identity_element(c):
    assert close(compose(c, IDENTITY), c)
    assert close(compose(IDENTITY, c), c)


def test_apply_to_moments_examples():
    s = GaussianMoments([1.0, 0.0], np.eye(2))
    out = apply_to_moments(Channel(0.25, 0.15), s)
    np.testing.assert_allclose(out.mean, [0.5, 0.0], atol=TOL)
    np.testing.assert_allclose(out.cov, 1.3 * np.eye(2), atol=TOL)

    s = GaussianMoments([0.3, -2.0], [[2.0, 0.5], [0.5, 1.0]])
    same = apply_to_moments(IDENTITY, s)
    np.testing.assert_array_equal(same.mean, s.mean)
    np.testing.assert_array_equal(same.cov, s.cov)

    erased = apply_to_moments(Channel(0, 0.4), s)
    np.testing.assert_array_equal(erased.mean, [0.0, 0.0])
    np.testing.assert_allclose(erased.cov, 1.8 * np.eye(2), atol=TOL)


def test_moments_reject_asymmetric():
    with pytest.raises(DomainError):
        GaussianMoments([0, 0], [[1, 0.2], [0, 1]])


def test_canonical_forms_validate():
    with pytest.raises(DomainError):
        Attenuator(1.2, 0.1)
    with pytest.raises(DomainError):
        Amplifier(0.9, 0.1)
    with pytest.raises(DomainError):
        AdditiveNoise(-1)
