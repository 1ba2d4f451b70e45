import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from pigbc.channel import IDENTITY, Channel, compose
from pigbc.errors import DegenerateError, DomainError, NotInRegionError
from pigbc.regions import (
    WITNESS_TOL,
    Regime,
    border_curve,
    border_f1,
    border_f2,
    border_line,
    classify,
    complementarity_check,
    in_high_ground,
    in_low_ground,
    lower_border,
    m_ad,
    m_eb,
    reconstruct,
    two_element_borders_amp,
    two_element_borders_att,
    upper_border,
    witness_low_ground,
)

TOL = 1e-12
REF = Channel(0.6, 0.1)


@st.composite
def non_eb(draw, x_lo=0.05, x_hi=3.0):
    x = draw(st.floats(x_lo, x_hi))
    M = draw(st.floats(0.0, 1.0)) * m_eb(x)
    return Channel(x, M)


positive = st.builds(Channel, st.floats(1e-3, 3.0), st.floats(0.0, 2.0))


@pytest.mark.parametrize("x, expected", [(0.6, 0.6), (1.5, 1.0), (0.0, 0.0)])
def test_m_eb(x, expected):
    assert m_eb(x) == expected


@pytest.mark.parametrize("x, expected", [(0.7, 0.2), (2.0, 0.5), (0.3, 0.0)])
def test_m_ad(x, expected):
    assert m_ad(x) == pytest.approx(expected, abs=TOL)


def test_classify_examples():
    v = classify(REF)
    assert not v.is_eb and v.is_ad and v.regime is Regime.NON_EB_OR_BORDER
    v = classify(Channel(0.5, 0.7))
    assert v.is_eb and v.is_ad and v.regime is Regime.DEEP_EB
    v = classify(Channel(2, 0.4))
    assert not v.is_eb and not v.is_ad
    assert (v.m_eb, v.m_ad) == (1.0, 0.5)


def test_classify_eb_border_is_not_deep():
    v = classify(Channel(0.6, 0.6))
    assert v.is_eb and v.regime is Regime.NON_EB_OR_BORDER


@given(st.builds(Channel, st.floats(0, 3), st.floats(0, 2)))
def test_eb_implies_ad(c):
    v = classify(c)
    assert v.m_ad <= v.m_eb
    if v.is_eb:
        assert v.is_ad


def test_corner_values():
    assert border_f1(REF, 0.5) == pytest.approx(0.0, abs=TOL)
    assert border_f1(REF, 1.0) == pytest.approx(0.5, abs=TOL)
    assert border_f2(REF, 1.0) == pytest.approx(1 / 6, abs=TOL)
    assert border_f2(REF, 1.2) == pytest.approx(0.0, abs=TOL)


def test_unit_reference_has_merged_corner():
    ref = Channel(1.0, 0.5)
    assert border_f1(ref, 1.0) == border_f2(ref, 1.0) == 0.5


def test_f2_needs_positive_x():
    with pytest.raises(DomainError):
        border_f2(Channel(0, 0.3), 0.5)
    with pytest.raises(DegenerateError):
        border_curve(Channel(0, 0.3))


@given(non_eb())
def test_contact_point(ref):
    assert border_f1(ref, ref.x) == pytest.approx(ref.M, abs=TOL)
    assert border_f2(ref, ref.x) == pytest.approx(ref.M, abs=TOL)
    assert in_low_ground(ref, ref) and in_high_ground(ref, ref)


@given(non_eb(), st.floats(0.0, 1.0))
def test_pieces_match_closed_forms(ref, t):
    curve = border_curve(ref)
    for lo, hi, side, label in curve.pieces:
        top = min(hi, lo + 3.0)
        xp = lo + t * (top - lo)
        want = curve.lower(xp) if side == "low" else curve.upper(xp)
        assert border_line(ref, int(label[1]), xp) == pytest.approx(want, abs=1e-11)


def test_border_line_examples():
    assert border_line(REF, 1, 0.3) == pytest.approx(0.05, abs=TOL)
    assert border_line(REF, 2, 0.8) == pytest.approx(0.3, abs=TOL)
    assert border_line(REF, 4, 2.0) == pytest.approx(0.5, abs=TOL)
    with pytest.raises(DomainError):
        border_line(REF, 1, 2.0)
    with pytest.raises(DomainError):
        border_line(REF, 5, 0.3)


def test_two_element_attenuator_curves():
    b = two_element_borders_att(0.6, 0.5)
    assert b.n1(0.3) == pytest.approx(1 / 7, abs=TOL)
    assert b.n2(0.6) == pytest.approx(0.5, abs=TOL)
    assert abs(b.n4(1e13)) < 1e-12
    for bad in (0.0, 1.0):
        with pytest.raises(DomainError):
            two_element_borders_att(bad, 0.5)


def test_two_element_amplifier_curves():
    b = two_element_borders_amp(1.5, 0.2)
    assert b.n1(3.0) == pytest.approx(0.05, abs=TOL)
    assert b.n1(1.5) == pytest.approx(0.2, abs=TOL)
    # negative value: that slice of the region is empty
    assert b.n3(0.5) == pytest.approx(-0.8, abs=TOL)
    with pytest.raises(DomainError):
        two_element_borders_amp(1.0, 0.2)


@given(st.floats(0.05, 0.95), st.floats(0.0, 2.0), st.floats(0.01, 0.99))
def test_attenuator_curves_trace_borders(eta, N, t):
    ref = Channel(eta, (1 - eta) * N)
    assume(ref.M <= m_eb(ref.x))
    b = two_element_borders_att(eta, N)
    ep = t * eta
    assert (1 - ep) * b.n1(ep) == pytest.approx(lower_border(ref, ep), abs=1e-11)
    ep = eta + t * (1 - eta)
    assert (1 - ep) * b.n2(ep) == pytest.approx(lower_border(ref, ep), abs=1e-11)


def test_membership_examples():
    assert in_low_ground(REF, Channel(0.3, 0.05))
    assert not in_low_ground(REF, Channel(0.3, 0.04))
    assert in_high_ground(REF, Channel(0.8, 0.02))
    assert not in_high_ground(REF, Channel(0.8, 0.2))
    deep = Channel(0.5, 0.7)
    assert in_low_ground(deep, Channel(0.8, 0.9))
    assert not in_low_ground(deep, Channel(0.8, 0.8))
    assert in_high_ground(deep, Channel(1.7, 0.0))


def test_zero_x_targets_and_references():
    assert in_low_ground(REF, Channel(0, 0.0))
    assert not in_high_ground(REF, Channel(0, 0.3))
    ref0 = Channel(0, 0.0)
    assert in_high_ground(ref0, Channel(2.0, 0.1))
    assert in_low_ground(ref0, Channel(0.5, 0.6))
    assert not in_low_ground(ref0, Channel(0.5, 0.5))


@given(positive, positive)
def test_complementarity(a, b):
    assert complementarity_check(a, b)


def test_complementarity_examples():
    assert complementarity_check(REF, Channel(0.8, 0.02))
    assert complementarity_check(Channel(0.7, 0.1), Channel(0.7, 0.1))


@given(st.builds(Channel, st.floats(0.01, 3), st.floats(1e-6, 2)))
def test_deep_eb_reference_rules(p):
    deep = Channel(1.3, 1.4)
    assert in_high_ground(deep, p)
    assert in_low_ground(deep, p) == (p.M > m_eb(p.x))


def test_witness_examples():
    w = witness_low_ground(REF, Channel(0.3, 0.05))
    assert w.pre == IDENTITY and w.post == Channel(0.5, 0.0) and w.residual == 0.0

    w = witness_low_ground(REF, Channel(0.8, 0.3))
    assert w.post == IDENTITY
    assert w.pre.x == pytest.approx(4 / 3, abs=TOL) and w.pre.M == pytest.approx(0.0, abs=TOL)
    assert w.residual <= TOL

    w = witness_low_ground(Channel(0.5, 0.7), Channel(0.8, 0.9))
    assert w.mid is not None and w.mid.x < 0.5
    assert w.residual <= WITNESS_TOL


def test_witness_rejects_outside_points():
    with pytest.raises(NotInRegionError):
        witness_low_ground(REF, Channel(0.9, 0.0))
    with pytest.raises(DegenerateError):
        witness_low_ground(Channel(0.0, 0.0), Channel(0.5, 0.6))


def test_witness_to_zero_x_target():
    w = witness_low_ground(REF, Channel(0.0, 0.4))
    assert reconstruct(w.pre, REF, w.post) == Channel(0.0, 0.4)


@st.composite
def low_pairs(draw):
    ref = draw(st.builds(Channel, st.floats(0.01, 3), st.floats(0, 2)))
    xp = draw(st.floats(0.01, 3.0))
    base = m_eb(xp) if (ref.M > m_eb(ref.x)) else max(lower_border(ref, xp), 0.0)
    Mp = base + draw(st.floats(1e-9, 1.5))
    return ref, Channel(xp, Mp)


@given(low_pairs())
def test_witness_reconstructs(pair):
    ref, p = pair
    assume(in_low_ground(ref, p))
    w = witness_low_ground(ref, p)
    assert w.residual <= WITNESS_TOL
    assert w.pre.M >= 0 and w.post.M >= 0
    rec = compose(compose(w.pre, ref), w.post)
    assert abs(rec.x - p.x) <= WITNESS_TOL and abs(rec.M - p.M) <= WITNESS_TOL
    if ref.M <= m_eb(ref.x):
        assert w.single_factor


@given(non_eb(), st.floats(0.01, 3.0), st.floats(0.0, 1.0))
def test_high_ground_points_reach_reference(ref, xp, t):
    top = upper_border(ref, xp)
    assume(top >= 0)
    p = Channel(xp, t * top)
    assert in_low_ground(p, ref)
    w = witness_low_ground(p, ref)
    assert w.residual <= WITNESS_TOL


def test_border_curve_piece_lookup():
    curve = border_curve(Channel(1.15, 0.1))
    assert curve.piece_at(0.5, "high")[3] == "M3"
    assert curve.piece_at(2.0, "low")[3] == "M1"
    with pytest.raises(DomainError):
        curve.piece_at(-1.0, "low")


def test_regions_nest_along_chains():
    rng = np.random.default_rng(11)
    for _ in range(200):
        ref = Channel(rng.uniform(0.05, 2.5), rng.uniform(0, 1.2))
        p = Channel(rng.uniform(0.01, 2.5), rng.uniform(0, 1.5))
        q = Channel(rng.uniform(0.01, 2.5), rng.uniform(0, 1.5))
        if in_low_ground(ref, p) and in_low_ground(p, q):
            assert in_low_ground(ref, q)
        if in_high_ground(ref, p) and in_high_ground(p, q):
            assert in_high_ground(ref, q)
