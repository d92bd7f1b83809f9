import math

import pytest
from hypothesis import given, settings, strategies as st

from eprcert.errors import DirectionMismatch, EmptyInput
from eprcert.monotones import certify, combine_dofs
from eprcert.witness import SteeringAssessment


def sa(s, direction="A_given_B", relation="coarse_grained"):
    return SteeringAssessment(s, 0.0, s, direction, relation)


def pair(s_ab, s_ba, relation="coarse_grained"):
    return certify(sa(s_ab, relation=relation), sa(s_ba, "B_given_A", relation))


class TestCertify:
    def test_symmetric(self):
        c = pair(-3.5, -3.5)
        assert c.ef_ere_esq_lower == 3.5 and c.ed_lower == 3.5 and c.ed_certified

    def test_asymmetric(self):
        c = pair(-2.0, 1.0)
        assert c.ef_ere_esq_lower == 2.0
        assert c.ed_lower == pytest.approx(0.5, abs=1e-15)

    def test_nothing_certified(self):
        c = pair(0.3, 0.2)
        assert c.ef_ere_esq_lower == 0.0 and c.ed_lower == 0.0 and c.vacuous
        assert c.ed_raw_mean == pytest.approx(-0.25)

    def test_single_direction_leaves_ed_uncertified(self):
        c = certify(sa(-1.5))
        assert c.ef_ere_esq_lower == 1.5
        assert c.ed_lower == 0.0 and not c.ed_certified and c.s_ba_upper is None

    def test_mismatched_relations(self):
        with pytest.raises(DirectionMismatch):
            certify(sa(-1.0), sa(-1.0, "B_given_A", "hybrid"))

    def test_same_direction_twice(self):
        with pytest.raises(DirectionMismatch):
            certify(sa(-1.0), sa(-1.0))

    def test_to_dict(self):
        d = pair(-2.0, 1.0).to_dict()
        assert d["ef_ere_esq_lower"] == 2.0 and d["relation_ids"] == ["coarse_grained"]
        assert d["per_dof_contributions"][0]["label"] == "dof"


class TestCombine:
    def test_two_transverse_dimensions(self):
        c = combine_dofs([certify(sa(-3.504), label="x"), certify(sa(-3.504), label="y")])
        assert c.ef_ere_esq_lower == pytest.approx(7.008, abs=1e-12)
        assert [p.label for p in c.per_dof_contributions] == ["x", "y"]

    def test_zero_is_identity(self):
        base = pair(-2.0, -1.0)
        c = combine_dofs([base, pair(0.4, 0.1)])
        assert c.ef_ere_esq_lower == base.ef_ere_esq_lower
        assert c.ed_lower == base.ed_lower

    def test_spatial_plus_polarization(self):
        spatial = certify(sa(-3.5, relation="hybrid"), label="spatial")
        spin = certify(sa(-0.8, relation="discrete_memory"), label="polarization")
        c = combine_dofs([spatial, spin])
        assert c.ef_ere_esq_lower == pytest.approx(4.3, abs=1e-12)
        assert c.relation_ids == ("hybrid", "discrete_memory")

    def test_empty(self):
        with pytest.raises(EmptyInput):
            combine_dofs([])

    def test_ed_needs_both_directions_everywhere(self):
        c = combine_dofs([pair(-1.0, -1.0), certify(sa(-1.0))])
        assert not c.ed_certified and c.ed_lower == 0.0
        assert c.ef_ere_esq_lower == 2.0


s_values = st.floats(-20, 20, allow_nan=False)


@settings(max_examples=300, deadline=None, derandomize=True)
@given(s_values, s_values)
def test_clamping_and_ordering(s_ab, s_ba):
    c = pair(s_ab, s_ba)
    assert c.ef_ere_esq_lower >= 0.0 and c.ed_lower >= 0.0
    assert c.ef_ere_esq_lower >= c.ed_lower
    assert c.ef_ere_esq_lower == max(0.0, -s_ab, -s_ba)


certs = st.builds(pair, s_values, s_values)


@settings(max_examples=200, deadline=None, derandomize=True)
@given(certs, certs, certs)
def test_combine_is_commutative_and_associative(a, b, c):
    left = combine_dofs([combine_dofs([a, b]), c])
    right = combine_dofs([a, combine_dofs([b, c])])
    flipped = combine_dofs([c, b, a])
    for x in (right, flipped):
        assert x.ef_ere_esq_lower == left.ef_ere_esq_lower
        assert x.ed_lower == left.ed_lower
    assert left.ef_ere_esq_lower == math.fsum(
        [a.ef_ere_esq_lower, b.ef_ere_esq_lower, c.ef_ere_esq_lower])
