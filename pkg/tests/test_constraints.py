import pytest
from hypothesis import given, strategies as st

from taxoscope.constraints import (
    CATEGORY_ORDER,
    ConstraintProfile,
    EnvironmentalObjective,
    Granularity,
    ProcessDimension,
    ProfileError,
)

from anchor_fixture import EXPECTED_CATEGORY_TOTALS, UNIT_PROFILES, profile_for


profiles = st.builds(
    ConstraintProfile,
    **{slot: st.integers(min_value=0, max_value=10_000) for slot in CATEGORY_ORDER},
)


def test_serialization_labels_are_exact():
    assert [d.value for d in ProcessDimension] == [
        "control-flow",
        "temporal",
        "resource",
        "data",
    ]
    assert [g.value for g in Granularity] == ["within_activities", "between_activities"]
    assert len(EnvironmentalObjective) == 6


def test_negative_count_rejected():
    with pytest.raises(ProfileError):
        ConstraintProfile(cf_within=-1)


def test_non_integer_count_rejected():
    with pytest.raises(ProfileError):
        ConstraintProfile(cf_within=1.5)


def test_add_identity_and_doubling():
    p = ConstraintProfile(cf_within=2, data_between=3, irrelevant=4)
    assert ConstraintProfile.zero() + p == p
    doubled = p + p
    assert doubled.as_flat_dict() == {k: 2 * v for k, v in p.as_flat_dict().items()}


def test_total_zero_profile():
    assert ConstraintProfile.zero().total() == 0
    assert ConstraintProfile.zero().relevant() == 0


def test_only_irrelevant_has_zero_relevant():
    assert ConstraintProfile(irrelevant=5).relevant() == 0


@given(profiles)
def test_total_matches_naive_loop(p):
    # independent oracle: re-sum the slots one by one
    expected = 0
    for slot in CATEGORY_ORDER:
        expected += getattr(p, slot)
    assert p.total() == expected


@given(profiles, profiles)
def test_add_is_total_homomorphism(a, b):
    assert (a + b).total() == a.total() + b.total()


@given(profiles)
def test_relevant_plus_irrelevant_is_total(p):
    assert p.relevant() + p.irrelevant == p.total()


@given(profiles)
def test_nested_round_trip(p):
    assert ConstraintProfile.from_nested(p.to_nested()) == p


def test_anchor_fixture_sums():
    total = ConstraintProfile.zero()
    for objective, practice_id, kind in UNIT_PROFILES:
        total = total + profile_for(objective, practice_id, kind)
    assert total.as_flat_dict() == EXPECTED_CATEGORY_TOTALS
    assert total.total() == 1636
    assert total.relevant() == 1313
