from fractions import Fraction

import pytest
from hypothesis import strategies as st

from avrunoff import witnesses
from avrunoff.profiles import (
    ApprovalBallot,
    ApprovalProfile,
    RankedBallot,
    RankedProfile,
)


@pytest.fixture
def spectrum() -> ApprovalProfile:
    return witnesses.SPECTRUM_PROFILE


@pytest.fixture
def spectrum_ranked() -> RankedProfile:
    return witnesses.SPECTRUM_RANKED


def small_weights(fractional=False):
    if fractional:
        return st.builds(
            Fraction, st.integers(0, 6), st.integers(1, 4)
        )
    return st.integers(0, 4)


@st.composite
def approval_profiles(draw, max_m=5, max_n=6, fractional=False):
    m = draw(st.integers(2, max_m))
    n = draw(st.integers(1, max_n))
    ballots = []
    for _ in range(n):
        approved = draw(st.sets(st.integers(0, m - 1), max_size=m))
        weight = draw(small_weights(fractional))
        ballots.append(ApprovalBallot(approved, weight))
    return ApprovalProfile(m, ballots)


@st.composite
def ranked_profiles(draw, max_m=5, max_n=6, unit_weights=False):
    m = draw(st.integers(2, max_m))
    n = draw(st.integers(1, max_n))
    ballots = []
    for _ in range(n):
        ranking = draw(st.permutations(range(m)))
        t = draw(st.integers(0, m))
        weight = 1 if unit_weights else draw(st.integers(1, 3))
        ballots.append(RankedBallot.from_threshold(ranking, t, weight))
    return RankedProfile(m, ballots)


@st.composite
def permutations_of(draw, m):
    return draw(st.permutations(range(m)))
