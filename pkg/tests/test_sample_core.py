import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from relab import (
    BadArgument,
    BadColumn,
    BadLabel,
    CategoricalTable,
    DegeneracyProfile,
    EmptyInput,
    Sample,
    build_degeneracy,
    build_frequency,
    degeneracy_from_counts,
    entropy_summary,
    project_columns,
    rank_sites,
    summary_of_degeneracy,
)
from relab.sample_core import relevance_nats, resolution_nats

labels = st.one_of(st.integers(0, 50), st.text(min_size=1, max_size=3))


def test_known_resolution_aab():
    s = entropy_summary(Sample(["a", "a", "b"]))
    assert s.resolution == pytest.approx(-(2 / 3) * math.log(2 / 3) - (1 / 3) * math.log(1 / 3), abs=1e-15)
    # k=2 once, k=1 once: relevance = -(2/3)ln(2/3) - (1/3)ln(1/3) as well
    assert s.relevance == pytest.approx(s.resolution, abs=1e-15)
    assert s.noise == pytest.approx(0.0, abs=1e-15)


def test_all_distinct_and_all_equal():
    distinct = entropy_summary(Sample(range(7)))
    assert distinct.resolution == pytest.approx(math.log(7), abs=1e-12)
    assert distinct.relevance == pytest.approx(0.0, abs=1e-15)
    constant = entropy_summary(Sample(["x"] * 9))
    assert constant.resolution == 0.0
    assert constant.relevance == 0.0


@given(st.lists(labels, min_size=1, max_size=200))
@settings(max_examples=200, deadline=None)
def test_entropy_identity_and_bounds(obs):
    s = entropy_summary(Sample(obs))
    assert abs(s.resolution - (s.relevance + s.noise)) < 1e-12
    assert -1e-15 <= s.relevance <= s.resolution + 1e-12
    assert s.resolution <= math.log(len(obs)) + 1e-12


@given(st.lists(labels, min_size=1, max_size=100))
@settings(max_examples=100, deadline=None)
def test_order_invariance(obs):
    a = entropy_summary(Sample(obs))
    b = entropy_summary(Sample(list(reversed(obs))))
    assert a.resolution == pytest.approx(b.resolution, abs=1e-12)
    assert a.relevance == pytest.approx(b.relevance, abs=1e-12)
    assert a.noise == pytest.approx(b.noise, abs=1e-12)


def test_base_conversion():
    s = Sample(["a", "a", "b", "c"])
    nats = entropy_summary(s, base="nats")
    bits = entropy_summary(s, base="bits")
    base_n = entropy_summary(s, base="baseN")
    assert bits.resolution == pytest.approx(nats.resolution / math.log(2), abs=1e-12)
    assert base_n.resolution == pytest.approx(nats.resolution / math.log(4), abs=1e-12)
    single = entropy_summary(Sample(["only"]), base="baseN")
    assert single.resolution == 0.0


def test_degeneracy_pipeline_matches_direct_counts():
    s = Sample([1, 1, 1, 2, 2, 3, 4, 4])
    deg = build_degeneracy(build_frequency(s))
    assert deg.degeneracies == {3: 1, 2: 2, 1: 1}
    arr = degeneracy_from_counts(np.array([3, 2, 2, 1]))
    assert arr.degeneracies == deg.degeneracies
    assert resolution_nats(deg) == pytest.approx(entropy_summary(s).resolution, abs=1e-15)
    assert relevance_nats(deg) == pytest.approx(entropy_summary(s).relevance, abs=1e-15)


def test_degeneracy_validation():
    with pytest.raises(BadArgument):
        DegeneracyProfile(degeneracies={2: 1}, n=3, m=1)
    with pytest.raises(BadArgument):
        DegeneracyProfile(degeneracies={2: 1}, n=2, m=2)


def test_empty_and_bad_labels():
    with pytest.raises(EmptyInput):
        Sample([])
    with pytest.raises(BadLabel):
        Sample(["a", ""])


def test_project_columns_and_collision():
    table = CategoricalTable([["a", "x"], ["a", "y"], ["b", "x"]])
    joined = project_columns(table, [0, 1])
    assert joined.n == 3
    assert len(set(joined.observations)) == 3
    with pytest.raises(BadColumn):
        table.column(2)
    # separator collision must be detected, not silently merged
    bad = CategoricalTable([["a\x1fx", "y"], ["a", "x\x1fy"]])
    with pytest.raises(BadLabel):
        project_columns(bad, [0, 1])


def test_rank_sites_criteria():
    rows = [[i % 2, i % 3, 0] for i in range(12)]
    table = CategoricalTable(rows)
    for criterion in ("conservation", "greedy_relevance", "random"):
        order = rank_sites(table, 3, criterion=criterion, seed=1)
        assert sorted(order) == [0, 1, 2]
    # conservation ranks the constant column as most conserved
    cons = rank_sites(table, 3, criterion="conservation")
    assert cons[0] == 2
    assert rank_sites(table, 2, criterion="random", seed=7) == rank_sites(
        table, 2, criterion="random", seed=7
    )
    with pytest.raises(BadArgument):
        rank_sites(table, 0)
