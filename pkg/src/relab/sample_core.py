"""Discrete samples and the fundamental resolution/relevance quantities.

A sample is an ordered list of opaque labels.  Everything downstream
(frontiers, clustering scores, tilted ensembles) reduces the sample first to
its frequency profile k_s and then to its degeneracy profile m_k, the number
of states observed exactly k times.  The three entropies

    resolution = -sum_s (k_s/N) ln(k_s/N)
    relevance  = -sum_k (k m_k/N) ln(k m_k/N)
    noise      = resolution - relevance

are computed in nats internally; bits and base-N are display conversions.
"""

from __future__ import annotations

import math
import random
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence, Union

import numpy as np

from .errors import BadArgument, BadColumn, BadLabel, EmptyInput

Label = Union[str, int]

#: reserved separator used when joining several table columns into one label
COLUMN_SEPARATOR = "\x1f"

BASES = ("nats", "bits", "baseN")


class RRPoint(NamedTuple):
    """A point on a resolution-relevance curve, in nats unless stated."""

    resolution: float
    relevance: float


def _check_label(token: Label) -> Label:
    if isinstance(token, str) and token == "":
        raise BadLabel("empty label token")
    return token


@dataclass(frozen=True)
class Sample:
    """Ordered list of discrete observations; order never enters the math."""

    observations: tuple

    def __init__(self, observations: Iterable[Label]):
        obs = tuple(_check_label(o) for o in observations)
        if not obs:
            raise EmptyInput("a sample needs at least one observation")
        object.__setattr__(self, "observations", obs)

    @property
    def n(self) -> int:
        return len(self.observations)


@dataclass(frozen=True)
class FrequencyProfile:
    """Map label -> number of occurrences k_s, with sum k_s = N."""

    counts: dict
    n: int

    def __post_init__(self):
        if self.n < 1 or sum(self.counts.values()) != self.n:
            raise BadArgument("counts must be positive and sum to N")


@dataclass(frozen=True)
class DegeneracyProfile:
    """Map k -> m_k (number of states seen exactly k times)."""

    degeneracies: dict
    n: int
    m: int

    def __post_init__(self):
        if sum(k * mk for k, mk in self.degeneracies.items()) != self.n:
            raise BadArgument("sum of k*m_k must equal N")
        if sum(self.degeneracies.values()) != self.m:
            raise BadArgument("sum of m_k must equal M")


@dataclass(frozen=True)
class EntropySummary:
    n: int
    m: int
    resolution: float
    relevance: float
    noise: float
    base: str = "nats"


@dataclass(frozen=True)
class CategoricalTable:
    """Rectangular table of labels; rows are sequences, columns are sites."""

    rows: tuple

    def __init__(self, rows: Iterable[Sequence[Label]]):
        rows = tuple(tuple(_check_label(t) for t in row) for row in rows)
        if not rows or not rows[0]:
            raise EmptyInput("table needs at least one row and one column")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise BadArgument("table is not rectangular")
        object.__setattr__(self, "rows", rows)

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @property
    def n_cols(self) -> int:
        return len(self.rows[0])

    def column(self, j: int) -> Sample:
        if not 0 <= j < self.n_cols:
            raise BadColumn(f"column {j} out of range")
        return Sample(row[j] for row in self.rows)


def build_frequency(sample: Sample) -> FrequencyProfile:
    """Count occurrences of every label."""
    counts = dict(Counter(sample.observations))
    return FrequencyProfile(counts=counts, n=sample.n)


def build_degeneracy(freq: FrequencyProfile) -> DegeneracyProfile:
    """Tally how many states share each frequency k."""
    deg = dict(Counter(freq.counts.values()))
    return DegeneracyProfile(degeneracies=deg, n=freq.n, m=len(freq.counts))


def degeneracy_from_counts(counts: np.ndarray) -> DegeneracyProfile:
    """Fast path from an integer count vector (zeros allowed and ignored)."""
    counts = np.asarray(counts)
    occupied = counts[counts > 0]
    if occupied.size == 0:
        raise EmptyInput("no occupied states")
    ks, mks = np.unique(occupied, return_counts=True)
    deg = {int(k): int(mk) for k, mk in zip(ks, mks)}
    return DegeneracyProfile(degeneracies=deg, n=int(occupied.sum()), m=int(occupied.size))


def resolution_nats(deg: DegeneracyProfile) -> float:
    """Plug-in entropy of the empirical state distribution, in nats."""
    n = deg.n
    return -sum(mk * (k / n) * math.log(k / n) for k, mk in deg.degeneracies.items())


def relevance_nats(deg: DegeneracyProfile) -> float:
    """Entropy of the frequency-of-frequencies distribution k*m_k/N, nats."""
    n = deg.n
    return -sum((k * mk / n) * math.log(k * mk / n) for k, mk in deg.degeneracies.items())


def _convert(value_nats: float, base: str, n: int) -> float:
    if base == "nats":
        return value_nats
    if base == "bits":
        return value_nats / math.log(2.0)
    if base == "baseN":
        return 0.0 if n == 1 else value_nats / math.log(n)
    raise BadArgument(f"unknown base {base!r}")


def summary_of_degeneracy(deg: DegeneracyProfile, base: str = "nats") -> EntropySummary:
    res = resolution_nats(deg)
    rel = relevance_nats(deg)
    return EntropySummary(
        n=deg.n,
        m=deg.m,
        resolution=_convert(res, base, deg.n),
        relevance=_convert(rel, base, deg.n),
        noise=_convert(res - rel, base, deg.n),
        base=base,
    )


def entropy_summary(sample: Sample, base: str = "nats") -> EntropySummary:
    """Resolution, relevance and noise of a sample in the requested base."""
    return summary_of_degeneracy(build_degeneracy(build_frequency(sample)), base)


def project_columns(table: CategoricalTable, columns: Sequence[int]) -> Sample:
    """Restrict each row to the chosen columns and join them into one label.

    The join uses the non-printable unit separator 0x1f; a user token
    containing it raises BadLabel to avoid silent state merging.
    """
    if not columns:
        raise BadColumn("need at least one column")
    for j in columns:
        if not 0 <= j < table.n_cols:
            raise BadColumn(f"column {j} out of range for width {table.n_cols}")
    labels = []
    for row in table.rows:
        parts = []
        for j in columns:
            tok = str(row[j])
            if COLUMN_SEPARATOR in tok:
                raise BadLabel("label token contains the reserved separator 0x1f")
            parts.append(tok)
        labels.append(COLUMN_SEPARATOR.join(parts))
    return Sample(labels)


def rank_sites(
    table: CategoricalTable,
    n: int,
    criterion: str = "conservation",
    seed: int = 0,
) -> list:
    """Pick n columns by conservation, greedy relevance, or at random.

    conservation sorts columns by ascending single-column resolution;
    greedy_relevance forward-selects the column that maximises the relevance
    of the projected sample at each step; random is a seeded shuffle.
    """
    if not 1 <= n <= table.n_cols:
        raise BadArgument(f"n={n} out of range 1..{table.n_cols}")
    cols = list(range(table.n_cols))
    if criterion == "conservation":
        ent = [entropy_summary(table.column(j)).resolution for j in cols]
        order = sorted(cols, key=lambda j: (ent[j], j))
        return order[:n]
    if criterion == "random":
        rng = random.Random(seed)
        rng.shuffle(cols)
        return cols[:n]
    if criterion == "greedy_relevance":
        chosen: list = []
        remaining = set(cols)
        for _ in range(n):
            best, best_rel = None, -1.0
            for j in sorted(remaining):
                rel = entropy_summary(project_columns(table, chosen + [j])).relevance
                if rel > best_rel + 1e-15:
                    best, best_rel = j, rel
            chosen.append(best)
            remaining.discard(best)
        return chosen
    raise BadArgument(f"unknown criterion {criterion!r}")
