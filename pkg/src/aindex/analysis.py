"""Sweeps, comparisons and the collaborative/single-author gap diagnostic."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .metrics import (
    DEFAULT_WEIGHTS,
    FIELDS,
    InvalidInputsError,
    MetricInputs,
    WeightVector,
    a_index,
    validate_inputs,
)

__all__ = [
    "SweepPoint",
    "SweepSeries",
    "ComparisonRow",
    "GapReport",
    "sweep",
    "compare",
    "gap_report",
    "renormalize_weights",
]


@dataclass(frozen=True)
class SweepPoint:
    value: int
    a_index: float
    mu: tuple[float, ...]


@dataclass(frozen=True)
class SweepSeries:
    field: str
    points: tuple[SweepPoint, ...]
    rejected: tuple[tuple[int, tuple[str, ...]], ...] = ()  # (value, violations)

    @property
    def values(self) -> list[int]:
        return [p.value for p in self.points]

    @property
    def deltas(self) -> list[float]:
        return [b.a_index - a.a_index for a, b in zip(self.points, self.points[1:])]


def sweep(
    base: MetricInputs,
    field_name: str,
    values: Sequence[int],
    weights: WeightVector = DEFAULT_WEIGHTS,
    strict: bool = False,
) -> SweepSeries:
    """Vary one of n1..n6 over ``values`` with every other input held at ``base``.

    Points are ordered by value. A value that makes the inputs inconsistent is
    recorded in ``rejected`` and skipped, unless ``strict`` is set, in which
    case it raises :class:`InvalidInputsError`.
    """
    if field_name not in FIELDS:
        raise ValueError(f"unknown field {field_name!r}; expected one of {', '.join(FIELDS)}")
    points, rejected = [], []
    for value in sorted(values):
        inputs = base.replace(**{field_name: value})
        problems = validate_inputs(inputs)
        if problems:
            if strict:
                raise InvalidInputsError([f"{field_name}={value}: {p}" for p in problems])
            rejected.append((value, tuple(problems)))
            continue
        report = a_index(inputs, weights)
        points.append(SweepPoint(value, report.a_index, report.mu))
    return SweepSeries(field_name, tuple(points), tuple(rejected))


@dataclass(frozen=True)
class ComparisonRow:
    rank: int
    label: str
    inputs: MetricInputs
    mu: tuple[float, ...]
    a_index: float
    normalized: float


def compare(
    entries: Sequence[tuple[str, MetricInputs]],
    weights: WeightVector = DEFAULT_WEIGHTS,
) -> list[ComparisonRow]:
    """Rank labelled inputs by A-index, highest first; equal scores keep input order."""
    if not entries:
        raise ValueError("compare needs at least one entry")
    labels = [label for label, _ in entries]
    dupes = sorted({label for label in labels if labels.count(label) > 1})
    if dupes:
        raise ValueError(f"duplicate label(s): {', '.join(dupes)}")
    reports = [(label, a_index(inputs, weights)) for label, inputs in entries]
    order = sorted(range(len(reports)), key=lambda i: -reports[i][1].a_index)
    return [
        ComparisonRow(
            rank=rank,
            label=reports[i][0],
            inputs=reports[i][1].inputs,
            mu=reports[i][1].mu,
            a_index=reports[i][1].a_index,
            normalized=reports[i][1].normalized,
        )
        for rank, i in enumerate(order, 1)
    ]


@dataclass(frozen=True)
class GapReport:
    h_all: int
    h_single: int
    h_gap: int
    a_full: float
    a_single_terms: float
    a_collab_terms: float

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def gap_report(inputs: MetricInputs, weights: WeightVector = DEFAULT_WEIGHTS) -> GapReport:
    """Contrast overall and single-author h, and split the A-index into its
    collaborative (mu1..mu3) and single-author (mu4..mu6) halves."""
    report = a_index(inputs, weights)
    return GapReport(
        h_all=inputs.n3,
        h_single=inputs.n6,
        h_gap=inputs.n3 - inputs.n6,
        a_full=report.a_index,
        a_single_terms=report.single_terms,
        a_collab_terms=report.collab_terms,
    )


def renormalize_weights(weights: WeightVector) -> WeightVector:
    total = weights.total
    if total <= 0:
        raise ValueError("cannot renormalize all-zero weights")
    scaled = [w * 100.0 / total for w in weights.weights]
    return WeightVector.from_weights(scaled, weights.thresholds)
