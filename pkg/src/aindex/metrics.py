"""Citation indices and the composite A-index.

Everything here is a pure function of its arguments. The A-index is the sum
of six weighted saturating terms::

    mu1 = w1 * r(n1)                         papers, all
    mu2 = w2 * r(max(0, (n2 - t2) / s2))     citations, all
    mu3 = w3 * r(n3)                         h-index, all
    mu4 = w4 * r(n4)                         papers, single-author
    mu5 = w5 * r(max(0, (n5 - t5) / s5))     citations, single-author
    mu6 = w6 * r(n6)                         h-index, single-author

with ``r(x) = x / (1 + x)``.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, fields
from numbers import Integral, Real
from typing import Iterable, Sequence

__all__ = [
    "FIELDS",
    "DEFAULT_WEIGHTS",
    "InvalidInputsError",
    "MetricInputs",
    "WeightVector",
    "IndexReport",
    "saturating_ratio",
    "h_index",
    "g_index",
    "asf",
    "mu_linear",
    "mu_thresholded",
    "validate_inputs",
    "a_index",
]

FIELDS = ("n1", "n2", "n3", "n4", "n5", "n6")


class InvalidInputsError(ValueError):
    """Raised when MetricInputs break one or more of their invariants."""

    def __init__(self, violations: Sequence[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


def _is_count(value) -> bool:
    return isinstance(value, Integral) and not isinstance(value, bool) and value >= 0


def _check_citations(citations: Iterable[int]) -> list[int]:
    counts = list(citations)
    for i, c in enumerate(counts):
        if not _is_count(c):
            raise ValueError(f"citation count at position {i} must be a nonnegative integer, got {c!r}")
    return counts


def saturating_ratio(x: float) -> float:
    """Map ``x >= 0`` onto ``[0, 1)`` via ``x / (1 + x)``."""
    if not isinstance(x, Real) or math.isnan(x) or x < 0:
        raise ValueError(f"saturating_ratio needs a nonnegative number, got {x!r}")
    if math.isinf(x):
        raise ValueError("saturating_ratio needs a finite number")
    return x / (1.0 + x)


def h_index(citations: Iterable[int]) -> int:
    """Largest h such that h of the papers have at least h citations each."""
    ranked = sorted(_check_citations(citations), reverse=True)
    h = 0
    for rank, c in enumerate(ranked, 1):
        if c < rank:
            break
        h = rank
    return h


def g_index(citations: Iterable[int]) -> int:
    """Largest g such that the g most cited papers hold at least g**2 citations.

    g never exceeds the number of papers.
    """
    ranked = sorted(_check_citations(citations), reverse=True)
    g = 0
    total = 0
    for rank, c in enumerate(ranked, 1):
        total += c
        if total >= rank * rank:
            g = rank
    return g


def asf(h: int) -> float:
    """Percentage transform ``100 * h / (h + 1)`` of an h-index."""
    if not _is_count(h):
        raise ValueError(f"asf needs a nonnegative integer h-index, got {h!r}")
    return h / (h + 1) * 100.0


def mu_linear(n: int, weight: float) -> float:
    if not _is_count(n):
        raise ValueError(f"count must be a nonnegative integer, got {n!r}")
    if weight < 0:
        raise ValueError(f"weight must be nonnegative, got {weight!r}")
    return weight * saturating_ratio(n)


def mu_thresholded(n: int, threshold: float, scale: float, weight: float) -> float:
    """Weighted saturating term that stays at zero until ``n`` passes ``threshold``."""
    if not _is_count(n):
        raise ValueError(f"count must be a nonnegative integer, got {n!r}")
    if scale <= 0:
        raise ValueError(f"scale must be positive, got {scale!r}")
    if weight < 0:
        raise ValueError(f"weight must be nonnegative, got {weight!r}")
    return weight * saturating_ratio(max(0.0, (n - threshold) / scale))


@dataclass(frozen=True)
class MetricInputs:
    """The six per-author scalars feeding the A-index.

    Construction does not validate; use :func:`validate_inputs` or let
    :func:`a_index` reject inconsistent values.
    """

    n1: int = 0  # papers, all
    n2: int = 0  # citations, all
    n3: int = 0  # h-index, all
    n4: int = 0  # papers, single-author
    n5: int = 0  # citations, single-author
    n6: int = 0  # h-index, single-author

    @classmethod
    def from_sequence(cls, values: Sequence[int]) -> "MetricInputs":
        if len(values) != 6:
            raise ValueError(f"expected 6 values n1..n6, got {len(values)}")
        return cls(*values)

    def as_tuple(self) -> tuple[int, ...]:
        return tuple(getattr(self, f) for f in FIELDS)

    def replace(self, **changes) -> "MetricInputs":
        return MetricInputs(**{**asdict(self), **changes})

    def to_dict(self) -> dict:
        return asdict(self)


# pairs (smaller, larger) that must satisfy smaller <= larger
_ORDER_RULES = (("n4", "n1"), ("n5", "n2"), ("n3", "n1"), ("n6", "n4"), ("n6", "n3"))


def validate_inputs(inputs: MetricInputs) -> list[str]:
    """Return a list of violated invariants; empty when ``inputs`` are consistent."""
    violations = []
    bad = set()
    for name in FIELDS:
        value = getattr(inputs, name)
        if not _is_count(value):
            bad.add(name)
            violations.append(f"{name} must be a nonnegative integer (got {value!r})")
    for small, large in _ORDER_RULES:
        if small in bad or large in bad:
            continue
        if getattr(inputs, small) > getattr(inputs, large):
            violations.append(
                f"{small} > {large}: {small}={getattr(inputs, small)} exceeds {large}={getattr(inputs, large)}"
            )
    return violations


@dataclass(frozen=True)
class WeightVector:
    """Term weights plus the threshold/scale pairs of the two citation terms."""

    w1: float = 20.0
    w2: float = 10.0
    w3: float = 14.0
    w4: float = 14.0
    w5: float = 12.0
    w6: float = 30.0
    t2: float = 100.0
    s2: float = 200.0
    t5: float = 70.0
    s5: float = 50.0

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not isinstance(value, Real) or isinstance(value, bool) or not math.isfinite(value):
                raise ValueError(f"{f.name} must be a finite number, got {value!r}")
        for i, w in enumerate(self.weights, 1):
            if w < 0:
                raise ValueError(f"w{i} must be nonnegative, got {w!r}")
        if self.s2 <= 0 or self.s5 <= 0:
            raise ValueError("scales s2 and s5 must be positive")

    @classmethod
    def from_weights(cls, weights: Sequence[float], thresholds: Sequence[float] | None = None) -> "WeightVector":
        if len(weights) != 6:
            raise ValueError(f"expected 6 weights, got {len(weights)}")
        kwargs = {f"w{i}": float(w) for i, w in enumerate(weights, 1)}
        if thresholds is not None:
            if len(thresholds) != 4:
                raise ValueError(f"expected 4 threshold values t2,s2,t5,s5, got {len(thresholds)}")
            kwargs.update(zip(("t2", "s2", "t5", "s5"), map(float, thresholds)))
        return cls(**kwargs)

    @property
    def weights(self) -> tuple[float, ...]:
        return (self.w1, self.w2, self.w3, self.w4, self.w5, self.w6)

    @property
    def thresholds(self) -> tuple[float, ...]:
        return (self.t2, self.s2, self.t5, self.s5)

    @property
    def total(self) -> float:
        return math.fsum(self.weights)

    def to_dict(self) -> dict:
        return asdict(self)


DEFAULT_WEIGHTS = WeightVector()


@dataclass(frozen=True)
class IndexReport:
    a_index: float
    mu: tuple[float, ...]
    h_all: int
    asf: float
    inputs: MetricInputs
    weights: WeightVector = field(default=DEFAULT_WEIGHTS)
    g_all: int | None = None  # needs the per-paper citation list

    @property
    def normalized(self) -> float:
        """A-index rescaled as if the weights summed to 100."""
        total = self.weights.total
        return self.a_index * 100.0 / total if total > 0 else 0.0

    @property
    def collab_terms(self) -> float:
        return self.mu[0] + self.mu[1] + self.mu[2]

    @property
    def single_terms(self) -> float:
        return self.mu[3] + self.mu[4] + self.mu[5]

    def to_dict(self) -> dict:
        return {
            "a_index": self.a_index,
            "normalized": self.normalized,
            "mu": list(self.mu),
            "h_all": self.h_all,
            "g_all": self.g_all,
            "asf": self.asf,
            "inputs": self.inputs.to_dict(),
            "weights": self.weights.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "IndexReport":
        return cls(
            a_index=float(data["a_index"]),
            mu=tuple(float(m) for m in data["mu"]),
            h_all=int(data["h_all"]),
            g_all=None if data.get("g_all") is None else int(data["g_all"]),
            asf=float(data["asf"]),
            inputs=MetricInputs(**data["inputs"]),
            weights=WeightVector(**data["weights"]),
        )


def a_index(
    inputs: MetricInputs,
    weights: WeightVector = DEFAULT_WEIGHTS,
    citations: Iterable[int] | None = None,
) -> IndexReport:
    """Evaluate the six terms for ``inputs`` and sum them.

    When the per-paper ``citations`` are supplied the report also carries the
    g-index; the h-index and AsF come from ``inputs.n3``.
    """
    violations = validate_inputs(inputs)
    if violations:
        raise InvalidInputsError(violations)
    w = weights
    mu = (
        mu_linear(inputs.n1, w.w1),
        mu_thresholded(inputs.n2, w.t2, w.s2, w.w2),
        mu_linear(inputs.n3, w.w3),
        mu_linear(inputs.n4, w.w4),
        mu_thresholded(inputs.n5, w.t5, w.s5, w.w5),
        mu_linear(inputs.n6, w.w6),
    )
    return IndexReport(
        a_index=sum(mu),
        mu=mu,
        h_all=inputs.n3,
        g_all=None if citations is None else g_index(citations),
        asf=asf(inputs.n3),
        inputs=inputs,
        weights=weights,
    )
