"""Known discrepancies between published A-index example values and the formula.

The data lives in ``errata.json`` next to this module so other tools can read
it without importing the package.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .metrics import DEFAULT_WEIGHTS, MetricInputs, WeightVector


@dataclass(frozen=True)
class Erratum:
    key: str
    inputs: MetricInputs
    published: float
    formula: float
    note: str

    def describe(self) -> str:
        return (
            f"published example value {self.published:g} for these inputs differs from "
            f"the formula's {self.formula:.3f} ({self.key}): {self.note}"
        )


@lru_cache(maxsize=None)
def load_errata() -> tuple[Erratum, ...]:
    raw = json.loads(resources.files(__package__).joinpath("errata.json").read_text(encoding="utf-8"))
    return tuple(
        Erratum(e["key"], MetricInputs.from_sequence(e["inputs"]), e["published"], e["formula"], e["note"])
        for e in raw["entries"]
    )


def lookup(inputs: MetricInputs, weights: WeightVector = DEFAULT_WEIGHTS) -> list[Erratum]:
    """Errata whose inputs match ``inputs``; published values assume default weights."""
    if weights != DEFAULT_WEIGHTS:
        return []
    return [e for e in load_errata() if e.inputs == inputs]
