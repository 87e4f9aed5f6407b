"""Uniform result record for every dependence measure."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

MEASURE_IDS = ("PC", "SC", "DC", "MIC", "MI", "RSI_SYNERGY", "PPS", "IG")

VALUE_RANGES: dict[str, tuple[float, float]] = {
    "PC": (-1.0, 1.0),
    "SC": (-1.0, 1.0),
    "DC": (0.0, 1.0),
    "MIC": (0.0, 1.0),
    "MI": (0.0, math.inf),
    "RSI_SYNERGY": (-math.inf, math.inf),
    "PPS": (0.0, 1.0),
    "IG": (0.0, math.inf),
}


@dataclass(frozen=True)
class MeasureResult:
    """A measure value plus the context needed to interpret it.

    Degenerate evaluations (constant input, too few samples, incompatible
    arity) are flagged rather than raised: value is NaN, degenerate is True
    and params carries the reason.
    """

    measure_id: str
    value: float
    sample_size: int
    params: dict = field(default_factory=dict)
    degenerate: bool = False

    def __post_init__(self):
        if self.measure_id not in MEASURE_IDS:
            raise ValueError(f"unknown measure id {self.measure_id!r}")
        if not self.degenerate:
            lo, hi = self.value_range
            if math.isnan(self.value) or not (lo <= self.value <= hi):
                raise ValueError(
                    f"{self.measure_id} value {self.value} outside [{lo}, {hi}]"
                )

    @property
    def value_range(self) -> tuple[float, float]:
        return VALUE_RANGES[self.measure_id]


def degenerate_result(measure_id: str, sample_size: int, reason: str, **params) -> MeasureResult:
    """Build the flagged NaN result used for inputs a measure cannot score."""
    merged = dict(params)
    merged["reason"] = reason
    return MeasureResult(
        measure_id=measure_id,
        value=math.nan,
        sample_size=sample_size,
        params=merged,
        degenerate=True,
    )
