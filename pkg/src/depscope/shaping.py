"""Sliding-window shaping: cut a frame into past-feature / future-target samples.

Each sample anchors at a row t and carries the W most recent feature rows
(oldest first) plus the H target values strictly after t, so feature and
target rows can never overlap.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .frame import TimeSeriesFrame

PAIRING_MODES = ("pointwise", "joint_horizon")


@dataclass(frozen=True)
class WindowSample:
    """One anchored sample: x_block rows cover [anchor-W+1, anchor], y_horizon covers [anchor+1, anchor+H]."""

    anchor: int
    anchor_time: np.datetime64
    x_block: np.ndarray  # (W, F), oldest row first
    y_horizon: np.ndarray  # (H,)

    @property
    def window_width(self) -> int:
        return int(self.x_block.shape[0])

    @property
    def horizon(self) -> int:
        return int(self.y_horizon.shape[0])


def window_count(length: int, window: int, step: int, horizon: int) -> int:
    """Number of samples a frame of the given length yields: floor((T-W-H)/N)+1, or 0 when too short."""
    if length < window + horizon:
        return 0
    return (length - window - horizon) // step + 1


@dataclass(frozen=True)
class ShapedDataset:
    """Ordered window samples over fixed feature columns and one target column."""

    frame: TimeSeriesFrame = field(repr=False)
    feature_columns: tuple[str, ...]
    target_column: str
    window_width: int
    step: int
    horizon: int

    @property
    def format(self) -> str:
        """X:Y for a single feature column, S:Y for a feature set."""
        return "X:Y" if len(self.feature_columns) == 1 else "S:Y"

    @cached_property
    def anchors(self) -> np.ndarray:
        count = window_count(len(self.frame), self.window_width, self.step, self.horizon)
        return self.window_width - 1 + self.step * np.arange(count, dtype=np.int64)

    @cached_property
    def samples(self) -> tuple[WindowSample, ...]:
        w, h = self.window_width, self.horizon
        feats = np.column_stack([self.frame.column(c) for c in self.feature_columns])
        target = self.frame.column(self.target_column)
        ts = self.frame.timestamps
        return tuple(
            WindowSample(
                anchor=int(a),
                anchor_time=ts[a],
                x_block=feats[a - w + 1 : a + 1],
                y_horizon=target[a + 1 : a + 1 + h],
            )
            for a in self.anchors
        )

    def __len__(self) -> int:
        return int(self.anchors.shape[0])

    def __iter__(self):
        return iter(self.samples)


def make_sliding_windows(
    frame: TimeSeriesFrame,
    feature_columns,
    target_column: str,
    window_width: int,
    step: int,
    horizon: int,
) -> ShapedDataset:
    """Shape a frame into anchored window samples on a fixed anchor grid.

    Anchors start at row W-1 and advance by the step; a sample exists only
    when its full horizon fits inside the frame, which gives exactly
    floor((T-W-H)/N)+1 samples for T >= W+H and none otherwise.
    """
    feature_columns = tuple(feature_columns)
    if not feature_columns:
        raise ValueError("feature_columns must name at least one column")
    if window_width < 1 or step < 1 or horizon < 1:
        raise ValueError("window_width, step and horizon must all be >= 1")
    for name in feature_columns + (target_column,):
        frame.column(name)  # raises KeyError on unknown names
    return ShapedDataset(
        frame=frame,
        feature_columns=feature_columns,
        target_column=target_column,
        window_width=window_width,
        step=step,
        horizon=horizon,
    )


def pair_arrays(sample: WindowSample, mode: str = "pointwise") -> tuple[np.ndarray, np.ndarray]:
    """Array form of pair_samples: xs is (W, F); ys is (W,) pointwise or (W, H) joint."""
    if mode not in PAIRING_MODES:
        raise ValueError(f"mode must be one of {PAIRING_MODES}, got {mode!r}")
    xs = sample.x_block
    w = xs.shape[0]
    h = sample.horizon
    if mode == "pointwise":
        # offset j pairs with horizon offset j; the modulo keeps the map total
        # when W != H, and reduces to exact same-offset alignment when H == W.
        ys = sample.y_horizon[np.arange(w) % h]
    else:
        ys = np.broadcast_to(sample.y_horizon, (w, h))
    return xs, ys


def pair_samples(sample: WindowSample, mode: str = "pointwise") -> list[tuple]:
    """Turn one window sample into W (x, y) pairs.

    pointwise pairs the feature tuple at each lag offset with the target at
    the matching offset of the forward horizon; joint_horizon pairs every
    feature tuple with the whole horizon as one y tuple.
    """
    xs, ys = pair_arrays(sample, mode)
    if mode == "pointwise":
        return [(tuple(map(float, x)), float(y)) for x, y in zip(xs, ys)]
    yt = tuple(map(float, sample.y_horizon))
    return [(tuple(map(float, x)), yt) for x in xs]


@dataclass(frozen=True)
class DiscreteSeries:
    """Integer bin symbols plus the binning that produced them."""

    symbols: np.ndarray
    bin_width: float
    origin: float

    def __len__(self) -> int:
        return int(self.symbols.shape[0])


def discretize(values, bin_width: float, origin: float = 0.0) -> DiscreteSeries:
    """Map reals onto half-open fixed-width bins: symbol k covers [origin + k*w, origin + (k+1)*w)."""
    if not (bin_width > 0.0):
        raise ValueError(f"bin_width must be positive, got {bin_width}")
    v = np.asarray(values, dtype=np.float64)
    if v.ndim != 1:
        raise ValueError("values must be one-dimensional")
    if not np.all(np.isfinite(v)):
        raise ValueError("values must be finite")
    symbols = np.floor((v - origin) / bin_width).astype(np.int64)
    symbols.flags.writeable = False
    return DiscreteSeries(symbols=symbols, bin_width=float(bin_width), origin=float(origin))
