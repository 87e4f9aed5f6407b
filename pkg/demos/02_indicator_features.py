"""Build the standard indicator matrix and inspect a few of its columns.

Run with:  python3 demos/02_indicator_features.py
"""
import numpy as np

from depscope import (
    SyntheticSpec,
    build_feature_matrix,
    generate_synthetic,
    hma,
    returns,
    rsi_indicator,
    standard_indicator_specs,
)

frame = generate_synthetic(SyntheticSpec(length=600, lag=25, strength=0.4, seed=3))
specs = standard_indicator_specs()
print("standard columns:")
for spec in specs:
    print(f"  {spec.column_name}")

matrix = build_feature_matrix(frame, specs)
print(f"\n{len(frame)} input rows -> {len(matrix)} feature rows after trimming warm-up and horizon")

# The smoothed-return feature is the hull average of one-day returns, not of prices.
close = frame.columns["close"]
r1 = returns(close, 1)
manual = hma(r1, 5)
aligned = matrix.columns["f_ret_c_hma_5"]
offset = len(frame) - len(matrix) - 20  # rows dropped from the head
check = np.allclose(aligned, manual[offset : offset + len(matrix)], equal_nan=True)
print(f"f_ret_c_hma_5 equals hma(returns(close, 1), 5): {check}")

# Targets are the same statistics shifted one step into the future.
t1 = matrix.columns["t_ret_c_1"]
f1 = matrix.columns["f_ret_c_1"]
print(f"t_ret_c_1 leads f_ret_c_1 by one row: {np.array_equal(t1[:-1], f1[1:])}")

# Momentum gauges stay inside their design ranges.
rsi = rsi_indicator(close, 14)
finite = rsi[np.isfinite(rsi)]
print(f"rsi spans [{finite.min():.1f}, {finite.max():.1f}] across {finite.size} defined rows")
