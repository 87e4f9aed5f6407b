"""Tour all eight dependence measures on inputs with known structure.

Run with:  python3 demos/03_dependence_measures.py
"""
import numpy as np

from depscope import (
    JointHistogram,
    distance_correlation,
    information_gain,
    mic,
    mutual_information,
    pearson,
    pps,
    redundancy_synergy_index,
    spearman,
)

rng = np.random.default_rng(42)


def show(label, result):
    flag = "  (degenerate)" if result.degenerate else ""
    print(f"  {result.measure_id:>12}  {label:<38} {result.value: .4f}{flag}")


print("linear pair y = 2x + noise:")
x = rng.standard_normal(300)
y = 2.0 * x + rng.standard_normal(300) * 0.3
show("tracks the slope", pearson(x, y))
show("rank agreement", spearman(x, y))

print("\nparabola y = x^2, invisible to linear correlation:")
yq = x * x
show("misses it", pearson(x, yq))
show("sees it", distance_correlation(x, yq))
show("sees it", mic(x, yq))

print("\ncoupled coin flips (two bits, always equal):")
bits = rng.integers(0, 2, 400)
joint = JointHistogram.from_symbols(list(bits), list(bits))
show("one full bit shared", mutual_information(joint))
show("same quantity as a split score", information_gain(list(bits), list(bits)))

print("\nxor target: neither input helps alone, both together decide everything:")
a = rng.integers(0, 2, 400)
b = rng.integers(0, 2, 400)
target = list(a ^ b)
show("pure synergy", redundancy_synergy_index([list(a), list(b)], target))
show("pure redundancy", redundancy_synergy_index([list(a), list(a)], list(a)))

print("\npredictive power of a step function vs pure noise:")
step_x = np.repeat([0.0, 1.0, 2.0], 40)
step_y = np.repeat([5.0, -1.0, 8.0], 40)
show("perfectly learnable", pps(step_x, step_y, min_samples_leaf=2))
show("nothing to learn", pps(rng.standard_normal(120), rng.standard_normal(120)))

print("\ndegenerate input is flagged, never raised:")
flat = pearson(np.ones(50), rng.standard_normal(50))
print(f"  constant x -> value {flat.value}, reason: {flat.params['reason']!r}")
