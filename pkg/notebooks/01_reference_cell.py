"""
The reference cell: demand levels, thresholds and coverage weights
==================================================================

A 300 m cell with two service classes (1000 and 400 kb/s). Each user needs
between 1 and 8 subchannels depending on its received SINR; this script
shows how the SINR axis is cut into demand levels and how much area each
level covers.
"""

# %%
import numpy as np

from celldim import build_table, critical_exponent, demand_levels, reference_scenario
from celldim.planner import coverage_gap

cell = reference_scenario(gamma=3.8)
print("demand levels per class:", demand_levels(cell))

# %%
# Thresholds are on the ``g * d**-gamma`` scale; the first entry is the
# infinite sentinel, the last one is the outage threshold.
table = build_table(cell)
for k, row in enumerate(table.classes):
    print(f"class {k}: thresholds {np.array2string(row.thresholds, precision=3)}")

# %%
# Coverage weights: area (m^2) in which a user of the class needs l
# subchannels. The closed form averages the shadowing outside the cell-edge
# clamp; the quadrature variant keeps it inside.
quad = build_table(cell, "quadrature")
for k in range(2):
    print(f"class {k} closed form:", np.round(table.classes[k].weights, 1))
    print(f"class {k} quadrature :", np.round(quad.classes[k].weights, 1))
print(f"relative gap in mean demand: {coverage_gap(cell):.2%}")

# %%
# Beyond the critical exponent the penultimate level of the greedy class no
# longer reaches the cell edge, and outage starts to remove demand.
print(f"critical exponent: {critical_exponent(cell):.4f}")
