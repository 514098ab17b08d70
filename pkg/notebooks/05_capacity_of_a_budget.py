"""
How many users fit in a given budget?
=====================================

The inverse question has no closed form: bisect on the intensity until the
exact loss at the given number of subchannels meets the target.
"""

# %%
import math

from celldim import reference_scenario
from celldim.planner import max_intensity

cell = reference_scenario(gamma=3.8)
for budget in (50, 92, 150):
    lam = max_intensity(cell, budget, 1e-3)
    print(f"{budget} subchannels: up to {lam * math.pi * 300.0 ** 2:.1f} users on average")
