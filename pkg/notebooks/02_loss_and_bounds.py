"""
Loss probability: exact law versus approximations
=================================================

The total demand is compound Poisson. Its exact law comes from convolving
one lattice Poisson pmf per demand level; the approximations only need the
first moments. We tabulate all of them around the mean.
"""

# %%
import math

from celldim import (ConcentrationInput, build_table, concentration_loss_bound, demand_pmf,
                     edgeworth1_bounds, edgeworth2_upper, error_terms, exact_loss,
                     gaussian_bounds, merge_rates, moment_set, reference_scenario)

cell = reference_scenario(gamma=3.8, intensity=1e-4)
table = build_table(cell)
ms = moment_set(table, cell.classes, cell.intensity)
pmf = demand_pmf(merge_rates(table, cell.classes, cell.intensity, 1e-12))
print(f"mean demand {ms.mean_demand:.2f}, sigma {ms.sigma:.2f}, "
      f"truncated mass {pmf.tail_bound:.1e}")
print(error_terms(ms))

# %%
ci = ConcentrationInput.from_moments(ms, table.max_level)
print(" N     exact       gauss[lo, hi]          edge1[lo, hi]          edge2   conc")
for n in range(math.ceil(ms.mean_demand), math.ceil(ms.mean_demand + 6 * ms.sigma), 5):
    e = exact_loss(pmf, n).value
    g = gaussian_bounds(ms, None, n)
    e1 = edgeworth1_bounds(ms, None, n)
    e2 = edgeworth2_upper(ms, None, n)
    c = concentration_loss_bound(ci, n)
    print(f"{n:3d}  {e:.3e}  [{g.lower:.2e}, {g.upper:.2e}]  [{e1.lower:.2e}, {e1.upper:.2e}]"
          f"  {e2.upper:.2e}  {c:.2e}")

# %%
# With ten times more users the error constants shrink (the Gaussian one as
# lambda**-1/2, the Edgeworth ones as lambda**-1 and lambda**-3/2).
print(error_terms(moment_set(table, cell.classes, 1e-3)))
