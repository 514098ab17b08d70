"""
Monte Carlo check of the exact law
==================================

The simulator draws users and their radio conditions directly and applies
the Shannon-based demand rule, without going through the threshold tables.
Its estimates should bracket the exact loss computed with quadrature
coverage weights (the simulator keeps the cell-edge clamp inside the
shadowing average).
"""

# %%
from celldim import (SimConfig, build_table, demand_pmf, exact_loss, merge_rates,
                     reference_scenario, simulate_demand)

cell = reference_scenario(gamma=3.8)
table = build_table(cell, "quadrature")
pmf = demand_pmf(merge_rates(table, cell.classes, cell.intensity))
sample = simulate_demand(cell, SimConfig(trials=200_000, master_seed=1, workers=4))
print(f"users in outage: {sample.outage_fraction:.2%}")

# %%
for n in (20, 30, 40):
    res = sample.result(n)
    print(f"N={n}: simulated {res.loss_estimate:.2e} in [{res.ci[0]:.2e}, {res.ci[1]:.2e}], "
          f"exact {exact_loss(pmf, n).value:.2e}")
