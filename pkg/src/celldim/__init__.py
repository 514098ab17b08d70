"""Subchannel dimensioning of OFDMA cells.

The total subchannel demand of a cell with Poisson users is a compound
Poisson variable. This package computes its exact law, Gaussian and
Edgeworth approximations with explicit error bounds, a concentration
upper bound, and inverts each of them to size the cell for a target loss
probability.
"""
from .approx import (BoundedLoss, ErrorTerms, dimension_edgeworth1, dimension_edgeworth2,
                     dimension_gaussian, edgeworth1_bounds, edgeworth2_upper, error_terms,
                     gaussian_bounds)
from .concentration import (ConcentrationInput, bennett_g, concentration_loss_bound,
                            dimension_concentration)
from .errors import (BracketError, CapacityError, CelldimError, DegenerateFunctional,
                     DomainError, Infeasible, NonMonotoneThresholds, QuadratureFailure,
                     ScenarioError)
from .exact import (CompoundPoissonSpec, DemandPmf, demand_pmf, exact_dimension, exact_loss,
                    merge_rates)
from .moments import MomentSet, moment_set, normalized_moment, standardized_threshold
from .montecarlo import SimConfig, SimResult, estimate_loss, simulate_demand
from .normal_sf import gauss_cdf, gauss_quantile, gauss_sf, q_derivative
from .planner import PlanOptions, PlanReport, plan, sweep
from .results import DimensionResult, LossEstimate
from .scenario import (CellScenario, RadioParams, ServiceClass, ShadowingParams, load_scenario,
                       reference_scenario, save_scenario)
from .thresholds import (ThresholdTable, build_table, coverage_weights, coverage_weights_quadrature,
                         critical_exponent, demand_levels, snr_thresholds)

__version__ = "0.1.0"
