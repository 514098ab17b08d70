"""Dimensioning procedure: run every method, pick the cheapest certified one.

The approximation methods are tried in order of cost (Gaussian, one-term
Edgeworth, two-term Edgeworth); the first whose error constant is
negligible against the target (``error <= epsilon / negligibility``) is
selected, otherwise the concentration bound is used.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from . import approx, concentration, exact, moments, thresholds
from . import scenario as sc
from .errors import BracketError, CelldimError, Infeasible
from .results import DimensionResult

SWEEP_PARAMETERS = ("gamma", "lambda", "epsilon")
SWEEP_COLUMNS = ("load", "loss_exact", "gauss_lo", "gauss_hi", "edge1_lo", "edge1_hi",
                 "edge2_up", "conc_up", "n_exact", "n_gauss", "n_edge1", "n_edge2", "n_conc")


@dataclass(frozen=True)
class PlanOptions:
    negligibility: float = 10.0
    paper_literal: bool = False
    run_exact: bool = True
    weights: str = "closed_form"
    truncation_epsilon: float | None = None
    max_entries: int = exact.DEFAULT_MAX_ENTRIES

    @property
    def edgeworth2_variant(self) -> str:
        return "paper_literal" if self.paper_literal else "derivation"


@dataclass
class PlanReport:
    epsilon: float
    results: dict[str, DimensionResult | None]
    selected: str
    negligibility_factor: float
    gamma_c: float | None
    load: float
    error_terms: approx.ErrorTerms
    coverage_gap: float
    notes: dict[str, str] = field(default_factory=dict)

    @property
    def selected_result(self) -> DimensionResult:
        return self.results[self.selected]

    def as_dict(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "selected": self.selected,
            "n_avail": self.selected_result.n_avail,
            "results": {k: (None if v is None else v.as_dict()) for k, v in self.results.items()},
            "negligibility_factor": self.negligibility_factor,
            "gamma_c": self.gamma_c,
            "load": self.load,
            "error_terms": self.error_terms.as_dict(),
            "coverage_gap": self.coverage_gap,
            "notes": dict(self.notes),
        }


@dataclass
class Model:
    """Tables and moments of one scenario, shared by every method."""

    scenario: sc.CellScenario
    table: thresholds.ThresholdTable
    moments: moments.MomentSet

    @classmethod
    def build(cls, scenario, weights="closed_form"):
        sc.check(scenario)
        table = thresholds.build_table(scenario, weights)
        ms = moments.moment_set(table, scenario.classes, scenario.intensity)
        return cls(scenario, table, ms)

    @property
    def lam(self):
        return self.scenario.intensity

    def compound_spec(self, truncation_epsilon):
        return exact.merge_rates(self.table, self.scenario.classes, self.lam, truncation_epsilon)

    def concentration_input(self):
        return concentration.ConcentrationInput.from_moments(self.moments, self.table.max_level)


def coverage_gap(scenario: sc.CellScenario) -> float:
    """Relative gap in mean demand between closed-form and quadrature weights."""
    closed = thresholds.build_table(scenario, "closed_form")
    quad = thresholds.build_table(scenario, "quadrature")
    m_closed = moments.raw_moment(closed, scenario.classes, 1)
    m_quad = moments.raw_moment(quad, scenario.classes, 1)
    return (m_closed - m_quad) / m_quad if m_quad > 0 else 0.0


def _gaussian(model, epsilon, opts):
    try:
        return approx.dimension_gaussian(model.moments, model.lam, epsilon, True, opts.paper_literal)
    except Infeasible:
        return approx.dimension_gaussian(model.moments, model.lam, epsilon, certified=False)


def dimension_all(model: Model, epsilon: float, opts: PlanOptions) -> tuple[dict, dict]:
    """Every method's DimensionResult (None on failure) and the failure notes."""
    results, notes = {}, {}
    solvers = {
        "gaussian": lambda: _gaussian(model, epsilon, opts),
        "edgeworth1": lambda: approx.dimension_edgeworth1(model.moments, model.lam, epsilon),
        "edgeworth2": lambda: approx.dimension_edgeworth2(model.moments, model.lam, epsilon,
                                                          opts.edgeworth2_variant),
        "concentration": lambda: concentration.dimension_concentration(
            model.concentration_input(), epsilon),
    }
    if opts.run_exact:
        trunc = opts.truncation_epsilon or epsilon / 100
        solvers = {"exact": lambda: exact.exact_dimension(model.compound_spec(trunc), epsilon,
                                                          opts.max_entries),
                   **solvers}
    for name, solve in solvers.items():
        try:
            results[name] = solve()
        except CelldimError as exc:
            results[name] = None
            notes[name] = f"{type(exc).__name__}: {exc}"
    return results, notes


def select_method(terms: approx.ErrorTerms, results: dict, epsilon: float,
                  negligibility: float) -> str:
    threshold = epsilon / negligibility
    for name, err in (("gaussian", terms.stein_error),
                      ("edgeworth1", terms.edgeworth1_error),
                      ("edgeworth2", terms.edgeworth2_error)):
        res = results.get(name)
        if err <= threshold and res is not None and res.guarantee:
            return name
    return "concentration"


def plan(scenario: sc.CellScenario, epsilon: float, options: PlanOptions | None = None) -> PlanReport:
    opts = options or PlanOptions()
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must lie in (0, 1)")
    model = Model.build(scenario, opts.weights)
    terms = approx.error_terms(model.moments, model.lam, opts.paper_literal)
    results, notes = dimension_all(model, epsilon, opts)
    selected = select_method(terms, results, epsilon, opts.negligibility)
    if results.get(selected) is None:
        raise Infeasible(notes.get(selected, f"{selected} failed"))
    try:
        gamma_c = thresholds.critical_exponent(scenario)
    except BracketError as exc:
        gamma_c = None
        notes["gamma_c"] = str(exc)
    return PlanReport(epsilon, results, selected, opts.negligibility, gamma_c,
                      model.moments.load, terms, coverage_gap(scenario), notes)


def _apply(scenario, parameter, value, epsilon):
    if parameter == "gamma":
        return scenario.with_gamma(value), epsilon
    if parameter == "lambda":
        return scenario.with_intensity(value), epsilon
    if parameter == "epsilon":
        return scenario, value
    raise ValueError(f"parameter must be one of {SWEEP_PARAMETERS}")


def sweep_row(scenario, parameter, value, epsilon, n_avail=None, opts=None) -> dict:
    """One sweep row; losses are evaluated at ``n_avail``, or at the row's
    exact dimensioning value when ``n_avail`` is None."""
    opts = opts or PlanOptions()
    row = {parameter: value, **{c: math.nan for c in SWEEP_COLUMNS}, "error": ""}
    try:
        s, eps = _apply(scenario, parameter, value, epsilon)
        model = Model.build(s, opts.weights)
        ms, lam = model.moments, model.lam
        row["load"] = ms.load
        results, notes = dimension_all(model, eps, opts)
        for col, name in (("n_exact", "exact"), ("n_gauss", "gaussian"), ("n_edge1", "edgeworth1"),
                          ("n_edge2", "edgeworth2"), ("n_conc", "concentration")):
            if results.get(name) is not None:
                row[col] = results[name].n_avail
        n = n_avail if n_avail is not None else row["n_exact"]
        if not (isinstance(n, float) and math.isnan(n)):
            if opts.run_exact:
                trunc = opts.truncation_epsilon or min(1e-12, eps / 100)
                pmf = exact.demand_pmf(model.compound_spec(trunc), opts.max_entries)
                row["loss_exact"] = exact.exact_loss(pmf, n).value
            g = approx.gaussian_bounds(ms, lam, n, opts.paper_literal)
            e1 = approx.edgeworth1_bounds(ms, lam, n)
            e2 = approx.edgeworth2_upper(ms, lam, n, opts.edgeworth2_variant)
            row.update(gauss_lo=g.lower, gauss_hi=g.upper, edge1_lo=e1.lower, edge1_hi=e1.upper,
                       edge2_up=e2.upper,
                       conc_up=concentration.concentration_loss_bound(model.concentration_input(), n))
        row["error"] = "; ".join(f"{k}: {v}" for k, v in notes.items())
    except CelldimError as exc:
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


def sweep(scenario: sc.CellScenario, parameter: str, grid, epsilon: float,
          n_avail: int | None = None, options: PlanOptions | None = None,
          workers: int = 1) -> list[dict]:
    grid = [float(x) for x in grid]
    if parameter not in SWEEP_PARAMETERS:
        raise ValueError(f"parameter must be one of {SWEEP_PARAMETERS}")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("sweep grid must be strictly increasing")
    job = lambda v: sweep_row(scenario, parameter, v, epsilon, n_avail, options)  # noqa: E731
    if workers <= 1:
        return [job(v) for v in grid]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(job, grid))


def max_intensity(scenario: sc.CellScenario, n_avail: int, epsilon: float,
                  bracket=(1e-7, 1e-2), tol=1e-3, weights="closed_form") -> float:
    """Largest intensity whose exact loss at ``n_avail`` stays within ``epsilon``.

    Trial and error over the intensity, organised as a bisection on the
    log scale (the exact loss is increasing in the intensity).
    """
    def overloaded(log_lam):
        s = scenario.with_intensity(math.exp(log_lam))
        model = Model.build(s, weights)
        pmf = exact.demand_pmf(model.compound_spec(epsilon / 100))
        est = exact.exact_loss(pmf, n_avail)
        return est.upper > epsilon

    from ._bisect import bisect_predicate
    lo, _ = bisect_predicate(overloaded, math.log(bracket[0]), math.log(bracket[1]),
                             tol=tol, max_iter=200)
    return math.exp(lo)
