"""Result records shared by the loss and dimensioning methods."""
from __future__ import annotations

from dataclasses import asdict, dataclass

METHODS = ("exact", "gaussian", "edgeworth1", "edgeworth2", "concentration")


@dataclass(frozen=True)
class LossEstimate:
    """Loss probability with a certified enclosing interval."""

    value: float
    lower: float
    upper: float
    method: str

    def as_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class DimensionResult:
    """Number of subchannels returned by one dimensioning method.

    ``alpha_or_margin`` is the solved Gaussian quantile for the
    approximation methods and the additive margin for the concentration
    method. ``error_term_value`` is the error constant that was included
    in the solved equation (0 when none was).
    """

    n_avail: int
    method: str
    guarantee: bool
    alpha_or_margin: float = float("nan")
    error_term_value: float = 0.0

    def as_dict(self):
        return asdict(self)
