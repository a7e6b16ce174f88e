"""Flat credit and discounting primitives.

Everything here works with a single flat hazard rate per quarter, refreshed
from the 5Y CDS spread via the credit triangle, and a flat riskless rate from
the 5Y swap rate. No term structures are bootstrapped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

DEFAULT_CDS_RECOVERY = 0.40


@dataclass(frozen=True)
class MarketParams:
    """Rates used by the pricing equations, all annual decimals.

    r: riskless rate; lambda_b: own hazard rate; sigma: lognormal stock vol;
    gamma_s: dividend yield on the stock; q_s: stock financing cost;
    bond_recovery: recovery on issued bonds; funding_spread: r_F - r.
    """

    r: float
    lambda_b: float
    sigma: float
    gamma_s: float = 0.0
    q_s: float = 0.0
    bond_recovery: float = 0.0
    funding_spread: float = 0.0

    def __post_init__(self):
        if not (self.r >= 0.0 and math.isfinite(self.r)):
            raise ValueError(f"riskless rate must be >= 0, got {self.r}")
        if self.lambda_b < 0.0:
            raise ValueError(f"hazard rate must be >= 0, got {self.lambda_b}")
        if self.sigma <= 0.0:
            raise ValueError(f"volatility must be > 0, got {self.sigma}")
        if not 0.0 <= self.bond_recovery <= 1.0:
            raise ValueError(
                f"bond recovery must be in [0, 1], got {self.bond_recovery}")
        if self.funding_spread < 0.0:
            raise ValueError(
                f"funding spread must be >= 0, got {self.funding_spread}")


def implied_funding_spread(params: MarketParams) -> float:
    """Funding spread when negative cash is financed by issuing own bonds
    with recovery R_b, i.e. r_F = r + (1 - R_b) * lambda_b."""
    return (1.0 - params.bond_recovery) * params.lambda_b


def hazard_from_cds(spread: float, recovery: float = DEFAULT_CDS_RECOVERY) -> float:
    """Credit-triangle hazard rate: spread / (1 - recovery).

    ``spread`` is an annual decimal (e.g. 300bps -> 0.03). This is an
    approximation; no premium/default leg bootstrap is performed.
    """
    if not 0.0 <= recovery < 1.0:
        raise ValueError(f"recovery must be in [0, 1), got {recovery}")
    if spread < 0.0:
        raise ValueError(f"CDS spread must be >= 0, got {spread}")
    return spread / (1.0 - recovery)


def survival(hazard: float, t: float) -> float:
    """Survival probability exp(-hazard * t) under a flat intensity."""
    if t < 0.0:
        raise ValueError(f"time must be >= 0, got {t}")
    if hazard < 0.0:
        raise ValueError(f"hazard must be >= 0, got {hazard}")
    return math.exp(-hazard * t)


def default_density(hazard: float, t: float) -> float:
    """Density of the default time at t: hazard * exp(-hazard * t)."""
    if t < 0.0:
        raise ValueError(f"time must be >= 0, got {t}")
    if hazard < 0.0:
        raise ValueError(f"hazard must be >= 0, got {hazard}")
    return hazard * math.exp(-hazard * t)


def discount(r: float, t: float) -> float:
    """Continuously compounded discount factor exp(-r * t)."""
    if t < 0.0:
        raise ValueError(f"time must be >= 0, got {t}")
    return math.exp(-r * t)
