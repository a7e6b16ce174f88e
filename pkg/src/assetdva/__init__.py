"""Valuation and hedging of self-default risk on own-balance-sheet assets.

Core pieces: a quarterly bank panel loader, flat credit curves, closed-form
barrier/digital pricers, three goodwill loss models (constant, amortizing,
progressive barrier ladder), a finite-difference engine for the replication
PDE, a Monte Carlo oracle, historical calibration, and a reporting CLI.
"""

from assetdva.curves import (
    MarketParams,
    hazard_from_cds,
    survival,
    default_density,
    discount,
)

__version__ = "0.1.0"

__all__ = [
    "MarketParams",
    "hazard_from_cds",
    "survival",
    "default_density",
    "discount",
    "__version__",
]
