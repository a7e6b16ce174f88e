"""Monte Carlo oracle: jump-to-default GBM priced by brute force.

The stock follows a lognormal diffusion with drift r - gamma_s and jumps to
zero at an independent exponential default time. Barrier claims are simulated
per step with an exact Brownian-bridge minimum, which removes the
discrete-monitoring bias. Used as ground truth for the analytic pricers and
the PDE engine.

The hot path kernels live in a compiled extension when available; a
pure-numpy implementation of the same algorithm is selected at import
otherwise (see ``backend_name``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np

from assetdva.curves import MarketParams
from assetdva.mc import _reference

try:
    from assetdva.mc import _kernel as _compiled
except ImportError:  # extension not built; fall back to numpy
    _compiled = None

_active = _compiled if _compiled is not None else _reference


def backend_name() -> str:
    """'compiled' when the C extension carries the path loops, else 'python'."""
    return "compiled" if _active is _compiled else "python"


def available_backends() -> dict[str, object]:
    out = {"python": _reference}
    if _compiled is not None:
        out["compiled"] = _compiled
    return out


@dataclass(frozen=True)
class SimulationConfig:
    """Path count, monitoring frequency and seed for one oracle run."""

    n_paths: int
    steps_per_year: int = 50
    seed: int = 0
    bridge_correction: bool = True

    def __post_init__(self):
        if self.n_paths < 1:
            raise ValueError("n_paths must be positive")
        if self.steps_per_year < 1:
            raise ValueError("steps_per_year must be positive")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must fit in 64 bits")

    def n_steps(self, maturity: float) -> int:
        return max(1, math.ceil(maturity * self.steps_per_year))


@dataclass(frozen=True)
class McEstimate:
    estimate: float
    std_error: float


@dataclass(frozen=True)
class OneTouchClaim:
    """Pays 1 at the first time the spot touches the (lower) barrier."""

    barrier: float


@dataclass(frozen=True)
class NoTouchRebateClaim:
    """Pays ``rebate`` at expiry if the barrier was never touched."""

    barrier: float
    rebate: float = 1.0


@dataclass(frozen=True)
class DefaultPayoutClaim:
    """Pays ``payoff(tau)`` at the default time tau if it occurs before T.

    ``payoff`` is either a constant or a vectorised callable over an array of
    default times.
    """

    payoff: Union[float, Callable[[np.ndarray], np.ndarray]]


@dataclass(frozen=True)
class ProgressiveClaim:
    """Descending barrier ladder: each barrier pays its loss at first touch;
    default (stock jumps to zero) triggers every remaining barrier."""

    barriers: Sequence[float]
    losses: Sequence[float]

    def __post_init__(self):
        if len(self.barriers) != len(self.losses):
            raise ValueError("barriers and losses must have equal length")
        if any(b2 >= b1 for b1, b2 in zip(self.barriers, self.barriers[1:])):
            raise ValueError("barriers must be strictly decreasing")


Claim = Union[OneTouchClaim, NoTouchRebateClaim, DefaultPayoutClaim,
              ProgressiveClaim]


@dataclass(frozen=True)
class TouchEstimates:
    """Both estimators extracted from one first-passage simulation."""

    one_touch: McEstimate
    no_touch_probability: float
    n_hit: int
    n_paths: int

    def no_touch_rebate(self, rebate: float, r: float, maturity: float) -> McEstimate:
        df = math.exp(-r * maturity) * rebate
        p = self.no_touch_probability
        se = abs(df) * math.sqrt(p * (1.0 - p) / self.n_paths)
        return McEstimate(df * p, se)

    def touch_paid_at_expiry(self, r: float, maturity: float) -> McEstimate:
        df = math.exp(-r * maturity)
        p = self.n_hit / self.n_paths
        se = df * math.sqrt(p * (1.0 - p) / self.n_paths)
        return McEstimate(df * p, se)


def _mean_se(total: float, total_sq: float, n: int) -> tuple[float, float]:
    mean = total / n
    var = max(total_sq / n - mean * mean, 0.0)
    return mean, math.sqrt(var / n)


def touch_estimates(spot: float, barrier: float, params: MarketParams,
                    maturity: float, config: SimulationConfig,
                    backend: object = None) -> TouchEstimates:
    """Simulate first passage to a lower barrier under the risk-neutral
    diffusion (no default jump) and return one-touch / no-touch estimators."""
    if spot < barrier:
        raise ValueError("spot must be at or above the barrier")
    if maturity <= 0.0:
        raise ValueError("maturity must be positive")
    if spot == barrier:
        return TouchEstimates(McEstimate(1.0, 0.0), 0.0, config.n_paths,
                              config.n_paths)
    impl = backend if backend is not None else _active
    drift = params.r - params.gamma_s - 0.5 * params.sigma * params.sigma
    n_steps = config.n_steps(maturity)
    n_hit, sum_df, sumsq_df = impl.touch_stats(
        math.log(spot / barrier), drift, params.sigma, params.r, maturity,
        n_steps, config.seed, config.n_paths, config.bridge_correction)
    est, se = _mean_se(sum_df, sumsq_df, config.n_paths)
    return TouchEstimates(McEstimate(est, se), 1.0 - n_hit / config.n_paths,
                          n_hit, config.n_paths)


def _price_default_payout(claim: DefaultPayoutClaim, params: MarketParams,
                          maturity: float, config: SimulationConfig) -> McEstimate:
    if params.lambda_b == 0.0:
        return McEstimate(0.0, 0.0)
    u = _reference.default_time_uniforms(config.seed, config.n_paths)
    tau = -np.log(u) / params.lambda_b
    in_horizon = tau < maturity
    if callable(claim.payoff):
        values = np.asarray(claim.payoff(tau), dtype=float)
    else:
        values = np.full(config.n_paths, float(claim.payoff))
    pay = np.where(in_horizon, np.exp(-params.r * tau) * values, 0.0)
    est, se = _mean_se(float(pay.sum()), float((pay * pay).sum()),
                       config.n_paths)
    return McEstimate(est, se)


def price_claim(claim: Claim, spot: float, params: MarketParams,
                maturity: float, config: SimulationConfig,
                backend: object = None) -> McEstimate:
    """Unbiased Monte Carlo price with standard error for one claim."""
    if maturity <= 0.0:
        raise ValueError("maturity must be positive")
    impl = backend if backend is not None else _active

    if isinstance(claim, OneTouchClaim):
        return touch_estimates(spot, claim.barrier, params, maturity, config,
                               backend=impl).one_touch
    if isinstance(claim, NoTouchRebateClaim):
        if claim.rebate == 0.0:
            return McEstimate(0.0, 0.0)
        stats = touch_estimates(spot, claim.barrier, params, maturity, config,
                                backend=impl)
        return stats.no_touch_rebate(claim.rebate, params.r, maturity)
    if isinstance(claim, DefaultPayoutClaim):
        return _price_default_payout(claim, params, maturity, config)
    if isinstance(claim, ProgressiveClaim):
        if not claim.barriers:
            return McEstimate(0.0, 0.0)
        drift = params.r - params.gamma_s - 0.5 * params.sigma * params.sigma
        total, total_sq = impl.progressive_stats(
            math.log(spot), np.log(np.asarray(claim.barriers, dtype=float)),
            np.asarray(claim.losses, dtype=float), drift, params.sigma,
            params.r, params.lambda_b, maturity, config.n_steps(maturity),
            config.seed, config.n_paths, config.bridge_correction)
        est, se = _mean_se(total, total_sq, config.n_paths)
        return McEstimate(est, se)
    raise TypeError(f"unknown claim type: {type(claim).__name__}")
