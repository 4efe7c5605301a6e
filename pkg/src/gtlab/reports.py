"""Result records shared by every checker.

Each inequality evaluation produces a :class:`GapReport` carrying both
sides, the signed margin ``rhs - lhs`` and a pass verdict, so that a
violation is always attributable to a concrete numeric instance.  Monte
Carlo tail comparisons produce :class:`TailReport` and ensemble-average
experiments a :class:`RatioEstimate`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

from scipy.stats import beta as _beta_dist

#: Relative floating-point slack admitted for exact inequalities.  The
#: checked statements are exact theorems, so only rounding noise is
#: tolerated: a margin below ``-inequality_tol(...)`` is a failure.
REL_TOL = 1e-9

#: Relative bound on the imaginary residue of traces that are provably real.
IMAG_REL_TOL = 1e-10


def inequality_tol(lhs: float, rhs: float, rel: float = REL_TOL) -> float:
    """Slack for an exact ``lhs <= rhs`` check: ``rel * max(1, |lhs|, |rhs|)``."""
    return rel * max(1.0, abs(lhs), abs(rhs))


@dataclass(frozen=True)
class GapReport:
    """Two sides of one inequality instance, with ``margin = rhs - lhs``.

    ``passed`` is equivalent to ``margin >= -tol``.
    """

    lhs: float
    rhs: float
    margin: float
    passed: bool
    tol: float
    context: str = ""

    @classmethod
    def from_sides(cls, lhs, rhs, context: str = "", tol: float | None = None,
                   rel: float = REL_TOL) -> "GapReport":
        lhs = float(lhs)
        rhs = float(rhs)
        if tol is None:
            tol = inequality_tol(lhs, rhs, rel)
        margin = rhs - lhs
        return cls(lhs=lhs, rhs=rhs, margin=margin, passed=bool(margin >= -tol),
                   tol=tol, context=context)


@dataclass(frozen=True)
class TailReport:
    """Empirical tail probability against an analytic bound.

    ``passed`` means the 95% upper confidence limit of the empirical tail
    does not exceed the bound, or the bound is vacuous (>= 1).  ``status``
    refines the verdict with ``"indeterminate"`` for near-tie cases that
    survived escalation.
    """

    empirical_tail: float
    ci_low: float
    ci_high: float
    bound_value: float
    passed: bool
    status: str
    trials: int
    context: str = ""
    extras: dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class RatioEstimate:
    """Ratio of two ensemble means with delta-method error propagation."""

    numerator_mean: float
    numerator_se: float
    denominator_mean: float
    denominator_se: float
    ratio: float
    ratio_se: float
    ci_low: float
    ci_high: float
    trials: int
    extras: dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_moments(cls, num_mean, num_se, den_mean, den_se, cov, trials,
                     extras=None) -> "RatioEstimate":
        """Build the estimate from means, standard errors and the covariance
        of the two mean estimators (not of the per-trial values)."""
        ratio = num_mean / den_mean
        var = (num_se / den_mean) ** 2 \
            + (num_mean * den_se / den_mean**2) ** 2 \
            - 2.0 * num_mean * cov / den_mean**3
        se = math.sqrt(max(var, 0.0))
        return cls(numerator_mean=float(num_mean), numerator_se=float(num_se),
                   denominator_mean=float(den_mean), denominator_se=float(den_se),
                   ratio=float(ratio), ratio_se=float(se),
                   ci_low=float(ratio - 1.96 * se), ci_high=float(ratio + 1.96 * se),
                   trials=int(trials), extras=dict(extras or {}))


def binomial_ci(successes: int, trials: int, level: float = 0.95) -> tuple[float, float]:
    """Clopper-Pearson (exact) two-sided binomial confidence interval."""
    if trials <= 0:
        raise ValueError("trials must be positive")
    if not 0 <= successes <= trials:
        raise ValueError("successes outside [0, trials]")
    alpha = 1.0 - level
    if successes == 0:
        low = 0.0
    else:
        low = float(_beta_dist.ppf(alpha / 2, successes, trials - successes + 1))
    if successes == trials:
        high = 1.0
    else:
        high = float(_beta_dist.ppf(1 - alpha / 2, successes + 1, trials - successes))
    return low, high


def checked_real(value: complex, context: str = "", rel: float = IMAG_REL_TOL) -> float:
    """Discard the imaginary residue of a provably real quantity.

    The residue must stay below ``rel * max(1, |value|)``; anything larger
    is an implementation error rather than rounding, and raises.
    """
    value = complex(value)
    if abs(value.imag) > rel * max(1.0, abs(value)):
        raise ValueError(
            f"imaginary residue {value.imag:.3e} on a real quantity "
            f"(|value| = {abs(value):.3e}){': ' + context if context else ''}")
    return value.real
