"""Failure probabilities: the exact no-faulty result and the tight
lower/upper bounds for the faulty configurations.

Two arithmetic backends sit behind one interface: exact rationals (small m,
used by the test oracles) and log-space floats (production sweeps, stable
for m in the thousands). The float path accumulates per-term logs and sums
via log-sum-exp after sorting by magnitude.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np
from scipy.special import gammaln, logsumexp

from .adversary import _all_events
from .protocol import (
    AdversaryConfig,
    Outcome,
    OutOfDomainError,
    ProtocolParams,
    classify_transcript,
    run_protocol,
)
from .source import log_multinomial, multinomial

Probability = Union[float, Fraction]

LOG_THIRD = math.log(1 / 3)
LOG_SIXTH = math.log(1 / 6)
LOG_HALF = math.log(1 / 2)


class BoundKind(enum.Enum):
    EXACT = "exact"
    LOWER = "lower"
    UPPER = "upper"


@dataclass(frozen=True)
class FailureReport:
    config: AdversaryConfig
    kind: BoundKind
    value: Probability
    params: ProtocolParams

    def __post_init__(self):
        if not 0 <= self.value <= 1:
            raise ValueError(f"failure probability {self.value} outside [0, 1]")


def _logsum(logs: np.ndarray) -> float:
    """Sum exp(logs), smallest magnitudes first."""
    if logs.size == 0:
        return 0.0
    return float(np.exp(logsumexp(np.sort(logs))))


def _binom_cdf(k_max: int, m: int, p_succ: Fraction, exact: bool) -> Probability:
    """P(X <= k_max) for X ~ Binomial(m, p_succ); k_max may be negative."""
    if k_max < 0:
        return Fraction(0) if exact else 0.0
    k_max = min(k_max, m)
    if exact:
        return sum(
            Fraction(math.comb(m, k)) * p_succ**k * (1 - p_succ) ** (m - k) for k in range(k_max + 1)
        )
    k = np.arange(k_max + 1)
    lg = gammaln(m + 1) - gammaln(k + 1) - gammaln(m - k + 1)
    return _logsum(lg + k * math.log(p_succ) + (m - k) * math.log(1 - p_succ))


def _binom_sf(k_min: int, m: int, p_succ: Fraction, exact: bool) -> Probability:
    """P(X >= k_min) for X ~ Binomial(m, p_succ), summed directly over the
    upper tail so tiny tails keep full relative precision."""
    if k_min > m:
        return Fraction(0) if exact else 0.0
    k_min = max(k_min, 0)
    if exact:
        return sum(
            Fraction(math.comb(m, k)) * p_succ**k * (1 - p_succ) ** (m - k) for k in range(k_min, m + 1)
        )
    k = np.arange(k_min, m + 1)
    lg = gammaln(m + 1) - gammaln(k + 1) - gammaln(m - k + 1)
    return _logsum(lg + k * math.log(p_succ) + (m - k) * math.log(1 - p_succ))


def pf_no_faulty_exact(p: ProtocolParams, exact: bool = False) -> FailureReport:
    """Exact failure probability with all components correct: the chance
    that fewer than T of the m outcomes back the sender's bit."""
    value = _binom_cdf(p.T - 1, p.m, Fraction(1, 3), exact)
    return FailureReport(AdversaryConfig.NO_FAULTY, BoundKind.EXACT, value, p)


def _s_domain_probability(p: ProtocolParams, exact: bool) -> Probability:
    """Probability that a random Event lands in the domain of zeta_S,
    summed with the paper-exact limits (empty ranges contribute 0)."""
    m, T, Q = p.m, p.T, p.Q
    if exact:
        total = Fraction(0)
        for l3 in range(T, m - T + 1):
            for l1 in range(T - Q, m - Q - l3 + 1):
                total += multinomial(m, (l3, l1, m - l1 - l3)) * Fraction(1, 3) ** m
        return total
    logs = []
    lg = gammaln(np.arange(m + 2))
    for l3 in range(T, m - T + 1):
        l1 = np.arange(T - Q, m - Q - l3 + 1)
        if l1.size == 0:
            continue
        logs.append(lg[m + 1] - lg[l3 + 1] - lg[l1 + 1] - lg[m - l1 - l3 + 1] + m * LOG_THIRD)
    return _logsum(np.concatenate(logs)) if logs else 0.0


def pf_S_bounds(p: ProtocolParams, exact: bool = False) -> tuple[FailureReport, FailureReport]:
    """Failure probability bounds with a faulty sender playing zeta_S.

    Lower bound: in-domain Events fail with probability 2^-Q. Upper bound
    adds the full probability of the out-of-domain region.
    """
    dom = _s_domain_probability(p, exact)
    two = Fraction(1, 2) if exact else 0.5
    lower = dom * two**p.Q
    upper = lower + (1 - dom)
    return (
        FailureReport(AdversaryConfig.S_FAULTY, BoundKind.LOWER, lower, p),
        FailureReport(AdversaryConfig.S_FAULTY, BoundKind.UPPER, upper, p),
    )


def _orange_tail(l2: int, p: ProtocolParams, exact: bool) -> Probability:
    """Chance the n_min = T - l2 only-potentially-consistent indices contain
    at least T-Q+1-l2 lucky (consistent) ones; each is lucky w.p. 2/3."""
    n = p.T - l2
    lo = p.T - p.Q + 1 - l2
    if exact:
        return sum(Fraction(math.comb(n, k)) * Fraction(2, 3) ** k * Fraction(1, 3) ** (n - k) for k in range(lo, n + 1))
    k = np.arange(lo, n + 1)
    lg = gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)
    return _logsum(lg + k * math.log(2 / 3) + (n - k) * LOG_THIRD)


def pf_R_bounds(p: ProtocolParams, exact: bool = False) -> tuple[FailureReport, FailureReport]:
    """Failure probability bounds with a faulty R0 playing zeta_R.

    The lower bound splits the domain into the guaranteed-failure regions
    (too few vouched indices; enough automatically-consistent XX10 indices)
    and the region where failure needs lucky XX0X picks. The upper bound
    adds the out-of-domain region l1 > m - T.
    """
    m, T, Q = p.m, p.T, p.Q
    if exact:
        third, sixth, half = Fraction(1, 3), Fraction(1, 6), Fraction(1, 2)
        orange = Fraction(0)
        blue = Fraction(0)
        for l1 in range(T, m - T + 1):
            for l2 in range(0, m - l1 + 1):
                l3 = m - l1 - l2
                w = multinomial(m, (l1, l2, l3)) * third**l1 * sixth**l2 * half**l3
                if l2 <= T - Q:
                    orange += w * _orange_tail(l2, p, exact=True)
                else:
                    blue += w
        pink = _binom_cdf(T - 1, m, third, exact=True)
        green = _binom_sf(m - T + 1, m, third, exact=True)
        lower = orange + blue + pink
        upper = lower + green
    else:
        lg = gammaln(np.arange(m + 2))
        tails = np.array([float(_orange_tail(l2, p, exact=False)) for l2 in range(0, T - Q + 1)])
        lower = 0.0
        for l1 in range(T, m - T + 1):
            l2 = np.arange(0, m - l1 + 1)
            l3 = m - l1 - l2
            logw = lg[m + 1] - lg[l1 + 1] - lg[l2 + 1] - lg[l3 + 1]
            logw += l1 * LOG_THIRD + l2 * LOG_SIXTH + l3 * LOG_HALF
            factor = np.ones_like(logw)
            n_orange = min(T - Q + 1, l2.size)
            factor[:n_orange] = tails[:n_orange]
            lower += float(np.sum(np.exp(logw) * factor))
        pink = _binom_cdf(T - 1, m, Fraction(1, 3), exact=False)
        green = _binom_sf(m - T + 1, m, Fraction(1, 3), exact=False)
        lower += pink
        upper = min(1.0, lower + green)
    return (
        FailureReport(AdversaryConfig.R0_FAULTY, BoundKind.LOWER, lower, p),
        FailureReport(AdversaryConfig.R0_FAULTY, BoundKind.UPPER, upper, p),
    )


def pf_bruteforce(
    cfg: AdversaryConfig,
    p: ProtocolParams,
    kind: BoundKind = BoundKind.UPPER,
    max_m: int = 8,
) -> FailureReport:
    """Exhaustive 6^m oracle: run the protocol on every Event with exact
    rational weights.

    Faulty configurations apply the optimal incomplete strategy; an Event
    outside the strategy domain scores as failure for UPPER and as success
    for LOWER. NO_FAULTY ignores `kind` and reports EXACT.
    """
    if p.m > max_m:
        raise ValueError(f"exhaustive enumeration limited to m <= {max_m}")
    if cfg is AdversaryConfig.NO_FAULTY:
        kind = BoundKind.EXACT
    elif kind is BoundKind.EXACT:
        raise ValueError("faulty configurations only admit LOWER/UPPER brute-force scoring")
    total = Fraction(0)
    for event, weight in _all_events(p.m):
        try:
            t = run_protocol(event, p, cfg, x_s=0)
        except OutOfDomainError:
            if kind is BoundKind.UPPER:
                total += weight
            continue
        if classify_transcript(cfg, t) is Outcome.FAILURE:
            total += weight
    return FailureReport(cfg, kind, total, p)


def failure_report(cfg: AdversaryConfig, kind: BoundKind, p: ProtocolParams, exact: bool = False) -> FailureReport:
    """Dispatch to the matching analytic formula."""
    if cfg is AdversaryConfig.NO_FAULTY:
        if kind is not BoundKind.EXACT:
            raise ValueError("the no-faulty configuration has an exact result, not bounds")
        return pf_no_faulty_exact(p, exact)
    bounds = pf_S_bounds(p, exact) if cfg is AdversaryConfig.S_FAULTY else pf_R_bounds(p, exact)
    if kind is BoundKind.LOWER:
        return bounds[0]
    if kind is BoundKind.UPPER:
        return bounds[1]
    raise ValueError("faulty configurations admit LOWER/UPPER bounds only")
