"""Prime sums over lambda-streams and the sign-change density report.

All sums use ``math.fsum`` (correctly rounded), so a result does not depend on
how the prime range is split up.  Logarithms are natural.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import MissingCoefficient, OutOfRange
from .streams import LambdaSeries, primes_upto

SIGN_BOUND_DENOMINATOR = 512
WEISSAUER_PRODUCT_BOUND = 16.0


@dataclass(frozen=True)
class PrimeTable:
    limit: int
    primes: np.ndarray = field(repr=False)

    def upto(self, x) -> np.ndarray:
        if x > self.limit:
            raise OutOfRange(f"x={x} exceeds the sieve limit {self.limit}")
        return self.primes[: np.searchsorted(self.primes, x, side="right")]

    def __len__(self):
        return len(self.primes)


def sieve(xmax) -> PrimeTable:
    xmax = int(xmax)
    if xmax < 2:
        raise ValueError("xmax must be >= 2")
    return PrimeTable(xmax, primes_upto(xmax))


def prime_pi(t: PrimeTable, x) -> int:
    return len(t.upto(x))


def chebyshev_theta(t: PrimeTable, x) -> float:
    """sum_{p <= x} log p"""
    return math.fsum(np.log(t.upto(x).astype(float)))


def x_over_log_x(x) -> float:
    return x / math.log(x)


class SumResult(NamedTuple):
    value: float
    ratio: float


def _aligned(t: PrimeTable, x, S, *series: LambdaSeries):
    """Values of each series at the primes p <= x outside S (and outside each series' exclusions)."""
    primes = t.upto(x)
    skip = set(S or ())
    for s in series:
        skip |= set(s.excluded)
    if skip:
        primes = primes[~np.isin(primes, sorted(skip))]
    out = []
    for s in series:
        idx = np.searchsorted(s.primes, primes)
        idx_c = np.minimum(idx, max(len(s.primes) - 1, 0))
        ok = (idx < len(s.primes)) & (s.primes[idx_c] == primes) if len(s.primes) else np.zeros(len(primes), bool)
        if not ok.all():
            raise MissingCoefficient(int(primes[np.argmin(ok)]), s.label)
        out.append(s.values[idx])
    return primes, out


def sum_square(stream: LambdaSeries, t: PrimeTable, x, S=()) -> SumResult:
    """sum lambda(p)^2 over p <= x, p not in S; the ratio to x/log x estimates m."""
    _, (v,) = _aligned(t, x, S, stream)
    total = math.fsum(v * v)
    return SumResult(total, total / x_over_log_x(x))


def sum_cross(stream_f: LambdaSeries, stream_g: LambdaSeries, t: PrimeTable, x, S=()) -> SumResult:
    _, (f, g) = _aligned(t, x, S, stream_f, stream_g)
    total = math.fsum(f * g)
    return SumResult(total, total / x_over_log_x(x))


def exceedance_count(stream_g: LambdaSeries, t: PrimeTable, x, c, S=()) -> tuple[int, float]:
    """#{p <= x : |lambda(p)| > c} (strict) and that count over x/log x."""
    if not 0 < c < 4:
        raise ValueError("c must lie in (0, 4)")
    _, (g,) = _aligned(t, x, S, stream_g)
    count = int(np.count_nonzero(np.abs(g) > c))
    return count, count / x_over_log_x(x)


def density_bound(c, alpha, m) -> float:
    """c^2 (16 alpha + m - 16) / 512, unclamped."""
    return c * c * (16 * alpha + m - 16) / SIGN_BOUND_DENOMINATOR


@dataclass
class PrimeSumReport:
    x: float
    excluded: list
    primeCount: int
    sumSquareF: float
    sumSquareG: float
    sumCross: float
    ratioSquareF: float
    ratioSquareG: float
    ratioCross: float
    sumFourth: float
    sMinus: float
    countExceed: int
    alphaHat: float
    countNegProduct: int
    density: float
    bound: float
    m: int
    c: float
    proofInequalityHolds: bool
    densityMeetsBound: bool
    hypothesesHold: bool
    weissauerHolds: bool
    distinctStreams: bool
    labelF: str = ""
    labelG: str = ""
    lemma31: bool | None = None
    epsilon: float | None = None

    def to_json(self) -> dict:
        return asdict(self)


def sign_change_report(stream_f: LambdaSeries, stream_g: LambdaSeries, t: PrimeTable, x, c, m,
                       S=(), epsilon: float | None = None) -> PrimeSumReport:
    """Everything the sign-change argument looks at, measured at one cutoff x.

    S^-(x) = sum (lF^2 lG^2 - 16 lF lG) is compared against 512 times the number
    of primes with lF lG < 0, and the observed density of those primes against
    c^2 (16 alphaHat + m - 16) / 512.  ``hypothesesHold`` is false when that
    bound is not positive or when the two streams agree at every prime.
    """
    if not 0 < c < 4:
        raise ValueError("c must lie in (0, 4)")
    primes, (f, g) = _aligned(t, x, S, stream_f, stream_g)
    xl = x_over_log_x(x)
    prod = f * g
    sq_f = math.fsum(f * f)
    sq_g = math.fsum(g * g)
    cross = math.fsum(prod)
    fourth = math.fsum(prod * prod)
    s_minus = math.fsum(prod * (prod - WEISSAUER_PRODUCT_BOUND))
    neg = int(np.count_nonzero(prod < 0))
    exceed = int(np.count_nonzero(np.abs(g) > c))
    alpha = exceed / xl
    bound = density_bound(c, alpha, m)
    density = neg / xl
    distinct = not np.array_equal(f, g)
    excluded = set(S or ()) | set(stream_f.excluded) | set(stream_g.excluded)
    report = PrimeSumReport(
        x=x,
        excluded=sorted(int(p) for p in excluded),
        primeCount=len(primes),
        sumSquareF=sq_f,
        sumSquareG=sq_g,
        sumCross=cross,
        ratioSquareF=sq_f / xl,
        ratioSquareG=sq_g / xl,
        ratioCross=cross / xl,
        sumFourth=fourth,
        sMinus=s_minus,
        countExceed=exceed,
        alphaHat=alpha,
        countNegProduct=neg,
        density=density,
        bound=bound,
        m=m,
        c=c,
        proofInequalityHolds=bool(s_minus <= SIGN_BOUND_DENOMINATOR * neg),
        densityMeetsBound=bool(density >= bound),
        hypothesesHold=bool(bound > 0 and distinct),
        weissauerHolds=bool(np.all(np.abs(f) <= 4 + 1e-12) and np.all(np.abs(g) <= 4 + 1e-12)),
        distinctStreams=distinct,
        labelF=stream_f.label,
        labelG=stream_g.label,
    )
    if epsilon is not None:
        report.epsilon = epsilon
        report.lemma31 = bool(fourth >= (c * c * (16 * alpha + m - 16) - epsilon) * xl)
    return report


def lemma31_check(stream_f: LambdaSeries, stream_g: LambdaSeries, t: PrimeTable, x, c, m,
                  epsilon: float = 0.1, S=()) -> bool:
    """sum lF^2 lG^2 >= (c^2 (16 alphaHat + m - 16) - epsilon) x/log x."""
    _, (f, g) = _aligned(t, x, S, stream_f, stream_g)
    _, alpha = exceedance_count(stream_g, t, x, c, set(S or ()) | set(stream_f.excluded))
    lhs = math.fsum((f * g) ** 2)
    return lhs >= (c * c * (16 * alpha + m - 16) - epsilon) * x_over_log_x(x)
