"""Statistical primitives for the slicing engine.

Everything here is built on ``math.lgamma`` / ``math.erfc`` so that p-values
are deterministic across platforms and carry no runtime dependency on scipy.
Accuracy is pinned against frozen reference values in the test suite
(t-distribution tail probabilities agree with reference tables to well below
1e-8).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

# Sentinel effect/statistic for zero-spread separation (two constant groups
# with different values).  Kept finite so scores stay orderable and
# JSON-serializable.
DEGENERATE_STAT = 1e12

_BETA_EPS = 1e-15
_BETA_MAX_ITER = 400
_FPMIN = 1e-300


def _betacf(a: float, b: float, x: float) -> float:
    """Continued fraction for the incomplete beta function (modified Lentz)."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _FPMIN:
        d = _FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, _BETA_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _BETA_EPS:
            return h
    return h  # converged to float precision long before this in practice


def betainc(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta function I_x(a, b)."""
    if a <= 0 or b <= 0:
        raise ValueError("betainc requires a > 0 and b > 0")
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    ln_front = (
        math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
        + a * math.log(x) + b * math.log1p(-x)
    )
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def student_t_two_sided_p(t: float, df: float) -> float:
    """P(|T| >= |t|) for Student's t with ``df`` degrees of freedom."""
    if df <= 0:
        raise ValueError("df must be positive")
    if t == 0.0:
        return 1.0
    x = df / (df + t * t)
    return betainc(df / 2.0, 0.5, x)


def normal_cdf(z: float) -> float:
    return 0.5 * math.erfc(-z / math.sqrt(2.0))


def normal_two_sided_p(z: float) -> float:
    """P(|Z| >= |z|) under the standard normal."""
    return math.erfc(abs(z) / math.sqrt(2.0))


# --- descriptive helpers ----------------------------------------------------

def mean(values) -> float:
    values = list(values)
    return sum(values) / len(values)


def variance(values, ddof: int = 0) -> float:
    values = list(values)
    n = len(values)
    if n - ddof <= 0:
        raise ValueError("not enough values for the requested ddof")
    m = mean(values)
    return sum((v - m) ** 2 for v in values) / (n - ddof)


def stdev(values, ddof: int = 0) -> float:
    return math.sqrt(variance(values, ddof=ddof))


def quantile(sorted_values, q: float) -> float:
    """Linear-interpolation quantile of an already sorted sequence."""
    n = len(sorted_values)
    if n == 0:
        raise ValueError("quantile of empty sequence")
    if n == 1:
        return float(sorted_values[0])
    pos = (n - 1) * q
    lo = math.floor(pos)
    hi = min(lo + 1, n - 1)
    frac = pos - lo
    return float(sorted_values[lo]) + (float(sorted_values[hi]) - float(sorted_values[lo])) * frac


def quartiles(values) -> tuple[float, float, float]:
    s = sorted(values)
    return quantile(s, 0.25), quantile(s, 0.5), quantile(s, 0.75)


# --- two-sample machinery ----------------------------------------------------

@dataclass(frozen=True)
class TestResult:
    statistic: float
    p_value: float
    df: float = math.nan


def welch_t_test(a, b) -> TestResult:
    """Welch two-sample t-test (unequal variances), two-sided.

    Both samples need >= 2 values.  When both samples have zero spread the
    statistic is 0 (equal means) or ``DEGENERATE_STAT`` with matching sign.
    """
    a = list(a)
    b = list(b)
    n1, n2 = len(a), len(b)
    if n1 < 2 or n2 < 2:
        raise ValueError("welch_t_test needs >= 2 values per sample")
    m1, m2 = mean(a), mean(b)
    v1 = variance(a, ddof=1) / n1
    v2 = variance(b, ddof=1) / n2
    se2 = v1 + v2
    diff = m1 - m2
    if se2 == 0.0:
        if diff == 0.0:
            return TestResult(0.0, 1.0, float(n1 + n2 - 2))
        t = math.copysign(DEGENERATE_STAT, diff)
        df = float(n1 + n2 - 2)
        return TestResult(t, student_t_two_sided_p(t, df), df)
    t = diff / math.sqrt(se2)
    # Welch-Satterthwaite, scaled by the larger variance term so extreme
    # magnitudes cannot underflow the denominator
    scale = max(v1, v2)
    r1, r2 = v1 / scale, v2 / scale
    df = (r1 + r2) ** 2 / (r1 * r1 / (n1 - 1) + r2 * r2 / (n2 - 1))
    return TestResult(t, student_t_two_sided_p(t, df), df)


def cohens_d(a, b) -> float:
    """Cohen's d with pooled standard deviation."""
    a = list(a)
    b = list(b)
    n1, n2 = len(a), len(b)
    if n1 < 2 or n2 < 2:
        raise ValueError("cohens_d needs >= 2 values per sample")
    diff = mean(a) - mean(b)
    pooled = ((n1 - 1) * variance(a, ddof=1) + (n2 - 1) * variance(b, ddof=1)) / (n1 + n2 - 2)
    sp = math.sqrt(pooled)
    if sp == 0.0:
        return 0.0 if diff == 0.0 else math.copysign(DEGENERATE_STAT, diff)
    return diff / sp


def two_proportion_z_test(x1: int, n1: int, x2: int, n2: int) -> TestResult:
    """Pooled two-proportion z-test, two-sided."""
    if n1 <= 0 or n2 <= 0:
        raise ValueError("two_proportion_z_test needs non-empty groups")
    p1 = x1 / n1
    p2 = x2 / n2
    pooled = (x1 + x2) / (n1 + n2)
    denom = pooled * (1.0 - pooled) * (1.0 / n1 + 1.0 / n2)
    if denom <= 0.0:
        return TestResult(0.0, 1.0)
    z = (p1 - p2) / math.sqrt(denom)
    return TestResult(z, normal_two_sided_p(z))


def one_proportion_z_test(x: int, n: int, p0: float) -> TestResult:
    """One-sample proportion z-test against null proportion ``p0``, two-sided."""
    if n <= 0:
        raise ValueError("one_proportion_z_test needs n > 0")
    denom = p0 * (1.0 - p0) / n
    if denom <= 0.0:
        return TestResult(0.0, 1.0)
    z = (x / n - p0) / math.sqrt(denom)
    return TestResult(z, normal_two_sided_p(z))
