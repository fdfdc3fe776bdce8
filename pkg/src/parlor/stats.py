"""Pearson correlation and the Mann-Whitney rank test, pure Python.

Both p-values are computed locally: the correlation through the Student-t
transform backed by a regularized incomplete beta (continued fraction), the
rank test through the normal approximation with midrank tie correction and a
continuity correction. Tests cross-check against independent references.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence


@dataclass(frozen=True)
class CorrelationResult:
    r: float
    p: float
    n: int

    def __post_init__(self) -> None:
        if not -1.0 <= self.r <= 1.0:
            raise ValueError("r must lie in [-1, 1]")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must lie in [0, 1]")


@dataclass(frozen=True)
class UTestResult:
    u: float
    p: float
    n1: int
    n2: int

    def __post_init__(self) -> None:
        if not 0.0 <= self.u <= self.n1 * self.n2 + 1e-9:
            raise ValueError("U must lie in [0, n1*n2]")


def pearson(x: Sequence[float], y: Sequence[float]) -> CorrelationResult:
    """Product-moment correlation with a two-sided Student-t p-value.

    Requires equal lengths, n >= 3, and non-constant inputs.
    """
    if len(x) != len(y):
        raise ValueError(f"length mismatch: {len(x)} vs {len(y)}")
    n = len(x)
    if n < 3:
        raise ValueError("pearson needs at least 3 pairs")
    if min(x) == max(x) or min(y) == max(y):
        raise ValueError("pearson is undefined for a constant series")
    mx = math.fsum(x) / n
    my = math.fsum(y) / n
    sxx = math.fsum((a - mx) ** 2 for a in x)
    syy = math.fsum((b - my) ** 2 for b in y)
    if sxx == 0.0 or syy == 0.0:
        # distinct values whose variance underflows are constant in effect
        raise ValueError("pearson is undefined for a constant series")
    sxy = math.fsum((a - mx) * (b - my) for a, b in zip(x, y))
    r = sxy / math.sqrt(sxx * syy)
    r = max(-1.0, min(1.0, r))

    if abs(r) == 1.0:
        p = 0.0
    else:
        df = n - 2
        t2 = r * r * df / (1.0 - r * r)
        # Two-sided: p = I_{df/(df+t^2)}(df/2, 1/2).
        p = _reg_inc_beta(df / 2.0, 0.5, df / (df + t2))
        p = max(0.0, min(1.0, p))
    return CorrelationResult(r=r, p=p, n=n)


def mann_whitney(a: Sequence[float], b: Sequence[float]) -> UTestResult:
    """Rank-sum U for sample `a` with midrank ties; two-sided normal-approx p.

    U equals the pairwise count of (a_i beats b_j) with half credit for ties,
    so complete separation with every `a` below every `b` gives U = 0 and
    U(a, b) + U(b, a) = n1 * n2 always holds.
    """
    if not a or not b:
        raise ValueError("both samples must be non-empty")
    n1, n2 = len(a), len(b)
    ranks = _midranks([*a, *b])
    r1 = math.fsum(ranks[:n1])
    u = r1 - n1 * (n1 + 1) / 2.0
    u = min(max(u, 0.0), float(n1 * n2))

    total = n1 + n2
    tie_term = _tie_sum(ranks)
    variance = (n1 * n2 / 12.0) * ((total + 1) - tie_term / (total * (total - 1)))
    if variance <= 0.0:
        return UTestResult(u=u, p=1.0, n1=n1, n2=n2)
    diff = u - n1 * n2 / 2.0
    if diff > 0:
        diff -= 0.5
    elif diff < 0:
        diff += 0.5
    z = diff / math.sqrt(variance)
    p = min(1.0, 2.0 * _norm_sf(abs(z)))
    return UTestResult(u=u, p=p, n1=n1, n2=n2)


def _midranks(values: Sequence[float]) -> list[float]:
    order = sorted(range(len(values)), key=values.__getitem__)
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        midrank = (i + j) / 2.0 + 1.0
        for k in range(i, j + 1):
            ranks[order[k]] = midrank
        i = j + 1
    return ranks


def _tie_sum(ranks: Sequence[float]) -> float:
    counts: dict[float, int] = {}
    for r in ranks:
        counts[r] = counts.get(r, 0) + 1
    return float(sum(c ** 3 - c for c in counts.values()))


def _norm_sf(z: float) -> float:
    return 0.5 * math.erfc(z / math.sqrt(2.0))


def _reg_inc_beta(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta I_x(a, b) via the Lentz continued fraction."""
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    ln_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def _betacf(a: float, b: float, x: float, max_iter: int = 300, eps: float = 3e-16) -> float:
    tiny = 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, max_iter + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < eps:
            return h
    return h
