"""Exact rational formulas for Lagrangian intersections and spanning probabilities."""

from __future__ import annotations

import math
from fractions import Fraction


def gaussian_binomial(n: int, k: int, q: int = 2) -> int:
    """Number of k-dimensional subspaces of F_q^n."""
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n")
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def total_lagrangians(n: int) -> int:
    """T(n) = prod_{i=1}^n (2^i + 1)."""
    return math.prod(2**i + 1 for i in range(1, n + 1))


def num_stabilizer_states(n: int) -> int:
    return 2**n * total_lagrangians(n)


def kappa(n: int, k: int) -> int:
    """Number of Lagrangians meeting the all-Z Lagrangian in dimension exactly k."""
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n")
    return gaussian_binomial(n, k) * 2 ** ((n - k) * (n - k + 1) // 2)


def q_nk(n: int, k: int) -> Fraction:
    """Probability that a uniformly random Lagrangian meets Z in dimension k."""
    return Fraction(kappa(n, k), total_lagrangians(n))


def q_row(n: int) -> list[Fraction]:
    return [q_nk(n, k) for k in range(n + 1)]


def full_rank_probability(n: int, K: int) -> Fraction:
    """Probability that K uniform vectors span F_2^n: prod_{j=0}^{n-1} (1 - 2^{j-K})."""
    if K < n:
        return Fraction(0)
    return math.prod((1 - Fraction(2**j, 2**K) for j in range(n)), start=Fraction(1))


def stabilizer_value(n: int, K: int) -> Fraction:
    """Average spanning probability of every n-qubit stabilizer state."""
    if n < 1:
        raise ValueError("n must be positive")
    if K < n:
        raise ValueError("need K >= n")
    return q_nk(n, 0) * full_rank_probability(n, K)


def stabilizer_value_product_form(n: int, K: int) -> Fraction:
    """Same value as an n-term product: prod_{j=1}^n (1 - 2^{j-1-K}) / (1 + 2^{-j})."""
    if K < n:
        raise ValueError("need K >= n")
    out = Fraction(1)
    for j in range(1, n + 1):
        out *= (1 - Fraction(2 ** (j - 1), 2**K)) / (1 + Fraction(1, 2**j))
    return out


def hoeffding_trials(epsilon: float, delta: float) -> int:
    """Trials so a mean of [0,1] draws is epsilon-accurate w.p. 1-delta (two-sided)."""
    if not (epsilon > 0 and 0 < delta < 1):
        raise ValueError("need epsilon > 0 and 0 < delta < 1")
    return math.ceil(math.log(2 / delta) / (2 * epsilon**2))


def hoeffding_halfwidth(trials: int, delta: float) -> float:
    return math.sqrt(math.log(2 / delta) / (2 * trials))


def fraction_str(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}"
