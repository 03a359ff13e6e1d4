"""Single-copy stabilizer tester: threshold the average spanning probability."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from fractions import Fraction

from .counting import fraction_str, q_nk, stabilizer_value
from .spanning import StateSource, estimate_avg_spanning


class PreconditionError(ValueError):
    """Inputs outside the regime where the tester has a positive gap."""


def gap(n: int, epsilon: float) -> float:
    """Separation ``Q(n,1) epsilon - 2^-n`` between stabilizer and epsilon-far inputs."""
    return float(q_nk(n, 1)) * epsilon - 2.0**-n


def tester_trials(g: float, delta: float) -> int:
    """Hoeffding count for half-width g/2: ceil(2 ln(2/delta) / g^2)."""
    return math.ceil(2 * math.log(2 / delta) / g**2)


def check_preconditions(n: int, epsilon: float, delta: float) -> float:
    if n < 3:
        raise PreconditionError(f"n must be at least 3, got {n}")
    if not 0 < delta < 1:
        raise PreconditionError(f"delta must lie in (0, 1), got {delta}")
    if not 0 < epsilon <= 1:
        raise PreconditionError(f"epsilon must lie in (0, 1], got {epsilon}")
    if epsilon <= 3 * 2.0**-n:
        raise PreconditionError(f"epsilon={epsilon} must exceed 3*2^-n = {3 * 2.0**-n}")
    g = gap(n, epsilon)
    if g <= 0:
        raise PreconditionError(f"gap Q(n,1)*epsilon - 2^-n = {g} is not positive")
    return g


@dataclass
class TestVerdict:
    __test__ = False  # keep pytest from collecting this class

    decision: str
    estimate: float
    threshold: float
    gap: float
    copies_used: int
    trials: int
    n: int
    K: int
    epsilon: float
    delta: float
    seed: int
    stabilizer_value: Fraction

    def to_dict(self) -> dict:
        d = asdict(self)
        d["stabilizer_value"] = {
            "rational": fraction_str(self.stabilizer_value),
            "float": float(self.stabilizer_value),
        }
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def test_stabilizer(
    src: StateSource,
    n: int,
    epsilon: float,
    delta: float,
    seed: int,
    workers: int | None = None,
    records_out: list | None = None,
) -> TestVerdict:
    """Accept ("stabilizer") iff the estimate is at most stabilizer_value + g/2."""
    g = check_preconditions(n, epsilon, delta)
    K = 5 * n
    sv = stabilizer_value(n, K)
    threshold = float(sv) + g / 2
    trials = tester_trials(g, delta)
    rep = estimate_avg_spanning(src, n, K, g / 2, delta, seed, workers, trials=trials, records_out=records_out)
    return TestVerdict(
        decision="stabilizer" if rep.estimate <= threshold else "far",
        estimate=rep.estimate,
        threshold=threshold,
        gap=g,
        copies_used=rep.copies_used,
        trials=trials,
        n=n,
        K=K,
        epsilon=epsilon,
        delta=delta,
        seed=seed,
        stabilizer_value=sv,
    )


test_stabilizer.__test__ = False
