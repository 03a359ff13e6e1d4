"""Difference sampling, spanning trials and the average-spanning-probability estimator."""

from __future__ import annotations

import csv
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import numpy as np

from .clifford import CliffordTableau, StabilizerState, random_clifford
from .counting import (
    fraction_str,
    hoeffding_halfwidth,
    hoeffding_trials,
    q_nk,
    stabilizer_value,
)
from .dense import check_state, expectations, num_qubits
from .f2 import spans_full
from .pauli import complete_to_lagrangian

WORKERS_ENV = "STABTEST_WORKERS"


class SourceExhausted(RuntimeError):
    """A finite sample stream ran out of copies."""


class StateSource:
    """Single-copy access: each measured outcome consumes one copy of the state."""

    n: int
    parallel_safe = True

    def __init__(self):
        self.copies_used = 0

    def measure(self, c: CliffordTableau, rng: np.random.Generator, size: int) -> np.ndarray:
        """``size`` computational-basis outcomes of ``C|psi>``, one copy each."""
        out = self._measure(c, rng, size)
        self.copies_used += size
        return out

    def _measure(self, c, rng, size):
        raise NotImplementedError


class StabilizerSource(StateSource):
    """Tableau backend for stabilizer inputs."""

    def __init__(self, state: StabilizerState):
        super().__init__()
        self.state = state
        self.n = state.n
        self._cache: tuple[CliffordTableau, StabilizerState] | None = None

    def _measure(self, c, rng, size):
        if self._cache is None or self._cache[0] is not c:
            self._cache = (c, self.state.apply(c))
        return self._cache[1].sample(rng, size)


class DenseSource(StateSource):
    """State-vector backend for arbitrary pure inputs at small n."""

    def __init__(self, psi):
        super().__init__()
        self.psi = check_state(psi, 1e-9)
        self.n = num_qubits(self.psi)
        self._cache: tuple[CliffordTableau, np.ndarray] | None = None

    def _measure(self, c, rng, size):
        if self._cache is None or self._cache[0] is not c:
            p = np.abs(c.apply_to_state(self.psi)) ** 2
            self._cache = (c, np.cumsum(p / p.sum()))
        cdf = self._cache[1]
        idx = np.searchsorted(cdf, rng.random(size), side="right")
        return np.minimum(idx, len(cdf) - 1)


class StreamSource(StateSource):
    """External outcomes, consumed in order; the device is assumed to apply C itself."""

    parallel_safe = False

    def __init__(self, n: int, outcomes: Iterable[int]):
        super().__init__()
        self.n = n
        self._it: Iterator[int] = iter(outcomes)

    def _measure(self, c, rng, size):
        out = np.empty(size, dtype=np.int64)
        for i in range(size):
            try:
                out[i] = next(self._it)
            except StopIteration:
                raise SourceExhausted(f"stream ended after {self.copies_used + i} copies") from None
        return out


def diff_sample(src: StateSource, c: CliffordTableau, rng: np.random.Generator, size: int | None = None):
    """XOR of two outcomes of ``C|psi>``; two copies per returned vector."""
    k = 1 if size is None else size
    s = src.measure(c, rng, 2 * k)
    out = s[0::2] ^ s[1::2]
    return int(out[0]) if size is None else out


@dataclass
class TrialRecord:
    trial: int
    clifford_seed: str
    spanned: bool
    copies_used: int
    samples: tuple[int, ...] = field(default=(), repr=False)


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Independent substream for one trial, so results do not depend on scheduling."""
    return np.random.default_rng([seed, trial])


def spanning_trial(
    src: StateSource,
    n: int,
    K: int,
    rng: np.random.Generator,
    clifford: CliffordTableau | None = None,
    trial: int = 0,
    seed_tag: str = "",
    keep_samples: bool = False,
) -> TrialRecord:
    """Draw a random Clifford (unless given), take K difference samples, test spanning."""
    if K < n:
        raise ValueError(f"need K >= n (spanning is impossible with K={K} < n={n})")
    if src.n != n:
        raise ValueError("source has a different qubit count")
    c = random_clifford(n, rng) if clifford is None else clifford
    samples = [int(v) for v in diff_sample(src, c, rng, K)]
    return TrialRecord(
        trial=trial,
        clifford_seed=seed_tag,
        spanned=spans_full(samples, n),
        copies_used=2 * K,
        samples=tuple(samples) if keep_samples else (),
    )


def default_workers() -> int:
    return max(1, int(os.environ.get(WORKERS_ENV, "1")))


def _run_chunk(src, n, K, seed, start, stop, fixed_identity, keep):
    ident = CliffordTableau.identity(n) if fixed_identity else None
    out = []
    for t in range(start, stop):
        rec = spanning_trial(src, n, K, trial_rng(seed, t), ident, t, f"{seed}:{t}", keep)
        out.append(rec)
    return out


def run_trials(
    src: StateSource,
    n: int,
    K: int,
    trials: int,
    seed: int,
    workers: int | None = None,
    random_cliffords: bool = True,
    keep_samples: bool = False,
) -> list[TrialRecord]:
    """Run independent trials; identical output for any worker count."""
    workers = default_workers() if workers is None else max(1, workers)
    if workers == 1 or trials < 2 * workers or not src.parallel_safe:
        recs = _run_chunk(src, n, K, seed, 0, trials, not random_cliffords, keep_samples)
        return recs
    bounds = np.linspace(0, trials, 4 * workers + 1).astype(int)
    with ProcessPoolExecutor(max_workers=workers) as ex:
        futs = [
            ex.submit(_run_chunk, src, n, K, seed, int(a), int(b), not random_cliffords, keep_samples)
            for a, b in zip(bounds[:-1], bounds[1:])
            if b > a
        ]
        recs = [r for f in futs for r in f.result()]
    src.copies_used += sum(r.copies_used for r in recs)
    return recs


def write_trace(records: Sequence[TrialRecord], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["trial", "clifford_seed", "spanned", "copies"])
        for r in records:
            w.writerow([r.trial, r.clifford_seed, int(r.spanned), r.copies_used])


@dataclass
class EstimateReport:
    n: int
    K: int
    trials: int
    successes: int
    estimate: float
    hoeffding_halfwidth: float
    stabilizer_value: Fraction
    seed: int
    delta: float
    copies_used: int

    def to_dict(self) -> dict:
        d = asdict(self)
        d["stabilizer_value"] = {
            "rational": fraction_str(self.stabilizer_value),
            "float": float(self.stabilizer_value),
        }
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def estimate_avg_spanning(
    src: StateSource,
    n: int,
    K: int,
    epsilon_est: float,
    delta: float,
    seed: int,
    workers: int | None = None,
    trials: int | None = None,
    records_out: list | None = None,
) -> EstimateReport:
    """Monte-Carlo estimate of the average spanning probability.

    By default the trial count is the two-sided Hoeffding count for
    ``epsilon_est`` and ``delta``; passing ``trials`` overrides it and the
    reported half-width is then the one that count supports.
    """
    if K < n:
        raise ValueError("need K >= n")
    if not (0 < epsilon_est < 1 and 0 < delta < 1):
        raise ValueError("need 0 < epsilon_est < 1 and 0 < delta < 1")
    if trials is None:
        trials = hoeffding_trials(epsilon_est, delta)
    recs = run_trials(src, n, K, trials, seed, workers)
    if records_out is not None:
        records_out.extend(recs)
    succ = sum(r.spanned for r in recs)
    return EstimateReport(
        n=n,
        K=K,
        trials=trials,
        successes=succ,
        estimate=succ / trials,
        hoeffding_halfwidth=hoeffding_halfwidth(trials, delta),
        stabilizer_value=stabilizer_value(n, K),
        seed=seed,
        delta=delta,
        copies_used=sum(r.copies_used for r in recs),
    )


def union_bound_lower(psi, K: int) -> float:
    """``1 - sum_{b != 0} ((1 + <Z^b>^2) / 2)^K``, a lower bound on the spanning probability."""
    psi = np.asarray(psi, dtype=complex)
    n = num_qubits(psi)
    if n > 8:
        raise ValueError("union bound limited to n <= 8")
    e = expectations(psi)
    z = e[0, 1:] ** 2
    return float(1.0 - np.sum(((1.0 + z) / 2.0) ** K))


def lagrangian_weight(psi) -> tuple[float, list[int]]:
    """Weight of the characteristic distribution on the completed Lagrangian of large labels."""
    from .dense import m_psi, subspace_weight

    psi = np.asarray(psi, dtype=complex)
    n = num_qubits(psi)
    m = m_psi(psi)
    lag = complete_to_lagrangian(m, n, candidates=m)
    return subspace_weight(psi, lag), list(lag.basis)


@dataclass
class GapReport:
    n: int
    K: int
    trials: int
    estimate: float
    stabilizer_value: float
    lhs: float
    rhs: float
    sigma: float
    p_M: float
    lagrangian: list[int]
    holds: bool

    def to_dict(self) -> dict:
        return asdict(self)


def gap_diagnostic(psi, K: int, trials: int, seed: int, workers: int | None = None) -> GapReport:
    """Compare the measured excess over the stabilizer value with its lower bound.

    ``lhs`` is the Monte-Carlo average spanning probability minus the
    stabilizer value; ``rhs = Q(n,1)(1 - p(M)) - 2^-n`` where M completes the
    set of labels with squared expectation above 1/2. ``holds`` checks
    ``lhs >= rhs - 3 sigma``.
    """
    psi = check_state(psi, 1e-9)
    n = num_qubits(psi)
    if not 3 <= n <= 8:
        raise ValueError("gap diagnostic needs 3 <= n <= 8")
    if K < 5 * n:
        raise ValueError("gap diagnostic needs K >= 5n")
    rep = estimate_avg_spanning(DenseSource(psi), n, K, 0.5, 0.5, seed, workers, trials=trials)
    sv = float(stabilizer_value(n, K))
    p_m, basis = lagrangian_weight(psi)
    rhs = float(q_nk(n, 1)) * (1 - p_m) - 2.0**-n
    sigma = math.sqrt(max(rep.estimate * (1 - rep.estimate), 1e-12) / trials)
    lhs = rep.estimate - sv
    return GapReport(n, K, trials, rep.estimate, sv, lhs, rhs, sigma, p_m, basis, lhs >= rhs - 3 * sigma)
