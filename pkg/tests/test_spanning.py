import math

import numpy as np
import pytest
from scipy.stats import chisquare

from stabtest import counting, dense
from stabtest.clifford import CliffordTableau, StabilizerState, hadamard, random_clifford
from stabtest.f2 import Subspace, enumerate_subspace, iter_subspaces, spans_full
from stabtest.spanning import (
    DenseSource,
    SourceExhausted,
    StabilizerSource,
    StreamSource,
    diff_sample,
    estimate_avg_spanning,
    gap_diagnostic,
    run_trials,
    spanning_trial,
    union_bound_lower,
    write_trace,
)


def plus_state(n):
    s = StabilizerState.zero(n)
    for j in range(n):
        s = s.apply(hadamard(n, j))
    return s


def test_diff_sample_examples():
    rng = np.random.default_rng(0)
    ident = CliffordTableau.identity(3)
    zero = StabilizerSource(StabilizerState.zero(3))
    assert all(diff_sample(zero, ident, rng) == 0 for _ in range(20))
    assert zero.copies_used == 40
    counts = np.bincount(diff_sample(StabilizerSource(plus_state(3)), ident, rng, 16_000), minlength=8)
    assert chisquare(counts).pvalue > 1e-3


def test_stabilizer_differences_are_linear():
    rng = np.random.default_rng(1)
    for _ in range(20):
        st = StabilizerState.from_tableau(random_clifford(3, rng))
        out = set(diff_sample(StabilizerSource(st), CliffordTableau.identity(3), rng, 400).tolist())
        assert 0 in out
        assert Subspace(3, out).dim == len(out).bit_length() - 1  # closed under XOR


def test_dense_and_tableau_backends_agree():
    rng = np.random.default_rng(2)
    st = StabilizerState.from_tableau(random_clifford(3, rng))
    c = random_clifford(3, rng)
    a = np.bincount(StabilizerSource(st).measure(c, rng, 20_000), minlength=8) / 20_000
    b = np.bincount(DenseSource(st.to_statevector()).measure(c, rng, 20_000), minlength=8) / 20_000
    assert 0.5 * np.abs(a - b).sum() < 0.03


def test_trial_guard_and_accounting():
    src = StabilizerSource(StabilizerState.zero(3))
    with pytest.raises(ValueError):
        spanning_trial(src, 3, 2, np.random.default_rng(0))
    rec = spanning_trial(src, 3, 9, np.random.default_rng(0), keep_samples=True)
    assert rec.copies_used == 18 and len(rec.samples) == 9
    assert rec.spanned == spans_full(rec.samples, 3)


def test_stream_source_exhausts():
    src = StreamSource(2, [1, 2, 3])
    rng = np.random.default_rng(0)
    assert diff_sample(src, CliffordTableau.identity(2), rng) == 3
    with pytest.raises(SourceExhausted):
        diff_sample(src, CliffordTableau.identity(2), rng)


def test_spanning_rate_n2_K10():
    trials = 100_000
    rep = estimate_avg_spanning(StabilizerSource(StabilizerState.zero(2)), 2, 10, 0.5, 0.05, 11, trials=trials)
    sigma = math.sqrt(0.25 / trials)
    assert abs(rep.estimate - float(counting.stabilizer_value(2, 10))) <= 3 * sigma


def test_plus_state_spanning_matches_full_rank_product():
    n, K, trials = 3, 5, 20_000
    recs = run_trials(StabilizerSource(plus_state(n)), n, K, trials, 3, random_cliffords=False)
    rate = np.mean([r.spanned for r in recs])
    exact = float(counting.full_rank_probability(n, K))
    assert abs(rate - exact) <= 3 * math.sqrt(exact * (1 - exact) / trials)


def test_spanning_inside_subspace_law():
    """Pr(all K samples in H) = p(H)^K for a fixed distribution."""
    rng = np.random.default_rng(4)
    psi = dense.haar_state(3, rng)
    src = DenseSource(psi)
    r = dense.diff_distribution(psi)
    K, trials = 3, 20_000
    samples = diff_sample(src, CliffordTableau.identity(3), rng, K * trials).reshape(trials, K)
    for h in list(iter_subspaces(3, 2))[:5]:
        els = set(enumerate_subspace(h).tolist())
        inside = np.mean([all(int(v) in els for v in row) for row in samples])
        exact = r[list(els)].sum() ** K
        assert abs(inside - exact) <= 4 * math.sqrt(exact * (1 - exact) / trials) + 1e-12


def test_hoeffding_count_and_copies():
    src = StabilizerSource(StabilizerState.zero(4))
    rep = estimate_avg_spanning(src, 4, 20, 0.05, 0.05, 0)
    assert rep.trials == 738
    assert rep.copies_used == 2 * 20 * 738 == src.copies_used


def test_estimator_within_halfwidth_most_seeds():
    hits = 0
    exact = float(counting.stabilizer_value(4, 20))
    for seed in range(20):
        rep = estimate_avg_spanning(StabilizerSource(StabilizerState.zero(4)), 4, 20, 0.05, 0.05, seed)
        hits += abs(rep.estimate - exact) <= rep.hoeffding_halfwidth
    assert hits >= 19


def test_stabilizer_value_same_for_every_stabilizer_state():
    rng = np.random.default_rng(7)
    exact = float(counting.stabilizer_value(3, 6))
    for _ in range(3):
        st = StabilizerState.from_tableau(random_clifford(3, rng))
        rep = estimate_avg_spanning(StabilizerSource(st), 3, 6, 0.5, 0.05, int(rng.integers(1 << 30)), trials=20_000)
        assert abs(rep.estimate - exact) <= 3 * math.sqrt(0.25 / 20_000)


def test_determinism_across_workers(tmp_path):
    src = StabilizerSource(StabilizerState.zero(3))
    a = run_trials(src, 3, 15, 400, 9, workers=1)
    b = run_trials(StabilizerSource(StabilizerState.zero(3)), 3, 15, 400, 9, workers=2)
    assert [r.spanned for r in a] == [r.spanned for r in b]
    write_trace(a, tmp_path / "t.csv")
    lines = (tmp_path / "t.csv").read_text().splitlines()
    assert lines[0] == "trial,clifford_seed,spanned,copies" and len(lines) == 401


def test_union_bound_examples():
    n, K = 3, 12
    plus = np.ones(8) / np.sqrt(8)
    assert union_bound_lower(plus, K) == pytest.approx(1 - 7 * 0.5**K)
    zero = np.eye(8)[0]
    assert union_bound_lower(zero, K) <= 0


def test_union_bound_below_monte_carlo():
    rng = np.random.default_rng(5)
    for _ in range(3):
        psi = dense.haar_state(3, rng)
        trials = 20_000
        recs = run_trials(DenseSource(psi), 3, 15, trials, int(rng.integers(1 << 30)), random_cliffords=False)
        rate = np.mean([r.spanned for r in recs])
        assert union_bound_lower(psi, 15) <= rate + 3 * math.sqrt(0.25 / trials)


def test_gap_diagnostic_stabilizer_input():
    st = StabilizerState.from_tableau(random_clifford(3, np.random.default_rng(0))).to_statevector()
    rep = gap_diagnostic(st, 15, 5000, 1)
    assert rep.p_M == pytest.approx(1)
    assert rep.rhs == pytest.approx(-1 / 8)
    assert rep.holds


def test_gap_diagnostic_fidelity_form():
    psi = dense.product_t_state(3)
    rep = gap_diagnostic(psi, 15, 2000, 2)
    f = dense.stabilizer_fidelity(psi)
    rhs_fid = float(counting.q_nk(3, 1)) * (1 - f) - 1 / 8
    assert rhs_fid <= rep.rhs
    with pytest.raises(ValueError):
        gap_diagnostic(psi, 14, 10, 0)
