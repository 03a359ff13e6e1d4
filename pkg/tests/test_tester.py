import numpy as np
import pytest

from stabtest import counting, tester
from stabtest.clifford import StabilizerState
from stabtest.dense import haar_state
from stabtest.spanning import DenseSource, StabilizerSource
from stabtest.tester import PreconditionError, gap

run_tester = tester.test_stabilizer


def test_preconditions():
    src = StabilizerSource(StabilizerState.zero(4))
    with pytest.raises(PreconditionError):
        run_tester(src, 4, 2.0**-4, 0.05, 0)
    with pytest.raises(PreconditionError):
        run_tester(StabilizerSource(StabilizerState.zero(2)), 2, 0.9, 0.05, 0)
    with pytest.raises(PreconditionError):
        run_tester(src, 4, 0.5, 1.0, 0)


def test_gap_formula():
    assert gap(6, 0.3) == pytest.approx(float(counting.q_nk(6, 1)) * 0.3 - 1 / 64)
    # the trial count shrinks as the gap grows
    assert tester.tester_trials(0.2, 0.05) < tester.tester_trials(0.1, 0.05)


def test_verdict_fields_and_accounting():
    v = run_tester(StabilizerSource(StabilizerState.zero(5)), 5, 0.5, 0.1, 3)
    assert v.K == 25
    assert v.trials == tester.tester_trials(v.gap, 0.1)
    assert v.copies_used == 2 * v.K * v.trials
    assert v.threshold == pytest.approx(float(counting.stabilizer_value(5, 25)) + v.gap / 2)
    assert (v.decision == "stabilizer") == (v.estimate <= v.threshold)


def test_deterministic_under_seed():
    a = run_tester(StabilizerSource(StabilizerState.zero(4)), 4, 0.6, 0.1, 42)
    b = run_tester(StabilizerSource(StabilizerState.zero(4)), 4, 0.6, 0.1, 42)
    assert a == b


def test_haar_state_rejected():
    # a Haar state at n = 4 is far from every stabilizer state with high probability
    psi = haar_state(4, np.random.default_rng(0))
    v = run_tester(DenseSource(psi), 4, 0.5, 0.05, 1)
    assert v.decision == "far"
