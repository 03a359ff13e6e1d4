import numpy as np

from stabtest.clifford import StabilizerState, random_clifford
from stabtest.dense import haar_state, stabilizer_fidelity, product_t_state
from stabtest.spanning import DenseSource, StabilizerSource
from stabtest.tester import PreconditionError, test_stabilizer

rng = np.random.default_rng(3)

# A random six-qubit stabilizer state is accepted
st = StabilizerState.from_tableau(random_clifford(6, rng))
v = test_stabilizer(StabilizerSource(st), 6, 0.3, 0.05, seed=4)
print(v.decision, "trials", v.trials, "copies", v.copies_used, "threshold", round(v.threshold, 4))

# A Haar-random five-qubit state is rejected
v = test_stabilizer(DenseSource(haar_state(5, rng)), 5, 0.4, 0.05, seed=5)
print(v.decision, "estimate", round(v.estimate, 4), "threshold", round(v.threshold, 4))

# At three qubits the distance guarantee needs epsilon above 3/8
psi = product_t_state(3)
print("F_Stab(|T>^3) =", round(stabilizer_fidelity(psi), 5))
try:
    test_stabilizer(DenseSource(psi), 3, 0.3, 0.05, seed=6)
except PreconditionError as e:
    print("rejected parameters:", e)
v = test_stabilizer(DenseSource(psi), 3, 0.9, 0.05, seed=6)
print("epsilon 0.9:", v.decision, "trials", v.trials)
