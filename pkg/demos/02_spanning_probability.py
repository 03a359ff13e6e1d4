import numpy as np

from stabtest import counting, dense
from stabtest.clifford import StabilizerState
from stabtest.spanning import DenseSource, StabilizerSource, estimate_avg_spanning, union_bound_lower

# Every stabilizer state has the same average spanning probability
for n in (3, 4, 5):
    K = 5 * n
    rep = estimate_avg_spanning(StabilizerSource(StabilizerState.zero(n)), n, K, 0.05, 0.05, seed=0)
    print(f"n={n} K={K}: estimate {rep.estimate:.4f}, exact {float(rep.stabilizer_value):.4f}, "
          f"copies {rep.copies_used}")

# The Q(n, 0) sequence decreases towards roughly 0.4194
print("Q(n,0):", [round(float(counting.q_nk(n, 0)), 6) for n in (1, 2, 4, 8, 16)])

# Magic states span more often
psi = dense.product_t_state(3)
rep = estimate_avg_spanning(DenseSource(psi), 3, 15, 0.05, 0.05, seed=1)
print(f"|T>^3: estimate {rep.estimate:.4f} against stabilizer value {float(rep.stabilizer_value):.4f}")

# A Haar state compared with the union-bound lower estimate
h = dense.haar_state(4, np.random.default_rng(2))
rep = estimate_avg_spanning(DenseSource(h), 4, 20, 0.05, 0.05, seed=2)
print(f"Haar n=4: estimate {rep.estimate:.4f}, union bound (no Clifford) {union_bound_lower(h, 20):.4f}")
