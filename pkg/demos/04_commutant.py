import numpy as np

from stabtest import commutant as cm

# Counting stochastic Lagrangian subspaces
for t in range(2, 7):
    print(f"t={t}: |Sigma|={len(cm.enumerate_sigma(t))}, |O_t|={len(cm.enumerate_orthogonal(t))}")

# Partial transposes of a permutation operator
swap = cm.permutation_matrix([1, 0, 2])
rep = cm.pt_singular_check(swap, (0,), n=2)
print("swap, transposing copy 0: value", rep.expected_value, "multiplicity", rep.expected_multiplicity,
      "deviation", rep.max_deviation)
print("singular minor of a 3-cycle:", cm.find_singular_principal_submatrix(cm.permutation_matrix([1, 2, 0])))

# Six single-qubit stabilizer states with no weight on the orthogonal-group projector
states = cm.canonical_collection(1)
print("tr(Pi_O |phi><phi|) =", cm.counterexample_check(states))

# The Gram matrix at t=3, n=1
g = np.array(cm.gram(3, 1), dtype=int)
print(g)
print("rank", np.linalg.matrix_rank(g.astype(float)), "of", len(g))
