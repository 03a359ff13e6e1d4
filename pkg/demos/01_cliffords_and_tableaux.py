import numpy as np

from stabtest.clifford import StabilizerState, hadamard, cnot, random_clifford
from stabtest.pauli import format_pauli, parse_pauli

rng = np.random.default_rng(1)

# A Bell pair from |00> with H then CNOT
bell = StabilizerState.zero(2).apply(hadamard(2, 0)).apply(cnot(2, 0, 1))
print("Bell stabilizers:", [("-" if s else "+") + format_pauli(r, 2) for r, s in zip(bell.rows, bell.signs)])
print("Bell samples:", bell.sample(rng, 10))

# Conjugating Paulis through a random three-qubit Clifford
c = random_clifford(3, rng)
for p in ["XII", "IZI", "YYZ"]:
    sign, image = c.conjugate(parse_pauli(p)[0])
    print(p, "->", ("-" if sign else "+") + format_pauli(image, 3))

# The tableau agrees with its dense unitary
u = c.to_unitary()
psi = StabilizerState.zero(3).apply(c).to_statevector()
print("overlap with U|000>:", abs(np.vdot(u[:, 0], psi)))
