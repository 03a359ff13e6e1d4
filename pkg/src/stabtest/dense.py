"""Dense state-vector routines for small n.

Labels follow :mod:`stabtest.pauli`; tables indexed ``[a, b]`` hold the
value for label ``a << n | b``.
"""

from __future__ import annotations

import json
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy.linalg import hadamard

from .clifford import StabilizerState, cnot, hadamard as h_gate, phase_gate
from .f2 import Subspace, enumerate_subspace
from .pauli import apply_pauli

MAX_TABLE_QUBITS = 10
MAX_DENSE_QUBITS = 12
NORM_TOL_LOAD = 1e-6
NORM_TOL = 1e-12
M_PSI_TOL = 1e-10


def num_qubits(psi: np.ndarray) -> int:
    dim = len(psi)
    n = dim.bit_length() - 1
    if dim != 1 << n or n < 1:
        raise ValueError("state length must be a power of two >= 2")
    return n


def check_state(psi, tol: float = NORM_TOL) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    num_qubits(psi)
    if abs(np.vdot(psi, psi).real - 1.0) > tol:
        raise ValueError("state is not normalized")
    return psi


def _guard(n: int, limit: int):
    if n > limit:
        raise ValueError(f"dense routine limited to n <= {limit}, got {n}")


def expectations(psi) -> np.ndarray:
    """Table ``E[a, b] = <psi| P_(a|b) |psi>`` (real)."""
    psi = np.asarray(psi, dtype=complex)
    n = num_qubits(psi)
    _guard(n, MAX_TABLE_QUBITS)
    dim = 1 << n
    idx = np.arange(dim)
    # F[a, k] = conj(psi[k ^ a]) psi[k]; a Walsh-Hadamard transform over k gives the Z-part
    f = np.conj(psi[idx[:, None] ^ idx[None, :]]) * psi[None, :]
    e = f @ hadamard(dim)
    ab = _popcounts(idx[:, None] & idx[None, :])
    e = e * (1j ** (ab % 4))
    return e.real


@lru_cache(maxsize=None)
def _popcount_table(bits: int) -> np.ndarray:
    idx = np.arange(1 << bits)
    out = np.zeros(1 << bits, dtype=np.int64)
    for k in range(bits):
        out += (idx >> k) & 1
    return out


def _popcounts(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=np.int64)
    bits = max(1, int(v.max()).bit_length()) if v.size else 1
    return _popcount_table(bits)[v]


def char_distribution(psi) -> np.ndarray:
    """Table ``p[a, b] = 2^-n <psi|P_(a|b)|psi>^2``."""
    e = expectations(psi)
    return e**2 / e.shape[0]


def expectation(psi, x: int) -> float:
    psi = np.asarray(psi, dtype=complex)
    n = num_qubits(psi)
    _guard(n, MAX_DENSE_QUBITS)
    return float(np.vdot(psi, apply_pauli(x, n, psi)).real)


def char_value(psi, x: int) -> float:
    n = num_qubits(np.asarray(psi))
    return expectation(psi, x) ** 2 / (1 << n)


def subspace_weight(psi, h: Subspace | Iterable[int]) -> float:
    """Total characteristic-distribution weight on a subspace of labels."""
    psi = np.asarray(psi, dtype=complex)
    n = num_qubits(psi)
    if not isinstance(h, Subspace):
        h = Subspace(2 * n, h)
    if h.ambient_dim != 2 * n:
        raise ValueError("subspace must live in F_2^{2n}")
    labels = enumerate_subspace(h)
    if n <= MAX_TABLE_QUBITS:
        p = char_distribution(psi)
        return float(p[labels >> n, labels & ((1 << n) - 1)].sum())
    return float(sum(char_value(psi, int(x)) for x in labels))


def born(psi) -> np.ndarray:
    return np.abs(np.asarray(psi, dtype=complex)) ** 2


def diff_distribution(psi) -> np.ndarray:
    """``r(a) = sum_b p(a, b)``: law of the XOR of two computational outcomes."""
    return char_distribution(psi).sum(axis=1)


def m_psi(psi) -> list[int]:
    """Labels with squared expectation strictly above 1/2 (beyond a 1e-10 guard)."""
    psi = np.asarray(psi, dtype=complex)
    n = num_qubits(psi)
    _guard(n, 8)
    e2 = expectations(psi) ** 2
    a, b = np.nonzero(e2 > 0.5 + M_PSI_TOL)
    return sorted(int(x) for x in (a << n) | b)


def fourier_char(psi, v: int, w: int) -> float:
    """``4^-n sum_(a,b) p(a,b) (-1)^(a.v + b.w)`` by direct summation."""
    psi = np.asarray(psi, dtype=complex)
    n = num_qubits(psi)
    _guard(n, 6)
    p = char_distribution(psi)
    idx = np.arange(1 << n)
    sa = 1 - 2 * (_popcounts(idx & v) & 1)
    sb = 1 - 2 * (_popcounts(idx & w) & 1)
    return float(sa @ p @ sb) / 4**n


# stabilizer enumeration ----------------------------------------------------------


@lru_cache(maxsize=None)
def enumerate_stabilizer_states(n: int) -> tuple[StabilizerState, ...]:
    """All n-qubit stabilizer states, by orbit closure of |0^n> under H, S, CNOT."""
    _guard(n, 3)
    gates = [h_gate(n, j) for j in range(n)] + [phase_gate(n, j) for j in range(n)]
    gates += [cnot(n, c, t) for c in range(n) for t in range(n) if c != t]
    start = StabilizerState.zero(n)
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for s in frontier:
            for g in gates:
                s2 = s.apply(g)
                if s2 not in seen:
                    seen.add(s2)
                    nxt.append(s2)
        frontier = nxt
    return tuple(sorted(seen, key=lambda s: (s.rows, s.signs)))


@lru_cache(maxsize=None)
def stabilizer_vectors(n: int) -> np.ndarray:
    """Rows are the dense vectors of :func:`enumerate_stabilizer_states`."""
    return np.array([s.to_statevector() for s in enumerate_stabilizer_states(n)])


def stabilizer_fidelity(psi) -> float:
    """Largest squared overlap with a stabilizer state (exhaustive, n <= 3)."""
    psi = np.asarray(psi, dtype=complex)
    n = num_qubits(psi)
    _guard(n, 3)
    return float(np.max(np.abs(stabilizer_vectors(n).conj() @ psi) ** 2))


# state constructors ------------------------------------------------------------


def haar_state(n: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(1 << n) + 1j * rng.standard_normal(1 << n)
    return v / np.linalg.norm(v)


def t_state() -> np.ndarray:
    """T gate applied to |+>."""
    return np.array([1.0, np.exp(1j * np.pi / 4)]) / np.sqrt(2)


def single_qubit_state(name: str) -> np.ndarray:
    s = 1 / np.sqrt(2)
    table = {
        "0": [1, 0], "1": [0, 1], "+": [s, s], "-": [s, -s],
        "i": [s, 1j * s], "-i": [s, -1j * s], "T": t_state(),
    }
    if name not in table:
        raise ValueError(f"unknown single-qubit state {name!r}")
    return np.asarray(table[name], dtype=complex)


def tensor(*states: Sequence[complex]) -> np.ndarray:
    out = np.array([1.0 + 0j])
    for s in states:
        out = np.kron(out, np.asarray(s, dtype=complex))
    return out


def product_t_state(m: int) -> np.ndarray:
    return tensor(*([t_state()] * m))


def load_state(path: str | Path) -> np.ndarray:
    """Read ``{"n": int, "amps": [[re, im], ...]}``; normalization must hold to 1e-6."""
    doc = json.loads(Path(path).read_text())
    n = int(doc["n"])
    amps = np.asarray(doc["amps"], dtype=float)
    if amps.shape != (1 << n, 2):
        raise ValueError(f"expected {1 << n} [re, im] pairs")
    psi = amps[:, 0] + 1j * amps[:, 1]
    if abs(np.vdot(psi, psi).real - 1.0) > NORM_TOL_LOAD:
        raise ValueError("amplitudes are not normalized")
    return psi / np.linalg.norm(psi)


def save_state(psi, path: str | Path) -> None:
    psi = np.asarray(psi, dtype=complex)
    doc = {"n": num_qubits(psi), "amps": [[float(z.real), float(z.imag)] for z in psi]}
    Path(path).write_text(json.dumps(doc))

