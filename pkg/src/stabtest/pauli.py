"""Phaseless Pauli labels on n qubits.

A label is an int ``x = a << n | b`` encoding the vector (a|b) in F_2^{2n}.
Within ``a`` and ``b`` qubit 1 is the most significant bit, matching the
computational-basis index convention used everywhere else in the package.
The operator attached to a label is ``P_x = i^{a.b} X^a Z^b``, which is
Hermitian and equals a tensor product of I, X, Y, Z.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .f2 import Subspace, symplectic_int

MAX_DENSE_QUBITS = 12

_LETTERS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}


def make_label(a: int, b: int, n: int) -> int:
    return (a << n) | b


def split_label(x: int, n: int) -> tuple[int, int]:
    """Return the (X-part, Z-part) of a label."""
    return x >> n, x & ((1 << n) - 1)


def x_label(j: int, n: int) -> int:
    """Label of X on qubit j (0-based)."""
    return 1 << (2 * n - 1 - j)


def z_label(j: int, n: int) -> int:
    """Label of Z on qubit j (0-based)."""
    return 1 << (n - 1 - j)


def all_z_basis(n: int) -> list[int]:
    return [z_label(j, n) for j in range(n)]


def all_x_basis(n: int) -> list[int]:
    return [x_label(j, n) for j in range(n)]


def parse_pauli(s: str) -> tuple[int, int]:
    """Parse a string like ``"XIZY"`` into ``(label, n)``; leftmost letter is qubit 1."""
    s = s.strip().upper()
    if not s or any(c not in _LETTERS for c in s):
        raise ValueError(f"not a Pauli string: {s!r}")
    n = len(s)
    a = b = 0
    for c in s:
        ai, bi = _LETTERS[c]
        a = (a << 1) | ai
        b = (b << 1) | bi
    return make_label(a, b, n), n


def format_pauli(x: int, n: int) -> str:
    a, b = split_label(x, n)
    out = []
    for j in range(n):
        bit = n - 1 - j
        out.append("IZXY"[((a >> bit) & 1) * 2 + ((b >> bit) & 1)])
    return "".join(out)


def weight(x: int, n: int) -> int:
    a, b = split_label(x, n)
    return (a | b).bit_count()


def product_phase(x: int, y: int, n: int) -> int:
    """Exponent e in Z_4 with ``P_x P_y = i^e P_{x^y}``."""
    low = (1 << n) - 1
    a, b = x >> n, x & low
    c, d = y >> n, y & low
    e = (a & b).bit_count() + (c & d).bit_count() + 2 * (b & c).bit_count()
    e -= ((a ^ c) & (b ^ d)).bit_count()
    return e & 3


def pauli_product(x: int, y: int, n: int) -> tuple[int, int]:
    """Return ``(e, z)`` with ``P_x P_y = i^e P_z``."""
    return product_phase(x, y, n), x ^ y


def commutes(x: int, y: int, n: int) -> bool:
    return symplectic_int(x, y, n) == 0


def pauli_matrix(x: int, n: int) -> np.ndarray:
    """Dense 2^n x 2^n matrix of ``P_x``."""
    if n > MAX_DENSE_QUBITS:
        raise ValueError(f"dense Pauli matrices limited to n <= {MAX_DENSE_QUBITS}")
    a, b = split_label(x, n)
    dim = 1 << n
    cols = np.arange(dim)
    rows = cols ^ a
    signs = 1 - 2 * (_popcount_array(cols & b) & 1)
    m = np.zeros((dim, dim), dtype=complex)
    m[rows, cols] = (1j ** (a & b).bit_count()) * signs
    return m


def apply_pauli(x: int, n: int, psi: np.ndarray) -> np.ndarray:
    """Return ``P_x psi`` without forming the matrix."""
    a, b = split_label(x, n)
    idx = np.arange(1 << n)
    src = idx ^ a
    signs = 1 - 2 * (_popcount_array(src & b) & 1)
    return (1j ** (a & b).bit_count()) * signs * psi[src]


def _popcount_array(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=np.int64)
    out = np.zeros_like(v)
    while np.any(v):
        out += v & 1
        v = v >> 1
    return out


def is_isotropic(labels: Iterable[int], n: int) -> bool:
    labels = list(labels)
    for i, u in enumerate(labels):
        for v in labels[i + 1:]:
            if symplectic_int(u, v, n):
                return False
    return True


def symplectic_complement(h: Subspace, n: int) -> Subspace:
    """{y : [x, y] = 0 for all x in h}."""
    # the symplectic form is the dot product after swapping the X and Z halves
    low = (1 << n) - 1
    perp = h.complement()
    return Subspace(2 * n, [((v & low) << n) | (v >> n) for v in perp.basis])


def complete_to_lagrangian(
    labels: Iterable[int], n: int, candidates: Sequence[int] | None = None
) -> Subspace:
    """Extend an isotropic set of labels to a Lagrangian subspace.

    Greedy: candidates supplied by the caller are tried first, then the
    all-Z labels, then the basis of the current symplectic complement.
    Each candidate is kept when it commutes with everything kept so far and
    is independent of it. The result is deterministic.
    """
    labels = list(labels)
    if not is_isotropic(labels, n):
        raise ValueError("input labels are not isotropic")
    cur = Subspace(2 * n, labels)
    pool = list(candidates or []) + all_z_basis(n)
    for c in pool:
        if cur.dim == n:
            return cur
        if c in cur:
            continue
        if all(symplectic_int(c, g, n) == 0 for g in cur.basis):
            cur = cur.extend(c)
    while cur.dim < n:
        # the complement strictly contains cur until it is Lagrangian
        for c in symplectic_complement(cur, n).basis:
            if c not in cur:
                cur = cur.extend(c)
                break
    return cur


def is_lagrangian(h: Subspace, n: int) -> bool:
    return h.dim == n and is_isotropic(h.basis, n)


def clifford_action(tableau, x: int) -> int:
    """Phaseless label y with ``C P_x C^dag = +-P_y``."""
    return tableau.act(x)
