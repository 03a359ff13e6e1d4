"""Clifford tableaux, stabilizer states and uniform random Cliffords.

A tableau stores, for every generator of the Pauli group, its image under
conjugation: index ``j`` holds the image of X on qubit j and index ``n + j``
the image of Z on qubit j, each as a phaseless label plus a sign bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .f2 import BitMatrix, Subspace, symplectic_int
from .pauli import (
    apply_pauli,
    parse_pauli,
    product_phase,
    x_label,
    z_label,
)

MAX_DENSE_QUBITS = 10


class BitPool:
    """Serves uniform random bits drawn in bulk from a numpy Generator."""

    __slots__ = ("rng", "bits", "count")

    def __init__(self, rng: np.random.Generator):
        self.rng = rng
        self.bits = 0
        self.count = 0

    def take(self, k: int) -> int:
        if k > self.count:
            nbytes = max(32, (k + 7) // 8)
            self.bits = (self.bits << (8 * nbytes)) | int.from_bytes(self.rng.bytes(nbytes), "little")
            self.count += 8 * nbytes
        self.count -= k
        out = self.bits & ((1 << k) - 1)
        self.bits >>= k
        return out


def _conjugate(images: Sequence[int], signs: Sequence[int], x: int, n: int) -> tuple[int, int]:
    """Conjugate ``P_x`` by the tableau; return ``(sign, label)``."""
    low = (1 << n) - 1
    e = ((x >> n) & x & low).bit_count()
    acc = 0
    top = 2 * n - 1
    while x:
        bit = x.bit_length() - 1
        k = top - bit
        img = images[k]
        e += 2 * signs[k] + product_phase(acc, img, n)
        acc ^= img
        x ^= 1 << bit
    e &= 3
    if e & 1:
        raise ArithmeticError("conjugated Pauli is not Hermitian; tableau is invalid")
    return e >> 1, acc


@dataclass(frozen=True)
class CliffordTableau:
    n: int
    images: tuple[int, ...]
    signs: tuple[int, ...]

    def __post_init__(self):
        if len(self.images) != 2 * self.n or len(self.signs) != 2 * self.n:
            raise ValueError("tableau needs 2n images and 2n signs")

    @classmethod
    def identity(cls, n: int) -> "CliffordTableau":
        return cls(n, tuple(x_label(j, n) for j in range(n)) + tuple(z_label(j, n) for j in range(n)), (0,) * (2 * n))

    @property
    def symp(self) -> BitMatrix:
        """Symplectic matrix acting on labels; column k is the image of generator k."""
        return BitMatrix(self.images, 2 * self.n).T

    def is_symplectic(self) -> bool:
        n = self.n
        gens = CliffordTableau.identity(n).images
        for i in range(2 * n):
            for j in range(i + 1, 2 * n):
                if symplectic_int(self.images[i], self.images[j], n) != symplectic_int(gens[i], gens[j], n):
                    return False
        return True

    def act(self, x: int) -> int:
        """Phaseless image of a label."""
        acc = 0
        top = 2 * self.n - 1
        while x:
            bit = x.bit_length() - 1
            acc ^= self.images[top - bit]
            x ^= 1 << bit
        return acc

    def conjugate(self, x: int) -> tuple[int, int]:
        """Return ``(s, y)`` with ``C P_x C^dag = (-1)^s P_y``."""
        return _conjugate(self.images, self.signs, x, self.n)

    def compose(self, other: "CliffordTableau") -> "CliffordTableau":
        """Tableau of ``self . other`` (other acts first)."""
        if other.n != self.n:
            raise ValueError("qubit counts differ")
        imgs, sgns = [], []
        for img, s in zip(other.images, other.signs):
            s2, y = self.conjugate(img)
            imgs.append(y)
            sgns.append(s ^ s2)
        return CliffordTableau(self.n, tuple(imgs), tuple(sgns))

    def then(self, gate: "CliffordTableau") -> "CliffordTableau":
        """Apply ``gate`` after this Clifford."""
        return gate.compose(self)

    def inverse(self) -> "CliffordTableau":
        n = self.n
        m = 2 * n
        imgs = []
        for k in range(m):
            kk = (k + n) % m
            row = 0
            for c in range(m):
                row = (row << 1) | ((self.images[c] >> (m - 1 - kk)) & 1)
            # swap the X and Z halves
            imgs.append(((row & ((1 << n) - 1)) << n) | (row >> n))
        sgns = tuple(self.conjugate(u)[0] for u in imgs)
        return CliffordTableau(n, tuple(imgs), sgns)

    def __eq__(self, other) -> bool:
        return isinstance(other, CliffordTableau) and (self.n, self.images, self.signs) == (other.n, other.images, other.signs)

    def __hash__(self) -> int:
        return hash((self.n, self.images, self.signs))

    def to_unitary(self) -> np.ndarray:
        """Dense unitary, fixed up to a global phase (first nonzero entry of column 0 is real positive)."""
        n = self.n
        if n > MAX_DENSE_QUBITS:
            raise ValueError(f"dense unitaries limited to n <= {MAX_DENSE_QUBITS}")
        dim = 1 << n
        u = np.zeros((dim, dim), dtype=complex)
        u[:, 0] = _stabilizer_vector(n, self.images[n:], self.signs[n:])
        filled = 1
        # column index j has qubit 1 as its most significant bit
        for j in reversed(range(n)):
            step = 1 << (n - 1 - j)
            xs = (-1) ** self.signs[j] * 1.0
            for c in range(filled):
                u[:, c + step] = xs * apply_pauli(self.images[j], n, u[:, c])
            filled *= 2
        return u

    def apply_to_state(self, psi: np.ndarray) -> np.ndarray:
        return self.to_unitary() @ np.asarray(psi, dtype=complex)


def _gate(n: int, changes: dict[int, tuple[int, int]]) -> CliffordTableau:
    ident = CliffordTableau.identity(n)
    imgs, sgns = list(ident.images), list(ident.signs)
    for k, (s, y) in changes.items():
        imgs[k], sgns[k] = y, s
    return CliffordTableau(n, tuple(imgs), tuple(sgns))


def hadamard(n: int, j: int) -> CliffordTableau:
    return _gate(n, {j: (0, z_label(j, n)), n + j: (0, x_label(j, n))})


def phase_gate(n: int, j: int) -> CliffordTableau:
    return _gate(n, {j: (0, x_label(j, n) | z_label(j, n))})


def cnot(n: int, c: int, t: int) -> CliffordTableau:
    if c == t:
        raise ValueError("control and target coincide")
    return _gate(n, {
        c: (0, x_label(c, n) | x_label(t, n)),
        n + t: (0, z_label(c, n) | z_label(t, n)),
    })


def pauli_gate(n: int, label: int) -> CliffordTableau:
    """Conjugation by ``P_label``: flips the sign of every anticommuting generator."""
    ident = CliffordTableau.identity(n)
    sgns = tuple(symplectic_int(g, label, n) for g in ident.images)
    return CliffordTableau(n, ident.images, sgns)


def transvection(n: int, h: int) -> CliffordTableau:
    """Clifford ``(I + i P_h)/sqrt(2)``, acting on labels as ``x -> x + [x,h] h``."""
    imgs, sgns = [], []
    for g in CliffordTableau.identity(n).images:
        if symplectic_int(g, h, n):
            # (I + iP_h) P_g (I - iP_h)/2 = i P_h P_g when they anticommute
            e = (1 + product_phase(h, g, n)) & 3
            imgs.append(g ^ h)
            sgns.append(e >> 1)
        else:
            imgs.append(g)
            sgns.append(0)
    return CliffordTableau(n, tuple(imgs), tuple(sgns))


def _anticommuting_partner(a: int, b: int) -> tuple[int, int]:
    """Single-qubit (a, b) != (0, 0) -> a single-qubit label anticommuting with it."""
    return (0, 1) if a else (1, 0)


def _find_bridge(x: int, v: int, n: int) -> int:
    """Label z with [x, z] = [v, z] = 1 supported on the union of supports."""
    low = (1 << n) - 1
    xa, xb, va, vb = x >> n, x & low, v >> n, v & low
    sx, sv = xa | xb, va | vb
    both = sx & sv
    if both:
        bit = both.bit_length() - 1
        p = ((xa >> bit) & 1, (xb >> bit) & 1)
        q = ((va >> bit) & 1, (vb >> bit) & 1)
        if p == q:
            za, zb = _anticommuting_partner(*p)
        else:
            za, zb = p[0] ^ q[0], p[1] ^ q[1]
        return (za << (bit + n)) | (zb << bit)
    bx = sx.bit_length() - 1
    bv = sv.bit_length() - 1
    pa, pb = _anticommuting_partner((xa >> bx) & 1, (xb >> bx) & 1)
    qa, qb = _anticommuting_partner((va >> bv) & 1, (vb >> bv) & 1)
    return (pa << (bx + n)) | (pb << bx) | (qa << (bv + n)) | (qb << bv)


def _transvections_to(x: int, v: int, n: int) -> list[int]:
    """At most two transvection vectors whose product maps x to v."""
    if x == v:
        return []
    if symplectic_int(x, v, n):
        return [x ^ v]
    z = _find_bridge(x, v, n)
    return [x ^ z, z ^ v]


def _apply_transvections(x: int, hs: Sequence[int], n: int) -> int:
    for h in hs:
        if symplectic_int(x, h, n):
            x ^= h
    return x


def random_symplectic_images(n: int, bits: BitPool) -> list[int]:
    """Images of the 2n generators under a uniformly random symplectic matrix."""
    # level i draws (v, w) on qubits i..n-1 and builds a map sending (X_i, Z_i) there;
    # the full map is level_0 . level_1 . ... . level_{n-1}
    levels: list[list[int]] = []
    xs, zs = [], []
    for i in range(n):
        m = n - i
        while True:
            r = bits.take(2 * m)
            if r:
                break
        v = ((r >> m) << n) | (r & ((1 << m) - 1))
        while True:
            r = bits.take(2 * m)
            w = ((r >> m) << n) | (r & ((1 << m) - 1))
            if symplectic_int(v, w, n):
                break
        e1, e2 = x_label(i, n), z_label(i, n)
        a_seq = _transvections_to(e1, v, n)
        # w' = A^{-1} w; transvections are involutions, so undo A in reverse
        w1 = _apply_transvections(w, a_seq[::-1], n)
        if symplectic_int(e2, w1, n):
            b_seq = [w1 ^ e2] if w1 != e2 else []
        else:
            u = e1 ^ e2
            b_seq = [e1] + ([w1 ^ u] if w1 != u else [])
        levels.append(b_seq + a_seq)
        xs.append(v)
        zs.append(w)
    # image of X_i is level_0 ... level_{i-1} applied to v_i
    for i in range(n):
        for lv in reversed(levels[:i]):
            xs[i] = _apply_transvections(xs[i], lv, n)
            zs[i] = _apply_transvections(zs[i], lv, n)
    return xs + zs


def random_clifford(n: int, rng: np.random.Generator) -> CliffordTableau:
    """Uniformly random Clifford modulo global phase."""
    if n < 1:
        raise ValueError("n must be positive")
    bits = BitPool(rng)
    images = random_symplectic_images(n, bits)
    s = bits.take(2 * n)
    signs = tuple((s >> k) & 1 for k in range(2 * n))
    return CliffordTableau(n, tuple(images), signs)


# stabilizer states ------------------------------------------------------------


def _canonical_rows(rows: Sequence[int], signs: Sequence[int], n: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Fully reduced echelon form of signed commuting generators (pivot = highest bit)."""
    piv: dict[int, tuple[int, int]] = {}
    for r, s in zip(rows, signs):
        while r:
            p = r.bit_length() - 1
            if p not in piv:
                break
            pr, ps = piv[p]
            s ^= ps ^ (product_phase(r, pr, n) >> 1)
            r ^= pr
        if r:
            piv[r.bit_length() - 1] = (r, s)
        elif s:
            raise ValueError("generators contain -I; no such state")
    order = sorted(piv, reverse=True)
    for p in order:
        pr, ps = piv[p]
        for q in order:
            if q > p:
                r, s = piv[q]
                if (r >> p) & 1:
                    piv[q] = (r ^ pr, s ^ ps ^ (product_phase(r, pr, n) >> 1))
    return tuple(piv[p][0] for p in order), tuple(piv[p][1] for p in order)


def _stabilizer_vector(n: int, rows: Sequence[int], signs: Sequence[int]) -> np.ndarray:
    """Dense vector stabilized by the signed generators, phase normalized."""
    st = StabilizerState(n, rows, signs)
    z0, _ = st.support()
    psi = np.zeros(1 << n, dtype=complex)
    psi[z0] = 1.0
    for r, s in zip(st.rows, st.signs):
        psi = 0.5 * (psi + (-1) ** s * apply_pauli(r, n, psi))
    psi /= np.linalg.norm(psi)
    k = np.flatnonzero(np.abs(psi) > 1e-12)[0]
    return psi * (abs(psi[k]) / psi[k])


class StabilizerState:
    """Pure stabilizer state given by n independent commuting signed generators."""

    __slots__ = ("n", "rows", "signs", "_support")

    def __init__(self, n: int, rows: Iterable[int], signs: Iterable[int]):
        rows, signs = list(rows), list(signs)
        if len(rows) != len(signs):
            raise ValueError("rows and signs differ in length")
        for i, r in enumerate(rows):
            for q in rows[i + 1:]:
                if symplectic_int(r, q, n):
                    raise ValueError("generators do not commute")
        self.n = n
        self.rows, self.signs = _canonical_rows(rows, signs, n)
        if len(self.rows) != n:
            raise ValueError("need n independent generators")
        self._support = None

    @classmethod
    def zero(cls, n: int) -> "StabilizerState":
        return cls(n, [z_label(j, n) for j in range(n)], [0] * n)

    @classmethod
    def from_tableau(cls, c: CliffordTableau) -> "StabilizerState":
        """The state ``C|0^n>``."""
        n = c.n
        return cls(n, c.images[n:], c.signs[n:])

    @classmethod
    def from_strings(cls, gens: Sequence[str]) -> "StabilizerState":
        """Build from signed Pauli strings such as ``["+XX", "-ZZ"]``."""
        rows, signs, n = [], [], None
        for g in gens:
            g = g.strip()
            s = 1 if g.startswith("-") else 0
            label, m = parse_pauli(g.lstrip("+-"))
            if n is not None and m != n:
                raise ValueError("generators of different lengths")
            n = m
            rows.append(label)
            signs.append(s)
        return cls(n, rows, signs)

    def __eq__(self, other) -> bool:
        return isinstance(other, StabilizerState) and (self.n, self.rows, self.signs) == (other.n, other.rows, other.signs)

    def __hash__(self) -> int:
        return hash((self.n, self.rows, self.signs))

    def __repr__(self) -> str:
        from .pauli import format_pauli

        gens = ", ".join(("-" if s else "+") + format_pauli(r, self.n) for r, s in zip(self.rows, self.signs))
        return f"StabilizerState([{gens}])"

    def apply(self, c: CliffordTableau) -> "StabilizerState":
        if c.n != self.n:
            raise ValueError("qubit counts differ")
        rows, signs = [], []
        for r, s in zip(self.rows, self.signs):
            s2, y = c.conjugate(r)
            rows.append(y)
            signs.append(s ^ s2)
        return StabilizerState(self.n, rows, signs)

    def lagrangian(self) -> Subspace:
        return Subspace(2 * self.n, self.rows)

    def support(self) -> tuple[int, tuple[int, ...]]:
        """Computational support as ``(offset, basis of the linear part)``."""
        if self._support is None:
            n = self.n
            z0 = 0
            zrows = []
            for r, s in zip(self.rows, self.signs):
                if r >> n == 0:
                    zrows.append(r)
                    # each pivot column is clear in every other row
                    z0 |= s << (r.bit_length() - 1)
            self._support = (z0, Subspace(n, zrows).complement().basis)
        return self._support

    def sample(self, rng: np.random.Generator, size: int | None = None):
        """Computational-basis outcomes (ints, qubit 1 = most significant bit)."""
        z0, basis = self.support()
        k = 1 if size is None else size
        out = _random_combinations(basis, k, rng) ^ z0
        return int(out[0]) if size is None else out

    def diff_sample(self, rng: np.random.Generator, size: int | None = None):
        """XOR of two independent outcomes: uniform on the linear part of the support."""
        k = 1 if size is None else size
        out = self.sample(rng, k) ^ self.sample(rng, k)
        return int(out[0]) if size is None else out

    def born(self) -> np.ndarray:
        z0, basis = self.support()
        p = np.zeros(1 << self.n)
        p[_all_combinations(basis) ^ z0] = 2.0 ** -len(basis)
        return p

    def to_statevector(self) -> np.ndarray:
        if self.n > MAX_DENSE_QUBITS:
            raise ValueError(f"dense vectors limited to n <= {MAX_DENSE_QUBITS}")
        return _stabilizer_vector(self.n, self.rows, self.signs)


def _random_combinations(basis: Sequence[int], k: int, rng: np.random.Generator) -> np.ndarray:
    out = np.zeros(k, dtype=np.int64)
    if basis:
        coeffs = rng.integers(0, 2, size=(k, len(basis)), dtype=np.int64)
        out = np.bitwise_xor.reduce(coeffs * np.asarray(basis, dtype=np.int64), axis=1)
    return out


def _all_combinations(basis: Sequence[int]) -> np.ndarray:
    out = np.zeros(1, dtype=np.int64)
    for b in basis:
        out = np.concatenate([out, out ^ b])
    return out


def measure_computational(state: StabilizerState, rng: np.random.Generator) -> int:
    return state.sample(rng)


def apply_clifford(c: CliffordTableau, state: StabilizerState) -> StabilizerState:
    return state.apply(c)


def lagrangian_of(state: StabilizerState) -> Subspace:
    return state.lagrangian()
