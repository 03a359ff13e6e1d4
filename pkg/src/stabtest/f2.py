"""Linear algebra over F_2 with rows packed into Python integers.

A vector of length ``m`` is an ``int`` whose bit ``m - 1 - j`` holds
coordinate ``j``; coordinate 0 is the most significant bit.  With this
packing the integer value of a computational-basis bit string equals the
usual basis index (qubit 1 is the most significant bit), and row reduction
with "pivot = highest set bit" produces the familiar reduced row-echelon
form read left to right.

All objects are immutable.  Elimination XORs whole rows, so each row
operation is a single machine-word (or bignum) operation.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Sequence

import numpy as np

MAX_ENUM_DIM = 24


def parity(x: int) -> int:
    return x.bit_count() & 1


def pack(bits: Iterable[int]) -> int:
    """Pack a 0/1 sequence into an int, first entry most significant."""
    out = 0
    for b in bits:
        out = (out << 1) | (int(b) & 1)
    return out


def unpack(x: int, length: int) -> np.ndarray:
    """Inverse of :func:`pack`."""
    return np.array([(x >> (length - 1 - j)) & 1 for j in range(length)], dtype=np.uint8)


def _as_bits(v) -> np.ndarray:
    arr = np.asarray(v, dtype=np.int64).ravel()
    if arr.size and not np.all((arr == 0) | (arr == 1)):
        raise ValueError("entries must be 0 or 1")
    return arr


def dot(x, y) -> int:
    """Standard inner product of two 0/1 vectors, mod 2."""
    x, y = _as_bits(x), _as_bits(y)
    if x.size != y.size:
        raise ValueError(f"length mismatch: {x.size} != {y.size}")
    return int(np.dot(x, y) & 1)


def symplectic(x, y) -> int:
    """Symplectic product ``a.w + b.v`` of ``x = (a|b)`` and ``y = (v|w)``."""
    x, y = _as_bits(x), _as_bits(y)
    if x.size != y.size:
        raise ValueError(f"length mismatch: {x.size} != {y.size}")
    if x.size % 2:
        raise ValueError("symplectic product needs even length 2n")
    n = x.size // 2
    return int((np.dot(x[:n], y[n:]) + np.dot(x[n:], y[:n])) & 1)


def symplectic_int(x: int, y: int, n: int) -> int:
    """Symplectic product of packed labels ``(a << n) | b``."""
    low = (1 << n) - 1
    return (((x >> n) & y) ^ ((x & (y >> n)) & low)).bit_count() & 1


def rank_rows(rows: Iterable[int]) -> int:
    piv: dict[int, int] = {}
    for r in rows:
        while r:
            h = r.bit_length() - 1
            p = piv.get(h)
            if p is None:
                piv[h] = r
                break
            r ^= p
    return len(piv)


def rref_rows(rows: Iterable[int]) -> tuple[int, ...]:
    """Reduced row-echelon basis of the span, sorted by descending pivot."""
    piv: dict[int, int] = {}
    for r in rows:
        while r:
            h = r.bit_length() - 1
            p = piv.get(h)
            if p is None:
                piv[h] = r
                break
            r ^= p
    keys = sorted(piv, reverse=True)
    # back-substitute so every pivot column has a single 1
    for i, hi in enumerate(keys):
        row = piv[hi]
        for hj in keys[i + 1:]:
            if (row >> hj) & 1:
                row ^= piv[hj]
        piv[hi] = row
    return tuple(piv[h] for h in keys)


def reduce_vector(v: int, basis: Sequence[int]) -> int:
    """Reduce ``v`` against an echelon basis (descending pivots)."""
    for b in basis:
        if (v >> (b.bit_length() - 1)) & 1:
            v ^= b
    return v


@dataclass(frozen=True)
class BitMatrix:
    """Matrix over F_2; ``rows[i]`` is row ``i`` packed with :func:`pack`."""

    rows: tuple[int, ...]
    ncols: int

    def __post_init__(self):
        if self.ncols < 0:
            raise ValueError("ncols must be non-negative")
        bad = [r for r in self.rows if r < 0 or r >> self.ncols]
        if bad:
            raise ValueError("row wider than ncols")

    @classmethod
    def from_array(cls, arr) -> "BitMatrix":
        a = np.atleast_2d(np.asarray(arr, dtype=np.int64))
        if a.size and not np.all((a == 0) | (a == 1)):
            raise ValueError("entries must be 0 or 1")
        return cls(tuple(pack(r) for r in a), a.shape[1])

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "BitMatrix":
        return cls((0,) * nrows, ncols)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(tuple(1 << (n - 1 - i) for i in range(n)), n)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), self.ncols)

    def to_array(self) -> np.ndarray:
        if not self.rows:
            return np.zeros((0, self.ncols), dtype=np.uint8)
        return np.stack([unpack(r, self.ncols) for r in self.rows])

    def __getitem__(self, ij) -> int:
        i, j = ij
        return (self.rows[i] >> (self.ncols - 1 - j)) & 1

    @property
    def T(self) -> "BitMatrix":
        m = self.nrows
        cols = []
        for j in range(self.ncols):
            shift = self.ncols - 1 - j
            col = 0
            for r in self.rows:
                col = (col << 1) | ((r >> shift) & 1)
            cols.append(col)
        return BitMatrix(tuple(cols), m)

    def matvec(self, v: int) -> int:
        """``M v`` for a packed column vector ``v``; result packed over rows."""
        out = 0
        for r in self.rows:
            out = (out << 1) | parity(r & v)
        return out

    def __matmul__(self, other: "BitMatrix") -> "BitMatrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        # row i of the product is the XOR of rows of `other` selected by row i of self
        k = other.nrows
        out = []
        for r in self.rows:
            acc = 0
            for j in range(k):
                if (r >> (k - 1 - j)) & 1:
                    acc ^= other.rows[j]
            out.append(acc)
        return BitMatrix(tuple(out), other.ncols)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "BitMatrix":
        return BitMatrix.from_array(self.to_array()[np.ix_(list(rows), list(cols))].reshape(len(rows), len(cols)))

    def rank(self) -> int:
        return rank_rows(self.rows)

    def __str__(self) -> str:
        return "\n".join(format(r, f"0{self.ncols}b") if self.ncols else "" for r in self.rows)


@dataclass(frozen=True, eq=False)
class Subspace:
    """A linear subspace of F_2^ambient_dim in canonical RREF.

    Two ``Subspace`` objects spanning the same set compare equal and hash
    equal, whatever generators they were built from.
    """

    ambient_dim: int
    basis: tuple[int, ...]

    def __init__(self, ambient_dim: int, generators: Iterable[int] = ()):
        gens = [int(g) for g in generators]
        if any(g < 0 or g >> ambient_dim for g in gens):
            raise ValueError("generator outside ambient space")
        object.__setattr__(self, "ambient_dim", ambient_dim)
        object.__setattr__(self, "basis", rref_rows(gens))

    @classmethod
    def full(cls, m: int) -> "Subspace":
        return cls(m, (1 << j for j in range(m)))

    @classmethod
    def zero(cls, m: int) -> "Subspace":
        return cls(m, ())

    @classmethod
    def from_vectors(cls, vectors) -> "Subspace":
        a = np.atleast_2d(np.asarray(vectors, dtype=np.int64))
        return cls(a.shape[1], (pack(r) for r in a))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self) -> int:
        return 1 << self.dim

    def __contains__(self, v: int) -> bool:
        return reduce_vector(int(v), self.basis) == 0

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __hash__(self) -> int:
        return hash((self.ambient_dim, self.basis))

    def __le__(self, other: "Subspace") -> bool:
        return all(b in other for b in self.basis)

    def __repr__(self) -> str:
        m = self.ambient_dim
        rows = ", ".join(format(b, f"0{m}b") for b in self.basis)
        return f"Subspace({m}, [{rows}])"

    def __add__(self, other: "Subspace") -> "Subspace":
        if self.ambient_dim != other.ambient_dim:
            raise ValueError("ambient dimension mismatch")
        return Subspace(self.ambient_dim, self.basis + other.basis)

    def extend(self, *vectors: int) -> "Subspace":
        return Subspace(self.ambient_dim, self.basis + tuple(vectors))

    def pivots(self) -> tuple[int, ...]:
        return tuple(b.bit_length() - 1 for b in self.basis)

    def matrix(self) -> BitMatrix:
        return BitMatrix(self.basis, self.ambient_dim)

    def complement(self) -> "Subspace":
        return orthogonal_complement(self)

    def intersect(self, other: "Subspace") -> "Subspace":
        # (A cap B) = (A^perp + B^perp)^perp
        return orthogonal_complement(orthogonal_complement(self) + orthogonal_complement(other))

    def elements(self) -> np.ndarray:
        return enumerate_subspace(self)


def rank(m: BitMatrix) -> int:
    return m.rank()


def spans_full(vectors: Iterable[int], n: int) -> bool:
    """True iff the packed length-``n`` vectors span F_2^n."""
    piv: dict[int, int] = {}
    for r in vectors:
        while r:
            h = r.bit_length() - 1
            p = piv.get(h)
            if p is None:
                piv[h] = r
                if len(piv) == n:
                    return True
                break
            r ^= p
    return len(piv) == n


def _nullspace_of_rref(basis: Sequence[int], m: int) -> list[int]:
    pivots = [b.bit_length() - 1 for b in basis]
    pivset = set(pivots)
    out = []
    for f in range(m):
        if f in pivset:
            continue
        v = 1 << f
        for row, p in zip(basis, pivots):
            if (row >> f) & 1:
                v |= 1 << p
        out.append(v)
    return out


def orthogonal_complement(h: Subspace) -> Subspace:
    """``{v : v . u = 0 for all u in h}`` with respect to the dot product."""
    return Subspace(h.ambient_dim, _nullspace_of_rref(h.basis, h.ambient_dim))


def kernel(m: BitMatrix) -> Subspace:
    """Right kernel ``{v : M v = 0}``."""
    return orthogonal_complement(Subspace(m.ncols, m.rows))


def enumerate_subspace(h: Subspace, max_dim: int = MAX_ENUM_DIM) -> np.ndarray:
    """All ``2**dim`` elements of ``h`` as packed ints, zero first.

    Element ``i`` is the XOR of the basis rows selected by the bits of ``i``,
    so the listing is deterministic.
    """
    if h.dim > max_dim:
        raise ValueError(f"refusing to enumerate a {h.dim}-dimensional subspace (limit {max_dim})")
    dtype = object if h.ambient_dim > 63 else np.int64
    out = np.zeros(1, dtype=dtype)
    for b in reversed(h.basis):
        out = np.concatenate([out, out ^ b])
    return out


def iter_subspaces(m: int, dim: int | None = None) -> Iterator[Subspace]:
    """Every subspace of F_2^m (optionally of one dimension), each once.

    Uses RREF enumeration: choose pivot columns, then fill the non-pivot
    entries to the right of each pivot freely.
    """
    dims = range(m + 1) if dim is None else [dim]
    for d in dims:
        for piv_cols in combinations(range(m), d):
            # coordinate c has bit m-1-c; free slots of row i are columns > piv_cols[i] not pivots
            pivset = set(piv_cols)
            slots = [[c for c in range(pc + 1, m) if c not in pivset] for pc in piv_cols]
            total = sum(len(s) for s in slots)
            for fill in range(1 << total):
                rows = []
                k = 0
                for pc, s in zip(piv_cols, slots):
                    row = 1 << (m - 1 - pc)
                    for c in s:
                        if (fill >> k) & 1:
                            row |= 1 << (m - 1 - c)
                        k += 1
                    rows.append(row)
                yield Subspace(m, rows)
