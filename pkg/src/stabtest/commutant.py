"""Exact numerics for the commutant of Clifford tensor powers at small t.

Vectors of F_2^{2t} are packed as ``u = x << t | y``; within x and y copy 1
is the most significant bit. ``r(T) = sum_{(x,y) in T} |x><y|`` acts on t
copies of one qubit and ``R(T) = r(T)^{(x) n}``.

Two orders of the nt tensor factors appear:

* qubit-major: n blocks of t copies, so (qubit q, copy c) sits at factor
  ``q * t + c``. This is the natural order for ``r(T)^{(x) n}``.
* copy-major: t blocks of n qubits, factor ``c * n + q``. This is the order
  of ``|psi_1>|psi_2>...|psi_t>`` and of partial transposes over copies.

Operators returned by this module are in copy-major order unless stated.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from .f2 import BitMatrix, Subspace, enumerate_subspace, rank_rows

MAX_T = 6
MAX_NT = 12
SV_TOL = 1e-8


# stochastic Lagrangian subspaces -------------------------------------------------


def q_form(u: int, t: int) -> int:
    """(|x| - |y|) mod 4 for u = (x|y)."""
    return ((u >> t).bit_count() - (u & ((1 << t) - 1)).bit_count()) % 4


def is_stochastic(h: Subspace, t: int) -> bool:
    """Check the defining conditions exhaustively over all elements."""
    if h.ambient_dim != 2 * t or h.dim != t:
        return False
    if (1 << 2 * t) - 1 not in h:
        return False
    return all(q_form(int(u), t) == 0 for u in enumerate_subspace(h))


def _pivot_candidates(pivots: Sequence[int], t: int) -> list[list[int]] | None:
    """Echelon rows with the given pivot and form value 0, per pivot; None if one is empty."""
    pset = set(pivots)
    out = []
    for p in pivots:
        free = [b for b in range(p) if b not in pset]
        rows = []
        for mask in range(1 << len(free)):
            r = 1 << p
            for i, b in enumerate(free):
                if (mask >> i) & 1:
                    r |= 1 << b
            if q_form(r, t) == 0:
                rows.append(r)
        if not rows:
            return None
        out.append(rows)
    return out


@lru_cache(maxsize=None)
def enumerate_sigma(t: int) -> tuple[Subspace, ...]:
    """All stochastic Lagrangian subspaces of F_2^{2t}, canonical and sorted.

    Depth-first search over reduced echelon bases: for each set of t pivot
    columns, rows are added in increasing pivot order, keeping only rows with
    form value 0 mod 4 that are orthogonal to the rows already chosen. A
    t-dimensional self-orthogonal space whose rows have even weight contains
    the all-ones vector, so that condition needs no separate pruning; it is
    re-checked exhaustively on the output.
    """
    if not 1 <= t <= MAX_T:
        raise ValueError(f"enumeration limited to 1 <= t <= {MAX_T}")
    m = 2 * t
    out = []
    for pivots in itertools.combinations(range(m), t):
        cands = _pivot_candidates(pivots, t)
        if cands is None:
            continue
        stack: list[tuple[int, ...]] = [()]
        while stack:
            cur = stack.pop()
            if len(cur) == t:
                out.append(Subspace(m, cur))
                continue
            for r in cands[len(cur)]:
                if all((r & c).bit_count() % 2 == 0 for c in cur):
                    stack.append(cur + (r,))
    out.sort(key=lambda h: h.basis)
    for h in out:
        if not is_stochastic(h, t):
            raise AssertionError("enumeration produced a non-stochastic subspace")
    return tuple(out)


def sigma_count_formula(t: int) -> int:
    return math.prod(2**k + 1 for k in range(t - 1))


def diagonal(t: int) -> Subspace:
    """The identity element: {(x, x)}."""
    return Subspace(2 * t, [(1 << (t + j)) | (1 << j) for j in range(t)])


def graph_of(o: BitMatrix) -> Subspace:
    """T_O = {(Ox, x)}."""
    t = o.ncols
    return Subspace(2 * t, [(o.matvec(1 << (t - 1 - j)) << t) | (1 << (t - 1 - j)) for j in range(t)])


def orthogonal_matrix(h: Subspace, t: int) -> BitMatrix | None:
    """The matrix O with h = T_O, or None when the y-projection is not onto."""
    low = (1 << t) - 1
    if rank_rows(u & low for u in h.basis) < t:
        return None
    ymap = {u & low: u >> t for u in enumerate_subspace(h).tolist()}
    cols = [ymap[1 << (t - 1 - j)] for j in range(t)]
    # row i of O collects bit i of every column
    rows = tuple(
        sum(((cols[j] >> (t - 1 - i)) & 1) << (t - 1 - j) for j in range(t)) for i in range(t)
    )
    return BitMatrix(rows, t)


@lru_cache(maxsize=None)
def enumerate_orthogonal(t: int) -> tuple[BitMatrix, ...]:
    """Stochastic orthogonal group, read off the full-rank members of the enumeration."""
    out = []
    for h in enumerate_sigma(t):
        o = orthogonal_matrix(h, t)
        if o is not None:
            out.append(o)
    return tuple(out)


def is_stochastic_orthogonal(o: BitMatrix) -> bool:
    t = o.ncols
    if o.nrows != t or o.rank() != t:
        return False
    return all((o.matvec(x).bit_count() - x.bit_count()) % 4 == 0 for x in range(1 << t))


def permutation_matrix(perm: Sequence[int]) -> BitMatrix:
    """Matrix sending e_j to e_{perm[j]} (0-based copies)."""
    t = len(perm)
    rows = [0] * t
    for j, pj in enumerate(perm):
        rows[pj] |= 1 << (t - 1 - j)
    return BitMatrix(tuple(rows), t)


def non_orthogonal(t: int) -> list[Subspace]:
    orth = {graph_of(o) for o in enumerate_orthogonal(t)}
    return [h for h in enumerate_sigma(t) if h not in orth]


def catalog(t: int) -> str:
    """One subspace per line, basis rows in hex."""
    width = (2 * t + 3) // 4
    return "\n".join(" ".join(f"{u:0{width}x}" for u in h.basis) for h in enumerate_sigma(t)) + "\n"


# operators -----------------------------------------------------------------------


def r_matrix(h: Subspace, t: int) -> np.ndarray:
    """Dense 2^t x 2^t 0/1 matrix of r(T)."""
    if t > MAX_T:
        raise ValueError(f"t limited to {MAX_T}")
    m = np.zeros((1 << t, 1 << t), dtype=np.int64)
    els = enumerate_subspace(h)
    m[els >> t, els & ((1 << t) - 1)] = 1
    return m


def _guard_nt(n: int, t: int):
    if n * t > MAX_NT:
        raise ValueError(f"need n*t <= {MAX_NT}, got n={n}, t={t}")


def qubit_to_copy_major(idx, n: int, t: int) -> np.ndarray:
    """Re-index basis states from qubit-major to copy-major factor order."""
    idx = np.asarray(idx, dtype=np.int64)
    out = np.zeros_like(idx)
    nt = n * t
    for q in range(n):
        for c in range(t):
            src = nt - 1 - (q * t + c)
            dst = nt - 1 - (c * n + q)
            out |= ((idx >> src) & 1) << dst
    return out


def copy_to_qubit_major(idx, n: int, t: int) -> np.ndarray:
    idx = np.asarray(idx, dtype=np.int64)
    out = np.zeros_like(idx)
    nt = n * t
    for q in range(n):
        for c in range(t):
            src = nt - 1 - (c * n + q)
            dst = nt - 1 - (q * t + c)
            out |= ((idx >> src) & 1) << dst
    return out


def _tensor_entries(h: Subspace, t: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Row and column indices (qubit-major) of the ones of r(T)^{(x) n}."""
    els = enumerate_subspace(h)
    xs, ys = els >> t, els & ((1 << t) - 1)
    rows = np.zeros(1, dtype=np.int64)
    cols = np.zeros(1, dtype=np.int64)
    for _ in range(n):
        rows = (rows[:, None] << t | xs[None, :]).ravel()
        cols = (cols[:, None] << t | ys[None, :]).ravel()
    return rows, cols


def R_operator(h: Subspace, t: int, n: int, order: str = "copy") -> sp.csr_matrix:
    """Sparse 0/1 matrix of R(T) on 2^{nt} dimensions."""
    _guard_nt(n, t)
    rows, cols = _tensor_entries(h, t, n)
    if order == "copy":
        rows, cols = qubit_to_copy_major(rows, n, t), qubit_to_copy_major(cols, n, t)
    elif order != "qubit":
        raise ValueError("order must be 'copy' or 'qubit'")
    dim = 1 << (n * t)
    return sp.csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(dim, dim))


def trace_R(h: Subspace, t: int, n: int) -> int:
    """tr R(T) = |T cap Delta|^n, exact."""
    return 2 ** (n * h.intersect(diagonal(t)).dim)


def trace_sum_formula(t: int, n: int) -> Fraction:
    """2^{nt} prod_{k=0}^{t-2} (1 + 2^{k-n})."""
    out = Fraction(2 ** (n * t))
    for k in range(t - 1):
        out *= 1 + Fraction(2**k, 2**n)
    return out


def gram(t: int, n: int, subspaces: Sequence[Subspace] | None = None) -> np.ndarray:
    """G[T, T'] = |T cap T'|^n, exact integers (object dtype)."""
    hs = list(enumerate_sigma(t) if subspaces is None else subspaces)
    g = np.empty((len(hs), len(hs)), dtype=object)
    for i, a in enumerate(hs):
        for j in range(i, len(hs)):
            g[i, j] = g[j, i] = 2 ** (n * a.intersect(hs[j]).dim)
    return g


def gram_dense(h1: Subspace, h2: Subspace, t: int, n: int) -> int:
    """tr(R(T)^T R(T')) from the sparse operators, as an oracle for :func:`gram`."""
    a = R_operator(h1, t, n)
    b = R_operator(h2, t, n)
    return int(round(a.multiply(b).sum()))


# partial transposes and singular values --------------------------------------------


def _copy_mask(subset: Iterable[int], t: int, n: int) -> int:
    """Bits (copy-major) of every qubit of every copy in ``subset`` (0-based)."""
    nt = n * t
    mask = 0
    for c in subset:
        if not 0 <= c < t:
            raise ValueError(f"copy index {c} out of range")
        for q in range(n):
            mask |= 1 << (nt - 1 - (c * n + q))
    return mask


def partial_transpose(op, subset: Iterable[int], t: int, n: int):
    """Transpose the tensor factors of the copies in ``subset`` (copy-major operator)."""
    _guard_nt(n, t)
    mask = _copy_mask(subset, t, n)
    if sp.issparse(op):
        coo = op.tocoo()
        r, c = coo.row.astype(np.int64), coo.col.astype(np.int64)
        nr = (r & ~mask) | (c & mask)
        nc = (c & ~mask) | (r & mask)
        return sp.csr_matrix((coo.data, (nr, nc)), shape=op.shape)
    op = np.asarray(op)
    dim = 1 << (n * t)
    if op.shape != (dim, dim):
        raise ValueError("operator has the wrong dimension")
    idx = np.arange(dim)
    # entry (r, c) moves to (r', c') with the masked bits exchanged
    rr = (idx[:, None] & ~mask) | (idx[None, :] & mask)
    cc = (idx[None, :] & ~mask) | (idx[:, None] & mask)
    out = np.empty_like(op)
    out[rr, cc] = op
    return out


def singular_values(op) -> np.ndarray:
    """All singular values, descending. Sparse inputs are split into connected blocks."""
    if not sp.issparse(op):
        return np.linalg.svd(np.asarray(op), compute_uv=False)
    m = sp.csr_matrix(op)
    nr, nc = m.shape
    adj = sp.bmat([[None, m], [m.T, None]], format="csr")
    ncomp, labels = connected_components(abs(adj), directed=False)
    rlab, clab = labels[:nr], labels[nr:]
    rows_of = _members(rlab, ncomp)
    cols_of = _members(clab, ncomp)
    by_shape: dict[tuple[int, int], list[np.ndarray]] = {}
    dense = m.toarray() if nr * nc <= 1 << 20 else None
    for comp in range(ncomp):
        ri, ci = rows_of[comp], cols_of[comp]
        if len(ri) == 0 or len(ci) == 0:
            continue
        block = dense[np.ix_(ri, ci)] if dense is not None else m[ri][:, ci].toarray()
        by_shape.setdefault(block.shape, []).append(block)
    parts = []
    for blocks in by_shape.values():
        parts.append(np.linalg.svd(np.stack(blocks), compute_uv=False).ravel())
    vals = np.concatenate(parts) if parts else np.zeros(0)
    out = np.zeros(min(nr, nc))
    out[: len(vals)] = np.sort(vals)[::-1][: min(nr, nc)]
    return out


def _members(labels: np.ndarray, ncomp: int) -> list[np.ndarray]:
    order = np.argsort(labels, kind="stable")
    bounds = np.searchsorted(labels[order], np.arange(ncomp + 1))
    return [order[bounds[i]:bounds[i + 1]] for i in range(ncomp)]


def trace_norm(op) -> float:
    return float(singular_values(op).sum())


def principal_submatrix(o: BitMatrix, subset: Sequence[int]) -> BitMatrix:
    subset = sorted(subset)
    return o.submatrix(subset, subset)


def kernel_dim_principal(o: BitMatrix, subset: Sequence[int]) -> int:
    if not subset:
        return 0
    sub = principal_submatrix(o, subset)
    return len(subset) - sub.rank()


@dataclass
class PTReport:
    subset: tuple[int, ...]
    n: int
    t: int
    k: int
    k_complement: int
    singular_values: np.ndarray = field(repr=False)
    trace_norm: float
    expected_value: float
    expected_multiplicity: int
    max_deviation: float
    ok: bool


def pt_singular_check(o: BitMatrix, subset: Sequence[int], n: int, tol: float = SV_TOL) -> PTReport:
    """Compare the spectrum of R(O)^{Gamma_S} with 2^{kn} repeated 2^{n(t-2k)} times."""
    t = o.ncols
    _guard_nt(n, t)
    subset = tuple(sorted(subset))
    comp = tuple(c for c in range(t) if c not in subset)
    k = kernel_dim_principal(o, subset)
    kc = kernel_dim_principal(o, comp)
    pt = partial_transpose(R_operator(graph_of(o), t, n), subset, t, n)
    sv = singular_values(pt)
    value = 2.0 ** (k * n)
    mult = 2 ** (n * (t - 2 * k)) if t >= 2 * k else 0
    expected = np.zeros(len(sv))
    expected[:mult] = value
    dev = float(np.max(np.abs(sv - expected))) if len(sv) else 0.0
    return PTReport(subset, n, t, k, kc, sv, float(sv.sum()), value, mult, dev, dev <= tol and k == kc)


def find_singular_principal_submatrix(o: BitMatrix) -> tuple[int, ...] | None:
    """Smallest (then lexicographically first) copy subset with a singular principal block."""
    t = o.ncols
    for size in range(1, t + 1):
        for subset in itertools.combinations(range(t), size):
            if kernel_dim_principal(o, subset) > 0:
                return subset
    return None


@dataclass
class TraceNormReport:
    basis: tuple[int, ...]
    trace_norm: float
    bound: int
    ok: bool
    tight: bool


def trace_norm_check_nonorthogonal(h: Subspace, t: int, n: int) -> TraceNormReport:
    """||R(T)||_1 against 2^{n(t-1)} for T outside the orthogonal group."""
    _guard_nt(n, t)
    if orthogonal_matrix(h, t) is not None:
        raise ValueError("subspace belongs to the orthogonal group")
    tn = trace_norm(R_operator(h, t, n))
    bound = 2 ** (n * (t - 1))
    return TraceNormReport(h.basis, tn, bound, tn <= bound + 1e-8, abs(tn - bound) <= 1e-8)


# projectors and states ------------------------------------------------------------


def _o_action(o: BitMatrix, t: int, n: int) -> np.ndarray:
    """Permutation p of copy-major indices with R(O)|z> = |p[z]>."""
    table = np.array([o.matvec(x) for x in range(1 << t)], dtype=np.int64)
    idx = np.arange(1 << (n * t), dtype=np.int64)
    qm = copy_to_qubit_major(idx, n, t)
    out = np.zeros_like(qm)
    low = (1 << t) - 1
    for q in range(n):
        shift = t * (n - 1 - q)
        out |= table[(qm >> shift) & low] << shift
    return qubit_to_copy_major(out, n, t)


def pi_O(t: int, n: int) -> sp.csr_matrix:
    """(1/|O_t|) sum_O R(O), copy-major, sparse."""
    _guard_nt(n, t)
    group = enumerate_orthogonal(t)
    dim = 1 << (n * t)
    idx = np.arange(dim)
    acc = sp.csr_matrix((dim, dim))
    for o in group:
        acc = acc + sp.csr_matrix((np.ones(dim), (_o_action(o, t, n), idx)), shape=(dim, dim))
    return acc / len(group)


def symmetric_projector(t: int, n: int) -> np.ndarray:
    """Average of the copy permutations, dense, as an independent oracle."""
    _guard_nt(n, t)
    d = 1 << n
    dim = d**t
    out = np.zeros((dim, dim))
    grid = np.arange(dim).reshape((d,) * t)
    perms = list(itertools.permutations(range(t)))
    for p in perms:
        target = np.transpose(grid, p).ravel()
        out[target, np.arange(dim)] += 1
    return out / len(perms)


def product_state(states: Sequence[np.ndarray]) -> np.ndarray:
    out = np.array([1.0 + 0j])
    for s in states:
        out = np.kron(out, np.asarray(s, dtype=complex))
    return out


def counterexample_check(states: Sequence[np.ndarray]) -> float:
    """tr(Pi_O |Phi><Phi|) for Phi = psi_1 (x) ... (x) psi_t."""
    t = len(states)
    n = int(np.log2(len(states[0])))
    _guard_nt(n, t)
    phi = product_state(states)
    total = 0.0
    for o in enumerate_orthogonal(t):
        p = _o_action(o, t, n)
        # <Phi| R(O) |Phi> = sum_z conj(Phi[p[z]]) Phi[z]
        total += np.vdot(phi[p], phi).real
    return total / len(enumerate_orthogonal(t))


def canonical_collection(n: int) -> list[np.ndarray]:
    """|0>,|1>,|+>,|->,|i>,|-i>, each padded with |0^{n-1}>."""
    s = 1 / np.sqrt(2)
    base = [[1, 0], [0, 1], [s, s], [s, -s], [s, 1j * s], [s, -1j * s]]
    pad = np.zeros(1 << (n - 1))
    pad[0] = 1.0
    return [np.kron(np.asarray(b, dtype=complex), pad) for b in base]


def search_orthogonal_collections(n: int, t: int, rng: np.random.Generator, tries: int, tol: float = 1e-10):
    """Random collections of stabilizer states with zero weight under Pi_O.

    Returns the index tuples (into the stabilizer enumeration) that were found.
    """
    from .dense import stabilizer_vectors

    vecs = stabilizer_vectors(n)
    found = []
    for _ in range(tries):
        pick = tuple(int(i) for i in rng.integers(0, len(vecs), size=t))
        if counterexample_check([vecs[i] for i in pick]) <= tol:
            found.append(pick)
    return found
