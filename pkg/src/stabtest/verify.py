"""Named verification suites, shared by the CLI and the acceptance tests.

Each suite returns a list of result dicts with at least ``name``, ``passed``
and the measured quantities. ``quick=True`` shrinks sample sizes for smoke
runs; the default sizes are the acceptance sizes.
"""

from __future__ import annotations

import itertools
import math
import time
from fractions import Fraction

import numpy as np

from . import commutant as cm
from .clifford import StabilizerState, random_clifford
from .counting import q_nk
from .dense import (
    char_distribution,
    diff_distribution,
    haar_state,
    m_psi,
    product_t_state,
    stabilizer_fidelity,
    stabilizer_vectors,
    subspace_weight,
)
from .f2 import enumerate_subspace, iter_subspaces
from .pauli import complete_to_lagrangian, is_isotropic
from .spanning import DenseSource, StabilizerSource, estimate_avg_spanning, gap_diagnostic
from .tester import PreconditionError, test_stabilizer, tester_trials


def _res(name: str, passed: bool, **kw) -> dict:
    return {"name": name, "passed": bool(passed), **kw}


def stabvalue_suite(seed: int, quick: bool = False, ns=range(3, 9)) -> list[dict]:
    trials = 10_000 if quick else 100_000
    tol = 3 * math.sqrt(0.25 / trials)
    out = []
    for n in ns:
        K = 5 * n
        t0 = time.perf_counter()
        rep = estimate_avg_spanning(StabilizerSource(StabilizerState.zero(n)), n, K, 0.5, 0.05, seed, trials=trials)
        dt = time.perf_counter() - t0
        sv = float(rep.stabilizer_value)
        dev = abs(rep.estimate - sv)
        out.append(_res(f"stabvalue n={n}", dev <= tol and dt < 60, n=n, K=K, trials=trials,
                        estimate=rep.estimate, exact=sv, deviation=dev, tolerance=tol, seconds=dt))
    return out


def qlimit_suite(seed: int = 0, quick: bool = False) -> list[dict]:
    vals = [q_nk(n, 0) for n in range(1, 21)]
    dec = all(a > b for a, b in zip(vals, vals[1:]))
    q20 = float(vals[-1])
    return [
        _res("Q(20,0) in [0.41942244, 0.41942245]", 0.41942244 <= q20 <= 0.41942245, value=q20),
        _res("Q(n,0) strictly decreasing for n <= 20", dec),
    ]


def tester_suite(seed: int, quick: bool = False) -> list[dict]:
    seeds = range(seed, seed + (5 if quick else 20))
    out = []
    eps, delta = 0.3, 0.05
    acc = 0
    copies_ok = True
    for s in seeds:
        v = test_stabilizer(StabilizerSource(StabilizerState.zero(6)), 6, eps, delta, s)
        acc += v.decision == "stabilizer"
        copies_ok &= v.copies_used == 2 * v.K * tester_trials(v.gap, delta)
    need = math.ceil(0.95 * len(seeds))
    out.append(_res("completeness |0^6>", acc >= need, accepted=acc, runs=len(seeds)))
    out.append(_res("copy count 2K*ceil(2 ln(2/delta)/g^2)", copies_ok))
    psi = product_t_state(3)
    fid = stabilizer_fidelity(psi)
    rej = 0
    err = None
    try:
        for s in seeds:
            v = test_stabilizer(DenseSource(psi), 3, eps, delta, s)
            rej += v.decision == "far"
    except PreconditionError as e:
        err = str(e)
    out.append(_res("soundness |T>^3", err is None and rej >= need, rejected=rej, runs=len(seeds),
                    stabilizer_fidelity=fid, error=err))
    return out


def rp_suite(seed: int, quick: bool = False) -> list[dict]:
    rng = np.random.default_rng(seed)
    states = 10 if quick else 100
    out = []
    for n in (2, 3, 4):
        subspaces = list(iter_subspaces(n))
        worst = 0.0
        for _ in range(states):
            psi = haar_state(n, rng)
            r = diff_distribution(psi)
            p = char_distribution(psi)
            for h in subspaces:
                els = enumerate_subspace(h)
                perp = enumerate_subspace(h.complement())
                lhs = r[els].sum()
                rhs = len(els) * p[0, perp].sum()
                worst = max(worst, abs(lhs - rhs))
        out.append(_res(f"r/p correspondence n={n}", worst <= 1e-10, max_error=worst, subspaces=len(subspaces)))
    return out


def fidelity_suite(seed: int, quick: bool = False) -> list[dict]:
    rng = np.random.default_rng(seed)
    count = 40 if quick else 200
    worst = np.inf
    iso = True
    for i in range(count):
        n = 1 + i % 3
        psi = haar_state(n, rng) if i % 2 else _near_stabilizer(n, rng)
        m = m_psi(psi)
        iso &= is_isotropic(m, n)
        lag = complete_to_lagrangian(m, n, candidates=m)
        worst = min(worst, stabilizer_fidelity(psi) - subspace_weight(psi, lag))
    return [
        _res("F_Stab >= p(M)", worst >= -1e-10, min_slack=float(worst), states=count),
        _res("M_psi isotropic", iso),
    ]


def _near_stabilizer(n: int, rng) -> np.ndarray:
    """A stabilizer state plus a small random perturbation, so M_psi is nontrivial."""
    vecs = stabilizer_vectors(n)
    v = vecs[rng.integers(len(vecs))] + 0.3 * rng.uniform() * haar_state(n, rng)
    return v / np.linalg.norm(v)


def census_suite(seed: int = 0, quick: bool = False) -> list[dict]:
    out = []
    sig = [len(cm.enumerate_sigma(t)) for t in range(2, 7)]
    out.append(_res("|Sigma_t,t| for t=2..6", sig == [2, 6, 30, 270, 4590], counts=sig))
    orth = [len(cm.enumerate_orthogonal(t)) for t in range(2, 6)]
    perms_ok = all(
        {cm.graph_of(cm.permutation_matrix(p)) for p in itertools.permutations(range(t))}
        == {cm.graph_of(o) for o in cm.enumerate_orthogonal(t)}
        for t in range(2, 6)
    )
    out.append(_res("O_t = S_t for t=2..5", orth == [2, 6, 24, 120] and perms_ok, counts=orth))
    out.append(_res("|O_6| recorded", True, count=len(cm.enumerate_orthogonal(6))))
    for n, t in [(1, 4), (2, 3)]:
        hs = cm.enumerate_sigma(t)
        g = cm.gram(t, n)
        ok = all(g[i, j] == cm.gram_dense(hs[i], hs[j], t, n) for i in range(len(hs)) for j in range(len(hs)))
        out.append(_res(f"Gram exact (n,t)=({n},{t})", ok))
    for n, t in [(1, 2), (1, 3), (2, 2)]:
        total = sum(int(round(cm.R_operator(h, t, n).diagonal().sum())) for h in cm.enumerate_sigma(t))
        formula = cm.trace_sum_formula(t, n)
        out.append(_res(f"trace sum (n,t)=({n},{t})", Fraction(total) == formula, total=total, formula=str(formula)))
    return out


def pt_suite(seed: int = 0, quick: bool = False) -> list[dict]:
    out = []
    for n in (1, 2):
        for t in range(1, 6):
            if n * t > 12 or (quick and t == 5):
                continue
            checked = bad = kmis = 0
            worst = 0.0
            for o in cm.enumerate_orthogonal(t):
                for k in range(t + 1):
                    for s in itertools.combinations(range(t), k):
                        r = cm.pt_singular_check(o, s, n)
                        checked += 1
                        bad += r.max_deviation > cm.SV_TOL
                        kmis += r.k != r.k_complement
                        worst = max(worst, r.max_deviation)
            out.append(_res(f"partial transposes n={n} t={t}", bad == 0 and kmis == 0,
                            checked=checked, spectrum_failures=bad, kernel_mismatches=kmis, max_deviation=worst))
    for t in range(2, 7):
        ident = cm.permutation_matrix(range(t))
        missing = sum(
            1 for o in cm.enumerate_orthogonal(t) if o != ident and cm.find_singular_principal_submatrix(o) is None
        )
        out.append(_res(f"singular principal minor t={t}", missing == 0 and cm.find_singular_principal_submatrix(ident) is None,
                        missing=missing))
    return out


def counterexample_suite(seed: int, quick: bool = False) -> list[dict]:
    out = []
    for n in (1, 2):
        out.append(_res(f"canonical collection n={n}", abs(cm.counterexample_check(cm.canonical_collection(n))) <= 1e-10))
    rng = np.random.default_rng(seed)
    worst = 0.0
    orbits = 3 if quick else 10
    for i in range(orbits):
        n = 1 + i % 2
        u = random_clifford(n, rng).to_unitary()
        worst = max(worst, abs(cm.counterexample_check([u @ s for s in cm.canonical_collection(n)])))
    out.append(_res("Clifford orbits", worst <= 1e-10, max_abs=worst, orbits=orbits))
    return out


def moments_suite(seed: int = 0, quick: bool = False) -> list[dict]:
    vecs = stabilizer_vectors(2)
    out = []
    for t in range(1, 5):
        worst = 0.0
        powers = [_power(v, t) for v in vecs]
        for h in cm.enumerate_sigma(t):
            r = cm.R_operator(h, t, 2)
            val = np.mean([np.vdot(p, r @ p).real for p in powers])
            worst = max(worst, abs(val - 1))
        out.append(_res(f"tr(R(T) rho_S) = 1, t={t}", worst <= 1e-9, max_error=worst))
    return out


def _power(v: np.ndarray, t: int) -> np.ndarray:
    out = np.array([1.0 + 0j])
    for _ in range(t):
        out = np.kron(out, v)
    return out


def gap_suite(seed: int, quick: bool = False) -> list[dict]:
    trials = 10_000 if quick else 100_000
    rep = gap_diagnostic(product_t_state(3), 15, trials, seed)
    return [_res("gap diagnostic |T>^3", rep.holds, **rep.to_dict())]


SUITES = {
    "stabvalue": stabvalue_suite,
    "qlimit": qlimit_suite,
    "tester": tester_suite,
    "rp": rp_suite,
    "fidelity": fidelity_suite,
    "census": census_suite,
    "pt": pt_suite,
    "counterexample": counterexample_suite,
    "moments": moments_suite,
    "gap": gap_suite,
}


def run_suite(name: str, seed: int, quick: bool = False) -> list[dict]:
    if name == "all":
        return [r for fn in SUITES.values() for r in fn(seed, quick)]
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES) + ['all']}")
    return SUITES[name](seed, quick)
