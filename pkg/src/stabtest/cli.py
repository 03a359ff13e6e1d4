"""Command-line entry point: ``python -m stabtest <command> ...``.

Every command prints one JSON document with a top-level ``"schema"`` field.
Exit codes: 0 success (or verdict "stabilizer"), 1 verdict "far" or a failed
verification, 2 invalid input or precondition violation.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from fractions import Fraction

import numpy as np

from . import commutant as cm
from .clifford import StabilizerState, random_clifford
from .counting import (
    fraction_str,
    kappa,
    q_row,
    stabilizer_value,
    total_lagrangians,
)
from .dense import haar_state, load_state, product_t_state, stabilizer_fidelity
from .spanning import DenseSource, StabilizerSource, estimate_avg_spanning, write_trace
from .tester import PreconditionError, test_stabilizer

SCHEMA = "stabtest/1"


class UsageError(ValueError):
    pass


def frac(f: Fraction) -> dict:
    return {"rational": fraction_str(f), "float": float(f)}


def emit(doc: dict) -> None:
    doc = {"schema": SCHEMA, **doc}
    print(json.dumps(doc, sort_keys=True, default=_default))


def _default(o):
    if isinstance(o, Fraction):
        return frac(o)
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"cannot serialize {type(o).__name__}")


# state specifications ---------------------------------------------------------------


def parse_state(spec: str, n: int | None):
    """Return ``(source, n, info)`` for a state descriptor."""
    kind, _, rest = spec.partition(":")
    if kind == "stab":
        if n is None:
            raise UsageError("--n is required for stab: states")
        if rest == "zero":
            st = StabilizerState.zero(n)
        elif rest.startswith("random:"):
            st = StabilizerState.from_tableau(random_clifford(n, np.random.default_rng(_int(rest[7:]))))
        else:
            raise UsageError(f"unknown stabilizer spec {spec!r}")
        return StabilizerSource(st), n, {"kind": "stabilizer", "distance": "stabilizer input"}
    if kind == "haar":
        if n is None:
            raise UsageError("--n is required for haar: states")
        psi = haar_state(n, np.random.default_rng(_int(rest)))
    elif kind == "product":
        if not rest.startswith("T^"):
            raise UsageError(f"unknown product spec {spec!r}")
        m = _int(rest[2:])
        if n is not None and n != m:
            raise UsageError(f"state has {m} qubits but --n is {n}")
        psi = product_t_state(m)
    elif kind == "file":
        try:
            psi = load_state(rest)
        except (OSError, ValueError, KeyError) as e:
            raise UsageError(f"cannot load {rest!r}: {e}") from None
    else:
        raise UsageError(f"unknown state spec {spec!r}")
    m = len(psi).bit_length() - 1
    if n is not None and n != m:
        raise UsageError(f"state has {m} qubits but --n is {n}")
    info = {"kind": "dense"}
    if m <= 3:
        f = stabilizer_fidelity(psi)
        info.update(distance="certified", stabilizer_fidelity=f)
    else:
        info["distance"] = "uncertified distance"
    return DenseSource(psi), m, info


def _int(s: str) -> int:
    try:
        return int(s)
    except ValueError:
        raise UsageError(f"expected an integer, got {s!r}") from None


# commands ---------------------------------------------------------------------------


def cmd_test(a) -> int:
    src, n, info = parse_state(a.state, a.n)
    records = [] if a.trace else None
    verdict = test_stabilizer(src, n, a.epsilon, a.delta, a.seed, a.workers, records)
    if a.trace:
        write_trace(records, a.trace)
    emit({"command": "test", "state": a.state, "state_info": info, **verdict.to_dict()})
    return 0 if verdict.decision == "stabilizer" else 1


def cmd_estimate(a) -> int:
    src, n, info = parse_state(a.state, a.n)
    K = a.K if a.K is not None else 5 * n
    records = [] if a.trace else None
    rep = estimate_avg_spanning(src, n, K, a.epsilon_est, a.delta, a.seed, a.workers, a.trials, records)
    if a.trace:
        write_trace(records, a.trace)
    emit({"command": "estimate", "state": a.state, "state_info": info, **rep.to_dict()})
    return 0


def cmd_stabvalue(a) -> int:
    v = stabilizer_value(a.n, a.K)
    emit({"command": "stabvalue", "n": a.n, "K": a.K, "value_rational": fraction_str(v), "value_float": float(v)})
    return 0


def cmd_qnk(a) -> int:
    qs = q_row(a.n)
    emit({
        "command": "qnk",
        "n": a.n,
        "T": total_lagrangians(a.n),
        "kappa": [kappa(a.n, k) for k in range(a.n + 1)],
        "Q": [fraction_str(q) for q in qs],
        "Q_float": [float(q) for q in qs],
    })
    return 0


def cmd_commutant(a) -> int:
    if a.action == "enumerate":
        sig = cm.enumerate_sigma(a.t)
        orth = cm.enumerate_orthogonal(a.t)
        doc = {
            "command": "commutant enumerate",
            "t": a.t,
            "sigma_count": len(sig),
            "sigma_count_formula": cm.sigma_count_formula(a.t),
            "orthogonal_count": len(orth),
        }
        if a.catalog:
            with open(a.catalog, "w") as fh:
                fh.write(cm.catalog(a.t))
            doc["catalog"] = a.catalog
        emit(doc)
        return 0
    if a.action == "gram":
        g = cm.gram(a.t, a.n)
        off = g.copy()
        np.fill_diagonal(off, 0)
        emit({
            "command": "commutant gram",
            "t": a.t,
            "n": a.n,
            "size": len(g),
            "diagonal": int(g[0, 0]),
            "max_offdiagonal": int(off.max()) if len(g) > 1 else 0,
            "max_row_sum_offdiagonal": int(off.sum(axis=1).max()),
            "trace_sum": sum(cm.trace_R(h, a.t, a.n) for h in cm.enumerate_sigma(a.t)),
            "trace_sum_formula": frac(cm.trace_sum_formula(a.t, a.n)),
            "gram": g.astype(int).tolist() if a.full else None,
        })
        return 0
    if a.action == "pt-check":
        cm._guard_nt(a.n, a.t)
        checked = failed = 0
        kernel_mismatch = 0
        for o in cm.enumerate_orthogonal(a.t):
            for k in range(a.t + 1):
                for s in itertools.combinations(range(a.t), k):
                    r = cm.pt_singular_check(o, s, a.n)
                    checked += 1
                    failed += not r.ok
                    kernel_mismatch += r.k != r.k_complement
        no_singular = sum(
            1 for o in cm.enumerate_orthogonal(a.t)
            if o != cm.permutation_matrix(range(a.t)) and cm.find_singular_principal_submatrix(o) is None
        )
        emit({
            "command": "commutant pt-check", "t": a.t, "n": a.n, "checked": checked,
            "failed": failed, "kernel_mismatch": kernel_mismatch,
            "nonidentity_without_singular_minor": no_singular,
        })
        return 0 if failed == 0 and no_singular == 0 else 1
    if a.action == "counterexample":
        base = cm.canonical_collection(a.n)
        values = [cm.counterexample_check(base)]
        rng = np.random.default_rng(a.seed)
        for _ in range(a.orbits):
            c = random_clifford(a.n, rng)
            u = c.to_unitary()
            values.append(cm.counterexample_check([u @ s for s in base]))
        emit({
            "command": "commutant counterexample", "n": a.n, "t": 6, "seed": a.seed,
            "values": values, "max_abs": max(abs(v) for v in values),
        })
        return 0 if max(abs(v) for v in values) <= 1e-10 else 1
    raise UsageError(f"unknown commutant action {a.action!r}")


def cmd_verify(a) -> int:
    from . import verify

    results = verify.run_suite(a.suite, seed=a.seed, quick=a.quick)
    ok = all(r["passed"] for r in results)
    emit({"command": "verify", "suite": a.suite, "seed": a.seed, "passed": ok, "results": results})
    return 0 if ok else 1


# parser -----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="stabtest", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def stochastic(q):
        q.add_argument("--seed", type=int, required=True)
        q.add_argument("--workers", type=int, default=None,
                       help="worker processes (default from STABTEST_WORKERS or 1)")
        q.add_argument("--trace", default=None, help="write per-trial CSV here")

    t = sub.add_parser("test", help="run the stabilizer tester")
    t.add_argument("--state", required=True)
    t.add_argument("--n", type=int, default=None)
    t.add_argument("--epsilon", type=float, required=True)
    t.add_argument("--delta", type=float, default=0.05)
    stochastic(t)
    t.set_defaults(func=cmd_test)

    e = sub.add_parser("estimate", help="estimate the average spanning probability")
    e.add_argument("--state", required=True)
    e.add_argument("--n", type=int, default=None)
    e.add_argument("--K", type=int, default=None)
    e.add_argument("--epsilon-est", type=float, default=0.05)
    e.add_argument("--delta", type=float, default=0.05)
    e.add_argument("--trials", type=int, default=None, help="override the Hoeffding trial count")
    stochastic(e)
    e.set_defaults(func=cmd_estimate)

    s = sub.add_parser("stabvalue", help="exact stabilizer value")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--K", type=int, required=True)
    s.set_defaults(func=cmd_stabvalue)

    q = sub.add_parser("qnk", help="Lagrangian intersection probabilities")
    q.add_argument("--n", type=int, required=True)
    q.set_defaults(func=cmd_qnk)

    c = sub.add_parser("commutant", help="commutant numerics")
    c.add_argument("action", choices=["enumerate", "gram", "pt-check", "counterexample"])
    c.add_argument("--t", type=int, default=6)
    c.add_argument("--n", type=int, default=1)
    c.add_argument("--catalog", default=None)
    c.add_argument("--full", action="store_true", help="include the full Gram matrix")
    c.add_argument("--orbits", type=int, default=0)
    c.add_argument("--seed", type=int, default=0)
    c.set_defaults(func=cmd_commutant)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite")
    v.add_argument("--seed", type=int, required=True)
    v.add_argument("--quick", action="store_true", help="smaller sample sizes")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    try:
        return a.func(a)
    except (PreconditionError, UsageError, ValueError) as e:
        emit({"error": {"type": type(e).__name__, "message": str(e)}})
        return 2


if __name__ == "__main__":
    sys.exit(main())
