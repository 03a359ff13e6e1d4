"""One test per acceptance criterion, at the stated sizes and tolerances.

Each test prints a single ``PASS``/``FAIL`` line summarising what was measured.
Run with ``pytest tests/test_acceptance.py -v -s``.
"""

import json

from stabtest.verify import run_suite

SEED = 20240


def check(label, results):
    ok = all(r["passed"] for r in results)
    failed = [r for r in results if not r["passed"]]
    detail = json.dumps(failed or results[:1], default=str, sort_keys=True)
    print(f"{'PASS' if ok else 'FAIL'} criterion {label}: {detail[:400]}")
    assert ok, detail


def test_criterion_01_stabilizer_value():
    check("1 stabilizer value n=3..8, K=5n, 1e5 trials", run_suite("stabvalue", SEED))


def test_criterion_02_q_limit():
    check("2 Q(20,0) window and monotone decrease", run_suite("qlimit", SEED))


def test_criterion_03_tester():
    check("3 tester completeness, soundness and copy count", run_suite("tester", SEED))


def test_criterion_04_r_p_correspondence():
    check("4 r/p correspondence n=2,3,4", run_suite("rp", SEED))


def test_criterion_05_fidelity_bound():
    check("5 F_Stab >= p(completed M_psi)", run_suite("fidelity", SEED))


def test_criterion_06_commutant_census():
    check("6 commutant census", run_suite("census", SEED))


def test_criterion_07_partial_transpose_law():
    check("7 partial-transpose spectra and singular minors", run_suite("pt", SEED))


def test_criterion_08_counterexample():
    check("8 orthogonal collection annihilated by Pi_O", run_suite("counterexample", SEED))


def test_criterion_09_moment_identity():
    check("9 moment identity over Stab(2)", run_suite("moments", SEED))


def test_criterion_10_gap_diagnostic():
    check("10 gap diagnostic |T>^3, K=15, 1e5 trials", run_suite("gap", SEED))
