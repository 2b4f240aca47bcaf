"""The ten acceptance criteria, each printing one PASS/FAIL line.

Suites run once per session (seed 0, default sizes) and are shared between
criteria; criterion 10 runs them all a second time and compares bytes.
"""

import json
import time
from pathlib import Path

import pytest

from stabledecomp import suites
from stabledecomp.suites import SEMIPERFECT_RINGS, SUITES, run_suite

GOLDEN = Path(__file__).parent / "golden" / "counterexample_report.json"
MODULI = (4, 6, 8, 9, 12)


@pytest.fixture(scope="session")
def first_run():
    out = {}
    for name in SUITES:
        t0 = time.perf_counter()
        res = run_suite(name, seed=0)
        out[name] = (res, time.perf_counter() - t0)
    return out


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {number}: {'PASS' if ok else 'FAIL'} ({detail})")
        assert ok, detail

    return emit


def exhaustive_count(moduli, gens=2, rels=2):
    # the zero module plus every m x c matrix with m <= gens, c <= rels
    return sum(1 + sum(n ** (m * c) for m in range(1, gens + 1) for c in range(rels + 1)) for n in moduli)


def test_criterion_1_decomposition(first_run, report):
    res, elapsed = first_run["decomposition"]
    worst = res.timings["worst_case"]
    ok = (res.passed and res.cases == 600 and res.params == {"seed": 0, "count": 300}
          and worst < 1.0 and elapsed < 300)
    report(1, ok, f"{res.cases} cases, {len(res.failures)} failures, worst case {worst:.3f}s, suite {elapsed:.1f}s")


def test_criterion_2_roundtrip(first_run, report):
    res, _ = first_run["roundtrip"]
    # same seed and count, hence the same 600 presentations as criterion 1
    ok = res.passed and res.cases == 600 and res.params == first_run["decomposition"][0].params
    report(2, ok, f"{res.cases} cases, {len(res.failures)} failures")


def test_criterion_3_mu_epsilon(first_run, report):
    res, _ = first_run["mu-epsilon"]
    ok = res.passed and res.cases == 200
    report(3, ok, f"{res.cases} pairs, {len(res.failures)} failures")


def test_criterion_4_dual_criterion(first_run, report):
    res, _ = first_run["dual-criterion"]
    expected = 600 + exhaustive_count(MODULI)
    ok = res.passed and res.cases == expected and res.params["moduli"] == list(MODULI)
    report(4, ok, f"{res.cases} cases (expected {expected}), {len(res.failures)} failures")


def test_criterion_5_oracle(first_run, report):
    res, elapsed = first_run["oracle"]
    expected = exhaustive_count(MODULI)
    ok = res.passed and res.cases == expected and elapsed < 600
    report(5, ok, f"{res.cases} modules, {len(res.failures)} disagreements, {elapsed:.1f}s")


def test_criterion_6_semiperfect(first_run, report):
    res, _ = first_run["semiperfect"]
    per_ring = {}
    for rec in res.records:
        per_ring[rec["ring"]] = per_ring.get(rec["ring"], 0) + 1
    # module counts up to 16 elements, by the classification of modules over these rings:
    # Z/4: Z/2^a + Z/4^b with a + 2b <= 4; Z/9: a + 2b <= 2; F2[x]/(x^2): F2^a + R^b with
    # a + 2b <= 4; F2 x F2: pairs of vector spaces with total dimension <= 4
    expected_counts = {"z4": 9, "z9": 4, "f2[x]/(0,0,1)": 9, "z2^2": 15}
    wanted = {"z4", "z9", "f2[x]/(0,0,1)", "z2^2", "tri(f2)",
              "idealization(z2)", "idealization(z2^2)", "idealization(z2^3)"}
    ok = (res.passed and set(SEMIPERFECT_RINGS) == wanted and set(per_ring) == wanted
          and all(per_ring[r] == c for r, c in expected_counts.items()))
    report(6, ok, f"{res.cases} modules over {len(per_ring)} rings, {len(res.failures)} failures")


def test_criterion_7_idealization(first_run, report):
    res, _ = first_run["idealization"]
    ks = [rec["k"] for rec in res.records]
    sizes = [rec["ring_size"] for rec in res.records]
    # J = 0 x S has |S| = 2 elements; the quotient A/J is (Z/2)^k
    j_sizes = [len(rec["J"]) for rec in res.records]
    quotients = [rec["A/J_size"] for rec in res.records]
    ok = (res.passed and ks == [1, 2, 3, 4] and sizes == [2 ** (k + 1) for k in ks]
          and j_sizes == [2] * 4 and quotients == [2 ** k for k in ks])
    report(7, ok, f"k = {ks}, |J| = {j_sizes}, |A/J| = {quotients}")


def test_criterion_8_counterexample(first_run, report):
    res, _ = first_run["counterexample"]
    ok = res.passed and res.to_json() == GOLDEN.read_text().rstrip("\n")
    rec = res.records[0]
    ok = ok and rec["pd(Tr(U))<=1"] and rec["U*_nonzero"] and rec["U*"]["text"] == "Z"
    report(8, ok, "matches golden report" if ok else "differs from golden report")


def test_criterion_9_annihilators(first_run, report):
    res, _ = first_run["annihilators"]
    verdicts = {(r["ring"], r["property"]): r["verdict"] for r in res.records}
    ok = res.passed and verdicts == {("z4", "rickart"): False, ("z2^3", "baer"): True,
                                     ("f2[x]/(0,0,1)", "rickart"): False}
    report(9, ok, json.dumps({f"{k[0]} {k[1]}": v for k, v in verdicts.items()}))


def test_criterion_10_determinism(first_run, report):
    second = {name: run_suite(name, seed=0).to_json() for name in SUITES}
    differing = [name for name in SUITES if second[name] != first_run[name][0].to_json()]
    ok = not differing and list(SUITES) == [suites.ALIASES[str(i)] for i in range(1, 10)]
    report(10, ok, "9 suites byte-identical" if ok else f"differing: {differing}")
