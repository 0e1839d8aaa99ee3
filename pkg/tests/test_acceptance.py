"""The nine acceptance criteria, all exact.

Each test carries a ``criterion`` marker; the terminal summary prints one
PASS/FAIL line per criterion.  Run directly with ``python3 tests/test_acceptance.py``.
"""

import itertools
import random
import sys
import time
from functools import lru_cache

import pytest

from stieltjes_schur.builders import L_alpha, MatSeq
from stieltjes_schur.classify import classify
from stieltjes_schur.gen import adversarial, random_first_term, random_in_class
from stieltjes_schur.matrix import CMatrix, GaussRational, ker_included, mat, pinv, psd_check, ran_included
from stieltjes_schur.parametrize import (
    Z_defect, classify_via_parametrization, parametrize, parametrize_via_schur, rank_det_report,
    reconstruct)
from stieltjes_schur.transforms import inverse1, schur1, schurk
from stieltjes_schur.verify import SuiteConfig, catalog_keys, check_identity, draw_trial, run_suite

from conftest import inverse_step_fixture, zero_identity
from oracles import principal_minor_verdict, to_pairs

ALPHAS = ("-1", "0", "1/2")
CORPUS = SuiteConfig(seed=0, trials=200)
PRESERVATION_KEYS = ("schur1-class-preservation", "schurk-class-preservation",
                     "inverse-preserves-nnd", "inverse-preserves-ext", "inverse-preserves-pd",
                     "inverse-preserves-cd", "inverse-preserves-cd-order",
                     "inverse-preserves-cd-all")
PRESERVED = ("K_nnd", "K_nnd_ext", "K_pd", "K_cd")


@lru_cache(maxsize=None)
def corpus():
    return tuple(draw_trial(CORPUS, i) for i in range(CORPUS.trials))


def real_square(s):
    return s.p == s.q and s.alpha.is_real


def dominant(s):
    return all(ker_included(s[0], m) and ran_included(s[0], m) for m in s.mats[1:])


def report(number, detail):
    print(f"criterion {number}: PASS  {detail}")


@pytest.mark.criterion(1, "worked fixtures reproduce exactly")
def test_criterion_1_fixtures():
    start = time.perf_counter()
    for q, a in itertools.product((1, 2, 3), ALPHAS):
        s = zero_identity(q, a)
        v = classify(s).verdicts
        assert v["K_nnd"] and not v["K_cd"]
        assert schur1(s).mats == (CMatrix.zeros(q),)
        assert parametrize(s).Q[1] == CMatrix.identity(q)
        # the one-term prefix is completely degenerate of order 0 while s_1 stays I
        assert v["K_cd_order_0"]
        assert schurk(s, 0)[1] == CMatrix.identity(q)
    t, A = inverse_step_fixture()
    s = inverse1(t, A)
    assert s.mats == (A, A.scale(0), A.scale(2), A.scale(3))
    assert L_alpha(s, 1) == A
    assert classify(t.prefix(2))["K_cd"] and not classify(s.prefix(2))["K_cd"]
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0, f"{elapsed:.2f} s"
    report(1, f"{elapsed:.3f} s")


@pytest.mark.criterion(2, "Schur-route parametrization equals the direct one on measure sequences")
def test_criterion_2_schur_parametrization():
    start, count = time.perf_counter(), 0
    for seed in range(24):
        for q, a in itertools.product((1, 2, 3), ALPHAS):
            length = 1 + (seed + q) % 8
            s = random_in_class("K_nnd_ext", q, length, a, seed)
            assert parametrize_via_schur(s) == parametrize(s)
            count += 1
    elapsed = time.perf_counter() - start
    assert count >= 200
    assert elapsed < 60.0, f"{elapsed:.1f} s"
    report(2, f"{count} sequences, {elapsed:.1f} s")


@pytest.mark.criterion(3, "top parametrization entry carries the defect on non-extendable sequences")
def test_criterion_3_defect():
    count = 0
    for seed in range(12):
        for q, a in itertools.product((1, 2, 3), ALPHAS):
            length = 2 + seed % 6
            s = random_in_class("K_nnd", q, length, a, seed)
            assert not classify(s)["K_nnd_ext"]
            k = s.kappa
            assert parametrize(s).Q[k] == schurk(s, k)[0] + Z_defect(s, k, k)
            count += 1
    assert count >= 100
    report(3, f"{count} sequences")


@pytest.mark.criterion(4, "round trips")
def test_criterion_4_round_trips():
    param = forward = backward = 0
    for i, (_, s, _) in enumerate(corpus()):
        assert reconstruct(parametrize(s)) == s
        param += 1
        if len(s) >= 2 and dominant(s):
            assert inverse1(schur1(s), s[0]) == s
            forward += 1
        if s.p == s.q and dominant(s):
            for mode in ("pd", "range"):
                A, _ = random_first_term(s, i, mode)
                if ker_included(A, s[0]) and ran_included(A, s[0]):
                    assert schur1(inverse1(s, A)) == s
                    backward += 1
    assert param == CORPUS.trials and forward > 0 and backward > 0
    report(4, f"{param} parametrizations, {forward} forward, {backward} backward")


def _implied_orders(v, w, k, length):
    for m in range(length):
        if v[f"K_cd_order_{m}"]:
            assert w[f"K_cd_order_{max(0, m - k)}"], (m, k)


@pytest.mark.criterion(5, "class preservation in both directions")
def test_criterion_5_class_preservation():
    checked = admissible = 0
    for i, (_, s, A) in enumerate(corpus()):
        if real_square(s):
            v = classify(s).verdicts
            for k in range(1, len(s)):
                w = classify(schurk(s, k)).verdicts
                for name in PRESERVED:
                    assert not v[name] or w[name], (i, k, name)
                _implied_orders(v, w, k, len(s))
                checked += 1
        for key in PRESERVATION_KEYS:
            c = check_identity(key, s, A)
            assert c.status != "fail", (i, key, c.discrepancy)
            admissible += c.status == "pass"
    assert checked > 0 and admissible > 0
    report(5, f"{checked} (s, k) pairs, {admissible} admissible catalog checks")


@pytest.mark.criterion(6, "identity catalog reports zero failures")
def test_criterion_6_catalog():
    summary = run_suite(CORPUS)
    assert set(summary["counts"]) == set(catalog_keys())
    assert summary["total_failures"] == 0, summary["failures"][:3]
    passes = sum(c["pass"] for c in summary["counts"].values())
    assert all(c["pass"] > 0 for c in summary["counts"].values())
    report(6, f"{len(catalog_keys())} identities, {passes} passing checks, 0 failures")


@pytest.mark.criterion(7, "rank and determinant identities along the Schur chain")
def test_criterion_7_rank_det():
    count = 0
    for _, s, _ in corpus():
        if real_square(s) and classify(s)["K_nnd"]:
            r = rank_det_report(s)
            assert r.ok, r.mismatches
            count += len(r.entries)
    assert count > 0
    report(7, f"{count} factorization entries")


@pytest.mark.criterion(8, "classifier agrees with the parametrization-based classifier")
def test_criterion_8_classifier_consistency():
    sequences = [s for _, s, _ in corpus() if real_square(s)]
    rng = random.Random("adversarial-acceptance")
    sequences += [adversarial(rng.randint(1, 3), rng.randint(1, 7), rng.choice(ALPHAS), seed)
                  for seed in range(50)]
    compared = 0
    for s in sequences:
        a, b = classify(s).verdicts, classify_via_parametrization(s).verdicts
        shared = set(a) & set(b)
        assert {"K_nnd", "K_nnd_ext", "K_pd", "K_cd"} <= shared
        for name in shared:
            assert a[name] == b[name], (name, s)
        compared += len(shared)
    report(8, f"{len(sequences)} sequences, {compared} verdicts")


def _hermitian_real(n):
    cells = [(i, j) for i in range(n) for j in range(i, n)]
    for values in itertools.product(range(-2, 3), repeat=len(cells)):
        rows = [[0] * n for _ in range(n)]
        for (i, j), x in zip(cells, values):
            rows[i][j] = rows[j][i] = x
        yield mat(rows)


def _hermitian_complex_2x2():
    gauss = [GaussRational(a, b) for a in range(-2, 3) for b in range(-2, 3)]
    for a, d in itertools.product(range(-2, 3), repeat=2):
        for b in gauss:
            yield CMatrix(2, 2, [GaussRational(a), b, b.conjugate(), GaussRational(d)])


def _hermitian_complex_3x3_sample(count, rng):
    for _ in range(count):
        rows = [[None] * 3 for _ in range(3)]
        for i in range(3):
            rows[i][i] = GaussRational(rng.randint(-2, 2))
            for j in range(i + 1, 3):
                x = GaussRational(rng.randint(-2, 2), rng.randint(-2, 2))
                rows[i][j], rows[j][i] = x, x.conjugate()
        yield CMatrix(3, 3, [x for r in rows for x in r])


def _penrose(A):
    X = pinv(A)
    return (A @ X @ A == A and X @ A @ X == X
            and (A @ X).is_hermitian() and (X @ A).is_hermitian())


@pytest.mark.criterion(9, "definiteness and pseudoinverse against brute-force oracles")
def test_criterion_9_matrix_core():
    rng = random.Random(9)
    psd_cases = itertools.chain(
        *(_hermitian_real(n) for n in (1, 2, 3)), _hermitian_complex_2x2(),
        _hermitian_complex_3x3_sample(3000, rng))
    psd_count = 0
    for A in psd_cases:
        assert psd_check(A).value == principal_minor_verdict(to_pairs(A)), A
        psd_count += 1
    for _ in range(500):
        r, c = rng.randint(1, 4), rng.randint(1, 5)
        entries = [GaussRational(rng.randint(-3, 3), rng.randint(-3, 3) if rng.random() < 0.5 else 0)
                   for _ in range(r * c)]
        A = CMatrix(r, c, entries)
        if rng.random() < 0.3 and min(r, c) > 1:
            A = A @ CMatrix.diag(0, *([1] * (c - 1)))  # force a rank drop
        assert _penrose(A), A
    report(9, f"{psd_count} Hermitian matrices, 500 pseudoinverses")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
