import pytest
from hypothesis import given

from stieltjes_schur import verify
from stieltjes_schur.errors import UnknownNameError, ValidationError
from stieltjes_schur.matrix import mat
from stieltjes_schur.verify import (
    CATALOG, CORPUS_KINDS, Entry, SuiteConfig, catalog_keys, check_identity, draw_trial, replay,
    run_suite)

from conftest import class_members, inverse_step_fixture, sequences

EXPECTED_KEYS = (
    "reza-power-sum", "splus-of-reza", "reza-determined-by-compression",
    "short-determined-by-compression", "schur1-determined-by-compression", "reza-scaling",
    "reza-isometry-equivariance", "reza-adjoint", "splus-toeplitz", "reza-toeplitz",
    "toeplitz-pinv", "toeplitz-pinv-forces-dominance", "plus-hankel-blocks",
    "reza-plus-hankel-sum", "reza-plus-hankel-solved", "reciprocal-G-block", "reza-K-block",
    "reza-G-block", "short-hankel", "short-shifted-hankel", "pinv-congruence-block-diagonal",
    "short-class-preservation", "toeplitz-short", "short-closed-forms", "schur1-hankel",
    "schur1-shifted-hankel", "d-matrix-adjoint", "schur1-class-preservation",
    "schurk-class-preservation", "toeplitz-schur1", "schurk-semigroup", "schurk-equivariance",
    "schurk-direct-sum", "schur1-closed-forms", "ldu-even-step", "ldu-two-steps-even",
    "ldu-two-steps-odd", "ldu-even", "ldu-odd", "chain-first-term-step",
    "parametrization-via-schur", "parametrization-via-schur-ext", "parametrization-shift",
    "parametrization-shift-ext", "rank-det-even", "rank-det-odd", "rank-det-ext",
    "ext-defect-criterion", "pd-chain-criterion", "pd-top-criterion", "cd-criterion",
    "cd-order-criterion", "defects-vanish", "class-inclusions", "parametrization-class-criteria",
    "inverse-recursion", "inverse-reza", "inverse-then-schur1", "schur1-then-inverse",
    "inverse-hermitian", "schur1-inverse-roundtrip", "inverse-hankel", "inverse-hankel-reduced",
    "inverse-preserves-nnd", "inverse-preserves-ext", "inverse-preserves-pd",
    "inverse-preserves-cd", "inverse-preserves-cd-order", "inverse-preserves-cd-all",
    "inverse-parametrization", "inverse-parametrization-ext",
)


def test_catalog_coverage():
    assert catalog_keys() == EXPECTED_KEYS
    assert all(CATALOG[k].applicability for k in EXPECTED_KEYS)


class TestExamples:
    def test_power_sum(self, s125):
        c = check_identity("reza-power-sum", s125)
        assert c.status == "pass" and c.comparisons > 0

    def test_parametrization_ext(self, s125):
        assert check_identity("parametrization-via-schur-ext", s125).status == "pass"

    def test_inverse_cd_inapplicable(self):
        t, A = inverse_step_fixture()
        for key in ("inverse-preserves-cd", "inverse-preserves-cd-order",
                    "inverse-preserves-cd-all"):
            c = check_identity(key, t, A)
            assert c.status == "inapplicable"
            assert "Ker A" in c.reason

    def test_short_sequence_inapplicable(self):
        c = check_identity("ldu-two-steps-odd", type(inverse_step_fixture()[0]).of([mat(1)]))
        assert c.status == "inapplicable" and c.reason

    def test_unknown(self, s125):
        with pytest.raises(UnknownNameError):
            check_identity("no-such-identity", s125)

    def test_wire(self, s125):
        doc = check_identity("reza-power-sum", s125).to_wire()
        assert doc["status"] == "pass" and doc["name"] == "reza-power-sum"
        assert "discrepancy" not in doc


def _broken(s, A):
    return [("s_0 = 2 s_0", s[0], s[0].scale(2))]


@pytest.fixture
def broken_entry(monkeypatch):
    monkeypatch.setitem(CATALOG, "broken", Entry("broken", "any", _broken))
    return "broken"


class TestSuite:
    def test_empty_catalog(self):
        out = run_suite({"catalog": [], "trials": 5})
        assert out["counts"] == {} and out["failures"] == [] and out["total_failures"] == 0

    def test_deterministic(self):
        cfg = {"seed": 3, "trials": 6, "catalog": ["reza-power-sum", "schurk-semigroup"]}
        a, b = run_suite(cfg), run_suite(cfg)
        assert a == b
        assert sum(a["counts"]["reza-power-sum"].values()) == 6

    def test_failures_are_reported_and_replayable(self, broken_entry):
        out = run_suite(SuiteConfig(seed=1, trials=4, catalog=(broken_entry,)))
        failures = out["failures"]
        assert failures, "a non-zero first term appears in four draws"
        assert out["total_failures"] == len(failures) == out["counts"]["broken"]["fail"]
        f = failures[0]
        assert f["check"]["discrepancy"]["label"] == "s_0 = 2 s_0"
        assert replay(f).status == "fail"

    def test_crash_counts_as_failure(self, monkeypatch):
        def crash(s, A):
            raise ZeroDivisionError("boom")

        monkeypatch.setitem(CATALOG, "crash", Entry("crash", "any", crash))
        out = run_suite({"trials": 2, "catalog": ["crash"]})
        assert out["counts"]["crash"]["fail"] == 2
        assert "ZeroDivisionError" in out["failures"][0]["check"]["reason"]

    def test_workers_match_serial(self):
        cfg = SuiteConfig(seed=5, trials=4, catalog=("splus-of-reza",), workers=2)
        serial = SuiteConfig(seed=5, trials=4, catalog=("splus-of-reza",))
        assert run_suite(cfg)["counts"] == run_suite(serial)["counts"]

    @pytest.mark.parametrize("doc", [
        [], {"seed": -1}, {"trials": "3"}, {"catalog": ["nope"]}, {"q": [3, 1]},
        {"alpha": ["i"]}, {"kinds": ["H_pd"]}, {"colour": 1}, {"length": [0, 2]}])
    def test_config_validation(self, doc):
        with pytest.raises(ValidationError):
            SuiteConfig.from_wire(doc)

    def test_config_round_trip(self):
        cfg = SuiteConfig(seed=9, trials=3, catalog=("reza-adjoint",), q=(2, 2))
        assert SuiteConfig.from_wire(cfg.to_wire()) == cfg

    def test_corpus_kinds(self):
        cfg = SuiteConfig(trials=60)
        assert {draw_trial(cfg, i)[0] for i in range(60)} == set(CORPUS_KINDS)


@given(sequences(max_len=4))
def test_general_sequences_never_fail(s):
    for key in ("reza-power-sum", "splus-of-reza", "reza-determined-by-compression",
                "reza-scaling", "reza-adjoint", "toeplitz-pinv", "schurk-semigroup"):
        assert check_identity(key, s, s[0]).status != "fail", key


@given(class_members(max_len=5))
def test_members_never_fail(s):
    for key in catalog_keys():
        c = check_identity(key, s, s[0])
        assert c.status != "fail", (key, c.discrepancy)
