"""Shared fixtures, hypothesis strategies and the acceptance summary printer."""

from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from stieltjes_schur.builders import MatSeq
from stieltjes_schur.gen import random_in_class
from stieltjes_schur.matrix import CMatrix, GaussRational, mat

settings.register_profile(
    "default", deadline=None, max_examples=40,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large])
settings.load_profile("default")

ALPHAS = (GaussRational(-1), GaussRational(0), GaussRational("1/2"))


# worked fixtures ---------------------------------------------------------------------


def zero_identity(q=2, alpha=0):
    return MatSeq(q, q, GaussRational(alpha), (CMatrix.zeros(q), CMatrix.identity(q)))


def inverse_step_fixture():
    t = MatSeq.of([mat([[1, 0], [0, 1]]), mat([[1, 1], [1, 0]]), mat([[2, 1], [1, 1]])], alpha=-1)
    return t, mat([[1, 0], [0, 0]])


@pytest.fixture
def s125():
    return MatSeq.of([mat(1), mat(2), mat(5)])


# strategies --------------------------------------------------------------------------

small_rationals = st.builds(lambda n, d: GaussRational(f"{n}/{d}"),
                            st.integers(-3, 3), st.sampled_from([1, 1, 2, 3]))


@st.composite
def gauss(draw, complex_=True):
    re = draw(small_rationals)
    if complex_ and draw(st.booleans()):
        return re + GaussRational(0, 1) * draw(small_rationals)
    return re


@st.composite
def matrices(draw, rows=None, cols=None, max_size=3, complex_=True, low_rank=True):
    r = rows or draw(st.integers(1, max_size))
    c = cols or draw(st.integers(1, max_size))
    if low_rank and draw(st.integers(0, 3)) == 0:
        k = draw(st.integers(1, min(r, c)))
        left = draw(matrices(r, k, complex_=complex_, low_rank=False))
        right = draw(matrices(k, c, complex_=complex_, low_rank=False))
        return left @ right
    return CMatrix(r, c, [draw(gauss(complex_)) for _ in range(r * c)])


@st.composite
def hermitian(draw, n=None, complex_=True):
    n = n or draw(st.integers(1, 3))
    M = draw(matrices(n, n, complex_=complex_))
    return M + M.H


@st.composite
def sequences(draw, min_len=1, max_len=5, square=False, complex_=True, alpha=None):
    p = draw(st.integers(1, 2))
    q = p if square else draw(st.integers(1, 2))
    length = draw(st.integers(min_len, max_len))
    if alpha is None:
        alpha = draw(gauss(complex_))
    mats = [draw(matrices(p, q, complex_=complex_)) for _ in range(length)]
    if draw(st.booleans()):
        # first-term dominant: s_j = s0 X_j s0
        s0 = mats[0]
        mats = [s0] + [s0 @ draw(matrices(q, p, complex_=complex_)) @ s0 for _ in mats[1:]]
    return MatSeq(p, q, alpha, tuple(mats))


@st.composite
def class_members(draw, classes=("K_nnd_ext", "K_pd", "K_nnd", "K_cd"), min_len=1, max_len=6,
                  max_q=2):
    cls = draw(st.sampled_from(classes))
    q = draw(st.integers(1, max_q))
    length = draw(st.integers(max(min_len, 2 if cls == "K_nnd" else 1), max_len))
    alpha = draw(st.sampled_from(ALPHAS))
    seed = draw(st.integers(0, 10 ** 6))
    return random_in_class(cls, q, length, alpha, seed)


# acceptance summary ------------------------------------------------------------------

_ACCEPTANCE = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is not None and report.when == "call":
        number, title = marker.args
        _ACCEPTANCE[number] = (title, report.outcome)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, outcome = _ACCEPTANCE[number]
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {number}: {verdict}  {title}")


@st.composite
def adversarial_members(draw, max_len=6, max_q=2):
    from stieltjes_schur.gen import adversarial

    return adversarial(draw(st.integers(1, max_q)), draw(st.integers(1, max_len)),
                       draw(st.sampled_from(ALPHAS)), draw(st.integers(0, 10 ** 6)))
