"""Seeded generators of sequences with known class membership.

Moment sequences of finitely atomic matrix measures on ``[alpha, inf)`` are
extendable.  Non-extendable members of ``K_nnd`` come from direct sums with
the degenerate pattern ``(0, ..., 0, W)``.  Every generated sequence is
checked against :func:`classify` before it is returned.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from gmpy2 import mpq

from .builders import MatSeq, direct_sum
from .classify import is_member
from .errors import BudgetExhaustedError, NonRealAlphaError, ShapeError, UnknownNameError
from .matrix import CMatrix, GaussRational, is_pd, is_psd, rank

MAX_TRIES = 1000
BOUND = 16
GEN_CLASSES = ("K_nnd_ext", "K_pd", "K_nnd", "K_cd")


@dataclass(frozen=True)
class DiscreteMeasure:
    """Finitely many atoms ``(point, weight)`` with ``point >= alpha`` and psd weights."""

    alpha: GaussRational
    atoms: tuple

    def __post_init__(self):
        alpha = GaussRational.coerce(self.alpha)
        if not alpha.is_real:
            raise NonRealAlphaError("a measure on [alpha, inf) needs a real alpha")
        object.__setattr__(self, "alpha", alpha)
        atoms = tuple((GaussRational.coerce(t), W) for t, W in self.atoms)
        if not atoms:
            raise ValueError("a measure needs at least one atom")
        size = atoms[0][1].rows
        for t, W in atoms:
            if not t.is_real or t.re < alpha.re:
                raise ValueError(f"atom {t} lies outside [alpha, inf)")
            if W.shape != (size, size) or not is_psd(W):
                raise ValueError(f"weight at {t} is not a psd {size}x{size} matrix")
        object.__setattr__(self, "atoms", atoms)

    @property
    def q(self):
        return self.atoms[0][1].rows


def moments(mu: DiscreteMeasure, m: int) -> MatSeq:
    """``s_j = sum point^j * weight`` for ``j = 0..m``, with ``0^0 = 1``."""
    if m < 0:
        raise ValueError("m must be non-negative")
    terms = []
    for j in range(m + 1):
        acc = CMatrix.zeros(mu.q)
        for t, W in mu.atoms:
            acc = acc + W.scale(t ** j)
        terms.append(acc)
    return MatSeq(mu.q, mu.q, mu.alpha, tuple(terms))


# random building blocks ----------------------------------------------------------


class Sampler:
    """Bounded random Gaussian rationals and matrices from a seeded ``random.Random``."""

    def __init__(self, seed):
        self.rng = random.Random(seed)

    def rational(self, nonneg=False):
        num = self.rng.randint(0 if nonneg else -BOUND, BOUND)
        return mpq(num, self.rng.randint(1, BOUND))

    def small(self):
        return mpq(self.rng.randint(-3, 3), self.rng.choice((1, 1, 2, 3)))

    def matrix(self, rows, cols, complex_=False):
        entries = [GaussRational(self.small(), self.small() if complex_ else 0)
                   for _ in range(rows * cols)]
        return CMatrix(rows, cols, entries)

    def psd(self, q, rank=None, complex_=None):
        if complex_ is None:
            complex_ = self.rng.random() < 0.5
        r = self.rng.randint(1, q) if rank is None else rank
        if r == 0:
            return CMatrix.zeros(q)
        B = self.matrix(r, q, complex_)
        return B.H @ B

    def pd(self, q):
        for _ in range(MAX_TRIES):
            W = self.psd(q, rank=q) + CMatrix.identity(q).scale(mpq(self.rng.randint(0, 2), 2))
            if is_pd(W):
                return W
        raise BudgetExhaustedError("could not draw a pd matrix")

    def point(self, alpha, strict=False):
        a = GaussRational.coerce(alpha).re
        gap = mpq(self.rng.randint(1 if strict else 0, 8), self.rng.randint(1, 4))
        return a + gap

    def invertible(self, q):
        for _ in range(MAX_TRIES):
            M = self.matrix(q, q, self.rng.random() < 0.5)
            if rank(M) == q:
                return M
        raise BudgetExhaustedError("could not draw an invertible matrix")


def _seed_key(*parts):
    return "|".join(str(p) for p in parts)


def random_measure(sampler, q, alpha, atoms, pd_weights=False, strict=False) -> DiscreteMeasure:
    pts, out = set(), []
    while len(out) < atoms:
        t = sampler.point(alpha, strict)
        if t in pts:
            continue
        pts.add(t)
        out.append((t, sampler.pd(q) if pd_weights else sampler.psd(q)))
    return DiscreteMeasure(GaussRational(alpha), tuple(out))


def degenerate_pattern(q, length, alpha, W) -> MatSeq:
    """``(0, ..., 0, W)``: non-negative definite but not extendable when ``W != 0``."""
    zero = CMatrix.zeros(q)
    return MatSeq(q, q, alpha, tuple([zero] * (length - 1) + [W]))


def congruence(s: MatSeq, A: CMatrix) -> MatSeq:
    """``(A* s_j A)``."""
    return s.map(lambda j, m: A.H @ m @ A, p=A.cols, q=A.cols)


# class-directed generation --------------------------------------------------------


def _draw_ext(sm, q, length, alpha):
    atoms = sm.rng.randint(1, max(1, (length + 1) // 2 + 1))
    return moments(random_measure(sm, q, alpha, atoms), length - 1)


def _draw_pd(sm, q, length, alpha):
    # interior points keep the shifted blocks definite
    atoms = -(-length // 2) + 1 + sm.rng.randint(0, 1)
    return moments(random_measure(sm, q, alpha, atoms, pd_weights=True, strict=True), length - 1)


def _draw_nnd(sm, q, length, alpha):
    q2 = sm.rng.randint(1, q)
    part = degenerate_pattern(q2, length, alpha, sm.psd(q2))
    s = direct_sum(_draw_ext(sm, q - q2, length, alpha), part) if q2 < q else part
    if sm.rng.random() < 0.5:
        s = congruence(s, sm.invertible(q))
    return s


def _draw_cd(sm, q, length, alpha):
    a = GaussRational(alpha)
    if length == 1:
        return MatSeq(q, q, a, (CMatrix.zeros(q),))

    def single(size):
        t = a if length == 2 or sm.rng.random() < 0.25 else GaussRational(sm.point(alpha))
        mu = DiscreteMeasure(a, ((t, sm.psd(size)),))
        return moments(mu, length - 1)

    if q >= 2 and sm.rng.random() < 0.5:
        q1 = sm.rng.randint(1, q - 1)
        s = direct_sum(single(q1), single(q - q1))
    else:
        s = single(q)
    if sm.rng.random() < 0.5:
        s = congruence(s, sm.invertible(q))
    return s


_DRAW = {"K_nnd_ext": _draw_ext, "K_pd": _draw_pd, "K_nnd": _draw_nnd, "K_cd": _draw_cd}


def _accept(cls, s):
    if cls == "K_nnd":
        return is_member(s, "K_nnd") and not is_member(s, "K_nnd_ext")
    return is_member(s, cls)


def random_in_class(cls: str, q: int, length: int, alpha, seed: int) -> MatSeq:
    """A seeded sequence of ``length`` terms of size ``q x q`` in class ``cls``.

    For ``cls = "K_nnd"`` the result is in ``K_nnd`` but not extendable.
    """
    if cls not in _DRAW:
        raise UnknownNameError(f"cannot generate class {cls!r}; choose from {GEN_CLASSES}")
    if q < 1 or length < 1:
        raise ShapeError("q and length must be positive")
    if cls == "K_nnd" and length == 1:
        raise ValueError("every single psd term extends; K_nnd minus K_nnd_ext needs length >= 2")
    alpha = mpq(GaussRational.coerce(alpha).re) if GaussRational.coerce(alpha).is_real else None
    if alpha is None:
        raise NonRealAlphaError("generation needs a real alpha")
    sm = Sampler(_seed_key(cls, q, length, alpha, seed))
    for _ in range(MAX_TRIES):
        s = _DRAW[cls](sm, q, length, alpha)
        if _accept(cls, s):
            return s
    raise BudgetExhaustedError(
        f"no {cls} sequence (q={q}, length={length}, alpha={alpha}) after {MAX_TRIES} draws, seed={seed}")


def adversarial(q: int, length: int, alpha, seed: int) -> MatSeq:
    """Near-degenerate sequences: zero blocks, rank-one weights, atoms at ``alpha``, small perturbations.

    Membership is not fixed in advance; these exercise both sides of every verdict.
    """
    a = mpq(GaussRational.coerce(alpha).re)
    sm = Sampler(_seed_key("adversarial", q, length, a, seed))
    kind = sm.rng.randrange(6)
    if kind == 0:
        return MatSeq(q, q, a, tuple(CMatrix.zeros(q) for _ in range(length)))
    if kind == 1:
        atoms = tuple((sm.point(a) if i else a, sm.psd(q, rank=1)) for i in range(sm.rng.randint(1, 3)))
        return moments(DiscreteMeasure(GaussRational(a), atoms), length - 1)
    if kind == 2:
        s = _draw_ext(sm, q, length, a)
        j = sm.rng.randrange(length)
        e = sm.psd(q, rank=1)
        sign = sm.rng.choice((1, -1))
        return s.with_mats([m + e.scale(sign) if i == j else m for i, m in enumerate(s)])
    if kind == 3:
        if length == 1:
            return MatSeq(q, q, a, (sm.psd(q, rank=1),))
        return degenerate_pattern(q, length, a, sm.psd(q, rank=1))
    if kind == 4:
        zero_at = sm.rng.randrange(length)
        s = _draw_ext(sm, q, length, a)
        return s.with_mats([CMatrix.zeros(q) if i == zero_at else m for i, m in enumerate(s)])
    W = sm.psd(q, rank=1)
    return MatSeq(q, q, a, tuple(W.scale(sm.rational()) for _ in range(length)))


def random_first_term(t: MatSeq, seed: int, mode: str | None = None):
    """A psd candidate first term ``A`` for the inverse step, with a chosen relation to ``t_0``.

    Modes: ``pd`` (``Ker A = 0``), ``range`` (``A = t_0 X t_0`` with ``X`` pd, so
    ``Ker A = Ker t_0``), ``psd`` (unrelated), ``zero``.
    """
    sm = Sampler(_seed_key("first-term", t.q, len(t), seed))
    mode = mode or sm.rng.choice(("pd", "range", "psd", "zero"))
    q = t.q
    if mode == "pd":
        return sm.pd(q), mode
    if mode == "range":
        t0 = t[0]
        return t0 @ sm.pd(q) @ t0, mode
    if mode == "psd":
        return sm.psd(q), mode
    if mode == "zero":
        return CMatrix.zeros(q), mode
    raise UnknownNameError(f"unknown first-term mode {mode!r}")
