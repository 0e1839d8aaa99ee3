"""Sequence-to-sequence maps of the Schur-type algorithm.

All functions take and return :class:`MatSeq` values and never mutate
their input.  The parameter ``alpha`` may be any Gaussian rational here;
only the class tests insist on a real one.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .builders import MatSeq
from .errors import IndexRangeError, SequenceTooShortError, ShapeError, UnknownNameError
from .matrix import CMatrix, pinv

KINDS = ("reciprocal", "alpha_shift", "splus", "reza", "short", "schur1", "schurk", "inverse1")


@dataclass(frozen=True)
class TransformTag:
    name: str
    k: int = 0

    def __post_init__(self):
        if self.name not in KINDS:
            raise UnknownNameError(f"unknown transform {self.name!r}")
        if self.k < 0:
            raise ValueError("k must be non-negative")


def _need(s: MatSeq, length: int, what: str):
    if len(s) < length:
        raise SequenceTooShortError(f"{what} needs at least {length} terms, got {len(s)}")


@lru_cache(maxsize=4096)
def reciprocal(s: MatSeq) -> MatSeq:
    """``r_0 = s_0^+`` and ``r_j = -s_0^+ sum_{l<j} s_{j-l} r_l``; terms are ``q x p``."""
    if not s.mats:
        return MatSeq(s.q, s.p, s.alpha, ())
    s0p = pinv(s[0])
    r = [s0p]
    for j in range(1, len(s)):
        acc = CMatrix.zeros(s.p, s.p)
        for l in range(j):
            acc = acc + s[j - l] @ r[l]
        r.append(-(s0p @ acc))
    return MatSeq(s.q, s.p, s.alpha, tuple(r))


def alpha_shift(s: MatSeq) -> MatSeq:
    """``s_{alpha,j} = -alpha s_j + s_{j+1}``; one term shorter."""
    _need(s, 2, "the alpha-shift")
    a = s.alpha
    return s.with_mats([s[j + 1] - s[j].scale(a) for j in range(s.kappa)])


@lru_cache(maxsize=4096)
def splus(s: MatSeq) -> MatSeq:
    """``t_0 = s_0`` and ``t_j = -alpha s_{j-1} + s_j``."""
    a = s.alpha
    return s.with_mats([s[0]] * bool(s.mats)
                       + [s[j] - s[j - 1].scale(a) for j in range(1, len(s))])


@lru_cache(maxsize=4096)
def reza(s: MatSeq) -> MatSeq:
    """The reciprocal sequence of ``splus(s)``."""
    return reciprocal(splus(s))


@lru_cache(maxsize=4096)
def short(s: MatSeq) -> MatSeq:
    """``-reza(s)_{j+1}`` for ``j < kappa``; terms are ``q x p``."""
    _need(s, 2, "the short transform")
    r = reza(s)
    return r.with_mats([-m for m in r.mats[1:]])


@lru_cache(maxsize=4096)
def schur1(s: MatSeq) -> MatSeq:
    """First Schur transform ``s_0 · short(s)_j · s_0``."""
    _need(s, 2, "the Schur transform")
    s0 = s[0]
    return s.with_mats([s0 @ m @ s0 for m in short(s).mats])


@lru_cache(maxsize=4096)
def schurk(s: MatSeq, k: int) -> MatSeq:
    """``k``-fold iteration of :func:`schur1`; ``k = 0`` is the identity."""
    if not 0 <= k <= s.kappa:
        raise IndexRangeError(f"k={k} must lie in 0..{s.kappa}")
    if k == 0:
        return s
    return schur1(schurk(s, k - 1))


def schur_chain(s: MatSeq):
    """``[schurk(s, 0), ..., schurk(s, kappa)]``."""
    out = [s]
    for _ in range(s.kappa):
        out.append(schur1(out[-1]))
    return out


@lru_cache(maxsize=4096)
def inverse1(t: MatSeq, A: CMatrix) -> MatSeq:
    """Inverse Schur step: the sequence ``s`` with first term ``A`` built from ``t``.

    ``s_j = alpha s_{j-1} + A A^+ sum_{k<j} t_{j-1-k} A^+ splus(s)_k``.
    """
    if A.shape != (t.p, t.q):
        raise ShapeError(f"A has shape {A.shape}, sequence terms are {(t.p, t.q)}")
    a = t.alpha
    Ap = pinv(A)
    AAp = A @ Ap
    s = [A]
    plus = [A]
    for j in range(1, len(t) + 1):
        acc = CMatrix.zeros(t.p, t.q)
        for k in range(j):
            acc = acc + t[j - 1 - k] @ Ap @ plus[k]
        sj = s[j - 1].scale(a) + AAp @ acc
        s.append(sj)
        plus.append(sj - s[j - 1].scale(a))
    return t.with_mats(s)


def apply(tag: TransformTag, s: MatSeq, A: CMatrix | None = None) -> MatSeq:
    """Run the transform named by ``tag``."""
    if tag.name == "schurk":
        return schurk(s, tag.k)
    if tag.name == "inverse1":
        if A is None:
            raise ValueError("inverse1 needs a first term A")
        return inverse1(s, A)
    return {"reciprocal": reciprocal, "alpha_shift": alpha_shift, "splus": splus,
            "reza": reza, "short": short, "schur1": schur1}[tag.name](s)
