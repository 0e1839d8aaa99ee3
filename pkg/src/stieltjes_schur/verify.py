"""Catalog of exact identities between the transforms and the block matrices.

Each entry evaluates two sides through separate routes, typically a block
Hankel/Toeplitz expression built from the raw terms against the output of a
transform, and compares them with exact equality.  An entry whose hypotheses
do not hold for the given input reports ``inapplicable`` and names the
failing hypothesis.

:func:`run_suite` draws a seeded corpus and tallies every requested entry.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Optional

from . import wire
from .builders import (
    Lambda, MatSeq, d_matrices, direct_sum, hankel, hankel_alpha, hankel_g, hankel_k,
    resolvent, resolvent_inv, structural, toeplitz_lower, toeplitz_upper, xi_block, y_stack,
    z_stack,
)
from .classify import classify
from .errors import UnknownNameError, ValidationError
from .gen import GEN_CLASSES, Sampler, adversarial, random_first_term, random_in_class
from .matrix import (
    CMatrix, GaussRational, det, is_pd, is_psd, ker_included, pinv, ran_included, rank,
)
from .parametrize import (
    P_defect, Z_defect, classify_via_parametrization, parametrize, rank_det_report,
)
from .transforms import alpha_shift, inverse1, reciprocal, reza, schur1, schurk, short, splus


class Inapplicable(Exception):
    """Raised by an entry whose hypotheses fail; the message names the hypothesis."""


@dataclass(frozen=True)
class IdentityCheck:
    name: str
    applicability: str
    status: str
    reason: Optional[str] = None
    discrepancy: Optional[dict] = None
    comparisons: int = 0

    def to_wire(self):
        doc = {"name": self.name, "applicability": self.applicability, "status": self.status,
               "comparisons": self.comparisons}
        if self.reason is not None:
            doc["reason"] = self.reason
        if self.discrepancy is not None:
            doc["discrepancy"] = self.discrepancy
        return wire.to_plain(doc)


@dataclass(frozen=True)
class Entry:
    key: str
    applicability: str
    fn: Callable
    wants_first_term: bool = False


CATALOG: dict = {}


def entry(key, applicability, wants_first_term=False):
    def register(fn):
        CATALOG[key] = Entry(key, applicability, fn, wants_first_term)
        return fn
    return register


def catalog_keys():
    return tuple(CATALOG)


# small helpers ---------------------------------------------------------------------

Sl, Su = toeplitz_lower, toeplitz_upper
ONE = GaussRational(1)


def _eye(n):
    return CMatrix.identity(n)


def _OI(q, n):
    return structural(q, n, "OI")


def _IO(q, n):
    return structural(q, n, "IO")


def _v(q, n):
    return structural(q, n, "v")


def _kron(T: CMatrix, B: CMatrix) -> CMatrix:
    """``T ⊗ B`` for a scalar matrix ``T``."""
    return CMatrix.block([[B.scale(T[i, j]) for j in range(T.cols)] for i in range(T.rows)])


def _shift(n):
    return structural(1, n, "T")


def _halpha_explicit(s, n):
    # -alpha H_n + K_n assembled from the two plain Hankel blocks
    return hankel_k(s, n) - hankel(s, n).scale(s.alpha)


def _compress(s, j):
    s0 = s[0]
    s0p = pinv(s0)
    return s0 @ s0p @ s[j] @ s0p @ s0


def _dominant(s, upto):
    s0 = s[0]
    return all(ker_included(s0, s[j]) and ran_included(s0, s[j]) for j in range(1, upto + 1))


def _need_terms(s, n):
    if len(s) < n:
        raise Inapplicable(f"needs at least {n} terms")


def _need_real(s):
    if not s.alpha.is_real:
        raise Inapplicable("alpha is not real")


def _need_square(s):
    if s.p != s.q:
        raise Inapplicable("p != q")


def _verdicts(s):
    _need_real(s)
    if s.p != s.q or not s.mats:
        return None
    return classify(s).verdicts


def _need_class(s, name):
    v = _verdicts(s)
    if v is None or not v[name]:
        raise Inapplicable(f"not in {name}")
    return v


def _dtilde_prefixes(s, parity):
    """``n`` with ``2n + parity <= kappa`` whose prefix of that length is in D_tilde."""
    out, n = [], 0
    while 2 * n + parity <= s.kappa:
        if _dominant(s, 2 * n + parity - 1):
            out.append(n)
        n += 1
    return out


def _seq_cmp(label, a: MatSeq, b: MatSeq):
    if len(a) != len(b):
        return [(f"{label}.length", len(a), len(b))]
    return [(f"{label}[{j}]", x, y) for j, (x, y) in enumerate(zip(a.mats, b.mats))]


def _chain_eq(label, *sides):
    return [(f"{label}#{i}", sides[0], side) for i, side in enumerate(sides[1:], 1)]


def _pdet(s):
    return det(s[0]).pinv()


def _classes_of(s):
    v = classify(s).verdicts
    return v


def _implication(label, premise, conclusion):
    return (label, (not premise) or conclusion, True)


def _class_preservation(s, image, drop):
    """Membership implications from ``s`` to ``image``, where ``image`` is ``drop`` terms shorter."""
    src, dst = _classes_of(s), _classes_of(image)
    out = [_implication(c, src[c], dst[c]) for c in ("K_nnd", "K_nnd_ext", "K_pd", "K_cd")]
    for m in range(s.kappa + 1):
        target = max(0, m - drop)
        if target <= image.kappa:
            out.append(_implication(f"K_cd_order_{m}", src[f"K_cd_order_{m}"],
                                    dst[f"K_cd_order_{target}"]))
    return out


def _perturbations(s):
    """Sequences sharing (or not) the compressed terms ``s0 s0^+ s_j s0^+ s0`` with ``s``."""
    s0 = s[0]
    s0p = pinv(s0)
    E = CMatrix(s.p, s.q, [1] * (s.p * s.q))
    Pl, Pr = _eye(s.p) - s0 @ s0p, _eye(s.q) - s0p @ s0
    hidden = Pl @ E + E @ Pr
    out = [s.with_mats([m if j == 0 else m + hidden for j, m in enumerate(s.mats)])]
    out.append(s.with_mats(list(s.mats[:-1]) + [s.mats[-1] + s0]))
    out.append(s.with_mats([s0 + Pl @ E @ Pr] + list(s.mats[1:])))
    return out


# reciprocal sequences and the reza transform -------------------------------------------


@entry("reza-power-sum", "any sequence")
def _reza_power_sum(s, A):
    z, r, a = reza(s), reciprocal(s), s.alpha
    out = []
    for j in range(len(s)):
        acc = CMatrix.zeros(s.q, s.p)
        for l in range(j + 1):
            acc = acc + r[l].scale(a ** (j - l))
        out.append((f"reza[{j}]", z[j], acc))
    return out


@entry("splus-of-reza", "any sequence")
def _splus_of_reza(s, A):
    return _seq_cmp("splus(reza)", splus(reza(s)), reciprocal(s))


def _determined_by_compression(s, transform, same_first):
    out = []
    for i, t in enumerate(_perturbations(s)):
        lhs = transform(s) == transform(t) and (not same_first or s[0] == t[0])
        rhs = all(_compress(s, j) == _compress(t, j) for j in range(len(s)))
        out.append((f"variant{i}", lhs, rhs))
    return out


@entry("reza-determined-by-compression", "any sequence")
def _reza_compression(s, A):
    return _determined_by_compression(s, reza, False)


@entry("short-determined-by-compression", "at least 2 terms")
def _short_compression(s, A):
    _need_terms(s, 2)
    return _determined_by_compression(s, short, True)


@entry("schur1-determined-by-compression", "at least 2 terms")
def _schur1_compression(s, A):
    _need_terms(s, 2)
    return _determined_by_compression(s, schur1, True)


def _gauss(x):
    return GaussRational.coerce(x)


SCALARS = (_gauss(2), GaussRational(-1) / 3, GaussRational(0, 1))


def _power_scaled(s, g):
    return s.map(lambda j, m: m.scale(g ** j)).with_alpha(s.alpha * g)


@entry("reza-scaling", "any sequence")
def _reza_scaling(s, A):
    z = reza(s)
    out = []
    for g in SCALARS + (GaussRational(0),):
        lhs = reza(s.map(lambda j, m: m.scale(g)))
        out += _seq_cmp(f"scalar {g}", lhs, z.map(lambda j, m: m.scale(g.pinv())))
    for g in SCALARS:
        lhs = reza(_power_scaled(s, g))
        rhs = z.map(lambda j, m: m.scale(g ** j)).with_alpha(s.alpha * g)
        out += _seq_cmp(f"power {g}", lhs, rhs)
    return out


@entry("reza-isometry-equivariance", "any sequence")
def _reza_isometries(s, A):
    z = reza(s)
    L = s[0].H  # Ran L* = Ran s0 and Ran L = Ran s0*
    out = _seq_cmp("left", reza(s.map(lambda j, m: L @ m, p=s.q, q=s.q)),
                   z.map(lambda j, m: m @ pinv(L), p=s.q, q=s.q))
    out += _seq_cmp("right", reza(s.map(lambda j, m: m @ L, p=s.p, q=s.p)),
                    z.map(lambda j, m: pinv(L) @ m, p=s.p, q=s.p))
    out += _seq_cmp("both", reza(s.map(lambda j, m: L @ m @ L, p=s.q, q=s.p)),
                    z.map(lambda j, m: pinv(L) @ m @ pinv(L), p=s.p, q=s.q))
    U = CMatrix.vstack([_eye(s.p), CMatrix.zeros(1, s.p)])
    V = CMatrix.hstack([_eye(s.q), CMatrix.zeros(s.q, 1)])
    out += _seq_cmp("isometry", reza(s.map(lambda j, m: U @ m @ V, p=s.p + 1, q=s.q + 1)),
                    z.map(lambda j, m: V.H @ m @ U.H, p=s.q + 1, q=s.p + 1))
    return out


@entry("reza-adjoint", "any sequence")
def _reza_adjoint(s, A):
    return _seq_cmp("adjoint", reza(s).adjoint(), reza(s.adjoint()))


# Toeplitz matrices ----------------------------------------------------------------------


@entry("splus-toeplitz", "any sequence")
def _splus_toeplitz(s, A):
    u, a, ac = splus(s), s.alpha, s.alpha.conjugate()
    out = []
    for m in range(len(s)):
        lo, up = Sl(s, m), Su(s, m)
        out += _chain_eq(f"lower m={m}", Sl(u, m), lo @ resolvent_inv(s.q, m, a),
                         resolvent_inv(s.p, m, a) @ lo)
        out += _chain_eq(f"upper m={m}", Su(u, m), up @ resolvent_inv(s.q, m, ac).H,
                         resolvent_inv(s.p, m, ac).H @ up)
    return out


@entry("reza-toeplitz", "any sequence; the pseudoinverse forms need first-term dominance")
def _reza_toeplitz(s, A):
    z, r, a, ac = reza(s), reciprocal(s), s.alpha, s.alpha.conjugate()
    dominant = _dominant(s, s.kappa)
    out = []
    for n in range(len(s)):
        lo, up = Sl(r, n), Su(r, n)
        sides = [Sl(z, n), resolvent(s.q, n, a) @ lo, lo @ resolvent(s.p, n, a)]
        if dominant:
            sides.append(resolvent(s.q, n, a) @ pinv(Sl(s, n)))
        out += _chain_eq(f"lower n={n}", *sides)
        sides = [Su(z, n), resolvent(s.q, n, ac).H @ up, up @ resolvent(s.p, n, ac).H]
        if dominant:
            sides.append(pinv(Su(s, n)) @ resolvent(s.p, n, ac).H)
        out += _chain_eq(f"upper n={n}", *sides)
    return out


@entry("toeplitz-pinv", "first-term dominant sequence")
def _toeplitz_pinv(s, A):
    if not _dominant(s, s.kappa):
        raise Inapplicable("not first-term dominant")
    r, s0 = reciprocal(s), s[0]
    s0p = pinv(s0)
    out = []
    for m in range(len(s)):
        lo, up = Sl(s, m), Su(s, m)
        out.append((f"pinv lower m={m}", pinv(lo), Sl(r, m)))
        out.append((f"pinv upper m={m}", pinv(up), Su(r, m)))
        out += _chain_eq(f"range projector m={m}", lo @ pinv(lo), (s0 @ s0p).kron_identity(m + 1),
                         up @ pinv(up))
        out += _chain_eq(f"corange projector m={m}", pinv(lo) @ lo,
                         (s0p @ s0).kron_identity(m + 1), pinv(up) @ up)
    return out


def _is_block_toeplitz_lower(M, n, rows, cols):
    col = [M.block_at(j, 0, rows, cols) for j in range(n + 1)]
    seq = MatSeq(rows, cols, GaussRational(0), tuple(col))
    return M == Sl(seq, n)


def _is_block_toeplitz_upper(M, n, rows, cols):
    row = [M.block_at(0, k, rows, cols) for k in range(n + 1)]
    seq = MatSeq(rows, cols, GaussRational(0), tuple(row))
    return M == Su(seq, n)


@entry("toeplitz-pinv-forces-dominance", "any sequence")
def _toeplitz_pinv_dominance(s, A):
    out = []
    for m in range(len(s)):
        toeplitz = (_is_block_toeplitz_lower(pinv(Sl(s, m)), m, s.q, s.p)
                    or _is_block_toeplitz_upper(pinv(Su(s, m)), m, s.q, s.p))
        out.append(_implication(f"m={m}", toeplitz, _dominant(s, m)))
    return out


# block Hankel identities for [+] and reza ----------------------------------------------


def _alpha_correction(s, n):
    """``alpha R_p(alpha) OI_p H_{alpha,n-1} [R_q(conj alpha) OI_q]^*``."""
    a, ac = s.alpha, s.alpha.conjugate()
    return (resolvent(s.p, n, a) @ _OI(s.p, n) @ hankel_alpha(s, n - 1)
            @ (resolvent(s.q, n, ac) @ _OI(s.q, n)).H).scale(a)


@entry("plus-hankel-blocks", "length requirements per block")
def _plus_hankel(s, A):
    t, a, ac = splus(s), s.alpha, s.alpha.conjugate()
    out, k = [], s.kappa
    for n in range(1, k // 2 + 1):
        rhs = (resolvent_inv(s.p, n, a) @ hankel(s, n) @ resolvent_inv(s.q, n, ac).H
               + (_OI(s.p, n) @ _halpha_explicit(s, n - 1) @ _OI(s.q, n).H).scale(a))
        out.append((f"H n={n}", hankel(t, n), rhs))
    for n in range((k - 1) // 2 + 1 if k >= 1 else 0):
        out.append((f"K n={n}", hankel_k(t, n), _halpha_explicit(s, n)))
    for n in range((k - 2) // 2 + 1 if k >= 2 else 0):
        sa = alpha_shift(s)
        out += _chain_eq(f"G n={n}", hankel_g(t, n), hankel_k(sa, n),
                         hankel_g(s, n) - hankel_k(s, n).scale(a))
    for n in range(1, k // 2 + 1):
        sa = alpha_shift(s)
        rhs = hankel_k(sa, n - 1) - y_stack(sa, 0, n - 1) @ pinv(s[0]) @ z_stack(sa, 0, n - 1)
        out.append((f"Lambda n={n}", Lambda(t, n), rhs))
    return out


@entry("reza-plus-hankel-sum", "prefix s_0..s_2n in D_tilde")
def _reza_plus_sum(s, A):
    rz, u, rec, a, ac = reza(s), splus(s), reciprocal(s), s.alpha, s.alpha.conjugate()
    p, q = s.p, s.q
    out = []
    for n in _dtilde_prefixes(s, 0):
        out.append((f"reza n={n}", hankel(rz, n) + Sl(rz, n) @ hankel(u, n) @ Su(rz, n),
                    y_stack(rz, 0, n) @ _v(p, n).H + _v(q, n) @ z_stack(rz, 0, n)))
        out.append((f"plus n={n}", hankel(u, n) + Sl(u, n) @ hankel(rz, n) @ Su(u, n),
                    y_stack(u, 0, n) @ _v(q, n).H + _v(p, n) @ z_stack(u, 0, n)
                    + xi_block(s, n, 2 * n)))
        if n == 0:
            continue
        corr = _alpha_correction(s, n)
        out.append((f"pinv n={n}",
                    hankel(rz, n) + pinv(Sl(s, n)) @ (hankel(s, n) + corr) @ pinv(Su(s, n)),
                    resolvent(q, n, a) @ y_stack(rec, 0, n) @ _v(p, n).H
                    + _v(q, n) @ z_stack(rec, 0, n) @ resolvent(p, n, ac).H))
        out.append((f"plain n={n}", hankel(s, n) + Sl(s, n) @ hankel(rz, n) @ Su(s, n) + corr,
                    y_stack(s, 0, n) @ (resolvent(q, n, ac) @ _v(q, n)).H
                    + resolvent(p, n, a) @ _v(p, n) @ z_stack(s, 0, n) + xi_block(s, n, 2 * n)))
    return out


@entry("reza-plus-hankel-solved", "prefix s_0..s_2n in D_tilde; determinants need p = q")
def _reza_plus_solved(s, A):
    rz, u, rec, a, ac = reza(s), splus(s), reciprocal(s), s.alpha, s.alpha.conjugate()
    p, q = s.p, s.q
    out = []
    for n in _dtilde_prefixes(s, 0):
        Xi = xi_block(s, n, 2 * n)
        plus_bd = y_stack(u, 0, n) @ _v(q, n).H + _v(p, n) @ z_stack(u, 0, n)
        reza_bd = y_stack(rz, 0, n) @ _v(p, n).H + _v(q, n) @ z_stack(rz, 0, n)
        out.append((f"reza n={n}", hankel(rz, n),
                    -(Sl(rz, n) @ (hankel(u, n) - plus_bd) @ Su(rz, n))))
        out.append((f"plus n={n}", hankel(u, n),
                    Xi - Sl(u, n) @ (hankel(rz, n) - reza_bd) @ Su(u, n)))
        out.append((f"rank n={n}", rank(hankel(rz, n)), rank(hankel(u, n) - plus_bd - Xi)))
        if p == q:
            out.append((f"det n={n}", det(hankel(rz, n)),
                        _pdet(s) ** (2 * n + 2) * det(-(hankel(u, n) - plus_bd))))
        if n == 0:
            continue
        corr = _alpha_correction(s, n)
        plain_bd = (y_stack(s, 0, n) @ (resolvent(q, n, ac) @ _v(q, n)).H
                    + resolvent(p, n, a) @ _v(p, n) @ z_stack(s, 0, n))
        rec_bd = (resolvent(q, n, a) @ y_stack(rec, 0, n) @ _v(p, n).H
                  + _v(q, n) @ z_stack(rec, 0, n) @ resolvent(p, n, ac).H)
        out.append((f"pinv n={n}", hankel(rz, n),
                    -(pinv(Sl(s, n)) @ (hankel(s, n) + corr - plain_bd) @ pinv(Su(s, n)))))
        out.append((f"plain n={n}", hankel(s, n) + corr,
                    Xi - Sl(s, n) @ (hankel(rz, n) - rec_bd) @ Su(s, n)))
    return out


@entry("reciprocal-G-block", "n >= 1 and prefix s_0..s_2n in D_tilde")
def _reciprocal_g(s, A):
    rec = reciprocal(s)
    out = []
    for n in _dtilde_prefixes(s, 0):
        if n == 0:
            continue
        rhs = -(_OI(s.q, n).H @ pinv(Sl(s, n)) @ hankel(s, n) @ pinv(Su(s, n)) @ _OI(s.p, n))
        out.append((f"n={n}", hankel_g(rec, n - 1), rhs))
    return out


@entry("reza-K-block", "prefix s_0..s_{2n+1} in D_tilde; determinants need p = q")
def _reza_k(s, A):
    rz, u, a, ac = reza(s), splus(s), s.alpha, s.alpha.conjugate()
    out = []
    for n in _dtilde_prefixes(s, 1):
        Kr = hankel_k(rz, n)
        Xi = xi_block(s, n, 2 * n + 1)
        out += _chain_eq(f"n={n}", Kr, -(Sl(rz, n) @ hankel_k(u, n) @ Su(rz, n)),
                         -(resolvent(s.q, n, a) @ pinv(Sl(s, n)) @ hankel_alpha(s, n)
                           @ pinv(Su(s, n)) @ resolvent(s.p, n, ac).H))
        out.append((f"plus n={n}", hankel_k(u, n), Xi - Sl(u, n) @ Kr @ Su(u, n)))
        out.append((f"rank n={n}", rank(Kr), rank(hankel_k(u, n) - Xi)))
        if s.p == s.q:
            out.append((f"det n={n}", det(Kr), _pdet(s) ** (2 * n + 2) * det(-hankel_k(u, n))))
    return out


@entry("reza-G-block", "prefix s_0..s_{2n+2} in D_tilde; determinants need p = q")
def _reza_g(s, A):
    rz, u, a, ac = reza(s), splus(s), s.alpha, s.alpha.conjugate()
    p, q = s.p, s.q
    out = []
    for n in _dtilde_prefixes(s, 2):
        sa = alpha_shift(s)
        Gr = hankel_g(rz, n)
        lam_u = Lambda(u, n + 1)
        inner = hankel_k(sa, n) - y_stack(sa, 0, n) @ pinv(s[0]) @ z_stack(sa, 0, n)
        Rq, Rp = resolvent(q, n, a), resolvent(p, n, ac).H
        third = (-(_OI(q, n + 1).H @ pinv(Sl(s, n + 1)) @ hankel(s, n + 1) @ pinv(Su(s, n + 1))
                   @ _OI(p, n + 1))
                 - (Rq @ pinv(Sl(s, n)) @ hankel_alpha(s, n) @ pinv(Su(s, n)) @ Rp).scale(a))
        out += _chain_eq(f"n={n}", Gr, -(Sl(rz, n) @ lam_u @ Su(rz, n)),
                         -(Rq @ pinv(Sl(s, n)) @ inner @ pinv(Su(s, n)) @ Rp), third)
        Xi = xi_block(s, n, 2 * n + 2)
        out.append((f"plus n={n}", hankel_g(u, n),
                    Xi - Sl(u, n) @ Lambda(rz, n + 1) @ Su(u, n)))
        out += _chain_eq(f"rank n={n}", rank(Gr), rank(lam_u - Xi), rank(inner - Xi))
        if p == q:
            c = _pdet(s) ** (2 * n + 2)
            out += _chain_eq(f"det n={n}", det(Gr), c * det(-lam_u), c * det(-inner))
    return out


# the short transform -----------------------------------------------------------------


@entry("short-hankel", "prefix s_0..s_{2n+1} in D_tilde; determinants need p = q")
def _short_hankel(s, A):
    _need_terms(s, 2)
    sh, rz, a, ac = short(s), reza(s), s.alpha, s.alpha.conjugate()
    out = []
    for n in _dtilde_prefixes(s, 1):
        Ha = hankel_alpha(s, n)
        Hs = hankel(sh, n)
        out += _chain_eq(f"n={n}", Hs, -hankel_k(rz, n),
                         resolvent(s.q, n, a) @ pinv(Sl(s, n)) @ Ha @ pinv(Su(s, n))
                         @ resolvent(s.p, n, ac).H)
        out.append((f"rank n={n}", rank(Hs), rank(Ha - xi_block(s, n, 2 * n + 1))))
        if s.p == s.q:
            out.append((f"det n={n}", det(Hs), _pdet(s) ** (2 * n + 2) * det(Ha)))
    return out


def _short_shifted(s, n):
    sh = short(s)
    return hankel_k(sh, n - 1) - hankel(sh, n - 1).scale(s.alpha)


@entry("short-shifted-hankel", "n >= 1 and prefix s_0..s_2n in D_tilde; determinants need p = q")
def _short_shifted_hankel(s, A):
    _need_terms(s, 2)
    out = []
    for n in _dtilde_prefixes(s, 0):
        if n == 0:
            continue
        M = _short_shifted(s, n)
        lam = Lambda(s, n)
        out += _chain_eq(f"n={n}", M,
                         _OI(s.q, n).H @ pinv(Sl(s, n)) @ hankel(s, n) @ pinv(Su(s, n))
                         @ _OI(s.p, n),
                         pinv(Sl(s, n - 1)) @ lam @ pinv(Su(s, n - 1)))
        out += _chain_eq(f"rank n={n}", rank(M),
                         rank(hankel(s, n) - xi_block(s, n, 2 * n)) - rank(s[0]),
                         rank(lam - xi_block(s, n - 1, 2 * n)))
        if s.p == s.q:
            out += _chain_eq(f"det n={n}", det(M), _pdet(s) ** (2 * n + 1) * det(hankel(s, n)),
                             _pdet(s) ** (2 * n) * det(lam))
    return out


@entry("pinv-congruence-block-diagonal", "n >= 1 and prefix s_0..s_2n in D_tilde")
def _pinv_congruence(s, A):
    _need_terms(s, 2)
    rec = reciprocal(s)
    out = []
    for n in _dtilde_prefixes(s, 0):
        if n == 0:
            continue
        out.append((f"n={n}", pinv(Sl(s, n)) @ hankel(s, n) @ pinv(Su(s, n)),
                    CMatrix.block_diag(rec[0], _short_shifted(s, n))))
    return out


@entry("short-class-preservation", "real alpha, p = q, at least 2 terms")
def _short_classes(s, A):
    _need_real(s)
    _need_square(s)
    _need_terms(s, 2)
    return _class_preservation(s, short(s), 1)


@entry("toeplitz-short", "at least 2 terms; n <= kappa-1")
def _toeplitz_short(s, A):
    _need_terms(s, 2)
    sh, rec, a, ac = short(s), reciprocal(s), s.alpha, s.alpha.conjugate()
    s0p = pinv(s[0])
    out = []
    for n in range(s.kappa):
        lo = (_kron(_shift(n).H, s0p)
              - _OI(s.q, n + 1).H @ resolvent(s.q, n + 1, a) @ Sl(rec, n + 1) @ _IO(s.p, n + 1))
        up = (_kron(_shift(n), s0p)
              - _IO(s.q, n + 1).H @ Su(rec, n + 1) @ resolvent(s.p, n + 1, ac).H @ _OI(s.p, n + 1))
        out.append((f"lower n={n}", Sl(sh, n), lo))
        out.append((f"upper n={n}", Su(sh, n), up))
    return out


@entry("short-closed-forms", "at least 2 terms")
def _short_closed(s, A):
    _need_terms(s, 2)
    sh, u, rz, rec, a = short(s), splus(s), reza(s), reciprocal(s), s.alpha
    s0p = pinv(s[0])
    out = []
    for j in range(s.kappa):
        conv = CMatrix.zeros(s.p, s.p)
        for l in range(j + 1):
            conv = conv + u[j + 1 - l] @ rz[l]
        power = CMatrix.zeros(s.q, s.p)
        for l in range(j + 2):
            power = power + rec[l].scale(a ** (j + 1 - l))
        rec_form = s0p @ u[j + 1] @ s0p
        for l in range(j):
            rec_form = rec_form - s0p @ u[j - l] @ sh[l]
        out += _chain_eq(f"short[{j}]", sh[j], s0p @ conv, -power, rec_form)
    for j in range(1, len(s)):
        acc = CMatrix.zeros(s.p, s.p)
        for l in range(j):
            acc = acc + u[j - 1 - l] @ sh[l]
        out.append((f"splus[{j}]", s0p @ u[j] @ s0p, s0p @ acc))
    return out


# the first and k-th Schur transforms ---------------------------------------------------


@entry("schur1-hankel", "prefix s_0..s_{2n+1} in D_tilde; determinants need p = q")
def _schur1_hankel(s, A):
    _need_terms(s, 2)
    s1, a, ac, s0 = schur1(s), s.alpha, s.alpha.conjugate(), s[0]
    out = []
    for n in _dtilde_prefixes(s, 1):
        Ha = hankel_alpha(s, n)
        Xi = xi_block(s, n, 2 * n + 1)
        D = d_matrices(s, n, "plus_alpha")
        H1 = hankel(s1, n)
        S0 = s0.kron_identity(n + 1)
        out += _chain_eq(f"n={n}", H1,
                         resolvent(s.p, n, a) @ S0 @ pinv(Sl(s, n)) @ Ha @ pinv(Su(s, n)) @ S0
                         @ resolvent(s.q, n, ac).H,
                         D.left @ (Ha - Xi) @ D.right)
        out.append((f"rank n={n}", rank(H1), rank(Ha - Xi)))
        if s.p == s.q:
            out += _chain_eq(f"det n={n}", det(H1), det(s0) * _pdet(s) * det(Ha), det(Ha - Xi))
    return out


@entry("schur1-shifted-hankel", "n >= 1 and prefix s_0..s_2n in D_tilde; determinants need p = q")
def _schur1_shifted(s, A):
    _need_terms(s, 2)
    s1, s0 = schur1(s), s[0]
    out = []
    for n in _dtilde_prefixes(s, 0):
        if n == 0:
            continue
        M = hankel_k(s1, n - 1) - hankel(s1, n - 1).scale(s.alpha)
        lam = Lambda(s, n)
        Xi = xi_block(s, n - 1, 2 * n)
        D = d_matrices(s, n - 1)
        S0 = s0.kron_identity(n)
        out += _chain_eq(f"n={n}", M, S0 @ pinv(Sl(s, n - 1)) @ lam @ pinv(Su(s, n - 1)) @ S0,
                         D.left @ (lam - Xi) @ D.right)
        out.append((f"rank n={n}", rank(M), rank(lam - Xi)))
        if s.p == s.q:
            out += _chain_eq(f"det n={n}", det(M), det(s0) * _pdet(s) * det(lam), det(lam - Xi))
    return out


def _unit_triangular(M, blocks, size, lower):
    for j in range(blocks):
        for k in range(blocks):
            b = M.block_at(j, k, size, size)
            if j == k and b != _eye(size):
                return False
            if (k > j if lower else j > k) and not b.is_zero():
                return False
    return True


@entry("d-matrix-adjoint", "any sequence; the adjoint relation needs p = q, real alpha, Hermitian terms")
def _d_adjoint(s, A):
    out = []
    hermitian = s.p == s.q and s.alpha.is_real and s.is_hermitian()
    for m in range(len(s)):
        variants = ("plain", "plus_alpha")
        for var in variants:
            D = d_matrices(s, m, var)
            out.append((f"{var} m={m} det left", det(D.left), ONE))
            out.append((f"{var} m={m} det right", det(D.right), ONE))
            out.append((f"{var} m={m} left unit lower",
                        _unit_triangular(D.left, m + 1, s.p, True), True))
            out.append((f"{var} m={m} right unit upper",
                        _unit_triangular(D.right, m + 1, s.q, False), True))
            if hermitian:
                out.append((f"{var} m={m} adjoint", D.left.H, D.right))
    return out


@entry("schur1-class-preservation", "real alpha, p = q, at least 2 terms")
def _schur1_classes(s, A):
    _need_real(s)
    _need_square(s)
    _need_terms(s, 2)
    return _class_preservation(s, schur1(s), 1)


@entry("schurk-class-preservation", "real alpha, p = q, at least 2 terms")
def _schurk_classes(s, A):
    _need_real(s)
    _need_square(s)
    _need_terms(s, 2)
    out = []
    for k in range(1, len(s)):
        out += [(f"k={k} {lbl}", l, r) for lbl, l, r in _class_preservation(s, schurk(s, k), k)]
    return out


def toeplitz_schur1(s: MatSeq) -> MatSeq:
    """First Schur transform read off the first block column of the Toeplitz formula."""
    a, s0, rec = s.alpha, s[0], reciprocal(s)
    n = s.kappa - 1
    S0 = s0.kron_identity(n + 2)
    lo = (_kron(_shift(n).H, s0)
          - _OI(s.p, n + 1).H @ resolvent(s.p, n + 1, a) @ S0 @ Sl(rec, n + 1) @ S0
          @ _IO(s.q, n + 1))
    return s.with_mats([lo.block_at(j, 0, s.p, s.q) for j in range(n + 1)])


@entry("toeplitz-schur1", "at least 2 terms; n <= kappa-1")
def _toeplitz_schur1(s, A):
    _need_terms(s, 2)
    s1, rec, a, ac, s0 = schur1(s), reciprocal(s), s.alpha, s.alpha.conjugate(), s[0]
    out = []
    for n in range(s.kappa):
        S0 = s0.kron_identity(n + 2)
        lo = (_kron(_shift(n).H, s0)
              - _OI(s.p, n + 1).H @ resolvent(s.p, n + 1, a) @ S0 @ Sl(rec, n + 1) @ S0
              @ _IO(s.q, n + 1))
        up = (_kron(_shift(n), s0)
              - _IO(s.p, n + 1).H @ S0 @ Su(rec, n + 1) @ S0 @ resolvent(s.q, n + 1, ac).H
              @ _OI(s.q, n + 1))
        out.append((f"lower n={n}", Sl(s1, n), lo))
        out.append((f"upper n={n}", Su(s1, n), up))
    return out


@entry("schurk-semigroup", "k + l <= kappa")
def _schurk_semigroup(s, A):
    out = []
    for k in range(len(s)):
        t = schurk(s, k)
        for l in range(1, len(s) - k):
            t = toeplitz_schur1(t)
            out += _seq_cmp(f"k={k} l={l}", t, schurk(s, k + l))
    return out


@entry("schurk-equivariance", "any sequence; the Hermitian part needs p = q, real alpha, Hermitian terms")
def _schurk_equivariance(s, A):
    out = []
    U = CMatrix.vstack([_eye(s.p), CMatrix.zeros(1, s.p)])
    V = CMatrix.hstack([_eye(s.q), CMatrix.zeros(s.q, 1)])
    hermitian = s.p == s.q and s.alpha.is_real and s.is_hermitian()
    for k in range(len(s)):
        sk = schurk(s, k)
        for g in SCALARS:
            out += _seq_cmp(f"k={k} scalar {g}", schurk(s.map(lambda j, m: m.scale(g)), k),
                            sk.map(lambda j, m: m.scale(g)))
            out += _seq_cmp(f"k={k} power {g}", schurk(_power_scaled(s, g), k),
                            sk.map(lambda j, m: m.scale(g ** (j + k))).with_alpha(s.alpha * g))
        out += _seq_cmp(f"k={k} isometry",
                        schurk(s.map(lambda j, m: U @ m @ V, p=s.p + 1, q=s.q + 1), k),
                        sk.map(lambda j, m: U @ m @ V, p=s.p + 1, q=s.q + 1))
        out += _seq_cmp(f"k={k} adjoint", sk.adjoint(), schurk(s.adjoint(), k))
        if hermitian:
            out.append((f"k={k} hermitian", sk.is_hermitian(), True))
    return out


@entry("schurk-direct-sum", "any sequence")
def _schurk_direct_sum(s, A):
    t = reciprocal(s)
    st = direct_sum(s, t)
    out = []
    for k in range(len(s)):
        out += _seq_cmp(f"k={k}", schurk(st, k), direct_sum(schurk(s, k), schurk(t, k)))
    return out


@entry("schur1-closed-forms", "at least 2 terms; the simplified forms need first-term dominance")
def _schur1_closed(s, A):
    _need_terms(s, 2)
    s1, sh, u, rec, a, s0 = schur1(s), short(s), splus(s), reciprocal(s), s.alpha, s[0]
    s0p = pinv(s0)
    P, Pr = s0 @ s0p, s0p @ s0
    dominant = _dominant(s, s.kappa)
    out = []
    for j in range(s.kappa):
        power = CMatrix.zeros(s.p, s.q)
        for l in range(j + 2):
            power = power + (s0 @ rec[l] @ s0).scale(a ** (j + 1 - l))
        tail = CMatrix.zeros(s.p, s.q)
        for l in range(j):
            tail = tail + u[j - l] @ s0p @ s1[l]
        out.append((f"short[{j}]", sh[j], s0p @ s1[j] @ s0p))
        out.append((f"power[{j}]", s1[j], -power))
        out.append((f"compressed[{j}]", s1[j], P @ (u[j + 1] @ Pr - tail)))
        out.append((f"range[{j}]", ran_included(s0, s1[j]), True))
        out.append((f"kernel[{j}]", ker_included(s0, s1[j]), True))
        if dominant:
            out.append((f"dominant[{j}]", s1[j], u[j + 1] - tail))
    if dominant:
        for j in range(1, len(s)):
            acc = CMatrix.zeros(s.p, s.q)
            for l in range(j):
                acc = acc + u[j - 1 - l] @ s0p @ s1[l]
            out.append((f"splus[{j}]", u[j], acc))
    return out


# LDU factorizations along the Schur chain ---------------------------------------------


@entry("ldu-even-step", "n >= 1 and prefix s_0..s_2n in D_tilde")
def _ldu_even_step(s, A):
    _need_terms(s, 2)
    s1 = schur1(s)
    out = []
    for n in _dtilde_prefixes(s, 0):
        if n == 0:
            continue
        D = d_matrices(s, n)
        M = hankel_k(s1, n - 1) - hankel(s1, n - 1).scale(s.alpha)
        out.append((f"n={n}", D.left @ hankel(s, n) @ D.right,
                    CMatrix.block_diag(s[0], M) + xi_block(s, n, 2 * n)))
    return out


def _nnd_prefixes(s, parity, lowest=1):
    v = _verdicts(s)
    if v is None:
        raise Inapplicable("p != q")
    out, n = [], lowest
    while 2 * n + parity <= s.kappa:
        if classify(s.prefix(2 * n + parity)).verdicts["K_nnd"]:
            out.append(n)
        n += 1
    return out


def _diag_eye(q, D):
    return CMatrix.block_diag(_eye(q), D)


@entry("ldu-two-steps-even", "real alpha, n >= 1, prefix s_0..s_2n in K_nnd")
def _ldu_two_even(s, A):
    out = []
    for n in _nnd_prefixes(s, 0):
        sp = s.prefix(2 * n)
        t = schur1(sp)
        u = splus(t)
        Du, Ds = d_matrices(u, n - 1), d_matrices(sp, n)
        lhs = _diag_eye(s.q, Du.left) @ Ds.left @ hankel(sp, n) @ Ds.right @ _diag_eye(s.q, Du.right)
        rhs = (CMatrix.block_diag(s[0], hankel(schurk(sp, 2), n - 1)) + xi_block(sp, n, 2 * n)
               + xi_block(t, n, 2 * n - 1))
        out.append((f"n={n}", lhs, rhs))
    return out


@entry("ldu-two-steps-odd", "real alpha, n >= 1, prefix s_0..s_{2n+1} in K_nnd")
def _ldu_two_odd(s, A):
    out = []
    for n in _nnd_prefixes(s, 1):
        sp = s.prefix(2 * n + 1)
        r, t = splus(sp), schur1(sp)
        s2 = schurk(sp, 2)
        Dt, Dr = d_matrices(t, n), d_matrices(r, n)
        lhs = Dt.left @ Dr.left @ _halpha_explicit(sp, n) @ Dr.right @ Dt.right
        rhs = (CMatrix.block_diag(t[0], _halpha_explicit(s2, n - 1)) + xi_block(sp, n, 2 * n + 1)
               + xi_block(t, n, 2 * n))
        out.append((f"n={n}", lhs, rhs))
    return out


def _ldu_product(factors):
    out = factors[0]
    for f in factors[1:]:
        out = out @ f
    return out


def _ldu_report(label, q, n, V, Vr, target, M):
    out = [(f"{label} n={n}", V @ M @ Vr, target),
           (f"{label} n={n} adjoint", V.H, Vr),
           (f"{label} n={n} unit upper", _unit_triangular(Vr, n + 1, q, False), True)]
    return out


@entry("ldu-even", "real alpha, prefix s_0..s_2n in K_nnd; the clean form needs extendability")
def _ldu_even(s, A):
    out = []
    for n in _nnd_prefixes(s, 0, lowest=0):
        sp = s.prefix(2 * n)
        q = s.q
        Z = Z_defect(sp, 2 * n, 2 * n)
        chain = [schurk(sp, k) for k in range(2 * n + 1)]
        if n == 0:
            out.append(("n=0", hankel(sp, 0), chain[0][0] + Z))
            continue
        left, right = [], []
        for l in range(n):
            t, u = chain[2 * l], splus(chain[2 * l + 1])
            Dt, Du = d_matrices(t, n - l), d_matrices(u, n - l - 1)
            Vl = _diag_eye(q, Du.left) @ Dt.left
            Vr = Dt.right @ _diag_eye(q, Du.right)
            if l:
                Vl, Vr = CMatrix.block_diag(_eye(l * q), Vl), CMatrix.block_diag(_eye(l * q), Vr)
            left.append(Vl)
            right.append(Vr)
        V = _ldu_product(left[::-1])
        Vr = _ldu_product(right)
        firsts = [chain[2 * k][0] for k in range(n)]
        target = CMatrix.block_diag(*firsts, chain[2 * n][0] + Z)
        out += _ldu_report("H", q, n, V, Vr, target, hankel(sp, n))
        if classify(sp).verdicts["K_nnd_ext"]:
            out.append((f"clean n={n}", Z, CMatrix.zeros(q)))
    return out


@entry("ldu-odd", "real alpha, prefix s_0..s_{2n+1} in K_nnd; the clean form needs extendability")
def _ldu_odd(s, A):
    out = []
    for n in _nnd_prefixes(s, 1, lowest=0):
        sp = s.prefix(2 * n + 1)
        q = s.q
        Z = Z_defect(sp, 2 * n + 1, 2 * n + 1)
        chain = [schurk(sp, k) for k in range(2 * n + 2)]
        M = _halpha_explicit(sp, n)
        if n == 0:
            out.append(("n=0", M, chain[1][0] + Z))
            continue
        left, right = [], []
        for l in range(n):
            t, u = chain[2 * l + 1], splus(chain[2 * l])
            Dt, Du = d_matrices(t, n - l), d_matrices(u, n - l)
            Wl, Wr = Dt.left @ Du.left, Du.right @ Dt.right
            if l:
                Wl, Wr = CMatrix.block_diag(_eye(l * q), Wl), CMatrix.block_diag(_eye(l * q), Wr)
            left.append(Wl)
            right.append(Wr)
        W = _ldu_product(left[::-1])
        Wr = _ldu_product(right)
        firsts = [chain[2 * k + 1][0] for k in range(n)]
        target = CMatrix.block_diag(*firsts, chain[2 * n + 1][0] + Z)
        out += _ldu_report("Halpha", q, n, W, Wr, target, M)
        if classify(sp).verdicts["K_nnd_ext"]:
            out.append((f"clean n={n}", Z, CMatrix.zeros(q)))
    return out


@entry("chain-first-term-step", "any sequence with at least 2 terms")
def _chain_step(s, A):
    _need_terms(s, 2)
    out = []
    for k in range(s.kappa):
        t = schurk(s, k)
        out.append((f"k={k}", t[1] - t[0].scale(s.alpha), schurk(s, k + 1)[0] + P_defect(s, k, 1)))
    return out


# parametrization through the chain ------------------------------------------------------


@entry("parametrization-via-schur", "K_nnd")
def _param_via_schur(s, A):
    _need_class(s, "K_nnd")
    Q = parametrize(s).Q
    k = s.kappa
    out = [(f"Q[{j}]", Q[j], schurk(s, j)[0]) for j in range(k)]
    out.append((f"Q[{k}]", Q[k], schurk(s, k)[0] + Z_defect(s, k, k)))
    return out


@entry("parametrization-via-schur-ext", "K_nnd_ext")
def _param_via_schur_ext(s, A):
    _need_class(s, "K_nnd_ext")
    Q = parametrize(s).Q
    return [(f"Q[{j}]", Q[j], schurk(s, j)[0]) for j in range(len(s))]


@entry("parametrization-shift", "K_nnd")
def _param_shift(s, A):
    _need_class(s, "K_nnd")
    Q = parametrize(s).Q
    m = s.kappa
    out = []
    for k in range(m + 1):
        T = parametrize(schurk(s, k)).Q
        for j in range(m - k):
            out.append((f"k={k} T[{j}]", T[j], Q[k + j]))
        top = Q[m]
        for r in range(k):
            top = top - P_defect(s, r, m - r)
        out.append((f"k={k} T[{m - k}]", T[m - k], top))
    return out


@entry("parametrization-shift-ext", "K_nnd_ext")
def _param_shift_ext(s, A):
    _need_class(s, "K_nnd_ext")
    Q = parametrize(s).Q
    out = []
    for k in range(len(s)):
        T = parametrize(schurk(s, k)).Q
        out += [(f"k={k} T[{j}]", T[j], Q[k + j]) for j in range(len(T))]
    return out


def _rank_det_comparisons(s):
    out = []
    for e in rank_det_report(s).entries:
        tag = f"{e.matrix} boundary={e.boundary}"
        out.append((f"{tag} rank", e.rank_lhs, e.rank_rhs))
        if e.det_lhs is not None:
            out.append((f"{tag} det", e.det_lhs, e.det_rhs))
    return out


@entry("rank-det-even", "K_nnd; applied to the longest prefix with an odd number of terms")
def _rank_det_even(s, A):
    _need_class(s, "K_nnd")
    return _rank_det_comparisons(s.prefix(s.kappa - s.kappa % 2))


@entry("rank-det-odd", "K_nnd with at least 2 terms; applied to the longest prefix with an even number of terms")
def _rank_det_odd(s, A):
    _need_class(s, "K_nnd")
    _need_terms(s, 2)
    return _rank_det_comparisons(s.prefix(s.kappa - (s.kappa + 1) % 2))


@entry("rank-det-ext", "K_nnd_ext")
def _rank_det_ext(s, A):
    _need_class(s, "K_nnd_ext")
    return _rank_det_comparisons(s)


def _all_defects_zero(s, kmax, jmax):
    return all(P_defect(s, k, j).is_zero() for k in range(kmax + 1) for j in range(jmax - k + 1))


def _all_z_zero(s, lmax, mmax):
    return all(Z_defect(s, l, m).is_zero() for m in range(mmax + 1) for l in range(m, lmax + 1))


@entry("ext-defect-criterion", "K_nnd")
def _ext_criterion(s, A):
    v = _need_class(s, "K_nnd")
    m = s.kappa
    ext = v["K_nnd_ext"]
    kernels = all(ker_included(schurk(s, k)[0], schurk(s, k)[m - k]) for k in range(m))
    defects = all(P_defect(s, k, m - k).is_zero() for k in range(m))
    return [("kernels", ext, kernels), ("defects", ext, defects),
            ("Z", ext, Z_defect(s, m, m).is_zero())]


@entry("pd-chain-criterion", "K_nnd")
def _pd_chain(s, A):
    v = _need_class(s, "K_nnd")
    m = s.kappa
    firsts = [schurk(s, k)[0] for k in range(m + 1)]
    out = [("nonsingular", v["K_pd"], all(det(f) != 0 for f in firsts))]
    if v["K_pd"]:
        out.append(("pd", all(is_pd(f) for f in firsts), True))
        out.append(("P", _all_defects_zero(s, m, m), True))
        out.append(("Z", _all_z_zero(s, m, m), True))
    return out


@entry("pd-top-criterion", "K_nnd")
def _pd_top(s, A):
    v = _need_class(s, "K_nnd")
    return [("top", v["K_pd"], det(schurk(s, s.kappa)[0]) != 0)]


@entry("cd-criterion", "K_nnd")
def _cd_criterion(s, A):
    v = _need_class(s, "K_nnd")
    m = s.kappa
    top = schurk(s, m)[0]
    out = [("top", v["K_cd"], (top + Z_defect(s, m, m)).is_zero())]
    if v["K_cd"]:
        out += [("first", top.is_zero(), True), ("P", _all_defects_zero(s, m, m), True),
                ("Z", _all_z_zero(s, m, m), True)]
    return out


@entry("cd-order-criterion", "K_nnd; orders m <= kappa-1")
def _cd_order(s, A):
    v = _need_class(s, "K_nnd")
    kap = s.kappa
    out = []
    for m in range(kap):
        member = v[f"K_cd_order_{m}"]
        out.append((f"m={m}", member, schurk(s, m)[0].is_zero()))
        if member:
            later = all(t.is_zero() for k in range(m + 1, kap + 1) for t in schurk(s, k))
            out.append((f"m={m} later", later, True))
            out.append((f"m={m} P", _all_defects_zero(s, kap - 1, kap - 1), True))
            out.append((f"m={m} Z", _all_z_zero(s, kap - 1, kap - 1), True))
    return out


@entry("defects-vanish", "K_nnd; everything vanishes on K_nnd_ext, the top index may not otherwise")
def _defects_vanish(s, A):
    v = _need_class(s, "K_nnd")
    kap = s.kappa
    out = [("below top P", _all_defects_zero(s, kap - 1, kap - 1), True),
           ("below top Z", _all_z_zero(s, kap - 1, kap - 1), True)]
    if v["K_nnd_ext"]:
        out += [("P", _all_defects_zero(s, kap, kap), True), ("Z", _all_z_zero(s, kap, kap), True)]
    return out


@entry("class-inclusions", "real alpha, p = q")
def _class_inclusions(s, A):
    v = _verdicts(s)
    if v is None:
        raise Inapplicable("p != q")
    out = [_implication("pd => ext", v["K_pd"], v["K_nnd_ext"]),
           _implication("cd => ext", v["K_cd"], v["K_nnd_ext"]),
           _implication("ext => nnd", v["K_nnd_ext"], v["K_nnd"]),
           _implication("nnd => H_nnd", v["K_nnd"], v["H_nnd"]),
           _implication("pd => H_pd", v["K_pd"], v["H_pd"]),
           _implication("nnd => D_tilde", v["K_nnd"], v["D_tilde"]),
           _implication("ext => D", v["K_nnd_ext"], v["D"])]
    if s.kappa >= 1:
        out.append(_implication("pd => not cd", v["K_pd"], not v["K_cd"]))
    return out


@entry("parametrization-class-criteria", "real alpha, p = q")
def _param_criteria(s, A):
    v = _verdicts(s)
    if v is None:
        raise Inapplicable("p != q")
    w = classify_via_parametrization(s).verdicts
    return [(name, v[name], w[name]) for name in w]


# the inverse transform ------------------------------------------------------------------


def _first_term(t, A):
    return t[0] if A is None else A


def inverse_closed_form(t: MatSeq, A: CMatrix) -> MatSeq:
    """Nested-sum form of the inverse step, evaluated term by term."""
    a = t.alpha
    Ap = pinv(A)
    P = A @ Ap
    out, plus = [A], [A]
    for j in range(1, len(t) + 1):
        acc = A.scale(a ** j)
        for l in range(1, j + 1):
            inner = CMatrix.zeros(t.p, t.q)
            for k in range(l):
                inner = inner + t[l - k - 1] @ Ap @ plus[k]
            acc = acc + (P @ inner).scale(a ** (j - l))
        out.append(acc)
        plus.append(acc - out[j - 1].scale(a))
    return t.with_mats(out)


@entry("inverse-recursion", "any sequence and first term", wants_first_term=True)
def _inverse_recursion(t, A):
    A = _first_term(t, A)
    s = inverse1(t, A)
    out = _seq_cmp("closed form", s, inverse_closed_form(t, A))
    for m in range(len(t)):
        out += _seq_cmp(f"prefix {m}", inverse1(t.prefix(m), A), s.prefix(m + 1))
    out.append(("dominant", _dominant(s, s.kappa), True))
    return out


@entry("inverse-reza", "any sequence and first term", wants_first_term=True)
def _inverse_reza(t, A):
    A = _first_term(t, A)
    s = inverse1(t, A)
    z = reza(s)
    Ap = pinv(A)
    out = [("reza[0]", z[0], Ap)]
    out += [(f"reza[{j}]", z[j], -(Ap @ t[j - 1] @ Ap)) for j in range(1, len(s))]
    out += _seq_cmp("reciprocal(reza)", reciprocal(z), splus(s))
    return out


@entry("inverse-then-schur1", "any sequence and first term", wants_first_term=True)
def _inverse_then_schur1(t, A):
    A = _first_term(t, A)
    s1 = schur1(inverse1(t, A))
    Ap = pinv(A)
    out = [(f"[{j}]", s1[j], A @ Ap @ t[j] @ Ap @ A) for j in range(len(t))]
    if all(ker_included(A, m) and ran_included(A, m) for m in t):
        out += _seq_cmp("identity", s1, t)
    return out


@entry("schur1-then-inverse", "at least 2 terms; the identity needs first-term dominance")
def _schur1_then_inverse(s, A):
    _need_terms(s, 2)
    back = inverse1(schur1(s), s[0])
    out = [(f"[{j}]", back[j], _compress(s, j)) for j in range(len(s))]
    if _dominant(s, s.kappa):
        out += _seq_cmp("identity", back, s)
    return out


@entry("inverse-hermitian", "p = q, real alpha, Hermitian terms and first term",
       wants_first_term=True)
def _inverse_hermitian(t, A):
    A = _first_term(t, A)
    if not (t.p == t.q and t.alpha.is_real and t.is_hermitian() and A.is_hermitian()):
        raise Inapplicable("needs p = q, real alpha, Hermitian t and A")
    return [("hermitian", inverse1(t, A).is_hermitian(), True)]


@entry("schur1-inverse-roundtrip", "t first-term dominant, Ker A ⊆ Ker t₀, Ran t₀ ⊆ Ran A",
       wants_first_term=True)
def _schur1_inverse_roundtrip(t, A):
    A = _first_term(t, A)
    if not _dominant(t, t.kappa):
        raise Inapplicable("t not first-term dominant")
    if not ker_included(A, t[0]):
        raise Inapplicable("Ker A ⊄ Ker t₀")
    if not ran_included(A, t[0]):
        raise Inapplicable("Ran t₀ ⊄ Ran A")
    return _seq_cmp("roundtrip", schur1(inverse1(t, A)), t)


def _inverse_hankel(t, A, reduced):
    s = inverse1(t, A)
    Ap = pinv(A)
    P, Pr = A @ Ap, Ap @ A
    square = t.p == t.q
    out = [("H_0", hankel(s, 0), A)]
    n = 1
    while 2 * n - 1 <= t.kappa:
        D = d_matrices(s, n)
        Dl, Dr = D.left, D.right
        out.append((f"rank Dl n={n}", rank(Dl), Dl.rows))
        out.append((f"rank Dr n={n}", rank(Dr), Dr.rows))
        mid = _halpha_explicit(t, n - 1)
        if not reduced:
            mid = P.kron_identity(n) @ mid @ Pr.kron_identity(n)
        H = hankel(s, n)
        Dli, Dri = pinv(Dl), pinv(Dr)
        out.append((f"H n={n}", H, Dli @ CMatrix.block_diag(A, mid) @ Dri))
        out.append((f"rank H n={n}", rank(H), rank(A) + rank(mid)))
        if square:
            out.append((f"det H n={n}", det(H), det(A) * det(_halpha_explicit(t, n - 1))))
        n += 1
    n = 0
    while 2 * n <= t.kappa:
        D = d_matrices(s, n, "plus_alpha")
        mid = hankel(t, n)
        if not reduced:
            mid = P.kron_identity(n + 1) @ mid @ Pr.kron_identity(n + 1)
        Ha = hankel_alpha(s, n)
        out.append((f"Halpha n={n}", Ha, pinv(D.left) @ mid @ pinv(D.right)))
        out.append((f"rank Halpha n={n}", rank(Ha), rank(mid)))
        if square:
            factor = ONE if reduced else det(A) * det(A).pinv()
            out.append((f"det Halpha n={n}", det(Ha), factor * det(hankel(t, n))))
        n += 1
    return out


@entry("inverse-hankel", "any sequence and first term", wants_first_term=True)
def _inverse_hankel_full(t, A):
    return _inverse_hankel(t, _first_term(t, A), False)


@entry("inverse-hankel-reduced", "Ker A ⊆ Ker t_j and Ran t_j ⊆ Ran A for every j",
       wants_first_term=True)
def _inverse_hankel_reduced(t, A):
    A = _first_term(t, A)
    if not all(ker_included(A, m) for m in t):
        raise Inapplicable("Ker A ⊄ Ker t_j for some j")
    if not all(ran_included(A, m) for m in t):
        raise Inapplicable("Ran t_j ⊄ Ran A for some j")
    return _inverse_hankel(t, A, True)


def _inverse_guard(t, A, cls, pd=False):
    v = _verdicts(t)
    if v is None:
        raise Inapplicable("p != q")
    if not v[cls]:
        raise Inapplicable(f"t not in {cls}")
    if pd and not is_pd(A):
        raise Inapplicable("A is not pd")
    if not is_psd(A):
        raise Inapplicable("A is not psd")


def _need_kernel(t, A, cond=True):
    if cond and not ker_included(A, t[0]):
        raise Inapplicable("Ker A ⊄ Ker t₀")


def _inverse_verdicts(t, A):
    return classify(inverse1(t, A)).verdicts


@entry("inverse-preserves-nnd", "t in K_nnd, A psd", wants_first_term=True)
def _inv_nnd(t, A):
    A = _first_term(t, A)
    _inverse_guard(t, A, "K_nnd")
    return [("K_nnd", _inverse_verdicts(t, A)["K_nnd"], True)]


@entry("inverse-preserves-ext", "t in K_nnd_ext, A psd", wants_first_term=True)
def _inv_ext(t, A):
    A = _first_term(t, A)
    _inverse_guard(t, A, "K_nnd_ext")
    return [("K_nnd_ext", _inverse_verdicts(t, A)["K_nnd_ext"], True)]


@entry("inverse-preserves-pd", "t in K_pd, A pd", wants_first_term=True)
def _inv_pd(t, A):
    A = _first_term(t, A)
    _inverse_guard(t, A, "K_pd", pd=True)
    return [("K_pd", _inverse_verdicts(t, A)["K_pd"], True)]


@entry("inverse-preserves-cd", "t in K_cd, A psd, Ker A ⊆ Ker t₀ when kappa >= 2",
       wants_first_term=True)
def _inv_cd(t, A):
    A = _first_term(t, A)
    _inverse_guard(t, A, "K_cd")
    _need_kernel(t, A, t.kappa >= 2)
    return [("K_cd", _inverse_verdicts(t, A)["K_cd"], True)]


@entry("inverse-preserves-cd-order", "t in K_cd_order_m, A psd, Ker A ⊆ Ker t₀ when m >= 2",
       wants_first_term=True)
def _inv_cd_order(t, A):
    A = _first_term(t, A)
    _inverse_guard(t, A, "K_nnd")
    v = classify(t).verdicts
    orders = [m for m in range(len(t)) if v[f"K_cd_order_{m}"]]
    if not orders:
        raise Inapplicable("t not in K_cd_order_m for any m")
    allowed = [m for m in orders if m < 2 or ker_included(A, t[0])]
    if not allowed:
        raise Inapplicable("Ker A ⊄ Ker t₀")
    w = _inverse_verdicts(t, A)
    return [(f"m={m}", w[f"K_cd_order_{m + 1}"], True) for m in allowed]


@entry("inverse-preserves-cd-all", "t in K_cd, A psd, Ker A ⊆ Ker t₀", wants_first_term=True)
def _inv_cd_all(t, A):
    A = _first_term(t, A)
    _inverse_guard(t, A, "K_cd")
    _need_kernel(t, A)
    return [("K_cd", _inverse_verdicts(t, A)["K_cd"], True)]


def _inverse_param(t, A):
    Q = parametrize(inverse1(t, A)).Q
    T = parametrize(t).Q
    return [("Q[0]", Q[0], A)] + [(f"Q[{j + 1}]", Q[j + 1], T[j]) for j in range(len(T))]


@entry("inverse-parametrization", "t in K_nnd, A psd, Ker A ⊆ Ker t₀ ∩ Ker t_kappa",
       wants_first_term=True)
def _inv_param(t, A):
    A = _first_term(t, A)
    _inverse_guard(t, A, "K_nnd")
    _need_kernel(t, A)
    if not ker_included(A, t[t.kappa]):
        raise Inapplicable("Ker A ⊄ Ker t_kappa")
    return _inverse_param(t, A)


@entry("inverse-parametrization-ext", "t in K_nnd_ext, A psd, Ker A ⊆ Ker t₀",
       wants_first_term=True)
def _inv_param_ext(t, A):
    A = _first_term(t, A)
    _inverse_guard(t, A, "K_nnd_ext")
    _need_kernel(t, A)
    return _inverse_param(t, A)


# evaluation -----------------------------------------------------------------------------


def _discrepancy(label, lhs, rhs):
    doc = {"label": label}
    if isinstance(lhs, CMatrix) and isinstance(rhs, CMatrix) and lhs.shape == rhs.shape:
        doc["difference"] = wire.matrix_to_wire(lhs - rhs)
    doc["lhs"] = wire.to_plain(lhs)
    doc["rhs"] = wire.to_plain(rhs)
    return doc


def check_identity(name: str, s: MatSeq, A: CMatrix | None = None) -> IdentityCheck:
    """Evaluate catalog entry ``name`` on ``s`` (and first term ``A`` for inverse entries)."""
    try:
        e = CATALOG[name]
    except KeyError:
        raise UnknownNameError(f"unknown catalog key {name!r}") from None
    try:
        comparisons = e.fn(s, A)
    except Inapplicable as exc:
        return IdentityCheck(name, e.applicability, "inapplicable", reason=str(exc))
    if not comparisons:
        return IdentityCheck(name, e.applicability, "inapplicable",
                             reason="no index satisfies the length requirements")
    for label, lhs, rhs in comparisons:
        if lhs != rhs:
            return IdentityCheck(name, e.applicability, "fail",
                                 discrepancy=_discrepancy(label, lhs, rhs),
                                 comparisons=len(comparisons))
    return IdentityCheck(name, e.applicability, "pass", comparisons=len(comparisons))


# suite runner ---------------------------------------------------------------------------

CORPUS_KINDS = GEN_CLASSES + ("adversarial", "general")


@dataclass(frozen=True)
class SuiteConfig:
    seed: int = 0
    trials: int = 200
    catalog: tuple = field(default_factory=catalog_keys)
    q: tuple = (1, 3)
    length: tuple = (1, 8)
    alpha: tuple = ("-1", "0", "1/2")
    kinds: tuple = CORPUS_KINDS
    workers: int = 1

    @classmethod
    def from_wire(cls, doc):
        if not isinstance(doc, dict):
            raise ValidationError("a suite config is a JSON object")
        unknown = set(doc) - {"seed", "trials", "catalog", "q", "length", "alpha", "kinds",
                              "workers"}
        if unknown:
            raise ValidationError(f"unknown suite config keys {sorted(unknown)}")
        base = cls()

        def integer(key, low):
            v = doc.get(key, getattr(base, key))
            if isinstance(v, bool) or not isinstance(v, int) or v < low:
                raise ValidationError(f"{key!r} must be an integer >= {low}")
            return v

        def span(key, low):
            v = doc.get(key, list(getattr(base, key)))
            if (not isinstance(v, list) or len(v) != 2
                    or any(isinstance(x, bool) or not isinstance(x, int) for x in v)
                    or not low <= v[0] <= v[1]):
                raise ValidationError(f"{key!r} must be [min, max] with {low} <= min <= max")
            return tuple(v)

        catalog = doc.get("catalog", list(base.catalog))
        if not isinstance(catalog, list) or not all(isinstance(k, str) for k in catalog):
            raise ValidationError("'catalog' must be a list of keys")
        missing = [k for k in catalog if k not in CATALOG]
        if missing:
            raise ValidationError(f"unknown catalog keys {missing}")
        kinds = doc.get("kinds", list(base.kinds))
        if not isinstance(kinds, list) or not kinds or any(k not in CORPUS_KINDS for k in kinds):
            raise ValidationError(f"'kinds' must be a non-empty subset of {list(CORPUS_KINDS)}")
        alphas = doc.get("alpha", list(base.alpha))
        if not isinstance(alphas, list) or not alphas:
            raise ValidationError("'alpha' must be a non-empty list")
        for a in alphas:
            if not wire.scalar_from_wire(a).is_real:
                raise ValidationError("suite alphas must be real")
        return cls(seed=integer("seed", 0), trials=integer("trials", 0), catalog=tuple(catalog),
                   q=span("q", 1), length=span("length", 1),
                   alpha=tuple(wire.scalar_to_wire(wire.scalar_from_wire(a)) for a in alphas),
                   kinds=tuple(kinds), workers=integer("workers", 1))

    def to_wire(self):
        return {"seed": self.seed, "trials": self.trials, "catalog": list(self.catalog),
                "q": list(self.q), "length": list(self.length), "alpha": list(self.alpha),
                "kinds": list(self.kinds)}


def _general(q, length, alpha, seed):
    """Non-Hermitian rectangular terms; half of them are first-term dominant by construction."""
    sm = Sampler(f"general|{q}|{length}|{alpha}|{seed}")
    p = max(1, q + sm.rng.choice((-1, 0, 0, 1)))
    complex_ = sm.rng.random() < 0.5
    s0 = sm.matrix(p, q, complex_)
    if sm.rng.random() < 0.5 and min(p, q) >= 2:
        s0 = sm.matrix(p, 1, complex_) @ sm.matrix(1, q, complex_)
    dominant = sm.rng.random() < 0.5
    mats = [s0]
    for _ in range(length - 1):
        X = sm.matrix(q, p, complex_)
        mats.append(s0 @ X @ s0 if dominant else sm.matrix(p, q, complex_))
    a = GaussRational(alpha)
    if complex_ and sm.rng.random() < 0.5:
        a = a + GaussRational(0, sm.small())
    return MatSeq(p, q, a, tuple(mats))


def draw_trial(config: SuiteConfig, index: int):
    """The ``index``-th corpus member: ``(kind, s, A)``."""
    rng = random.Random(f"suite|{config.seed}|{index}")
    kind = rng.choice(config.kinds)
    q = rng.randint(*config.q)
    length = rng.randint(*config.length)
    alpha = wire.scalar_from_wire(rng.choice(config.alpha)).re
    seed = rng.randrange(2 ** 31)
    if kind == "K_nnd" and length == 1:
        length = 2
    if kind == "adversarial":
        s = adversarial(q, length, alpha, seed)
    elif kind == "general":
        s = _general(q, length, alpha, seed)
    else:
        s = random_in_class(kind, q, length, alpha, seed)
    if s.p == s.q:
        A, _ = random_first_term(s, seed)
    else:
        A = s[0]
    return kind, s, A


def _run_trial(config: SuiteConfig, index: int):
    kind, s, A = draw_trial(config, index)
    results = []
    for key in config.catalog:
        try:
            check = check_identity(key, s, A)
        except Exception as exc:  # a crash counts as a failure and is kept for replay
            check = IdentityCheck(key, CATALOG[key].applicability, "fail",
                                  reason=f"{type(exc).__name__}: {exc}")
        results.append((key, check))
    return index, kind, s, A, results


def _run_chunk(args):
    config, indices = args
    return [_run_trial(config, i) for i in indices]


def run_suite(config: SuiteConfig | dict) -> dict:
    """Tally every catalog entry in ``config.catalog`` over ``config.trials`` seeded draws."""
    if isinstance(config, dict):
        config = SuiteConfig.from_wire(config)
    counts = {key: {"pass": 0, "fail": 0, "inapplicable": 0} for key in config.catalog}
    failures = []
    indices = list(range(config.trials)) if config.catalog else []
    if config.workers > 1 and indices:
        from concurrent.futures import ProcessPoolExecutor

        chunks = [(config, indices[i::config.workers]) for i in range(config.workers)]
        with ProcessPoolExecutor(config.workers) as pool:
            rows = [r for chunk in pool.map(_run_chunk, chunks) for r in chunk]
    else:
        rows = _run_chunk((config, indices))
    for index, kind, s, A, results in sorted(rows, key=lambda r: r[0]):
        for key, check in results:
            counts[key][check.status] += 1
            if check.status == "fail":
                failures.append({"trial": index, "kind": kind, "identity": key,
                                 "sequence": wire.seq_to_wire(s), "A": wire.matrix_to_wire(A),
                                 "check": check.to_wire()})
    return {"config": config.to_wire(), "counts": counts, "failures": failures,
            "total_failures": len(failures)}


def replay(failure: dict) -> IdentityCheck:
    """Re-run a serialized failure record."""
    s = wire.seq_from_wire(failure["sequence"])
    A = wire.matrix_from_wire(failure["A"]) if failure.get("A") is not None else None
    return check_identity(failure["identity"], s, A)
