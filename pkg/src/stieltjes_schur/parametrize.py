"""The right alpha-Stieltjes parametrization and its Schur-algorithm description.

``Q_{2k} = L_k`` and ``Q_{2k+1} = L_{alpha,k}``.  The map ``s -> Q`` is a
bijection; :func:`reconstruct` inverts it.  For non-negative definite
sequences the same matrices arise as first terms of the iterated Schur
transforms, corrected at the top index by the defect matrix ``Z``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .builders import L, L_alpha, MatSeq, Theta, Theta_alpha, hankel, hankel_alpha
from .classify import ClassReport, classify, require_class_input
from .errors import IndexRangeError, NotInClassError
from .matrix import CMatrix, GaussRational, det, is_pd, is_psd, ker_included, pinv, rank
from .transforms import schur_chain, schurk


def provenance_tag(j: int) -> str:
    k, odd = divmod(j, 2)
    return f"L_alpha_{k}" if odd else f"L_{k}"


@dataclass(frozen=True)
class Parametrization:
    p: int
    q: int
    alpha: GaussRational
    Q: tuple
    provenance: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "alpha", GaussRational.coerce(self.alpha))
        object.__setattr__(self, "Q", tuple(self.Q))
        tags = tuple(provenance_tag(j) for j in range(len(self.Q)))
        if self.provenance and tuple(self.provenance) != tags:
            raise ValueError("provenance tags must alternate L_k / L_alpha_k")
        object.__setattr__(self, "provenance", tags)
        for j, m in enumerate(self.Q):
            if m.shape != (self.p, self.q):
                raise ValueError(f"Q_{j} has shape {m.shape}, expected {(self.p, self.q)}")

    @property
    def kappa(self):
        return len(self.Q) - 1

    def __len__(self):
        return len(self.Q)

    def __getitem__(self, j):
        return self.Q[j]


@lru_cache(maxsize=4096)
def parametrize(s: MatSeq) -> Parametrization:
    Q = [L_alpha(s, j // 2) if j % 2 else L(s, j // 2) for j in range(len(s))]
    return Parametrization(s.p, s.q, s.alpha, Q)


def reconstruct(P: Parametrization) -> MatSeq:
    """Rebuild ``s`` term by term: ``s_{2k} = Theta_k + Q_{2k}``,
    ``s_{2k+1} = alpha s_{2k} + Theta_{alpha,k} + Q_{2k+1}``."""
    s = MatSeq(P.p, P.q, P.alpha, ())
    for j, Qj in enumerate(P.Q):
        k, odd = divmod(j, 2)
        if odd:
            term = s[j - 1].scale(P.alpha) + Theta_alpha(s, k) + Qj
        else:
            term = Theta(s, k) + Qj
        s = s.with_mats(s.mats + (term,))
    return s


# Defect matrices -----------------------------------------------------------------


def _chain_first(s: MatSeq, k: int) -> CMatrix:
    return schurk(s, k)[0]


def P_defect(s: MatSeq, k: int, j: int) -> CMatrix:
    """``P^{[k]}_j = t_j - t_0 t_0^+ t_j t_0^+ t_0`` where ``t = schurk(s, k)``."""
    if not (0 <= k <= s.kappa and 0 <= j <= s.kappa - k):
        raise IndexRangeError(f"P^[{k}]_{j} needs k <= kappa and j <= kappa-k (kappa={s.kappa})")
    t = schurk(s, k)
    t0p = pinv(t[0])
    return t[j] - t[0] @ t0p @ t[j] @ t0p @ t[0]


def Z_defect(s: MatSeq, l: int, m: int) -> CMatrix:
    """``Z_{l,m} = sum_{k<m} P^{[k]}_{l-k}``; zero for ``m = 0``."""
    if not (0 <= m <= l <= s.kappa):
        raise IndexRangeError(f"Z_{{{l},{m}}} needs m <= l <= kappa (kappa={s.kappa})")
    acc = CMatrix.zeros(s.p, s.q)
    for k in range(m):
        acc = acc + P_defect(s, k, l - k)
    return acc


@dataclass(frozen=True)
class Defects:
    P: Optional[CMatrix]
    Z: Optional[CMatrix]


def defect_matrices(s: MatSeq, k: int, j: int) -> Defects:
    """``P^{[k]}_j`` and ``Z_{j,k}``; a member whose indices are out of range is ``None``."""
    P = P_defect(s, k, j) if 0 <= k <= s.kappa and 0 <= j <= s.kappa - k else None
    Z = Z_defect(s, j, k) if 0 <= k <= j <= s.kappa else None
    if P is None and Z is None:
        raise IndexRangeError(f"no defect matrix defined at k={k}, j={j} (kappa={s.kappa})")
    return Defects(P, Z)


# Schur route ---------------------------------------------------------------------


def _require_nnd(s: MatSeq) -> ClassReport:
    require_class_input(s)
    report = classify(s)
    if not report.verdicts["K_nnd"]:
        raise NotInClassError("sequence is not in K_nnd", report.witnesses["K_nnd"])
    return report


def parametrize_via_schur(s: MatSeq) -> Parametrization:
    """``Q_j`` read off the Schur chain, plus ``Z_{kappa,kappa}`` at the top."""
    _require_nnd(s)
    chain = schur_chain(s)
    Q = [t[0] for t in chain]
    Q[-1] = Q[-1] + Z_defect(s, s.kappa, s.kappa)
    return Parametrization(s.p, s.q, s.alpha, Q)


# Rank and determinant bookkeeping -------------------------------------------------


@dataclass(frozen=True)
class RankDetEntry:
    """One factorization identity: ``matrix`` versus the factors read off the Schur chain.

    ``clean`` lists the chain indices entering unmodified; ``boundary`` is the
    index whose first term is corrected by ``Z`` (``None`` if there is none).
    """

    matrix: str
    clean: tuple
    boundary: Optional[int]
    rank_lhs: int
    rank_rhs: int
    det_lhs: Optional[GaussRational]
    det_rhs: Optional[GaussRational]

    @property
    def ok(self):
        return self.rank_lhs == self.rank_rhs and self.det_lhs == self.det_rhs


@dataclass(frozen=True)
class RankDetReport:
    entries: tuple
    extendable: bool

    @property
    def mismatches(self):
        return tuple(e for e in self.entries if not e.ok)

    @property
    def ok(self):
        return not self.mismatches


def _entry(name, M, firsts, clean, boundary_matrix, boundary, square):
    factors = [firsts[k] for k in clean] + ([boundary_matrix] if boundary_matrix is not None else [])
    r_rhs = sum(rank(F) for F in factors)
    d_lhs = d_rhs = None
    if square:
        d_lhs = det(M)
        d_rhs = GaussRational(1)
        for F in factors:
            d_rhs = d_rhs * det(F)
    return RankDetEntry(name, tuple(clean), boundary, rank(M), r_rhs, d_lhs, d_rhs)


def rank_det_report(s: MatSeq) -> RankDetReport:
    """``rank``/``det`` of every ``H_n`` and ``H_{alpha,n}`` against the Schur chain.

    ``H_n`` with ``2n = kappa`` is matched with ``s0^(0), s0^(2), ..., s0^(2n) + Z``;
    indices below the top enter without ``Z``.  For extendable sequences
    every ``Z`` term is also checked to vanish through a second, clean entry.
    """
    report = _require_nnd(s)
    ext = report.verdicts["K_nnd_ext"]
    firsts = [t[0] for t in schur_chain(s)]
    square = s.p == s.q
    kap = s.kappa
    top = firsts[kap] + Z_defect(s, kap, kap)
    entries = []
    n = 0
    while 2 * n <= kap:
        M = hankel(s, n)
        even = list(range(0, 2 * n + 1, 2))
        if 2 * n == kap:
            entries.append(_entry(f"H_{n}", M, firsts, even[:-1], top, kap, square))
        else:
            entries.append(_entry(f"H_{n}", M, firsts, even, None, None, square))
        if ext and 2 * n == kap:
            entries.append(_entry(f"H_{n}", M, firsts, even, None, None, square))
        n += 1
    n = 0
    while 2 * n + 1 <= kap:
        M = hankel_alpha(s, n)
        odd = list(range(1, 2 * n + 2, 2))
        if 2 * n + 1 == kap:
            entries.append(_entry(f"Halpha_{n}", M, firsts, odd[:-1], top, kap, square))
        else:
            entries.append(_entry(f"Halpha_{n}", M, firsts, odd, None, None, square))
        if ext and 2 * n + 1 == kap:
            entries.append(_entry(f"Halpha_{n}", M, firsts, odd, None, None, square))
        n += 1
    return RankDetReport(tuple(entries), ext)


# Classification through the parametrization ---------------------------------------


def classify_via_parametrization(s: MatSeq) -> ClassReport:
    """``K_nnd``, ``K_nnd_ext``, ``K_pd``, ``K_cd`` and ``K_cd_order_m`` from the ``Q`` chain.

    ``K_nnd`` iff every ``Q_j`` is psd and ``Ker Q_j ⊆ Ker Q_{j+1}`` for
    ``j <= kappa-2``; extendability needs the inclusion at ``j = kappa-1``
    too; ``K_pd`` iff every ``Q_j`` is pd.  Complete degeneracy is read off
    the Schur chain: ``s0^(kappa) + Z_{kappa,kappa} = 0`` at the top and
    ``s0^(m) = 0`` below it.
    """
    require_class_input(s)
    Q = parametrize(s).Q
    kap = len(Q) - 1
    verdicts, witnesses = {}, {}

    def record(name, witness):
        verdicts[name] = witness is None
        if witness is not None:
            witnesses[name] = witness

    w = next(({"condition": "psd", "matrix": f"Q_{j}"} for j, q in enumerate(Q) if not is_psd(q)),
             None)
    if w is None:
        w = next(({"condition": "ker_included", "left": f"Q_{j}", "right": f"Q_{j + 1}"}
                  for j in range(kap - 1) if not ker_included(Q[j], Q[j + 1])), None)
    record("K_nnd", w)
    if w is None and kap >= 1 and not ker_included(Q[kap - 1], Q[kap]):
        w = {"condition": "ker_included", "left": f"Q_{kap - 1}", "right": f"Q_{kap}"}
    record("K_nnd_ext", w)
    record("K_pd", next(({"condition": "pd", "matrix": f"Q_{j}"}
                         for j, q in enumerate(Q) if not is_pd(q)), None))
    nnd = verdicts["K_nnd"]
    firsts = [t[0] for t in schur_chain(s)] if nnd else None
    for m in range(kap + 1):
        if not nnd:
            w = {"condition": "K_nnd", "cause": witnesses["K_nnd"]}
        else:
            lead = firsts[m] + Z_defect(s, kap, kap) if m == kap else firsts[m]
            label = f"s0^({m})" + (" + Z" if m == kap else "")
            w = None if lead.is_zero() else {"condition": "zero", "matrix": label}
        record(f"K_cd_order_{m}", w)
    verdicts["K_cd"] = verdicts[f"K_cd_order_{kap}"]
    if not verdicts["K_cd"]:
        witnesses["K_cd"] = witnesses[f"K_cd_order_{kap}"]
    return ClassReport(verdicts, witnesses)
