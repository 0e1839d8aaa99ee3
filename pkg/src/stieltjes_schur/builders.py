"""Matrix sequences and the structured matrices built from them.

Block Hankel and block Toeplitz matrices, shift and resolvent matrices,
selector blocks, Schur complements, and the unit triangular normalization
matrices used by the Schur-type algorithm.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

from .errors import IndexRangeError, ShapeError, UnknownNameError
from .matrix import CMatrix, GaussRational, mat, pinv


@dataclass(frozen=True)
class MatSeq:
    """A finite sequence ``s_0, ..., s_kappa`` of ``p x q`` matrices with parameter ``alpha``.

    The empty sequence (``kappa == -1``) is allowed and keeps its shape.
    """

    p: int
    q: int
    alpha: GaussRational
    mats: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "alpha", GaussRational.coerce(self.alpha))
        object.__setattr__(self, "mats", tuple(self.mats))
        if self.p < 1 or self.q < 1:
            raise ShapeError("matrix sizes must be positive")
        for j, m in enumerate(self.mats):
            if not isinstance(m, CMatrix):
                raise TypeError(f"term {j} is not a CMatrix")
            if m.shape != (self.p, self.q):
                raise ShapeError(f"term {j} has shape {m.shape}, expected {(self.p, self.q)}")

    @classmethod
    def of(cls, mats, alpha=0, p=None, q=None):
        """Build from matrices, nested lists, or scalars (``1 x 1`` terms)."""
        mats = tuple(mat(m) for m in mats)
        if mats:
            p = mats[0].rows if p is None else p
            q = mats[0].cols if q is None else q
        if p is None or q is None:
            raise ShapeError("an empty sequence needs an explicit shape")
        return cls(p, q, alpha, mats)

    @property
    def kappa(self) -> int:
        return len(self.mats) - 1

    def __len__(self):
        return len(self.mats)

    def __getitem__(self, j):
        return self.mats[j]

    def __iter__(self):
        return iter(self.mats)

    def prefix(self, m: int) -> "MatSeq":
        """The terms ``s_0, ..., s_m``."""
        if m > self.kappa:
            raise IndexRangeError(f"prefix up to {m} of a sequence with kappa={self.kappa}")
        return MatSeq(self.p, self.q, self.alpha, self.mats[:m + 1])

    def with_mats(self, mats, p=None, q=None, alpha=None) -> "MatSeq":
        return MatSeq(self.p if p is None else p, self.q if q is None else q,
                      self.alpha if alpha is None else alpha, tuple(mats))

    def with_alpha(self, alpha) -> "MatSeq":
        return self.with_mats(self.mats, alpha=alpha)

    def map(self, fn, p=None, q=None) -> "MatSeq":
        """Apply ``fn(j, s_j)`` termwise."""
        return self.with_mats([fn(j, m) for j, m in enumerate(self.mats)], p, q)

    def adjoint(self) -> "MatSeq":
        """The sequence ``(s_j^*)`` with parameter ``conj(alpha)``."""
        return MatSeq(self.q, self.p, self.alpha.conjugate(), tuple(m.H for m in self.mats))

    def is_hermitian(self) -> bool:
        return self.p == self.q and all(m.is_hermitian() for m in self.mats)


def direct_sum(s: MatSeq, t: MatSeq) -> MatSeq:
    """Termwise ``diag(s_j, t_j)``; both sequences must share length and alpha."""
    if len(s) != len(t) or s.alpha != t.alpha:
        raise ShapeError("direct sum needs equal lengths and the same alpha")
    return MatSeq(s.p + t.p, s.q + t.q, s.alpha,
                  tuple(CMatrix.block_diag(a, b) for a, b in zip(s, t)))


def alpha_shifted(s: MatSeq) -> MatSeq:
    """``(-alpha s_j + s_{j+1})``, one term shorter."""
    if s.kappa < 1:
        raise IndexRangeError("the shifted sequence needs at least two terms")
    a = s.alpha
    return s.with_mats([s[j + 1] - s[j].scale(a) for j in range(s.kappa)])


# Hankel blocks -----------------------------------------------------------------

_HANKEL_SHIFT = {"H": 0, "K": 1, "G": 2}


def _require(cond, msg):
    if not cond:
        raise IndexRangeError(msg)


def _hankel(s: MatSeq, shift: int, n: int) -> CMatrix:
    return CMatrix.block([[s[j + k + shift] for k in range(n + 1)] for j in range(n + 1)])


def hankel_block(s: MatSeq, kind: str, n: int) -> CMatrix:
    """``H_n``, ``K_n``, ``G_n`` or ``H_{alpha,n} = -alpha H_n + K_n``."""
    _require(n >= 0, "negative block index")
    if kind in _HANKEL_SHIFT:
        shift = _HANKEL_SHIFT[kind]
        _require(2 * n + shift <= s.kappa,
                 f"{kind}_{n} needs 2n+{shift} <= kappa, but kappa={s.kappa}")
        return _hankel(s, shift, n)
    if kind == "Halpha":
        _require(2 * n + 1 <= s.kappa, f"Halpha_{n} needs 2n+1 <= kappa, but kappa={s.kappa}")
        return _hankel(s, 1, n) - _hankel(s, 0, n).scale(s.alpha)
    raise UnknownNameError(f"unknown Hankel kind {kind!r}")


def hankel(s, n):
    return hankel_block(s, "H", n)


def hankel_k(s, n):
    return hankel_block(s, "K", n)


def hankel_g(s, n):
    return hankel_block(s, "G", n)


def hankel_alpha(s, n):
    return hankel_block(s, "Halpha", n)


def y_stack(s: MatSeq, l: int, m: int) -> CMatrix:
    """Column ``[s_l; ...; s_m]``."""
    _require(0 <= l <= m <= s.kappa, f"column stack {l}..{m} out of range")
    return CMatrix.vstack(s.mats[l:m + 1])


def z_stack(s: MatSeq, l: int, m: int) -> CMatrix:
    """Row ``[s_l, ..., s_m]``."""
    _require(0 <= l <= m <= s.kappa, f"row stack {l}..{m} out of range")
    return CMatrix.hstack(s.mats[l:m + 1])


# Toeplitz and structural matrices -------------------------------------------------


@dataclass(frozen=True)
class ToeplitzPair:
    lower: CMatrix
    upper: CMatrix


def toeplitz_lower(s: MatSeq, m: int) -> CMatrix:
    _require(0 <= m <= s.kappa, f"Toeplitz index {m} exceeds kappa={s.kappa}")
    zero = CMatrix.zeros(s.p, s.q)
    return CMatrix.block([[s[j - k] if j >= k else zero for k in range(m + 1)]
                          for j in range(m + 1)])


def toeplitz_upper(s: MatSeq, m: int) -> CMatrix:
    _require(0 <= m <= s.kappa, f"Toeplitz index {m} exceeds kappa={s.kappa}")
    zero = CMatrix.zeros(s.p, s.q)
    return CMatrix.block([[s[k - j] if k >= j else zero for k in range(m + 1)]
                          for j in range(m + 1)])


def toeplitz_pair(s: MatSeq, m: int) -> ToeplitzPair:
    return ToeplitzPair(toeplitz_lower(s, m), toeplitz_upper(s, m))


@lru_cache(maxsize=1024)
def _structural(q, n, which, z):
    eye, zero = CMatrix.identity(q), CMatrix.zeros(q)
    if which == "T":
        return CMatrix.block([[eye if j == k + 1 else zero for k in range(n + 1)]
                              for j in range(n + 1)])
    if which == "R":
        return CMatrix.block([[eye.scale(z ** (j - k)) if j >= k else zero
                               for k in range(n + 1)] for j in range(n + 1)])
    if which == "v":
        return CMatrix.vstack([eye] + [zero] * n)
    if n == 0:
        raise IndexRangeError(f"selector {which} needs n >= 1")
    if which == "IO":
        return CMatrix.vstack([CMatrix.identity(n * q), CMatrix.zeros(q, n * q)])
    return CMatrix.vstack([CMatrix.zeros(q, n * q), CMatrix.identity(n * q)])


def structural(q: int, n: int, which: str, z=None) -> CMatrix:
    """Shift ``T``, resolvent ``R(z) = (I - zT)^{-1}``, or selectors ``v``, ``IO``, ``OI``.

    ``IO`` stacks ``I_{nq}`` over a zero block row, ``OI`` a zero block row
    over ``I_{nq}``.
    """
    _require(n >= 0, "negative block index")
    if which in ("R", "R(z)"):
        if z is None:
            raise ValueError("the resolvent needs a point z")
        return _structural(q, n, "R", GaussRational.coerce(z))
    if which not in ("T", "v", "IO", "OI"):
        raise UnknownNameError(f"unknown structural matrix {which!r}")
    if z is not None:
        raise ValueError(f"{which} takes no point z")
    return _structural(q, n, which, None)


def resolvent(q, n, z):
    return structural(q, n, "R", z)


def resolvent_inv(q, n, z):
    """``I - zT``, the inverse of the resolvent."""
    return CMatrix.identity((n + 1) * q) - structural(q, n, "T").scale(z)


# Schur complements -----------------------------------------------------------------


def L(s: MatSeq, n: int) -> CMatrix:
    _require(0 <= n and 2 * n <= s.kappa, f"L_{n} needs 2n <= kappa, but kappa={s.kappa}")
    if n == 0:
        return s[0]
    return s[2 * n] - z_stack(s, n, 2 * n - 1) @ pinv(hankel(s, n - 1)) @ y_stack(s, n, 2 * n - 1)


def Theta(s: MatSeq, n: int) -> CMatrix:
    _require(0 <= n and 2 * n - 1 <= s.kappa,
             f"Theta_{n} needs 2n-1 <= kappa, but kappa={s.kappa}")
    if n == 0:
        return CMatrix.zeros(s.p, s.q)
    return z_stack(s, n, 2 * n - 1) @ pinv(hankel(s, n - 1)) @ y_stack(s, n, 2 * n - 1)


def Lambda(s: MatSeq, n: int) -> CMatrix:
    _require(1 <= n and 2 * n <= s.kappa,
             f"Lambda_{n} needs n >= 1 and 2n <= kappa, but kappa={s.kappa}")
    return hankel_g(s, n - 1) - y_stack(s, 1, n) @ pinv(s[0]) @ z_stack(s, 1, n)


def L_alpha(s: MatSeq, n: int) -> CMatrix:
    _require(0 <= n and 2 * n + 1 <= s.kappa,
             f"L_alpha_{n} needs 2n+1 <= kappa, but kappa={s.kappa}")
    return L(alpha_shifted(s), n)


def Theta_alpha(s: MatSeq, n: int) -> CMatrix:
    _require(0 <= n and 2 * n <= s.kappa,
             f"Theta_alpha_{n} needs 2n <= kappa, but kappa={s.kappa}")
    if n == 0:
        return CMatrix.zeros(s.p, s.q)
    return Theta(alpha_shifted(s), n)


@dataclass(frozen=True)
class SchurComplements:
    """The complements available at index ``n``; undefined members are ``None``."""

    n: int
    L: Optional[CMatrix]
    Theta: Optional[CMatrix]
    Lambda: Optional[CMatrix]
    L_alpha: Optional[CMatrix]
    Theta_alpha: Optional[CMatrix]


def schur_complements(s: MatSeq, n: int) -> SchurComplements:
    _require(n >= 0, "negative block index")
    k = s.kappa
    return SchurComplements(
        n=n,
        L=L(s, n) if 2 * n <= k else None,
        Theta=Theta(s, n) if 2 * n - 1 <= k else None,
        Lambda=Lambda(s, n) if n >= 1 and 2 * n <= k else None,
        L_alpha=L_alpha(s, n) if 2 * n + 1 <= k else None,
        Theta_alpha=Theta_alpha(s, n) if 2 * n <= k else None,
    )


# Defect block and normalization matrices ---------------------------------------


def xi_block(s: MatSeq, n: int, m: int) -> CMatrix:
    """``s_m - s_0 s_0^+ s_m s_0^+ s_0`` placed in the last block of an ``(n+1)``-block matrix."""
    _require(0 <= m <= s.kappa and n >= 0, f"defect block at {m} out of range")
    s0 = s[0]
    core = s[m] - s0 @ pinv(s0) @ s[m] @ pinv(s0) @ s0
    if n == 0:
        return core
    return CMatrix.block_diag(CMatrix.zeros(n * s.p, n * s.q), core)


@dataclass(frozen=True)
class DPair:
    left: CMatrix
    right: CMatrix


def d_matrices(s: MatSeq, m: int, variant: str = "plain") -> DPair:
    """``left = (I⊗s_0) S_m^# + I⊗(I - s_0 s_0^+)`` and ``right = SS_m^# (I⊗s_0) + I⊗(I - s_0^+ s_0)``.

    ``S^#`` and ``SS^#`` are the Toeplitz matrices of the reciprocal sequence.
    ``variant="plus_alpha"`` applies the construction to the [+]-transform.
    """
    from . import transforms

    _require(0 <= m <= s.kappa, f"D matrices at {m} need m <= kappa={s.kappa}")
    if variant == "plus_alpha":
        s = transforms.splus(s)
    elif variant != "plain":
        raise UnknownNameError(f"unknown D-matrix variant {variant!r}")
    r = transforms.reciprocal(s)
    s0, s0p = s[0], pinv(s[0])
    left = (s0.kron_identity(m + 1) @ toeplitz_lower(r, m)
            + (CMatrix.identity(s.p) - s0 @ s0p).kron_identity(m + 1))
    right = (toeplitz_upper(r, m) @ s0.kron_identity(m + 1)
             + (CMatrix.identity(s.q) - s0p @ s0).kron_identity(m + 1))
    return DPair(left, right)
