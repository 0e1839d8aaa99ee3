"""Exact dense linear algebra over the Gaussian rationals.

Scalars are :class:`GaussRational` values and matrices are immutable
:class:`CMatrix` objects.  Every rank, definiteness and subspace decision
is made exactly; nothing here touches floating point.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

from gmpy2 import mpq

from .errors import ShapeError

_ZERO = mpq(0)
_ONE = mpq(1)


def _to_mpq(x):
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, type(_ZERO)):
        return x
    if isinstance(x, int):
        return mpq(x)
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, str):
        text = x.strip()
        try:
            return mpq(Fraction(text))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational literal: {x!r}") from exc
    raise TypeError(f"cannot use {type(x).__name__} as an exact rational")


class GaussRational:
    """An exact complex number ``re + im*i`` with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, GaussRational):
            if im != 0:
                raise TypeError("complex real part with extra imaginary part")
            r, i = re.re, re.im
        else:
            r, i = _to_mpq(re), _to_mpq(im)
        object.__setattr__(self, "re", r)
        object.__setattr__(self, "im", i)

    @classmethod
    def _raw(cls, re, im):
        obj = object.__new__(cls)
        object.__setattr__(obj, "re", re)
        object.__setattr__(obj, "im", im)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("GaussRational is immutable")

    def __reduce__(self):
        return (GaussRational, (Fraction(int(self.re.numerator), int(self.re.denominator)),
                                Fraction(int(self.im.numerator), int(self.im.denominator))))

    @staticmethod
    def coerce(x) -> "GaussRational":
        return x if isinstance(x, GaussRational) else GaussRational(x)

    @property
    def is_real(self):
        return self.im == 0

    def conjugate(self):
        return GaussRational._raw(self.re, -self.im)

    def abs2(self):
        """Squared modulus, an exact rational."""
        return self.re * self.re + self.im * self.im

    def __add__(self, other):
        if isinstance(other, GaussRational):
            return GaussRational._raw(self.re + other.re, self.im + other.im)
        try:
            o = _to_mpq(other)
        except TypeError:
            return NotImplemented
        return GaussRational._raw(self.re + o, self.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussRational._raw(-self.re, -self.im)

    def __sub__(self, other):
        if isinstance(other, GaussRational):
            return GaussRational._raw(self.re - other.re, self.im - other.im)
        try:
            o = _to_mpq(other)
        except TypeError:
            return NotImplemented
        return GaussRational._raw(self.re - o, self.im)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, GaussRational):
            a, b, c, d = self.re, self.im, other.re, other.im
            return GaussRational._raw(a * c - b * d, a * d + b * c)
        try:
            o = _to_mpq(other)
        except TypeError:
            return NotImplemented
        return GaussRational._raw(self.re * o, self.im * o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = GaussRational.coerce(other)
        n = other.abs2()
        if n == 0:
            raise ZeroDivisionError("division by zero")
        a, b, c, d = self.re, self.im, other.re, other.im
        return GaussRational._raw((a * c + b * d) / n, (b * c - a * d) / n)

    def __rtruediv__(self, other):
        return GaussRational.coerce(other) / self

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers")
        result, base = GaussRational._raw(_ONE, _ZERO), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def pinv(self):
        """Scalar pseudoinverse: ``1/z`` for ``z != 0`` and ``0`` otherwise."""
        return GaussRational() if self.is_zero() else 1 / self

    def is_zero(self):
        return self.re == 0 and self.im == 0

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, GaussRational):
            return self.re == other.re and self.im == other.im
        try:
            o = _to_mpq(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.im == 0 and self.re == o

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self):
        if self.im == 0:
            return f"GaussRational({str(self.re)!r})"
        return f"GaussRational({str(self.re)!r}, {str(self.im)!r})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


def _split(x):
    """Return ``(re, im)`` mpq parts of any accepted scalar."""
    if isinstance(x, GaussRational):
        return x.re, x.im
    return _to_mpq(x), _ZERO


def _normalize_im(im):
    return None if all(v == 0 for v in im) else tuple(im)


class CMatrix:
    """Immutable dense ``rows x cols`` matrix over the Gaussian rationals.

    Storage is row-major with the real and imaginary parts kept in separate
    tuples; ``im`` is ``None`` for real matrices so real arithmetic takes a
    fast path.
    """

    __slots__ = ("_rows", "_cols", "_re", "_im", "_hash")

    def __init__(self, rows, cols, entries):
        rows, cols = int(rows), int(cols)
        if rows < 0 or cols < 0:
            raise ShapeError("negative dimension")
        entries = list(entries)
        if len(entries) != rows * cols:
            raise ShapeError(f"expected {rows * cols} entries, got {len(entries)}")
        parts = [_split(e) for e in entries]
        self._init(rows, cols, tuple(p[0] for p in parts), _normalize_im([p[1] for p in parts]))

    def _init(self, rows, cols, re, im):
        self._rows, self._cols, self._re, self._im = rows, cols, re, im
        self._hash = None

    @classmethod
    def _make(cls, rows, cols, re, im=None):
        obj = object.__new__(cls)
        obj._init(rows, cols, tuple(re), None if im is None else _normalize_im(im))
        return obj

    # construction -------------------------------------------------------

    @classmethod
    def from_rows(cls, rows):
        rows = [list(r) for r in rows]
        if not rows:
            raise ShapeError("use CMatrix.zeros for matrices without rows")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ShapeError("ragged rows")
        return cls(len(rows), width, [x for r in rows for x in r])

    @classmethod
    def zeros(cls, rows, cols=None):
        cols = rows if cols is None else cols
        return cls._make(rows, cols, (_ZERO,) * (rows * cols))

    @classmethod
    def identity(cls, n):
        return cls._make(n, n, (_ONE if i == j else _ZERO for i in range(n) for j in range(n)))

    @classmethod
    def scalar(cls, value, n=1):
        return cls.identity(n).scale(value)

    @classmethod
    def diag(cls, *values):
        n = len(values)
        vals = {i: v for i, v in enumerate(values)}
        return cls(n, n, (vals[i] if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def block(cls, grid):
        """Assemble a matrix from a 2-D grid of blocks."""
        grid = [list(r) for r in grid]
        heights = [r[0].rows for r in grid]
        widths = [b.cols for b in grid[0]]
        for r, h in zip(grid, heights):
            if len(r) != len(widths) or any(b.rows != h for b in r):
                raise ShapeError("block row heights disagree")
            if any(b.cols != w for b, w in zip(r, widths)):
                raise ShapeError("block column widths disagree")
        total_c = sum(widths)
        re, im = [], []
        complex_ = any(b._im is not None for r in grid for b in r)
        for r, h in zip(grid, heights):
            for i in range(h):
                for b in r:
                    re.extend(b._re[i * b.cols:(i + 1) * b.cols])
                    if complex_:
                        im.extend(b._im[i * b.cols:(i + 1) * b.cols] if b._im is not None
                                  else (_ZERO,) * b.cols)
        return cls._make(sum(heights), total_c, re, im if complex_ else None)

    @classmethod
    def block_diag(cls, *blocks):
        n = len(blocks)
        grid = [[blocks[j] if j == k else cls.zeros(blocks[j].rows, blocks[k].cols)
                 for k in range(n)] for j in range(n)]
        return cls.block(grid)

    @classmethod
    def vstack(cls, blocks):
        return cls.block([[b] for b in blocks])

    @classmethod
    def hstack(cls, blocks):
        return cls.block([list(blocks)])

    def kron_identity(self, n):
        """``I_n ⊗ self``, the block diagonal matrix with ``n`` copies."""
        if n == 0:
            return CMatrix.zeros(0, 0)
        return CMatrix.block_diag(*([self] * n))

    # access -------------------------------------------------------------

    @property
    def rows(self):
        return self._rows

    @property
    def cols(self):
        return self._cols

    @property
    def shape(self):
        return (self._rows, self._cols)

    @property
    def is_square(self):
        return self._rows == self._cols

    @property
    def is_real(self):
        return self._im is None

    @property
    def entries(self):
        im = self._im or (_ZERO,) * len(self._re)
        return tuple(GaussRational._raw(r, i) for r, i in zip(self._re, im))

    def __getitem__(self, key):
        i, j = key
        if not (0 <= i < self._rows and 0 <= j < self._cols):
            raise IndexError(key)
        k = i * self._cols + j
        return GaussRational._raw(self._re[k], _ZERO if self._im is None else self._im[k])

    def tolist(self):
        e = self.entries
        return [list(e[i * self._cols:(i + 1) * self._cols]) for i in range(self._rows)]

    def submatrix(self, r0, r1, c0, c1):
        """Rows ``r0:r1`` and columns ``c0:c1``."""
        if not (0 <= r0 <= r1 <= self._rows and 0 <= c0 <= c1 <= self._cols):
            raise ShapeError("submatrix out of range")
        idx = [i * self._cols + j for i in range(r0, r1) for j in range(c0, c1)]
        re = [self._re[k] for k in idx]
        im = None if self._im is None else [self._im[k] for k in idx]
        return CMatrix._make(r1 - r0, c1 - c0, re, im)

    def block_at(self, j, k, p, q):
        """Block ``(j, k)`` in a partition into ``p x q`` blocks."""
        return self.submatrix(j * p, (j + 1) * p, k * q, (k + 1) * q)

    # arithmetic -----------------------------------------------------------

    def _same_shape(self, other):
        if not isinstance(other, CMatrix):
            raise TypeError("expected CMatrix")
        if self.shape != other.shape:
            raise ShapeError(f"shape mismatch {self.shape} vs {other.shape}")

    def _elementwise(self, other, op):
        self._same_shape(other)
        re = [op(a, b) for a, b in zip(self._re, other._re)]
        if self._im is None and other._im is None:
            return CMatrix._make(self._rows, self._cols, re)
        ai = self._im or (_ZERO,) * len(re)
        bi = other._im or (_ZERO,) * len(re)
        return CMatrix._make(self._rows, self._cols, re, [op(a, b) for a, b in zip(ai, bi)])

    def __add__(self, other):
        return self._elementwise(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._elementwise(other, lambda a, b: a - b)

    def __neg__(self):
        im = None if self._im is None else [-x for x in self._im]
        return CMatrix._make(self._rows, self._cols, [-x for x in self._re], im)

    def scale(self, c):
        cr, ci = _split(c)
        if ci == 0:
            im = None if self._im is None else [cr * x for x in self._im]
            return CMatrix._make(self._rows, self._cols, [cr * x for x in self._re], im)
        im0 = self._im or (_ZERO,) * len(self._re)
        re = [cr * a - ci * b for a, b in zip(self._re, im0)]
        im = [cr * b + ci * a for a, b in zip(self._re, im0)]
        return CMatrix._make(self._rows, self._cols, re, im)

    def __mul__(self, c):
        if isinstance(c, CMatrix):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if not isinstance(other, CMatrix):
            return NotImplemented
        if self._cols != other._rows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        m, n, p = self._rows, self._cols, other._cols
        if n == 0:
            return CMatrix.zeros(m, p)
        arows = [self._re[i * n:(i + 1) * n] for i in range(m)]
        bcols = [other._re[j::p] for j in range(p)]
        re = [sum(map(_mul, a, b)) for a in arows for b in bcols]
        if self._im is None and other._im is None:
            return CMatrix._make(m, p, re)
        ai = [self._im[i * n:(i + 1) * n] for i in range(m)] if self._im is not None else None
        bi = [other._im[j::p] for j in range(p)] if other._im is not None else None
        im = [_ZERO] * (m * p)
        k = 0
        for i in range(m):
            for j in range(p):
                s_im = _ZERO
                if bi is not None:
                    s_im += sum(map(_mul, arows[i], bi[j]))
                    if ai is not None:
                        re[k] -= sum(map(_mul, ai[i], bi[j]))
                if ai is not None:
                    s_im += sum(map(_mul, ai[i], bcols[j]))
                im[k] = s_im
                k += 1
        return CMatrix._make(m, p, re, im)

    @property
    def H(self):
        """Conjugate transpose."""
        m, n = self._rows, self._cols
        idx = [i * n + j for j in range(n) for i in range(m)]
        re = [self._re[k] for k in idx]
        im = None if self._im is None else [-self._im[k] for k in idx]
        return CMatrix._make(n, m, re, im)

    adjoint = H

    @property
    def T(self):
        m, n = self._rows, self._cols
        idx = [i * n + j for j in range(n) for i in range(m)]
        re = [self._re[k] for k in idx]
        im = None if self._im is None else [self._im[k] for k in idx]
        return CMatrix._make(n, m, re, im)

    def conj(self):
        if self._im is None:
            return self
        return CMatrix._make(self._rows, self._cols, self._re, [-x for x in self._im])

    # predicates -------------------------------------------------------------

    def is_zero(self):
        return self._im is None and all(x == 0 for x in self._re)

    def is_hermitian(self):
        return self.is_square and self == self.H

    def __eq__(self, other):
        if not isinstance(other, CMatrix):
            return NotImplemented
        return (self._rows == other._rows and self._cols == other._cols
                and self._re == other._re and self._im == other._im)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._rows, self._cols, self._re, self._im))
        return self._hash

    def __repr__(self):
        rows = ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.tolist())
        return f"CMatrix({self._rows}x{self._cols}: [{rows}])"


def _mul(a, b):
    return a * b


# ---------------------------------------------------------------------------
# Elimination kernels.  Real matrices run on mpq, complex ones on GaussRational;
# the algorithms are identical because both types share the field operations.


def _scalar_rows(A: CMatrix):
    n = A.cols
    if A.is_real:
        return [list(A._re[i * n:(i + 1) * n]) for i in range(A.rows)]
    e = A.entries
    return [list(e[i * n:(i + 1) * n]) for i in range(A.rows)]


def _from_scalar_rows(rows, nrows, ncols):
    flat = [x for r in rows for x in r]
    return CMatrix(nrows, ncols, flat)


def _rref(rows, ncols):
    """In-place reduced row echelon form; returns the pivot columns."""
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        pr = rows[r]
        for i in range(nrows):
            if i != r:
                f = rows[i][c]
                if f != 0:
                    rows[i] = [x - f * y for x, y in zip(rows[i], pr)]
        pivots.append(c)
        r += 1
    return pivots


@lru_cache(maxsize=8192)
def _rref_cached(A: CMatrix):
    rows = _scalar_rows(A)
    pivots = _rref(rows, A.cols)
    return rows, tuple(pivots)


def rank(A: CMatrix) -> int:
    return len(_rref_cached(A)[1])


def rank_factorization(A: CMatrix):
    """Return ``(F, G)`` with ``A = F G``, ``F`` of full column rank and ``G`` of full row rank."""
    rows, pivots = _rref_cached(A)
    r = len(pivots)
    G = _from_scalar_rows(rows[:r], r, A.cols) if r else CMatrix.zeros(0, A.cols)
    F = CMatrix.hstack([A.submatrix(0, A.rows, c, c + 1) for c in pivots]) if r \
        else CMatrix.zeros(A.rows, 0)
    return F, G


@lru_cache(maxsize=8192)
def det(A: CMatrix) -> GaussRational:
    if not A.is_square:
        raise ShapeError("determinant of a non-square matrix")
    rows = _scalar_rows(A)
    n = A.rows
    result = _ONE
    for c in range(n):
        piv = next((i for i in range(c, n) if rows[i][c] != 0), None)
        if piv is None:
            return GaussRational()
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            result = -result
        p = rows[c][c]
        result = result * p
        inv = 1 / p
        for i in range(c + 1, n):
            f = rows[i][c] * inv
            if f != 0:
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
    return GaussRational.coerce(result)


@lru_cache(maxsize=8192)
def inverse(A: CMatrix) -> CMatrix:
    if not A.is_square:
        raise ShapeError("inverse of a non-square matrix")
    n = A.rows
    rows = _scalar_rows(A.hstack([A, CMatrix.identity(n)]) if n else A)
    pivots = _rref(rows, 2 * n)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return _from_scalar_rows([r[n:] for r in rows], n, n)


@lru_cache(maxsize=16384)
def pinv(A: CMatrix) -> CMatrix:
    """Moore-Penrose pseudoinverse via a rank factorization ``A = F G``.

    ``A^+ = G* (F* A G*)^{-1} F*``.
    """
    F, G = rank_factorization(A)
    if F.cols == 0:
        return CMatrix.zeros(A.cols, A.rows)
    Fh, Gh = F.H, G.H
    return Gh @ inverse(Fh @ A @ Gh) @ Fh


class Definiteness(str, enum.Enum):
    PD = "pd"
    PSD = "psd"
    INDEFINITE = "indefinite"
    NOT_HERMITIAN = "not-hermitian"


def _conj(x):
    return x.conjugate() if isinstance(x, GaussRational) else x


def _real_part(x):
    return x.re if isinstance(x, GaussRational) else x


@lru_cache(maxsize=16384)
def psd_check(A: CMatrix) -> Definiteness:
    """Decide definiteness by pivoted Hermitian elimination.

    A positive diagonal pivot is eliminated symmetrically at each step.  A
    negative diagonal entry, or a zero diagonal entry with a nonzero row,
    means the matrix is indefinite.
    """
    if not A.is_square:
        raise ShapeError("definiteness of a non-square matrix")
    if not A.is_hermitian():
        return Definiteness.NOT_HERMITIAN
    rows = _scalar_rows(A)
    active = list(range(A.rows))
    pivots = 0
    while active:
        diag = {i: _real_part(rows[i][i]) for i in active}
        if any(d < 0 for d in diag.values()):
            return Definiteness.INDEFINITE
        for i in active:
            if diag[i] == 0 and any(rows[i][j] != 0 for j in active):
                return Definiteness.INDEFINITE
        k = next((i for i in active if diag[i] > 0), None)
        if k is None:
            break
        active.remove(k)
        inv = 1 / rows[k][k]
        for i in active:
            f = rows[i][k] * inv
            if f != 0:
                for j in active:
                    rows[i][j] = rows[i][j] - f * rows[k][j]
        pivots += 1
    return Definiteness.PD if pivots == A.rows else Definiteness.PSD


def is_psd(A: CMatrix) -> bool:
    return psd_check(A) in (Definiteness.PSD, Definiteness.PD)


def is_pd(A: CMatrix) -> bool:
    return psd_check(A) is Definiteness.PD


def ker_included(A: CMatrix, B: CMatrix) -> bool:
    """``Ker A ⊆ Ker B``, tested as ``B A^+ A == B``."""
    if A.cols != B.cols:
        raise ShapeError(f"kernels live in different spaces: {A.shape} vs {B.shape}")
    return B @ pinv(A) @ A == B


def ran_included(A: CMatrix, C: CMatrix) -> bool:
    """``Ran C ⊆ Ran A``, tested as ``A A^+ C == C``."""
    if A.rows != C.rows:
        raise ShapeError(f"ranges live in different spaces: {A.shape} vs {C.shape}")
    return A @ pinv(A) @ C == C


class SubspaceInclusion(NamedTuple):
    ker_included: bool | None
    ran_included: bool | None


def subspace_tests(A: CMatrix, B: CMatrix) -> SubspaceInclusion:
    """Both inclusion tests ``Ker A ⊆ Ker B`` and ``Ran B ⊆ Ran A``.

    A test whose shapes do not fit is reported as ``None``; if neither fits
    the call is a shape error.
    """
    ker = ker_included(A, B) if A.cols == B.cols else None
    ran = ran_included(A, B) if A.rows == B.rows else None
    if ker is None and ran is None:
        raise ShapeError(f"no inclusion test fits shapes {A.shape} and {B.shape}")
    return SubspaceInclusion(ker, ran)


def mat(rows) -> CMatrix:
    """Shorthand for :meth:`CMatrix.from_rows`; scalars give ``1 x 1`` matrices."""
    if isinstance(rows, CMatrix):
        return rows
    if not isinstance(rows, (list, tuple)):
        return CMatrix(1, 1, [rows])
    return CMatrix.from_rows(rows)
