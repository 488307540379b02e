"""Dense exact linear algebra over Q(i).

Vectors are tuples of :class:`GaussianRational`. A :class:`Subspace` always
holds its basis in reduced row-echelon form, so two subspaces are equal
exactly when their bases are identical.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

from .exactnum import I, ONE, ZERO, GaussianRational

Vector = tuple  # tuple[GaussianRational, ...]

_QZERO = Fraction(0)


class DimensionError(ValueError):
    """Raised when operands live in spaces of different dimension."""


class ContainmentError(ValueError):
    """Raised by :func:`quotient_dim` when the divisor is not a subspace."""


@dataclass(frozen=True)
class Matrix:
    nrows: int
    ncols: int
    entries: tuple  # tuple of row tuples

    def __post_init__(self):
        if len(self.entries) != self.nrows:
            raise DimensionError("row count does not match entries")
        for row in self.entries:
            if len(row) != self.ncols:
                raise DimensionError("ragged matrix")

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence], ncols: int | None = None) -> "Matrix":
        rows = [tuple(GaussianRational.coerce(x) for x in r) for r in rows]
        if ncols is None:
            if not rows:
                raise DimensionError("column count required for an empty matrix")
            ncols = len(rows[0])
        return cls(len(rows), ncols, tuple(rows))

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "Matrix":
        return cls(nrows, ncols, tuple((ZERO,) * ncols for _ in range(nrows)))

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, n, tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n)))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def transpose(self) -> "Matrix":
        cols = tuple(tuple(self.entries[i][j] for i in range(self.nrows)) for j in range(self.ncols))
        return Matrix(self.ncols, self.nrows, cols)

    def is_zero(self) -> bool:
        return not any(x for row in self.entries for x in row)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        cols = other.transpose().entries
        out = []
        for row in self.entries:
            nz = [(k, a) for k, a in enumerate(row) if a]
            out_row = []
            for col in cols:
                s = ZERO
                for k, a in nz:
                    b = col[k]
                    if b:
                        s = s + a * b
                out_row.append(s)
            out.append(tuple(out_row))
        return Matrix(self.nrows, other.ncols, tuple(out))

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise DimensionError(f"cannot add {self.shape} and {other.shape}")
        return Matrix(
            self.nrows,
            self.ncols,
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries)),
        )

    def __neg__(self) -> "Matrix":
        return Matrix(self.nrows, self.ncols, tuple(tuple(-a for a in r) for r in self.entries))

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def apply(self, v: Sequence) -> Vector:
        if len(v) != self.ncols:
            raise DimensionError(f"vector of length {len(v)} for {self.shape} matrix")
        nz = [(k, x) for k, x in enumerate(v) if x]
        out = []
        for row in self.entries:
            s = ZERO
            for k, x in nz:
                a = row[k]
                if a:
                    s = s + a * x
            out.append(s)
        return tuple(out)

    def rank(self) -> int:
        return len(_echelon(self.entries, self.ncols)[0])

    def __str__(self) -> str:
        return "\n".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.entries)


def _to_int_row(row: Sequence, ncols: int):
    """Scale a Q(i) row to Z[i]; returns (re ints, im ints) or None if zero."""
    den = 1
    for x in row:
        if x:
            den = lcm(den, x.re._denominator, x.im._denominator)
    re = [0] * ncols
    im = [0] * ncols
    nz = False
    for j, x in enumerate(row):
        if x:
            nz = True
            re[j] = x.re._numerator * (den // x.re._denominator)
            im[j] = x.im._numerator * (den // x.im._denominator)
    return (re, im) if nz else None


def _strip_content(re: list, im: list, start: int) -> None:
    g = 0
    for j in range(start, len(re)):
        g = gcd(g, re[j], im[j])
        if g == 1:
            return
    if g > 1:
        for j in range(start, len(re)):
            re[j] //= g
            im[j] //= g


def _echelon(rows: Iterable[Sequence], ncols: int) -> tuple[list[list], list[int]]:
    """Gauss-Jordan elimination. Returns (nonzero rref rows, pivot columns).

    Elimination runs fraction-free over Z[i] (row ``r`` becomes ``P*r - f*pivot``)
    and rows are only divided by their pivot at the end, which keeps the inner
    loop on machine-sized ints instead of Fraction objects.
    """
    work = []
    for r in rows:
        if len(r) != ncols:
            raise DimensionError(f"row of length {len(r)} with {ncols} columns")
        if not all(type(x) is GaussianRational for x in r):
            r = [GaussianRational.coerce(x) for x in r]
        ir = _to_int_row(r, ncols)
        if ir is not None:
            work.append(ir)
    pivots: list[int] = []
    out: list = []
    col = 0
    while work and col < ncols:
        pick = None
        for idx, (re, im) in enumerate(work):
            if re[col] or im[col]:
                pick = idx
                break
        if pick is None:
            col += 1
            continue
        pre, pim = work.pop(pick)
        a, b = pre[col], pim[col]
        support = [j for j in range(col, ncols) if pre[j] or pim[j]]
        for target, lo in ((work, col), (out, 0)):
            for re, im in target:
                fa, fb = re[col], im[col]
                if not (fa or fb):
                    continue
                # r <- (a+bi) r - (fa+fb i) pivot; work rows vanish left of col
                for j in range(lo, ncols):
                    xr, xi = re[j], im[j]
                    re[j] = a * xr - b * xi
                    im[j] = a * xi + b * xr
                for j in support:
                    yr, yi = pre[j], pim[j]
                    re[j] -= fa * yr - fb * yi
                    im[j] -= fa * yi + fb * yr
                _strip_content(re, im, lo)
        work = [r for r in work if any(r[0]) or any(r[1])]
        out.append((pre, pim))
        pivots.append(col)
        col += 1
    result = []
    for (re, im), p in zip(out, pivots):
        a, b = re[p], im[p]
        norm = a * a + b * b
        row = []
        for j in range(ncols):
            xr, xi = re[j], im[j]
            if xr or xi:
                # x / (a+bi) = x (a-bi) / norm
                row.append(GaussianRational._raw(Fraction(xr * a + xi * b, norm),
                                                 Fraction(xi * a - xr * b, norm)))
            else:
                row.append(ZERO)
        result.append(row)
    return result, pivots


def rref(m: Matrix) -> Matrix:
    """Reduced row-echelon form with zero rows dropped."""
    rows, _ = _echelon(m.entries, m.ncols)
    return Matrix(len(rows), m.ncols, tuple(tuple(r) for r in rows))


@dataclass(frozen=True)
class Subspace:
    ambient_dim: int
    basis: Matrix

    @property
    def dim(self) -> int:
        return self.basis.nrows

    @property
    def vectors(self) -> tuple:
        return self.basis.entries

    @classmethod
    def span(cls, vectors: Iterable[Sequence], ambient_dim: int) -> "Subspace":
        vecs = [tuple(GaussianRational.coerce(x) for x in v) for v in vectors]
        for v in vecs:
            if len(v) != ambient_dim:
                raise DimensionError(f"vector of length {len(v)} in ambient dimension {ambient_dim}")
        rows, _ = _echelon(vecs, ambient_dim)
        return cls(ambient_dim, Matrix(len(rows), ambient_dim, tuple(tuple(r) for r in rows)))

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, Matrix(0, ambient_dim, ()))

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, Matrix.identity(ambient_dim))

    def pivots(self) -> list[int]:
        out = []
        for row in self.basis.entries:
            for j, x in enumerate(row):
                if x:
                    out.append(j)
                    break
        return out

    def reduce(self, v: Sequence) -> list:
        """Residue of ``v`` after eliminating the pivot coordinates."""
        r = list(v)
        for row, p in zip(self.basis.entries, self.pivots()):
            f = r[p]
            if f:
                for j in range(p, self.ambient_dim):
                    x = row[j]
                    if x:
                        r[j] = r[j] - f * x
        return r

    def contains(self, v: Sequence) -> bool:
        if len(v) != self.ambient_dim:
            raise DimensionError(f"vector of length {len(v)} in ambient dimension {self.ambient_dim}")
        return not any(self.reduce(v))

    def issubspace(self, other: "Subspace") -> bool:
        _check_ambient(self, other)
        return all(other.contains(v) for v in self.vectors)

    __le__ = issubspace

    def annihilator_rows(self) -> tuple:
        """Rows ``c`` with ``c . v = 0`` for every ``v`` here (bilinear, no conjugation)."""
        return kernel(self.basis).vectors

    def __str__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


def _check_ambient(a: Subspace, b: Subspace) -> None:
    if a.ambient_dim != b.ambient_dim:
        raise DimensionError(f"ambient dimensions differ: {a.ambient_dim} vs {b.ambient_dim}")


def kernel(m: Matrix) -> Subspace:
    """Null space of ``m`` as a subspace of the domain."""
    rows, pivots = _echelon(m.entries, m.ncols)
    pivset = set(pivots)
    free = [j for j in range(m.ncols) if j not in pivset]
    vecs = []
    for f in free:
        v = [ZERO] * m.ncols
        v[f] = ONE
        for row, p in zip(rows, pivots):
            x = row[f]
            if x:
                v[p] = -x
        vecs.append(v)
    return Subspace.span(vecs, m.ncols)


def image(m: Matrix) -> Subspace:
    """Column space of ``m`` as a subspace of the codomain."""
    return Subspace.span(m.transpose().entries, m.nrows)


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    _check_ambient(a, b)
    if not b.dim:
        return a
    if not a.dim:
        return b
    return Subspace.span(a.vectors + b.vectors, a.ambient_dim)


def subspace_intersect(a: Subspace, b: Subspace) -> Subspace:
    _check_ambient(a, b)
    n = a.ambient_dim
    if not a.dim or not b.dim:
        return Subspace.zero(n)
    constraints = a.annihilator_rows() + b.annihilator_rows()
    if not constraints:
        return Subspace.full(n)
    return kernel(Matrix(len(constraints), n, constraints))


def preimage(m: Matrix, target: Subspace) -> Subspace:
    """``{v : m v in target}``."""
    if target.ambient_dim != m.nrows:
        raise DimensionError(f"target lives in dimension {target.ambient_dim}, map has {m.nrows} rows")
    constraints = target.annihilator_rows()
    if not constraints:
        return Subspace.full(m.ncols)
    return kernel(Matrix(len(constraints), m.nrows, constraints) @ m)


def quotient_dim(big: Subspace, small: Subspace) -> int:
    """``dim big - dim small``, after checking ``small`` lies inside ``big``."""
    _check_ambient(big, small)
    if not small.issubspace(big):
        raise ContainmentError(
            f"quotient of a dim-{big.dim} space by a non-contained dim-{small.dim} space"
        )
    return big.dim - small.dim


def realify_vector(v: Sequence) -> Vector:
    out = []
    for z in v:
        out.append(GaussianRational._raw(z.re, _QZERO))
        out.append(GaussianRational._raw(z.im, _QZERO))
    return tuple(out)


def realify(s: Subspace) -> Subspace:
    """The underlying Q-subspace, coordinates interleaved as (re, im) pairs."""
    vecs = []
    for v in s.vectors:
        vecs.append(realify_vector(v))
        vecs.append(realify_vector(tuple(x * I for x in v)))
    return Subspace.span(vecs, 2 * s.ambient_dim)


def realify_matrix(m: Matrix) -> Matrix:
    """Real matrix of the Q-linear map underlying ``m``, in realified coordinates."""
    rows = []
    for row in m.entries:
        re_row, im_row = [], []
        for z in row:
            a = GaussianRational._raw(z.re, _QZERO)
            b = GaussianRational._raw(z.im, _QZERO)
            re_row += [a, -b]
            im_row += [b, a]
        rows.append(tuple(re_row))
        rows.append(tuple(im_row))
    return Matrix(2 * m.nrows, 2 * m.ncols, tuple(rows))


def complement_basis(big: Subspace, small: Subspace) -> list[Vector]:
    """Vectors of ``big``'s canonical basis that, together with ``small``,
    span ``big``. Deterministic: scans ``big.vectors`` in order."""
    _check_ambient(big, small)
    if not small.issubspace(big):
        raise ContainmentError("complement_basis requires small <= big")
    chosen: list[Vector] = []
    current = small
    for v in big.vectors:
        if len(chosen) == big.dim - small.dim:
            break
        if not current.contains(v):
            chosen.append(v)
            current = Subspace.span(current.vectors + (v,), big.ambient_dim)
    return chosen


def solve(m: Matrix, b: Sequence) -> Vector | None:
    """One solution ``x`` of ``m x = b``, or ``None`` if the system is inconsistent."""
    if len(b) != m.nrows:
        raise DimensionError("right-hand side length does not match row count")
    aug = [tuple(row) + (bi,) for row, bi in zip(m.entries, b)]
    rows, pivots = _echelon(aug, m.ncols + 1)
    if pivots and pivots[-1] == m.ncols:
        return None
    x = [ZERO] * m.ncols
    for row, p in zip(rows, pivots):
        x[p] = row[m.ncols]
    return tuple(x)

