"""Cohomology dimensions of an invariant complex model.

Every number here is ``dim big - dim small`` for two explicit subspaces,
computed with :func:`~bottchern.linalg.quotient_dim` so that a wrong
containment fails loudly instead of producing a plausible count.
Out-of-range bidegrees are the zero space.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Callable

from .bicomplex import (
    ComplexModel,
    Form,
    basis_size,
    conjugate_form,
    enumerate_basis,
    operator_matrix,
    total_basis,
    validate_model,
)
from .exactnum import I, ONE, ZERO, GaussianRational
from .linalg import (
    Matrix,
    Subspace,
    complement_basis,
    image,
    kernel,
    preimage,
    quotient_dim,
    realify_matrix,
    solve,
    subspace_intersect,
    subspace_sum,
)


class InvalidModelError(ValueError):
    """Raised when cohomology is requested for a model failing validation."""

    def __init__(self, report):
        super().__init__(str(report))
        self.report = report


def _require_valid(m: ComplexModel) -> None:
    if "valid" not in m._cache:
        m._cache["valid"] = validate_model(m)
    report = m._cache["valid"]
    if not report.valid:
        raise InvalidModelError(report)


def _memo(m: ComplexModel, key: tuple, fn: Callable):
    cache = m._cache
    if key not in cache:
        cache[key] = fn()
    return cache[key]


def _in_range(m: ComplexModel, p: int, q: int) -> bool:
    return 0 <= p <= m.n and 0 <= q <= m.n


def _dim(m, p, q) -> int:
    return basis_size(m.n, p, q)


def ker(m: ComplexModel, which: str, p: int, q: int) -> Subspace:
    """Kernel of ``which`` on the (p,q)-forms."""
    def build():
        if not _in_range(m, p, q):
            return Subspace.zero(0)
        mat = operator_matrix(m, which, p, q)
        if mat.nrows == 0:
            return Subspace.full(mat.ncols)
        return kernel(mat)
    return _memo(m, ("ker", which, p, q), build)


_SOURCE = {"del": (1, 0), "delbar": (0, 1), "deldelbar": (1, 1)}


def im(m: ComplexModel, which: str, p: int, q: int) -> Subspace:
    """Image of ``which`` *inside* the (p,q)-forms."""
    def build():
        if not _in_range(m, p, q):
            return Subspace.zero(0)
        dp, dq = _SOURCE[which]
        sp, sq = p - dp, q - dq
        if not _in_range(m, sp, sq):
            return Subspace.zero(_dim(m, p, q))
        return image(operator_matrix(m, which, sp, sq))
    return _memo(m, ("im", which, p, q), build)


def _full(m, p, q) -> Subspace:
    return Subspace.full(_dim(m, p, q))


def d_closed(m, p, q) -> Subspace:
    return _memo(m, ("dclosed", p, q), lambda: subspace_intersect(ker(m, "del", p, q), ker(m, "delbar", p, q)))


def _aeppli_denominator(m, p, q) -> Subspace:
    return _memo(m, ("W", p, q), lambda: subspace_sum(im(m, "del", p, q), im(m, "delbar", p, q)))


# -- Dolbeault -------------------------------------------------------------------

@dataclass
class DolbeaultData:
    grid: list
    cycles: dict      # (p,q) -> ker delbar
    boundaries: dict  # (p,q) -> im delbar


def _grid(m: ComplexModel, cell: Callable[[int, int], int]) -> list:
    return [[cell(p, q) for q in range(m.n + 1)] for p in range(m.n + 1)]


def dolbeault_dims(m: ComplexModel) -> DolbeaultData:
    _require_valid(m)
    cycles, boundaries = {}, {}

    def cell(p, q):
        z, b = ker(m, "delbar", p, q), im(m, "delbar", p, q)
        cycles[(p, q)], boundaries[(p, q)] = z, b
        return quotient_dim(z, b)

    grid = _grid(m, cell)
    return DolbeaultData(grid, cycles, boundaries)


def dolbeault_del_dims(m: ComplexModel) -> list:
    _require_valid(m)
    return _grid(m, lambda p, q: quotient_dim(ker(m, "del", p, q), im(m, "del", p, q)))


def bott_chern_dims(m: ComplexModel) -> list:
    _require_valid(m)
    return _grid(m, lambda p, q: quotient_dim(d_closed(m, p, q), im(m, "deldelbar", p, q)))


def aeppli_dims(m: ComplexModel) -> list:
    _require_valid(m)
    return _grid(m, lambda p, q: quotient_dim(ker(m, "deldelbar", p, q), _aeppli_denominator(m, p, q)))


def k_dims(m: ComplexModel) -> list:
    _require_valid(m)

    def cell(p, q):
        a = subspace_intersect(im(m, "del", p, q), ker(m, "delbar", p, q))
        b = subspace_intersect(im(m, "delbar", p, q), ker(m, "del", p, q))
        return quotient_dim(d_closed(m, p, q), subspace_sum(a, b))

    return _grid(m, cell)


def de_rham_dims(m: ComplexModel) -> list:
    """Betti numbers b^0 .. b^{2n} of the total complex with d = del + delbar."""
    _require_valid(m)
    out = []
    for k in range(2 * m.n + 1):
        size = len(total_basis(m.n, k))
        dk = operator_matrix(m, "d", k)
        z = kernel(dk) if dk.nrows else Subspace.full(size)
        b = image(operator_matrix(m, "d", k - 1)) if k >= 1 else Subspace.zero(size)
        out.append(quotient_dim(z, b))
    return out


# -- Froelicher E2 ---------------------------------------------------------------

def dolbeault_representatives(m: ComplexModel, p: int, q: int) -> list:
    """Representatives of a basis of the (p,q) Dolbeault group: the canonical
    basis vectors of ker(delbar) that complete im(delbar)."""
    if not _in_range(m, p, q):
        return []
    return _memo(m, ("reps", p, q),
                 lambda: complement_basis(ker(m, "delbar", p, q), im(m, "delbar", p, q)))


def _class_coordinates(m: ComplexModel, p: int, q: int, v) -> tuple:
    """Coordinates of the Dolbeault class of the delbar-closed vector ``v``
    in the representative basis of (p,q)."""
    reps = dolbeault_representatives(m, p, q)
    bnd = im(m, "delbar", p, q).vectors
    cols = list(reps) + list(bnd)
    size = _dim(m, p, q)
    if not cols:
        return ()
    mat = Matrix(size, len(cols), tuple(tuple(c[i] for c in cols) for i in range(size)))
    x = solve(mat, v)
    if x is None:
        raise ArithmeticError(f"vector is not delbar-closed in bidegree ({p},{q})")
    return x[: len(reps)]


def induced_del_matrix(m: ComplexModel, p: int, q: int) -> Matrix:
    """Matrix of the map H^{p,q} -> H^{p+1,q} induced by del on Dolbeault classes."""
    def build():
        src = dolbeault_representatives(m, p, q)
        dst = dolbeault_representatives(m, p + 1, q)
        if not src or not dst:
            return Matrix.zeros(len(dst), len(src))
        dmat = operator_matrix(m, "del", p, q)
        cols = [_class_coordinates(m, p + 1, q, dmat.apply(r)) for r in src]
        return Matrix(len(dst), len(src), tuple(tuple(c[i] for c in cols) for i in range(len(dst))))
    return _memo(m, ("induced", p, q), build)


def frolicher_e2(m: ComplexModel) -> list:
    _require_valid(m)

    def cell(p, q):
        h = len(dolbeault_representatives(m, p, q))
        out_rank = induced_del_matrix(m, p, q).rank()
        in_rank = induced_del_matrix(m, p - 1, q).rank() if p >= 1 else 0
        return h - out_rank - in_rank

    return _grid(m, cell)


def e1_del_kernel_dims(m: ComplexModel) -> list:
    """dim ker(del: H^{p,q}_delbar -> H^{p+1,q}_delbar) from subspaces:
    dim(ker delbar ∩ del^{-1}(im delbar)) - dim(im delbar)."""
    _require_valid(m)
    return _grid(m, lambda p, q: quotient_dim(_del_closed_mod_delbar(m, p, q), im(m, "delbar", p, q)))


def _del_closed_mod_delbar(m, p, q) -> Subspace:
    def build():
        z = ker(m, "delbar", p, q)
        if p + 1 > m.n:
            return z
        pre = preimage(operator_matrix(m, "del", p, q), im(m, "delbar", p + 1, q))
        return subspace_intersect(z, pre)
    return _memo(m, ("zdel", p, q), build)


def frolicher_e2_lattice(m: ComplexModel) -> list:
    """E2 as (ker delbar ∩ del^{-1} im delbar) / (del(ker delbar) + im delbar);
    independent of the representative choice in :func:`frolicher_e2`."""
    _require_valid(m)

    def cell(p, q):
        top = _del_closed_mod_delbar(m, p, q)
        b = im(m, "delbar", p, q)
        if p >= 1:
            z_prev = ker(m, "delbar", p - 1, q)
            dmat = operator_matrix(m, "del", p - 1, q)
            pushed = Subspace.span([dmat.apply(v) for v in z_prev.vectors], _dim(m, p, q))
            b = subspace_sum(b, pushed)
        return quotient_dim(top, b)

    return _grid(m, cell)


# -- real (1,1)-classes ------------------------------------------------------------

def _conjugation_real_matrix(m: ComplexModel, basis: list) -> Matrix:
    """Q-linear matrix of conjugation on the realified span of ``basis``
    (which must be closed under conjugation)."""
    idx = {e: i for i, e in enumerate(basis)}
    size = 2 * len(basis)
    cols = []
    for e in basis:
        for part in (1, "i"):
            f = Form.basis_form(m.n, e, ONE if part == 1 else I)
            cf = conjugate_form(f)
            col = [ZERO] * size
            for g, c in cf.items():
                j = idx[g]
                col[2 * j] = GaussianRational(c.re)
                col[2 * j + 1] = GaussianRational(c.im)
            cols.append(col)
    return Matrix(size, size, tuple(tuple(cols[j][i] for j in range(size)) for i in range(size)))


def _real_part_subspace(m: ComplexModel, basis: list) -> Subspace:
    """Conjugation-fixed vectors in the realified span of ``basis``."""
    c = _conjugation_real_matrix(m, basis)
    return kernel(c - Matrix.identity(c.nrows))


def h11_real_dim(m: ComplexModel) -> int:
    """dim_R of the de Rham classes with a real d-closed (1,1) representative."""
    _require_valid(m)
    n = m.n
    tb2 = total_basis(n, 2)
    tb1 = total_basis(n, 1)
    pos = {e: i for i, e in enumerate(tb2)}
    b11 = enumerate_basis(n, 1, 1)
    # realified (1,1)-forms embedded in realified 2-forms
    emb = []
    for e in b11:
        j = pos[e]
        for k in (0, 1):
            v = [ZERO] * (2 * len(tb2))
            v[2 * j + k] = ONE
            emb.append(v)
    real_2 = _real_part_subspace(m, tb2)
    in_11 = Subspace.span(emb, 2 * len(tb2))
    d2 = realify_matrix(operator_matrix(m, "d", 2))
    closed = kernel(d2)
    z = subspace_intersect(subspace_intersect(real_2, in_11), closed)
    real_1 = _real_part_subspace(m, tb1)
    d1 = realify_matrix(operator_matrix(m, "d", 1))
    exact = Subspace.span([d1.apply(v) for v in real_1.vectors], 2 * len(tb2))
    return quotient_dim(z, subspace_intersect(z, exact))


# -- Gauduchon-type spaces -----------------------------------------------------------

def _gauduchon_numerator(m, which, p, q) -> Subspace:
    """Kernel of the Aeppli-level map: {u in ker del delbar : which(u) in im(other)}."""
    def build():
        n_space = ker(m, "deldelbar", p, q)
        if which == "del":
            tp, tq, other = p + 1, q, "delbar"
        else:
            tp, tq, other = p, q + 1, "del"
        if not _in_range(m, tp, tq):
            return n_space
        pre = preimage(operator_matrix(m, which, p, q), im(m, other, tp, tq))
        return subspace_intersect(n_space, pre)
    return _memo(m, ("gnum", which, p, q), build)


@dataclass
class GauduchonDims:
    g_del: list
    l_del: list
    g_delbar: list
    l_delbar: list


def gauduchon_dims(m: ComplexModel) -> GauduchonDims:
    _require_valid(m)

    def g(which):
        def cell(p, q):
            num = _gauduchon_numerator(m, which, p, q)
            w = _aeppli_denominator(m, p, q)
            return quotient_dim(num, subspace_sum(ker(m, which, p, q), w))
        return cell

    def l(which):
        return lambda p, q: quotient_dim(ker(m, "deldelbar", p, q), _gauduchon_numerator(m, which, p, q))

    return GauduchonDims(_grid(m, g("del")), _grid(m, l("del")), _grid(m, g("delbar")), _grid(m, l("delbar")))


def g_sqcap_dims(m: ComplexModel) -> list:
    """dim of G_del ⊓ (H_delbar / im del) inside Aeppli cohomology:
    dim((ker delbar + W) ∩ 𝒢-numerator) - dim((ker delbar + W) ∩ (ker del + W))."""
    _require_valid(m)

    def cell(p, q):
        w = _aeppli_denominator(m, p, q)
        hbar = subspace_sum(ker(m, "delbar", p, q), w)
        hdel = subspace_sum(ker(m, "del", p, q), w)
        top = subspace_intersect(hbar, _gauduchon_numerator(m, "del", p, q))
        return quotient_dim(top, subspace_intersect(hbar, hdel))

    return _grid(m, cell)


# -- the full report ---------------------------------------------------------------

@dataclass
class CohomologyReport:
    model_name: str
    n: int
    dolbeault: list
    dolbeault_del: list
    bott_chern: list
    aeppli: list
    k: list
    e2: list
    de_rham: list
    h11_real: int
    g_del: list
    l_del: list
    g_delbar: list
    l_delbar: list
    e1_del_kernel: list = field(default_factory=list)
    g_sqcap: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)


def full_report(m: ComplexModel) -> CohomologyReport:
    _require_valid(m)
    gd = gauduchon_dims(m)
    return CohomologyReport(
        model_name=m.name,
        n=m.n,
        dolbeault=dolbeault_dims(m).grid,
        dolbeault_del=dolbeault_del_dims(m),
        bott_chern=bott_chern_dims(m),
        aeppli=aeppli_dims(m),
        k=k_dims(m),
        e2=frolicher_e2(m),
        de_rham=de_rham_dims(m),
        h11_real=h11_real_dim(m),
        g_del=gd.g_del,
        l_del=gd.l_del,
        g_delbar=gd.g_delbar,
        l_delbar=gd.l_delbar,
        e1_del_kernel=e1_del_kernel_dims(m),
        g_sqcap=g_sqcap_dims(m),
    )

