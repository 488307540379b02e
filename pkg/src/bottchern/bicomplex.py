"""The bigraded exterior algebra of an invariant-form model.

A model on ``n`` generators is given by the structure equations
``d phi^i = del_phi[i] + delbar_phi[i]`` with ``del_phi[i]`` of type (2,0) and
``delbar_phi[i]`` of type (1,1). There is no (0,2) slot, so the complex
structure is integrable by construction; what remains to check is d^2 = 0.

Basis elements ``phi^I ^ bar(phi)^J`` are written with both index lists
ascending, holomorphic factors first.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Iterable, Mapping, NamedTuple, Sequence

from .exactnum import ONE, ZERO, GaussianRational, Scalar
from .linalg import Matrix


class FormBasisElement(NamedTuple):
    holo: tuple
    anti: tuple

    @property
    def bidegree(self) -> tuple[int, int]:
        return (len(self.holo), len(self.anti))

    @property
    def degree(self) -> int:
        return len(self.holo) + len(self.anti)

    def __str__(self) -> str:
        parts = [f"phi{i}" for i in self.holo] + [f"bar{j}" for j in self.anti]
        return "^".join(parts) if parts else "1"


def enumerate_basis(n: int, p: int, q: int) -> list[FormBasisElement]:
    """Basis of the (p,q)-forms in coordinate order (lexicographic in (holo, anti))."""
    if not (0 <= p <= n and 0 <= q <= n):
        return []
    gens = range(1, n + 1)
    return [FormBasisElement(h, a) for h in combinations(gens, p) for a in combinations(gens, q)]


def total_basis(n: int, k: int) -> list[FormBasisElement]:
    """Basis of the k-forms: the (p, k-p) blocks in order of increasing p."""
    out: list[FormBasisElement] = []
    for p in range(0, k + 1):
        out += enumerate_basis(n, p, k - p)
    return out


def _index(basis: Sequence[FormBasisElement]) -> dict:
    return {e: i for i, e in enumerate(basis)}


def _sort_sign(letters: list) -> tuple[int, tuple | None]:
    """Sign of the permutation sorting ``letters``; ``None`` on a repeat."""
    if len(set(letters)) != len(letters):
        return 0, None
    sign = 1
    arr = list(letters)
    # insertion sort, counting transpositions
    for i in range(1, len(arr)):
        j = i
        while j > 0 and arr[j - 1] > arr[j]:
            arr[j - 1], arr[j] = arr[j], arr[j - 1]
            sign = -sign
            j -= 1
    return sign, tuple(arr)


def _letters(e: FormBasisElement) -> list:
    return [(0, i) for i in e.holo] + [(1, j) for j in e.anti]


def _from_letters(letters: Iterable) -> FormBasisElement:
    holo = tuple(i for kind, i in letters if kind == 0)
    anti = tuple(i for kind, i in letters if kind == 1)
    return FormBasisElement(holo, anti)


class Form:
    """A finite linear combination of basis elements with Q(i) coefficients.

    Forms may mix bidegrees (needed for ``d`` and for real 2-forms). Zero
    coefficients are never stored.
    """

    __slots__ = ("n", "_terms", "_hash")

    def __init__(self, n: int, terms: Mapping[FormBasisElement, Scalar] | None = None):
        self.n = n
        clean = {}
        for e, c in (terms or {}).items():
            e = FormBasisElement(tuple(e[0]), tuple(e[1]))
            for idx in e.holo + e.anti:
                if not 1 <= idx <= n:
                    raise ValueError(f"generator index {idx} outside 1..{n}")
            sign, srt = _sort_sign(_letters(e))
            if srt is None:
                continue
            c = GaussianRational.coerce(c)
            if sign < 0:
                c = -c
            key = _from_letters(srt)
            total = clean.get(key, ZERO) + c
            if total:
                clean[key] = total
            else:
                clean.pop(key, None)
        self._terms = clean
        self._hash = None

    # -- constructors -------------------------------------------------------
    @classmethod
    def zero(cls, n: int) -> "Form":
        return cls(n)

    @classmethod
    def one(cls, n: int) -> "Form":
        return cls(n, {FormBasisElement((), ()): ONE})

    @classmethod
    def phi(cls, n: int, i: int) -> "Form":
        return cls(n, {FormBasisElement((i,), ()): ONE})

    @classmethod
    def bar(cls, n: int, j: int) -> "Form":
        return cls(n, {FormBasisElement((), (j,)): ONE})

    @classmethod
    def basis_form(cls, n: int, e: FormBasisElement, coeff: Scalar = ONE) -> "Form":
        return cls(n, {e: coeff})

    @classmethod
    def from_vector(cls, n: int, basis: Sequence[FormBasisElement], vec: Sequence) -> "Form":
        return cls(n, {e: c for e, c in zip(basis, vec) if c})

    # -- accessors -------------------------------------------------------------
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coefficient(self, e: FormBasisElement) -> GaussianRational:
        return self._terms.get(e, ZERO)

    def bidegrees(self) -> set:
        return {e.bidegree for e in self._terms}

    def bidegree(self) -> tuple[int, int] | None:
        """The common bidegree, or ``None`` for zero or mixed forms."""
        degs = self.bidegrees()
        return degs.pop() if len(degs) == 1 else None

    def component(self, p: int, q: int) -> "Form":
        return Form(self.n, {e: c for e, c in self._terms.items() if e.bidegree == (p, q)})

    def to_vector(self, basis: Sequence[FormBasisElement]) -> tuple:
        idx = _index(basis)
        vec = [ZERO] * len(basis)
        for e, c in self._terms.items():
            if e not in idx:
                raise ValueError(f"{e} is not in the supplied basis")
            vec[idx[e]] = c
        return tuple(vec)

    def __bool__(self) -> bool:
        return bool(self._terms)

    # -- arithmetic ---------------------------------------------------------------
    def _check(self, other: "Form") -> None:
        if self.n != other.n:
            raise ValueError(f"forms on {self.n} and {other.n} generators")

    def __add__(self, other: "Form") -> "Form":
        self._check(other)
        t = dict(self._terms)
        for e, c in other._terms.items():
            s = t.get(e, ZERO) + c
            if s:
                t[e] = s
            else:
                t.pop(e, None)
        return Form._of(self.n, t)

    def __neg__(self) -> "Form":
        return Form._of(self.n, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other: "Form") -> "Form":
        return self + (-other)

    def scale(self, c: Scalar) -> "Form":
        c = GaussianRational.coerce(c)
        if not c:
            return Form(self.n)
        return Form._of(self.n, {e: c * x for e, x in self._terms.items()})

    def __rmul__(self, c: Scalar) -> "Form":
        return self.scale(c)

    def __xor__(self, other: "Form") -> "Form":
        return wedge(self, other)

    @classmethod
    def _of(cls, n: int, canonical_terms: dict) -> "Form":
        obj = cls.__new__(cls)
        obj.n = n
        obj._terms = canonical_terms
        obj._hash = None
        return obj

    def __eq__(self, other) -> bool:
        if not isinstance(other, Form):
            return NotImplemented
        return self.n == other.n and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self._terms.items())))
        return self._hash

    def sorted_terms(self) -> list:
        return sorted(self._terms.items(), key=lambda kv: (kv[0].degree, -len(kv[0].holo), kv[0]))

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        return " + ".join(f"({c})*{e}" for e, c in self.sorted_terms())


def _wedge_basis(a: FormBasisElement, b: FormBasisElement) -> tuple[int, FormBasisElement | None]:
    sign, srt = _sort_sign(_letters(a) + _letters(b))
    if srt is None:
        return 0, None
    return sign, _from_letters(srt)


def wedge(a: Form, b: Form) -> Form:
    """Graded-commutative exterior product."""
    a._check(b)
    out: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            sign, e = _wedge_basis(ea, eb)
            if e is None:
                continue
            c = ca * cb
            if sign < 0:
                c = -c
            s = out.get(e, ZERO) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
    return Form._of(a.n, out)


def _conj_basis(e: FormBasisElement) -> tuple[int, FormBasisElement]:
    # conj(phi^I ^ bar^J) = bar^I ^ phi^J = (-1)^{|I||J|} phi^J ^ bar^I
    sign = -1 if (len(e.holo) * len(e.anti)) % 2 else 1
    return sign, FormBasisElement(e.anti, e.holo)


def conjugate_form(a: Form) -> Form:
    out = {}
    for e, c in a.items():
        sign, ce = _conj_basis(e)
        c = c.conj()
        out[ce] = -c if sign < 0 else c
    return Form._of(a.n, out)


@dataclass(frozen=True, eq=False)
class ComplexModel:
    """Structure equations of an invariant complex model.

    ``del_phi[i-1]`` is the (2,0)-part and ``delbar_phi[i-1]`` the
    (1,1)-part of ``d phi^i``.
    """

    name: str
    n: int
    del_phi: tuple
    delbar_phi: tuple
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("a model needs at least one generator")
        if len(self.del_phi) != self.n or len(self.delbar_phi) != self.n:
            raise ValueError("one structure equation per generator is required")
        for i, (f20, f11) in enumerate(zip(self.del_phi, self.delbar_phi), start=1):
            if f20.n != self.n or f11.n != self.n:
                raise ValueError(f"d phi{i}: form has the wrong generator count")
            if f20 and f20.bidegrees() != {(2, 0)}:
                raise ValueError(f"d phi{i}: holomorphic part must be of type (2,0)")
            if f11 and f11.bidegrees() != {(1, 1)}:
                raise ValueError(f"d phi{i}: mixed part must be of type (1,1)")

    @classmethod
    def from_differentials(cls, name: str, n: int, d_phi: Sequence[Form]) -> "ComplexModel":
        """Build from full ``d phi^i``; rejects any (0,2)-component."""
        del_phi, delbar_phi = [], []
        for i, f in enumerate(d_phi, start=1):
            bad = f.bidegrees() - {(2, 0), (1, 1)}
            if bad:
                raise ValueError(f"d phi{i} has components of type {sorted(bad)}; only (2,0) and (1,1) are allowed")
            del_phi.append(f.component(2, 0))
            delbar_phi.append(f.component(1, 1))
        return cls(name, n, tuple(del_phi), tuple(delbar_phi))

    def d_phi(self, i: int) -> Form:
        return self.del_phi[i - 1] + self.delbar_phi[i - 1]

    def __eq__(self, other) -> bool:
        if not isinstance(other, ComplexModel):
            return NotImplemented
        return (self.name, self.n, self.del_phi, self.delbar_phi) == (
            other.name, other.n, other.del_phi, other.delbar_phi)

    def __hash__(self) -> int:
        return hash((self.name, self.n, self.del_phi, self.delbar_phi))

    def same_structure(self, other: "ComplexModel") -> bool:
        """Equality ignoring the name."""
        return (self.n, self.del_phi, self.delbar_phi) == (other.n, other.del_phi, other.delbar_phi)


def _letter_images(m: ComplexModel, which: str) -> dict:
    """Image of each degree-one letter under del or delbar."""
    key = ("letters", which)
    if key not in m._cache:
        imgs = {}
        for i in range(1, m.n + 1):
            if which == "del":
                imgs[(0, i)] = m.del_phi[i - 1]
                imgs[(1, i)] = conjugate_form(m.delbar_phi[i - 1])
            else:
                imgs[(0, i)] = m.delbar_phi[i - 1]
                imgs[(1, i)] = conjugate_form(m.del_phi[i - 1])
        m._cache[key] = imgs
    return m._cache[key]


def _apply_basis(m: ComplexModel, which: str, e: FormBasisElement) -> Form:
    key = ("basis", which, e)
    cache = m._cache
    if key in cache:
        return cache[key]
    imgs = _letter_images(m, which)
    letters = _letters(e)
    n = m.n
    result = Form(n)
    for pos, letter in enumerate(letters):
        img = imgs[letter]
        if not img:
            continue
        prefix = Form.basis_form(n, _from_letters(letters[:pos]))
        suffix = Form.basis_form(n, _from_letters(letters[pos + 1:]))
        term = wedge(wedge(prefix, img), suffix)
        result = result - term if pos % 2 else result + term
    cache[key] = result
    return result


def _apply(m: ComplexModel, which: str, a: Form) -> Form:
    if a.n != m.n:
        raise ValueError(f"form on {a.n} generators, model has {m.n}")
    out = Form(m.n)
    for e, c in a.items():
        img = _apply_basis(m, which, e)
        if img:
            out = out + img.scale(c)
    return out


def apply_del(m: ComplexModel, a: Form) -> Form:
    return _apply(m, "del", a)


def apply_delbar(m: ComplexModel, a: Form) -> Form:
    return _apply(m, "delbar", a)


def apply_d(m: ComplexModel, a: Form) -> Form:
    return apply_del(m, a) + apply_delbar(m, a)


_OPERATORS = ("del", "delbar", "d", "deldelbar")


def operator_matrix(m: ComplexModel, which: str, p: int, q: int | None = None) -> Matrix:
    """Coordinate matrix of an operator.

    ``del``, ``delbar`` and ``deldelbar`` act on the (p,q)-forms. For ``d``
    pass the total degree as ``p`` and leave ``q`` unset; rows and columns
    follow :func:`total_basis`.
    """
    if which not in _OPERATORS:
        raise ValueError(f"unknown operator {which!r}; expected one of {_OPERATORS}")
    if which == "d":
        if q is not None:
            raise ValueError("the d matrix is indexed by total degree only")
        key = ("matrix", "d", p)
        if key not in m._cache:
            m._cache[key] = _basis_matrix(m, "d", total_basis(m.n, p), total_basis(m.n, p + 1))
        return m._cache[key]
    if q is None:
        raise ValueError(f"{which} needs a bidegree (p, q)")
    key = ("matrix", which, p, q)
    if key in m._cache:
        return m._cache[key]
    if which == "deldelbar":
        mat = operator_matrix(m, "del", p, q + 1) @ operator_matrix(m, "delbar", p, q)
    else:
        dp, dq = (1, 0) if which == "del" else (0, 1)
        mat = _basis_matrix(m, which, enumerate_basis(m.n, p, q), enumerate_basis(m.n, p + dp, q + dq))
    m._cache[key] = mat
    return mat


def _basis_matrix(m: ComplexModel, which: str, src: list, dst: list) -> Matrix:
    idx = _index(dst)
    cols = []
    for e in src:
        if which == "d":
            img = _apply_basis(m, "del", e) + _apply_basis(m, "delbar", e)
        else:
            img = _apply_basis(m, which, e)
        col = [ZERO] * len(dst)
        for f, c in img.items():
            col[idx[f]] = c
        cols.append(col)
    rows = tuple(tuple(cols[j][i] for j in range(len(src))) for i in range(len(dst)))
    return Matrix(len(dst), len(src), rows)


def basis_size(n: int, p: int, q: int) -> int:
    if not (0 <= p <= n and 0 <= q <= n):
        return 0
    return comb(n, p) * comb(n, q)


@dataclass
class ValidationReport:
    model_name: str
    violations: list = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.valid

    def __str__(self) -> str:
        if self.valid:
            return f"{self.model_name}: valid"
        return f"{self.model_name}: invalid\n" + "\n".join(f"  {v}" for v in self.violations)


def validate_model(m: ComplexModel) -> ValidationReport:
    """Check del^2 = 0, delbar^2 = 0 and del delbar + delbar del = 0 as
    matrix identities in every bidegree."""
    report = ValidationReport(m.name)
    n = m.n
    for p in range(n + 1):
        for q in range(n + 1):
            if p + 2 <= n:
                if not (operator_matrix(m, "del", p + 1, q) @ operator_matrix(m, "del", p, q)).is_zero():
                    report.violations.append(f"del^2 != 0 on ({p},{q})-forms")
            if q + 2 <= n:
                if not (operator_matrix(m, "delbar", p, q + 1) @ operator_matrix(m, "delbar", p, q)).is_zero():
                    report.violations.append(f"delbar^2 != 0 on ({p},{q})-forms")
            if p + 1 <= n and q + 1 <= n:
                a = operator_matrix(m, "del", p, q + 1) @ operator_matrix(m, "delbar", p, q)
                b = operator_matrix(m, "delbar", p + 1, q) @ operator_matrix(m, "del", p, q)
                if not (a + b).is_zero():
                    report.violations.append(f"del delbar + delbar del != 0 on ({p},{q})-forms")
    return report
