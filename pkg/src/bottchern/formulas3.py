"""Closed-form Bott-Chern predictions and the identity suite.

The 3-fold table expresses every h^{p,q}_BC through Dolbeault numbers,
h^{3,1}_2, a handful of k^{p,q}, b^1 and dim_R H^{1,1}(R).
:func:`check_identities` compares such relations against a computed
:class:`~bottchern.cohomology.CohomologyReport`.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bicomplex import ComplexModel, operator_matrix
from .cohomology import CohomologyReport, full_report

UNIVERSAL = "universal"
BUILTIN_ONLY = "builtin-only"


@dataclass(frozen=True)
class TableInputs:
    dolbeault: tuple
    h31_2: int
    k10: int
    k20: int
    k30: int
    k11: int
    k12: int
    b1: int
    h11_real: int

    def __post_init__(self):
        if len(self.dolbeault) != 4 or any(len(r) != 4 for r in self.dolbeault):
            raise ValueError("the 3-fold table needs a 4x4 Dolbeault grid")
        values = [x for r in self.dolbeault for x in r]
        values += [self.h31_2, self.k10, self.k20, self.k30, self.k11, self.k12, self.b1, self.h11_real]
        if any(v < 0 for v in values):
            raise ValueError("table inputs must be nonnegative")

    @classmethod
    def from_report(cls, r: CohomologyReport) -> "TableInputs":
        if r.n != 3:
            raise ValueError(f"the closed-form table is for n = 3, got n = {r.n}")
        return cls(
            dolbeault=tuple(tuple(row) for row in r.dolbeault),
            h31_2=r.e2[3][1],
            k10=r.k[1][0],
            k20=r.k[2][0],
            k30=r.k[3][0],
            k11=r.k[1][1],
            k12=r.k[1][2],
            b1=r.de_rham[1],
            h11_real=r.h11_real,
        )


def predict_bc_table(t: TableInputs) -> list:
    """The 4x4 Bott-Chern grid of a compact complex 3-fold. Negative
    entries are returned unchanged; callers treat them as a mismatch."""
    h = t.dolbeault
    g = [[0] * 4 for _ in range(4)]
    g[0][0] = g[3][3] = 1
    g[0][1] = g[1][0] = t.k10
    g[0][2] = g[2][0] = h[2][0]
    g[0][3] = g[3][0] = t.k30
    g[1][1] = 2 * h[0][1] - t.b1 + t.h11_real
    g[1][2] = g[2][1] = h[1][2] + t.h31_2 - t.k20
    g[1][3] = g[3][1] = h[0][2]
    g[2][3] = g[3][2] = h[0][1] + h[2][0] - t.k20
    g[2][2] = (
        -h[0][1] - h[0][2] - h[1][0] + h[1][1] + h[1][2] + h[2][0]
        + 2 * t.h31_2 + t.k11 - t.k12 - 2 * t.k20 + t.b1 - t.h11_real
    )
    return g


def predict_hp0_bc(n: int, h_row, e2_row) -> list:
    """h^{p,0}_BC for p = 0..n from h^{j,0} and h^{j,0}_2."""
    if len(h_row) != n + 1 or len(e2_row) != n + 1:
        raise ValueError("rows must have n + 1 entries")
    if h_row[0] != 1 or e2_row[0] != 1:
        raise ValueError("expected h^{0,0} = h^{0,0}_2 = 1 (compact connected case)")
    out = []
    for p in range(n + 1):
        s = sum((-1) ** (p + j) * (h_row[j] - e2_row[j]) for j in range(1, p + 1))
        out.append(h_row[p] - s)
    return out


def predict_hn_recursion(n: int, dolbeault, k, h_a_edge) -> list:
    """h^{n,q}_BC for q = 1..n.

    ``h_a_edge[l]`` is h^{n,l}_A for l = 0..n. The seed is h^{n,1}_BC = h^{n,1};
    each further value adds the alternating defect of the earlier columns.
    """
    bc = {1: dolbeault[n][1]}
    for q in range(1, n):
        s = 0
        for l in range(1, q + 1):
            s += (-1) ** (q + l) * (bc[l] - (dolbeault[n][l] + k[n][l]) + h_a_edge[l])
        bc[q + 1] = dolbeault[n][q + 1] + s
    return [bc[q] for q in range(1, n + 1)]


# -- identity suite ----------------------------------------------------------------

@dataclass(frozen=True)
class IdentityOutcome:
    name: str
    tier: str
    status: str
    lhs: int
    rhs: int

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def __str__(self) -> str:
        rel = "=" if self.passed else "!="
        return f"[{self.status}] ({self.tier}) {self.name}: {self.lhs} {rel} {self.rhs}"


def _outcome(name: str, tier: str, lhs: int, rhs: int) -> IdentityOutcome:
    return IdentityOutcome(name, tier, "pass" if lhs == rhs else "fail", lhs, rhs)


def _getter(grid, n):
    def get(p, q):
        return grid[p][q] if 0 <= p <= n and 0 <= q <= n else 0
    return get


def check_identities(r: CohomologyReport) -> list:
    """Evaluate every dimension identity on ``r``, tagged by tier."""
    n = r.n
    bc, a, h = _getter(r.bott_chern, n), _getter(r.aeppli, n), _getter(r.dolbeault, n)
    hd, k = _getter(r.dolbeault_del, n), _getter(r.k, n)
    gd, ld = _getter(r.g_del, n), _getter(r.l_del, n)
    gb, lb = _getter(r.g_delbar, n), _getter(r.l_delbar, n)
    out: list[IdentityOutcome] = []
    U, B = UNIVERSAL, BUILTIN_ONLY
    cells = [(p, q) for p in range(n + 1) for q in range(n + 1)]

    for p, q in cells:
        if p < q:
            out.append(_outcome(f"h^{{{p},{q}}}_BC = h^{{{q},{p}}}_BC", U, bc(p, q), bc(q, p)))
            out.append(_outcome(f"h^{{{p},{q}}}_A = h^{{{q},{p}}}_A", U, a(p, q), a(q, p)))
            out.append(_outcome(f"k^{{{p},{q}}} = k^{{{q},{p}}}", U, k(p, q), k(q, p)))
        out.append(_outcome(f"h^{{{p},{q}}}_del = h^{{{q},{p}}}_delbar", U, hd(p, q), h(q, p)))
    for p, q in cells:
        bound = min(h(p, q), hd(p, q), bc(p, q), a(p, q))
        out.append(_outcome(f"k^{{{p},{q}}} <= min(h, h_del, h_BC, h_A)", U, min(k(p, q), bound), k(p, q)))
    for p in range(n + 1):
        s = sum((-1) ** q * (bc(p, q) - (h(p, q) + k(p, q)) + a(p, q)) for q in range(n + 1))
        out.append(_outcome(f"Euler sum, p = {p}", U, s, 0))
    if r.e1_del_kernel and r.g_sqcap:
        ek, gs = _getter(r.e1_del_kernel, n), _getter(r.g_sqcap, n)
        for p, q in cells:
            out.append(_outcome(
                f"dim ker(del on H^{{{p},{q}}}_delbar) = g-part + k + l^{{{p - 1},{q}}}_del",
                U, ek(p, q), gs(p, q) + k(p, q) + ld(p - 1, q)))
    for p, q in cells:
        out.append(_outcome(f"h^{{{p},{q}}}_BC via G/L_delbar", U,
                            bc(p, q), gb(p, q - 1) + lb(p, q - 1) + ld(p - 1, q) + k(p, q)))
        out.append(_outcome(f"h^{{{p},{q}}}_BC via G/L_del", U,
                            bc(p, q), gd(p - 1, q) + ld(p - 1, q) + lb(p, q - 1) + k(p, q)))
        out.append(_outcome(f"h^{{{p},{q}}}_A via H_delbar", U,
                            a(p, q), h(p, q) - ld(p - 1, q) + gb(p, q) + lb(p, q)))
        out.append(_outcome(f"h^{{{p},{q}}}_A via H_del", U,
                            a(p, q), hd(p, q) - lb(p, q - 1) + gd(p, q) + ld(p, q)))
    for p, q in cells:
        if q >= 1 and p + 1 <= n:
            out.append(_outcome(f"g^{{{p},{q}}}_del = g^{{{p + 1},{q - 1}}}_delbar", U, gd(p, q), gb(p + 1, q - 1)))
        out.append(_outcome(f"g^{{{p},{q}}}_del = g^{{{q},{p}}}_delbar", U, gd(p, q), gb(q, p)))
        out.append(_outcome(f"l^{{{p},{q}}}_del = l^{{{q},{p}}}_delbar", U, ld(p, q), lb(q, p)))

    # compact-manifold facts: hold for unimodular models, not for every bicomplex
    for p, q in cells:
        out.append(_outcome(f"h^{{{p},{q}}}_A = h^{{{n - p},{n - q}}}_BC", B, a(p, q), bc(n - p, n - q)))
        if (p, q) < (n - p, n - q):
            out.append(_outcome(f"h^{{{p},{q}}} = h^{{{n - p},{n - q}}}", B, h(p, q), h(n - p, n - q)))
            out.append(_outcome(f"k^{{{p},{q}}} = k^{{{n - p},{n - q}}}", B, k(p, q), k(n - p, n - q)))
    if n >= 2:
        out.append(_outcome(f"h^{{{n - 1},0}}_BC = h^{{{n - 1},0}}", B, bc(n - 1, 0), h(n - 1, 0)))
    out.append(_outcome(f"h^{{{n},0}}_BC = h^{{{n},0}}", B, bc(n, 0), h(n, 0)))
    out.append(_outcome(f"h^{{{n},0}} = k^{{{n},0}}", B, h(n, 0), k(n, 0)))
    out.append(_outcome("h^{0,1}_BC = k^{0,1}", B, bc(0, 1), k(0, 1)))
    out.append(_outcome(f"h^{{{n},1}}_BC = h^{{{n},1}}", B, bc(n, 1), h(n, 1)))
    h_row = [h(p, 0) for p in range(n + 1)]
    e2_row = [r.e2[p][0] for p in range(n + 1)]
    if h_row[0] == 1 and e2_row[0] == 1:
        pred = predict_hp0_bc(n, h_row, e2_row)
        for p in range(n + 1):
            out.append(_outcome(f"h^{{{p},0}}_BC edge formula", B, pred[p], bc(p, 0)))
        edge_a = [pred[n - l] for l in range(n + 1)]
        rec = predict_hn_recursion(n, r.dolbeault, r.k, edge_a)
        for q in range(1, n + 1):
            out.append(_outcome(f"h^{{{n},{q}}}_BC recursion", B, rec[q - 1], bc(n, q)))
    for p in range(n - 1):
        for q in range(n + 1):
            out.append(_outcome(f"l^{{{n - p - 2},{n - q}}}_del duality", B,
                                ld(n - p - 2, n - q), h(p + 1, q) - ld(p, q) - k(p + 1, q)))
    if n == 3:
        out.append(_outcome("g^{2,1}_del = 0", B, gd(2, 1), 0))
    if n >= 2:
        out.append(_outcome(f"l^{{{n - 1},0}}_del = 0", B, ld(n - 1, 0), 0))
        out.append(_outcome(f"k^{{{n},{n - 1}}} = k^{{1,0}}", B, k(n, n - 1), k(1, 0)))
    for p in range(n + 1):
        lhs = sum((-1) ** q * (bc(p, q) + bc(n - p, n - q) - k(p, q)) for q in range(n + 1))
        rhs = sum((-1) ** q * h(p, q) for q in range(n + 1))
        out.append(_outcome(f"alternating BC/k sum = chi(Omega^{p}), p = {p}", B, lhs, rhs))
    return out


def compare_bc_table(r: CohomologyReport) -> list:
    """Predicted-vs-direct outcomes for all 16 cells (n = 3 only)."""
    pred = predict_bc_table(TableInputs.from_report(r))
    out = []
    for p in range(4):
        for q in range(4):
            out.append(_outcome(f"h^{{{p},{q}}}_BC predicted", BUILTIN_ONLY, pred[p][q], r.bott_chern[p][q]))
    return out


def table_line(o: IdentityOutcome) -> str:
    """``h^{2,2}_BC predicted 6 = direct 6`` style line."""
    rel = "=" if o.passed else "!="
    return f"{o.name} {o.lhs} {rel} direct {o.rhs}"


def matrix_identities(m: ComplexModel) -> list:
    """del^2, delbar^2, anticommutator and d^2 as matrix identities."""
    n = m.n
    out = []

    def zero(name, mat):
        bad = 0 if mat.is_zero() else 1
        out.append(IdentityOutcome(name, UNIVERSAL, "pass" if not bad else "fail", bad, 0))

    for p in range(n + 1):
        for q in range(n + 1):
            if p + 2 <= n:
                zero(f"del^2 = 0 on ({p},{q})",
                     operator_matrix(m, "del", p + 1, q) @ operator_matrix(m, "del", p, q))
            if q + 2 <= n:
                zero(f"delbar^2 = 0 on ({p},{q})",
                     operator_matrix(m, "delbar", p, q + 1) @ operator_matrix(m, "delbar", p, q))
            if p + 1 <= n and q + 1 <= n:
                zero(f"del delbar + delbar del = 0 on ({p},{q})",
                     operator_matrix(m, "del", p, q + 1) @ operator_matrix(m, "delbar", p, q)
                     + operator_matrix(m, "delbar", p + 1, q) @ operator_matrix(m, "del", p, q))
    for deg in range(2 * n - 1):
        zero(f"d^2 = 0 on degree {deg}", operator_matrix(m, "d", deg + 1) @ operator_matrix(m, "d", deg))
    return out


@dataclass
class Verification:
    model_name: str
    report: CohomologyReport
    identities: list
    table: list

    def failures(self, strict: bool = True) -> list:
        items = self.identities + self.table
        return [o for o in items if not o.passed and (strict or o.tier == UNIVERSAL)]


def verify_model(m: ComplexModel, report: CohomologyReport | None = None) -> Verification:
    r = report if report is not None else full_report(m)
    ids = matrix_identities(m) + check_identities(r)
    table = compare_bc_table(r) if r.n == 3 else []
    return Verification(m.name, r, ids, table)
