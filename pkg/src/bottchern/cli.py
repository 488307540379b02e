"""``bottchern`` command line: compute, verify, validate, list.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 invalid model.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from .bicomplex import ComplexModel
from .cohomology import CohomologyReport
from .formulas3 import BUILTIN_ONLY, Verification, table_line, verify_model
from .modelio import BUILTIN_NAMES, ModelParseError, ModelValidationError, builtin_model, load_model_file

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_USAGE = 2
EXIT_INVALID = 3

GRIDS = (
    ("dolbeault", "h^{p,q}_delbar (Dolbeault)"),
    ("bott_chern", "h^{p,q}_BC (Bott-Chern)"),
    ("aeppli", "h^{p,q}_A (Aeppli)"),
    ("k", "k^{p,q}"),
    ("e2", "h^{p,q}_2 (Frolicher E2)"),
    ("g_del", "g^{p,q}_del"),
    ("l_del", "l^{p,q}_del"),
    ("g_delbar", "g^{p,q}_delbar"),
    ("l_delbar", "l^{p,q}_delbar"),
)


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    model_selector: str | None = None
    format: str = "md"
    strict: bool = False
    out: str | None = None


@dataclass(frozen=True)
class ResolvedModel:
    model: ComplexModel
    builtin: bool


def resolve(selector: str, allow_all: bool) -> list[ResolvedModel]:
    """Turn ``-m`` into models. Unknown names raise :class:`UsageError`;
    malformed files raise the model errors."""
    if selector == "all":
        if not allow_all:
            raise UsageError("'all' is only accepted by compute and verify")
        return [ResolvedModel(builtin_model(name), True) for name in BUILTIN_NAMES]
    if selector in BUILTIN_NAMES:
        return [ResolvedModel(builtin_model(selector), True)]
    path = Path(selector)
    if path.is_file():
        return [ResolvedModel(load_model_file(path), False)]
    raise UsageError(
        f"{selector!r} is neither a built-in model nor a readable file; built-ins: {', '.join(BUILTIN_NAMES)}"
    )


# -- rendering ------------------------------------------------------------------------

def _identity_dicts(v: Verification) -> list:
    return [
        {"name": o.name, "tier": o.tier, "status": o.status, "lhs": o.lhs, "rhs": o.rhs}
        for o in v.identities + v.table
    ]


def report_json(v: Verification) -> dict:
    r = v.report
    return {
        "model": r.model_name,
        "n": r.n,
        "dolbeault": r.dolbeault,
        "bott_chern": r.bott_chern,
        "aeppli": r.aeppli,
        "k": r.k,
        "e2": r.e2,
        "de_rham": r.de_rham,
        "h11_real": r.h11_real,
        "g_del": r.g_del,
        "l_del": r.l_del,
        "g_delbar": r.g_delbar,
        "l_delbar": r.l_delbar,
        "identities": _identity_dicts(v),
    }


def _md_grid(title: str, grid: list) -> list[str]:
    n = len(grid) - 1
    lines = [f"### {title}", ""]
    lines.append("| p \\ q | " + " | ".join(f"q={q}" for q in range(n + 1)) + " |")
    lines.append("|---" * (n + 2) + "|")
    for p, row in enumerate(grid):
        lines.append(f"| p={p} | " + " | ".join(str(x) for x in row) + " |")
    lines.append("")
    return lines


def report_md(r: CohomologyReport) -> str:
    lines = [f"## {r.model_name} (n = {r.n})", ""]
    for key, title in GRIDS:
        lines += _md_grid(title, getattr(r, key))
    lines.append("Betti numbers: " + ", ".join(f"b{k} = {b}" for k, b in enumerate(r.de_rham)))
    lines.append("")
    lines.append(f"dim_R H^{{1,1}}(R) = {r.h11_real}")
    lines.append("")
    return "\n".join(lines)


def reports_csv(reports: list[CohomologyReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["model", "quantity", "p", "q", "value"])
    for r in reports:
        for key, _ in GRIDS:
            for p, row in enumerate(getattr(r, key)):
                for q, x in enumerate(row):
                    w.writerow([r.model_name, key, p, q, x])
        for k, b in enumerate(r.de_rham):
            w.writerow([r.model_name, "de_rham", k, "", b])
        w.writerow([r.model_name, "h11_real", 1, 1, r.h11_real])
    return buf.getvalue()


def verify_text(v: Verification, required_builtin: bool) -> tuple[str, int]:
    lines = [f"== {v.model_name} =="]
    for o in v.identities:
        note = ""
        if not o.passed and o.tier == BUILTIN_ONLY and not required_builtin:
            note = "  (not required for this model)"
        lines.append(f"{o}{note}")
    for o in v.table:
        lines.append(f"[{o.status}] ({o.tier}) {table_line(o)}")
    fails = v.failures(strict=required_builtin)
    lines.append(f"{v.model_name}: {len(fails)} failure(s) out of {len(v.identities) + len(v.table)} checks")
    lines.append("")
    return "\n".join(lines), len(fails)


# -- commands -------------------------------------------------------------------------

def run(cfg: RunConfig) -> tuple[int, str]:
    """Execute ``cfg``; returns (exit code, document). Raises UsageError and
    the model errors for the caller to map to exit codes."""
    if cfg.command == "list":
        return EXIT_OK, "\n".join(BUILTIN_NAMES) + "\n"
    if cfg.model_selector is None:
        raise UsageError(f"{cfg.command} requires -m/--model")
    if cfg.command == "validate":
        (rm,) = resolve(cfg.model_selector, allow_all=False)
        return EXIT_OK, f"{rm.model.name}: valid (n = {rm.model.n})\n"

    models = resolve(cfg.model_selector, allow_all=True)
    models.sort(key=lambda rm: rm.model.name)
    results = [(rm, verify_model(rm.model)) for rm in models]

    if cfg.command == "compute":
        if cfg.format == "json":
            docs = [report_json(v) for _, v in results]
            payload = docs[0] if cfg.model_selector != "all" else docs
            return EXIT_OK, json.dumps(payload, indent=2, sort_keys=False) + "\n"
        if cfg.format == "csv":
            return EXIT_OK, reports_csv([v.report for _, v in results])
        return EXIT_OK, "\n".join(report_md(v.report) for _, v in results)

    if cfg.command == "verify":
        total = 0
        if cfg.format == "json":
            docs = []
            for rm, v in results:
                required = rm.builtin or cfg.strict
                total += len(v.failures(strict=required))
                docs.append({"model": v.model_name, "identities": _identity_dicts(v),
                             "failures": len(v.failures(strict=required))})
            text = json.dumps(docs, indent=2) + "\n"
        else:
            chunks = []
            for rm, v in results:
                body, nfail = verify_text(v, rm.builtin or cfg.strict)
                chunks.append(body)
                total += nfail
            chunks.append(f"TOTAL: {total} failure(s)\n")
            text = "\n".join(chunks)
        return (EXIT_VERIFY if total else EXIT_OK), text

    raise UsageError(f"unknown command {cfg.command!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bottchern",
        description="Exact Dolbeault, Bott-Chern, Aeppli and related cohomology of invariant complex models.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, model_required=True):
        p.add_argument("-m", "--model", required=model_required,
                       help="built-in name, path to a .cxm file, or 'all'")
        p.add_argument("--format", choices=("md", "csv", "json"), default="md")
        p.add_argument("--strict", action="store_true",
                       help="also require compact-manifold identities on user-supplied models")
        p.add_argument("-o", "--out", help="write output to this path instead of stdout")

    common(sub.add_parser("compute", help="print every cohomology grid"))
    common(sub.add_parser("verify", help="run the identity suite and the closed-form table comparison"))
    common(sub.add_parser("validate", help="parse a model and check integrability"))
    common(sub.add_parser("list", help="list built-in models"), model_required=False)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    cfg = RunConfig(ns.command, ns.model, ns.format, ns.strict, ns.out)
    try:
        code, text = run(cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ModelParseError, ModelValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if cfg.out:
        Path(cfg.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
