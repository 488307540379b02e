"""Text format for complex models, plus the built-in model registry.

A model file (``.cxm``) lists structure equations, one generator per line::

    model iwasawa
    dim 3
    d phi1 = 0
    d phi2 = 0
    d phi3 = -1 phi1^phi2

Terms are ``COEFF? FACTOR (^ FACTOR)*`` joined by ``+``/``-``; factors are
``phiK`` (holomorphic) or ``barK`` (conjugate). Coefficients are integers or
fractions, optionally suffixed ``i``; a lone ``i`` means ``1i``. ``#`` starts
a comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

from .bicomplex import (
    ComplexModel,
    Form,
    FormBasisElement,
    _from_letters,
    _sort_sign,
    enumerate_basis,
    validate_model,
)
from .exactnum import ONE, ZERO, GaussianRational, literal_terms, parse_literal

MAX_DIM = 6


class ModelParseError(ValueError):
    """Malformed model text. Carries a 1-based ``line`` and ``column``."""

    def __init__(self, message: str, line: int, column: int, origin: str = "<text>"):
        self.message = message
        self.line = line
        self.column = column
        self.origin = origin
        super().__init__(f"{origin}:{line}:{column}: {message}")


class ModelValidationError(ValueError):
    """Well-formed text describing a structure that is not integrable."""

    def __init__(self, report, origin: str = "<text>"):
        self.report = report
        self.origin = origin
        super().__init__(f"{origin}: model is not integrable:\n{report}")


@dataclass(frozen=True)
class ModelSource:
    text: str
    origin: str = "<text>"


# -- lexer -------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t]+)
  | (?P<factor>(?:phi|bar)[0-9]+)
  | (?P<coeff>[0-9]+(?:/[0-9]+)?i?|i)
  | (?P<op>[+\-^=])
    """,
    re.VERBOSE,
)


def _tokenize(body: str, lineno: int, col0: int, origin: str) -> list[tuple[str, str, int]]:
    toks = []
    pos = 0
    while pos < len(body):
        m = _TOKEN_RE.match(body, pos)
        if m is None:
            raise ModelParseError(f"unexpected character {body[pos]!r}", lineno, col0 + pos, origin)
        kind = m.lastgroup
        if kind != "ws":
            toks.append((kind, m.group(), col0 + pos))
        pos = m.end()
    return toks


def _parse_rhs(
    toks: list, n: int, lineno: int, end_col: int, origin: str
) -> dict[FormBasisElement, GaussianRational]:
    if not toks:
        raise ModelParseError("missing right-hand side", lineno, end_col, origin)
    if len(toks) == 1 and toks[0][0] == "coeff" and toks[0][1] == "0":
        return {}
    terms: dict[FormBasisElement, GaussianRational] = {}
    i = 0
    sign = ONE
    if toks[0][0] == "op" and toks[0][1] in "+-":
        sign = -ONE if toks[0][1] == "-" else ONE
        i = 1
    while True:
        coeff = ONE
        if i < len(toks) and toks[i][0] == "coeff":
            lit = toks[i][1]
            try:
                coeff = parse_literal(lit)
            except ValueError as exc:
                raise ModelParseError(str(exc), lineno, toks[i][2], origin) from None
            i += 1
        if i >= len(toks) or toks[i][0] != "factor":
            col = toks[i][2] if i < len(toks) else end_col
            raise ModelParseError("expected phiK or barK", lineno, col, origin)
        factors = []
        while True:
            _, text, col = toks[i]
            idx = int(text[3:])
            if not 1 <= idx <= n:
                raise ModelParseError(f"generator index {idx} outside 1..{n}", lineno, col + 3, origin)
            letter = (0 if text.startswith("phi") else 1, idx)
            if letter in factors:
                raise ModelParseError(f"repeated factor {text}", lineno, col, origin)
            factors.append(letter)
            i += 1
            if i < len(toks) and toks[i][:2] == ("op", "^"):
                i += 1
                if i >= len(toks) or toks[i][0] != "factor":
                    col = toks[i][2] if i < len(toks) else end_col
                    raise ModelParseError("expected a factor after '^'", lineno, col, origin)
                continue
            break
        term_col = toks[i - 1][2]
        if len(factors) != 2:
            raise ModelParseError(f"term has degree {len(factors)}, expected 2", lineno, term_col, origin)
        s, ordered = _sort_sign(factors)
        elem = _from_letters(ordered)
        p, q = elem.bidegree
        if (p, q) == (0, 2):
            raise ModelParseError(
                "term of bidegree (0,2): d phiK may only have (2,0) and (1,1) parts", lineno, term_col, origin
            )
        c = sign * coeff * s
        terms[elem] = terms.get(elem, ZERO) + c
        if i >= len(toks):
            break
        kind, text, col = toks[i]
        if kind != "op" or text not in "+-":
            raise ModelParseError(f"expected '+' or '-', found {text!r}", lineno, col, origin)
        sign = -ONE if text == "-" else ONE
        i += 1
        if i >= len(toks):
            raise ModelParseError("dangling operator", lineno, end_col, origin)
    return {e: c for e, c in terms.items() if c}


# -- parser ------------------------------------------------------------------------

_HEADER_RE = re.compile(r"^model[ \t]+([A-Za-z_][A-Za-z0-9_.\-]*)[ \t]*$")
_DIM_RE = re.compile(r"^dim[ \t]+([0-9]+)[ \t]*$")
_LHS_RE = re.compile(r"^d[ \t]+phi([0-9]+)[ \t]*=")


def _logical_lines(text: str):
    for lineno, raw in enumerate(text.split("\n"), start=1):
        if raw.endswith("\r"):
            raw = raw[:-1]
        body = raw.split("#", 1)[0]
        stripped = body.strip()
        if stripped:
            lead = len(body) - len(body.lstrip())
            yield lineno, lead + 1, stripped


def parse_model(src: ModelSource | str, origin: str | None = None) -> ComplexModel:
    """Parse and validate model text. Raises :class:`ModelParseError` or
    :class:`ModelValidationError`."""
    if isinstance(src, str):
        src = ModelSource(src, origin or "<text>")
    origin = src.origin
    lines = list(_logical_lines(src.text))
    if not lines:
        raise ModelParseError("empty model", 1, 1, origin)

    lineno, col, first = lines[0]
    m = _HEADER_RE.match(first)
    if m is None:
        raise ModelParseError("expected 'model NAME'", lineno, col, origin)
    name = m.group(1)

    if len(lines) < 2:
        raise ModelParseError("expected 'dim N'", lineno + 1, 1, origin)
    lineno, col, second = lines[1]
    m = _DIM_RE.match(second)
    if m is None:
        raise ModelParseError("expected 'dim N'", lineno, col, origin)
    n = int(m.group(1))
    if not 1 <= n <= MAX_DIM:
        raise ModelParseError(f"dim must be between 1 and {MAX_DIM}", lineno, col + 4, origin)

    d_phi: dict[int, dict] = {}
    seen_line: dict[int, int] = {}
    for lineno, col, line in lines[2:]:
        m = _LHS_RE.match(line)
        if m is None:
            raise ModelParseError("expected 'd phiK = ...'", lineno, col, origin)
        k = int(m.group(1))
        if not 1 <= k <= n:
            raise ModelParseError(f"generator index {k} outside 1..{n}", lineno, col + m.start(1), origin)
        if k in d_phi:
            raise ModelParseError(f"d phi{k} already defined on line {seen_line[k]}", lineno, col, origin)
        rhs = line[m.end():]
        toks = _tokenize(rhs, lineno, col + m.end(), origin)
        d_phi[k] = _parse_rhs(toks, n, lineno, col + len(line), origin)
        seen_line[k] = lineno

    missing = [k for k in range(1, n + 1) if k not in d_phi]
    if missing:
        last = lines[-1][0]
        raise ModelParseError(f"missing equation for d phi{missing[0]}", last, 1, origin)

    forms = [Form(n, d_phi[k]) for k in range(1, n + 1)]
    model = ComplexModel.from_differentials(name, n, forms)
    report = validate_model(model)
    if not report.valid:
        raise ModelValidationError(report, origin)
    return model


def parse_model_bytes(data: bytes, origin: str = "<bytes>") -> ComplexModel:
    """Entry point for untrusted input. Only the two model errors escape."""
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        prefix = data[: exc.start]
        line = prefix.count(b"\n") + 1
        column = exc.start - (prefix.rfind(b"\n") + 1) + 1
        raise ModelParseError("input is not valid UTF-8", line, column, origin) from None
    return parse_model(ModelSource(text, origin))


def load_model_file(path: str | Path) -> ComplexModel:
    p = Path(path)
    return parse_model_bytes(p.read_bytes(), origin=str(p))


# -- serializer --------------------------------------------------------------------

def _factor_text(e: FormBasisElement) -> str:
    parts = [f"phi{i}" for i in e.holo] + [f"bar{j}" for j in e.anti]
    return "^".join(parts)


def _rhs_text(m: ComplexModel, k: int) -> str:
    f = m.d_phi(k)
    chunks: list[tuple[int, str]] = []
    for p, q in ((2, 0), (1, 1)):
        for e in enumerate_basis(m.n, p, q):
            c = f.coefficient(e)
            for sign, mag in literal_terms(c):
                chunks.append((sign, f"{mag} {_factor_text(e)}"))
    if not chunks:
        return "0"
    out = ("-" if chunks[0][0] < 0 else "") + chunks[0][1]
    for sign, body in chunks[1:]:
        out += (" - " if sign < 0 else " + ") + body
    return out


def serialize_model(m: ComplexModel) -> str:
    """Canonical text: LF line ends, terms in basis order, (2,0) before (1,1)."""
    lines = [f"model {m.name}", f"dim {m.n}"]
    for k in range(1, m.n + 1):
        lines.append(f"d phi{k} = {_rhs_text(m, k)}")
    return "\n".join(lines) + "\n"


# -- built-in registry ----------------------------------------------------------------

_BUILTIN_TEXT = {
    "torus3": """\
model torus3
dim 3
d phi1 = 0
d phi2 = 0
d phi3 = 0
""",
    "iwasawa": """\
model iwasawa
dim 3
d phi1 = 0
d phi2 = 0
d phi3 = -1 phi1^phi2
""",
    "iwasawa_i": """\
model iwasawa_i
dim 3
d phi1 = 0
d phi2 = 0
d phi3 = -1 phi1^phi2
""",
    "iwasawa_iia": """\
# class (ii.a): D(t) = 0, S of rank 1
# sigma12 = 1, sigma11b = 1
# checked: h(1,0 0,1 1,1 1,2 0,2 2,0 3,0) = 2 2 5 5 2 2 1
#          k(1,0 1,1 1,2 2,0 3,0) = 2 3 4 1 1; bc11 = 4, bc22 = 7, bc12 = 6
#          h31_2 = 2, dim H11(R) = 4, b = 1 4 8 10 8 4 1
model iwasawa_iia
dim 3
d phi1 = 0
d phi2 = 0
d phi3 = 1 phi1^phi2 + 1 phi1^bar1
""",
    "iwasawa_iib": """\
# class (ii.b): D(t) = 0, S of rank 2
# sigma12 = 1, sigma11b = 1, sigma12b = i, sigma21b = 1, sigma22b = i
# checked: h(1,0 0,1 1,1 1,2 0,2 2,0 3,0) = 2 2 5 5 2 2 1
#          k(1,0 1,1 1,2 2,0 3,0) = 2 2 4 1 1; bc11 = 4, bc22 = 6, bc12 = 6
#          h31_2 = 2, dim H11(R) = 4, b = 1 4 8 10 8 4 1
model iwasawa_iib
dim 3
d phi1 = 0
d phi2 = 0
d phi3 = 1 phi1^phi2 + 1 phi1^bar1 + 1i phi1^bar2 + 1 phi2^bar1 + 1i phi2^bar2
""",
    "iwasawa_iiia": """\
# class (iii.a): D(t) != 0, S of rank 1
# sigma12 = 1, sigma11b = 1, sigma22b = 1
# checked: h(1,0 0,1 1,1 1,2 0,2 2,0 3,0) = 2 2 5 4 2 1 1
#          k(1,0 1,1 1,2 2,0 3,0) = 2 3 4 0 1; bc11 = 4, bc22 = 7, bc12 = 6
#          h31_2 = 2, dim H11(R) = 4, b = 1 4 8 10 8 4 1
model iwasawa_iiia
dim 3
d phi1 = 0
d phi2 = 0
d phi3 = 1 phi1^phi2 + 1 phi1^bar1 + 1 phi2^bar2
""",
    "iwasawa_iiib": """\
# class (iii.b): D(t) != 0, S of rank 2
# sigma12 = 1, sigma11b = 1, sigma22b = i
# checked: h(1,0 0,1 1,1 1,2 0,2 2,0 3,0) = 2 2 5 4 2 1 1
#          k(1,0 1,1 1,2 2,0 3,0) = 2 2 4 0 1; bc11 = 4, bc22 = 6, bc12 = 6
#          h31_2 = 2, dim H11(R) = 4, b = 1 4 8 10 8 4 1
model iwasawa_iiib
dim 3
d phi1 = 0
d phi2 = 0
d phi3 = 1 phi1^phi2 + 1 phi1^bar1 + 1i phi2^bar2
""",
    "calabi_eckmann": """\
# invariant model on su(2) + su(2), J pairing the two third directions
# checked: Dolbeault rows 1 1 0 0 / 0 1 1 0 / 0 1 1 0 / 0 0 1 1
#          BC rows 1 0 0 0 / 0 2 1 0 / 0 1 1 1 / 0 0 1 1
#          b = 1 0 0 2 0 0 1, k12 = 0, h31_2 = 0
model calabi_eckmann
dim 3
d phi1 = 1/2i phi1^phi3 + 1/2i phi1^bar3
d phi2 = 1/2 phi2^phi3 - 1/2 phi2^bar3
d phi3 = -1/2i phi1^bar1 + 1/2 phi2^bar2
""",
}

BUILTIN_NAMES = tuple(sorted(_BUILTIN_TEXT))

_REGISTRY: dict[str, ComplexModel] = {}


def builtin_source(name: str) -> ModelSource:
    if name not in _BUILTIN_TEXT:
        raise KeyError(f"unknown built-in model {name!r}; available: {', '.join(BUILTIN_NAMES)}")
    return ModelSource(_BUILTIN_TEXT[name], origin=f"builtin:{name}")


def builtin_model(name: str) -> ComplexModel:
    """Return a registered model; raises ``KeyError`` listing the valid names."""
    if name not in _REGISTRY:
        _REGISTRY[name] = parse_model(builtin_source(name))
    return _REGISTRY[name]
