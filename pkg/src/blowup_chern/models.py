"""Model files, the built-in catalog, and result serialization.

A model file declares two manifolds and one embedding::

    # blow-up of the projective plane at a point
    manifold M {
      dim_real = 4
      generator H : 1
      relation H^3 = 0
      chern = (1 + H)^3
      pairing H^2 = 1
    }
    manifold X {
      dim_real = 0
      chern = 1
      pairing 1 = 1
    }
    embedding {
      codim = 2
      restrict H -> 0
      normal_chern = 1
      dual = H^2
    }

The first manifold block is the ambient manifold, the second the center.
Expressions use integers, declared generators, ``+ - * ^`` and parentheses;
``#`` starts a line comment.  All diagnostics carry a line and column.
"""

import re
from dataclasses import dataclass
from importlib import resources

from .ring import (
    AlgebraError,
    Ring,
    RingMap,
    render_monomial,
    render_terms,
)
from .chern import NoPairing, Pairing, total_class
from .blowup import (
    BlowupElement,
    EmbeddingModel,
    ManifoldModel,
    VerifyReport,
)

FORMAT_VERSION = 1


class ModelFormatError(AlgebraError):
    """Base for model-file problems; always carries a position."""

    def __init__(self, message, line, col):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col


class ModelSyntaxError(ModelFormatError):
    pass


class ModelSemanticError(ModelFormatError):
    pass


class UnknownModel(AlgebraError):
    pass


# -- lexer ---------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r]+)"
    r"|(?P<comment>#[^\n]*)"
    r"|(?P<nl>\n)"
    r"|(?P<int>\d+)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<arrow>->)"
    r"|(?P<sym>[{}()=:^*+\-])"
)


@dataclass(frozen=True)
class Token:
    kind: str  # "int" | "ident" | "sym" | "eof"
    value: str
    line: int
    col: int


def tokenize(text):
    tokens = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ModelSyntaxError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        value = m.group()
        if kind == "nl":
            line += 1
            col = 1
        elif kind in ("ws", "comment"):
            col += len(value)
        elif kind == "int":
            tokens.append(Token("int", value, line, col))
            col += len(value)
        elif kind == "ident":
            tokens.append(Token("ident", value, line, col))
            col += len(value)
        else:  # arrow or sym
            tokens.append(Token("sym", value, line, col))
            col += len(value)
        pos = m.end()
    tokens.append(Token("eof", "", line, col))
    return tokens


# -- expression evaluation -------------------------------------------------------
#
# Expressions are evaluated straight to raw term dicts (monomial tuple ->
# coefficient) over a declared generator list, without truncation; the
# consuming ring decides what survives.


def _d_add(a, b):
    out = dict(a)
    for m, c in b.items():
        out[m] = out.get(m, 0) + c
    return {m: c for m, c in out.items() if c}


def _d_scale(a, n):
    return {m: c * n for m, c in a.items() if c * n}


def _d_mul(a, b):
    out = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            mono = tuple(x + y for x, y in zip(m1, m2))
            out[mono] = out.get(mono, 0) + c1 * c2
    return {m: c for m, c in out.items() if c}


def _d_pow(a, n, ngens):
    out = {(0,) * ngens: 1}
    for _ in range(n):
        out = _d_mul(out, a)
    return out



def _show(tok):
    return repr(tok.value) if tok.value else "end of input"

class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def next(self):
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def expect_sym(self, value, what=None):
        tok = self.peek()
        if tok.kind != "sym" or tok.value != value:
            raise ModelSyntaxError(
                f"expected {what or repr(value)}, found {_show(tok)}",
                tok.line,
                tok.col,
            )
        return self.next()

    def expect_ident(self, what="identifier"):
        tok = self.peek()
        if tok.kind != "ident":
            raise ModelSyntaxError(
                f"expected {what}, found {_show(tok)}",
                tok.line,
                tok.col,
            )
        return self.next()

    def expect_int(self):
        neg = False
        tok = self.peek()
        if tok.kind == "sym" and tok.value == "-":
            self.next()
            neg = True
            tok = self.peek()
        if tok.kind != "int":
            raise ModelSyntaxError(
                f"expected an integer, found {_show(tok)}",
                tok.line,
                tok.col,
            )
        self.next()
        return -int(tok.value) if neg else int(tok.value)

    # expression -> raw term dict over `gens` (list of names)
    def expression(self, gens):
        acc = self._term(gens)
        while True:
            tok = self.peek()
            if tok.kind == "sym" and tok.value in "+-":
                self.next()
                rhs = self._term(gens)
                acc = _d_add(acc, rhs if tok.value == "+" else _d_scale(rhs, -1))
            else:
                return acc

    def _term(self, gens):
        acc = self._factor(gens)
        while True:
            tok = self.peek()
            if tok.kind == "sym" and tok.value == "*":
                self.next()
                acc = _d_mul(acc, self._factor(gens))
            else:
                return acc

    def _factor(self, gens):
        base = self._atom(gens)
        while True:
            tok = self.peek()
            if tok.kind == "sym" and tok.value == "^":
                self.next()
                etok = self.peek()
                if etok.kind != "int":
                    raise ModelSyntaxError(
                        "exponent must be a nonnegative integer", etok.line, etok.col
                    )
                self.next()
                base = _d_pow(base, int(etok.value), len(gens))
            else:
                return base

    def _atom(self, gens):
        tok = self.peek()
        if tok.kind == "int":
            self.next()
            return {(0,) * len(gens): int(tok.value)} if int(tok.value) else {}
        if tok.kind == "ident":
            self.next()
            if tok.value not in gens:
                raise ModelSemanticError(
                    f"unknown generator {tok.value!r}", tok.line, tok.col
                )
            i = gens.index(tok.value)
            mono = tuple(1 if j == i else 0 for j in range(len(gens)))
            return {mono: 1}
        if tok.kind == "sym" and tok.value == "(":
            self.next()
            inner = self.expression(gens)
            self.expect_sym(")")
            return inner
        if tok.kind == "sym" and tok.value == "-":
            self.next()
            return _d_scale(self._factor(gens), -1)
        raise ModelSyntaxError(
            f"expected an expression, found {_show(tok)}",
            tok.line,
            tok.col,
        )


# -- model assembly ----------------------------------------------------------------


@dataclass
class _ManifoldBlock:
    name: str
    pos: tuple
    dim_real: int | None = None
    generators: list = None
    relations: list = None  # (raw dict, pos)
    chern: object = None  # (raw dict, pos)
    pairings: list = None  # (raw dict, value, pos)

    def __post_init__(self):
        self.generators = []
        self.relations = []
        self.pairings = []


@dataclass
class _EmbeddingBlock:
    pos: tuple
    codim: int | None = None
    restricts: dict = None  # name -> (raw dict over X gens, pos)
    normal_chern: object = None
    dual: object = None

    def __post_init__(self):
        self.restricts = {}


def _parse_manifold_block(p, name_tok):
    block = _ManifoldBlock(name_tok.value, (name_tok.line, name_tok.col))
    p.expect_sym("{")
    gen_names = [g for g, _w, _p in block.generators]
    while True:
        tok = p.peek()
        if tok.kind == "sym" and tok.value == "}":
            p.next()
            break
        if tok.kind != "ident":
            raise ModelSyntaxError(
                f"expected a statement or '}}', found {_show(tok)}",
                tok.line,
                tok.col,
            )
        key = tok.value
        p.next()
        if key == "dim_real":
            p.expect_sym("=")
            block.dim_real = p.expect_int()
            if block.dim_real < 0 or block.dim_real % 2:
                raise ModelSemanticError(
                    "dim_real must be even and nonnegative"
                    " (odd-degree cohomology is not supported)",
                    tok.line,
                    tok.col,
                )
        elif key == "generator":
            g = p.expect_ident("generator name")
            p.expect_sym(":")
            w = p.expect_int()
            if w < 1:
                raise ModelSemanticError(
                    f"generator {g.value!r} must have weight >= 1", g.line, g.col
                )
            if g.value in gen_names:
                raise ModelSemanticError(
                    f"duplicate generator {g.value!r}", g.line, g.col
                )
            block.generators.append((g.value, w, (g.line, g.col)))
            gen_names.append(g.value)
        elif key == "relation":
            raw = p.expression(gen_names)
            p.expect_sym("=")
            zero = p.expect_int()
            if zero != 0:
                raise ModelSemanticError(
                    "relations must be written '<expr> = 0'", tok.line, tok.col
                )
            block.relations.append((raw, (tok.line, tok.col)))
        elif key == "chern":
            p.expect_sym("=")
            block.chern = (p.expression(gen_names), (tok.line, tok.col))
        elif key == "pairing":
            raw = p.expression(gen_names)
            p.expect_sym("=")
            value = p.expect_int()
            block.pairings.append((raw, value, (tok.line, tok.col)))
        else:
            raise ModelSyntaxError(
                f"unknown statement {key!r} in manifold block", tok.line, tok.col
            )
    return block


def _parse_embedding_block(p, start_tok, ambient_gens, center_gens):
    block = _EmbeddingBlock((start_tok.line, start_tok.col))
    p.expect_sym("{")
    while True:
        tok = p.peek()
        if tok.kind == "sym" and tok.value == "}":
            p.next()
            break
        if tok.kind != "ident":
            raise ModelSyntaxError(
                f"expected a statement or '}}', found {_show(tok)}",
                tok.line,
                tok.col,
            )
        key = tok.value
        p.next()
        if key == "codim":
            p.expect_sym("=")
            block.codim = p.expect_int()
        elif key == "restrict":
            g = p.expect_ident("ambient generator name")
            if g.value not in ambient_gens:
                raise ModelSemanticError(
                    f"unknown ambient generator {g.value!r}", g.line, g.col
                )
            p.expect_sym("->", what="'->'")
            block.restricts[g.value] = (p.expression(center_gens), (g.line, g.col))
        elif key == "normal_chern":
            p.expect_sym("=")
            block.normal_chern = (p.expression(center_gens), (tok.line, tok.col))
        elif key == "dual":
            p.expect_sym("=")
            block.dual = (p.expression(ambient_gens), (tok.line, tok.col))
        else:
            raise ModelSyntaxError(
                f"unknown statement {key!r} in embedding block", tok.line, tok.col
            )
    return block


def _build_manifold(block):
    missing = []
    if block.dim_real is None:
        missing.append("dim_real")
    if block.chern is None:
        missing.append("chern")
    if missing:
        raise ModelSyntaxError(
            f"manifold block {block.name!r} is missing: {', '.join(missing)}",
            *block.pos,
        )
    trunc = block.dim_real // 2
    gens = [(n, w) for n, w, _ in block.generators]
    try:
        ring = Ring(gens, [raw for raw, _ in block.relations], trunc)
    except AlgebraError as exc:
        pos = block.relations[0][1] if block.relations else block.pos
        raise ModelSemanticError(str(exc), *pos) from exc
    chern_raw, chern_pos = block.chern
    try:
        chern = total_class(ring.element(chern_raw), trunc)
    except AlgebraError as exc:
        raise ModelSemanticError(str(exc), *chern_pos) from exc
    pairing = None
    if block.pairings:
        values = {}
        for raw, value, pos in block.pairings:
            el = ring.element(raw)
            terms = el.terms
            if len(terms) != 1 or abs(next(iter(terms.values()))) != 1:
                raise ModelSemanticError(
                    "pairing left side must reduce to a single monomial"
                    " with coefficient +-1",
                    *pos,
                )
            mono, sign = next(iter(terms.items()))
            if ring.monomial_weight(mono) != trunc:
                raise ModelSemanticError(
                    "pairing monomial must have top weight", *pos
                )
            values[mono] = sign * value
        try:
            pairing = Pairing(ring, values)
        except NoPairing as exc:
            raise ModelSemanticError(str(exc), *block.pairings[0][2]) from exc
    try:
        return ManifoldModel(block.name, ring, chern, block.dim_real, pairing)
    except AlgebraError as exc:
        raise ModelSemanticError(str(exc), *block.pos) from exc


def parse_model(text, name="model"):
    """Parse a model document into a validated :class:`EmbeddingModel`."""
    p = _Parser(tokenize(text))
    manifolds = []
    embedding = None
    while p.peek().kind != "eof":
        tok = p.expect_ident("'manifold' or 'embedding'")
        if tok.value == "manifold":
            if len(manifolds) == 2:
                raise ModelSyntaxError(
                    "expected exactly two manifold blocks", tok.line, tok.col
                )
            name_tok = p.expect_ident("manifold name")
            if manifolds and manifolds[0].name == name_tok.value:
                raise ModelSemanticError(
                    f"duplicate manifold name {name_tok.value!r}",
                    name_tok.line,
                    name_tok.col,
                )
            manifolds.append(_parse_manifold_block(p, name_tok))
        elif tok.value == "embedding":
            if embedding is not None:
                raise ModelSyntaxError(
                    "expected exactly one embedding block", tok.line, tok.col
                )
            if len(manifolds) != 2:
                raise ModelSyntaxError(
                    "embedding block must follow the two manifold blocks",
                    tok.line,
                    tok.col,
                )
            embedding = _parse_embedding_block(
                p,
                tok,
                [g for g, _w, _p in manifolds[0].generators],
                [g for g, _w, _p in manifolds[1].generators],
            )
        else:
            raise ModelSyntaxError(
                f"expected 'manifold' or 'embedding', found {tok.value!r}",
                tok.line,
                tok.col,
            )
    eof = p.peek()
    if len(manifolds) != 2 or embedding is None:
        raise ModelSyntaxError(
            "a model needs two manifold blocks (ambient, center)"
            " and one embedding block",
            eof.line,
            eof.col,
        )

    ambient = _build_manifold(manifolds[0])
    center = _build_manifold(manifolds[1])

    missing = []
    if embedding.codim is None:
        missing.append("codim")
    if embedding.normal_chern is None:
        missing.append("normal_chern")
    if embedding.dual is None:
        missing.append("dual")
    for g in ambient.ring.generators:
        if g.name not in embedding.restricts:
            missing.append(f"restrict {g.name}")
    if missing:
        raise ModelSyntaxError(
            f"embedding block is missing: {', '.join(missing)}", *embedding.pos
        )

    try:
        images = {
            gname: center.ring.element(raw)
            for gname, (raw, _pos) in embedding.restricts.items()
        }
        restriction = RingMap(ambient.ring, center.ring, images)
    except AlgebraError as exc:
        pos = next(iter(embedding.restricts.values()))[1]
        raise ModelSemanticError(str(exc), *pos) from exc

    k = embedding.codim
    normal_raw, normal_pos = embedding.normal_chern
    dual_raw, dual_pos = embedding.dual
    try:
        normal = total_class(center.ring.element(normal_raw), k)
    except AlgebraError as exc:
        raise ModelSemanticError(str(exc), *normal_pos) from exc
    try:
        dual = ambient.ring.element(dual_raw)
        return EmbeddingModel(name, ambient, center, restriction, k, normal, dual)
    except AlgebraError as exc:
        raise ModelSemanticError(str(exc), *dual_pos) from exc


# -- canonical model writer ---------------------------------------------------------


def write_model(model):
    """Canonical model-file text for an :class:`EmbeddingModel`.

    parse_model(write_model(m)) builds a model equal to m, and the writer is
    idempotent across that round trip.
    """

    def manifold_lines(m):
        lines = [f"manifold {m.name} {{", f"  dim_real = {m.dim_real}"]
        for g in m.ring.generators:
            lines.append(f"  generator {g.name} : {g.weight}")
        for rel in m.ring.relations:
            lines.append(f"  relation {render_terms(m.ring, rel)} = 0")
        lines.append(f"  chern = {render_terms(m.ring, m.chern.value.terms)}")
        if m.pairing is not None:
            for mono in sorted(m.pairing.values, reverse=True):
                v = m.pairing.values[mono]
                lines.append(f"  pairing {render_monomial(m.ring, mono)} = {v}")
        lines.append("}")
        return lines

    emb = model
    lines = manifold_lines(emb.ambient) + [""] + manifold_lines(emb.center) + [""]
    lines.append("embedding {")
    lines.append(f"  codim = {emb.codim}")
    for g in emb.ambient.ring.generators:
        img = emb.restriction.images[g.name]
        lines.append(f"  restrict {g.name} -> {render_terms(emb.center.ring, img.terms)}")
    lines.append(
        f"  normal_chern = {render_terms(emb.center.ring, emb.normal_chern.value.terms)}"
    )
    lines.append(f"  dual = {render_terms(emb.ambient.ring, emb.dual_class.terms)}")
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- catalog -------------------------------------------------------------------------

_CATALOG_FILES = {
    "s6_point": "s6_point.model",
    "p2_point": "p2_point.model",
    "p3_point": "p3_point.model",
    "p4_point": "p4_point.model",
    "p4_line": "p4_line.model",
}

CATALOG_NAMES = [*sorted(_CATALOG_FILES), "pn_point(n)"]

_PN_POINT = re.compile(r"pn_point\((\d+)\)")


def _pn_point_text(n):
    return f"""\
# blow-up of projective {n}-space at a point
manifold M {{
  dim_real = {2 * n}
  generator H : 1
  relation H^{n + 1} = 0
  chern = (1 + H)^{n + 1}
  pairing H^{n} = 1
}}

manifold X {{
  dim_real = 0
  chern = 1
  pairing 1 = 1
}}

embedding {{
  codim = {n}
  restrict H -> 0
  normal_chern = 1
  dual = H^{n}
}}
"""


def catalog(name):
    """A validated built-in model; see CATALOG_NAMES."""
    key = name.strip()
    m = _PN_POINT.fullmatch(key)
    if m:
        n = int(m.group(1))
        if n < 1:
            raise UnknownModel(f"pn_point needs n >= 1, got {n}")
        return parse_model(_pn_point_text(n), name=key)
    if key in _CATALOG_FILES:
        text = (
            resources.files("blowup_chern") / "models" / _CATALOG_FILES[key]
        ).read_text(encoding="utf-8")
        return parse_model(text, name=key)
    raise UnknownModel(
        f"unknown catalog model {name!r}; available: {', '.join(CATALOG_NAMES)}"
    )


# -- result serialization ---------------------------------------------------------------


@dataclass
class ChernResult:
    model: str
    convention: str
    via: str
    chern: BlowupElement
    numbers: dict | None = None
    report: VerifyReport | None = None


def partition_label(part):
    """(2, 1, 1) -> 'c1^2*c2'."""
    from collections import Counter

    counts = Counter(part)
    bits = []
    for p in sorted(counts):
        e = counts[p]
        bits.append(f"c{p}" if e == 1 else f"c{p}^{e}")
    return "*".join(bits)


def format_blowup_class(element):
    """Total class grouped by weight, e.g. '1 + (3*H + ω) + 4*H^2'."""
    ctx = element.context
    groups = []
    for w in element.weights():
        comp = element.component(w)
        bits = []
        if comp.m_part:
            bits.append(render_terms(ctx.M, comp.m_part.terms))
        for r in sorted(comp.omega_parts):
            omega = ctx.omega_symbol if r == 1 else f"{ctx.omega_symbol}^{r}"
            bits.append(render_terms(ctx.X, comp.omega_parts[r].terms, extra=omega))
        body = " + ".join(bits)
        nterms = body.count(" + ") + body.count(" - ") + 1
        groups.append(f"({body})" if nterms > 1 else body)
    if not groups:
        return "0"
    return " + ".join(groups).replace("+ -", "- ")


def _terms_json(ring, terms):
    keyed = sorted(
        terms.items(),
        key=lambda mc: (ring.monomial_weight(mc[0]), tuple(-e for e in mc[0])),
    )
    out = []
    for mono, coeff in keyed:
        exps = {
            g.name: e for g, e in zip(ring.generators, mono) if e
        }
        out.append({"coeff": coeff, "monomial": exps})
    return out


def blowup_class_json(element):
    ctx = element.context
    out = []
    for w in range(ctx.top_weight + 1):
        comp = element.component(w)
        out.append(
            {
                "weight": w,
                "m_part": _terms_json(ctx.M, comp.m_part.terms),
                "omega_parts": {
                    str(r): _terms_json(ctx.X, a.terms)
                    for r, a in sorted(comp.omega_parts.items())
                },
            }
        )
    return out


def serialize_result(result, fmt="text"):
    """Render a ChernResult as deterministic text or JSON."""
    if fmt == "json":
        import json

        doc = {
            "format_version": FORMAT_VERSION,
            "model": result.model,
            "convention": result.convention,
            "via": result.via,
            "chern": blowup_class_json(result.chern),
            "chern_numbers": (
                {partition_label(p): v for p, v in result.numbers.items()}
                if result.numbers is not None
                else None
            ),
            "report": result.report.to_dict() if result.report is not None else None,
        }
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    lines = [
        f"model: {result.model}  (convention: {result.convention}, via: {result.via})",
        f"C = {format_blowup_class(result.chern)}",
    ]
    if result.numbers is not None:
        nums = ", ".join(
            f"{partition_label(p)} = {v}" for p, v in sorted(result.numbers.items())
        )
        lines.append(f"chern numbers: {nums}")
    if result.report is not None:
        lines.extend(result.report.lines())
    return "\n".join(lines) + "\n"
