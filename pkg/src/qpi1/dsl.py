"""Reader and writer for the ``.qv`` bound-quiver format.

::

    # comments run to the end of the line
    quiver square {
      vertices: a b c d
      arrow alpha: a -> b
      arrow beta: b -> d
      arrow gamma: a -> c
      arrow delta: c -> d
      relation alpha.beta - gamma.delta
    }

Statements end at a newline or ``;``. A relation is a signed sum of terms
``[COEFF*] a1.a2...`` with integer or fractional coefficients.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .quiver import Arrow, Quiver, Step, Walk
from .relations import BoundQuiver, LinearCombo, check_presentation, format_combo


@dataclass(frozen=True)
class SourceSpan:
    file: str
    line: int
    column: int       # 1-based, first character
    end_column: int   # 1-based, one past the last character

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.column}"

    def cover(self, other: "SourceSpan") -> "SourceSpan":
        if other.line != self.line:
            return self
        return SourceSpan(self.file, self.line, min(self.column, other.column),
                          max(self.end_column, other.end_column))


@dataclass(frozen=True)
class Diagnostic:
    span: SourceSpan
    message: str
    hint: str = ""
    severity: str = "error"

    def __str__(self) -> str:
        text = f"{self.span}: {self.severity}: {self.message}"
        return text + (f" (hint: {self.hint})" if self.hint else "")


class ParseError(ValueError):
    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = diagnostics
        super().__init__("\n".join(str(d) for d in diagnostics))


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    span: SourceSpan


_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<newline>\n)
  | (?P<arrow>->)
  | (?P<number>\d+(?:/\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<sym>[{}:;+\-*.])
""", re.VERBOSE)


def tokenize(text: str, file: str = "<input>") -> list[Token]:
    out: list[Token] = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            span = SourceSpan(file, line, col, col + 1)
            raise ParseError([Diagnostic(span, f"unexpected character {text[pos]!r}",
                                         "identifiers use letters, digits, _ and '")])
        kind = m.lastgroup
        tok_text = m.group()
        span = SourceSpan(file, line, col, col + len(tok_text))
        if kind == "newline":
            out.append(Token("eol", "\n", span))
            line += 1
            line_start = m.end()
        elif kind in ("arrow", "number", "ident"):
            out.append(Token(kind, tok_text, span))
        elif kind == "sym":
            out.append(Token(";" if tok_text == ";" else tok_text, tok_text, span))
        pos = m.end()
    out.append(Token("eof", "", SourceSpan(file, line, pos - line_start + 1,
                                           pos - line_start + 2)))
    return out


class _Parser:
    def __init__(self, tokens: list[Token], file: str):
        self.toks = tokens
        self.i = 0
        self.file = file
        self.diags: list[Diagnostic] = []

    def peek(self) -> Token:
        return self.toks[self.i]

    def next(self) -> Token:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def skip_eol(self):
        while self.peek().kind in ("eol", ";"):
            self.i += 1

    def expect(self, kind: str, what: str, hint: str = "") -> Token:
        tok = self.peek()
        if tok.kind != kind:
            found = "end of line" if tok.kind == "eol" else (
                "end of file" if tok.kind == "eof" else repr(tok.text))
            raise ParseError([Diagnostic(tok.span, f"expected {what}, found {found}",
                                         hint)])
        return self.next()

    def end_statement(self):
        tok = self.peek()
        if tok.kind in ("eol", ";"):
            self.skip_eol()
        elif tok.kind not in ("}", "eof"):
            raise ParseError([Diagnostic(tok.span, f"unexpected {tok.text!r}",
                                         "put one statement per line or separate with ';'")])


def parse(text: str, file: str = "<input>") -> BoundQuiver:
    """Parse one ``quiver`` block into a validated :class:`BoundQuiver`.

    Structural problems and presentation violations (non-admissible relation,
    oriented cycle) are raised together as a :class:`ParseError`.
    """
    p = _Parser(tokenize(text, file), file)
    p.skip_eol()
    kw = p.expect("ident", "'quiver'", "files start with: quiver NAME {")
    if kw.text != "quiver":
        raise ParseError([Diagnostic(kw.span, f"expected 'quiver', found {kw.text!r}",
                                     "files start with: quiver NAME {")])
    name = p.expect("ident", "a quiver name").text
    p.skip_eol()
    p.expect("{", "'{'")
    p.skip_eol()

    vertices: list[str] = []
    vertex_spans: dict[str, SourceSpan] = {}
    arrows: list[Arrow] = []
    arrow_spans: dict[str, SourceSpan] = {}
    relations: list[tuple[list[tuple[Fraction, list[Token]]], SourceSpan]] = []

    while p.peek().kind not in ("}", "eof"):
        head = p.expect("ident", "'vertices', 'arrow' or 'relation'")
        if head.text == "vertices":
            p.expect(":", "':'", "write: vertices: a b c")
            while p.peek().kind == "ident":
                tok = p.next()
                if tok.text in vertex_spans:
                    p.diags.append(Diagnostic(tok.span, f"duplicate vertex {tok.text!r}",
                                              f"first declared at {vertex_spans[tok.text]}"))
                    continue
                vertices.append(tok.text)
                vertex_spans[tok.text] = tok.span
        elif head.text == "arrow":
            label = p.expect("ident", "an arrow label")
            p.expect(":", "':'", "write: arrow LABEL: SRC -> DST")
            src = p.expect("ident", "a source vertex")
            p.expect("arrow", "'->'", "write: arrow LABEL: SRC -> DST")
            dst = p.expect("ident", "a target vertex")
            bad = False
            for v in (src, dst):
                if v.text not in vertex_spans:
                    p.diags.append(Diagnostic(v.span, f"unknown vertex {v.text!r}",
                                              "declare it in the vertices: line"))
                    bad = True
            if label.text in arrow_spans:
                p.diags.append(Diagnostic(label.span, f"duplicate arrow label {label.text!r}",
                                          f"first declared at {arrow_spans[label.text]}"))
                bad = True
            if not bad:
                arrows.append(Arrow(label.text, src.text, dst.text))
                arrow_spans[label.text] = label.span
        elif head.text == "relation":
            relations.append(_parse_relation(p, head))
        else:
            raise ParseError([Diagnostic(head.span, f"unknown statement {head.text!r}",
                                         "expected vertices, arrow or relation")])
        p.end_statement()
    p.expect("}", "'}'", "close the quiver block")
    p.skip_eol()
    if p.peek().kind != "eof":
        p.diags.append(Diagnostic(p.peek().span, "trailing input after the quiver block"))
    if p.diags:
        raise ParseError(p.diags)

    Q = Quiver(tuple(vertices), tuple(arrows))
    gens: list[LinearCombo] = []
    for terms, span in relations:
        built = []
        ok = True
        for coeff, labels in terms:
            steps = []
            for tok in labels:
                if tok.text not in arrow_spans:
                    p.diags.append(Diagnostic(tok.span, f"unknown arrow {tok.text!r}",
                                              "declare it with: arrow LABEL: SRC -> DST"))
                    ok = False
                    break
                steps.append(Step(Q.arrow(tok.text)))
            if not ok:
                break
            for left, right, tok in zip(steps, steps[1:], labels[1:]):
                if left.end != right.start:
                    p.diags.append(Diagnostic(
                        tok.span, f"{left.arrow.label} ends at {left.end!r} but "
                        f"{right.arrow.label} starts at {right.start!r}",
                        "terms are read left to right: a.b means a then b"))
                    ok = False
                    break
            if not ok:
                break
            built.append((Walk.of(steps), coeff))
        if not ok:
            continue
        ends = {(w.start, w.end) for w, _ in built}
        if len(ends) > 1:
            desc = ", ".join(f"{'.'.join(w.labels())}: {w.start}->{w.end}" for w, _ in built)
            p.diags.append(Diagnostic(span, f"relation terms are not parallel ({desc})",
                                      "all terms must share start and end vertices"))
            continue
        gens.append(LinearCombo.build(built))
        gen_span = span
        if any(len(w) < 2 for w, _ in built):
            short = next(w for w, _ in built if len(w) < 2)
            p.diags.append(Diagnostic(
                gen_span, f"relation contains {short} of length {len(short)}; "
                "admissible relations only use paths of length at least 2",
                "relations must lie in the square of the arrow ideal"))
    if p.diags:
        raise ParseError(p.diags)
    B = BoundQuiver(Q, gens, name=name, validate=False)
    report = check_presentation(B)
    errors = [d for d in report.diagnostics if d.severity == "error"]
    if errors:
        span = SourceSpan(file, kw.span.line, kw.span.column, kw.span.end_column)
        raise ParseError([Diagnostic(span, d.message) for d in errors])
    return B


def _parse_relation(p: _Parser, head: Token):
    terms = []
    span = head.span
    sign = Fraction(1)
    first = True
    while True:
        tok = p.peek()
        if tok.kind in ("+", "-"):
            p.next()
            sign = Fraction(-1 if tok.kind == "-" else 1)
        elif not first:
            break
        coeff = Fraction(1)
        if p.peek().kind == "number":
            num = p.next()
            coeff = Fraction(num.text)
            p.expect("*", "'*' after a coefficient", "write coefficients as 2*a.b")
        labels = [p.expect("ident", "an arrow label")]
        while p.peek().kind == ".":
            p.next()
            labels.append(p.expect("ident", "an arrow label after '.'"))
        span = span.cover(labels[-1].span)
        terms.append((sign * coeff, labels))
        sign = Fraction(1)
        first = False
    return terms, span


def load(path: str | Path) -> BoundQuiver:
    path = Path(path)
    return parse(path.read_text(encoding="utf-8"), str(path))


def serialize(B: BoundQuiver) -> str:
    Q = B.quiver
    lines = [f"quiver {B.name} {{", "  vertices: " + " ".join(Q.vertices)]
    for a in Q.arrows:
        lines.append(f"  arrow {a.label}: {a.source} -> {a.target}")
    for g in B.generators:
        lines.append("  relation " + format_combo(g))
    lines.append("}")
    return "\n".join(lines) + "\n"
