"""Text form of polynomials and the embedded degree-40 polynomial F.

Grammar (whitespace insignificant)::

    poly  := term (('+'|'-') term)*
    term  := [coeff] ('*'? var ('^' uint)?)*
    coeff := uint ['/' uint]

A leading sign is allowed on the first term.  Variables must belong to
the declared VarSet.
"""

from __future__ import annotations

import hashlib
from functools import lru_cache
from importlib import resources
from typing import List, Sequence, Tuple

from gmpy2 import mpq

from .poly import Exponent, MvPoly, VarSet, VarSetMismatch

F_VARS = VarSet(["x", "y", "z", "X"])

# sha256 of the canonical text of F; guards the transcription
APPENDIX_SHA256 = "5559d023aad0489647f5714ec4db4fab2f32dd9421e7d92ff513f7a5175dd1a8"
APPENDIX_TERM_COUNT = 989


class ParseError(ValueError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


class _Lexer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.n = len(text)

    def skip(self):
        while self.pos < self.n and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < self.n else ""

    def take(self, ch: str):
        if self.peek() != ch:
            raise ParseError(f"expected {ch!r}", self.pos)
        self.pos += 1

    def uint(self) -> int:
        self.skip()
        start = self.pos
        while self.pos < self.n and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise ParseError("expected an integer", start)
        return int(self.text[start:self.pos])

    def ident(self) -> Tuple[str, int]:
        self.skip()
        start = self.pos
        while self.pos < self.n and (self.text[self.pos].isalnum() or self.text[self.pos] == "_"):
            self.pos += 1
        return self.text[start:self.pos], start


def parse(text: str, varset: VarSet = F_VARS) -> MvPoly:
    """Parse ``text`` into an :class:`MvPoly` over ``varset``."""
    lx = _Lexer(text)
    terms: dict = {}
    n = len(varset)
    sign = 1
    first = True
    while True:
        ch = lx.peek()
        if ch in "+-":
            lx.pos += 1
            sign = -1 if ch == "-" else 1
        elif not first:
            if ch == "":
                break
            raise ParseError(f"unexpected {ch!r}", lx.pos)
        first = False
        coeff = mpq(1)
        exp = [0] * n
        seen_factor = False
        if lx.peek().isdigit():
            coeff = mpq(lx.uint())
            if lx.peek() == "/":
                lx.pos += 1
                d = lx.uint()
                if d == 0:
                    raise ParseError("zero denominator", lx.pos)
                coeff = coeff / d
            seen_factor = True
        while True:
            ch = lx.peek()
            if ch == "*":
                lx.pos += 1
                ch = lx.peek()
                if not (ch.isalpha() or ch == "_"):
                    raise ParseError("expected a variable after '*'", lx.pos)
            if not (ch.isalpha() or ch == "_"):
                break
            name, at = lx.ident()
            if name not in varset.index:
                raise ParseError(f"unknown variable {name!r}", at)
            k = 1
            if lx.peek() == "^":
                lx.pos += 1
                k = lx.uint()
            exp[varset.index[name]] += k
            seen_factor = True
        if not seen_factor:
            raise ParseError("empty term", lx.pos)
        key = tuple(exp)
        c = terms.get(key, 0) + sign * coeff
        if c:
            terms[key] = c
        else:
            terms.pop(key, None)
        if lx.peek() == "":
            break
    return MvPoly(varset, terms)


def canonical_key(varset: VarSet, main_var: str | None):
    if main_var is None:
        return lambda e: e
    i = varset.index[main_var]
    return lambda e: (e[i],) + e[:i] + e[i + 1:]


def _default_main(varset: VarSet) -> str | None:
    return "X" if "X" in varset.index else None


def _format_monomial(varset: VarSet, e: Exponent, main_var: str | None) -> List[str]:
    names = list(varset.names)
    order = list(range(len(names)))
    if main_var is not None:
        i = varset.index[main_var]
        order.remove(i)
        order.append(i)
    out = []
    for i in order:
        k = e[i]
        if k == 1:
            out.append(names[i])
        elif k:
            out.append(f"{names[i]}^{k}")
    return out


def serialize(p: MvPoly, main_var: str | None = "auto", *, line_width: int | None = None) -> str:
    """Deterministic text for ``p``.

    Terms are sorted by descending degree in ``main_var`` and then lex in
    the remaining variables (VarSet order).  ``main_var`` defaults to ``X``
    when the VarSet has one.
    """
    if main_var == "auto":
        main_var = _default_main(p.vars)
    if not p:
        return "0"
    key = canonical_key(p.vars, main_var)
    items = sorted(p.terms.items(), key=lambda t: key(t[0]), reverse=True)
    pieces = []
    for idx, (e, c) in enumerate(items):
        mono = _format_monomial(p.vars, e, main_var)
        neg = c < 0
        a = -c if neg else c
        if a == 1 and mono:
            body = "*".join(mono)
        else:
            num = str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"
            body = "*".join([num] + mono)
        if idx == 0:
            pieces.append(("-" if neg else "") + body)
        else:
            pieces.append(("- " if neg else "+ ") + body)
    if line_width is None:
        return " ".join(pieces)
    lines, cur = [], ""
    for piece in pieces:
        if cur and len(cur) + 1 + len(piece) > line_width:
            lines.append(cur)
            cur = piece
        else:
            cur = f"{cur} {piece}" if cur else piece
    lines.append(cur)
    return "\n".join(lines)


def diff(p: MvPoly, q: MvPoly) -> List[Tuple[Exponent, mpq, mpq]]:
    """Monomials whose coefficients differ, as ``(exp, coeff_p, coeff_q)``."""
    if p.vars != q.vars:
        raise VarSetMismatch(f"{p.vars} vs {q.vars}")
    key = canonical_key(p.vars, _default_main(p.vars))
    out = []
    for e in set(p.terms) | set(q.terms):
        a, b = p.coeff(e), q.coeff(e)
        if a != b:
            out.append((e, a, b))
    out.sort(key=lambda t: key(t[0]), reverse=True)
    return out


def format_diff(entries: Sequence[Tuple[Exponent, mpq, mpq]], varset: VarSet = F_VARS,
                main_var: str | None = "X") -> List[str]:
    lines = []
    for e, a, b in entries:
        mono = "*".join(_format_monomial(varset, e, main_var)) or "1"
        deg = e[varset.index[main_var]] if main_var else 0
        lines.append(f"deg={deg} monomial={mono} constructed={a} appendix={b}")
    return lines


def appendix_text() -> str:
    return resources.files("galois40.data").joinpath("appendix_F.txt").read_text()


def text_checksum(text: str) -> str:
    return hashlib.sha256(" ".join(text.split()).encode()).hexdigest()


@lru_cache(maxsize=1)
def appendix_polynomial() -> MvPoly:
    """The embedded F(x, y, z; X), parsed once."""
    return parse(appendix_text(), F_VARS)


def check_appendix(text: str | None = None) -> List[str]:
    """Self-check of the embedded transcription; returns a list of failures."""
    text = appendix_text() if text is None else text
    problems = []
    if text_checksum(text) != APPENDIX_SHA256:
        problems.append("checksum mismatch")
    try:
        F = parse(text, F_VARS)
    except ParseError as exc:
        return problems + [f"parse error: {exc}"]
    if len(F) != APPENDIX_TERM_COUNT:
        problems.append(f"term count {len(F)} != {APPENDIX_TERM_COUNT}")
    col = F.univariate_view("X")
    x, y, z, X = F_VARS.gens()
    expected = {40: 19683 + 0 * x, 38: -708588 * x, 37: -118098 * y, 36: 8621154 * x**2}
    if len(col) != 41:
        problems.append(f"X-degree {len(col) - 1} != 40")
        return problems
    if col[39]:
        problems.append("X^39 coefficient is not zero")
    for k, want in expected.items():
        if col[k] != want:
            problems.append(f"X^{k} coefficient mismatch")
    c0 = col[0]
    if c0.coeff((20, 0, 0, 0)) != 27 or c0.coeff((0, 0, 8, 0)) != 3:
        problems.append("constant-in-X block does not run from 27x^20 to 3z^8")
    content, _ = F.content_and_primitive()
    if content != 1:
        problems.append(f"content {content} != 1")
    return problems
