"""Textual syntax for polynomials and rational functions in test fixtures.

Grammar: integer or rational coefficients, `i` for the imaginary unit,
`^` for exponents, variables x1..xn or u1..un, +, -, *, / and parentheses.
Output is the graded-lex sorted canonical form; parse(write(p)) == p.
"""

from __future__ import annotations

import re

from .mpoly import MPoly
from .ratfunc import RatFunc
from .scalars import ONE, RAT, Scalar

_TOKEN = re.compile(r"\s*(\d+|[A-Za-z]\w*|\^|\*|/|\+|-|\(|\))")


class ParseError(ValueError):
    pass


def _tokenize(s: str) -> list[str]:
    out = []
    pos = 0
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if not m:
            if s[pos:].strip():
                raise ParseError(f"bad character at {s[pos:]!r}")
            break
        out.append(m.group(1))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, tokens: list[str], nvars: int, prefix: str):
        self.toks = tokens
        self.pos = 0
        self.nvars = nvars
        self.prefix = prefix

    def peek(self) -> str | None:
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def take(self) -> str:
        t = self.peek()
        if t is None:
            raise ParseError("unexpected end of input")
        self.pos += 1
        return t

    def parse_expr(self) -> RatFunc:
        sign = 1
        while self.peek() in ("+", "-"):
            if self.take() == "-":
                sign = -sign
        out = self.parse_term()
        if sign < 0:
            out = -out
        while self.peek() in ("+", "-"):
            op = self.take()
            term = self.parse_term()
            out = out + term if op == "+" else out - term
        return out

    def parse_term(self) -> RatFunc:
        out = self.parse_factor()
        while True:
            t = self.peek()
            if t == "*":
                self.take()
                out = out * self.parse_factor()
            elif t == "/":
                self.take()
                out = out / self.parse_factor()
            elif t is not None and (t.isalnum() or t == "("):
                # implicit multiplication: 2x1, x1(x2-1)
                out = out * self.parse_factor()
            else:
                return out

    def parse_factor(self) -> RatFunc:
        base = self.parse_base()
        if self.peek() == "^":
            self.take()
            neg = False
            while self.peek() == "-":
                self.take()
                neg = not neg
            e = self.take()
            if not e.isdigit():
                raise ParseError(f"exponent expected, got {e!r}")
            k = int(e)
            return base ** (-k if neg else k)
        return base

    def parse_base(self) -> RatFunc:
        t = self.take()
        if t == "(":
            inner = self.parse_expr()
            if self.take() != ")":
                raise ParseError("expected ')'")
            return inner
        if t == "-":
            return -self.parse_base()
        if t.isdigit():
            return RatFunc.const(self.nvars, Scalar(int(t)))
        if t == "i":
            return RatFunc.const(self.nvars, Scalar.i())
        m = re.fullmatch(r"([A-Za-z])(\d+)", t)
        if m and m.group(1) in ("x", "u", self.prefix):
            idx = int(m.group(2))
            if not 1 <= idx <= self.nvars:
                raise ParseError(f"variable {t} out of range 1..{self.nvars}")
            return RatFunc.var(self.nvars, idx - 1)
        raise ParseError(f"unexpected token {t!r}")


def parse_ratfunc(s: str, nvars: int, prefix: str = "x") -> RatFunc:
    p = _Parser(_tokenize(s), nvars, prefix)
    out = p.parse_expr()
    if p.peek() is not None:
        raise ParseError(f"trailing input at {p.toks[p.pos:]!r}")
    return out


def parse_poly(s: str, nvars: int, prefix: str = "x") -> MPoly:
    f = parse_ratfunc(s, nvars, prefix)
    if not f.is_poly():
        raise ParseError("expected a polynomial, got a genuine fraction")
    return f.num.mul_scalar(f.den.const_value().inv())


def _rat_str(q) -> str:
    return str(q) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _scalar_str(c: Scalar, need_parens: bool) -> str:
    if not c.im:
        s = _rat_str(c.re)
    elif not c.re:
        s = "i" if c.im == RAT(1) else ("-i" if c.im == RAT(-1) else f"{_rat_str(c.im)}*i")
    else:
        im = c.im
        op = "+" if im > 0 else "-"
        ims = "i" if abs(im) == RAT(1) else f"{_rat_str(abs(im))}*i"
        s = f"{_rat_str(c.re)}{op}{ims}"
    if need_parens and ("+" in s[1:] or "-" in s[1:] or "/" in s):
        return f"({s})"
    return s


def poly_to_string(p: MPoly, prefix: str = "x") -> str:
    if p.is_zero():
        return "0"
    parts: list[str] = []
    for exps, c in p.sorted_items():
        mono = "*".join(
            f"{prefix}{i + 1}" if e == 1 else f"{prefix}{i + 1}^{e}"
            for i, e in enumerate(exps)
            if e
        )
        cs = _scalar_str(c, need_parens=bool(mono))
        if mono:
            term = mono if cs == "1" else (f"-{mono}" if cs == "-1" else f"{cs}*{mono}")
        else:
            term = cs
        parts.append(term)
    out = parts[0]
    for t in parts[1:]:
        out += t if t.startswith("-") else f"+{t}"
    return out


def ratfunc_to_string(f: RatFunc, prefix: str = "x") -> str:
    num = poly_to_string(f.num, prefix)
    if f.is_poly() and f.den.const_value().is_one():
        return num
    den = poly_to_string(f.den, prefix)
    return f"({num})/({den})"
