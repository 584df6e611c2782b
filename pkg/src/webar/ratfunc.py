"""Reduced rational functions num/den over the Gaussian rationals.

Invariants: gcd(num, den) is constant, den is nonzero with graded-lex
leading coefficient 1, and zero is 0/1.  Equality of reduced forms is then
structural, so rational functions can be hashed and compared directly.
"""

from __future__ import annotations

from typing import Sequence

from .mpoly import MPoly, poly_gcd
from .scalars import ONE, Scalar, ZERO


class ZeroDenominator(ZeroDivisionError):
    pass


class RatFunc:
    __slots__ = ("num", "den")

    def __init__(self, num: MPoly, den: MPoly, *, _reduced: bool = False):
        if den.is_zero():
            raise ZeroDenominator("zero denominator")
        if num.nvars != den.nvars:
            raise ValueError("nvars mismatch")
        if not _reduced:
            num, den = _reduce(num, den)
        self.num = num
        self.den = den

    # -- constructors -----------------------------------------------------

    @staticmethod
    def zero(nvars: int) -> "RatFunc":
        return RatFunc(MPoly.zero(nvars), MPoly.const(nvars, ONE), _reduced=True)

    @staticmethod
    def const(nvars: int, c: Scalar) -> "RatFunc":
        return RatFunc(MPoly.const(nvars, c), MPoly.const(nvars, ONE), _reduced=True)

    @staticmethod
    def var(nvars: int, i: int) -> "RatFunc":
        return RatFunc(MPoly.var(nvars, i), MPoly.const(nvars, ONE), _reduced=True)

    @staticmethod
    def from_poly(p: MPoly) -> "RatFunc":
        return RatFunc(p, MPoly.const(p.nvars, ONE), _reduced=True)

    # -- predicates ------------------------------------------------------

    @property
    def nvars(self) -> int:
        return self.num.nvars

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_const(self) -> bool:
        return self.num.is_const() and self.den.is_const()

    def const_value(self) -> Scalar:
        return self.num.const_value() * self.den.const_value().inv()

    def is_poly(self) -> bool:
        return self.den.is_const()

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: "RatFunc") -> "RatFunc":
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        p, q = self.num, self.den
        r, s = other.num, other.den
        g0 = q if q == s else poly_gcd(q, s)
        if g0.is_const():
            # reduced inputs with coprime denominators stay reduced
            num = p * s + r * q
            if num.is_zero():
                return RatFunc.zero(self.nvars)
            return _normalize_lc(num, q * s)
        q1 = q.exact_div(g0)
        s1 = s.exact_div(g0)
        assert q1 is not None and s1 is not None
        num = p * s1 + r * q1
        if num.is_zero():
            return RatFunc.zero(self.nvars)
        t = poly_gcd(num, g0)
        if not t.is_const():
            num = num.exact_div(t)
            g0 = g0.exact_div(t)
            assert num is not None and g0 is not None
        return _normalize_lc(num, q1 * s1 * g0)

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den, _reduced=True)

    def __sub__(self, other: "RatFunc") -> "RatFunc":
        return self + (-other)

    def __mul__(self, other: "RatFunc") -> "RatFunc":
        if self.is_zero() or other.is_zero():
            return RatFunc.zero(self.nvars)
        p, q = self.num, self.den
        r, s = other.num, other.den
        g1 = poly_gcd(p, s)
        if not g1.is_const():
            p = p.exact_div(g1)
            s = s.exact_div(g1)
        g2 = poly_gcd(r, q)
        if not g2.is_const():
            r = r.exact_div(g2)
            q = q.exact_div(g2)
        return _normalize_lc(p * r, q * s)

    def mul_scalar(self, c: Scalar) -> "RatFunc":
        if c.is_zero():
            return RatFunc.zero(self.nvars)
        return RatFunc(self.num.mul_scalar(c), self.den, _reduced=True)

    def inv(self) -> "RatFunc":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        return _normalize_lc(self.den, self.num)

    def __truediv__(self, other: "RatFunc") -> "RatFunc":
        return self * other.inv()

    def __pow__(self, k: int) -> "RatFunc":
        if k < 0:
            return self.inv() ** (-k)
        # reduced input: num^k / den^k is already reduced
        return _normalize_lc(self.num ** k, self.den ** k)

    def conj(self) -> "RatFunc":
        """Coefficientwise complex conjugate."""
        num = MPoly(self.num.nvars, {k: c.conj() for k, c in self.num.terms.items()})
        den = MPoly(self.den.nvars, {k: c.conj() for k, c in self.den.terms.items()})
        return RatFunc(num, den)

    def derivative(self, i: int) -> "RatFunc":
        dn = self.num.derivative(i)
        dd = self.den.derivative(i)
        if dd.is_zero():
            if dn.is_zero():
                return RatFunc.zero(self.nvars)
            return RatFunc(dn, self.den)
        num = dn * self.den - self.num * dd
        if num.is_zero():
            return RatFunc.zero(self.nvars)
        return RatFunc(num, self.den * self.den)

    def eval(self, point: Sequence[Scalar]) -> Scalar:
        d = self.den.eval(point)
        if d.is_zero():
            raise ZeroDivisionError("evaluation at a pole")
        return self.num.eval(point) * d.inv()

    def compose(self, args: Sequence["RatFunc"]) -> "RatFunc":
        """Substitute args[i] for variable i.  args live in a common space."""
        if len(args) != self.nvars:
            raise ValueError("wrong number of substitution arguments")
        num_n, num_d = _compose_poly(self.num, args)
        den_n, den_d = _compose_poly(self.den, args)
        if den_n.is_zero():
            raise ZeroDenominator("denominator vanishes identically under substitution")
        return RatFunc(num_n * den_d, num_d * den_n)

    # -- comparison --------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self) -> str:
        from .parsing import ratfunc_to_string

        return f"RatFunc({ratfunc_to_string(self)!r})"


def ratfunc_normalize(num: MPoly, den: MPoly) -> RatFunc:
    """Reduced fraction num/den (the RatFunc constructor's contract)."""
    return RatFunc(num, den)


def _reduce(num: MPoly, den: MPoly) -> tuple[MPoly, MPoly]:
    if num.is_zero():
        return num, MPoly.const(den.nvars, ONE)
    g = poly_gcd(num, den)
    if not g.is_const():
        num = num.exact_div(g)
        den = den.exact_div(g)
        assert num is not None and den is not None
    lc = den.leading_coeff()
    if not lc.is_one():
        inv = lc.inv()
        num = num.mul_scalar(inv)
        den = den.mul_scalar(inv)
    return num, den


def _normalize_lc(num: MPoly, den: MPoly) -> RatFunc:
    """Fraction known to be reduced; only fix the denominator normalization."""
    lc = den.leading_coeff()
    if not lc.is_one():
        inv = lc.inv()
        num = num.mul_scalar(inv)
        den = den.mul_scalar(inv)
    return RatFunc(num, den, _reduced=True)


def _compose_poly(p: MPoly, args: Sequence[RatFunc]) -> tuple[MPoly, MPoly]:
    """p(args) as a fraction N/D with D = prod den_i^{deg_i(p)}.

    Works purely with polynomial arithmetic (no intermediate reductions).
    """
    m = args[0].nvars
    if p.is_zero():
        return MPoly.zero(m), MPoly.const(m, ONE)
    n = p.nvars
    degs = [p.degree_in(i) for i in range(n)]
    num_pows: list[list[MPoly]] = []
    den_pows: list[list[MPoly]] = []
    for i in range(n):
        d = max(degs[i], 0)
        npw = [MPoly.const(m, ONE)]
        dpw = [MPoly.const(m, ONE)]
        for _ in range(d):
            npw.append(npw[-1] * args[i].num)
            dpw.append(dpw[-1] * args[i].den)
        num_pows.append(npw)
        den_pows.append(dpw)
    total = MPoly.zero(m)
    for exps, c in p.items():
        term = MPoly.const(m, c)
        for i, e in enumerate(exps):
            if e:
                term = term * num_pows[i][e]
            if degs[i] > e:
                term = term * den_pows[i][degs[i] - e]
        total = total + term
    D = MPoly.const(m, ONE)
    for i in range(n):
        if degs[i] > 0:
            D = D * den_pows[i][degs[i]]
    return total, D
