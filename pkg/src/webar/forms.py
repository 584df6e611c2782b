"""Exterior algebra with rational and logarithmic coefficients.

A LogExpr is R_0 + sum_nu R_nu * Log(l_nu) where the l_nu are forms of a
fixed braid-arrangement basis (plus formal Log(p) symbols for primes p
coming from constants).  The Log symbols are linearly independent over the
rational functions, so a LogExpr is zero iff its rational part and every
log coefficient vanish; all zero-tests below rely on that.

Log arguments are confined to the basis: an argument with an irreducible
factor outside the arrangement is a hard error, which keeps equality of
expressions decidable.  Log(-1) is discarded (the chamber convention:
identities are verified with absolute values inside the logarithms) and
Log of a positive rational constant expands into prime symbols.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Iterable, Sequence

from .linforms import LinFormBasis, braid_basis, factor_over_basis, rational_prime_factors
from .ratfunc import RatFunc
from .scalars import ONE, Scalar, ZERO


class DimensionMismatch(ValueError):
    pass


# ---------------------------------------------------------------------------
# Rational maps
# ---------------------------------------------------------------------------


class RatMap:
    """A rational map C^n -> C^m given by m RatFunc components in n variables."""

    __slots__ = ("nvars", "components", "inverse")

    def __init__(self, components: Sequence[RatFunc], inverse: "RatMap | None" = None):
        comps = list(components)
        if not comps:
            raise ValueError("empty map")
        n = comps[0].nvars
        if any(c.nvars != n for c in comps):
            raise DimensionMismatch("components must share nvars")
        self.nvars = n
        self.components = comps
        self.inverse = inverse

    @property
    def ncomps(self) -> int:
        return len(self.components)

    @staticmethod
    def identity(n: int) -> "RatMap":
        m = RatMap([RatFunc.var(n, i) for i in range(n)])
        m.inverse = m
        return m

    def compose(self, other: "RatMap") -> "RatMap":
        """self after other: (self . other)(x) = self(other(x))."""
        if self.nvars != other.ncomps:
            raise DimensionMismatch("composition arity mismatch")
        comps = [c.compose(other.components) for c in self.components]
        inv = None
        if self.inverse is not None and other.inverse is not None:
            inv = other.inverse.compose_no_inv(self.inverse)
        return RatMap(comps, inv)

    def compose_no_inv(self, other: "RatMap") -> "RatMap":
        return RatMap([c.compose(other.components) for c in self.components])

    def eval(self, point: Sequence[Scalar]) -> list[Scalar]:
        return [c.eval(point) for c in self.components]

    def jacobian(self) -> list[list[RatFunc]]:
        return [[c.derivative(j) for j in range(self.nvars)] for c in self.components]

    def is_identity(self) -> bool:
        return self.ncomps == self.nvars and all(
            c == RatFunc.var(self.nvars, i) for i, c in enumerate(self.components)
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, RatMap):
            return NotImplemented
        return self.components == other.components

    def __hash__(self):
        return hash(tuple(self.components))

    def __repr__(self) -> str:
        return f"RatMap({self.components!r})"


# ---------------------------------------------------------------------------
# Logarithmic scalar expressions
# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class LogSym:
    """Either a basis form (kind 'form', key = basis index) or Log of a prime."""

    kind: str
    key: int

    def name(self, basis: LinFormBasis | None = None) -> str:
        if self.kind == "prime":
            return f"Log({self.key})"
        if basis is not None:
            return f"Log|{basis.names[self.key]}|"
        return f"Log[form {self.key}]"


class LogExpr:
    __slots__ = ("nvars", "rational", "logs")

    def __init__(self, nvars: int, rational: RatFunc, logs: dict[LogSym, RatFunc] | None = None):
        self.nvars = nvars
        self.rational = rational
        self.logs = {s: c for s, c in (logs or {}).items() if not c.is_zero()}

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(nvars: int) -> "LogExpr":
        return LogExpr(nvars, RatFunc.zero(nvars))

    @staticmethod
    def from_rat(f: RatFunc) -> "LogExpr":
        return LogExpr(f.nvars, f)

    @staticmethod
    def log_abs(arg: RatFunc, coeff: RatFunc | None = None) -> "LogExpr":
        """coeff * Log|arg| reduced over the braid basis of arg's space.

        The argument must factor over the arrangement; its sign is dropped
        and a rational constant contributes prime symbols.
        """
        n = arg.nvars
        basis = braid_basis(n)
        const, exps = factor_over_basis(arg, basis)
        if not const.is_rational():
            raise ValueError("Log of a non-real constant is outside the model")
        if coeff is None:
            coeff = RatFunc.const(n, ONE)
        logs: dict[LogSym, RatFunc] = {}
        for k, e in exps.items():
            logs[LogSym("form", k)] = coeff.mul_scalar(Scalar(e))
        c = abs(const.re)
        if c != 1:
            for p, e in rational_prime_factors(c).items():
                sym = LogSym("prime", p)
                prev = logs.get(sym, RatFunc.zero(n))
                logs[sym] = prev + coeff.mul_scalar(Scalar(e))
        return LogExpr(n, RatFunc.zero(n), logs)

    # -- predicates ---------------------------------------------------------

    def is_zero(self) -> bool:
        return self.rational.is_zero() and not self.logs

    def is_rational(self) -> bool:
        return not self.logs

    # -- arithmetic ------------------------------------------------------

    def _check(self, other: "LogExpr"):
        if self.nvars != other.nvars:
            raise DimensionMismatch("nvars mismatch")

    def __add__(self, other: "LogExpr") -> "LogExpr":
        self._check(other)
        logs = dict(self.logs)
        for s, c in other.logs.items():
            acc = logs.get(s)
            v = c if acc is None else acc + c
            if v.is_zero():
                logs.pop(s, None)
            else:
                logs[s] = v
        return LogExpr(self.nvars, self.rational + other.rational, logs)

    def __neg__(self) -> "LogExpr":
        return LogExpr(self.nvars, -self.rational, {s: -c for s, c in self.logs.items()})

    def __sub__(self, other: "LogExpr") -> "LogExpr":
        return self + (-other)

    def mul_rat(self, f: RatFunc) -> "LogExpr":
        if f.is_zero():
            return LogExpr.zero(self.nvars)
        return LogExpr(
            self.nvars,
            self.rational * f,
            {s: c * f for s, c in self.logs.items()},
        )

    def mul_scalar(self, c: Scalar) -> "LogExpr":
        return self.mul_rat(RatFunc.const(self.nvars, c))

    def derivative(self, i: int) -> "LogExpr":
        """d/dx_i; the log terms feed dl/l into the rational part."""
        basis = braid_basis(self.nvars)
        rat = self.rational.derivative(i)
        logs: dict[LogSym, RatFunc] = {}
        for s, c in self.logs.items():
            if s.kind == "form":
                form = basis.forms[s.key]
                dform = form.derivative(i)
                if not dform.is_zero():
                    rat = rat + c * RatFunc(dform, form)
            dc = c.derivative(i)
            if not dc.is_zero():
                logs[s] = dc
        return LogExpr(self.nvars, rat, logs)

    def compose(self, args: Sequence[RatFunc]) -> "LogExpr":
        """Substitute variables; log arguments re-factor over the target basis."""
        m = args[0].nvars
        rat = self.rational.compose(args) if not self.rational.is_zero() else RatFunc.zero(m)
        out = LogExpr(m, rat)
        src_basis = braid_basis(self.nvars)
        for s, c in self.logs.items():
            cc = c.compose(args)
            if cc.is_zero():
                continue
            if s.kind == "prime":
                out = out + LogExpr(m, RatFunc.zero(m), {s: cc})
            else:
                arg = RatFunc.from_poly(src_basis.forms[s.key]).compose(args)
                out = out + LogExpr.log_abs(arg, coeff=cc)
        return out

    def eval_components(self, point: Sequence[Scalar]) -> list[Scalar]:
        """Rational part and all log coefficients at a point (zero-test data)."""
        out = [self.rational.eval(point)]
        for s in sorted(self.logs):
            out.append(self.logs[s].eval(point))
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, LogExpr):
            return NotImplemented
        return (
            self.nvars == other.nvars
            and self.rational == other.rational
            and self.logs == other.logs
        )

    def __hash__(self):
        return hash((self.nvars, self.rational, frozenset(self.logs.items())))

    def __repr__(self) -> str:
        if self.is_rational():
            return f"LogExpr({self.rational!r})"
        return f"LogExpr({self.rational!r} + {len(self.logs)} log terms)"


# ---------------------------------------------------------------------------
# Alternating forms
# ---------------------------------------------------------------------------

Index = tuple[int, ...]


class KForm:
    """Degree-k alternating form; coefficients on strictly increasing index
    tuples of variables (0-based)."""

    __slots__ = ("nvars", "degree", "coeffs")

    def __init__(self, nvars: int, degree: int, coeffs: dict[Index, LogExpr] | None = None):
        if degree < 0 or degree > nvars:
            raise DimensionMismatch("degree out of range")
        self.nvars = nvars
        self.degree = degree
        self.coeffs = {}
        for idx, c in (coeffs or {}).items():
            if len(idx) != degree or list(idx) != sorted(set(idx)):
                raise ValueError(f"bad index tuple {idx}")
            if not c.is_zero():
                self.coeffs[idx] = c

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(nvars: int, degree: int) -> "KForm":
        return KForm(nvars, degree, {})

    @staticmethod
    def scalar(nvars: int, value: LogExpr) -> "KForm":
        return KForm(nvars, 0, {(): value})

    @staticmethod
    def dx(nvars: int, i: int) -> "KForm":
        return KForm(nvars, 1, {(i,): LogExpr.from_rat(RatFunc.const(nvars, ONE))})

    @staticmethod
    def d_of(f: RatFunc) -> "KForm":
        n = f.nvars
        coeffs = {}
        for i in range(n):
            d = f.derivative(i)
            if not d.is_zero():
                coeffs[(i,)] = LogExpr.from_rat(d)
        return KForm(n, 1, coeffs)

    @staticmethod
    def dlog(f: RatFunc) -> "KForm":
        """df/f as a rational 1-form."""
        return KForm.d_of(f).mul_rat(f.inv())

    @staticmethod
    def volume_like(nvars: int, indices: Sequence[int], coeff: LogExpr) -> "KForm":
        return KForm(nvars, len(indices), {tuple(indices): coeff})

    # -- predicates ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def nonzero_entries(self) -> list[tuple[Index, LogSym | None]]:
        """Witnesses of non-vanishing: (frame index, log symbol or None)."""
        out = []
        for idx in sorted(self.coeffs):
            c = self.coeffs[idx]
            if not c.rational.is_zero():
                out.append((idx, None))
            for s in sorted(c.logs):
                out.append((idx, s))
        return out

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other: "KForm"):
        if self.nvars != other.nvars:
            raise DimensionMismatch("nvars mismatch")

    def __add__(self, other: "KForm") -> "KForm":
        self._check(other)
        if self.degree != other.degree:
            raise DimensionMismatch("degree mismatch")
        coeffs = dict(self.coeffs)
        for idx, c in other.coeffs.items():
            acc = coeffs.get(idx)
            v = c if acc is None else acc + c
            if v.is_zero():
                coeffs.pop(idx, None)
            else:
                coeffs[idx] = v
        out = KForm(self.nvars, self.degree)
        out.coeffs = coeffs
        return out

    def __neg__(self) -> "KForm":
        out = KForm(self.nvars, self.degree)
        out.coeffs = {idx: -c for idx, c in self.coeffs.items()}
        return out

    def __sub__(self, other: "KForm") -> "KForm":
        return self + (-other)

    def mul_rat(self, f: RatFunc) -> "KForm":
        out = KForm(self.nvars, self.degree)
        if not f.is_zero():
            out.coeffs = {idx: c.mul_rat(f) for idx, c in self.coeffs.items()}
        return out

    def mul_scalar(self, c: Scalar) -> "KForm":
        return self.mul_rat(RatFunc.const(self.nvars, c))

    def mul_logexpr(self, g: LogExpr) -> "KForm":
        """g * self; only legal when no product of two log terms arises."""
        coeffs = {}
        for idx, c in self.coeffs.items():
            if c.logs and g.logs:
                raise ValueError("product of two logarithmic coefficients")
            if c.logs:
                coeffs[idx] = c.mul_rat(g.rational)
            else:
                coeffs[idx] = g.mul_rat(c.rational)
        return KForm(self.nvars, self.degree, coeffs)


def _merge_sign(a: Index, b: Index) -> tuple[Index, int] | None:
    """Sorted union with the wedge sign, or None when indices repeat."""
    if set(a) & set(b):
        return None
    merged = []
    sign = 1
    i = j = 0
    while i < len(a) and j < len(b):
        if a[i] < b[j]:
            merged.append(a[i])
            i += 1
        else:
            # b[j] jumps over the remaining entries of a
            if (len(a) - i) % 2:
                sign = -sign
            merged.append(b[j])
            j += 1
    merged.extend(a[i:])
    merged.extend(b[j:])
    return tuple(merged), sign


def wedge(a: KForm, b: KForm) -> KForm:
    """Exterior product; bilinear, alternating, associative."""
    if a.nvars != b.nvars:
        raise DimensionMismatch("nvars mismatch")
    n = a.nvars
    k = a.degree + b.degree
    if k > n:
        return KForm.zero(n, min(k, n)) if k <= n else KForm.zero(n, n)
    out: dict[Index, LogExpr] = {}
    for ia, ca in a.coeffs.items():
        for ib, cb in b.coeffs.items():
            ms = _merge_sign(ia, ib)
            if ms is None:
                continue
            idx, sign = ms
            if ca.logs and cb.logs:
                raise ValueError("wedge would multiply two logarithmic coefficients")
            if ca.logs:
                prod = ca.mul_rat(cb.rational)
            else:
                prod = cb.mul_rat(ca.rational)
            if sign < 0:
                prod = -prod
            acc = out.get(idx)
            v = prod if acc is None else acc + prod
            if v.is_zero():
                out.pop(idx, None)
            else:
                out[idx] = v
    form = KForm(n, k)
    form.coeffs = out
    return form


def wedge_all(forms: Sequence[KForm]) -> KForm:
    out = forms[0]
    for f in forms[1:]:
        out = wedge(out, f)
    return out


def ext_d(omega: KForm) -> KForm:
    """Exterior derivative; d(Log l) contributes dl/l, d(Log p) contributes 0."""
    n = omega.nvars
    out = KForm.zero(n, omega.degree + 1) if omega.degree < n else KForm.zero(n, n)
    if omega.degree >= n:
        return out
    acc: dict[Index, LogExpr] = {}
    for idx, c in omega.coeffs.items():
        for v in range(n):
            if v in idx:
                continue
            dc = c.derivative(v)
            if dc.is_zero():
                continue
            ms = _merge_sign((v,), idx)
            assert ms is not None
            tgt, sign = ms
            if sign < 0:
                dc = -dc
            prev = acc.get(tgt)
            val = dc if prev is None else prev + dc
            if val.is_zero():
                acc.pop(tgt, None)
            else:
                acc[tgt] = val
    out.coeffs = acc
    return out


def _det(mat: list[list[RatFunc]]) -> RatFunc:
    """Determinant by Laplace expansion with zero-skipping (small, sparse)."""
    n = len(mat)
    if n == 0:
        raise ValueError("empty matrix")
    nv = mat[0][0].nvars

    def rec(rows: tuple[int, ...], cols: tuple[int, ...]) -> RatFunc:
        if len(rows) == 1:
            return mat[rows[0]][cols[0]]
        # expand along the row with the fewest nonzero entries
        rpos, best = min(
            enumerate(rows),
            key=lambda t: sum(0 if mat[t[1]][c].is_zero() else 1 for c in cols),
        )
        rest = tuple(r for r in rows if r != best)
        total = RatFunc.zero(nv)
        for cpos, c in enumerate(cols):
            e = mat[best][c]
            if e.is_zero():
                continue
            sub = rec(rest, tuple(cc for cc in cols if cc != c))
            if sub.is_zero():
                continue
            term = e * sub
            total = total + term if (rpos + cpos) % 2 == 0 else total - term
        return total

    idx = tuple(range(n))
    return rec(idx, idx)


def pullback(phi: RatMap, omega: KForm) -> KForm:
    """phi^*(omega); exact, contravariant, log coefficients re-factored."""
    if omega.nvars != phi.ncomps:
        raise DimensionMismatch("form lives in the target of the map")
    n = phi.nvars
    k = omega.degree
    if k > n:
        return KForm.zero(n, n)
    jac = phi.jacobian()
    out = KForm.zero(n, k)
    acc: dict[Index, LogExpr] = {}
    targets = list(combinations(range(n), k)) if k > 0 else [()]
    for idx, c in omega.coeffs.items():
        cc = c.compose(phi.components)
        if cc.is_zero():
            continue
        for tgt in targets:
            if k == 0:
                minor = RatFunc.const(n, ONE)
            else:
                minor = _det([[jac[i][j] for j in tgt] for i in idx])
            if minor.is_zero():
                continue
            term = cc.mul_rat(minor)
            prev = acc.get(tgt)
            val = term if prev is None else prev + term
            if val.is_zero():
                acc.pop(tgt, None)
            else:
                acc[tgt] = val
    out.coeffs = acc
    return out
