"""Sparse multivariate polynomials over the Gaussian rationals.

Terms are stored in a dict keyed by a packed integer: 24 bits per variable,
with the total degree in the highest field and x1 in the next-highest.
Plain integer comparison of packed keys is then exactly the graded
lexicographic order (x1 > x2 > ... > xn), and adding two keys multiplies
the monomials.  Degrees stay far below the 2^24 field width here.

Zero coefficients are never stored; the zero polynomial has an empty dict.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Sequence

from .scalars import ONE, RAT, Scalar, ZERO

_W = 24
_MASK = (1 << _W) - 1


def _encode(exps: Sequence[int]) -> int:
    key = sum(exps)
    for e in exps:
        key = (key << _W) | e
    return key


def _decode(key: int, nvars: int) -> tuple[int, ...]:
    out = [0] * nvars
    for i in range(nvars - 1, -1, -1):
        out[i] = key & _MASK
        key >>= _W
    return tuple(out)


class MPoly:
    """Polynomial in `nvars` variables with Scalar coefficients."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: dict[int, Scalar]):
        self.nvars = nvars
        self.terms = terms

    # -- constructors --------------------------------------------------

    @staticmethod
    def zero(nvars: int) -> "MPoly":
        return MPoly(nvars, {})

    @staticmethod
    def const(nvars: int, c: Scalar) -> "MPoly":
        if c.is_zero():
            return MPoly(nvars, {})
        return MPoly(nvars, {0: c})

    @staticmethod
    def var(nvars: int, i: int) -> "MPoly":
        if not 0 <= i < nvars:
            raise ValueError(f"variable index {i} out of range for nvars={nvars}")
        e = [0] * nvars
        e[i] = 1
        return MPoly(nvars, {_encode(e): ONE})

    @staticmethod
    def from_exponents(nvars: int, items: Iterable[tuple[Sequence[int], Scalar]]) -> "MPoly":
        terms: dict[int, Scalar] = {}
        for exps, c in items:
            if len(exps) != nvars:
                raise ValueError("exponent vector has wrong length")
            if any(e < 0 for e in exps):
                raise ValueError("negative exponent")
            k = _encode(exps)
            acc = terms.get(k)
            c2 = c if acc is None else acc + c
            if c2.is_zero():
                terms.pop(k, None)
            else:
                terms[k] = c2
        return MPoly(nvars, terms)

    # -- views -----------------------------------------------------------

    def items(self) -> Iterator[tuple[tuple[int, ...], Scalar]]:
        n = self.nvars
        for k, c in self.terms.items():
            yield _decode(k, n), c

    def sorted_items(self) -> list[tuple[tuple[int, ...], Scalar]]:
        """Terms in decreasing graded-lex order (canonical output order)."""
        n = self.nvars
        return [(_decode(k, n), self.terms[k]) for k in sorted(self.terms, reverse=True)]

    # -- predicates / measures ---------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_const(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and 0 in self.terms)

    def const_value(self) -> Scalar:
        if not self.terms:
            return ZERO
        if len(self.terms) == 1 and 0 in self.terms:
            return self.terms[0]
        raise ValueError("polynomial is not constant")

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(self.terms) >> (_W * self.nvars)

    def degree_in(self, i: int) -> int:
        if not self.terms:
            return -1
        shift = _W * (self.nvars - 1 - i)
        return max((k >> shift) & _MASK for k in self.terms)

    def variables_used(self) -> list[int]:
        used = [False] * self.nvars
        for k in self.terms:
            for i in range(self.nvars):
                if (k >> (_W * (self.nvars - 1 - i))) & _MASK:
                    used[i] = True
        return [i for i, u in enumerate(used) if u]

    # -- ring operations ---------------------------------------------------

    def _check(self, other: "MPoly"):
        if self.nvars != other.nvars:
            raise ValueError("nvars mismatch")

    def __add__(self, other: "MPoly") -> "MPoly":
        self._check(other)
        big, small = (self.terms, other.terms) if len(self.terms) >= len(other.terms) else (other.terms, self.terms)
        out = dict(big)
        for k, c in small.items():
            acc = out.get(k)
            if acc is None:
                out[k] = c
            else:
                s = acc + c
                if s.is_zero():
                    del out[k]
                else:
                    out[k] = s
        return MPoly(self.nvars, out)

    def __neg__(self) -> "MPoly":
        return MPoly(self.nvars, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "MPoly") -> "MPoly":
        return self + (-other)

    def __mul__(self, other: "MPoly") -> "MPoly":
        self._check(other)
        a, b = self.terms, other.terms
        if not a or not b:
            return MPoly(self.nvars, {})
        if len(a) > len(b):
            a, b = b, a
        out: dict[int, Scalar] = {}
        get = out.get
        for k1, c1 in a.items():
            for k2, c2 in b.items():
                k = k1 + k2
                acc = get(k)
                p = c1 * c2
                if acc is None:
                    out[k] = p
                else:
                    s = acc + p
                    if s.is_zero():
                        del out[k]
                    else:
                        out[k] = s
        return MPoly(self.nvars, out)

    def mul_scalar(self, c: Scalar) -> "MPoly":
        if c.is_zero():
            return MPoly(self.nvars, {})
        if c.is_one():
            return self
        return MPoly(self.nvars, {k: v * c for k, v in self.terms.items()})

    def __pow__(self, k: int) -> "MPoly":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        out = MPoly.const(self.nvars, ONE)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def derivative(self, i: int) -> "MPoly":
        n = self.nvars
        shift = _W * (n - 1 - i)
        drop = (1 << shift) | (1 << (_W * n))  # lowers both e_i and the degree field
        out: dict[int, Scalar] = {}
        for k, c in self.terms.items():
            e = (k >> shift) & _MASK
            if e:
                out[k - drop] = c * Scalar(e)
        return MPoly(n, out)

    def eval(self, point: Sequence[Scalar]) -> Scalar:
        """Evaluate at a tuple of Scalars, with per-variable power caching."""
        n = self.nvars
        caches: list[dict[int, Scalar]] = [{0: ONE, 1: point[i]} for i in range(n)]

        def power(i: int, e: int) -> Scalar:
            c = caches[i]
            got = c.get(e)
            if got is None:
                got = c[e // 2] if e // 2 in c else power(i, e // 2)
                got = got * got
                if e & 1:
                    got = got * point[i]
                c[e] = got
            return got

        total = ZERO
        for k, coeff in self.terms.items():
            v = coeff
            kk = k
            for i in range(n - 1, -1, -1):
                e = kk & _MASK
                kk >>= _W
                if e:
                    v = v * power(i, e)
            total = total + v
        return total

    # -- leading data (graded lex, x1 > x2 > ... ) -------------------------

    def leading_key(self) -> int:
        return max(self.terms)

    def leading_coeff(self) -> Scalar:
        return self.terms[self.leading_key()]

    def monic(self) -> "MPoly":
        """Divide by the graded-lex leading coefficient."""
        if not self.terms:
            return self
        lc = self.leading_coeff()
        if lc.is_one():
            return self
        return self.mul_scalar(lc.inv())

    # -- division ---------------------------------------------------------

    def exact_div(self, g: "MPoly") -> "MPoly | None":
        """Quotient self/g when g divides self exactly, else None."""
        self._check(g)
        if g.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        if self.is_zero():
            return MPoly(self.nvars, {})
        if g.is_const():
            return self.mul_scalar(g.const_value().inv())
        import heapq

        n = self.nvars
        kg = g.leading_key()
        lead = max(self.terms)
        dk0 = lead - kg
        if dk0 < 0 or not _fields_nonneg(dk0, n):
            return None
        cg_inv = g.terms[kg].inv()
        gitems = [(k, c) for k, c in g.terms.items() if k != kg]
        rem = dict(self.terms)
        quo: dict[int, Scalar] = {}
        heap = [-k for k in rem]
        heapq.heapify(heap)
        while heap:
            kr = -heap[0]
            if kr not in rem:  # stale entry
                heapq.heappop(heap)
                continue
            dk = kr - kg
            if dk < 0 or not _fields_nonneg(dk, n):
                return None
            cq = rem.pop(kr) * cg_inv
            heapq.heappop(heap)
            quo[dk] = cq
            for k2, c2 in gitems:
                k = k2 + dk
                acc = rem.get(k)
                p = cq * c2
                if acc is None:
                    rem[k] = -p
                    heapq.heappush(heap, -k)
                else:
                    s = acc - p
                    if s.is_zero():
                        del rem[k]
                    else:
                        rem[k] = s
        return MPoly(n, quo) if not rem else None

    # -- misc ---------------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, MPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        from .parsing import poly_to_string

        return f"MPoly({self.nvars}, {poly_to_string(self)!r})"


def _fields_nonneg(key: int, nvars: int) -> bool:
    """True when every 24-bit field of a key difference is a valid exponent."""
    for _ in range(nvars + 1):
        if key & _MASK and (key & _MASK) > (_MASK >> 1):
            return False
        key >>= _W
    return True


# ---------------------------------------------------------------------------
# GCD.  Strategy: strip monomial content cheaply; certify coprimality in the
# main variable by a univariate image modulo a prime (the image gcd degree
# only ever overestimates the true one, so degree 0 is a proof); otherwise
# run a subresultant polynomial remainder sequence on primitive parts.
# ---------------------------------------------------------------------------

_P = 998244353  # = 119*2^23 + 1, congruent 1 mod 4
_SQRT_M1 = pow(3, (_P - 1) // 4, _P)
if (_SQRT_M1 * _SQRT_M1 + 1) % _P != 0:  # pragma: no cover
    raise AssertionError("bad sqrt(-1) mod p")


def _scalar_mod(c: Scalar) -> int:
    d = int(c.re.denominator)
    re = int(c.re.numerator) % _P if d == 1 else (
        int(c.re.numerator) * pow(d, _P - 2, _P)
    ) % _P
    if not c.im:
        return re
    d = int(c.im.denominator)
    im = int(c.im.numerator) % _P if d == 1 else (
        int(c.im.numerator) * pow(d, _P - 2, _P)
    ) % _P
    return (re + im * _SQRT_M1) % _P


def _univar_image(f: MPoly, main: int, point: list[int]) -> list[int] | None:
    """Dense coefficient list of f mod p with all variables but `main` fixed.

    Returns None when a coefficient denominator vanishes mod p.
    """
    n = f.nvars
    deg = f.degree_in(main)
    out = [0] * (deg + 1)
    shift_main = _W * (n - 1 - main)
    for k, c in f.terms.items():
        try:
            v = _scalar_mod(c)
        except ZeroDivisionError:
            return None
        kk = k
        for i in range(n - 1, -1, -1):
            e = kk & _MASK
            kk >>= _W
            if e and i != main:
                v = (v * pow(point[i], e, _P)) % _P
        out[(k >> shift_main) & _MASK] = (out[(k >> shift_main) & _MASK] + v) % _P
    while out and out[-1] == 0:
        out.pop()
    return out


def _univar_gcd_degree(a: list[int], b: list[int]) -> int:
    while b:
        inv = pow(b[-1], _P - 2, _P)
        db, da = len(b) - 1, len(a) - 1
        while da >= db and a:
            f = (a[-1] * inv) % _P
            sh = da - db
            for i, bc in enumerate(b):
                a[i + sh] = (a[i + sh] - f * bc) % _P
            while a and a[-1] == 0:
                a.pop()
            da = len(a) - 1
        a, b = b, a
    return len(a) - 1


def _coprime_in_var(f: MPoly, g: MPoly, main: int, rng_state: list[int]) -> bool:
    """Certified check that gcd(f, g) has degree 0 in variable `main`."""
    n = f.nvars
    df, dg = f.degree_in(main), g.degree_in(main)
    for attempt in range(4):
        point = [0] * n
        for i in range(n):
            rng_state[0] = (rng_state[0] * 1103515245 + 12345 + attempt) % (1 << 31)
            point[i] = 2 + rng_state[0] % (_P - 3)
        fa = _univar_image(f, main, point)
        ga = _univar_image(g, main, point)
        if fa is None or ga is None:
            continue
        # leading coefficients must survive the evaluation for the bound to hold
        if len(fa) - 1 != df or len(ga) - 1 != dg:
            continue
        if _univar_gcd_degree(list(fa), list(ga)) == 0:
            return True
        return False
    return False


def _to_univar(f: MPoly, main: int) -> dict[int, MPoly]:
    n = f.nvars
    shift = _W * (n - 1 - main)
    out: dict[int, dict[int, Scalar]] = {}
    deg_unit = 1 << (_W * n)
    for k, c in f.terms.items():
        e = (k >> shift) & _MASK
        base = k - (e << shift) - e * deg_unit
        out.setdefault(e, {})[base] = c
    return {e: MPoly(n, t) for e, t in out.items()}


def _from_univar(coeffs: dict[int, MPoly], main: int, nvars: int) -> MPoly:
    shift = _W * (nvars - 1 - main)
    deg_unit = 1 << (_W * nvars)
    terms: dict[int, Scalar] = {}
    for e, poly in coeffs.items():
        off = (e << shift) + e * deg_unit
        for k, c in poly.terms.items():
            terms[k + off] = c
    return MPoly(nvars, terms)


def _content(f: MPoly, main: int) -> MPoly:
    cs = list(_to_univar(f, main).values())
    g = cs[0]
    for c in cs[1:]:
        if g.is_const():
            break
        g = poly_gcd(g, c)
    return g


def _prem(f: dict[int, MPoly], g: dict[int, MPoly], nvars: int) -> dict[int, MPoly]:
    """Pseudo-remainder of univariate polynomials with MPoly coefficients."""
    df = max(f)
    dg = max(g)
    lg = g[dg]
    r = dict(f)
    while r and max(r) >= dg:
        dr = max(r)
        lr = r[dr]
        new: dict[int, MPoly] = {}
        for e, c in r.items():
            if e == dr:
                continue
            new[e] = c * lg
        for e, c in g.items():
            if e == dg:
                continue
            t = e + dr - dg
            prev = new.get(t)
            prod = c * lr
            val = -prod if prev is None else prev - prod
            if not val.is_zero():
                new[t] = val
            elif prev is not None:
                del new[t]
        r = new
    return r


def _monomial_content_key(f: MPoly) -> int:
    """Packed key of the largest monomial dividing every term."""
    n = f.nvars
    mins = [1 << 30] * n
    for k in f.terms:
        kk = k
        for i in range(n - 1, -1, -1):
            e = kk & _MASK
            kk >>= _W
            if e < mins[i]:
                mins[i] = e
        if not any(mins):
            return 0
    return _encode(mins)


def _strip_monomial(f: MPoly) -> tuple[int, MPoly]:
    key = _monomial_content_key(f)
    if key == 0:
        return 0, f
    return key, MPoly(f.nvars, {k - key: c for k, c in f.terms.items()})


def _key_min(a: int, b: int, n: int) -> int:
    ea, eb = _decode(a, n), _decode(b, n)
    return _encode([min(x, y) for x, y in zip(ea, eb)])


_LINEAR_CANDIDATES: dict[int, list[MPoly]] = {}


def _linear_candidates(n: int) -> list[MPoly]:
    """Braid-arrangement forms, the dominant common factors in this engine."""
    got = _LINEAR_CANDIDATES.get(n)
    if got is None:
        one = MPoly.const(n, ONE)
        got = []
        for i in range(n):
            got.append(MPoly.var(n, i) - one)
        for i in range(n):
            for j in range(i + 1, n):
                got.append(MPoly.var(n, j) - MPoly.var(n, i))
        _LINEAR_CANDIDATES[n] = got
    return got


def poly_gcd(a: MPoly, b: MPoly) -> MPoly:
    """A greatest common divisor, normalized to leading coefficient 1.

    gcd(a, 0) is the normalization of a; gcd of two zero polynomials is 0.
    Fast paths: shared monomial content, trial division by the braid
    arrangement forms, then a certified modular coprimality test per
    variable; the remainder-sequence machinery only runs on survivors.
    """
    if a.nvars != b.nvars:
        raise ValueError("nvars mismatch")
    n = a.nvars
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    if a.is_const() or b.is_const():
        return MPoly.const(n, ONE)
    ka, a1 = _strip_monomial(a)
    kb, b1 = _strip_monomial(b)
    gkey = _key_min(ka, kb, n)
    gcd_acc = MPoly(n, {gkey: ONE})
    if a1.is_const() or b1.is_const():
        return gcd_acc.monic()
    # braid-form preconditioner
    min_terms = min(len(a1.terms), len(b1.terms))
    if min_terms > 1:
        for form in _linear_candidates(n):
            while True:
                qa = a1.exact_div(form)
                if qa is None:
                    break
                qb = b1.exact_div(form)
                if qb is None:
                    break
                a1, b1 = qa, qb
                gcd_acc = gcd_acc * form
                if a1.is_const() or b1.is_const():
                    return gcd_acc.monic()
    used = sorted(set(a1.variables_used()) | set(b1.variables_used()))
    rng_state = [0x5EED ^ (len(a1.terms) * 31 + len(b1.terms))]
    if all(_coprime_in_var(a1, b1, v, rng_state) for v in used):
        return gcd_acc.monic()
    rest = _gcd_rec(a1, b1, used, rng_state)
    return (gcd_acc * rest).monic()


def _gcd_rec(a: MPoly, b: MPoly, used: list[int], rng_state: list[int]) -> MPoly:
    n = a.nvars
    if a.is_const() or b.is_const():
        return MPoly.const(n, ONE)
    used = [v for v in used if a.degree_in(v) > 0 or b.degree_in(v) > 0]
    if not used:
        return MPoly.const(n, ONE)
    main = used[0]
    da, db = a.degree_in(main), b.degree_in(main)
    if da == 0 or db == 0:
        # gcd cannot involve the main variable
        ca = a if da == 0 else _content(a, main)
        cb = b if db == 0 else _content(b, main)
        return _gcd_rec(ca, cb, used[1:], rng_state)
    if len(used) == 1:
        return _gcd_univar(a, b, main)
    if _coprime_in_var(a, b, main, rng_state):
        return _gcd_rec(_content(a, main), _content(b, main), used[1:], rng_state)
    # subresultant PRS on primitive parts
    ca = _content(a, main)
    cb = _content(b, main)
    pa = a.exact_div(ca)
    pb = b.exact_div(cb)
    assert pa is not None and pb is not None
    f, g = (pa, pb) if da >= db else (pb, pa)
    fu, gu = _to_univar(f, main), _to_univar(g, main)
    while True:
        r = _prem(fu, gu, n)
        if not r:
            break
        fu, gu = gu, r
        if max(gu) == 0:
            return _gcd_rec(ca, cb, used[1:], rng_state)
        # remove content to control growth
        gpoly = _from_univar(gu, main, n)
        cg = _content(gpoly, main)
        if not cg.is_const():
            gpoly = gpoly.exact_div(cg)
            assert gpoly is not None
            gu = _to_univar(gpoly, main)
    gpoly = _from_univar(gu, main, n)
    cg = _content(gpoly, main)
    if not cg.is_const():
        gpoly = gpoly.exact_div(cg)
        assert gpoly is not None
    cont = _gcd_rec(ca, cb, used[1:], rng_state)
    return gpoly * cont


def _gcd_univar(a: MPoly, b: MPoly, main: int) -> MPoly:
    fu = _to_univar(a, main)
    gu = _to_univar(b, main)
    n = a.nvars
    f = {e: c.const_value() for e, c in fu.items()}
    g = {e: c.const_value() for e, c in gu.items()}
    while g:
        dg = max(g)
        lg_inv = g[dg].inv()
        while f and max(f) >= dg:
            df = max(f)
            factor = f[df] * lg_inv
            for e, c in g.items():
                t = e + df - dg
                prev = f.get(t, ZERO)
                val = prev - factor * c
                if val.is_zero():
                    f.pop(t, None)
                else:
                    f[t] = val
        f, g = g, f
    shift = _W * (n - 1 - main)
    deg_unit = 1 << (_W * n)
    return MPoly(n, {(e << shift) + e * deg_unit: c for e, c in f.items()})
