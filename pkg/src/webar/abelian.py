"""Abelian relations: data model, exact verification, the quadrilateral
relation, the pullback construction of all combinatorial relations, the
component basis, exact dimensions and the curvilinear rank bound.

An abelian relation is stored foliation-adapted: one scalar g_i per
foliation (None = absent) with the realized form sum(g_i * Omega_i); that
shape makes pullback by a web automorphism a substitution plus one
Jacobian factor per component.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from math import comb

from .forms import KForm, LogExpr, LogSym, RatMap, pullback, wedge_all
from .linalg import rank as mat_rank
from .linalg import solve
from .ratfunc import RatFunc
from .scalars import ONE, Scalar, ZERO
from .webs import (
    Chart,
    Perm,
    Web,
    build_web,
    chamber_point,
    cyclic_C,
    cyclic_Ctilde,
    foliation_perm,
    gsigma,
    pullback_normal_match,
    swap_T,
)


class VerificationFailed(AssertionError):
    pass


class NotInSpan(ValueError):
    pass


# ---------------------------------------------------------------------------
# Rank bound for curvilinear webs
# ---------------------------------------------------------------------------


def rank_bound(n: int, d: int) -> int:
    """Upper bound for the top rank of a curvilinear d-web in dimension n."""
    if n < 2 or d < 1:
        raise ValueError("need n >= 2 and d >= 1")
    total = 0
    for s in range(0, max(d - n, 0)):
        total += comb(n - 2 + s, s) * max(d - n - s, 0)
    return total


# ---------------------------------------------------------------------------
# AR tuples and verification
# ---------------------------------------------------------------------------


@dataclass
class ARVerification:
    passed: bool
    failing: list[tuple[tuple[int, ...], LogSym | None]]
    seconds: float
    method: str  # 'evaluation' (fast disproof) or 'exact'


class ARTuple:
    """components[i] is the scalar of the i-th foliation or None (absent)."""

    __slots__ = ("web", "components")

    def __init__(self, web: Web, components: list[LogExpr | None]):
        if len(components) != web.d:
            raise ValueError("one component per foliation required")
        self.web = web
        self.components = [
            None if (c is None or c.is_zero()) else c for c in components
        ]

    def present(self) -> list[int]:
        return [i + 1 for i, c in enumerate(self.components) if c is not None]

    def absent(self) -> list[int]:
        return [i + 1 for i, c in enumerate(self.components) if c is None]

    def realized_sum(self) -> KForm:
        n = self.web.n
        total = KForm.zero(n, n - 1)
        for i, g in enumerate(self.components):
            if g is not None:
                total = total + self.web.normals[i].mul_logexpr(g)
        return total

    def scale(self, c: Scalar) -> "ARTuple":
        return ARTuple(
            self.web,
            [None if g is None else g.mul_scalar(c) for g in self.components],
        )

    def add(self, other: "ARTuple") -> "ARTuple":
        comps = []
        for a, b in zip(self.components, other.components):
            if a is None:
                comps.append(b)
            elif b is None:
                comps.append(a)
            else:
                comps.append(a + b)
        return ARTuple(self.web, comps)

    def is_zero(self) -> bool:
        return all(c is None for c in self.components)


def verify_ar(ar: ARTuple, rng: random.Random | None = None) -> ARVerification:
    """Exact test that the realized sum is the zero (n-1)-form.

    A Schwartz-Zippel style evaluation runs first: a nonzero value at an
    exact rational point already proves failure, so the expensive symbolic
    expansion only runs on candidates for success.
    """
    rng = rng or random.Random(0)
    start = time.perf_counter()
    web = ar.web
    n = web.n
    for _ in range(2):
        pt = chamber_point(n, rng)
        try:
            acc: dict[tuple[tuple[int, ...], LogSym | None], Scalar] = {}
            for i, g in enumerate(ar.components):
                if g is None:
                    continue
                rat_val = g.rational.eval(pt)
                log_vals = {s: c.eval(pt) for s, c in g.logs.items()}
                for idx, coeff in web.normals[i].coeffs.items():
                    om = coeff.rational.eval(pt)
                    if om.is_zero():
                        continue
                    key = (idx, None)
                    acc[key] = acc.get(key, ZERO) + rat_val * om
                    for s, v in log_vals.items():
                        key = (idx, s)
                        acc[key] = acc.get(key, ZERO) + v * om
            bad = sorted((k for k, v in acc.items() if not v.is_zero()), key=str)
            if bad:
                return ARVerification(False, bad, time.perf_counter() - start, "evaluation")
        except ZeroDivisionError:
            continue
    total = ar.realized_sum()
    failing = total.nonzero_entries()
    return ARVerification(not failing, failing, time.perf_counter() - start, "exact")


# ---------------------------------------------------------------------------
# The quadrilateral relation
# ---------------------------------------------------------------------------


def build_quadrilateral_web(n: int) -> Web:
    """The standard (n+1)-web: the n coordinate projections preceded by the
    projection from the origin-vertex, (x_t/x_n)_{t<n}."""
    if n < 2:
        raise ValueError("need n >= 2")
    x = [RatFunc.var(n, i) for i in range(n)]
    integrals = [RatMap([x[t] / x[n - 1] for t in range(n - 1)])]
    for i in range(1, n + 1):
        integrals.append(RatMap([x[j] for j in range(n) if j != i - 1]))
    return Web(Chart(n, "sec4"), integrals)


def quadrilateral_ar(n: int) -> ARTuple:
    """The rank-1 relation of the standard (n+1)-web.

    Component signs: +1 on the cross-ratio projection and (-1)^{n+1-k} on
    the k-th coordinate projection; for odd n this is the familiar
    alternating pattern, and the combination vanishes identically for
    every n >= 2 (the all-(-1)^k pattern does not when n is even).
    """
    web = build_quadrilateral_web(n)
    comps: list[LogExpr | None] = []
    for slot, fi in enumerate(web.first_integrals):
        prod = RatFunc.const(n, ONE)
        for c in fi.components:
            prod = prod * c
        sign = ONE if slot == 0 else Scalar((-1) ** (n + 1 - slot))
        comps.append(LogExpr.from_rat(prod.inv().mul_scalar(sign)))
    return ARTuple(web, comps)


# ---------------------------------------------------------------------------
# Seed relation and the involution words moving it around
# ---------------------------------------------------------------------------


def ar_seed(n: int, web: Web | None = None) -> ARTuple:
    """The relation supported away from the last two foliations."""
    if n < 2:
        raise ValueError("need n >= 2")
    web = web or build_web(n, "sec4")
    one = RatFunc.const(n, ONE)
    comps: list[LogExpr | None] = []
    for i in range(1, n + 1):
        prod = one
        for c in web.first_integrals[i - 1].components:
            prod = prod * (c - one)
        comps.append(LogExpr.from_rat(prod.inv().mul_scalar(Scalar((-1) ** (i - 1)))))
    prod = one
    for c in web.first_integrals[n].components:
        prod = prod * c
    comps.append(LogExpr.from_rat(prod.inv().mul_scalar(Scalar((-1) ** n))))
    comps.extend([None, None])
    ar = ARTuple(web, comps)
    res = verify_ar(ar)
    if not res.passed:
        raise VerificationFailed(f"seed relation failed: {res.failing[:3]}")
    return ar


_TIJ_CACHE: dict[int, dict[tuple[int, int], RatMap]] = {}


def tij_words(n: int) -> dict[tuple[int, int], RatMap]:
    """All involutions T_{i,j} (foliation action (1 i)(2 j)), built as words
    in the cyclic generator and the basic swap."""
    cached = _TIJ_CACHE.get(n)
    if cached is not None:
        return cached
    m = n + 3
    C = cyclic_C(n)
    T = swap_T(n)
    Cpow: dict[int, RatMap] = {0: RatMap.identity(n)}
    for k in range(1, m + 2):
        Cpow[k] = C.compose(Cpow[k - 1])
        Cpow[k].inverse = Cpow[k - 1].inverse.compose(C.inverse) if Cpow[k - 1].inverse else None
    adj: dict[tuple[int, int], RatMap] = {}
    for k in range(2, m + 2):
        w = Cpow[k].inverse.compose(T).compose(Cpow[k])
        w.inverse = w
        key = (k - 1, k) if k <= m else (1, m)
        adj[key] = w
    out: dict[tuple[int, int], RatMap] = dict(adj)
    # cumulative words C_l = T_{l-1,l} o ... o T_{1,2}; the inverse of a
    # product of involutions is the reversed product
    cum: dict[int, RatMap] = {1: RatMap.identity(n)}
    for l in range(2, m + 1):
        cum[l] = adj[(l - 1, l)].compose(cum[l - 1])
        cum[l].inverse = cum[l - 1].inverse.compose(adj[(l - 1, l)])
    for l in range(3, m + 1):
        w = cum[l - 1].inverse.compose(adj[(l - 1, l)]).compose(cum[l - 1])
        w.inverse = w
        out[(1, l)] = w
    for l in range(3, m + 1):
        w = out[(1, 2)].compose(out[(1, l)]).compose(out[(1, 2)])
        w.inverse = w
        out[(2, l)] = w
    for i in range(3, m + 1):
        for j in range(i + 1, m + 1):
            w = out[(2, j)].compose(out[(1, i)])
            w.inverse = None
            out[(i, j)] = w
    _TIJ_CACHE[n] = out
    return out


def tij_map(i: int, j: int, n: int) -> RatMap:
    if not 1 <= i < j <= n + 3:
        raise ValueError("need 1 <= i < j <= n+3")
    return tij_words(n)[(i, j)]


def pullback_ar(ar: ARTuple, G: RatMap, rng: random.Random | None = None) -> ARTuple:
    """G^*(ar): substitution of each scalar plus one Jacobian factor."""
    rng = rng or random.Random(5)
    web = ar.web
    comps: list[LogExpr | None] = [None] * web.d
    for k, g in enumerate(ar.components, start=1):
        if g is None:
            continue
        j, rho = pullback_normal_match(G, web, k, rng)
        moved = g.compose(G.components).mul_rat(rho)
        if comps[j - 1] is not None:
            raise VerificationFailed("two components landed on one foliation")
        comps[j - 1] = moved
    return ARTuple(web, comps)


# ---------------------------------------------------------------------------
# Component basis
# ---------------------------------------------------------------------------


@dataclass
class ComponentBasis:
    """The distinguished rational functions of n-1 slot variables whose
    pullbacks span every component space of combinatorial relations."""

    n: int
    functions: list[RatFunc]
    labels: list[str]

    @property
    def size(self) -> int:
        return len(self.functions)


def _product(fs: list[RatFunc], nvars: int) -> RatFunc:
    out = RatFunc.const(nvars, ONE)
    for f in fs:
        out = out * f
    return out


def _pair_product(vals: list[RatFunc], nvars: int) -> RatFunc:
    out = RatFunc.const(nvars, ONE)
    for a in range(len(vals)):
        for b in range(a + 1, len(vals)):
            out = out * (vals[a] - vals[b])
    return out


def component_basis(n: int) -> ComponentBasis:
    """Slot variables z_1..z_{n-1} stand for the chart coordinates the
    component depends on; the extended list appends the two fixed values
    0 and 1."""
    m = n - 1
    z = [RatFunc.var(m, s) for s in range(m)]
    zero = RatFunc.zero(m)
    one = RatFunc.const(m, ONE)
    ext: dict[int, RatFunc] = {s: z[s - 2] for s in range(2, n + 1)}
    ext[n + 1] = zero
    ext[n + 2] = one
    # ordered pair product over all n+1 extended entries (slots, 0, 1)
    denom = _pair_product([ext[s] for s in range(2, n + 3)], m)
    funcs: list[RatFunc] = []
    labels: list[str] = []
    if n % 2 == 1:
        funcs.append(_product([ext[s] for s in range(2, n + 1)], m).inv())
        labels.append("F0")
    for i in range(2, n + 1):
        for j in range(i + 1, n + 3):
            rest = [ext[s] for s in range(2, n + 3) if s not in (i, j)]
            f = ((ext[i] - ext[j]) ** (n - 1)) * _pair_product(rest, m) / denom
            funcs.append(f)
            labels.append(f"F{i}{j}")
    basis = ComponentBasis(n, funcs, labels)
    expected = n * (n + 1) // 2 if n % 2 == 1 else (n - 1) * (n + 2) // 2
    if basis.size != expected:
        raise AssertionError("component basis has the wrong cardinality")
    return basis


@dataclass
class FoliationFrames:
    """V_i = slot slice of the (i-1)-st iterate of a cyclic generator, and
    the corresponding normals; the scaffolding that indexes components.

    frame_to_foliation[i-1] = (j, rho) with Gamma_i = rho * Omega_j on the
    sec4 web, translating between the cyclic frames and the web normals.
    """

    n: int
    generator: str  # 'C' or 'Ctilde'
    slice_side: str  # 'last' or 'first'
    maps: list[RatMap] = field(default_factory=list)  # V_i, n -> n-1
    normals: list[KForm] = field(default_factory=list)  # Gamma_i
    iterates: list[RatMap] = field(default_factory=list)  # the generator powers
    frame_to_foliation: list[tuple[int, RatFunc]] = field(default_factory=list)


_FRAME_CACHE: dict[tuple[int, str, str], FoliationFrames] = {}


def foliation_frames(n: int, generator: str = "C", slice_side: str = "last") -> FoliationFrames:
    key = (n, generator, slice_side)
    got = _FRAME_CACHE.get(key)
    if got is not None:
        return got
    from .webs import proportionality_factor

    gen = cyclic_C(n) if generator == "C" else cyclic_Ctilde(n)
    frames = FoliationFrames(n, generator, slice_side)
    cur = RatMap.identity(n)
    take = (lambda m: RatMap(m.components[1:])) if slice_side == "last" else (
        lambda m: RatMap(m.components[: n - 1])
    )
    base = take(cur)
    gamma1 = wedge_all([KForm.d_of(c) for c in base.components])
    web = build_web(n, "sec4")
    for i in range(n + 3):
        frames.iterates.append(cur)
        frames.maps.append(take(cur))
        gamma = gamma1 if i == 0 else pullback(cur, gamma1)
        frames.normals.append(gamma)
        match = None
        for j in range(1, n + 4):
            rho = proportionality_factor(gamma, web.normals[j - 1])
            if rho is not None:
                match = (j, rho)
                break
        if match is None:
            raise VerificationFailed("cyclic frame matches no web foliation")
        frames.frame_to_foliation.append(match)
        if i < n + 2:
            cur = cur.compose(gen)
    if sorted(j for j, _ in frames.frame_to_foliation) != list(range(1, n + 4)):
        raise VerificationFailed("cyclic frames do not exhaust the foliations")
    _FRAME_CACHE[key] = frames
    return frames


_BASIS_FN_CACHE: dict[tuple[int, str, str, int], list[RatFunc]] = {}


def basis_at_foliation(n: int, j: int, generator: str = "C", slice_side: str = "last") -> list[RatFunc]:
    """Basis of the j-th component space, as scalars against Omega_j.

    The distinguished functions live on the cyclic frame V_i attached to
    foliation j; the factor rho with Gamma_i = rho * Omega_j converts
    F(V_i) * Gamma_i into an Omega_j-adapted scalar.
    """
    key = (n, generator, slice_side, j)
    got = _BASIS_FN_CACHE.get(key)
    if got is None:
        frames = foliation_frames(n, generator, slice_side)
        basis = component_basis(n)
        i = next(
            k + 1 for k, (fol, _) in enumerate(frames.frame_to_foliation) if fol == j
        )
        vi = frames.maps[i - 1]
        rho = frames.frame_to_foliation[i - 1][1]
        got = [f.compose(vi.components) * rho for f in basis.functions]
        _BASIS_FN_CACHE[key] = got
    return got


class SpanSolver:
    """Exact membership solver for the span of a fixed list of functions.

    Candidate coordinates come from evaluation at cached random rational
    points; the candidate is then re-verified as a polynomial identity over
    a precomputed common denominator, so results are exact despite the
    sampled solve.  Sampling uses a fixed internal seed: solving is a pure
    function of the inputs.
    """

    def __init__(self, funcs: list[RatFunc], nvars: int, seed: int = 9176):
        from .mpoly import poly_gcd

        self.funcs = funcs
        self.nvars = nvars
        m = len(funcs)
        rng = random.Random(seed)
        pts: list[list[Scalar]] = []
        rows: list[list[Scalar]] = []
        attempts = 0
        while len(rows) < m + 4 and attempts < 40 * (m + 4):
            attempts += 1
            pt = chamber_point(nvars, rng)
            try:
                row = [f.eval(pt) for f in funcs]
            except ZeroDivisionError:
                continue
            pts.append(pt)
            rows.append(row)
        if len(rows) < m + 4:
            raise NotInSpan("could not sample enough regular points")
        self.points = pts
        self.rows = rows
        # common denominator and polynomial numerators for the exact re-check
        den = funcs[0].den
        for f in funcs[1:]:
            g = poly_gcd(den, f.den)
            den = den * f.den.exact_div(g)
        self.common_den = den
        self.numerators = []
        for f in funcs:
            q = den.exact_div(f.den)
            assert q is not None
            self.numerators.append(f.num * q)

    def solve(self, g: RatFunc) -> list[Scalar]:
        try:
            rhs = [g.eval(pt) for pt in self.points]
        except ZeroDivisionError as ex:
            raise NotInSpan(f"target has a pole at a sample point: {ex}")
        sol = solve(self.rows, rhs)
        if sol is None:
            raise NotInSpan("inconsistent evaluations: function leaves the span")
        # exact re-check: g * common_den must equal the numerator combination
        lhs = g * RatFunc.from_poly(self.common_den)
        if not lhs.is_poly():
            raise NotInSpan("target denominator outside the span's denominator")
        total = lhs.num.mul_scalar(lhs.den.const_value().inv())
        for c, num in zip(sol, self.numerators):
            if not c.is_zero():
                total = total - num.mul_scalar(c)
        if not total.is_zero():
            raise NotInSpan("sampled solution failed the exact re-check")
        return sol


def express_in_span(
    g: RatFunc, funcs: list[RatFunc], rng: random.Random, nvars: int
) -> list[Scalar]:
    """One-shot exact coordinates of g in span(funcs); NotInSpan otherwise."""
    return SpanSolver(funcs, nvars, seed=rng.randint(0, 1 << 30)).solve(g)


_SOLVER_CACHE: dict[tuple[int, str, str, int], SpanSolver] = {}


def component_solver(n: int, j: int, generator: str = "C", slice_side: str = "last") -> SpanSolver:
    key = (n, generator, slice_side, j)
    got = _SOLVER_CACHE.get(key)
    if got is None:
        got = SpanSolver(basis_at_foliation(n, j, generator, slice_side), n)
        _SOLVER_CACHE[key] = got
    return got


def component_coordinates(
    g: LogExpr | RatFunc,
    n: int,
    i: int,
    generator: str = "C",
    slice_side: str = "last",
    rng: random.Random | None = None,
) -> list[Scalar]:
    """Coordinates of a component scalar in the basis attached to V_i."""
    if isinstance(g, LogExpr):
        if not g.is_rational():
            raise NotInSpan("logarithmic component cannot lie in a rational span")
        g = g.rational
    return component_solver(n, i, generator, slice_side).solve(g)


# ---------------------------------------------------------------------------
# Combinatorial relations
# ---------------------------------------------------------------------------


def ar_coordinates(
    ar: ARTuple, generator: str = "C", slice_side: str = "last", rng: random.Random | None = None
) -> list[Scalar]:
    """Stacked component coordinates over all foliations (absent -> zeros)."""
    rng = rng or random.Random(29)
    n = ar.web.n
    size = component_basis(n).size
    out: list[Scalar] = []
    for i in range(1, ar.web.d + 1):
        g = ar.components[i - 1]
        if g is None:
            out.extend([ZERO] * size)
        else:
            out.extend(component_coordinates(g, n, i, generator, slice_side, rng))
    return out


def normalize_ar(ar: ARTuple, rng: random.Random | None = None) -> ARTuple:
    """Scale so the first nonzero basis coordinate of the smallest-index
    present component is 1 (the deterministic representative)."""
    rng = rng or random.Random(31)
    n = ar.web.n
    for i in ar.present():
        coords = component_coordinates(ar.components[i - 1], n, i, rng=rng)
        for c in coords:
            if not c.is_zero():
                return ar.scale(c.inv())
    return ar


def combinatorial_ar(
    i: int, j: int, n: int, normalized: bool = True, rng: random.Random | None = None
) -> ARTuple:
    """The (up to scale unique) relation of the subweb missing foliations
    i and j, obtained by pulling the seed relation back along involution
    words."""
    if not 1 <= i < j <= n + 3:
        raise ValueError("need 1 <= i < j <= n+3")
    rng = rng or random.Random(37)
    seed = ar_seed(n)
    words = tij_words(n)
    # The words labelled (1,l) move the missing pair onto {2,l} under the
    # composition convention used here, and vice versa; swap accordingly.
    key = (i, j)
    if i == 1 and j >= 3:
        key = (2, j)
    elif i == 2 and j >= 3:
        key = (1, j)
    G = words[(n + 2, n + 3)].compose(words[key])
    ar = pullback_ar(seed, G, rng)
    if set(ar.absent()) != {i, j}:
        raise VerificationFailed(
            f"pullback produced absent set {ar.absent()}, expected {{{i},{j}}}"
        )
    res = verify_ar(ar, rng)
    if not res.passed:
        raise VerificationFailed(f"pullback of the seed relation failed for ({i},{j})")
    return normalize_ar(ar, rng) if normalized else ar


def all_pairs(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(1, n + 4) for j in range(i + 1, n + 4)]


def theorem_basis_pairs(n: int) -> list[tuple[int, int]]:
    """The pairs whose relations form a basis of the combinatorial span."""
    top = n + 1 if n % 2 == 1 else n
    return [(i, j) for i in range(1, top + 1) for j in range(i + 1, n + 3)]


def arc_dimension(n: int, rng: random.Random | None = None) -> tuple[int, str]:
    """dim of the span of all combinatorial relations, and which path ran."""
    rng = rng or random.Random(41)
    ars = [combinatorial_ar(i, j, n, normalized=False, rng=rng) for (i, j) in all_pairs(n)]
    try:
        rows = [ar_coordinates(ar, rng=rng) for ar in ars]
        return mat_rank(rows), "component-basis"
    except NotInSpan:
        # conjectural basis failed at this n: fall back to evaluation rank,
        # certified by agreement of two independent batches
        ranks = []
        for batch in range(2):
            rows = []
            pts = [chamber_point(n, rng) for _ in range(3 * (n + 3) * (n + 3))]
            for ar in ars:
                row: list[Scalar] = []
                for g in ar.components:
                    for pt in pts:
                        row.append(ZERO if g is None else g.rational.eval(pt))
                rows.append(row)
            ranks.append(mat_rank(rows))
        if ranks[0] != ranks[1]:
            raise VerificationFailed("evaluation ranks disagree between batches")
        return ranks[0], "evaluation"


def expected_arc_dimension(n: int) -> int:
    return (n + 1) * (n + 2) // 2 if n % 2 == 1 else n * (n + 3) // 2


def scalar_ratio(a: ARTuple, b: ARTuple) -> Scalar | None:
    """c with a == c*b when the tuples are exactly proportional, else None."""
    if a.present() != b.present():
        return None
    ratio: Scalar | None = None
    for i in a.present():
        ga = a.components[i - 1]
        gb = b.components[i - 1]
        if ga.is_rational() != gb.is_rational():
            return None
        if ga.is_rational():
            q = ga.rational / gb.rational
            if not q.is_const():
                return None
            c = q.const_value()
        else:
            c = None
            for sym, coeff in gb.logs.items():
                ca = ga.logs.get(sym)
                if ca is None:
                    return None
                q = ca / coeff
                if not q.is_const():
                    return None
                if c is None:
                    c = q.const_value()
                elif c != q.const_value():
                    return None
            diff = ga - gb.mul_scalar(c)
            if not diff.is_zero():
                return None
        if ratio is None:
            ratio = c
        elif ratio != c:
            return None
    return ratio
