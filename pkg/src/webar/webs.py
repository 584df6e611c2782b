"""Concrete models of the forgetful-map webs on moduli of pointed rational
curves, the birational symmetric-group action, and foliation bookkeeping.

Three chart conventions are supported:

* ``sec4``  - variables x1..xn for the normalization [0,1,oo,x1,...,xn];
  first integrals drop a variable (i <= n) or are the three cross-ratio
  bundles; the cyclic generator C sends x to ((1-x_2)/(x_1-x_2), ...,
  1/x_1) and T sends x_i to x_i/(x_i-1).
* ``sec5``  - variables u1..un with the cyclic generator
  u -> (u_n/(u_n-u_{i-1}))_{i} (u_0 = 1); first integrals are the sliced
  iterates of that generator.
* ``segre`` - n = 3 only; the six line families of the 10-nodal cubic
  threefold in the (x,y,z) chart, with its own cyclic map and swap.

Composition of permutations is left-to-right: (a * b)(k) = b(a(k)).
gsigma is normalized so that foliation_perm(gsigma(s)) == s; the cyclic
permutation (1 2 ... n+3) then maps to C and ((n+2)(n+3)) to T, while the
inverse of gsigma(cycle) is the cross-ratio shift map usually written for
the cycled marked points.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations

from .forms import KForm, LogExpr, RatMap, pullback, wedge_all
from .ratfunc import RatFunc
from .scalars import ONE, RAT, Scalar

CHARTS = ("sec4", "sec5", "segre")


class UnsupportedDimension(ValueError):
    pass


class NotAWebAutomorphism(ValueError):
    pass


# ---------------------------------------------------------------------------
# Permutations (1-indexed images)
# ---------------------------------------------------------------------------


class Perm:
    __slots__ = ("images",)

    def __init__(self, images):
        imgs = tuple(images)
        if sorted(imgs) != list(range(1, len(imgs) + 1)):
            raise ValueError(f"not a bijection of 1..{len(imgs)}: {imgs}")
        self.images = imgs

    @property
    def size(self) -> int:
        return len(self.images)

    def __call__(self, k: int) -> int:
        return self.images[k - 1]

    @staticmethod
    def identity(m: int) -> "Perm":
        return Perm(range(1, m + 1))

    @staticmethod
    def transposition(m: int, a: int, b: int) -> "Perm":
        img = list(range(1, m + 1))
        img[a - 1], img[b - 1] = b, a
        return Perm(img)

    @staticmethod
    def from_cycles(m: int, *cycles) -> "Perm":
        img = list(range(1, m + 1))
        for cyc in cycles:
            cyc = list(cyc)
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                img[a - 1] = b
        return Perm(img)

    @staticmethod
    def cycle(m: int) -> "Perm":
        """The full cycle (1 2 ... m)."""
        return Perm(list(range(2, m + 1)) + [1])

    def __mul__(self, other: "Perm") -> "Perm":
        """Apply self first, then other."""
        if self.size != other.size:
            raise ValueError("size mismatch")
        return Perm(other.images[i - 1] for i in self.images)

    def inverse(self) -> "Perm":
        img = [0] * self.size
        for k, v in enumerate(self.images, start=1):
            img[v - 1] = k
        return Perm(img)

    def is_identity(self) -> bool:
        return all(v == k for k, v in enumerate(self.images, start=1))

    def cycle_type(self) -> tuple[int, ...]:
        seen = [False] * self.size
        lens = []
        for s in range(1, self.size + 1):
            if seen[s - 1]:
                continue
            length = 0
            k = s
            while not seen[k - 1]:
                seen[k - 1] = True
                k = self(k)
                length += 1
            lens.append(length)
        return tuple(sorted(lens, reverse=True))

    def sign(self) -> int:
        return (-1) ** sum(l - 1 for l in self.cycle_type())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Perm):
            return NotImplemented
        return self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self) -> str:
        return f"Perm{self.images}"


# ---------------------------------------------------------------------------
# Charts and webs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Chart:
    n: int
    convention: str  # one of CHARTS

    @property
    def slot_slice(self) -> str:
        """Which n-1 coordinates carry the component basis: 'last' or 'first'."""
        return "first" if self.convention == "sec5" else "last"


class Web:
    """A (n+3)-web given by explicit rational first integrals and normals."""

    __slots__ = ("chart", "first_integrals", "normals")

    def __init__(self, chart: Chart, first_integrals: list[RatMap]):
        self.chart = chart
        self.first_integrals = first_integrals
        self.normals = [
            wedge_all([KForm.d_of(c) for c in fi.components]) for fi in first_integrals
        ]

    @property
    def n(self) -> int:
        return self.chart.n

    @property
    def d(self) -> int:
        return len(self.first_integrals)


def _vars(n: int) -> list[RatFunc]:
    return [RatFunc.var(n, i) for i in range(n)]


def _one(n: int) -> RatFunc:
    return RatFunc.const(n, ONE)


def sec4_integrals(n: int) -> list[RatMap]:
    x = _vars(n)
    one = _one(n)
    out = []
    for i in range(1, n + 1):
        out.append(RatMap([x[j] for j in range(n) if j != i - 1]))
    out.append(RatMap([(x[j] - one) / (x[n - 1] - one) for j in range(n - 1)]))
    out.append(RatMap([x[j] / x[n - 1] for j in range(n - 1)]))
    out.append(RatMap([x[j] * (x[n - 1] - one) / (x[n - 1] * (x[j] - one)) for j in range(n - 1)]))
    return out


def cyclic_C(n: int) -> RatMap:
    """x -> ((1-x_2)/(x_1-x_2), ..., (1-x_n)/(x_1-x_n), 1/x_1)."""
    x = _vars(n)
    one = _one(n)
    comps = [(one - x[i]) / (x[0] - x[i]) for i in range(1, n)] + [one / x[0]]
    inv_comps = [one / x[n - 1]] + [
        (x[j] - x[n - 1]) / (x[n - 1] * (x[j] - one)) for j in range(n - 1)
    ]
    fwd = RatMap(comps)
    bwd = RatMap(inv_comps)
    fwd.inverse = bwd
    bwd.inverse = fwd
    return fwd


def cyclic_Ctilde(n: int) -> RatMap:
    """x -> (x_n/(x_n - x_{i-1}))_{i=1..n} with x_0 = 1."""
    x = _vars(n)
    one = _one(n)
    prev = [one] + x[:-1]
    comps = [x[n - 1] / (x[n - 1] - prev[i]) for i in range(n)]
    # inverse: x_n = y_1/(y_1-1), x_j = x_n (y_{j+1}-1)/y_{j+1}
    y = x
    xn = y[0] / (y[0] - one)
    inv_comps = [xn * (y[j + 1] - one) / y[j + 1] for j in range(n - 1)] + [xn]
    fwd = RatMap(comps)
    bwd = RatMap(inv_comps)
    fwd.inverse = bwd
    bwd.inverse = fwd
    return fwd


def swap_T(n: int) -> RatMap:
    """x -> (x_i/(x_i-1))_i, the involutive generator."""
    x = _vars(n)
    one = _one(n)
    m = RatMap([xi / (xi - one) for xi in x])
    m.inverse = m
    return m


def dihedral_R(n: int) -> RatMap:
    """u -> ((u_n-u_{n-i-1})/(u_n-u_{n-1}))_i with u_0 = 1, u_{-1} = 0."""
    u = _vars(n)
    one = _one(n)
    zero = RatFunc.zero(n)
    ext = [zero, one] + u  # ext[k+1] = u_k for k = -1..n
    comps = [(u[n - 1] - ext[n - i]) / (u[n - 1] - u[n - 2]) for i in range(1, n + 1)]
    m = RatMap(comps)
    m.inverse = None
    return m


def sec5_cyclic(n: int) -> RatMap:
    return cyclic_Ctilde(n)


def sec5_integrals(n: int) -> list[RatMap]:
    """U_{n+3-k} is the first-(n-1)-slice of the k-th iterate of the cyclic map."""
    C = sec5_cyclic(n)
    cur = RatMap.identity(n)
    out: dict[int, RatMap] = {}
    for k in range(n + 3):
        out[n + 3 - k] = RatMap(cur.components[: n - 1])
        if k < n + 2:
            cur = cur.compose(C)
    return [out[i] for i in range(1, n + 4)]


def segre_integrals() -> list[RatMap]:
    x, y, z = _vars(3)
    one = _one(3)
    return [
        RatMap([x, y]),
        RatMap([x, z]),
        RatMap([y, z]),
        RatMap([x / z, y / z]),
        RatMap([(x - one) / (z - one), (y - one) / (z - one)]),
        RatMap([x * (z - one) / (z * (x - one)), y * (z - one) / (z * (y - one))]),
    ]


def segre_cyclic() -> RatMap:
    """The 6-cycle generator of the (x,y,z) chart; foliation cycle (123645)."""
    x, y, z = _vars(3)
    one = _one(3)
    fwd = RatMap([one / z, (x - z) / ((x - one) * z), (y - z) / ((y - one) * z)])
    a, b, c = _vars(3)
    bwd = RatMap([(b - one) / (b - a), (c - one) / (c - a), one / a])
    fwd.inverse = bwd
    bwd.inverse = fwd
    return fwd


def segre_swap() -> RatMap:
    x, y, z = _vars(3)
    m = RatMap([y, x, z])
    m.inverse = m
    return m


def build_web(n: int, convention: str = "sec4") -> Web:
    if n < 2:
        raise UnsupportedDimension(f"need n >= 2, got {n}")
    if convention == "sec4":
        return Web(Chart(n, "sec4"), sec4_integrals(n))
    if convention == "sec5":
        return Web(Chart(n, "sec5"), sec5_integrals(n))
    if convention == "segre":
        if n != 3:
            raise UnsupportedDimension("the cubic-threefold chart lives in n = 3")
        return Web(Chart(3, "segre"), segre_integrals())
    raise ValueError(f"unknown chart convention {convention!r}")


def chart_cyclic(web: Web, kind: str = "C") -> RatMap:
    conv = web.chart.convention
    if conv == "sec4":
        return cyclic_C(web.n) if kind == "C" else cyclic_Ctilde(web.n)
    if conv == "sec5":
        return sec5_cyclic(web.n)
    if conv == "segre":
        return segre_cyclic()
    raise ValueError(conv)


# ---------------------------------------------------------------------------
# The symmetric-group action in the sec4 chart
# ---------------------------------------------------------------------------


def _point_label(n: int, i: int) -> int:
    """Foliation label -> marked-point label of the normalization."""
    return i + 3 if i <= n else i - n


def _foliation_label(n: int, p: int) -> int:
    return p - 3 if p > 3 else p + n


def _gsigma_raw(n: int, sigma: Perm) -> RatMap:
    zero = RatFunc.zero(n)
    one = _one(n)
    # projective points (num, den): oo = (1, 0)
    xi: list[tuple[RatFunc, RatFunc]] = [(zero, one), (one, one), (one, zero)]
    xi += [(RatFunc.var(n, i), one) for i in range(n)]

    def spt(p: int) -> int:
        return _point_label(n, sigma(_foliation_label(n, p)))

    def diff(a, b) -> RatFunc:
        return a[0] * b[1] - b[0] * a[1]

    p1, p2, p3 = (xi[spt(k) - 1] for k in (1, 2, 3))
    comps = []
    for k in range(4, n + 4):
        pk = xi[spt(k) - 1]
        num = diff(pk, p1) * diff(p2, p3)
        den = diff(pk, p3) * diff(p2, p1)
        comps.append(num / den)
    return RatMap(comps)


def gsigma(n: int, sigma: Perm) -> RatMap:
    """The birational self-map realizing sigma on the foliations (sec4 chart).

    Built by the cross-ratio formula over the marked points (0, 1, oo,
    x_1, ..., x_n), relabeled so that foliation_perm(gsigma(sigma)) == sigma.
    """
    if sigma.size != n + 3:
        raise ValueError("permutation size must be n + 3")
    fwd = _gsigma_raw(n, sigma)
    inv_sigma = sigma.inverse()
    if inv_sigma == sigma:
        fwd.inverse = fwd
    else:
        bwd = _gsigma_raw(n, inv_sigma)
        fwd.inverse = bwd
        bwd.inverse = fwd
    return fwd


# ---------------------------------------------------------------------------
# Foliation matching
# ---------------------------------------------------------------------------


def chamber_point(n: int, rng: random.Random, spread: int = 40) -> list[Scalar]:
    """A random rational point with 1 < x_1 < ... < x_n."""
    vals = []
    acc = RAT(1)
    for _ in range(n):
        acc = acc + RAT(rng.randint(1, spread), rng.randint(1, spread))
        vals.append(Scalar(acc))
    return vals


def _safe_eval(f: RatFunc, pts: list[list[Scalar]]) -> list[Scalar]:
    out = []
    for p in pts:
        try:
            out.append(f.eval(p))
        except ZeroDivisionError:
            out.append(None)  # type: ignore[arg-type]
    return out


def proportionality_factor(a: KForm, b: KForm) -> RatFunc | None:
    """rho with a == rho * b for rational forms, or None."""
    if a.degree != b.degree or a.nvars != b.nvars:
        return None
    if b.is_zero():
        return None
    idx0 = next(iter(sorted(b.coeffs)))
    r0 = b.coeffs[idx0].rational
    c0 = a.coeffs.get(idx0)
    if c0 is None:
        return None
    rho = c0.rational / r0
    probe = b.mul_rat(rho)
    return rho if (a - probe).is_zero() else None


def pullback_normal_match(G: RatMap, web: Web, i: int, rng: random.Random | None = None) -> tuple[int, RatFunc]:
    """(j, rho) with G^*(Omega_i) = rho * Omega_j; exact."""
    P = pullback(G, web.normals[i - 1])
    rng = rng or random.Random(11)
    # numeric prefilter
    for _ in range(6):
        pt = chamber_point(web.n, rng)
        try:
            pvals = {idx: c.rational.eval(pt) for idx, c in P.coeffs.items()}
        except ZeroDivisionError:
            continue
        candidates = []
        for j in range(1, web.d + 1):
            om = web.normals[j - 1]
            try:
                ovals = {idx: c.rational.eval(pt) for idx, c in om.coeffs.items()}
            except ZeroDivisionError:
                candidates.append(j)
                continue
            if _proportional_values(pvals, ovals):
                candidates.append(j)
        for j in candidates:
            rho = proportionality_factor(P, web.normals[j - 1])
            if rho is not None:
                return j, rho
        break
    # exhaustive exact fallback
    for j in range(1, web.d + 1):
        rho = proportionality_factor(P, web.normals[j - 1])
        if rho is not None:
            return j, rho
    raise NotAWebAutomorphism(f"pullback of foliation {i} matches no foliation")


def _proportional_values(av: dict, bv: dict) -> bool:
    ratio = None
    for idx in set(av) | set(bv):
        x = av.get(idx)
        y = bv.get(idx)
        xz = x is None or x.is_zero()
        yz = y is None or y.is_zero()
        if xz and yz:
            continue
        if xz != yz:
            return False
        r = x / y
        if ratio is None:
            ratio = r
        elif r != ratio:
            return False
    return True


def foliation_perm(G: RatMap, web: Web, rng: random.Random | None = None) -> Perm:
    """delta with G^*(F_i) = F_{delta(i)}, decided exactly."""
    rng = rng or random.Random(11)
    images = []
    for i in range(1, web.d + 1):
        j, _ = pullback_normal_match(G, web, i, rng)
        images.append(j)
    if sorted(images) != list(range(1, web.d + 1)):
        raise NotAWebAutomorphism(f"foliation images {images} are not a bijection")
    return Perm(images)
