"""Symmetric-group representation analysis of abelian-relation spaces.

Character tables come from the Murnaghan-Nakayama rule; action matrices
come from exact pullback of a relation basis along the birational action;
decomposition into irreducibles is an exact inner product against the
table.  Decompositions only use traces, which are class functions, so
they do not depend on the composition convention chosen for the action.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from math import factorial

from .abelian import ar_coordinates, ARTuple, NotInSpan
from .linalg import Matrix, mat_mul, mat_scalar, mat_sub, identity, rank as mat_rank, solve_columns, trace
from .scalars import ONE, RAT, Scalar, ZERO
from .webs import Perm, gsigma


class NotACharacter(ValueError):
    pass


# ---------------------------------------------------------------------------
# Partitions and the character table
# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class Partition:
    parts: tuple[int, ...]

    def __post_init__(self):
        p = self.parts
        if list(p) != sorted(p, reverse=True) or any(x <= 0 for x in p):
            raise ValueError(f"not a partition: {p}")

    @property
    def size(self) -> int:
        return sum(self.parts)

    def hook_dimension(self) -> int:
        """Dimension of the labelled irreducible via hook lengths."""
        rows = self.parts
        cols = [0] * (rows[0] if rows else 0)
        for r in rows:
            for c in range(r):
                cols[c] += 1
        num = factorial(self.size)
        den = 1
        for r, rlen in enumerate(rows):
            for c in range(rlen):
                den *= (rlen - c) + (cols[c] - r) - 1
        return num // den

    def __str__(self) -> str:
        return "[" + ",".join(map(str, self.parts)) + "]"


def partitions_of(m: int) -> list[Partition]:
    out: list[tuple[int, ...]] = []

    def rec(rem: int, mx: int, acc: list[int]):
        if rem == 0:
            out.append(tuple(acc))
            return
        for k in range(min(rem, mx), 0, -1):
            acc.append(k)
            rec(rem - k, k, acc)
            acc.pop()

    rec(m, m, [])
    return [Partition(p) for p in out]


def class_size(cycle_type: tuple[int, ...]) -> int:
    m = sum(cycle_type)
    cent = 1
    mult: dict[int, int] = {}
    for l in cycle_type:
        mult[l] = mult.get(l, 0) + 1
    for l, k in mult.items():
        cent *= (l ** k) * factorial(k)
    return factorial(m) // cent


@lru_cache(maxsize=None)
def _mn_character(lam: tuple[int, ...], mu: tuple[int, ...]) -> int:
    """chi_lam(mu) by the border-strip recursion, in beta-number form.

    With beta numbers b_i = lam_i + (r-1-i), removing a strip of length k
    corresponds to replacing some b by b-k not yet present; the strip
    height is the number of beta numbers jumped over.
    """
    if not mu:
        return 1 if not lam else 0
    if not lam:
        return 0
    k, rest = mu[0], mu[1:]
    r = len(lam)
    beta = [lam[i] + (r - 1 - i) for i in range(r)]
    betaset = set(beta)
    total = 0
    for b in beta:
        nb = b - k
        if nb < 0 or nb in betaset:
            continue
        height = sum(1 for x in beta if nb < x < b)
        newbeta = sorted((betaset - {b}) | {nb}, reverse=True)
        newlam = tuple(x - (r - 1 - i) for i, x in enumerate(newbeta))
        newlam = tuple(x for x in newlam if x > 0)
        total += (-1) ** height * _mn_character(newlam, rest)
    return total


@dataclass
class CharTable:
    m: int
    classes: list[tuple[int, ...]]  # cycle types (partitions of m)
    rows: dict[Partition, dict[tuple[int, ...], int]]

    def chi(self, lam: Partition, cycle_type: tuple[int, ...]) -> int:
        return self.rows[lam][cycle_type]

    def dimension(self, lam: Partition) -> int:
        return self.rows[lam][(1,) * self.m]

    def check_orthogonality(self) -> bool:
        order = factorial(self.m)
        parts = list(self.rows)
        for a in parts:
            for b in parts:
                s = 0
                for ct in self.classes:
                    s += class_size(ct) * self.chi(a, ct) * self.chi(b, ct)
                if s != (order if a == b else 0):
                    return False
        return True


def char_table(m: int) -> CharTable:
    if m > 10:
        raise ValueError("tables are built for m <= 10")
    classes = [p.parts for p in partitions_of(m)]
    rows = {}
    for lam in partitions_of(m):
        row = {ct: _mn_character(lam.parts, ct) for ct in classes}
        rows[lam] = row
    table = CharTable(m, classes, rows)
    for lam in rows:
        if table.dimension(lam) != lam.hook_dimension():
            raise AssertionError(f"dimension mismatch for {lam}")
    return table


# ---------------------------------------------------------------------------
# Action matrices
# ---------------------------------------------------------------------------


@dataclass
class ActionMatrix:
    sigma: Perm
    basis_id: str
    entries: Matrix

    def trace(self) -> Scalar:
        return trace(self.entries)


class ARBasis:
    """A basis of relations with cached stacked coordinates (columns)."""

    def __init__(self, n: int, relations: list[ARTuple], basis_id: str,
                 rng: random.Random | None = None):
        self.n = n
        self.relations = relations
        self.basis_id = basis_id
        self.rng = rng or random.Random(19)
        self.columns = [ar_coordinates(ar, rng=self.rng) for ar in relations]
        self.matrix = [[self.columns[b][t] for b in range(len(relations))]
                       for t in range(len(self.columns[0]))]
        if mat_rank(self.columns) != len(relations):
            raise ValueError("the given relations are not a basis")

    def coordinates(self, ar: ARTuple) -> list[Scalar]:
        target = ar_coordinates(ar, rng=self.rng)
        sol = _solve_matrix(self.matrix, target)
        if sol is None:
            raise NotInSpan("relation left the span of the basis")
        return sol


def _solve_matrix(a: Matrix, b: list[Scalar]) -> list[Scalar] | None:
    from .linalg import solve

    return solve(a, b)


def action_matrix(n: int, sigma: Perm, basis: ARBasis,
                  rng: random.Random | None = None) -> ActionMatrix:
    """Matrix of the pullback action of sigma on the basis: column b holds
    the coordinates of sigma acting on the b-th basis relation."""
    from .abelian import pullback_ar

    rng = rng or random.Random(43)
    G = gsigma(n, sigma)
    cols = []
    for ar in basis.relations:
        moved = pullback_ar(ar, G, rng)
        cols.append(basis.coordinates(moved))
    size = len(basis.relations)
    entries = [[cols[b][a] for b in range(size)] for a in range(size)]
    return ActionMatrix(sigma, basis.basis_id, entries)


def class_representative(m: int, cycle_type: tuple[int, ...]) -> Perm:
    """Descending cycle lengths on consecutive integers."""
    img = list(range(1, m + 1))
    pos = 1
    for l in sorted(cycle_type, reverse=True):
        cyc = list(range(pos, pos + l))
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            img[a - 1] = b
        pos += l
    return Perm(img)


def traces_by_class(n: int, basis: ARBasis,
                    rng: random.Random | None = None) -> dict[tuple[int, ...], Scalar]:
    m = n + 3
    out = {}
    for p in partitions_of(m):
        rep = class_representative(m, p.parts)
        out[p.parts] = action_matrix(n, rep, basis, rng).trace()
    return out


# ---------------------------------------------------------------------------
# Decomposition and projectors
# ---------------------------------------------------------------------------


def decompose(traces: dict[tuple[int, ...], Scalar], m: int) -> dict[Partition, int]:
    """Multiplicities reproducing the given character exactly.

    With all classes present this is the orthogonality inner product; with
    a subset, the linear system must determine the multiplicities uniquely.
    """
    table = char_table(m)
    parts = list(table.rows)
    classes = list(traces)
    if set(classes) == set(table.classes):
        order = factorial(m)
        out: dict[Partition, int] = {}
        for lam in parts:
            acc = RAT(0)
            for ct in table.classes:
                val = traces[ct]
                if not val.is_rational():
                    raise NotACharacter("traces must be rational")
                acc += RAT(class_size(ct)) * RAT(table.chi(lam, ct)) * val.re
            q = acc / RAT(order)
            if q.denominator != 1 or q < 0:
                raise NotACharacter(f"non-integral multiplicity {q} for {lam}")
            if q:
                out[lam] = int(q)
        return out
    # partial trace data: exact solve + uniqueness check
    rows = [[Scalar(table.chi(lam, ct)) for lam in parts] for ct in classes]
    rhs = [traces[ct] for ct in classes]
    from .linalg import nullspace, solve

    if nullspace(rows, len(parts)):
        raise NotACharacter("the given classes do not determine multiplicities")
    sol = solve(rows, rhs)
    if sol is None:
        raise NotACharacter("no multiplicity vector matches the traces")
    out = {}
    for lam, c in zip(parts, sol):
        if not c.is_rational() or c.re.denominator != 1 or c.re < 0:
            raise NotACharacter(f"non-integral multiplicity for {lam}")
        if c.re:
            out[lam] = int(c.re)
    return out


def isotypic_projector(chi: Partition, matrices: dict[Perm, Matrix]) -> Matrix:
    """(dim chi / |G|) * sum chi(sigma^{-1}) M_sigma over the whole group."""
    m = chi.size
    if m > 7:
        raise ValueError("full-group summation is capped at S_7")
    table = char_table(m)
    size = len(next(iter(matrices.values())))
    acc = [[ZERO] * size for _ in range(size)]
    for sigma, mat in matrices.items():
        val = table.chi(chi, sigma.inverse().cycle_type())
        if val == 0:
            continue
        c = Scalar(val)
        for r in range(size):
            accr = acc[r]
            matr = mat[r]
            for s in range(size):
                if not matr[s].is_zero():
                    accr[s] = accr[s] + c * matr[s]
    factor = Scalar(RAT(table.dimension(chi), factorial(m)))
    return mat_scalar(acc, factor)


def projector_rank(p: Matrix) -> int:
    return mat_rank(p)


def is_idempotent(p: Matrix) -> bool:
    return all(all(x.is_zero() for x in row) for row in mat_sub(mat_mul(p, p), p))
