"""Exact linear algebra over the Gaussian rationals, plus a certified
modular path for large kernels.

The modular path exploits the one-sided bound rank_p <= rank_Q: a mod-p
kernel of dimension d proves the exact kernel has dimension <= d, and an
exactly verified witness of each claimed kernel element closes the sandwich.
Callers that need an unconditional answer pair the two.
"""

from __future__ import annotations

from typing import Sequence

from .scalars import ONE, RAT, Scalar, ZERO

Matrix = list[list[Scalar]]


def identity(n: int) -> Matrix:
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    rows, inner, cols = len(a), len(b), len(b[0])
    out = [[ZERO] * cols for _ in range(rows)]
    for i in range(rows):
        ai = a[i]
        oi = out[i]
        for k in range(inner):
            c = ai[k]
            if c.is_zero():
                continue
            bk = b[k]
            for j in range(cols):
                if not bk[j].is_zero():
                    oi[j] = oi[j] + c * bk[j]
    return out


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scalar(a: Matrix, c: Scalar) -> Matrix:
    return [[x * c for x in row] for row in a]


def trace(a: Matrix) -> Scalar:
    t = ZERO
    for i in range(len(a)):
        t = t + a[i][i]
    return t


def _echelon(rows: Matrix) -> tuple[Matrix, list[int]]:
    """Row echelon form by exact Gauss elimination; returns (rows, pivot cols)."""
    mat = [row[:] for row in rows]
    m = len(mat)
    n = len(mat[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if not mat[i][c].is_zero()), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = mat[r][c].inv()
        mat[r] = [x * inv for x in mat[r]]
        for i in range(m):
            if i != r and not mat[i][c].is_zero():
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return mat[:r], pivots


def rank(rows: Matrix) -> int:
    if not rows:
        return 0
    return len(_echelon(rows)[0])


def nullspace(rows: Matrix, ncols: int) -> list[list[Scalar]]:
    """Basis of {v : rows @ v = 0}."""
    if not rows:
        return [[ONE if i == j else ZERO for i in range(ncols)] for j in range(ncols)]
    ech, pivots = _echelon(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [ZERO] * ncols
        v[fc] = ONE
        for r, pc in enumerate(pivots):
            v[pc] = -ech[r][fc]
        basis.append(v)
    return basis


def solve(a: Matrix, b: list[Scalar]) -> list[Scalar] | None:
    """One solution x of a @ x = b, or None when inconsistent."""
    m = len(a)
    n = len(a[0]) if m else 0
    aug = [a[i][:] + [b[i]] for i in range(m)]
    ech, pivots = _echelon(aug)
    if n in pivots:
        return None
    x = [ZERO] * n
    for r, pc in enumerate(pivots):
        x[pc] = ech[r][n]
    return x


def solve_columns(a: Matrix, bs: Matrix) -> Matrix | None:
    """X with a @ X = bs (bs given column-stacked as a matrix), or None."""
    cols = len(bs[0])
    out_cols = []
    for j in range(cols):
        x = solve(a, [row[j] for row in bs])
        if x is None:
            return None
        out_cols.append(x)
    return [[out_cols[j][i] for j in range(cols)] for i in range(len(a[0]))]


def invert(a: Matrix) -> Matrix | None:
    n = len(a)
    aug = [a[i][:] + identity(n)[i] for i in range(n)]
    ech, pivots = _echelon(aug)
    if pivots[:n] != list(range(n)):
        return None
    return [row[n:] for row in ech]


# ---------------------------------------------------------------------------
# Modular kernel for large rational matrices.
# ---------------------------------------------------------------------------

MOD_P = 2_147_483_629  # prime < 2^31, products stay inside int64


def rational_rows_mod_p(rows: Sequence[Sequence[RAT]], p: int = MOD_P) -> list[list[int]]:
    out = []
    for row in rows:
        r = []
        for q in row:
            den = int(q.denominator) % p
            if den == 0:
                raise ZeroDivisionError("denominator vanishes mod p; pick another prime")
            r.append((int(q.numerator) * pow(den, p - 2, p)) % p)
        out.append(r)
    return out


def mod_kernel_dim(rows: list[list[int]], ncols: int, p: int = MOD_P) -> int:
    """dim ker over F_p.  Upper-bounds the exact kernel dimension."""
    import numpy as np

    if not rows:
        return ncols
    mat = np.array(rows, dtype=np.int64) % p
    m = len(rows)
    r = 0
    for c in range(ncols):
        if r == m:
            break
        col = mat[r:, c]
        nz = np.nonzero(col)[0]
        if len(nz) == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            mat[[r, piv]] = mat[[piv, r]]
        inv = pow(int(mat[r, c]), p - 2, p)
        mat[r] = (mat[r] * inv) % p
        factors = mat[r + 1 :, c].copy()
        if factors.any():
            mat[r + 1 :] = (mat[r + 1 :] - factors[:, None] * mat[r][None, :]) % p
        r += 1
    return ncols - r
