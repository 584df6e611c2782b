"""Braid-arrangement linear forms and factorization over them.

The arrangement in n variables consists of x_i, x_i - 1 and x_j - x_i for
i < j.  Difference forms are stored as x_j - x_i (j > i) so that every
stored form is positive on the chamber 1 < x_1 < ... < x_n; logarithms of
absolute values then become logarithms of stored forms, up to a sign that
the chamber convention discards.
"""

from __future__ import annotations

from .mpoly import MPoly
from .ratfunc import RatFunc
from .scalars import ONE, Scalar


class NotBasisMonomial(ValueError):
    """A rational function has an irreducible factor outside the basis."""


class LinFormBasis:
    """Ordered list of pairwise non-proportional affine-linear polynomials."""

    __slots__ = ("nvars", "forms", "names", "_by_key")

    def __init__(self, nvars: int, forms: list[MPoly], names: list[str]):
        self.nvars = nvars
        self.forms = forms
        self.names = names
        self._by_key = {_form_key(f): i for i, f in enumerate(forms)}
        if len(self._by_key) != len(forms):
            raise ValueError("basis forms must be pairwise non-proportional")

    def __len__(self) -> int:
        return len(self.forms)

    def index_of(self, form: MPoly) -> int | None:
        """Index of a form equal to `form` up to a scalar, else None."""
        return self._by_key.get(_form_key(form))

    # index helpers for the braid layout (x_i, then x_i - 1, then x_j - x_i)

    def var_index(self, i: int) -> int:
        return i

    def affine_index(self, i: int) -> int:
        return self.nvars + i

    def diff_index(self, i: int, j: int) -> int:
        """Index of x_{j+1} - x_{i+1} for 0-based i < j."""
        if not 0 <= i < j < self.nvars:
            raise ValueError("need 0 <= i < j < nvars")
        n = self.nvars
        offset = sum(n - 1 - a for a in range(i)) + (j - i - 1)
        return 2 * n + offset

    @staticmethod
    def braid(nvars: int) -> "LinFormBasis":
        forms: list[MPoly] = []
        names: list[str] = []
        one = MPoly.const(nvars, ONE)
        for i in range(nvars):
            forms.append(MPoly.var(nvars, i))
            names.append(f"x{i + 1}")
        for i in range(nvars):
            forms.append(MPoly.var(nvars, i) - one)
            names.append(f"x{i + 1}-1")
        for i in range(nvars):
            for j in range(i + 1, nvars):
                forms.append(MPoly.var(nvars, j) - MPoly.var(nvars, i))
                names.append(f"x{j + 1}-x{i + 1}")
        return LinFormBasis(nvars, forms, names)


_BRAID_CACHE: dict[int, LinFormBasis] = {}


def braid_basis(nvars: int) -> LinFormBasis:
    basis = _BRAID_CACHE.get(nvars)
    if basis is None:
        basis = LinFormBasis.braid(nvars)
        _BRAID_CACHE[nvars] = basis
    return basis


def _form_key(f: MPoly):
    """Canonical key of a polynomial up to scalar: monic term tuple."""
    lc_inv = f.leading_coeff().inv()
    return tuple(sorted((k, c * lc_inv) for k, c in f.terms.items()))


def factor_over_basis(f: RatFunc, basis: LinFormBasis) -> tuple[Scalar, dict[int, int]]:
    """Write f = const * prod forms[k]^e_k exactly.

    Raises NotBasisMonomial when any irreducible factor of f lies outside
    the basis.  The decomposition is unique since the forms are pairwise
    non-proportional.
    """
    if f.is_zero():
        raise ValueError("cannot factor the zero function")
    exps: dict[int, int] = {}
    const = ONE

    for poly, sign in ((f.num, 1), (f.den, -1)):
        rem = poly
        for k, form in enumerate(basis.forms):
            while not rem.is_const():
                q = rem.exact_div(form)
                if q is None:
                    break
                rem = q
                exps[k] = exps.get(k, 0) + sign
        if not rem.is_const():
            raise NotBasisMonomial(f"irreducible factor outside the basis: {rem!r}")
        c = rem.const_value()
        const = const * c if sign > 0 else const * c.inv()

    return const, {k: e for k, e in exps.items() if e != 0}


def rebuild_from_factors(const: Scalar, exps: dict[int, int], basis: LinFormBasis) -> RatFunc:
    """Inverse of factor_over_basis (round-trip check helper)."""
    out = RatFunc.const(basis.nvars, const)
    for k, e in exps.items():
        out = out * RatFunc.from_poly(basis.forms[k]) ** e
    return out


def rational_prime_factors(q) -> dict[int, int]:
    """Prime factorization exponents of a positive backend rational."""
    num = int(q.numerator)
    den = int(q.denominator)
    if num <= 0:
        raise ValueError("positive rational required")
    out: dict[int, int] = {}
    for val, sgn in ((num, 1), (den, -1)):
        d = 2
        while d * d <= val:
            while val % d == 0:
                out[d] = out.get(d, 0) + sgn
                val //= d
            d += 1 if d == 2 else 2
        if val > 1:
            out[val] = out.get(val, 0) + sgn
    return {p: e for p, e in out.items() if e != 0}
