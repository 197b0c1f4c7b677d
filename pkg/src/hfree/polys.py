"""Exact rational arithmetic: sparse multivariate polynomials, shift maps,
matrices over polynomials and rationals, interpolation, kernels.

Everything here is over Q (``fractions.Fraction``) with zero tolerance.
Polynomials are sparse maps from exponent vectors to coefficients; the
variables are the coordinates of a fixed Cartan basis and are rendered as
``h1, h2, ...`` in the canonical text form.
"""

from __future__ import annotations

import itertools
import re
from fractions import Fraction
from math import comb
from typing import Iterable, Mapping, Optional, Sequence, Union

Rat = Fraction
RatLike = Union[Fraction, int, str]


def rat(x: RatLike) -> Fraction:
    """Coerce ints and 'num/den' strings to an exact rational."""
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


class Poly:
    """A sparse multivariate polynomial over Q in ``nvars`` variables.

    ``terms`` maps exponent tuples (length ``nvars``, nonnegative ints) to
    nonzero Fraction coefficients.  Instances are immutable by convention:
    no method mutates ``terms`` after construction.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Optional[Mapping[tuple, RatLike]] = None):
        self.nvars = nvars
        clean: dict = {}
        if terms:
            for expo, coeff in terms.items():
                expo = tuple(int(e) for e in expo)
                if len(expo) != nvars:
                    raise ValueError(f"exponent {expo} has wrong arity for {nvars} variables")
                if any(e < 0 for e in expo):
                    raise ValueError(f"negative exponent in {expo}")
                c = rat(coeff)
                if c:
                    clean[expo] = clean.get(expo, Fraction(0)) + c
                    if not clean[expo]:
                        del clean[expo]
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "Poly":
        return cls(nvars)

    @classmethod
    def const(cls, nvars: int, c: RatLike) -> "Poly":
        c = rat(c)
        return cls(nvars, {(0,) * nvars: c} if c else None)

    @classmethod
    def variable(cls, nvars: int, i: int) -> "Poly":
        """The variable h_{i+1} (0-based index i)."""
        expo = tuple(1 if k == i else 0 for k in range(nvars))
        return cls(nvars, {expo: 1})

    @classmethod
    def linear(cls, coeffs: Sequence[RatLike], const: RatLike = 0) -> "Poly":
        """sum_i coeffs[i]*h_{i+1} + const."""
        n = len(coeffs)
        terms: dict = {}
        for i, c in enumerate(coeffs):
            c = rat(c)
            if c:
                terms[tuple(1 if k == i else 0 for k in range(n))] = c
        c0 = rat(const)
        if c0:
            terms[(0,) * n] = c0
        return cls(n, terms)

    # -- ring structure ----------------------------------------------------

    def _check(self, other: "Poly") -> None:
        if self.nvars != other.nvars:
            raise ValueError("variable-count mismatch")

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Poly) and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.nvars, frozenset(self.terms.items())))

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        terms = dict(self.terms)
        for expo, c in other.terms.items():
            s = terms.get(expo, Fraction(0)) + c
            if s:
                terms[expo] = s
            else:
                terms.pop(expo, None)
        out = Poly.__new__(Poly)
        out.nvars = self.nvars
        out.terms = terms
        return out

    def __neg__(self) -> "Poly":
        out = Poly.__new__(Poly)
        out.nvars = self.nvars
        out.terms = {e: -c for e, c in self.terms.items()}
        return out

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        self._check(other)
        if not self.terms or not other.terms:
            return Poly.zero(self.nvars)
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                expo = tuple(a + b for a, b in zip(e1, e2))
                s = terms.get(expo, Fraction(0)) + c1 * c2
                if s:
                    terms[expo] = s
                else:
                    del terms[expo]
        out = Poly.__new__(Poly)
        out.nvars = self.nvars
        out.terms = terms
        return out

    def scale(self, c: RatLike) -> "Poly":
        c = rat(c)
        if not c:
            return Poly.zero(self.nvars)
        out = Poly.__new__(Poly)
        out.nvars = self.nvars
        out.terms = {e: c * v for e, v in self.terms.items()}
        return out

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative power")
        result = Poly.const(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- queries -----------------------------------------------------------

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, i: int) -> int:
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    def evaluate(self, point: Sequence[RatLike]) -> Fraction:
        if len(point) != self.nvars:
            raise ValueError("point has wrong arity")
        pt = [rat(x) for x in point]
        total = Fraction(0)
        for expo, coeff in self.terms.items():
            v = coeff
            for x, e in zip(pt, expo):
                if e:
                    v *= x**e
            total += v
        return total

    # -- substitutions -----------------------------------------------------

    def shift(self, offsets: Sequence[RatLike]) -> "Poly":
        """Substitute h_i -> h_i - offsets[i] (one variable at a time,
        binomial expansion)."""
        if len(offsets) != self.nvars:
            raise ValueError("offset has wrong arity")
        result = self
        for i, s in enumerate(offsets):
            s = rat(s)
            if s:
                result = result._shift_one(i, s)
        return result

    def _shift_one(self, i: int, s: Fraction) -> "Poly":
        terms: dict = {}
        neg = -s
        for expo, coeff in self.terms.items():
            e = expo[i]
            if e == 0:
                terms[expo] = terms.get(expo, Fraction(0)) + coeff
                continue
            # (h + neg)^e expanded
            power = Fraction(1)
            for k in range(e, -1, -1):
                new = expo[:i] + (k,) + expo[i + 1 :]
                c = coeff * comb(e, k) * power
                s2 = terms.get(new, Fraction(0)) + c
                if s2:
                    terms[new] = s2
                else:
                    terms.pop(new, None)
                power *= neg
        for expo in [e for e, c in terms.items() if not c]:
            del terms[expo]
        out = Poly.__new__(Poly)
        out.nvars = self.nvars
        out.terms = terms
        return out

    def subs_linear(self, images: Sequence["Poly"]) -> "Poly":
        """Substitute each variable h_i by the polynomial images[i] (same
        target arity).  Used for rewriting between Cartan coordinate bases."""
        if len(images) != self.nvars:
            raise ValueError("need one image per variable")
        m = images[0].nvars if images else self.nvars
        total = Poly.zero(m)
        for expo, coeff in self.terms.items():
            term = Poly.const(m, coeff)
            for i, e in enumerate(expo):
                if e:
                    term = term * images[i] ** e
            total = total + term
        return total

    def divexact(self, d: "Poly") -> "Poly":
        """Exact division (raises if the division leaves a remainder).

        Monomial-by-monomial cancellation against the graded-lex leading
        term of ``d``; used by the fraction-free determinant where every
        intermediate division is exact.
        """
        self._check(d)
        if not d.terms:
            raise ZeroDivisionError("division by zero polynomial")
        dlead = max(d.terms, key=_gradedlex_key)
        dcoeff = d.terms[dlead]
        rem = dict(self.terms)
        q: dict = {}
        while rem:
            rlead = max(rem, key=_gradedlex_key)
            expo = tuple(a - b for a, b in zip(rlead, dlead))
            if any(e < 0 for e in expo):
                raise ArithmeticError("inexact polynomial division")
            c = rem[rlead] / dcoeff
            q[expo] = c
            for de, dc in d.terms.items():
                tgt = tuple(a + b for a, b in zip(expo, de))
                s = rem.get(tgt, Fraction(0)) - c * dc
                if s:
                    rem[tgt] = s
                else:
                    rem.pop(tgt, None)
        out = Poly.__new__(Poly)
        out.nvars = self.nvars
        out.terms = q
        return out

    # -- rendering ---------------------------------------------------------

    def text(self) -> str:
        """Canonical text form: terms in graded-lex order, 'num/den' coefficients."""
        if not self.terms:
            return "0"
        parts = []
        for expo in sorted(self.terms, key=_gradedlex_key, reverse=True):
            coeff = self.terms[expo]
            vars_part = "*".join(
                f"h{i + 1}" if e == 1 else f"h{i + 1}^{e}" for i, e in enumerate(expo) if e
            )
            if not vars_part:
                parts.append(_rat_str(coeff))
            elif coeff == 1:
                parts.append(vars_part)
            elif coeff == -1:
                parts.append("-" + vars_part)
            else:
                parts.append(f"{_rat_str(coeff)}*{vars_part}")
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    def __repr__(self) -> str:
        return f"Poly({self.text()})"


def _gradedlex_key(expo: tuple) -> tuple:
    return (sum(expo), expo)


def _rat_str(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


class ShiftMap:
    """The substitution h_i -> h_i - offset[i]; composition adds offsets."""

    __slots__ = ("offsets",)

    def __init__(self, offsets: Sequence[RatLike]):
        self.offsets = tuple(rat(x) for x in offsets)

    def __call__(self, p: Poly) -> Poly:
        return apply_shift(p, self)

    def compose(self, other: "ShiftMap") -> "ShiftMap":
        if len(self.offsets) != len(other.offsets):
            raise ValueError("offset arity mismatch")
        return ShiftMap([a + b for a, b in zip(self.offsets, other.offsets)])

    def inverse(self) -> "ShiftMap":
        return ShiftMap([-a for a in self.offsets])

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ShiftMap) and self.offsets == other.offsets

    def __repr__(self) -> str:
        return f"ShiftMap({list(map(str, self.offsets))})"


def apply_shift(p: Poly, s: ShiftMap) -> Poly:
    if len(s.offsets) != p.nvars:
        raise ValueError("shift arity mismatch")
    return p.shift(s.offsets)


def eval_poly(p: Poly, point: Sequence[RatLike]) -> Fraction:
    return p.evaluate(point)


class PolyMatrix:
    """Dense rows x cols matrix of Poly entries (one shared variable count)."""

    __slots__ = ("rows", "cols", "nvars", "entries")

    def __init__(self, rows: int, cols: int, nvars: int, entries: Optional[Sequence[Sequence[Poly]]] = None):
        self.rows = rows
        self.cols = cols
        self.nvars = nvars
        if entries is None:
            self.entries = [[Poly.zero(nvars) for _ in range(cols)] for _ in range(rows)]
        else:
            if len(entries) != rows or any(len(r) != cols for r in entries):
                raise ValueError("entry grid has wrong shape")
            for row in entries:
                for p in row:
                    if p.nvars != nvars:
                        raise ValueError("entry variable-count mismatch")
            self.entries = [list(r) for r in entries]

    @classmethod
    def identity(cls, n: int, nvars: int) -> "PolyMatrix":
        m = cls(n, n, nvars)
        one = Poly.const(nvars, 1)
        for i in range(n):
            m.entries[i][i] = one
        return m

    @classmethod
    def scalar(cls, n: int, p: Poly) -> "PolyMatrix":
        m = cls(n, n, p.nvars)
        for i in range(n):
            m.entries[i][i] = p
        return m

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, PolyMatrix)
            and (self.rows, self.cols, self.nvars) == (other.rows, other.cols, other.nvars)
            and self.entries == other.entries
        )

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        self._check_shape(other, same=True)
        return PolyMatrix(
            self.rows,
            self.cols,
            self.nvars,
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)],
        )

    def __sub__(self, other: "PolyMatrix") -> "PolyMatrix":
        self._check_shape(other, same=True)
        return PolyMatrix(
            self.rows,
            self.cols,
            self.nvars,
            [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)],
        )

    def _check_shape(self, other: "PolyMatrix", same: bool = False) -> None:
        if self.nvars != other.nvars:
            raise ValueError("variable-count mismatch")
        if same and (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        if not same and self.cols != other.rows:
            raise ValueError("inner dimension mismatch")

    def __mul__(self, other: "PolyMatrix") -> "PolyMatrix":
        self._check_shape(other)
        out = PolyMatrix(self.rows, other.cols, self.nvars)
        # sparse-aware: skip zero entries, which dominate action matrices
        for i in range(self.rows):
            row = self.entries[i]
            acc = out.entries[i]
            for k in range(self.cols):
                a = row[k]
                if not a:
                    continue
                orow = other.entries[k]
                for j in range(other.cols):
                    b = orow[j]
                    if b:
                        acc[j] = acc[j] + a * b
        return out

    def scale(self, c: RatLike) -> "PolyMatrix":
        return self.map(lambda p: p.scale(c))

    def map(self, fn) -> "PolyMatrix":
        return PolyMatrix(self.rows, self.cols, self.nvars, [[fn(p) for p in row] for row in self.entries])

    def shift(self, offsets: Sequence[RatLike]) -> "PolyMatrix":
        offs = [rat(x) for x in offsets]
        if not any(offs):
            return self
        return self.map(lambda p: p.shift(offs))

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix(
            self.cols, self.rows, self.nvars, [[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)]
        )

    def evaluate(self, point: Sequence[RatLike]) -> list:
        pt = [rat(x) for x in point]
        return [[p.evaluate(pt) for p in row] for row in self.entries]

    def is_zero(self) -> bool:
        return all(not p for row in self.entries for p in row)

    def max_entry_degree(self) -> int:
        return max((p.total_degree() for row in self.entries for p in row), default=-1)

    def scalar_value(self) -> Optional[Fraction]:
        """If the matrix is c * Identity for a constant c, return c, else None."""
        if self.rows != self.cols:
            return None
        c = None
        for i in range(self.rows):
            for j in range(self.cols):
                p = self.entries[i][j]
                if i == j:
                    if not p.is_constant():
                        return None
                    v = p.constant_term()
                    if c is None:
                        c = v
                    elif v != c:
                        return None
                elif p:
                    return None
        return c if c is not None else Fraction(0)

    def det(self) -> Poly:
        """Determinant by Bareiss fraction-free elimination over the
        polynomial ring (all interior divisions are exact)."""
        if self.rows != self.cols:
            raise ValueError("determinant of non-square matrix")
        n = self.rows
        if n == 0:
            return Poly.const(self.nvars, 1)
        a = [row[:] for row in self.entries]
        sign = 1
        prev = Poly.const(self.nvars, 1)
        for k in range(n - 1):
            if not a[k][k]:
                for r in range(k + 1, n):
                    if a[r][k]:
                        a[k], a[r] = a[r], a[k]
                        sign = -sign
                        break
                else:
                    return Poly.zero(self.nvars)
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    num = a[k][k] * a[i][j] - a[i][k] * a[k][j]
                    a[i][j] = num.divexact(prev)
                a[i][k] = Poly.zero(self.nvars)
            prev = a[k][k]
        d = a[n - 1][n - 1]
        return d if sign == 1 else -d

    def text_grid(self) -> list:
        return [[p.text() for p in row] for row in self.entries]

    def __repr__(self) -> str:
        return f"PolyMatrix({self.rows}x{self.cols}, {self.text_grid()})"


# -- rational linear algebra ------------------------------------------------


def rat_rref(m: Sequence[Sequence[RatLike]]):
    """Reduced row echelon form.  Returns (rref rows, pivot column list)."""
    a = [[rat(x) for x in row] for row in m]
    nrows = len(a)
    ncols = len(a[0]) if nrows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, nrows) if a[i][c]), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        pv = a[r][c]
        a[r] = [x / pv for x in a[r]]
        for i in range(nrows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return a, pivots


def rat_kernel(m: Sequence[Sequence[RatLike]]) -> list:
    """Exact basis of the right kernel of a rational matrix."""
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    if nrows == 0:
        return [[Fraction(1) if j == i else Fraction(0) for j in range(ncols)] for i in range(ncols)]
    a, pivots = rat_rref(m)
    basis = []
    pivot_set = set(pivots)
    for free in range(ncols):
        if free in pivot_set:
            continue
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -a[r][free]
        basis.append(v)
    return basis


def rat_solve(m: Sequence[Sequence[RatLike]], rhs: Sequence[Sequence[RatLike]]) -> Optional[list]:
    """Solve m @ X = rhs exactly (rhs given column-stacked as a matrix).

    Returns one solution X (free variables set to zero) or None when the
    system is inconsistent.
    """
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    k = len(rhs[0]) if rhs else 0
    aug = [[rat(x) for x in row] + [rat(y) for y in rrow] for row, rrow in zip(m, rhs)]
    a, pivots = rat_rref(aug)
    pivots_in_rhs = [c for c in pivots if c >= ncols]
    if pivots_in_rhs:
        return None
    x = [[Fraction(0)] * k for _ in range(ncols)]
    for r, pc in enumerate(pivots):
        for j in range(k):
            x[pc][j] = a[r][ncols + j]
    return x


def rat_rank(m: Sequence[Sequence[RatLike]]) -> int:
    if not m:
        return 0
    return len(rat_rref(m)[1])


def rat_det(m: Sequence[Sequence[RatLike]]) -> Fraction:
    """Exact determinant of a rational matrix (Gaussian elimination)."""
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("determinant of non-square matrix")
    a = [[rat(x) for x in row] for row in m]
    det = Fraction(1)
    for c in range(n):
        pivot = next((i for i in range(c, n) if a[i][c]), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            a[c], a[pivot] = a[pivot], a[c]
            det = -det
        det *= a[c][c]
        inv = 1 / a[c][c]
        for i in range(c + 1, n):
            if a[i][c]:
                f = a[i][c] * inv
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return det


def char_poly_leverrier(m: Sequence[Sequence[RatLike]]) -> list:
    """Characteristic polynomial coefficients [c_0..c_n] (det(tI - M) =
    sum c_k t^k) via the Leverrier-Faddeev trace recursion.

    Kept as an independent cross-check for determinants:
    det(M) = (-1)^n * c_0.
    """
    n = len(m)
    a = [[rat(x) for x in row] for row in m]
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    mk = [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    for k in range(1, n + 1):
        mk = _mat_mul(a, mk)
        ck = -sum(mk[i][i] for i in range(n)) / k
        coeffs[n - k] = ck
        for i in range(n):
            mk[i][i] += ck
    return coeffs


def _mat_mul(a: list, b: list) -> list:
    n, mid, m = len(a), len(b), len(b[0]) if b else 0
    out = [[Fraction(0)] * m for _ in range(n)]
    for i in range(n):
        for k in range(mid):
            v = a[i][k]
            if v:
                for j in range(m):
                    if b[k][j]:
                        out[i][j] += v * b[k][j]
    return out


# -- interpolation ----------------------------------------------------------


def monomials_up_to(nvars: int, degree: int) -> list:
    """All exponent vectors of total degree <= degree, graded-lex sorted."""
    expos = [
        e
        for e in itertools.product(range(degree + 1), repeat=nvars)
        if sum(e) <= degree
    ]
    expos.sort(key=_gradedlex_key)
    return expos


class UnderdeterminedFit(ValueError):
    """The interpolation system has fewer independent samples than monomials."""


def fit_polynomial(samples: Iterable[tuple], degree_bound: int, nvars: Optional[int] = None) -> Optional[Poly]:
    """Exact polynomial interpolation with total degree <= degree_bound.

    ``samples`` is an iterable of (point, value).  Returns the unique
    interpolant, or None when the samples are inconsistent with any such
    polynomial (the NoFit signal).  Raises UnderdeterminedFit when the
    samples do not pin the polynomial down.
    """
    samples = list(samples)
    if not samples:
        raise UnderdeterminedFit("no samples")
    if nvars is None:
        nvars = len(samples[0][0])
    monos = monomials_up_to(nvars, degree_bound)
    rows = []
    rhs = []
    for point, value in samples:
        pt = [rat(x) for x in point]
        if len(pt) != nvars:
            raise ValueError("sample point arity mismatch")
        row = []
        for expo in monos:
            v = Fraction(1)
            for x, e in zip(pt, expo):
                if e:
                    v *= x**e
            row.append(v)
        rows.append(row)
        rhs.append([rat(value)])
    if len(samples) < len(monos):
        raise UnderdeterminedFit(
            f"{len(samples)} samples cannot determine {len(monos)} coefficients"
        )
    sol = rat_solve(rows, rhs)
    if sol is None:
        return None
    if rat_rank(rows) < len(monos):
        raise UnderdeterminedFit("sample points are not in general position")
    coeffs = {expo: sol[i][0] for i, expo in enumerate(monos) if sol[i][0]}
    return Poly(nvars, coeffs)


_FACTOR_RE = re.compile(r"^h([1-9]\d*)(?:\^([1-9]\d*))?$")


def parse_poly(text: str, nvars: int) -> Poly:
    """Inverse of Poly.text(): parse 'h1^2 - 2*h1 + 3/4' back into a Poly."""
    s = text.strip()
    if not s:
        raise ValueError("empty polynomial text")
    if s == "0":
        return Poly.zero(nvars)
    terms: dict = {}
    for chunk in s.replace(" - ", " + -").split(" + "):
        coeff = Fraction(1)
        if chunk.startswith("-"):
            coeff = -coeff
            chunk = chunk[1:]
        expo = [0] * nvars
        for factor in chunk.split("*"):
            m = _FACTOR_RE.match(factor)
            if m:
                idx = int(m.group(1))
                if idx > nvars:
                    raise ValueError(f"variable h{idx} exceeds arity {nvars}")
                expo[idx - 1] += int(m.group(2) or 1)
            else:
                coeff *= Fraction(factor)
        key = tuple(expo)
        terms[key] = terms.get(key, Fraction(0)) + coeff
    return Poly(nvars, {e: c for e, c in terms.items() if c})
