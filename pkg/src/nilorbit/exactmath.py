"""Exact rational scalars, matrices and a small multivariate polynomial type.

Scalars are :class:`fractions.Fraction` throughout; nothing in the package
ever touches a float.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from .errors import DegenerateCoefficient, MissingVariable, NotAffine, ParseError

Rational = Fraction
Scalar = Union[int, Fraction]

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*$")


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Parse ``"p/q"`` or ``"p"``; a zero denominator is a :class:`ParseError`."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, bool):
        raise ParseError(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise ParseError(f"not a rational: {text!r}")
    m = _RATIONAL_RE.match(text)
    if m is None:
        raise ParseError(f"not a rational: {text!r}", text=text)
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ParseError(f"zero denominator in {text!r}", text=text)
    return Fraction(num, den)


def format_rational(q: Scalar) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def as_fractions(values: Iterable[Scalar | str]) -> tuple[Fraction, ...]:
    return tuple(parse_rational(v) if isinstance(v, str) else Fraction(v) for v in values)


def is_zero_vector(v: Sequence[Fraction]) -> bool:
    return all(x == 0 for x in v)


# ---------------------------------------------------------------------------
# matrices


@dataclass(frozen=True)
class RatMatrix:
    """Immutable dense matrix over the rationals."""

    entries: tuple[tuple[Fraction, ...], ...]
    ncols: int

    def __post_init__(self):
        for row in self.entries:
            if len(row) != self.ncols:
                raise ValueError("ragged matrix")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[Scalar | str]], ncols: int | None = None) -> "RatMatrix":
        rows = tuple(as_fractions(r) for r in rows)
        if ncols is None:
            if not rows:
                raise ValueError("ncols required for a matrix without rows")
            ncols = len(rows[0])
        return cls(rows, ncols)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "RatMatrix":
        return cls(tuple((Fraction(0),) * ncols for _ in range(nrows)), ncols)

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls(
            tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)), n
        )

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence[Scalar]], nrows: int) -> "RatMatrix":
        return cls.from_rows(
            [[cols[j][i] for j in range(len(cols))] for i in range(nrows)], len(cols)
        )

    @property
    def nrows(self) -> int:
        return len(self.entries)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.entries[i][j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i]

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(r[j] for r in self.entries)

    def transpose(self) -> "RatMatrix":
        return RatMatrix(
            tuple(self.column(j) for j in range(self.ncols)), self.nrows
        )

    @property
    def T(self) -> "RatMatrix":
        return self.transpose()

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return RatMatrix(
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries)),
            self.ncols,
        )

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        return self + other.scale(-1)

    def scale(self, c: Scalar) -> "RatMatrix":
        c = Fraction(c)
        return RatMatrix(tuple(tuple(c * a for a in r) for r in self.entries), self.ncols)

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        cols = [other.column(j) for j in range(other.ncols)]
        out = []
        for r in self.entries:
            out.append(tuple(_dot(r, c) for c in cols))
        return RatMatrix(tuple(out), other.ncols)

    def apply(self, v: Sequence[Scalar]) -> tuple[Fraction, ...]:
        if len(v) != self.ncols:
            raise ValueError("vector length mismatch")
        return tuple(_dot(r, v) for r in self.entries)

    def is_zero(self) -> bool:
        return all(a == 0 for r in self.entries for a in r)

    def rref(self) -> tuple["RatMatrix", int, list[int]]:
        return rref(self)

    @property
    def rank(self) -> int:
        return rref(self)[1]

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self.entries]


def _dot(a: Sequence[Scalar], b: Sequence[Scalar]) -> Fraction:
    s = Fraction(0)
    for x, y in zip(a, b):
        if x and y:
            s += x * y
    return s


def rref(m: RatMatrix) -> tuple[RatMatrix, int, list[int]]:
    """Reduced row echelon form, rank and pivot columns.

    Pivot search scans columns left to right and, within a column, rows top
    to bottom starting at the current pivot row.
    """
    rows = [list(r) for r in m.entries]
    nrows, ncols = m.nrows, m.ncols
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return RatMatrix(tuple(tuple(row) for row in rows), ncols), r, pivots


def row_basis(vectors: Iterable[Sequence[Scalar]], ncols: int) -> tuple[tuple[Fraction, ...], ...]:
    """Canonical (nonzero rows of the RREF) basis of the span of ``vectors``."""
    vecs = [as_fractions(v) for v in vectors]
    if not vecs:
        return ()
    red, rank, _ = rref(RatMatrix(tuple(vecs), ncols))
    return red.entries[:rank]


def nullspace(m: RatMatrix) -> list[tuple[Fraction, ...]]:
    """Basis of ``{x : m x = 0}``, one vector per free column (free entry = 1)."""
    red, rank, pivots = rref(m)
    free = [c for c in range(m.ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * m.ncols
        x[f] = Fraction(1)
        for r, pc in enumerate(pivots):
            x[pc] = -red.entries[r][f]
        basis.append(tuple(x))
    return basis


def solve(m: RatMatrix, b: Sequence[Scalar]) -> tuple[Fraction, ...] | None:
    """One solution of ``m x = b`` (free variables set to zero), or ``None``."""
    aug = RatMatrix(
        tuple(tuple(r) + (Fraction(bi),) for r, bi in zip(m.entries, b)), m.ncols + 1
    )
    red, rank, pivots = rref(aug)
    if pivots and pivots[-1] == m.ncols:
        return None
    x = [Fraction(0)] * m.ncols
    for r, pc in enumerate(pivots):
        x[pc] = red.entries[r][m.ncols]
    return tuple(x)


def hermite_rows(rows: Iterable[Sequence[int]], ncols: int) -> list[tuple[int, ...]]:
    """Row-style Hermite normal form of an integer row lattice.

    Returns a basis of the Z-span of ``rows`` in echelon form with positive
    pivots and reduced entries above each pivot.
    """
    work = [list(map(int, r)) for r in rows]
    out: list[list[int]] = []
    col = 0
    while work and col < ncols:
        nz = [r for r in work if r[col] != 0]
        zero = [r for r in work if r[col] == 0]
        if not nz:
            col += 1
            continue
        # Euclid on the column until one row carries the gcd
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            piv = nz[0]
            rest = []
            for r in nz[1:]:
                q = r[col] // piv[col]
                r = [a - q * b for a, b in zip(r, piv)]
                (rest if r[col] != 0 else zero).append(r)
            nz = [piv] + rest
        piv = nz[0]
        if piv[col] < 0:
            piv = [-a for a in piv]
        out.append(piv)
        work = [r for r in zero if any(r)]
        col += 1
    for i, r in enumerate(out):
        pc = next(c for c, a in enumerate(r) if a)
        for k in range(i):
            q = out[k][pc] // r[pc]
            if q:
                out[k] = [a - q * b for a, b in zip(out[k], r)]
    return [tuple(r) for r in out]


# ---------------------------------------------------------------------------
# polynomials

Monomial = tuple[int, ...]


class Polynomial:
    """Sparse multivariate polynomial with rational coefficients.

    ``variables`` fixes the order of the exponent tuples; zero coefficients are
    never stored.  Equality ignores variables that do not occur.
    """

    __slots__ = ("variables", "_terms", "_key")

    def __init__(self, variables: Sequence[str] = (), terms: Mapping[Monomial, Scalar] | None = None):
        self.variables = tuple(variables)
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("duplicate variable names")
        clean: dict[Monomial, Fraction] = {}
        for mono, c in (terms or {}).items():
            if len(mono) != len(self.variables):
                raise ValueError("exponent tuple length does not match variables")
            c = Fraction(c)
            if c != 0:
                mono = tuple(int(e) for e in mono)
                clean[mono] = clean.get(mono, Fraction(0)) + c
                if clean[mono] == 0:
                    del clean[mono]
        self._terms = clean
        self._key = None

    # construction -------------------------------------------------------
    @classmethod
    def constant(cls, c: Scalar, variables: Sequence[str] = ()) -> "Polynomial":
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def variable(cls, name: str) -> "Polynomial":
        return cls((name,), {(1,): 1})

    @classmethod
    def coerce(cls, x: "Polynomial | Scalar") -> "Polynomial":
        if isinstance(x, Polynomial):
            return x
        return cls.constant(x)

    # access --------------------------------------------------------------
    @property
    def terms(self) -> dict[Monomial, Fraction]:
        return dict(self._terms)

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        """Terms in graded lexicographic order, highest first."""
        return sorted(self._terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def free_variables(self) -> tuple[str, ...]:
        return tuple(
            v for i, v in enumerate(self.variables) if any(m[i] for m in self._terms)
        )

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not any(m) for m in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return next(iter(self._terms.values()), Fraction(0))

    def degree(self) -> int:
        """Total degree; the zero polynomial has degree -1."""
        return max((sum(m) for m in self._terms), default=-1)

    def degree_in(self, var: str) -> int:
        if var not in self.variables:
            return 0 if self._terms else -1
        i = self.variables.index(var)
        return max((m[i] for m in self._terms), default=-1)

    def coefficient_in(self, var: str, power: int) -> "Polynomial":
        """Coefficient of ``var**power`` as a polynomial in the other variables."""
        if var not in self.variables:
            return self if power == 0 else Polynomial(self.variables)
        i = self.variables.index(var)
        out = {}
        for m, c in self._terms.items():
            if m[i] == power:
                out[m[:i] + (0,) + m[i + 1:]] = c
        return Polynomial(self.variables, out)

    # arithmetic ------------------------------------------------------------
    def _lift(self, variables: tuple[str, ...]) -> dict[Monomial, Fraction]:
        idx = [variables.index(v) for v in self.variables]
        out = {}
        for m, c in self._terms.items():
            e = [0] * len(variables)
            for k, i in enumerate(idx):
                e[i] = m[k]
            out[tuple(e)] = c
        return out

    def _common(self, other: "Polynomial") -> tuple[str, ...]:
        return self.variables + tuple(v for v in other.variables if v not in self.variables)

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            if not isinstance(other, (int, Fraction)):
                return NotImplemented
            other = Polynomial.constant(other)
        vs = self._common(other)
        a = self._lift(vs)
        for m, c in other._lift(vs).items():
            a[m] = a.get(m, Fraction(0)) + c
        return Polynomial(vs, a)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.variables, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, (Polynomial, int, Fraction)):
            return NotImplemented
        return self + (-Polynomial.coerce(other))

    def __rsub__(self, other):
        return Polynomial.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Polynomial(self.variables, {m: c * other for m, c in self._terms.items()})
        if not isinstance(other, Polynomial):
            return NotImplemented
        vs = self._common(other)
        a, b = self._lift(vs), other._lift(vs)
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in a.items():
            for m2, c2 in b.items():
                m = tuple(x + y for x, y in zip(m1, m2))
                out[m] = out.get(m, Fraction(0)) + c1 * c2
        return Polynomial(vs, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = Polynomial.constant(1, self.variables)
        for _ in range(k):
            out = out * self
        return out

    # evaluation ------------------------------------------------------------
    def substitute(self, bindings: Mapping[str, "Scalar | Polynomial"]) -> "Polynomial":
        """Replace the bound variables; unbound variables stay symbolic."""
        keep = tuple(v for v in self.variables if v not in bindings)
        out = Polynomial(keep)
        for m, c in self._terms.items():
            term = Polynomial(keep, {tuple(e for v, e in zip(self.variables, m) if v not in bindings): c})
            for v, e in zip(self.variables, m):
                if e and v in bindings:
                    term = term * (Polynomial.coerce(bindings[v]) ** e)
            out = out + term
        return out

    def evaluate(self, assignment: Mapping[str, Scalar]) -> Fraction:
        missing = [v for v in self.free_variables() if v not in assignment]
        if missing:
            raise MissingVariable(f"no value for {', '.join(missing)}", missing=missing)
        total = Fraction(0)
        for m, c in self._terms.items():
            t = c
            for v, e in zip(self.variables, m):
                if e:
                    t *= Fraction(assignment[v]) ** e
            total += t
        return total

    # comparison / display ---------------------------------------------------
    def _canonical(self):
        if self._key is None:
            self._key = frozenset(
                (tuple((v, e) for v, e in zip(self.variables, m) if e), c)
                for m, c in self._terms.items()
            )
        return self._key

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._canonical() == other._canonical()

    def __hash__(self):
        return hash(self._canonical())

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            mono = "*".join(
                v if e == 1 else f"{v}^{e}" for v, e in zip(self.variables, m) if e
            )
            if not mono:
                parts.append(format_rational(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{format_rational(c)}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"Polynomial({self})"


def poly_eval(poly: Polynomial, assignment: Mapping[str, Scalar]) -> Fraction:
    return poly.evaluate(assignment)


def solve_affine(poly: Polynomial, var: str, bindings: Mapping[str, Scalar] | None = None) -> Fraction:
    """Root of ``poly`` in ``var`` after substituting ``bindings``.

    Raises :class:`NotAffine` when the substituted polynomial has degree > 1 in
    ``var`` and :class:`DegenerateCoefficient` when the coefficient of ``var``
    vanishes.  Variables other than ``var`` must all be bound.
    """
    p = poly.substitute(bindings or {})
    others = [v for v in p.free_variables() if v != var]
    if others:
        raise MissingVariable(f"unbound variables {others} besides {var}", missing=others)
    deg = p.degree_in(var)
    if deg > 1:
        raise NotAffine(f"degree {deg} in {var}", poly=str(p), var=var)
    lead = p.coefficient_in(var, 1)
    if lead.is_zero():
        raise DegenerateCoefficient(f"coefficient of {var} vanishes", poly=str(p), var=var)
    const = p.coefficient_in(var, 0)
    return -const.constant_value() / lead.constant_value()


def lcm_of_denominators(values: Iterable[Fraction]) -> int:
    out = 1
    for v in values:
        out = out * v.denominator // math.gcd(out, v.denominator)
    return out
