"""Group law in exponential coordinates, adjoint and coadjoint actions.

The simply connected group of a nilpotent algebra is the algebra itself with
the Baker-Campbell-Hausdorff product; the exponential map is the identity.
The product is evaluated with Dynkin's series, cut at the nilpotency class
(every longer commutator vanishes, so nothing is approximated).
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Sequence

from .errors import AlgebraMismatch, ClassTooHigh
from .exactmath import Polynomial, RatMatrix, Scalar
from .liealg import Functional, Lattice, LieAlgebra, Vector, same_algebra

MAX_DYNKIN_DEGREE = 6


@lru_cache(maxsize=None)
def dynkin_coefficients(max_degree: int = MAX_DYNKIN_DEGREE) -> dict[tuple[int, ...], Fraction]:
    """Coefficients ``c_w`` with ``log(e^X e^Y) = sum_w c_w [w]`` up to ``max_degree``.

    A word ``w`` is a tuple of letters (0 for X, 1 for Y) and ``[w]`` is the
    right-nested commutator ``[w_1, [w_2, ... [w_{m-1}, w_m]]]``.  Words whose
    commutator vanishes identically (ending in a repeated letter) are dropped.
    """
    coeffs: dict[tuple[int, ...], Fraction] = defaultdict(Fraction)

    def extend(pairs: list[tuple[int, int]], total: int):
        if pairs:
            k = len(pairs)
            word: list[int] = []
            denom = 1
            for r, s in pairs:
                word += [0] * r + [1] * s
                denom *= factorial(r) * factorial(s)
            coeffs[tuple(word)] += Fraction((-1) ** (k - 1), k * len(word) * denom)
        for m in range(1, max_degree - total + 1):
            for r in range(m + 1):
                pairs.append((r, m - r))
                extend(pairs, total + m)
                pairs.pop()

    extend([], 0)
    return {
        w: c
        for w, c in sorted(coeffs.items(), key=lambda t: (len(t[0]), t[0]))
        if c != 0 and (len(w) == 1 or w[-1] != w[-2])
    }


@dataclass(frozen=True)
class GroupElement:
    """Element of the simply connected group, stored by its logarithm."""

    log: Vector

    @property
    def algebra(self) -> LieAlgebra:
        return self.log.algebra

    @property
    def coords(self):
        return self.log.coords

    @classmethod
    def identity(cls, algebra: LieAlgebra) -> "GroupElement":
        return cls(algebra.zero())

    @classmethod
    def exp(cls, v: Vector) -> "GroupElement":
        return cls(v)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return bch_multiply(self, other)

    def inverse(self) -> "GroupElement":
        return GroupElement(-self.log)

    def is_identity(self) -> bool:
        return self.log.is_zero()


def _as_element(g: GroupElement | Vector) -> GroupElement:
    return g if isinstance(g, GroupElement) else GroupElement(g)


def bch_coords(algebra: LieAlgebra, x: Sequence[Fraction], y: Sequence[Fraction]) -> tuple[Fraction, ...]:
    depth = algebra.nilpotency_class
    if depth > MAX_DYNKIN_DEGREE:
        raise ClassTooHigh(
            f"nilpotency class {depth} exceeds the Dynkin degree bound {MAX_DYNKIN_DEGREE}",
            nilpotency_class=depth,
        )
    n = algebra.dim
    out = [a + b for a, b in zip(x, y)]
    if depth < 2:
        return tuple(out)
    letters = (tuple(x), tuple(y))
    memo: dict[tuple[int, ...], tuple[Fraction, ...]] = {(0,): letters[0], (1,): letters[1]}
    br = algebra.bracket_coords

    def nested(word: tuple[int, ...]) -> tuple[Fraction, ...]:
        v = memo.get(word)
        if v is None:
            v = br(letters[word[0]], nested(word[1:]))
            memo[word] = v
        return v

    for word, c in dynkin_coefficients().items():
        if len(word) < 2 or len(word) > depth:
            continue
        v = nested(word)
        for k in range(n):
            if v[k]:
                out[k] += c * v[k]
    return tuple(out)


def bch_multiply(x: GroupElement | Vector, y: GroupElement | Vector) -> GroupElement:
    x, y = _as_element(x), _as_element(y)
    alg = same_algebra(x.algebra, y.algebra)
    return GroupElement(Vector(alg, bch_coords(alg, x.coords, y.coords)))


def _exp_nilpotent(a: RatMatrix, t: Scalar = 1) -> RatMatrix:
    """``sum_k (t a)^k / k!`` for nilpotent ``a``."""
    n = a.nrows
    result = RatMatrix.identity(n)
    power = RatMatrix.identity(n)
    t = Fraction(t)
    for k in range(1, n + 1):
        power = (power @ a).scale(t / k)
        if power.is_zero():
            break
        result = result + power
    return result


def adjoint_matrix(g: GroupElement | Vector) -> RatMatrix:
    """``Ad(exp v) = exp(ad v)``; column ``j`` is the image of ``e_j``."""
    g = _as_element(g)
    return _exp_nilpotent(g.algebra.ad_matrix(g.coords))


def coadjoint_matrix(g: GroupElement | Vector) -> RatMatrix:
    """Matrix acting on dual coordinates: ``Ad(g^{-1})`` transposed."""
    g = _as_element(g)
    return adjoint_matrix(g.inverse()).transpose()


def coadjoint_apply(g: GroupElement | Vector, xi: Functional) -> Functional:
    """``xi o Ad(g^{-1})``."""
    g = _as_element(g)
    alg = same_algebra(g.algebra, xi.algebra)
    return Functional(alg, coadjoint_matrix(g).apply(xi.coords))


def coadjoint_symbolic(
    algebra: LieAlgebra,
    direction: int | Vector,
    xi: Functional | Sequence[Polynomial | Scalar],
    param: str = "t",
) -> tuple[Polynomial, ...]:
    """Dual coordinates of ``Ad*(exp(param * direction)) xi`` as polynomials.

    ``xi`` may itself be a vector of polynomials, so flows can be chained.
    The degree in ``param`` is at most the nilpotency class.
    """
    if isinstance(direction, Vector):
        same_algebra(algebra, direction.algebra)
        y = direction.coords
    else:
        y = algebra.basis_coords(direction)
    if isinstance(xi, Functional):
        same_algebra(algebra, xi.algebra)
        entries = [Polynomial.constant(c) for c in xi.coords]
    else:
        entries = [Polynomial.coerce(c) for c in xi]
        if len(entries) != algebra.dim:
            raise AlgebraMismatch("polynomial vector length does not match algebra dimension")
    adt = algebra.ad_matrix(y).transpose()
    t = Polynomial.variable(param)
    out = list(entries)
    term = list(entries)
    k = 0
    while True:
        k += 1
        # term_k = (-t)^k/k! (ad y)^T^k xi
        term = [
            sum((adt[i, j] * term[j] for j in range(algebra.dim) if adt[i, j]), Polynomial())
            for i in range(algebra.dim)
        ]
        if all(p.is_zero() for p in term):
            break
        scale = Fraction((-1) ** k, factorial(k))
        tk = t ** k
        out = [o + p * tk * scale for o, p in zip(out, term)]
    return tuple(out)


@dataclass(frozen=True)
class QuotientElement:
    """Coset ``g * Gamma`` of a central lattice; never reduced to a fundamental domain."""

    element: GroupElement
    lattice: Lattice

    def __post_init__(self):
        same_algebra(self.element.algebra, self.lattice.algebra)

    def __mul__(self, other: "QuotientElement") -> "QuotientElement":
        if not self.lattice.same_lattice(other.lattice):
            raise AlgebraMismatch("cosets of different lattices")
        return QuotientElement(self.element * other.element, self.lattice)

    def __eq__(self, other):
        if not isinstance(other, QuotientElement):
            return NotImplemented
        if not self.lattice.same_lattice(other.lattice):
            return False
        diff = self.element * other.element.inverse()
        return self.lattice.contains(diff.log)

    __hash__ = None  # cosets have no cheap canonical form
