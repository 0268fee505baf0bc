"""Nilpotent Lie algebras given by rational structure constants.

The central object is :class:`LieAlgebra`.  Constructing one validates it:
antisymmetry holds by construction (only ``i < j`` brackets are accepted),
the Jacobi identity is checked on every basis triple and the lower central
series must reach zero.

Vectors, functionals, subspaces, morphisms, flags of ideals and central
lattices all keep a reference to their algebra; mixing algebras raises
:class:`AlgebraMismatch`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .errors import (
    AlgebraMismatch,
    DimensionMismatch,
    FlagMismatch,
    JacobiViolation,
    LatticeError,
    NotAnIdeal,
    NotBracketPreserving,
    NotNilpotent,
)
from .exactmath import RatMatrix, Scalar, as_fractions, nullspace, row_basis, solve

Coords = tuple[Fraction, ...]


class LieAlgebra:
    """A finite-dimensional nilpotent Lie algebra.

    ``brackets`` maps index pairs ``(i, j)`` with ``i < j`` to ``{k: c}``,
    meaning ``[e_i, e_j] = sum_k c * e_k``.  Unlisted pairs commute.
    """

    def __init__(
        self,
        dim: int,
        brackets: Mapping[tuple[int, int], Mapping[int, Scalar]] | None = None,
        basis: Sequence[str] | None = None,
        name: str | None = None,
    ):
        if dim < 0:
            raise ValueError("negative dimension")
        self.dim = dim
        self.name = name or f"algebra{dim}"
        self.basis = tuple(basis) if basis is not None else tuple(f"e{i + 1}" for i in range(dim))
        if len(self.basis) != dim:
            raise DimensionMismatch(f"{len(self.basis)} basis labels for dimension {dim}")
        sparse: dict[tuple[int, int], tuple[tuple[int, Fraction], ...]] = {}
        for (i, j), coeffs in (brackets or {}).items():
            if not (0 <= i < j < dim):
                raise ValueError(f"bracket index pair ({i}, {j}) must satisfy 0 <= i < j < {dim}")
            terms = []
            for k, c in coeffs.items():
                k = int(k)
                if not 0 <= k < dim:
                    raise ValueError(f"bracket target index {k} out of range")
                c = Fraction(c)
                if c != 0:
                    terms.append((k, c))
            if terms:
                terms.sort()
                sparse[(i, j)] = tuple(terms)
                sparse[(j, i)] = tuple((k, -c) for k, c in terms)
        self._sparse = sparse
        self._key = (dim, frozenset((ij, t) for ij, t in sparse.items() if ij[0] < ij[1]))
        self._check_jacobi()
        self.lcs = self._lower_central_series()
        self.nilpotency_class = len(self.lcs) - 1

    # structure -------------------------------------------------------------
    @property
    def brackets(self) -> dict[tuple[int, int], dict[int, Fraction]]:
        return {ij: dict(t) for ij, t in sorted(self._sparse.items()) if ij[0] < ij[1]}

    def structure_constant(self, i: int, j: int, k: int) -> Fraction:
        return dict(self._sparse.get((i, j), ())).get(k, Fraction(0))

    def bracket_coords(self, x: Sequence[Fraction], y: Sequence[Fraction]) -> Coords:
        out = [Fraction(0)] * self.dim
        for (i, j), terms in self._sparse.items():
            xi = x[i]
            if not xi:
                continue
            yj = y[j]
            if not yj:
                continue
            s = xi * yj
            for k, c in terms:
                out[k] += s * c
        return tuple(out)

    def basis_coords(self, i: int) -> Coords:
        return tuple(Fraction(int(k == i)) for k in range(self.dim))

    def ad_matrix(self, x: Sequence[Fraction]) -> RatMatrix:
        """Matrix of ``ad x``; column ``j`` holds ``[x, e_j]``."""
        cols = [self.bracket_coords(x, self.basis_coords(j)) for j in range(self.dim)]
        return RatMatrix.from_columns(cols, self.dim)

    def is_abelian(self) -> bool:
        return not self._sparse

    # validation --------------------------------------------------------------
    def _check_jacobi(self):
        e = [self.basis_coords(i) for i in range(self.dim)]
        br = self.bracket_coords
        for i, j, k in combinations(range(self.dim), 3):
            a = br(br(e[i], e[j]), e[k])
            b = br(br(e[j], e[k]), e[i])
            c = br(br(e[k], e[i]), e[j])
            defect = tuple(p + q + r for p, q, r in zip(a, b, c))
            if any(defect):
                raise JacobiViolation(
                    f"Jacobi identity fails on (e{i + 1}, e{j + 1}, e{k + 1})",
                    triple=[i, j, k],
                    defect=[str(d) for d in defect],
                )

    def _lower_central_series(self) -> list["Subspace"]:
        whole = Subspace.whole(self)
        series = [whole]
        current = whole
        while current.dim > 0:
            nxt = bracket_span(whole, current)
            if nxt.dim == current.dim:
                raise NotNilpotent(
                    "lower central series stabilizes at a nonzero ideal",
                    stable_basis=[[str(c) for c in row] for row in nxt.basis],
                )
            series.append(nxt)
            current = nxt
        return series

    # equality -------------------------------------------------------------------
    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, LieAlgebra):
            return NotImplemented
        return self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"LieAlgebra({self.name!r}, dim={self.dim}, class={self.nilpotency_class})"

    # convenience -----------------------------------------------------------------
    def vector(self, coords: Iterable[Scalar | str]) -> "Vector":
        return Vector(self, as_fractions(coords))

    def functional(self, coords: Iterable[Scalar | str]) -> "Functional":
        return Functional(self, as_fractions(coords))

    def e(self, i: int) -> "Vector":
        return Vector(self, self.basis_coords(i))

    def zero(self) -> "Vector":
        return Vector(self, (Fraction(0),) * self.dim)


def validate_algebra(
    brackets: Mapping[tuple[int, int], Mapping[int, Scalar]],
    dim: int | None = None,
    basis: Sequence[str] | None = None,
    name: str | None = None,
) -> LieAlgebra:
    """Build and validate an algebra from raw structure constants.

    ``dim`` defaults to one more than the largest index mentioned.
    """
    if dim is None:
        idx = [i for ij in brackets for i in ij] + [int(k) for c in brackets.values() for k in c]
        dim = len(basis) if basis is not None else (max(idx) + 1 if idx else 0)
    return LieAlgebra(dim, brackets, basis=basis, name=name)


def same_algebra(*algebras: LieAlgebra) -> LieAlgebra:
    first = algebras[0]
    for a in algebras[1:]:
        if a is not first and a != first:
            raise AlgebraMismatch(f"{first.name} vs {a.name}")
    return first


# ---------------------------------------------------------------------------
# vectors and functionals


@dataclass(frozen=True)
class Vector:
    algebra: LieAlgebra = field(repr=False)
    coords: Coords

    def __post_init__(self):
        if len(self.coords) != self.algebra.dim:
            raise DimensionMismatch(
                f"{len(self.coords)} coordinates for a {self.algebra.dim}-dimensional algebra"
            )

    def __add__(self, other: "Vector") -> "Vector":
        same_algebra(self.algebra, other.algebra)
        return Vector(self.algebra, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Vector") -> "Vector":
        same_algebra(self.algebra, other.algebra)
        return Vector(self.algebra, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "Vector":
        return Vector(self.algebra, tuple(-a for a in self.coords))

    def __mul__(self, c: Scalar) -> "Vector":
        c = Fraction(c)
        return Vector(self.algebra, tuple(c * a for a in self.coords))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.coords)


@dataclass(frozen=True)
class Functional:
    """A point of the dual space, stored by its values on the basis."""

    algebra: LieAlgebra = field(repr=False)
    coords: Coords

    def __post_init__(self):
        if len(self.coords) != self.algebra.dim:
            raise DimensionMismatch(
                f"{len(self.coords)} dual coordinates for a {self.algebra.dim}-dimensional algebra"
            )

    def __call__(self, v: Vector | Sequence[Fraction]) -> Fraction:
        if isinstance(v, Vector):
            same_algebra(self.algebra, v.algebra)
            v = v.coords
        return sum((a * b for a, b in zip(self.coords, v) if a and b), Fraction(0))

    def __add__(self, other: "Functional") -> "Functional":
        same_algebra(self.algebra, other.algebra)
        return Functional(self.algebra, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Functional") -> "Functional":
        same_algebra(self.algebra, other.algebra)
        return Functional(self.algebra, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __mul__(self, c: Scalar) -> "Functional":
        c = Fraction(c)
        return Functional(self.algebra, tuple(c * a for a in self.coords))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.coords)


def bracket(x: Vector, y: Vector) -> Vector:
    alg = same_algebra(x.algebra, y.algebra)
    return Vector(alg, alg.bracket_coords(x.coords, y.coords))


# ---------------------------------------------------------------------------
# subspaces


@dataclass(frozen=True)
class Subspace:
    """Subspace with its canonical basis (nonzero rows of the RREF)."""

    algebra: LieAlgebra = field(repr=False, compare=True)
    basis: tuple[Coords, ...]

    @classmethod
    def span(cls, algebra: LieAlgebra, vectors: Iterable[Vector | Sequence[Scalar]]) -> "Subspace":
        rows = []
        for v in vectors:
            if isinstance(v, Vector):
                same_algebra(algebra, v.algebra)
                v = v.coords
            if len(v) != algebra.dim:
                raise DimensionMismatch("vector length does not match algebra dimension")
            rows.append(v)
        return cls(algebra, row_basis(rows, algebra.dim))

    @classmethod
    def whole(cls, algebra: LieAlgebra) -> "Subspace":
        return cls(algebra, tuple(algebra.basis_coords(i) for i in range(algebra.dim)))

    @classmethod
    def zero(cls, algebra: LieAlgebra) -> "Subspace":
        return cls(algebra, ())

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(i for i, a in enumerate(r) if a) for r in self.basis)

    @property
    def vectors(self) -> tuple[Vector, ...]:
        return tuple(Vector(self.algebra, r) for r in self.basis)

    def coordinates(self, v: Vector | Sequence[Fraction]) -> Coords | None:
        """Coordinates of ``v`` in the canonical basis, ``None`` if ``v`` is outside."""
        if isinstance(v, Vector):
            same_algebra(self.algebra, v.algebra)
            v = v.coords
        coeffs = tuple(v[p] for p in self.pivots)
        recon = [Fraction(0)] * self.algebra.dim
        for c, row in zip(coeffs, self.basis):
            if c:
                for i, a in enumerate(row):
                    if a:
                        recon[i] += c * a
        if tuple(recon) != tuple(v):
            return None
        return coeffs

    def contains(self, v: Vector | Sequence[Fraction]) -> bool:
        return self.coordinates(v) is not None

    def __contains__(self, v) -> bool:
        return self.contains(v)

    def issubspace(self, other: "Subspace") -> bool:
        same_algebra(self.algebra, other.algebra)
        return all(other.contains(r) for r in self.basis)

    def __le__(self, other: "Subspace") -> bool:
        return self.issubspace(other)

    def __add__(self, other: "Subspace") -> "Subspace":
        alg = same_algebra(self.algebra, other.algebra)
        return Subspace(alg, row_basis(self.basis + other.basis, alg.dim))

    def intersection(self, other: "Subspace") -> "Subspace":
        alg = same_algebra(self.algebra, other.algebra)
        if not self.basis or not other.basis:
            return Subspace.zero(alg)
        cols = list(self.basis) + list(other.basis)
        m = RatMatrix.from_columns(cols, alg.dim)
        vecs = []
        for sol in nullspace(m):
            a = sol[: self.dim]
            vecs.append(tuple(
                sum((c * row[i] for c, row in zip(a, self.basis)), Fraction(0))
                for i in range(alg.dim)
            ))
        return Subspace.span(alg, vecs)

    @cached_property
    def is_subalgebra(self) -> bool:
        br = self.algebra.bracket_coords
        return all(
            self.contains(br(x, y)) for x, y in combinations(self.basis, 2)
        )

    @cached_property
    def is_ideal(self) -> bool:
        br = self.algebra.bracket_coords
        return all(
            self.contains(br(self.algebra.basis_coords(i), x))
            for x in self.basis
            for i in range(self.algebra.dim)
        )


def bracket_span(a: Subspace, b: Subspace) -> Subspace:
    """Span of all ``[x, y]`` with ``x`` in ``a`` and ``y`` in ``b``."""
    alg = same_algebra(a.algebra, b.algebra)
    vecs = [alg.bracket_coords(x, y) for x in a.basis for y in b.basis]
    return Subspace(alg, row_basis(vecs, alg.dim))


def lower_central_series(algebra: LieAlgebra) -> list[Subspace]:
    """``g, [g,g], [g,[g,g]], ..., {0}``."""
    return list(algebra.lcs)


def center(algebra: LieAlgebra) -> Subspace:
    n = algebra.dim
    # x is central iff sum_i x_i c_{ij}^k = 0 for every j, k
    rows = []
    for j in range(n):
        for k in range(n):
            rows.append(tuple(algebra.structure_constant(i, j, k) for i in range(n)))
    if not rows:
        return Subspace.whole(algebra)
    return Subspace.span(algebra, nullspace(RatMatrix(tuple(rows), n)))


# ---------------------------------------------------------------------------
# morphisms


@dataclass(frozen=True)
class Morphism:
    """Lie algebra homomorphism given by a ``target.dim x source.dim`` matrix."""

    source: LieAlgebra = field(repr=False)
    target: LieAlgebra = field(repr=False)
    matrix: RatMatrix

    def __post_init__(self):
        if self.matrix.shape != (self.target.dim, self.source.dim):
            raise DimensionMismatch(
                f"matrix shape {self.matrix.shape} does not match "
                f"{self.target.dim}x{self.source.dim}"
            )
        s, t, m = self.source, self.target, self.matrix
        for i, j in combinations(range(s.dim), 2):
            lhs = m.apply(s.bracket_coords(s.basis_coords(i), s.basis_coords(j)))
            rhs = t.bracket_coords(m.column(i), m.column(j))
            if lhs != rhs:
                raise NotBracketPreserving(
                    f"M[e{i + 1}, e{j + 1}] != [M e{i + 1}, M e{j + 1}]", pair=[i, j]
                )

    @classmethod
    def identity(cls, algebra: LieAlgebra) -> "Morphism":
        return cls(algebra, algebra, RatMatrix.identity(algebra.dim))

    def __call__(self, v: Vector) -> Vector:
        same_algebra(self.source, v.algebra)
        return Vector(self.target, self.matrix.apply(v.coords))

    def compose(self, inner: "Morphism") -> "Morphism":
        """``self ∘ inner``."""
        same_algebra(inner.target, self.source)
        return Morphism(inner.source, self.target, self.matrix @ inner.matrix)

    @property
    def rank(self) -> int:
        return self.matrix.rank

    @property
    def is_surjective(self) -> bool:
        return self.rank == self.target.dim

    def image(self) -> Subspace:
        return Subspace.span(
            self.target, [self.matrix.column(j) for j in range(self.source.dim)]
        )


def morphism_kernel(m: Morphism) -> Subspace:
    if m.target.dim == 0:
        return Subspace.whole(m.source)
    return Subspace.span(m.source, nullspace(m.matrix))


def preimage(m: Morphism, s: Subspace) -> Subspace:
    """``{x : m(x) in s}``."""
    same_algebra(m.target, s.algebra)
    if s.dim == 0:
        return morphism_kernel(m)
    # annihilator of s, then the kernel of (annihilator o m)
    ann = nullspace(RatMatrix(s.basis, m.target.dim))
    if not ann:
        return Subspace.whole(m.source)
    cond = RatMatrix(tuple(ann), m.target.dim) @ m.matrix
    return Subspace.span(m.source, nullspace(cond))


def restrict_functional(xi: Functional, s: Subspace) -> Coords:
    """Values of ``xi`` on the canonical basis of ``s``."""
    same_algebra(xi.algebra, s.algebra)
    return tuple(xi(r) for r in s.basis)


def quotient_by_ideal(algebra: LieAlgebra, ideal: Subspace) -> tuple[LieAlgebra, Morphism]:
    """Quotient algebra on the non-pivot basis directions, plus the projection."""
    same_algebra(algebra, ideal.algebra)
    if not ideal.is_ideal:
        raise NotAnIdeal("subspace is not an ideal", basis=[[str(a) for a in r] for r in ideal.basis])
    piv = ideal.pivots
    keep = [i for i in range(algebra.dim) if i not in piv]

    def project(x: Sequence[Fraction]) -> Coords:
        x = list(x)
        for p, row in zip(piv, ideal.basis):
            c = x[p]
            if c:
                x = [a - c * b for a, b in zip(x, row)]
        return tuple(x[i] for i in keep)

    brackets = {}
    for a, b in combinations(range(len(keep)), 2):
        img = project(algebra.bracket_coords(algebra.basis_coords(keep[a]), algebra.basis_coords(keep[b])))
        coeffs = {k: c for k, c in enumerate(img) if c}
        if coeffs:
            brackets[(a, b)] = coeffs
    quotient = LieAlgebra(
        len(keep),
        brackets,
        basis=[algebra.basis[i] for i in keep],
        name=f"{algebra.name}/ideal{ideal.dim}",
    )
    cols = [project(algebra.basis_coords(j)) for j in range(algebra.dim)]
    return quotient, Morphism(algebra, quotient, RatMatrix.from_columns(cols, len(keep)))


def direct_sum(
    algebras: Sequence[LieAlgebra], name: str | None = None, tags: Sequence[object] | None = None
) -> LieAlgebra:
    """Block-diagonal direct sum; factor ``b`` occupies a contiguous block.

    Basis labels get a ``[tag]`` suffix, the factor position unless ``tags`` is given.
    """
    tags = range(len(algebras)) if tags is None else tags
    brackets = {}
    basis = []
    offset = 0
    for idx, a in zip(tags, algebras):
        for (i, j), coeffs in a.brackets.items():
            brackets[(i + offset, j + offset)] = {k + offset: c for k, c in coeffs.items()}
        basis.extend(f"{lbl}[{idx}]" for lbl in a.basis)
        offset += a.dim
    return LieAlgebra(offset, brackets, basis=basis, name=name or "+".join(a.name for a in algebras))


# ---------------------------------------------------------------------------
# flags


@dataclass(frozen=True)
class Flag:
    """Chain of ideals ``g_1 < g_2 < ... < g_n = g`` with ``dim g_i = i``.

    ``vectors[i]`` is the direction added at layer ``i`` (0-based), so
    ``layers[i] = span(vectors[:i + 1])``.
    """

    algebra: LieAlgebra = field(repr=False)
    vectors: tuple[Coords, ...]

    def __post_init__(self):
        alg = self.algebra
        if len(self.vectors) != alg.dim:
            raise FlagMismatch(f"flag has {len(self.vectors)} directions, algebra has dimension {alg.dim}")
        for i, layer in enumerate(self.layers):
            if layer.dim != i + 1:
                raise FlagMismatch(f"flag directions are dependent at layer {i}", layer=i)
            if not layer.is_ideal:
                raise FlagMismatch(f"flag layer {i} is not an ideal", layer=i)

    @cached_property
    def layers(self) -> tuple[Subspace, ...]:
        return tuple(
            Subspace.span(self.algebra, self.vectors[: i + 1]) for i in range(len(self.vectors))
        )

    def layer(self, i: int) -> Subspace:
        """Layer ``i`` (0-based); ``layer(-1)`` is the zero subspace."""
        if i < 0:
            return Subspace.zero(self.algebra)
        return self.layers[i]


@lru_cache(maxsize=256)
def jordan_holder_flag(algebra: LieAlgebra) -> Flag:
    """Flag of ideals refining the lower central series.

    Built bottom-up.  Inside each step ``C_{k+1} < C_k`` of the series, the
    next direction is the highest-index basis vector lying in ``C_k`` but not
    yet in the span; if ``C_k`` is not spanned by basis vectors, canonical
    rows of ``C_k`` are used (last row first).  Any direction between two
    consecutive terms of the series gives an ideal.  Memoized per algebra.
    """
    series = algebra.lcs
    current = Subspace.zero(algebra)
    chosen: list[Coords] = []
    for target in reversed(series[:-1]):
        while current.dim < target.dim:
            candidates = [
                algebra.basis_coords(i) for i in reversed(range(algebra.dim))
            ] + list(reversed(target.basis))
            for v in candidates:
                if target.contains(v) and not current.contains(v):
                    nxt = current + Subspace.span(algebra, [v])
                    if nxt.is_ideal:
                        chosen.append(v)
                        current = nxt
                        break
            else:  # pragma: no cover - impossible for a nilpotent algebra
                raise FlagMismatch("could not extend flag")
    return Flag(algebra, tuple(chosen))


# ---------------------------------------------------------------------------
# lattices


@dataclass(frozen=True)
class Lattice:
    """Z-span of linearly independent central vectors."""

    algebra: LieAlgebra = field(repr=False)
    generators: tuple[Coords, ...]

    def __post_init__(self):
        alg = self.algebra
        for g in self.generators:
            if len(g) != alg.dim:
                raise DimensionMismatch("lattice generator length does not match algebra dimension")
        if Subspace.span(alg, self.generators).dim != len(self.generators):
            raise LatticeError("lattice generators are linearly dependent")
        z = center(alg)
        for idx, g in enumerate(self.generators):
            if not z.contains(g):
                raise LatticeError(f"lattice generator {idx} is not central", generator=idx)

    @classmethod
    def of(cls, algebra: LieAlgebra, generators: Iterable[Iterable[Scalar | str]]) -> "Lattice":
        return cls(algebra, tuple(as_fractions(g) for g in generators))

    @property
    def rank(self) -> int:
        return len(self.generators)

    def span(self) -> Subspace:
        return Subspace.span(self.algebra, self.generators)

    def coordinates(self, v: Vector | Sequence[Fraction]) -> Coords | None:
        """Real coordinates of ``v`` on the generators, or ``None`` outside their span."""
        if isinstance(v, Vector):
            same_algebra(self.algebra, v.algebra)
            v = v.coords
        if not self.generators:
            return () if not any(v) else None
        m = RatMatrix.from_columns(self.generators, self.algebra.dim)
        return solve(m, v)

    def contains(self, v: Vector | Sequence[Fraction]) -> bool:
        c = self.coordinates(v)
        return c is not None and all(a.denominator == 1 for a in c)

    def contains_lattice(self, other: "Lattice") -> bool:
        same_algebra(self.algebra, other.algebra)
        return all(self.contains(g) for g in other.generators)

    def same_lattice(self, other: "Lattice") -> bool:
        return self.contains_lattice(other) and other.contains_lattice(self)

    def scaled(self, factor: Scalar) -> "Lattice":
        f = Fraction(factor)
        return Lattice(self.algebra, tuple(tuple(f * a for a in g) for g in self.generators))
