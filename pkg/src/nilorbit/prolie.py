"""Finite-level presentations of two kinds of pro-Lie groups.

* :class:`QuotientTower`: a fixed nilpotent algebra with a chain of central
  lattices ``Gamma_1 >= Gamma_2 >= ...``; level ``k`` is the group
  ``G~ / Gamma_k``.  Bonding maps go ``G~/Gamma_{k+1} -> G~/Gamma_k`` and are
  the identity on the algebra.
* :class:`ProductFamily`: factors ``G_j`` indexed by a finite list or by a
  rule; level ``F`` (a finite index set) is ``prod_{j in F} G_j`` and bonding
  maps are block projections.

A dual element is always presented at some finite level.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .errors import (
    BadIndex,
    InconsistentLevels,
    InfiniteSupport,
    LatticeError,
    LevelOutOfRange,
    SanityFailure,
)
from .exactmath import RatMatrix, Scalar, as_fractions, format_rational
from .kirillov import (
    InducedRepDescriptor,
    induce_descriptor,
    is_integral,
    orbit_integral,
    pullback_functional,
    vergne_polarization,
)
from .liealg import Flag, Functional, Lattice, LieAlgebra, Morphism, direct_sum
from .orbits import OrbitDescriptor, orbit_contains, orbit_descriptor, orbit_sample

# ---------------------------------------------------------------------------
# quotient towers


class QuotientTower:
    """Lattice chain over one algebra, given explicitly or by a geometric rule.

    Geometric rule: ``Gamma_k = ratio**(k-1) * base`` with an integer ratio of
    at least 2, which makes the intersection of the chain trivial.
    """

    def __init__(
        self,
        algebra: LieAlgebra,
        *,
        lattices: Sequence[Lattice] | None = None,
        base: Lattice | None = None,
        ratio: int | None = None,
        max_level: int | None = None,
    ):
        self.algebra = algebra
        self._lock = threading.Lock()
        self._levels: dict[int, Lattice] = {}
        if lattices is not None:
            if base is not None or ratio is not None:
                raise ValueError("give either an explicit chain or a geometric rule")
            if not lattices:
                raise LatticeError("explicit chain is empty")
            self.kind = "explicit"
            self.max_level = len(lattices) if max_level is None else max_level
            if self.max_level > len(lattices) or self.max_level < 1:
                raise LevelOutOfRange(f"max_level {self.max_level} outside 1..{len(lattices)}")
            for k, lat in enumerate(lattices[: self.max_level], start=1):
                if lat.algebra != algebra:
                    raise LatticeError("lattice belongs to a different algebra", level=k)
                self._levels[k] = lat
            self.base, self.ratio = self._levels[1], None
        else:
            if base is None or ratio is None:
                raise ValueError("geometric rule needs base and ratio")
            if int(ratio) != ratio or ratio < 2:
                raise LatticeError(f"ratio must be an integer >= 2, got {ratio}")
            if base.algebra != algebra:
                raise LatticeError("base lattice belongs to a different algebra")
            self.kind = "geometric"
            self.base, self.ratio = base, int(ratio)
            self.max_level = 1 if max_level is None else max_level
            if self.max_level < 1:
                raise LevelOutOfRange("max_level must be at least 1")
        self.chain_report = self.check_chain()

    def with_max_level(self, k: int) -> "QuotientTower":
        if self.kind == "explicit":
            return QuotientTower(self.algebra, lattices=[self._levels[i] for i in sorted(self._levels)], max_level=k)
        return QuotientTower(self.algebra, base=self.base, ratio=self.ratio, max_level=k)

    def lattice(self, k: int) -> Lattice:
        if not 1 <= k <= self.max_level:
            raise LevelOutOfRange(f"level {k} outside 1..{self.max_level}", level=k)
        with self._lock:
            lat = self._levels.get(k)
            if lat is None:
                lat = self.base.scaled(self.ratio ** (k - 1))
                self._levels[k] = lat
        return lat

    def check_chain(self) -> list[bool]:
        """``Gamma_{k+1} <= Gamma_k`` for every materialized pair; raises on failure."""
        out = []
        for k in range(1, self.max_level):
            ok = self.lattice(k).contains_lattice(self.lattice(k + 1))
            if not ok:
                raise LatticeError(f"Gamma_{k + 1} is not contained in Gamma_{k}", level=k + 1)
            out.append(ok)
        return out

    def bonding(self, fine: int, coarse: int) -> Morphism:
        """Algebra map of ``G~/Gamma_fine -> G~/Gamma_coarse`` (``coarse <= fine``)."""
        if coarse > fine:
            raise LevelOutOfRange("bonding maps go from finer to coarser levels")
        self.lattice(fine), self.lattice(coarse)
        return Morphism.identity(self.algebra)


def tower_level(t: QuotientTower, k: int) -> tuple[LieAlgebra, Lattice]:
    return t.algebra, t.lattice(k)


def integrality_level(t: QuotientTower, xi: Functional, max_k: int | None = None) -> int | None:
    """Smallest level ``k <= max_k`` at which ``xi`` is integral, else ``None``."""
    max_k = t.max_level if max_k is None else max_k
    for k in range(1, max_k + 1):
        if is_integral(xi, t.lattice(k)):
            return k
    return None


def integrality_profile(t: QuotientTower, xi: Functional, max_k: int | None = None) -> list[bool]:
    max_k = t.max_level if max_k is None else max_k
    return [is_integral(xi, t.lattice(k)) for k in range(1, max_k + 1)]


def check_monotone(t: QuotientTower, xi: Functional, max_k: int | None = None) -> bool:
    """Once integral at some level, integral at every later materialized level."""
    prof = integrality_profile(t, xi, max_k)
    first = next((i for i, v in enumerate(prof) if v), len(prof))
    return all(prof[first:]) and not any(prof[:first])


# ---------------------------------------------------------------------------
# product families


class ProductFamily:
    """Factors indexed by ``0..size-1`` (``size=None`` for a countable rule)."""

    def __init__(
        self,
        factors: Sequence[LieAlgebra] | None = None,
        rule: Callable[[int], LieAlgebra] | None = None,
        size: int | None = None,
        name: str = "product",
    ):
        if (factors is None) == (rule is None):
            raise ValueError("give either a list of factors or a rule")
        self.name = name
        self._lock = threading.Lock()
        self._memo: dict[int, LieAlgebra] = {}
        if factors is not None:
            self._memo = dict(enumerate(factors))
            self.size = len(factors)
            self._rule = None
        else:
            self.size = size
            self._rule = rule

    @classmethod
    def repeat(cls, factor: LieAlgebra, size: int | None = None, name: str | None = None) -> "ProductFamily":
        return cls(rule=lambda j: factor, size=size, name=name or f"{factor.name}^N")

    def factor(self, j: int) -> LieAlgebra:
        if not isinstance(j, int) or j < 0 or (self.size is not None and j >= self.size):
            raise BadIndex(f"index {j!r} is not in the family", index=j)
        with self._lock:
            alg = self._memo.get(j)
            if alg is None:
                alg = self._rule(j)
                self._memo[j] = alg
        return alg


@dataclass(frozen=True)
class ProductLevel:
    """``g_F`` for a finite index set ``F`` with its block layout."""

    family: ProductFamily = field(repr=False, compare=False)
    indices: tuple[int, ...]
    algebra: LieAlgebra = field(repr=False)
    offsets: tuple[int, ...]

    def block(self, j: int) -> slice:
        pos = self.indices.index(j)
        start = self.offsets[pos]
        return slice(start, start + self.family.factor(j).dim)

    def bonding_to(self, coarse: "ProductLevel") -> Morphism:
        """Block projection ``g_F2 -> g_F1`` for ``F1 <= F2``."""
        if not set(coarse.indices) <= set(self.indices):
            raise BadIndex("coarse support is not contained in fine support")
        rows = []
        for j in coarse.indices:
            blk = self.block(j)
            for r in range(blk.stop - blk.start):
                row = [0] * self.algebra.dim
                row[blk.start + r] = 1
                rows.append(row)
        return Morphism(self.algebra, coarse.algebra, RatMatrix.from_rows(rows, self.algebra.dim))

    def functional(self, blocks: Mapping[int, Functional | Sequence[Scalar | str]]) -> Functional:
        coords = [Fraction(0)] * self.algebra.dim
        for j, val in blocks.items():
            blk = self.block(j)
            vals = val.coords if isinstance(val, Functional) else as_fractions(val)
            if len(vals) != blk.stop - blk.start:
                raise BadIndex(f"block {j} has the wrong length")
            coords[blk] = vals
        return Functional(self.algebra, tuple(coords))


def product_projection(f: ProductFamily, support: Iterable[int]) -> ProductLevel:
    indices = tuple(sorted(set(support)))
    algs = [f.factor(j) for j in indices]
    offsets, pos = [], 0
    for a in algs:
        offsets.append(pos)
        pos += a.dim
    name = "x".join(f"{a.name}[{j}]" for j, a in zip(indices, algs)) or "trivial"
    return ProductLevel(f, indices, direct_sum(algs, name=name, tags=indices), tuple(offsets))


@dataclass(frozen=True)
class ProductDual:
    """Finitely supported dual element; no block in ``blocks`` is zero."""

    support: tuple[int, ...]
    blocks: tuple[tuple[Fraction, ...], ...]

    def as_dict(self) -> dict:
        return {str(j): [format_rational(c) for c in b] for j, b in zip(self.support, self.blocks)}

    def at_level(self, level: ProductLevel) -> Functional:
        """Presentation at a level whose index set contains the support."""
        if not set(self.support) <= set(level.indices):
            raise BadIndex("level does not contain the support")
        return level.functional(dict(zip(self.support, self.blocks)))


@dataclass(frozen=True)
class TowerDual:
    level: int
    functional: Functional


def normalize_dual(
    f: ProductFamily,
    raw: Mapping[int, Functional | Sequence[Scalar | str] | Scalar | str] | Callable | ProductDual,
) -> ProductDual:
    """Trim to the minimal support.  Scalars are accepted for 1-dimensional factors."""
    if isinstance(raw, ProductDual):
        raw = dict(zip(raw.support, raw.blocks))
    if callable(raw) or not isinstance(raw, Mapping):
        raise InfiniteSupport("dual entries must be given as a finite mapping")
    support, blocks = [], []
    for j in sorted(raw):
        alg = f.factor(j)
        val = raw[j]
        if isinstance(val, Functional):
            vals = val.coords
        elif isinstance(val, (int, Fraction, str)):
            vals = as_fractions([val])
        else:
            vals = as_fractions(val)
        if len(vals) != alg.dim:
            raise BadIndex(f"entry {j} has {len(vals)} coordinates, factor has dimension {alg.dim}", index=j)
        if any(vals):
            support.append(j)
            blocks.append(tuple(vals))
    return ProductDual(tuple(support), tuple(blocks))


# ---------------------------------------------------------------------------
# level reconciliation


@dataclass(frozen=True)
class LevelData:
    """A functional presented at one level, with that level's lattice if any."""

    tag: str
    functional: Functional
    lattice: Lattice | None = None


@dataclass(frozen=True)
class Verdict:
    consistent: bool
    checks: tuple[tuple[str, bool], ...]

    def as_dict(self) -> dict:
        return {"consistent": self.consistent, "checks": {name: ok for name, ok in self.checks}}


def reconcile_levels(
    coarse: LevelData, fine: LevelData, bonding: Morphism, seed: int = 0, samples: int = 20
) -> Verdict:
    """Check that ``fine`` presents the same orbit as ``coarse`` pulled back along ``bonding``.

    ``bonding`` maps the fine level's algebra onto the coarse one.  Raises
    :class:`InconsistentLevels` (carrying the verdict) when any check fails.
    """
    pulled = pullback_functional(bonding, coarse.functional)
    fine_orbit = orbit_descriptor(fine.functional)
    pulled_orbit = orbit_descriptor(pulled)
    checks = [
        ("pulled_base_on_fine_orbit", orbit_contains(fine_orbit, pulled).yes),
        ("fine_base_on_pulled_orbit", orbit_contains(pulled_orbit, fine.functional).yes),
    ]
    coarse_orbit = orbit_descriptor(coarse.functional)
    if checks[0][1]:
        pts = orbit_sample(coarse_orbit, seed, samples)
        checks.append((
            "pulled_samples_on_fine_orbit",
            all(orbit_contains(fine_orbit, pullback_functional(bonding, p)).yes for p in pts),
        ))
    else:
        checks.append(("pulled_samples_on_fine_orbit", False))
    coarse_int = True if coarse.lattice is None else is_integral(coarse.functional, coarse.lattice)
    fine_int = True if fine.lattice is None else is_integral(fine.functional, fine.lattice)
    checks.append(("integrality_agrees", coarse_int == fine_int))
    if fine.lattice is not None and coarse_int:
        checks.append(("pulled_integral_at_fine_level", is_integral(pulled, fine.lattice)))
    verdict = Verdict(all(ok for _, ok in checks), tuple(checks))
    if not verdict.consistent:
        failing = [name for name, ok in checks if not ok]
        raise InconsistentLevels(
            f"levels {coarse.tag} and {fine.tag} do not present the same dual element",
            failing=failing,
            verdict=verdict.as_dict(),
        )
    return verdict


def reconcile_product(
    f: ProductFamily,
    coarse: tuple[Iterable[int], Mapping[int, Sequence[Scalar | str] | Functional]],
    fine: tuple[Iterable[int], Mapping[int, Sequence[Scalar | str] | Functional]],
    seed: int = 0,
    samples: int = 20,
) -> Verdict:
    """Reconcile two product-level presentations ``(support, blocks)``; needs ``F1 <= F2``."""
    lvl1 = product_projection(f, coarse[0])
    lvl2 = product_projection(f, fine[0])
    bonding = lvl2.bonding_to(lvl1)
    return reconcile_levels(
        LevelData(f"F={list(lvl1.indices)}", lvl1.functional(coarse[1])),
        LevelData(f"F={list(lvl2.indices)}", lvl2.functional(fine[1])),
        bonding,
        seed,
        samples,
    )


def reconcile_tower(
    t: QuotientTower, coarse: TowerDual, fine: TowerDual, seed: int = 0, samples: int = 20
) -> Verdict:
    return reconcile_levels(
        LevelData(f"k={coarse.level}", coarse.functional, t.lattice(coarse.level)),
        LevelData(f"k={fine.level}", fine.functional, t.lattice(fine.level)),
        t.bonding(fine.level, coarse.level),
        seed,
        samples,
    )


# ---------------------------------------------------------------------------
# correspondence entries


@dataclass(frozen=True)
class CorrespondenceEntry:
    level: str
    orbit: OrbitDescriptor
    representation: InducedRepDescriptor
    integral: bool | None


def make_correspondence_entry(
    level: str,
    ell: Functional,
    flag: Flag | None = None,
    lattice: Lattice | None = None,
    seed: int = 0,
) -> CorrespondenceEntry:
    """Orbit, Vergne polarization and induced descriptor for ``ell`` at one level."""
    desc = orbit_descriptor(ell, flag)
    pol = vergne_polarization(ell, desc.flag)
    rep = induce_descriptor(ell, pol, lattice)
    integral = None if lattice is None else orbit_integral(desc, lattice, seed=seed, samples=20)
    entry = CorrespondenceEntry(level, desc, rep, integral)
    if not orbit_contains(desc, rep.functional).yes or (integral is not None and not integral):
        raise SanityFailure("correspondence entry invariants fail", level=level)
    return entry
