"""Polarizations, induced-representation descriptors, pullbacks and integrality."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from . import sampling
from .bch import GroupElement, adjoint_matrix, coadjoint_apply
from .errors import (
    CertificateFailure,
    LatticeImageMismatch,
    NotInSubalgebra,
    NotIntegral,
    NotSurjective,
    PolarizationInvalid,
    SanityFailure,
)
from .exactmath import RatMatrix, hermite_rows
from .liealg import (
    Flag,
    Functional,
    Lattice,
    LieAlgebra,
    Morphism,
    Subspace,
    Vector,
    jordan_holder_flag,
    morphism_kernel,
    preimage,
    same_algebra,
)
from .orbits import (
    OrbitDescriptor,
    orbit_contains,
    orbit_descriptor,
    orbit_sample,
    relative_stabilizer,
    stabilizer,
)


@dataclass(frozen=True)
class PolarizationCertificate:
    subalgebra: bool
    subordinated: bool
    maximal_isotropic: bool
    dim_h: int
    dim_g: int
    dim_stabilizer: int
    violations: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return self.subalgebra and self.subordinated and self.maximal_isotropic

    def as_dict(self) -> dict:
        return {
            "subalgebra": self.subalgebra,
            "subordinated": self.subordinated,
            "maximal_isotropic": self.maximal_isotropic,
            "dim_h": self.dim_h,
            "dim_g": self.dim_g,
            "dim_stabilizer": self.dim_stabilizer,
            "violations": list(self.violations),
        }


@dataclass(frozen=True)
class Polarization:
    functional: Functional
    subalgebra: Subspace
    certificate: PolarizationCertificate

    @property
    def dim(self) -> int:
        return self.subalgebra.dim


def verify_polarization(ell: Functional, h: Subspace) -> PolarizationCertificate:
    """Check the three polarization conditions independently.

    Failures are reported in the certificate, never raised.
    """
    alg = same_algebra(ell.algebra, h.algebra)
    br = alg.bracket_coords
    violations = []
    closed = True
    subordinate = True
    for x, y in combinations(h.basis, 2):
        z = br(x, y)
        if closed and not h.contains(z):
            closed = False
            violations.append("subalgebra: bracket of basis vectors leaves h")
        if subordinate and ell(z) != 0:
            subordinate = False
            violations.append(f"subordinated: ell([x, y]) = {ell(z)} on a basis pair")
    dim_stab = stabilizer(ell).dim
    # dim h = (dim g + dim g(ell)) / 2, kept integral by comparing doubled sides
    maximal = 2 * h.dim == alg.dim + dim_stab
    if not maximal:
        violations.append(f"maximal_isotropic: 2*{h.dim} != {alg.dim} + {dim_stab}")
    return PolarizationCertificate(closed, subordinate, maximal, h.dim, alg.dim, dim_stab, tuple(violations))


def vergne_polarization(ell: Functional, flag: Flag | None = None) -> Polarization:
    """Sum over the flag of the stabilizers of ``ell`` restricted to each layer."""
    alg = ell.algebra
    flag = jordan_holder_flag(alg) if flag is None else flag
    same_algebra(alg, flag.algebra)
    h = Subspace.zero(alg)
    for layer in flag.layers:
        h = h + relative_stabilizer(ell, layer).intersection(layer)
    cert = verify_polarization(ell, h)
    if not cert.ok:
        raise CertificateFailure("Vergne construction produced an invalid polarization", **cert.as_dict())
    return Polarization(ell, h, cert)


def polarization_from_subspace(ell: Functional, h: Subspace) -> Polarization:
    cert = verify_polarization(ell, h)
    if not cert.ok:
        raise PolarizationInvalid("subspace is not a polarization", **cert.as_dict())
    return Polarization(ell, h, cert)


@dataclass(frozen=True)
class InducedRepDescriptor:
    """Stand-in for ``Ind_H^G chi_ell``: the character is stored as the rational phase ``ell(X)``."""

    algebra: LieAlgebra = field(repr=False)
    functional: Functional
    polarization: Polarization
    lattice: Lattice | None = None

    def character_phase(self, x: GroupElement | Vector) -> Fraction:
        """Phase of ``chi(exp X)``, i.e. the exponent in ``exp(i * ell(X))``."""
        v = x.log if isinstance(x, GroupElement) else x
        same_algebra(self.algebra, v.algebra)
        if not self.polarization.subalgebra.contains(v):
            raise NotInSubalgebra("element is not in the polarizing subgroup")
        return self.functional(v)

    def phases_on_basis(self) -> tuple[Fraction, ...]:
        return tuple(self.functional(b) for b in self.polarization.subalgebra.basis)


def induce_descriptor(
    ell: Functional, h: Subspace | Polarization, lattice: Lattice | None = None
) -> InducedRepDescriptor:
    if isinstance(h, Polarization):
        pol = h
        if pol.functional != ell:
            raise PolarizationInvalid("polarization belongs to another functional")
        cert = verify_polarization(ell, pol.subalgebra)
        if not cert.ok:
            raise PolarizationInvalid("subspace is not a polarization", **cert.as_dict())
    else:
        pol = polarization_from_subspace(ell, h)
    if lattice is not None and not is_integral(ell, lattice):
        raise NotIntegral(
            "functional is not integral on the lattice",
            values=[str(ell(g)) for g in lattice.generators],
        )
    return InducedRepDescriptor(ell.algebra, ell, pol, lattice)


# ---------------------------------------------------------------------------
# pullbacks


def pullback_functional(p: Morphism, eta: Functional) -> Functional:
    """``eta o p`` on the source algebra."""
    same_algebra(p.target, eta.algebra)
    return Functional(p.source, p.matrix.transpose().apply(eta.coords))


def push_element(p: Morphism, g: GroupElement) -> GroupElement:
    """Image of a group element; the exponential is the identity on both sides."""
    return GroupElement(p(g.log))


def functoriality_holds(p: Morphism, g: GroupElement) -> bool:
    """``Ad(p(g)) o L(p) == L(p) o Ad(g)``."""
    return adjoint_matrix(push_element(p, g)) @ p.matrix == p.matrix @ adjoint_matrix(g)


def pullback_orbit(
    p: Morphism, desc2: OrbitDescriptor, seed: int = 0, samples: int = 20, flag: Flag | None = None
) -> OrbitDescriptor:
    """Orbit of the pulled-back base point, with the sanity checks run exactly."""
    if not p.is_surjective:
        raise NotSurjective("pullback of orbits needs a surjective morphism", rank=p.rank)
    same_algebra(p.target, desc2.algebra)
    desc1 = orbit_descriptor(pullback_functional(p, desc2.base), flag)
    r = sampling.rng("pullback_orbit", seed)
    for i in range(samples):
        g = sampling.element(p.source, r)
        if not functoriality_holds(p, g):
            raise SanityFailure("functoriality diagram fails", sample=i)
    for i, eta in enumerate(orbit_sample(desc2, seed, samples)):
        res = orbit_contains(desc1, pullback_functional(p, eta))
        if not res.yes:
            raise SanityFailure("pulled-back orbit point is not on the pulled-back orbit", sample=i, status=res.status)
    return desc1


def pullback_polarization(p: Morphism, pol2: Polarization) -> Polarization:
    if not p.is_surjective:
        raise NotSurjective("pullback of polarizations needs a surjective morphism", rank=p.rank)
    if not pol2.certificate.ok:
        raise CertificateFailure("input polarization certificate is not valid")
    ell1 = pullback_functional(p, pol2.functional)
    h1 = preimage(p, pol2.subalgebra)
    cert = verify_polarization(ell1, h1)
    ker = morphism_kernel(p)
    stab1, stab2 = stabilizer(ell1), stabilizer(pol2.functional)
    problems = list(cert.violations)
    if h1.dim != pol2.dim + ker.dim:
        problems.append("dim h1 != dim h2 + dim ker")
    if stab1.dim != stab2.dim + ker.dim:
        problems.append("dim g1(l1) != dim g2(l2) + dim ker")
    if not (ker <= stab1 and ker <= h1):
        problems.append("kernel not contained in stabilizer and h1")
    if problems:
        raise CertificateFailure("pulled-back polarization failed verification", violations=problems)
    return Polarization(ell1, h1, cert)


# ---------------------------------------------------------------------------
# integrality


def is_integral(xi: Functional, lattice: Lattice) -> bool:
    """``xi`` takes integer values on every generator (hence on the whole lattice)."""
    same_algebra(xi.algebra, lattice.algebra)
    return all(xi(g).denominator == 1 for g in lattice.generators)


def orbit_integral(desc: OrbitDescriptor, lattice: Lattice, seed: int = 0, samples: int = 100) -> bool:
    """Integrality of the base point, spot-checked along the orbit."""
    base = is_integral(desc.base, lattice)
    for i, xi in enumerate(orbit_sample(desc, seed, samples)):
        if is_integral(xi, lattice) != base:
            raise SanityFailure("integrality changes along the orbit", sample=i)
    return base


@dataclass(frozen=True)
class CoverTransport:
    images_in_target: bool
    generates_target: bool
    integrality_preserved: bool
    image_coordinates: tuple[tuple[int, ...], ...]
    checked_functionals: int

    @property
    def ok(self) -> bool:
        return self.images_in_target and self.generates_target and self.integrality_preserved

    def as_dict(self) -> dict:
        return {
            "images_in_target": self.images_in_target,
            "generates_target": self.generates_target,
            "integrality_preserved": self.integrality_preserved,
            "image_coordinates": [list(c) for c in self.image_coordinates],
            "checked_functionals": self.checked_functionals,
        }


def lattice_image_coordinates(p: Morphism, source: Lattice, target: Lattice) -> list[tuple[Fraction, ...] | None]:
    return [target.coordinates(p.matrix.apply(g)) for g in source.generators]


def transport_through_cover(
    p: Morphism,
    source: Lattice,
    target: Lattice,
    functionals: Iterable[Functional] = (),
) -> CoverTransport:
    """Check ``p(Gamma_1) == Gamma_2`` and that pullback keeps integral functionals integral.

    Images of the source generators are written in target-generator
    coordinates; equality of lattices then means those integer rows generate
    ``Z^rank`` (Hermite form is the identity).
    """
    same_algebra(p.source, source.algebra)
    same_algebra(p.target, target.algebra)
    if not p.is_surjective:
        raise NotSurjective("cover map must be surjective", rank=p.rank)
    coords = lattice_image_coordinates(p, source, target)
    inside = all(c is not None and all(a.denominator == 1 for a in c) for c in coords)
    if not inside:
        raise LatticeImageMismatch(
            "image of a source generator is not in the target lattice",
            coordinates=[None if c is None else [str(a) for a in c] for c in coords],
        )
    int_rows = [tuple(int(a) for a in c) for c in coords]
    hnf = hermite_rows(int_rows, target.rank)
    generates = hnf == [tuple(int(i == j) for j in range(target.rank)) for i in range(target.rank)]
    if not generates:
        raise LatticeImageMismatch(
            "image of the source lattice is a proper sublattice of the target lattice",
            hermite_form=[list(r) for r in hnf],
        )
    count = 0
    for xi in functionals:
        count += 1
        if is_integral(xi, target) and not is_integral(pullback_functional(p, xi), source):
            raise SanityFailure("pullback of an integral functional is not integral")
    return CoverTransport(True, True, True, tuple(int_rows), count)
