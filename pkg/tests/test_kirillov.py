from fractions import Fraction as F
from itertools import combinations

import pytest

from nilorbit import catalog, sampling
from nilorbit.bch import GroupElement, adjoint_matrix, coadjoint_apply
from nilorbit.errors import (
    LatticeImageMismatch,
    NotInSubalgebra,
    NotIntegral,
    NotSurjective,
    PolarizationInvalid,
)
from nilorbit.exactmath import RatMatrix
from nilorbit.kirillov import (
    induce_descriptor,
    is_integral,
    orbit_integral,
    polarization_from_subspace,
    pullback_functional,
    pullback_orbit,
    pullback_polarization,
    push_element,
    transport_through_cover,
    verify_polarization,
    vergne_polarization,
)
from nilorbit.liealg import Lattice, Morphism, Subspace, center, jordan_holder_flag, morphism_kernel, quotient_by_ideal
from nilorbit.orbits import orbit_contains, orbit_descriptor, orbit_sample, relative_stabilizer, stabilizer

CATALOG = catalog.standard()
IDS = [a.name for a in CATALOG]


def h3():
    return catalog.get("heisenberg3")


def f4():
    return catalog.get("filiform4")


def span(alg, *vecs):
    return Subspace.span(alg, vecs)


def f4_to_h3():
    f = f4()
    return quotient_by_ideal(f, span(f, (0, 0, 0, 1)))[1]


def h3_to_r2():
    return Morphism(h3(), catalog.get("abelian2"), RatMatrix.from_rows([[1, 0, 0], [0, 1, 0]]))


def independent_certificate(ell, h):
    """Direct checks on every pair of basis vectors, plus the dimension identity."""
    alg = ell.algebra
    closed = all(h.contains(alg.bracket_coords(x, y)) for x, y in combinations(h.basis, 2))
    isotropic = all(ell(alg.bracket_coords(x, y)) == 0 for x in h.basis for y in h.basis)
    return closed, isotropic, F(alg.dim + stabilizer(ell).dim, 2) == h.dim


def test_vergne_examples():
    h, f = h3(), f4()
    pol = vergne_polarization(h.functional([0, 0, 1]))
    assert pol.subalgebra == span(h, (0, 1, 0), (0, 0, 1)) and pol.dim == 2
    # per-layer oracle: layer stabilizers span{e3}, span{e2,e3}, span{e3}
    ell = h.functional([0, 0, 1])
    layers = jordan_holder_flag(h).layers
    per_layer = [relative_stabilizer(ell, layer).intersection(layer) for layer in layers]
    assert per_layer == [span(h, (0, 0, 1)), span(h, (0, 1, 0), (0, 0, 1)), span(h, (0, 0, 1))]
    assert vergne_polarization(f.functional([0, 0, 0, 1])).subalgebra == span(
        f, (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)
    )
    ab = catalog.get("abelian4")
    assert vergne_polarization(ab.functional([1, 2, 3, 4])).dim == 4


@pytest.mark.parametrize("alg", CATALOG, ids=IDS)
def test_vergne_certificates(alg):
    r = sampling.rng("test-vergne", 0)
    for _ in range(40):
        ell = sampling.functional(alg, r)
        pol = vergne_polarization(ell)
        assert pol.certificate.ok
        assert independent_certificate(ell, pol.subalgebra) == (True, True, True)


def test_verify_polarization_failures():
    h = h3()
    ell = h.functional([0, 0, 1])
    assert verify_polarization(ell, span(h, (0, 1, 0), (0, 0, 1))).ok
    bad = verify_polarization(ell, span(h, (1, 0, 0), (0, 1, 0)))
    assert not bad.subordinated and not bad.subalgebra and bad.maximal_isotropic
    small = verify_polarization(ell, span(h, (0, 0, 1)))
    assert small.subalgebra and small.subordinated and not small.maximal_isotropic


def test_induce_descriptor():
    h = h3()
    ell = h.functional([0, 0, 1])
    lat = Lattice.of(h, [[0, 0, 1]])
    rep = induce_descriptor(ell, span(h, (0, 1, 0), (0, 0, 1)), lat)
    assert rep.character_phase(GroupElement(h.e(2))) == 1
    assert rep.character_phase(GroupElement.identity(h)) == 0
    assert rep.character_phase(h.vector([0, 3, "1/2"])) == F(1, 2)
    with pytest.raises(NotInSubalgebra):
        rep.character_phase(h.e(0))
    with pytest.raises(NotIntegral):
        induce_descriptor(h.functional([0, 0, "3/2"]), span(h, (0, 1, 0), (0, 0, 1)), lat)
    with pytest.raises(PolarizationInvalid):
        induce_descriptor(ell, span(h, (1, 0, 0), (0, 1, 0)))


def test_pullback_functional_examples():
    p = f4_to_h3()
    assert pullback_functional(p, h3().functional([0, 0, 1])).coords == (0, 0, 1, 0)
    ident = Morphism.identity(h3())
    assert pullback_functional(ident, h3().functional([1, 2, 3])) == h3().functional([1, 2, 3])
    assert pullback_functional(p, h3().functional([0, 0, 0])).is_zero()


@pytest.mark.parametrize("make", [f4_to_h3, h3_to_r2], ids=["f4-h3", "h3-r2"])
def test_functoriality_diagram(make):
    p = make()
    r = sampling.rng("test-functoriality", 0)
    for _ in range(100):
        g = sampling.element(p.source, r)
        assert adjoint_matrix(push_element(p, g)) @ p.matrix == p.matrix @ adjoint_matrix(g)
        eta = sampling.functional(p.target, r)
        lhs = pullback_functional(p, coadjoint_apply(push_element(p, g), eta))
        assert lhs == coadjoint_apply(g, pullback_functional(p, eta))


def test_pullback_orbit_f4_h3():
    p = f4_to_h3()
    d2 = orbit_descriptor(h3().functional([0, 0, 1]))
    d1 = pullback_orbit(p, d2, seed=0, samples=100)
    f = f4()
    assert d1.base.coords == (0, 0, 1, 0) and d1.dimension == 2
    assert d1.stabilizer == span(f, (0, 0, 1, 0), (0, 0, 0, 1))
    for eta in orbit_sample(d2, 1, 100):
        assert orbit_contains(d1, pullback_functional(p, eta)).yes
    # the orbit is the plane {(s, t, 1, 0)}
    r = sampling.rng("test-plane", 0)
    for _ in range(20):
        s, t = sampling.rational(r), sampling.rational(r)
        assert orbit_contains(d1, f.functional([s, t, 1, 0])).yes
    assert orbit_contains(d1, f.functional([0, 0, 1, 1])).no


def test_pullback_orbit_abelianization():
    p = h3_to_r2()
    d2 = orbit_descriptor(p.target.functional([2, "-1/3"]))
    d1 = pullback_orbit(p, d2, samples=20)
    assert d1.base.coords == (2, F(-1, 3), 0) and d1.dimension == 0
    assert d1.stabilizer.dim == 3
    ident = Morphism.identity(h3())
    d = orbit_descriptor(h3().functional([0, 0, 1]))
    assert pullback_orbit(ident, d, samples=5).base == d.base


def test_pullback_requires_surjection():
    inc = Morphism(catalog.get("abelian1"), h3(), RatMatrix.from_rows([[0], [0], [1]]))
    with pytest.raises(NotSurjective):
        pullback_orbit(inc, orbit_descriptor(h3().functional([0, 0, 1])))


def test_pullback_polarization_examples():
    p = f4_to_h3()
    pol2 = vergne_polarization(h3().functional([0, 0, 1]))
    pol1 = pullback_polarization(p, pol2)
    f = f4()
    assert pol1.subalgebra == span(f, (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))
    ker = morphism_kernel(p)
    assert pol1.dim == pol2.dim + ker.dim
    assert stabilizer(pol1.functional).dim == stabilizer(pol2.functional).dim + ker.dim
    assert ker <= stabilizer(pol1.functional) and ker <= pol1.subalgebra
    assert independent_certificate(pol1.functional, pol1.subalgebra) == (True, True, True)

    q = h3_to_r2()
    pol2 = polarization_from_subspace(q.target.functional([3, 4]), Subspace.whole(q.target))
    pol1 = pullback_polarization(q, pol2)
    assert pol1.subalgebra == Subspace.whole(h3()) and pol1.certificate.ok

    ident = Morphism.identity(h3())
    pol = vergne_polarization(h3().functional([1, 2, 3]))
    assert pullback_polarization(ident, pol).subalgebra == pol.subalgebra


@pytest.mark.parametrize("name", ["filiform5", "uppertriangular4", "heisenberg5"])
def test_pullback_polarization_along_center_quotients(name):
    alg = catalog.get(name)
    _, p = quotient_by_ideal(alg, jordan_holder_flag(alg).layer(0))
    r = sampling.rng("test-pullback-pol", 0)
    for _ in range(20):
        pol2 = vergne_polarization(sampling.functional(p.target, r))
        pol1 = pullback_polarization(p, pol2)
        ker = morphism_kernel(p)
        assert pol1.dim == pol2.dim + ker.dim
        assert ker <= stabilizer(pol1.functional)


def test_is_integral_examples():
    h = h3()
    lat = Lattice.of(h, [[0, 0, 1]])
    assert is_integral(h.functional(["1/2", 7, 3]), lat)
    assert is_integral(h.functional([0, 0, 0]), lat)
    assert not is_integral(h.functional([0, 0, "1/2"]), lat)


def test_orbit_integral_examples():
    h = h3()
    lat = Lattice.of(h, [[0, 0, 1]])
    assert orbit_integral(orbit_descriptor(h.functional([0, 0, 1])), lat, samples=100)
    assert not orbit_integral(orbit_descriptor(h.functional([0, 0, "2/3"])), lat, samples=100)
    ab = catalog.get("abelian2")
    assert orbit_integral(orbit_descriptor(ab.functional([3, "1/2"])), Lattice.of(ab, [[1, 0]]))


@pytest.mark.parametrize("alg", [a for a in CATALOG if a.dim], ids=[a.name for a in CATALOG if a.dim])
def test_integrality_is_orbit_invariant(alg):
    z = center(alg)
    lat = Lattice.of(alg, [tuple(v) for v in z.basis])
    r = sampling.rng("test-integral-orbit", 0)
    for _ in range(20):
        xi = sampling.functional(alg, r)
        g = sampling.element(alg, r)
        assert is_integral(coadjoint_apply(g, xi), lat) == is_integral(xi, lat)


def test_transport_through_cover_examples():
    f, h = f4(), h3()
    p = f4_to_h3()
    ok = transport_through_cover(p, Lattice.of(f, [[0, 0, 0, 1]]), Lattice(h, ()))
    assert ok.ok and ok.image_coordinates == ((),)
    ident = Morphism.identity(h)
    lat = Lattice.of(h, [[0, 0, 1]])
    res = transport_through_cover(ident, lat, lat, [h.functional([0, 0, 2])])
    assert res.ok and res.checked_functionals == 1
    assert is_integral(pullback_functional(ident, h.functional([0, 0, 2])), lat)
    r = catalog.get("abelian1")
    with pytest.raises(LatticeImageMismatch):
        transport_through_cover(Morphism.identity(r), Lattice.of(r, [[2]]), Lattice.of(r, [[1]]))
    with pytest.raises(LatticeImageMismatch):
        transport_through_cover(Morphism.identity(r), Lattice.of(r, [["1/2"]]), Lattice.of(r, [[1]]))
    # same lattice written with a different basis is accepted
    ab = catalog.get("abelian2")
    assert transport_through_cover(
        Morphism.identity(ab), Lattice.of(ab, [[1, 1], [0, 1]]), Lattice.of(ab, [[1, 0], [0, 1]])
    ).ok
