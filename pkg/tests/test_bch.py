from fractions import Fraction as F

import pytest

from nilorbit import catalog, sampling
from nilorbit.bch import (
    GroupElement,
    QuotientElement,
    adjoint_matrix,
    bch_multiply,
    coadjoint_apply,
    coadjoint_symbolic,
    dynkin_coefficients,
)
from nilorbit.errors import AlgebraMismatch, ClassTooHigh
from nilorbit.exactmath import RatMatrix
from nilorbit.liealg import Lattice, bracket

CATALOG = catalog.standard()
IDS = [a.name for a in CATALOG]


def g(alg, coords):
    return GroupElement(alg.vector(coords))


# ---------------------------------------------------------------------------
# oracle: strictly upper-triangular matrices, exp and log as finite series


def mat_of(alg, m, coords):
    """Matrix of ``sum c_k E_{ij}`` using the catalog labels ``E{i}{j}`` (1-based)."""
    a = [[F(0)] * m for _ in range(m)]
    for label, c in zip(alg.basis, coords):
        i, j = int(label[1]) - 1, int(label[2]) - 1
        a[i][j] += c
    return a


def coords_of(alg, a):
    return tuple(a[int(lbl[1]) - 1][int(lbl[2]) - 1] for lbl in alg.basis)


def mm(a, b):
    n = len(a)
    return [[sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


def madd(a, b, s=1):
    return [[x + s * y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mexp(a):
    n = len(a)
    out = [[F(int(i == j)) for j in range(n)] for i in range(n)]
    term = [row[:] for row in out]
    for k in range(1, n):
        term = [[x / k for x in row] for row in mm(term, a)]
        out = madd(out, term)
    return out


def mlog(u):
    n = len(u)
    eye = [[F(int(i == j)) for j in range(n)] for i in range(n)]
    x = madd(u, eye, -1)
    out = [[F(0)] * n for _ in range(n)]
    power = eye
    for k in range(1, n):
        power = mm(power, x)
        out = madd(out, power, F((-1) ** (k + 1), k))
    return out


@pytest.mark.parametrize("m", [3, 4, 5])
def test_uppertriangular_brackets_match_commutators(m):
    alg = catalog.get(f"uppertriangular{m}")
    for i in range(alg.dim):
        for j in range(alg.dim):
            a, b = mat_of(alg, m, alg.basis_coords(i)), mat_of(alg, m, alg.basis_coords(j))
            comm = madd(mm(a, b), mm(b, a), -1)
            assert coords_of(alg, comm) == alg.bracket_coords(alg.basis_coords(i), alg.basis_coords(j))


@pytest.mark.parametrize("m", [3, 4, 5])
def test_bch_matches_matrix_log_of_product(m):
    alg = catalog.get(f"uppertriangular{m}")
    r = sampling.rng("test-bch-matrix", m)
    for _ in range(25):
        x, y = sampling.element(alg, r), sampling.element(alg, r)
        expected = coords_of(alg, mlog(mm(mexp(mat_of(alg, m, x.coords)), mexp(mat_of(alg, m, y.coords)))))
        assert (x * y).coords == expected


@pytest.mark.parametrize("m", [3, 4])
def test_adjoint_matches_matrix_conjugation(m):
    alg = catalog.get(f"uppertriangular{m}")
    r = sampling.rng("test-ad-matrix", m)
    for _ in range(20):
        x = sampling.element(alg, r)
        ex = mexp(mat_of(alg, m, x.coords))
        ex_inv = mexp(mat_of(alg, m, tuple(-c for c in x.coords)))
        ad = adjoint_matrix(x)
        for j in range(alg.dim):
            conj = mm(mm(ex, mat_of(alg, m, alg.basis_coords(j))), ex_inv)
            assert coords_of(alg, conj) == ad.column(j)


# ---------------------------------------------------------------------------
# closed forms


def dynkin3(alg, x, y):
    """x + y + 1/2[x,y] + 1/12([x,[x,y]] - [y,[x,y]]), written out by hand."""
    xy = bracket(x, y)
    return x + y + xy * F(1, 2) + (bracket(x, xy) - bracket(y, xy)) * F(1, 12)


def test_abelian_product_is_sum():
    a = catalog.get("abelian3")
    assert (g(a, [1, 2, 3]) * g(a, ["1/2", 0, -1])).coords == (F(3, 2), 2, 2)


@pytest.mark.parametrize("name", ["heisenberg3", "heisenberg5", "uppertriangular3"])
def test_class_two_closed_form(name):
    alg = catalog.get(name)
    r = sampling.rng("test-class2", 0)
    for _ in range(100):
        x, y = sampling.vector(alg, r), sampling.vector(alg, r)
        assert bch_multiply(x, y).log == x + y + bracket(x, y) * F(1, 2)


def test_f4_example():
    f = catalog.get("filiform4")
    assert (GroupElement(f.e(0)) * GroupElement(f.e(1))).coords == (1, 1, F(1, 2), F(1, 12))


@pytest.mark.parametrize("name", ["filiform4", "uppertriangular4"])
def test_class_three_against_hand_dynkin(name):
    alg = catalog.get(name)
    assert alg.nilpotency_class == 3
    r = sampling.rng("test-class3", 0)
    for _ in range(50):
        x, y = sampling.vector(alg, r), sampling.vector(alg, r)
        assert bch_multiply(x, y).log == dynkin3(alg, x, y)


def test_dynkin_coefficients_low_degree():
    c = dynkin_coefficients()
    assert c[(0,)] == 1 and c[(1,)] == 1
    # [Y,X] = -[X,Y], [X,[Y,X]] = -[X,[X,Y]], [Y,[Y,X]] = -[Y,[X,Y]]
    assert c[(0, 1)] - c[(1, 0)] == F(1, 2)
    assert c[(0, 0, 1)] - c[(0, 1, 0)] == F(1, 12)
    assert c[(1, 0, 1)] - c[(1, 1, 0)] == F(-1, 12)
    assert max(len(w) for w in c) == 6


def test_class_too_high():
    f8 = catalog.get("filiform8")
    assert f8.nilpotency_class == 7
    with pytest.raises(ClassTooHigh):
        GroupElement(f8.e(0)) * GroupElement(f8.e(1))
    f7 = catalog.get("filiform7")
    x = GroupElement(f7.e(0))
    assert (x * x.inverse()).is_identity()


def test_algebra_mismatch():
    with pytest.raises(AlgebraMismatch):
        GroupElement.identity(catalog.get("abelian3")) * GroupElement.identity(catalog.get("heisenberg3"))


@pytest.mark.parametrize("alg", CATALOG, ids=IDS)
def test_group_laws(alg):
    r = sampling.rng("test-group-laws", 0)
    e = GroupElement.identity(alg)
    for _ in range(100):
        x, y, z = (sampling.element(alg, r) for _ in range(3))
        assert (x * y) * z == x * (y * z)
        assert x * e == x and e * x == x
        assert (x * x.inverse()).is_identity()
        assert adjoint_matrix(x * y) == adjoint_matrix(x) @ adjoint_matrix(y)


@pytest.mark.parametrize("alg", CATALOG, ids=IDS)
def test_adjoint_is_unipotent_automorphism(alg):
    r = sampling.rng("test-ad-unipotent", 0)
    n = alg.dim
    for _ in range(30):
        x = sampling.element(alg, r)
        a = adjoint_matrix(x)
        nil = a - RatMatrix.identity(n)
        power = RatMatrix.identity(n)
        for _ in range(n):
            power = power @ nil
        assert power.is_zero()
        u, v = sampling.vector(alg, r), sampling.vector(alg, r)
        au, av = a.apply(u.coords), a.apply(v.coords)
        assert a.apply(bracket(u, v).coords) == alg.bracket_coords(au, av)


def test_adjoint_examples():
    h = catalog.get("heisenberg3")
    a, b, c = F(2), F(-3, 2), F(5)
    ad = adjoint_matrix(g(h, [a, b, c]))
    assert ad.tolist() == [[1, 0, 0], [0, 1, 0], [-b, a, 1]]
    assert adjoint_matrix(GroupElement.identity(h)) == RatMatrix.identity(3)
    assert adjoint_matrix(g(catalog.get("abelian2"), [1, 2])) == RatMatrix.identity(2)


def test_coadjoint_examples():
    h = catalog.get("heisenberg3")
    xi = h.functional([0, 0, 1])
    assert coadjoint_apply(g(h, [1, 0, 0]), xi).coords == (0, -1, 1)
    # oracle: transpose of Ad(exp(-e1)) applied to xi
    assert coadjoint_apply(g(h, [1, 0, 0]), xi).coords == adjoint_matrix(g(h, [-1, 0, 0])).transpose().apply(xi.coords)
    assert coadjoint_apply(GroupElement.identity(h), xi) == xi
    ab = catalog.get("abelian3")
    assert coadjoint_apply(g(ab, [1, 2, 3]), ab.functional([4, 5, 6])) == ab.functional([4, 5, 6])


@pytest.mark.parametrize("alg", CATALOG, ids=IDS)
def test_coadjoint_laws(alg):
    r = sampling.rng("test-coadjoint-laws", 0)
    for _ in range(100):
        x, y = sampling.element(alg, r), sampling.element(alg, r)
        xi, eta = sampling.functional(alg, r), sampling.functional(alg, r)
        a, b = sampling.rational(r), sampling.rational(r)
        assert coadjoint_apply(x * y, xi) == coadjoint_apply(x, coadjoint_apply(y, xi))
        assert coadjoint_apply(x, xi * a + eta * b) == coadjoint_apply(x, xi) * a + coadjoint_apply(x, eta) * b
        # definition: (Ad*(g) xi)(v) = xi(Ad(g^-1) v)
        v = sampling.vector(alg, r)
        assert coadjoint_apply(x, xi)(v) == xi(adjoint_matrix(x.inverse()).apply(v.coords))


def test_coadjoint_symbolic_examples():
    h = catalog.get("heisenberg3")
    al, be, ze = F(2), F(3), F(5)
    p1 = coadjoint_symbolic(h, 0, h.functional([al, be, ze]))
    for t in (1, 2, 3):
        assert tuple(p.evaluate({"t": t}) for p in p1) == (al, be - t * ze, ze)
    p2 = coadjoint_symbolic(h, 1, h.functional([al, be, ze]))
    for t in (1, 2, 3):
        assert tuple(p.evaluate({"t": t}) for p in p2) == (al + t * ze, be, ze)
    ab = catalog.get("abelian2")
    assert all(p.is_constant() for p in coadjoint_symbolic(ab, 1, ab.functional([7, 8])))


@pytest.mark.parametrize("alg", CATALOG, ids=IDS)
def test_coadjoint_symbolic_agrees_with_numeric(alg):
    r = sampling.rng("test-symbolic", 0)
    xi = sampling.functional(alg, r)
    for j in range(alg.dim):
        polys = coadjoint_symbolic(alg, j, xi)
        assert max(p.degree() for p in polys) <= alg.nilpotency_class
        for t in (F(0), F(1), F(-2), F(1, 3), F(5, 2)):
            got = tuple(p.evaluate({"t": t}) for p in polys)
            assert got == coadjoint_apply(GroupElement(alg.e(j) * t), xi).coords


def test_quotient_elements_compare_modulo_lattice():
    h = catalog.get("heisenberg3")
    lat = Lattice.of(h, [[0, 0, 1]])
    x = QuotientElement(g(h, [1, 2, F(1, 2)]), lat)
    assert x == QuotientElement(g(h, [1, 2, F(5, 2)]), lat)
    assert x != QuotientElement(g(h, [1, 2, F(1, 3)]), lat)
    y = QuotientElement(g(h, [0, 1, 0]), lat)
    assert (x * y) == QuotientElement(g(h, [1, 2, F(1, 2)]) * g(h, [0, 1, 7]), lat)
