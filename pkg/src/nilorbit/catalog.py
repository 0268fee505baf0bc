"""Built-in nilpotent algebras.

Names follow ``<family><n>``: ``abelian3``, ``heisenberg5``, ``filiform4``,
``uppertriangular3``.  The number is the algebra dimension except for
``uppertriangular<m>``, where it is the matrix size.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import combinations
from typing import Callable

from .errors import ParseError
from .liealg import LieAlgebra


def abelian(n: int) -> LieAlgebra:
    return LieAlgebra(n, {}, name=f"abelian{n}")


def heisenberg(dim: int) -> LieAlgebra:
    """Basis ``x_1..x_k, y_1..y_k, z`` with ``[x_i, y_i] = z``."""
    if dim < 3 or dim % 2 == 0:
        raise ValueError("Heisenberg dimension must be odd and at least 3")
    k = (dim - 1) // 2
    z = 2 * k
    brackets = {(i, k + i): {z: 1} for i in range(k)}
    if k == 1:
        basis = ["x", "y", "z"]
    else:
        basis = [f"x{i + 1}" for i in range(k)] + [f"y{i + 1}" for i in range(k)] + ["z"]
    return LieAlgebra(dim, brackets, basis=basis, name=f"heisenberg{dim}")


def filiform(n: int) -> LieAlgebra:
    """Standard graded filiform algebra: ``[e_1, e_j] = e_{j+1}`` for ``2 <= j < n``."""
    if n < 3:
        raise ValueError("filiform dimension must be at least 3")
    brackets = {(0, j): {j + 1: 1} for j in range(1, n - 1)}
    return LieAlgebra(n, brackets, name=f"filiform{n}")


def uppertriangular(m: int) -> LieAlgebra:
    """Strictly upper triangular ``m x m`` matrices.

    Basis ``E_ij`` (i < j) ordered by superdiagonal ``j - i`` and then by row.
    """
    if m < 2:
        raise ValueError("matrix size must be at least 2")
    units = sorted(((i, j) for i, j in combinations(range(m), 2)), key=lambda ij: (ij[1] - ij[0], ij[0]))
    index = {ij: n for n, ij in enumerate(units)}
    brackets: dict[tuple[int, int], dict[int, int]] = {}
    for a, (i, j) in enumerate(units):
        for b, (k, l) in enumerate(units):
            if a >= b:
                continue
            # [E_ij, E_kl] = d_jk E_il - d_li E_kj
            out: dict[int, int] = {}
            if j == k:
                out[index[(i, l)]] = out.get(index[(i, l)], 0) + 1
            if l == i:
                out[index[(k, j)]] = out.get(index[(k, j)], 0) - 1
            if out:
                brackets[(a, b)] = out
    basis = [f"E{i + 1}{j + 1}" for i, j in units]
    return LieAlgebra(len(units), brackets, basis=basis, name=f"uppertriangular{m}")


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    family: str
    parameter: int
    expected_class: int
    build: Callable[[], LieAlgebra]


_FAMILIES: dict[str, tuple[Callable[[int], LieAlgebra], Callable[[int], int]]] = {
    "abelian": (abelian, lambda n: 1 if n > 0 else 0),
    "heisenberg": (heisenberg, lambda n: 2),
    "filiform": (filiform, lambda n: n - 1),
    "uppertriangular": (uppertriangular, lambda m: m - 1),
}

_NAME_RE = re.compile(r"^([a-z]+)(\d+)$")

_CACHE: dict[str, LieAlgebra] = {}

# the algebras exercised by the acceptance suite
STANDARD = (
    "abelian1", "abelian2", "abelian3", "abelian4", "abelian5", "abelian6",
    "heisenberg3", "heisenberg5",
    "filiform4", "filiform5",
    "uppertriangular3", "uppertriangular4",
)


def entry(name: str) -> CatalogEntry:
    m = _NAME_RE.match(name)
    if m is None or m.group(1) not in _FAMILIES:
        raise ParseError(f"unknown catalog algebra {name!r}", name=name)
    family, param = m.group(1), int(m.group(2))
    build, cls = _FAMILIES[family]
    return CatalogEntry(name, family, param, cls(param), lambda: get(name))


def get(name: str) -> LieAlgebra:
    """Catalog algebra by name (memoized; algebras are immutable)."""
    alg = _CACHE.get(name)
    if alg is None:
        m = _NAME_RE.match(name)
        if m is None or m.group(1) not in _FAMILIES:
            raise ParseError(f"unknown catalog algebra {name!r}", name=name)
        try:
            alg = _FAMILIES[m.group(1)][0](int(m.group(2)))
        except ValueError as exc:
            raise ParseError(str(exc), name=name) from None
        _CACHE.setdefault(name, alg)
        alg = _CACHE[name]
    return alg


def standard() -> list[LieAlgebra]:
    return [get(n) for n in STANDARD]
