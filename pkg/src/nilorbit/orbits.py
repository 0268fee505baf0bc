"""Coadjoint stabilizers, orbit descriptors and orbit membership."""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .bch import GroupElement, coadjoint_apply, coadjoint_symbolic
from .errors import DegenerateCoefficient, FlagMismatch, MissingVariable, NotAffine, SanityFailure
from .exactmath import Polynomial, RatMatrix, format_rational, nullspace, solve_affine
from .liealg import Flag, Functional, LieAlgebra, Subspace, Vector, jordan_holder_flag, same_algebra
from . import sampling


def form_matrix(ell: Functional) -> RatMatrix:
    """``B[i][j] = ell([e_i, e_j])``."""
    alg = ell.algebra
    n = alg.dim
    return RatMatrix.from_rows(
        [[ell(alg.bracket_coords(alg.basis_coords(i), alg.basis_coords(j))) for j in range(n)] for i in range(n)],
        n,
    )


def stabilizer(ell: Functional) -> Subspace:
    """Radical of ``B_ell(x, y) = ell([x, y])``, i.e. the coadjoint stabilizer algebra."""
    alg = ell.algebra
    if alg.dim == 0:
        return Subspace.zero(alg)
    return Subspace.span(alg, nullspace(form_matrix(ell)))


def relative_stabilizer(ell: Functional, sub: Subspace) -> Subspace:
    """``{Y in g : ell([Y, s]) = 0 for all s in sub}``."""
    alg = same_algebra(ell.algebra, sub.algebra)
    if sub.dim == 0:
        return Subspace.whole(alg)
    rows = [
        [ell(alg.bracket_coords(alg.basis_coords(i), s)) for i in range(alg.dim)]
        for s in sub.basis
    ]
    return Subspace.span(alg, nullspace(RatMatrix.from_rows(rows, alg.dim)))


@dataclass(frozen=True)
class OrbitDescriptor:
    algebra: LieAlgebra = field(repr=False)
    base: Functional
    stabilizer: Subspace
    dimension: int
    flag: Flag = field(repr=False)
    jump_indices: tuple[int, ...]
    _witnesses: dict = field(default_factory=dict, repr=False, compare=False)
    _lock: Any = field(default_factory=threading.Lock, repr=False, compare=False)

    def cached_witness(self, eta: Functional) -> GroupElement | None:
        with self._lock:
            return self._witnesses.get(eta.coords)

    def remember(self, eta: Functional, g: GroupElement) -> None:
        with self._lock:
            self._witnesses.setdefault(eta.coords, g)


def jump_indices(ell: Functional, flag: Flag, stab: Subspace | None = None) -> tuple[int, ...]:
    """Layers ``j`` (0-based) with ``g_j`` not inside ``g(ell) + g_{j-1}``."""
    stab = stabilizer(ell) if stab is None else stab
    out = []
    prev = stab.dim
    for j, layer in enumerate(flag.layers):
        d = (stab + layer).dim
        if d > prev:
            out.append(j)
        prev = d
    return tuple(out)


def orbit_descriptor(ell: Functional, flag: Flag | None = None) -> OrbitDescriptor:
    alg = ell.algebra
    if flag is None:
        flag = jordan_holder_flag(alg)
    elif flag.algebra != alg:
        raise FlagMismatch("flag belongs to a different algebra")
    stab = stabilizer(ell)
    dim = alg.dim - stab.dim
    jumps = jump_indices(ell, flag, stab)
    if dim % 2 or len(jumps) != dim:  # pragma: no cover - would be a bug
        raise SanityFailure("orbit dimension is odd or jump count disagrees", dimension=dim, jumps=list(jumps))
    return OrbitDescriptor(alg, ell, stab, dim, flag, jumps)


@dataclass(frozen=True)
class Membership:
    """Outcome of :func:`orbit_contains`.  ``status`` is yes, no or indeterminate."""

    status: str
    witness: GroupElement | None = None
    report: dict = field(default_factory=dict)

    @property
    def yes(self) -> bool:
        return self.status == "yes"

    @property
    def no(self) -> bool:
        return self.status == "no"

    @property
    def indeterminate(self) -> bool:
        return self.status == "indeterminate"


def _pair(vec, polys):
    return sum((c * p for c, p in zip(vec, polys) if c), polys[0] * 0)


def orbit_contains(desc: OrbitDescriptor, eta: Functional, method: str = "flow") -> Membership:
    """Decide whether ``eta`` lies on the orbit described by ``desc``.

    ``method="flow"`` walks the flag from the bottom, moving one coordinate at
    a time along a stabilizer direction of the functional restricted to the
    layers already matched; such a flow leaves the lower coordinates alone and
    is affine in its parameter.

    ``method="second-kind"`` eliminates the parameters of
    ``exp(t_n X_n) ... exp(t_1 X_1)`` (one per jump layer, the rest fixed to
    0) greedily, bottom layer first; it can block, in which case the outcome is
    indeterminate with the blocking layer and polynomial.

    A "yes" always carries a witness ``g`` with ``coadjoint_apply(g, base) == eta``
    checked exactly.
    """
    same_algebra(desc.algebra, eta.algebra)
    if eta == desc.base:
        return Membership("yes", GroupElement.identity(desc.algebra), {"method": method})
    cached = desc.cached_witness(eta)
    if cached is not None:
        return Membership("yes", cached, {"method": method, "cached": True})
    if method == "flow":
        result = _contains_flow(desc, eta)
    elif method == "second-kind":
        result = _contains_second_kind(desc, eta)
    else:
        raise ValueError(f"unknown membership method {method!r}")
    if result.yes:
        if coadjoint_apply(result.witness, desc.base) != eta:
            raise SanityFailure("membership witness does not reproduce the target functional")
        desc.remember(eta, result.witness)
    return result


def _contains_flow(desc: OrbitDescriptor, eta: Functional) -> Membership:
    alg = desc.algebra
    flag = desc.flag
    phi = desc.base
    g = GroupElement.identity(alg)
    steps = []
    for j, x in enumerate(flag.vectors):
        target = eta(x)
        current = phi(x)
        lower_stab = relative_stabilizer(phi, flag.layer(j - 1))
        movers = [y for y in lower_stab.basis if phi(alg.bracket_coords(y, x)) != 0]
        if not movers:
            if current != target:
                return Membership(
                    "no",
                    report={
                        "method": "flow",
                        "layer": j,
                        "orbit_value": format_rational(current),
                        "target_value": format_rational(target),
                    },
                )
            continue
        if current == target:
            continue
        y = Vector(alg, movers[0])
        param = f"t{j}"
        polys = coadjoint_symbolic(alg, y, phi, param=param)
        equation = _pair(x, polys) - target
        try:
            t = solve_affine(equation, param)
        except (NotAffine, DegenerateCoefficient, MissingVariable) as exc:
            return Membership(
                "indeterminate",
                report={"method": "flow", "layer": j, "polynomial": str(equation), "reason": type(exc).__name__},
            )
        step = GroupElement(y * t)
        g = step * g
        phi = coadjoint_apply(step, phi)
        steps.append({"layer": j, "parameter": format_rational(t)})
    if phi != eta:  # pragma: no cover - every coordinate was matched
        raise SanityFailure("flow elimination finished without matching the target")
    return Membership("yes", g, {"method": "flow", "steps": steps})


def _contains_second_kind(desc: OrbitDescriptor, eta: Functional) -> Membership:
    alg = desc.algebra
    flag = desc.flag
    params = {j: f"t{j}" for j in desc.jump_indices}
    polys = tuple(Polynomial.constant(c) for c in desc.base.coords)
    # exp(t_n X_n) ... exp(t_1 X_1): the lowest layer acts first
    for j in desc.jump_indices:
        polys = coadjoint_symbolic(alg, Vector(alg, flag.vectors[j]), polys, param=params[j])
    solved: dict[str, Fraction] = {}
    for j, x in enumerate(flag.vectors):
        equation = (_pair(x, polys) - eta(x)).substitute(solved)
        free = equation.free_variables()
        if not free:
            if not equation.is_zero():
                if j in desc.jump_indices:
                    return Membership(
                        "indeterminate",
                        report={"method": "second-kind", "layer": j, "polynomial": str(equation),
                                "reason": "jump coordinate already fixed"},
                    )
                return Membership("no", report={"method": "second-kind", "layer": j, "residual": str(equation)})
            continue
        if len(free) > 1:
            return Membership(
                "indeterminate",
                report={"method": "second-kind", "layer": j, "polynomial": str(equation),
                        "reason": "several unsolved parameters"},
            )
        try:
            solved[free[0]] = solve_affine(equation, free[0])
        except (NotAffine, DegenerateCoefficient) as exc:
            return Membership(
                "indeterminate",
                report={"method": "second-kind", "layer": j, "polynomial": str(equation), "reason": type(exc).__name__},
            )
    g = GroupElement.identity(alg)
    for j in desc.jump_indices:
        t = solved.get(params[j], Fraction(0))
        g = GroupElement(Vector(alg, flag.vectors[j]) * t) * g
    if coadjoint_apply(g, desc.base) != eta:
        return Membership("indeterminate", report={"method": "second-kind", "reason": "witness check failed"})
    return Membership(
        "yes", g, {"method": "second-kind", "parameters": {k: format_rational(v) for k, v in sorted(solved.items())}}
    )


def orbit_sample(desc: OrbitDescriptor, seed: int = 0, count: int = 1) -> list[Functional]:
    """Deterministic points of the orbit.

    Draw 0 is the identity bucket (the base point itself); later draws apply
    seeded small-height random group elements (see :mod:`nilorbit.sampling`).
    """
    if count < 1:
        raise ValueError("count must be at least 1")
    r = sampling.rng("orbit_sample", seed)
    out = [desc.base]
    for _ in range(count - 1):
        out.append(coadjoint_apply(sampling.element(desc.algebra, r), desc.base))
    return out
