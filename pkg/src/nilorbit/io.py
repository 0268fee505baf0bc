"""JSON file formats.

Rationals are always strings ``"p/q"`` (or ``"p"``).  Algebra references are
``"catalog:NAME"``, a path (relative to the referring file), or an inline
algebra object.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from . import catalog
from .errors import DimensionMismatch, ParseError
from .exactmath import RatMatrix, format_rational, parse_rational
from .liealg import Flag, Functional, Lattice, LieAlgebra, Morphism, Subspace, quotient_by_ideal
from .prolie import ProductFamily, QuotientTower


def load_json(path: str | Path) -> Any:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}", location=str(path)) from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(
            f"{path}: invalid JSON ({exc.msg})", location=f"{path}:{exc.lineno}:{exc.colno}"
        ) from None


def _rat(value: Any, where: str):
    try:
        return parse_rational(value)
    except ParseError as exc:
        raise ParseError(f"{where}: {exc}", location=where) from None


def _require(d: Any, key: str, where: str):
    if not isinstance(d, dict) or key not in d:
        raise ParseError(f"{where}: missing key {key!r}", location=where)
    return d[key]


def _rat_list(values: Any, where: str) -> list:
    if not isinstance(values, list):
        raise ParseError(f"{where}: expected a list", location=where)
    return [_rat(v, f"{where}[{i}]") for i, v in enumerate(values)]


# ---------------------------------------------------------------------------
# algebras


def algebra_from_dict(d: dict, where: str = "algebra") -> LieAlgebra:
    dim = _require(d, "dim", where)
    if not isinstance(dim, int) or dim < 0:
        raise ParseError(f"{where}.dim: expected a non-negative integer", location=f"{where}.dim")
    basis = d.get("basis")
    if basis is not None and (not isinstance(basis, list) or len(basis) != dim):
        raise DimensionMismatch(f"{where}.basis: {dim} labels required", location=f"{where}.basis")
    brackets: dict[tuple[int, int], dict[int, Any]] = {}
    for n, entry in enumerate(d.get("brackets", [])):
        loc = f"{where}.brackets[{n}]"
        i, j = _require(entry, "i", loc), _require(entry, "j", loc)
        if not (isinstance(i, int) and isinstance(j, int) and 0 <= i < j < dim):
            raise ParseError(f"{loc}: need integers 0 <= i < j < {dim}", location=loc)
        if (i, j) in brackets:
            raise ParseError(f"{loc}: duplicate bracket ({i}, {j})", location=loc)
        coeffs = _require(entry, "coeffs", loc)
        if not isinstance(coeffs, dict):
            raise ParseError(f"{loc}.coeffs: expected an object", location=loc)
        parsed = {}
        for k, c in coeffs.items():
            try:
                kk = int(k)
            except ValueError:
                raise ParseError(f"{loc}.coeffs: bad index {k!r}", location=loc) from None
            if not 0 <= kk < dim:
                raise ParseError(f"{loc}.coeffs: index {kk} out of range", location=loc)
            parsed[kk] = _rat(c, f"{loc}.coeffs[{k}]")
        brackets[(i, j)] = parsed
    return LieAlgebra(dim, brackets, basis=basis, name=d.get("name"))


def algebra_to_dict(alg: LieAlgebra) -> dict:
    return {
        "name": alg.name,
        "dim": alg.dim,
        "basis": list(alg.basis),
        "brackets": [
            {"i": i, "j": j, "coeffs": {str(k): format_rational(c) for k, c in coeffs.items()}}
            for (i, j), coeffs in alg.brackets.items()
        ],
    }


def resolve_algebra(ref: Any, base_dir: str | Path = ".") -> LieAlgebra:
    if isinstance(ref, dict):
        if "ref" in ref:
            return resolve_algebra(ref["ref"], base_dir)
        return algebra_from_dict(ref)
    if not isinstance(ref, str):
        raise ParseError(f"bad algebra reference {ref!r}")
    if ref.startswith("catalog:"):
        return catalog.get(ref.split(":", 1)[1])
    path = Path(base_dir) / ref
    return algebra_from_dict(load_json(path), where=str(path))


# ---------------------------------------------------------------------------
# functionals, lattices, flags


def parse_csv_rationals(text: str, where: str = "--functional") -> list:
    parts = [p for p in text.split(",")] if text.strip() else []
    return [_rat(p.strip(), f"{where}[{i}]") for i, p in enumerate(parts)]


def functional_from_csv(text: str, alg: LieAlgebra, where: str = "--functional") -> Functional:
    coords = parse_csv_rationals(text, where)
    if len(coords) != alg.dim:
        raise DimensionMismatch(
            f"{where}: {len(coords)} coordinates for a {alg.dim}-dimensional algebra",
            location=where, expected=alg.dim, got=len(coords),
        )
    return Functional(alg, tuple(coords))


def functional_from_dict(d: dict, alg: LieAlgebra, where: str = "functional") -> Functional:
    coords = _rat_list(_require(d, "coords", where), f"{where}.coords")
    if len(coords) != alg.dim:
        raise DimensionMismatch(f"{where}: {len(coords)} coordinates for dimension {alg.dim}", location=where)
    return Functional(alg, tuple(coords))


def _vectors(rows: Any, alg: LieAlgebra, where: str) -> list[tuple]:
    if not isinstance(rows, list):
        raise ParseError(f"{where}: expected a list of vectors", location=where)
    out = []
    for n, row in enumerate(rows):
        v = _rat_list(row, f"{where}[{n}]")
        if len(v) != alg.dim:
            raise DimensionMismatch(f"{where}[{n}]: length {len(v)} != {alg.dim}", location=f"{where}[{n}]")
        out.append(tuple(v))
    return out


def lattice_from_dict(d: dict, alg: LieAlgebra, where: str = "lattice") -> Lattice:
    return Lattice(alg, tuple(_vectors(_require(d, "generators", where), alg, f"{where}.generators")))


def lattice_to_dict(lat: Lattice) -> dict:
    return {"generators": [[format_rational(a) for a in g] for g in lat.generators]}


def flag_from_dict(d: dict, alg: LieAlgebra, where: str = "flag") -> Flag:
    return Flag(alg, tuple(_vectors(_require(d, "vectors", where), alg, f"{where}.vectors")))


def morphism_from_dict(d: dict, base_dir: str | Path = ".", where: str = "morphism") -> Morphism:
    """``{"source", "target", "matrix"}`` or ``{"source", "quotient_by": [ideal generators]}``."""
    source = resolve_algebra(_require(d, "source", where), base_dir)
    if "quotient_by" in d:
        ideal = Subspace.span(source, _vectors(d["quotient_by"], source, f"{where}.quotient_by"))
        return quotient_by_ideal(source, ideal)[1]
    target = resolve_algebra(_require(d, "target", where), base_dir)
    rows = _require(d, "matrix", where)
    if not isinstance(rows, list) or len(rows) != target.dim:
        raise DimensionMismatch(f"{where}.matrix: need {target.dim} rows", location=f"{where}.matrix")
    parsed = [_rat_list(r, f"{where}.matrix[{n}]") for n, r in enumerate(rows)]
    if any(len(r) != source.dim for r in parsed):
        raise DimensionMismatch(f"{where}.matrix: need {source.dim} columns", location=f"{where}.matrix")
    return Morphism(source, target, RatMatrix.from_rows(parsed, source.dim))


# ---------------------------------------------------------------------------
# towers and products


def tower_from_dict(d: dict, base_dir: str | Path = ".", where: str = "tower") -> QuotientTower:
    alg = resolve_algebra(_require(d, "algebra", where), base_dir)
    chain = _require(d, "chain", where)
    kind = _require(chain, "kind", f"{where}.chain")
    max_level = d.get("max_level")
    if max_level is not None and (not isinstance(max_level, int) or max_level < 1):
        raise ParseError(f"{where}.max_level: expected a positive integer", location=f"{where}.max_level")
    if kind == "geometric":
        base = Lattice(alg, tuple(_vectors(_require(chain, "base", f"{where}.chain"), alg, f"{where}.chain.base")))
        ratio = _rat(_require(chain, "ratio", f"{where}.chain"), f"{where}.chain.ratio")
        if ratio.denominator != 1:
            raise ParseError(f"{where}.chain.ratio: expected an integer", location=f"{where}.chain.ratio")
        return QuotientTower(alg, base=base, ratio=int(ratio), max_level=max_level)
    if kind == "explicit":
        lats = _require(chain, "lattices", f"{where}.chain")
        if not isinstance(lats, list):
            raise ParseError(f"{where}.chain.lattices: expected a list", location=f"{where}.chain.lattices")
        lattices = []
        for n, lat in enumerate(lats):
            loc = f"{where}.chain.lattices[{n}]"
            gens = lat["generators"] if isinstance(lat, dict) else lat
            lattices.append(Lattice(alg, tuple(_vectors(gens, alg, loc))))
        return QuotientTower(alg, lattices=lattices, max_level=max_level)
    raise ParseError(f"{where}.chain.kind: unknown kind {kind!r}", location=f"{where}.chain.kind")


def product_from_dict(d: dict, base_dir: str | Path = ".", where: str = "product") -> ProductFamily:
    if "factors" in d:
        factors = d["factors"]
        if not isinstance(factors, list):
            raise ParseError(f"{where}.factors: expected a list", location=f"{where}.factors")
        return ProductFamily(factors=[resolve_algebra(f, base_dir) for f in factors], name=d.get("name", "product"))
    if d.get("rule") == "repeat":
        factor = resolve_algebra(_require(d, "factor", where), base_dir)
        size = d.get("count_hint")
        if size is not None and (not isinstance(size, int) or size < 1):
            raise ParseError(f"{where}.count_hint: expected a positive integer or null", location=f"{where}.count_hint")
        return ProductFamily.repeat(factor, size=size, name=d.get("name"))
    raise ParseError(f"{where}: need 'factors' or rule 'repeat'", location=where)
