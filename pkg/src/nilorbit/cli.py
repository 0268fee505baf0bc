"""Command-line front end.

Exit codes: 0 success, 1 validation or input error, 2 indeterminate result,
3 usage error.  Reports are deterministic for fixed inputs and seed.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path
from typing import Any, Sequence

from . import __version__, catalog
from . import io as nio
from .bch import adjoint_matrix, bch_multiply, coadjoint_apply, GroupElement
from .errors import NilorbitError
from .exactmath import format_rational
from .kirillov import (
    induce_descriptor,
    is_integral,
    orbit_integral,
    pullback_functional,
    pullback_orbit,
    pullback_polarization,
    vergne_polarization,
)
from .liealg import Vector, center, jordan_holder_flag, morphism_kernel
from .orbits import orbit_contains, orbit_descriptor, orbit_sample
from .prolie import (
    TowerDual,
    check_monotone,
    integrality_level,
    integrality_profile,
    normalize_dual,
    product_projection,
    reconcile_product,
    reconcile_tower,
)

SCHEMA = "nilorbit.report/1"

EXIT_OK, EXIT_INPUT, EXIT_INDETERMINATE, EXIT_USAGE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _rat(q) -> str:
    return format_rational(q)


def _vec(v) -> list[str]:
    return [_rat(a) for a in v]


def _rows(rows) -> list[list[str]]:
    return [_vec(r) for r in rows]


# ---------------------------------------------------------------------------
# input helpers


def _need(args, name: str):
    value = getattr(args, name)
    if value is None:
        raise UsageError(f"{args.command} requires --{name.replace('_', '-')}")
    return value


def _algebra(args):
    ref = _need(args, "algebra")
    if ref.startswith("catalog:"):
        return catalog.get(ref.split(":", 1)[1])
    return nio.algebra_from_dict(nio.load_json(ref), where=ref)


def _functional(args, alg, name="functional"):
    return nio.functional_from_csv(_need(args, name), alg, where=f"--{name}")


def _flag(args, alg):
    if args.flag in (None, "auto"):
        return jordan_holder_flag(alg)
    return nio.flag_from_dict(nio.load_json(args.flag), alg, where=args.flag)


def _lattice(args, alg):
    if args.lattice is None:
        return None
    return nio.lattice_from_dict(nio.load_json(args.lattice), alg, where=args.lattice)


def _tower(args):
    path = _need(args, "tower")
    tower = nio.tower_from_dict(nio.load_json(path), Path(path).parent, where=path)
    if args.max_level is not None and args.max_level > tower.max_level and tower.kind == "geometric":
        tower = tower.with_max_level(args.max_level)
    return tower


def _product(args):
    path = _need(args, "product")
    return nio.product_from_dict(nio.load_json(path), Path(path).parent, where=path)


def _support(text: str) -> list[int]:
    try:
        return [int(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise UsageError(f"bad index list {text!r}") from None


def _blocks(text: str, where: str) -> dict[int, list]:
    """``"0=1,2,3;2=0,0,1"`` -> ``{0: [...], 2: [...]}``."""
    out = {}
    for part in filter(None, (p.strip() for p in text.split(";"))):
        if "=" not in part:
            raise UsageError(f"{where}: expected INDEX=COORDS, got {part!r}")
        idx, coords = part.split("=", 1)
        try:
            j = int(idx)
        except ValueError:
            raise UsageError(f"{where}: bad index {idx!r}") from None
        out[j] = nio.parse_csv_rationals(coords, f"{where}[{j}]")
    return out


def _tower_dual(text: str, alg, where: str) -> TowerDual:
    if ":" not in text:
        raise UsageError(f"{where}: expected LEVEL:COORDS")
    lvl, coords = text.split(":", 1)
    try:
        k = int(lvl)
    except ValueError:
        raise UsageError(f"{where}: bad level {lvl!r}") from None
    return TowerDual(k, nio.functional_from_csv(coords, alg, where))


# ---------------------------------------------------------------------------
# commands; each returns (results, verdicts, exit code)


def cmd_catalog(args):
    entries = []
    for name in catalog.STANDARD:
        e = catalog.entry(name)
        alg = catalog.get(name)
        entries.append({
            "name": name,
            "dim": alg.dim,
            "nilpotency_class": alg.nilpotency_class,
            "documented_class": e.expected_class,
        })
    ok = all(e["nilpotency_class"] == e["documented_class"] for e in entries)
    return {"entries": entries}, {"classes_match": ok}, EXIT_OK


def cmd_validate(args):
    alg = _algebra(args)
    return (
        {
            "name": alg.name,
            "dim": alg.dim,
            "nilpotency_class": alg.nilpotency_class,
            "lower_central_series_dims": [s.dim for s in alg.lcs],
        },
        {"jacobi": True, "nilpotent": True},
        EXIT_OK,
    )


def cmd_info(args):
    alg = _algebra(args)
    flag = _flag(args, alg)
    return (
        {
            "algebra": nio.algebra_to_dict(alg),
            "nilpotency_class": alg.nilpotency_class,
            "lower_central_series": [_rows(s.basis) for s in alg.lcs],
            "center": _rows(center(alg).basis),
            "flag": _rows(flag.vectors),
        },
        {},
        EXIT_OK,
    )


def cmd_stabilizer(args):
    alg = _algebra(args)
    desc = orbit_descriptor(_functional(args, alg), _flag(args, alg))
    return {"basis": _rows(desc.stabilizer.basis), "dim": desc.stabilizer.dim}, {}, EXIT_OK


def cmd_orbit(args):
    alg = _algebra(args)
    ell = _functional(args, alg)
    desc = orbit_descriptor(ell, _flag(args, alg))
    results: dict[str, Any] = {
        "base": _vec(ell.coords),
        "dimension": desc.dimension,
        "stabilizer": _rows(desc.stabilizer.basis),
        "jump_indices": list(desc.jump_indices),
        "flag": _rows(desc.flag.vectors),
    }
    verdicts: dict[str, Any] = {"even_dimension": desc.dimension % 2 == 0}
    code = EXIT_OK
    if args.contains is not None:
        eta = nio.functional_from_csv(args.contains, alg, where="--contains")
        res = orbit_contains(desc, eta, method=args.method)
        results["membership"] = {
            "target": _vec(eta.coords),
            "status": res.status,
            "witness": None if res.witness is None else _vec(res.witness.coords),
            "report": res.report,
        }
        if res.indeterminate:
            code = EXIT_INDETERMINATE
    if args.samples:
        pts = orbit_sample(desc, args.seed, args.samples)
        verdicts["samples_on_orbit"] = all(orbit_contains(desc, p).yes for p in pts)
        results["samples"] = [_vec(p.coords) for p in pts[: min(len(pts), 5)]]
    return results, verdicts, code


def cmd_act(args):
    alg = _algebra(args)
    g = GroupElement(Vector(alg, tuple(nio.parse_csv_rationals(_need(args, "element"), "--element"))))
    results: dict[str, Any] = {"element": _vec(g.coords), "adjoint": _rows(adjoint_matrix(g).entries)}
    if args.element2 is not None:
        h = GroupElement(Vector(alg, tuple(nio.parse_csv_rationals(args.element2, "--element2"))))
        results["product"] = _vec(bch_multiply(g, h).coords)
    if args.functional is not None:
        results["coadjoint"] = _vec(coadjoint_apply(g, _functional(args, alg)).coords)
    return results, {}, EXIT_OK


def _pol_dict(pol):
    return {"basis": _rows(pol.subalgebra.basis), "dim": pol.dim, "certificate": pol.certificate.as_dict()}


def cmd_polarize(args):
    alg = _algebra(args)
    pol = vergne_polarization(_functional(args, alg), _flag(args, alg))
    return _pol_dict(pol), {"certificate_ok": pol.certificate.ok}, EXIT_OK


def cmd_induce(args):
    alg = _algebra(args)
    ell = _functional(args, alg)
    lattice = _lattice(args, alg)
    pol = vergne_polarization(ell, _flag(args, alg))
    rep = induce_descriptor(ell, pol, lattice)
    results = {
        "functional": _vec(ell.coords),
        "polarization": _pol_dict(pol),
        "character_phases": _vec(rep.phases_on_basis()),
        "lattice": None if lattice is None else nio.lattice_to_dict(lattice),
    }
    return results, {"polarization_ok": pol.certificate.ok, "integral": lattice is None or is_integral(ell, lattice)}, EXIT_OK


def cmd_pullback(args):
    path = _need(args, "morphism")
    p = nio.morphism_from_dict(nio.load_json(path), Path(path).parent, where=path)
    eta = _functional(args, p.target)
    desc2 = orbit_descriptor(eta)
    desc1 = pullback_orbit(p, desc2, seed=args.seed, samples=args.samples or 20)
    pol2 = vergne_polarization(eta)
    pol1 = pullback_polarization(p, pol2)
    ker = morphism_kernel(p)
    results = {
        "pulled_functional": _vec(pullback_functional(p, eta).coords),
        "orbit_dimension": desc1.dimension,
        "stabilizer": _rows(desc1.stabilizer.basis),
        "kernel": _rows(ker.basis),
        "target_polarization": _pol_dict(pol2),
        "pulled_polarization": _pol_dict(pol1),
    }
    verdicts = {
        "dim_h1_eq_dim_h2_plus_ker": pol1.dim == pol2.dim + ker.dim,
        "kernel_in_stabilizer": ker <= desc1.stabilizer,
        "orbit_dimension_preserved": desc1.dimension == desc2.dimension,
    }
    return results, verdicts, EXIT_OK


def cmd_integrality(args):
    if args.tower is not None:
        tower = _tower(args)
        xi = _functional(args, tower.algebra)
        max_k = args.max_level if args.max_level is not None else tower.max_level
        level = integrality_level(tower, xi, max_k)
        results = {
            "level": level,
            "max_level": max_k,
            "profile": integrality_profile(tower, xi, max_k),
        }
        return results, {"monotone": check_monotone(tower, xi, max_k)}, EXIT_OK
    alg = _algebra(args)
    lattice = _lattice(args, alg)
    if lattice is None:
        raise UsageError("integrality requires --tower or --algebra with --lattice")
    xi = _functional(args, alg)
    desc = orbit_descriptor(xi)
    results = {
        "integral": is_integral(xi, lattice),
        "orbit_integral": orbit_integral(desc, lattice, seed=args.seed, samples=args.samples or 100),
        "values_on_generators": [_rat(xi(g)) for g in lattice.generators],
    }
    return results, {}, EXIT_OK


def cmd_tower(args):
    tower = _tower(args)
    levels = [
        {"level": k, "generators": _rows(tower.lattice(k).generators)}
        for k in range(1, tower.max_level + 1)
    ]
    results = {"kind": tower.kind, "algebra": tower.algebra.name, "max_level": tower.max_level, "levels": levels}
    return results, {"chain_nested": all(tower.check_chain())}, EXIT_OK


def cmd_product(args):
    family = _product(args)
    results: dict[str, Any] = {"family": family.name, "size": family.size}
    if args.support is not None:
        level = product_projection(family, _support(args.support))
        results["level"] = {
            "indices": list(level.indices),
            "offsets": list(level.offsets),
            "algebra": nio.algebra_to_dict(level.algebra),
        }
    if args.dual is not None:
        dual = normalize_dual(family, _blocks(args.dual, "--dual"))
        results["dual"] = {"support": list(dual.support), "blocks": dual.as_dict()}
    return results, {}, EXIT_OK


def cmd_reconcile(args):
    coarse, fine = _need(args, "coarse"), _need(args, "fine")
    if args.product is not None:
        family = _product(args)
        c, f = _blocks(coarse, "--coarse"), _blocks(fine, "--fine")
        verdict = reconcile_product(family, (c.keys(), c), (f.keys(), f), seed=args.seed, samples=args.samples or 20)
    elif args.tower is not None:
        tower = _tower(args)
        verdict = reconcile_tower(
            tower,
            _tower_dual(coarse, tower.algebra, "--coarse"),
            _tower_dual(fine, tower.algebra, "--fine"),
            seed=args.seed,
            samples=args.samples or 20,
        )
    else:
        raise UsageError("reconcile requires --product or --tower")
    return {"checks": verdict.as_dict()["checks"]}, {"consistent": verdict.consistent}, EXIT_OK


COMMANDS = {
    "validate": cmd_validate,
    "info": cmd_info,
    "orbit": cmd_orbit,
    "act": cmd_act,
    "stabilizer": cmd_stabilizer,
    "polarize": cmd_polarize,
    "induce": cmd_induce,
    "pullback": cmd_pullback,
    "integrality": cmd_integrality,
    "tower": cmd_tower,
    "product": cmd_product,
    "reconcile": cmd_reconcile,
    "catalog": cmd_catalog,
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="nilorbit", description="Coadjoint orbits of nilpotent Lie groups, exactly.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--algebra", help="FILE or catalog:NAME")
        p.add_argument("--functional", help="comma-separated rationals")
        p.add_argument("--lattice", help="lattice JSON file")
        p.add_argument("--tower", help="tower JSON file")
        p.add_argument("--product", help="product JSON file")
        p.add_argument("--flag", default="auto", help="auto or flag JSON file")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--samples", type=int, default=0)
        p.add_argument("--max-level", type=int, dest="max_level")
        p.add_argument("--output", choices=("json", "text"), default="text")
        if name == "orbit":
            p.add_argument("--contains", help="functional to test for membership")
            p.add_argument("--method", choices=("flow", "second-kind"), default="flow")
        if name == "act":
            p.add_argument("--element", help="exp-coordinates of g")
            p.add_argument("--element2", help="exp-coordinates of h (reports g*h)")
        if name == "pullback":
            p.add_argument("--morphism", help="morphism JSON file")
        if name == "product":
            p.add_argument("--support", help="comma-separated factor indices")
            p.add_argument("--dual", help="per-factor functionals, e.g. '0=2;3=-1/2'")
        if name == "reconcile":
            p.add_argument("--coarse", help="product: 'J=COORDS;...'; tower: 'K:COORDS'")
            p.add_argument("--fine", help="same format as --coarse")
    return parser


def _digest(argv: Sequence[str], args) -> str:
    h = hashlib.sha256()
    h.update(json.dumps(list(argv)).encode())
    for name in ("algebra", "lattice", "tower", "product", "flag", "morphism"):
        value = getattr(args, name, None)
        if value and value != "auto" and not value.startswith("catalog:"):
            try:
                h.update(Path(value).read_bytes())
            except OSError:
                pass
    return h.hexdigest()


def _text(obj: Any, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines.extend(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)) and not _flat(v):
                lines.append(f"{pad}-")
                lines.extend(_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(v)}")
    else:
        lines.append(f"{pad}{_scalar(obj)}")
    return lines


def _flat(v) -> bool:
    if isinstance(v, list):
        return all(not isinstance(x, (dict, list)) for x in v)
    return False


def _scalar(v) -> str:
    if isinstance(v, list):
        return "(" + ", ".join(_scalar(x) for x in v) + ")"
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    return str(v)


def run(argv: Sequence[str] | None = None, stdout=None) -> int:
    """Run one command, write the report, return the exit code."""
    argv = list(sys.argv[1:] if argv is None else argv)
    stdout = stdout or sys.stdout
    parser = build_parser()
    output = "json" if "--output=json" in argv or ("--output" in argv and "json" in argv) else "text"
    report: dict[str, Any] = {"schema": SCHEMA, "command": argv}
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required")
        output = args.output
        report["inputs_digest"] = _digest(argv, args)
        report["provenance"] = {"seed": args.seed, "version": __version__}
        results, verdicts, code = COMMANDS[args.command](args)
        report["status"] = "indeterminate" if code == EXIT_INDETERMINATE else "ok"
        report["results"] = results
        report["verdicts"] = verdicts
    except UsageError as exc:
        code = EXIT_USAGE
        report["status"] = "usage-error"
        report["error"] = {"type": "UsageError", "message": str(exc)}
    except NilorbitError as exc:
        code = EXIT_INPUT
        report["status"] = "error"
        report["error"] = _jsonable(exc.to_dict())
    except (ValueError, ArithmeticError, KeyError, TypeError) as exc:
        # not a library error type, but still reported as data rather than a traceback
        code = EXIT_INPUT
        report["status"] = "error"
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
    if output == "json":
        stdout.write(json.dumps(report, indent=2, sort_keys=True) + "\n")
    else:
        stdout.write("\n".join(_text(report)) + "\n")
    return code


def _jsonable(obj):
    return json.loads(json.dumps(obj, default=str))


def main() -> None:
    sys.exit(run())
