"""Command line entry point: ``matcomp VERB INPUT... [options]``.

Inputs are JSON files (``-`` reads standard input).  Results are written as
sorted JSON, plain text (``tutte``) or DOT (``--dot`` on graph verbs).  Exit
status is 0 on success, 1 when the inputs are well formed but the operation
is undefined on them, and 2 when the inputs cannot be parsed.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Callable, Mapping, Sequence

from .compose import DefiniteTypeViolation, compose_lax, compose_strict, structure_factor
from .core import (
    GroundSizeError,
    Matroid,
    SubsetRelation,
    complement,
    degree,
    exchange_check,
    is_basis_family,
    is_bimatroid,
    matroid_from_json,
    matroid_to_json,
    relation_from_json,
    relation_to_json,
    tensor,
)
from .digraph import (
    BicoloredDigraph,
    ExtendedDigraph,
    bpath_lax,
    bpath_relation,
    digraph_from_json,
    epath_relation,
    path_lax,
    path_relation,
)
from .matroid_ops import (
    PointedMatroid,
    contract,
    delete,
    minor,
    parallel_connection,
    series_connection,
    symmetrize,
    two_sum,
)
from .mconvex import BoundedMConvexRelation, is_mconvex, skeleton
from .star import BOOL00, BOOL11, ZXY, BivariatePolynomial, WeightedMorphism, boolean_semiring, star_compose, tutte

SEMIRINGS = {
    "bool00": BOOL00,
    "bool01": boolean_semiring(False, True),
    "bool10": boolean_semiring(True, False),
    "bool11": BOOL11,
    "zxy": ZXY,
}


class MalformedInput(Exception):
    pass


class DomainError(Exception):
    pass


# --------------------------------------------------------------------------- loading


def _read(path: str) -> Any:
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise MalformedInput(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise MalformedInput(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc


def _parse(path: str, build: Callable[[Mapping], Any]) -> Any:
    doc = _read(path)
    if not isinstance(doc, dict):
        raise MalformedInput(f"{path}: expected a JSON object")
    try:
        return build(doc)
    except GroundSizeError:
        raise
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise MalformedInput(f"{path}: {exc}") from exc


def _matroid(doc: Mapping) -> Matroid:
    if not isinstance(doc["ground"], list) or not isinstance(doc["bases"], list):
        raise TypeError("'ground' and 'bases' must be lists")
    return matroid_from_json(doc)


def _relation(doc: Mapping) -> SubsetRelation:
    if "ground" in doc:
        return _matroid(doc).as_relation()
    for key in ("domain", "codomain", "pairs"):
        if not isinstance(doc[key], list):
            raise TypeError(f"{key!r} must be a list")
    return relation_from_json(doc)


def _pointed(doc: Mapping) -> PointedMatroid:
    return PointedMatroid(_matroid(doc), str(doc["basepoint"]))


def load_matroid(path: str) -> Matroid:
    m = _parse(path, _matroid)
    if not is_basis_family(m.bases, len(m.ground)):
        raise DomainError(f"{path}: basis family violates the exchange axiom")
    return m


def load_relation(path: str) -> SubsetRelation:
    rel = _parse(path, _relation)
    if not exchange_check(rel):
        raise DomainError(f"{path}: relation violates the exchange axiom")
    return rel


def load_pointed(path: str) -> PointedMatroid:
    p = _parse(path, _pointed)
    if not is_basis_family(p.matroid.bases, len(p.matroid.ground)):
        raise DomainError(f"{path}: basis family violates the exchange axiom")
    return p


def _labels(text: str | None) -> list[str]:
    return [p for p in (text or "").split(",") if p]


# --------------------------------------------------------------------------- verbs


def _lax_json(res) -> dict:
    return res.to_json()


def _pointed_json(p: PointedMatroid) -> dict:
    return {**matroid_to_json(p.matroid), "basepoint": p.basepoint}


def _coefficient_json(value: Any) -> Any:
    if isinstance(value, BivariatePolynomial):
        return value.to_text()
    return value


def run_check(args) -> Any:
    doc = _parse(args.input, lambda d: d)
    if "ground" in doc:
        m = _parse(args.input, _matroid)
        ok = is_basis_family(m.bases, len(m.ground))
        return {"matroid": ok, "rank": m.rank if ok else None, "zero": m.is_zero}
    rel = _parse(args.input, _relation)
    ok = exchange_check(rel)
    return {
        "exchange": ok,
        "degree": degree(rel) if ok else None,
        "bimatroid": is_bimatroid(rel),
        "zero": rel.is_zero,
    }


def run_compose(args) -> Any:
    left, right = load_relation(args.left), load_relation(args.right)
    if args.semiring:
        ring = SEMIRINGS[args.semiring]
        out = star_compose(WeightedMorphism.single(left, ring), WeightedMorphism.single(right, ring))
        return {
            "semiring": args.semiring,
            "domain": list(out.domain.points),
            "codomain": list(out.codomain.points),
            "terms": [
                {"coefficient": _coefficient_json(c), "relation": relation_to_json(r)}
                for r, c in out.terms.items()
            ],
        }
    if args.lax:
        return _lax_json(compose_lax(left, right))
    return relation_to_json(compose_strict(left, right))


def run_tensor(args) -> Any:
    return relation_to_json(tensor(load_relation(args.left), load_relation(args.right)))


def run_dual(args) -> Any:
    return matroid_to_json(load_matroid(args.input).dual())


def run_complement(args) -> Any:
    return relation_to_json(complement(load_relation(args.input)))


def run_delete(args) -> Any:
    return matroid_to_json(delete(load_matroid(args.input), args.point, "strict" if args.strict else "lax"))


def run_contract(args) -> Any:
    return matroid_to_json(contract(load_matroid(args.input), args.point, "strict" if args.strict else "lax"))


def run_minor(args) -> Any:
    order = _labels(args.order) if args.order else None
    m = minor(load_matroid(args.input), _labels(args.delete), _labels(args.contract), order)
    return matroid_to_json(m)


def run_twosum(args) -> Any:
    return matroid_to_json(two_sum(load_pointed(args.left), load_pointed(args.right)))


def run_parallel(args) -> Any:
    return _pointed_json(parallel_connection(load_pointed(args.left), load_pointed(args.right), args.basepoint))


def run_series(args) -> Any:
    return _pointed_json(series_connection(load_pointed(args.left), load_pointed(args.right), args.basepoint))


def run_symmetrize(args) -> Any:
    doc = _parse(args.input, lambda d: d)
    target = load_matroid(args.input) if "ground" in doc else load_relation(args.input)
    t = _labels(args.target) if args.target is not None else None
    out = symmetrize(target, _labels(args.points), t, args.degree)
    return matroid_to_json(out) if isinstance(out, Matroid) else relation_to_json(out)


def run_tutte(args) -> Any:
    m = load_matroid(args.input)
    poly = tutte(m)
    if args.json:
        return {"tutte": poly.to_text(), "terms": [list(t) for t in poly.terms()]}
    return poly.to_text()


def _graph(path: str, coloured: bool = False):
    g = _parse(path, digraph_from_json)
    if coloured and not isinstance(g, BicoloredDigraph):
        raise MalformedInput(f"{path}: a bicoloured graph needs a 'colours' object")
    return g


def run_path(args) -> Any:
    g = _graph(args.input)
    if args.dot:
        return g.to_dot()
    return relation_to_json(path_relation(g))


def run_epath(args) -> Any:
    g = _graph(args.input)
    if args.dot:
        return g.to_dot()
    return relation_to_json(epath_relation(g))


def run_bpath(args) -> Any:
    g = _graph(args.input, coloured=True)
    if args.dot:
        return g.to_dot()
    if args.lax:
        return _lax_json(bpath_lax(g))
    return relation_to_json(bpath_relation(g))


def _extended(doc: Mapping) -> ExtendedDigraph:
    return ExtendedDigraph(digraph_from_json(doc), doc.get("extra_sources", []), doc.get("extra_sinks", []))


def run_pathlax(args) -> Any:
    return _lax_json(path_lax(_parse(args.input, _extended)))


def run_structure(args) -> Any:
    left, right = load_relation(args.left), load_relation(args.right)
    res = compose_lax(left, right)
    k_set, l_set = structure_factor(left, right)
    return {
        "type": res.type.as_list(),
        "K": list(k_set.labels),
        "L": list(l_set.labels),
        "relation": relation_to_json(res.relation),
    }


def _mconvex_input(doc: Mapping):
    if "vectors" in doc:
        vectors = [tuple(int(v) for v in vec) for vec in doc["vectors"]]
        return vectors
    return BoundedMConvexRelation.from_json(doc)


def run_mconvex_check(args) -> Any:
    value = _parse(args.input, _mconvex_input)
    if isinstance(value, BoundedMConvexRelation):
        return {"mconvex": value.is_mconvex(), "bounds": list(value.bounds)}
    return {"mconvex": is_mconvex(value)}


def _skeleton_input(doc: Mapping):
    rel = _relation(doc)
    return rel, [list(b) for b in doc["domain_blocks"]], [list(b) for b in doc["codomain_blocks"]]


def run_skeleton(args) -> Any:
    rel, dblocks, cblocks = _parse(args.input, _skeleton_input)
    if not exchange_check(rel):
        raise DomainError(f"{args.input}: relation violates the exchange axiom")
    return skeleton(rel, dblocks, cblocks).to_json()


# --------------------------------------------------------------------------- parser


def _mode(p: argparse.ArgumentParser, semiring: bool = False) -> None:
    group = p.add_mutually_exclusive_group()
    group.add_argument("--strict", action="store_true", help="strict composition")
    group.add_argument("--lax", action="store_true", help="lax composition")
    if semiring:
        group.add_argument("--semiring", choices=sorted(SEMIRINGS), help="weighted composition")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="matcomp", description="Composition of matroids as relations.")
    parser.add_argument("-o", "--output", help="write the result here instead of standard output")
    sub = parser.add_subparsers(dest="verb", required=True)

    def verb(name: str, fn, inputs: Sequence[str], help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        for arg in inputs:
            p.add_argument(arg)
        p.set_defaults(run=fn)
        return p

    verb("check", run_check, ["input"], "validate a matroid or an exchange relation")
    _mode(verb("compose", run_compose, ["left", "right"], "compose two relations (left first)"), semiring=True)
    verb("tensor", run_tensor, ["left", "right"], "tensor product of two relations")
    verb("dual", run_dual, ["input"], "dual matroid")
    verb("complement", run_complement, ["input"], "complement of a relation")
    for name, fn in (("delete", run_delete), ("contract", run_contract)):
        p = verb(name, fn, ["input"], f"{name} one point of a matroid")
        p.add_argument("--point", required=True)
        _mode(p)
    p = verb("minor", run_minor, ["input"], "lax deletions and contractions")
    p.add_argument("--delete", default="", help="comma-separated points")
    p.add_argument("--contract", default="", help="comma-separated points")
    p.add_argument("--order", help="comma-separated processing order")
    verb("twosum", run_twosum, ["left", "right"], "two-sum of pointed matroids")
    for name, fn in (("parallel", run_parallel), ("series", run_series)):
        p = verb(name, fn, ["left", "right"], f"{name} connection of pointed matroids")
        p.add_argument("--basepoint", help="label of the new basepoint")
    p = verb("symmetrize", run_symmetrize, ["input"], "symmetrize over a set of codomain points")
    p.add_argument("--points", required=True, help="comma-separated points")
    p.add_argument("--target", help="comma-separated replacement points (default: the same points)")
    p.add_argument("--degree", type=int, default=0)
    p = verb("tutte", run_tutte, ["input"], "Tutte polynomial")
    p.add_argument("--json", action="store_true", help="emit coefficient triples as JSON")
    for name, fn in (("path", run_path), ("epath", run_epath)):
        p = verb(name, fn, ["input"], f"{'vertex' if name == 'path' else 'edge'}-disjoint linkage relation")
        p.add_argument("--dot", action="store_true", help="emit the graph in DOT instead")
    p = verb("bpath", run_bpath, ["input"], "relation of a bicoloured graph")
    p.add_argument("--lax", action="store_true")
    p.add_argument("--dot", action="store_true", help="emit the graph in DOT instead")
    verb("pathlax", run_pathlax, ["input"], "lax linkage relation with extra half-edges")
    verb("structure", run_structure, ["left", "right"], "partial-identity factorization of a lax composite")
    verb("mconvex-check", run_mconvex_check, ["input"], "M-convexity of a vector set or relation")
    verb("skeleton", run_skeleton, ["input"], "block cardinality profile of a symmetric relation")
    return parser


def _emit(result: Any, output: str | None) -> None:
    text = result if isinstance(result, str) else json.dumps(result, sort_keys=True, indent=2)
    text += "\n"
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fail(kind: str, message: str, code: int) -> int:
    sys.stdout.write(json.dumps({"error": {"kind": kind, "message": message}}, sort_keys=True) + "\n")
    return code


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        result = args.run(args)
    except MalformedInput as exc:
        return _fail("malformed", str(exc), 2)
    except (DomainError, GroundSizeError, ValueError, KeyError, DefiniteTypeViolation) as exc:
        message = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
        return _fail("domain", str(message), 1)
    _emit(result, args.output)
    return 0


if __name__ == "__main__":
    sys.exit(main())
