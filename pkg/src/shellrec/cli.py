"""Command-line interface.

Every command writes one JSON document (or CSV for ``matrix --format csv``)
to standard output or ``--output``.  Exit status: 0 on success, 1 on a
domain error (e.g. a matrix with no realisation), 2 on malformed input.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any

from . import __version__
from .complex_core import Triangulation, canonical_code, validate_surface, vertex_star
from .corpus import (
    SURFACE_FILTERS,
    EnumerationConfig,
    catalog,
    catalog_names,
    enumerate_closed,
    exceptional_scan,
    surface_type,
    theorem1_scan,
)
from .errors import MalformedMatrix, MalformedTriangle, ShellrecError
from .intersection import (
    IntersectionMatrix,
    find_intersection_preserving_maps,
    intersection_matrix,
)
from .reconstruct import extend_map, reconstruct_from_matrix
from .schemas import validate_input
from .shells import (
    Shell,
    classify_shell,
    is_shell,
    law_violations,
    repetition_pattern,
    shell_around_vertex,
    structural_vertex_list,
)

log = logging.getLogger("shellrec")


class InputError(Exception):
    """Malformed input file; carries a file/line diagnostic."""


def _line_of(text: str, path: tuple) -> int | None:
    """1-based line where the JSON value at ``path`` starts."""
    dec = json.JSONDecoder()

    class Found(Exception):
        pass

    def ws(i):
        while i < len(text) and text[i] in " \t\r\n":
            i += 1
        return i

    def value(i, here):
        i = ws(i)
        if here == path:
            raise Found(i)
        c = text[i]
        if c == "[":
            i = ws(i + 1)
            if text[i] == "]":
                return i + 1
            k = 0
            while True:
                i = ws(value(i, here + (k,)))
                if text[i] == ",":
                    i, k = i + 1, k + 1
                    continue
                return i + 1
        if c == "{":
            i = ws(i + 1)
            if text[i] == "}":
                return i + 1
            while True:
                key, i = dec.raw_decode(text, ws(i))
                i = ws(i) + 1  # colon
                i = ws(value(i, here + (key,)))
                if text[i] == ",":
                    i += 1
                    continue
                return i + 1
        return dec.raw_decode(text, i)[1]

    try:
        value(0, ())
    except Found as hit:
        return text.count("\n", 0, hit.args[0]) + 1
    except (ValueError, IndexError):
        return None
    return None


def _read_json(path: str, schema: str) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: cannot read file: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}: invalid JSON: {exc.msg}") from None
    problem = validate_input(schema, data)
    if problem is not None:
        where, message = problem
        line = _line_of(text, tuple(where)) or 1
        loc = "".join(f"[{p}]" if isinstance(p, int) else f".{p}" for p in where) or "(root)"
        raise InputError(f"{path}:{line}: schema {schema} violated at {loc}: {message}")
    return data


def _load_triangulation(path: str) -> Triangulation:
    data = _read_json(path, "triangulation")
    try:
        return Triangulation.from_dict(data)
    except (MalformedTriangle, ShellrecError) as exc:
        raise InputError(f"{path}:1: {exc}") from None


def _load_matrix(path: str) -> IntersectionMatrix:
    if path.endswith(".csv"):
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise InputError(f"{path}: cannot read file: {exc.strerror}") from None
        try:
            return IntersectionMatrix.from_csv(text)
        except MalformedMatrix as exc:
            raise InputError(f"{path}: {exc}") from None
    data = _read_json(path, "matrix")
    try:
        return IntersectionMatrix.from_dict(data)
    except MalformedMatrix as exc:
        raise InputError(f"{path}:1: {exc}") from None


def _load_bijection(path: str) -> tuple[int, ...]:
    data = _read_json(path, "bijection")
    if isinstance(data, dict):
        data = data["map"]
    return tuple(data)


# -- commands ------------------------------------------------------------------


def cmd_validate(args) -> Any:
    S = _load_triangulation(args.file)
    rep = validate_surface(S).to_dict()
    if rep["is_closed_surface"]:
        rep["surface_type"] = surface_type(S)
    return rep


def cmd_matrix(args) -> Any:
    M = intersection_matrix(_load_triangulation(args.file))
    if args.format == "csv":
        return M.to_csv()
    return M.to_dict()


def cmd_maps(args) -> Any:
    S, S2 = _load_triangulation(args.source), _load_triangulation(args.target)
    maps = find_intersection_preserving_maps(S, S2, limit=args.limit)
    return {"count": len(maps), "limit": args.limit, "maps": [list(f) for f in maps]}


def cmd_extend(args) -> Any:
    f = _load_bijection(args.map)
    S, S2 = _load_triangulation(args.source), _load_triangulation(args.target)
    return extend_map(f, S, S2).to_dict()


def cmd_classify(args) -> Any:
    S = _load_triangulation(args.file)
    if args.vertex is not None:
        shell = shell_around_vertex(S, args.vertex)
    else:
        order = args.order if args.order is not None else list(range(len(S)))
        shell = is_shell(S, order)
        if shell is None:
            raise ShellrecError("the triangles in this order do not form a shell")
    svl = structural_vertex_list(S, shell)
    out = {
        "shell_class": str(classify_shell(S, shell)),
        "n": shell.n,
        "closed": shell.closed,
        "triangles": list(shell.triangles),
        "structural_vertex_list": {
            "a": [None if x is None else str(x) for x in svl.a],
            "b": [None if x is None else str(x) for x in svl.b],
        },
        "law_violations": law_violations(svl),
    }
    if shell.n >= 4:
        out["repetition_pattern"] = [{"window": w.window, "kind": w.kind} for w in repetition_pattern(svl)]
    return out


def cmd_reconstruct(args) -> Any:
    M = _load_matrix(args.file)
    return reconstruct_from_matrix(M, max_nodes=args.max_nodes).to_dict()


def cmd_catalog(args) -> Any:
    if args.name is None:
        return {"names": catalog_names()}
    entry = catalog(args.name)
    out = entry.to_dict()
    out["canonical_code"] = canonical_code(entry.triangulation).decode()
    return out


def _config(args) -> EnumerationConfig:
    return EnumerationConfig(max_vertices=args.max_vertices, surface_filter=args.filter)


def cmd_enumerate(args) -> Any:
    config = _config(args)
    items = []
    for T in enumerate_closed(config):
        rep = validate_surface(T)
        items.append({
            **T.to_dict(),
            "n_vertices": rep.n_vertices,
            "n_triangles": rep.n_triangles,
            "surface_type": surface_type(T),
            "canonical_code": canonical_code(T).decode(),
        })
    return {"config": config.__dict__, "count": len(items), "triangulations": items}


def cmd_scan_theorem1(args) -> Any:
    extra = None
    config = _config(args)
    if args.with_boundary:
        config = EnumerationConfig(config.max_vertices, config.surface_filter, require_closed=False)
        extra = [catalog("disk_shell_5").triangulation, catalog("mobius5").triangulation]
    return theorem1_scan(config, extra=extra)


def cmd_scan_exceptional(args) -> Any:
    return exceptional_scan(_config(args))


def build_parser() -> argparse.ArgumentParser:
    # accepted before or after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-o", "--output", default=argparse.SUPPRESS,
                        help="write the report here instead of standard output")
    common.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS,
                        help="progress messages on standard error")
    p = argparse.ArgumentParser(
        prog="shellrec",
        description="Intersection matrices of surface triangulations: compute, search, reconstruct.",
        parents=[common],
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", parents=[common], help="closed-surface checks for a triangulation")
    s.add_argument("file")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("matrix", parents=[common], help="intersection matrix of a triangulation")
    s.add_argument("file")
    s.add_argument("--format", choices=("json", "csv"), default="json")
    s.set_defaults(func=cmd_matrix)

    s = sub.add_parser("maps", parents=[common], help="intersection-preserving triangle bijections")
    s.add_argument("source")
    s.add_argument("target")
    s.add_argument("--limit", type=int, default=None, help="stop after this many maps")
    s.set_defaults(func=cmd_maps)

    s = sub.add_parser("extend", parents=[common], help="extend a triangle map to a vertex isomorphism")
    s.add_argument("--map", required=True, help="JSON array; position i holds f(i)")
    s.add_argument("source")
    s.add_argument("target")
    s.set_defaults(func=cmd_extend)

    s = sub.add_parser("classify", parents=[common], help="classify a shell (whole file in order, or a vertex star)")
    s.add_argument("file")
    s.add_argument("--vertex", help="classify the star of this vertex")
    s.add_argument("--order", type=lambda x: [int(k) for k in x.split(",")], help="comma-separated triangle indices")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("reconstruct", parents=[common], help="triangulation from an intersection matrix (.csv or .json)")
    s.add_argument("file")
    s.add_argument("--max-nodes", type=int, default=500_000, help="search budget")
    s.set_defaults(func=cmd_reconstruct)

    s = sub.add_parser("catalog", parents=[common], help="named triangulations (no name: list them)")
    s.add_argument("name", nargs="?")
    s.set_defaults(func=cmd_catalog)

    for name, func, helptext in (
        ("enumerate", cmd_enumerate, "closed surfaces up to isomorphism"),
        ("scan-theorem1", cmd_scan_theorem1, "matrix-equivalent but non-isomorphic surfaces"),
        ("scan-exceptional", cmd_scan_exceptional, "surfaces with non-induced intersection-preserving maps"),
    ):
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.add_argument("--max-vertices", type=int, default=8)
        s.add_argument("--filter", choices=SURFACE_FILTERS, default="all")
        if name == "scan-theorem1":
            s.add_argument("--with-boundary", action="store_true",
                           help="add the disk 5-shell and the 5-triangle Moebius band")
        s.set_defaults(func=func)
    return p


def _emit(result: Any, output: str | None) -> None:
    text = result if isinstance(result, str) else json.dumps(result, indent=1) + "\n"
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    # parent actions are shared with the subparsers, so defaults are filled here
    args.output = getattr(args, "output", None)
    args.verbose = getattr(args, "verbose", False)
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(name)s: %(message)s",
    )
    try:
        result = args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ShellrecError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    _emit(result, args.output)
    return 0


if __name__ == "__main__":
    sys.exit(main())
