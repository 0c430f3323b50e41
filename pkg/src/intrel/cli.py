"""Command-line entry point: ``intrel <command> ...``.

Exit codes: 0 success, 1 verification failure or refused request, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import algebra as alg
from . import families as fam
from . import family_algebras as fa
from . import projections as proj
from . import relations as rel
from .config import ENV_VAR, EnumerationLimitError, set_enumeration_limit
from .families import FamilyTag
from .verify import SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

IREL_DOT_LIMIT = 4
FAMILY_DOT_LIMIT = 6
DOT_NODE_LIMIT = 5000


class UsageError(Exception):
    pass


# --- input helpers ---------------------------------------------------------------

def _load_json(text: str):
    """Inline JSON, a path to a JSON file, or '-' for stdin."""
    if text == "-":
        raw = sys.stdin.read()
    elif os.path.isfile(text):
        with open(text, encoding="utf-8") as fh:
            raw = fh.read()
    else:
        raw = text
    try:
        return json.loads(raw)
    except json.JSONDecodeError as exc:
        raise UsageError(f"cannot parse JSON argument {text[:40]!r}: {exc}") from None


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _family_element(data, family, style) -> fa.FamilyElement:
    if not isinstance(data, dict):
        raise UsageError("a family element is a JSON object with a 'terms' list")
    data = dict(data)
    for key, flag in (("family", family), ("style", style)):
        if flag is None:
            if key not in data:
                raise UsageError(f"missing {key}: pass --{key} or include it in the JSON")
        elif data.setdefault(key, flag) != flag:
            raise UsageError(f"--{key} {flag} conflicts with {key} {data[key]!r} in the input")
    try:
        return fa.FamilyElement.from_json(data)
    except (KeyError, TypeError) as exc:
        raise UsageError(f"malformed family element JSON: {exc!r}") from None


def _module_element(data) -> alg.ModuleElement:
    return alg.ModuleElement.from_json(data)


# --- output helpers --------------------------------------------------------------

def _print_table(header, rows) -> None:
    cells = [list(map(str, header))] + [[str(c) for c in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    for r in cells:
        print("  ".join(c.rjust(w) for c, w in zip(r, widths)))


def _print_terms(element) -> None:
    items = element.items()
    if not items:
        print("0")
    for key, c in items:
        if isinstance(key, tuple):
            print(f"{c:+d}  {key[0].label()} ⊗ {key[1].label()}")
        else:
            print(f"{c:+d}  {key.label()}")


# --- commands ----------------------------------------------------------------------

def cmd_count(args) -> int:
    what = args.what
    if what == "family":
        if len(args.args) != 2:
            raise UsageError("usage: count family TAG N")
        tag, n = fam.family(args.args[0]), _size(args.args[1])
        label = tag.value
        values = [(k, sum(1 for _ in fam.enumerate_family(k, tag, args.mode))) for k in range(1, n + 1)]
    else:
        if len(args.args) != 1:
            raise UsageError(f"usage: count {what} N")
        n = _size(args.args[0])
        if what == "relations":
            label, fn = "relations", rel.relation_count
        elif what == "indecomposables":
            label = "over-indecomposables" if args.over else "indecomposables"
            fn = lambda k: alg.count_indecomposables(k, over=args.over)  # noqa: E731
        else:
            label, fn = "posets", lambda k: len(fam.poset_codes(k))  # noqa: E731
        values = [(k, fn(k)) for k in range(1, n + 1)]
    if args.json:
        print(_dump({"what": label, "counts": [{"n": k, "count": v} for k, v in values]}))
    else:
        _print_table(("n", label), values)
    return EXIT_OK


def _size(text) -> int:
    try:
        n = int(text)
    except ValueError:
        raise UsageError(f"size must be an integer, got {text!r}") from None
    if n < 1:
        raise UsageError("size must be positive")
    return n


def cmd_verify(args) -> int:
    n_max = args.n_max_flag if args.n_max_flag is not None else args.n_max
    if args.n_max_flag is not None and args.n_max is not None and args.n_max != args.n_max_flag:
        raise UsageError("conflicting n_max values")
    if n_max is None:
        n_max = 3
    if n_max < 0 or args.jobs < 1:
        raise UsageError("--n-max must be >= 0 and --jobs >= 1")
    report = run_suite(args.suite, n_max, args.jobs)
    if args.json:
        print(_dump(report.to_json()))
    else:
        status = "PASS" if report.ok else "FAIL"
        print(f"{status} {report.suite} n_max={n_max}: {report.checks_run} checks, "
              f"{len(report.failures)} failures, {report.wall_time:.2f}s")
        if report.failures:
            check, counterexample = report.failures[0]
            print(f"first failure: {check}: {_dump(counterexample)}")
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_product(args) -> int:
    datas = [_load_json(a) for a in args.operands]
    if args.family is None and args.style is None and all(isinstance(d, dict) and "family" not in d for d in datas):
        elements = [_module_element(d) for d in datas]
    else:
        elements = [_family_element(d, args.family, args.style) for d in datas]
    result = elements[0]
    for e in elements[1:]:
        result = result * e
    _emit(result, args.json)
    return EXIT_OK


def cmd_coproduct(args) -> int:
    data = _load_json(args.operand)
    if args.family is None and args.style is None and isinstance(data, dict) and "family" not in data:
        a = _module_element(data)
        if a.basis == "F":
            result = alg.f_coproduct(a)
        elif a.basis == "E":
            result = alg.bar_coproduct(a, reduced=args.reduced)
        else:
            raise UsageError("coproducts are available in the F basis and, as the cut coproduct, in E")
    else:
        if args.reduced:
            raise UsageError("--reduced applies to E-basis module elements only")
        result = fa.coproduct(_family_element(data, args.family, args.style))
    _emit(result, args.json)
    return EXIT_OK


def _emit(result, as_json: bool) -> None:
    if as_json:
        print(_dump(result.to_json()))
    else:
        _print_terms(result)


def cmd_project(args) -> int:
    sources = [s for s in (args.relation, args.permutation, args.partition) if s is not None]
    if len(sources) != 1:
        raise UsageError("give exactly one of RELATION, --permutation, --partition")
    if args.permutation is not None:
        p = fam.from_permutation(fam.parse_permutation(args.permutation))
    elif args.partition is not None:
        p = fam.from_ordered_partition(fam.parse_ordered_partition(args.partition))
    else:
        p = rel.IntegerRelation.from_json(_load_json(args.relation))
    image = proj.project(args.map, p)
    if args.json:
        print(_dump({"map": proj.map_name(args.map), "input": p.to_json(), "image": image.to_json()}))
    else:
        print(image.label())
    return EXIT_OK


def _dot_label(r: rel.IntegerRelation) -> str:
    return _dump(r.pairs()).replace("(", "[").replace(")", "]")


def _induced_covers(nodes: list) -> list:
    """Cover pairs (i, j) of the weak order restricted to nodes, via boolean matrices."""
    if not nodes or nodes[0].n < 2:
        return []
    cells = _cells(nodes[0].n)
    bits = np.array([[p in r for p in cells] for r in nodes], dtype=bool)
    up = np.array([u < v for u, v in cells])
    inc, dec = bits[:, up], bits[:, ~up]
    # le[i, j]: inc_j ⊆ inc_i and dec_i ⊆ dec_j
    inc_ok = ~np.any(inc[None, :, :] & ~inc[:, None, :], axis=2)
    dec_ok = ~np.any(dec[:, None, :] & ~dec[None, :, :], axis=2)
    less = inc_ok & dec_ok
    np.fill_diagonal(less, False)
    lf = less.astype(np.float64)
    cover = less & ~((lf @ lf) > 0)
    return [tuple(map(int, ij)) for ij in np.argwhere(cover)]


def _cells(n):
    return [(u + 1, v + 1) for u, v in rel.off_diagonal(n)]


def dot_text(title: str, nodes: list, edges: list) -> str:
    lines = [f'digraph "{title}" {{', "  rankdir=BT;"]
    for i, r in enumerate(nodes):
        lines.append(f'  n{i} [label="{_dot_label(r)}"];')
    for i, j in edges:
        lines.append(f"  n{i} -> n{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def cmd_export_dot(args) -> int:
    n = args.n
    if n < 0:
        raise UsageError("size must be non-negative")
    if args.object == "tamari":
        if args.family is not None:
            raise UsageError("--family applies to weak-order only")
        tag = FamilyTag.TOEP
    else:
        tag = fam.family(args.family) if args.family else FamilyTag.IRel
    if tag is FamilyTag.IRel:
        if n > IREL_DOT_LIMIT:
            raise EnumerationLimitError(f"weak-order export of IRel_n is limited to n <= {IREL_DOT_LIMIT}")
        nodes = sorted(rel.all_relations(n))
        index = {r: i for i, r in enumerate(nodes)}
        edges = [(index[r], index[s]) for r in nodes for s in rel.weak_covers(r)]
    else:
        if n > FAMILY_DOT_LIMIT:
            raise EnumerationLimitError(f"family export is limited to n <= {FAMILY_DOT_LIMIT}")
        nodes = sorted(fam.family_members(n, tag))
        if len(nodes) > DOT_NODE_LIMIT:
            raise EnumerationLimitError(
                f"{tag.value}_{n} has {len(nodes)} members, above the export cap of {DOT_NODE_LIMIT}"
            )
        edges = _induced_covers(nodes)
    title = f"tamari_{n}" if args.object == "tamari" else f"weak_order_{tag.value}_{n}"
    text = dot_text(title, nodes, sorted(edges))
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# --- parser ----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="intrel", description="Integer relations, posets and their Hopf algebras.")
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    parser.add_argument("--enum-limit", type=int, default=None,
                        help=f"largest size to enumerate exhaustively (also {ENV_VAR})")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, fn):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
        p.set_defaults(func=fn)
        return p

    p = add("count", "count relations, indecomposables, posets or family members for sizes 1..N", cmd_count)
    p.add_argument("what", choices=("relations", "indecomposables", "posets", "family"))
    p.add_argument("args", nargs="+", metavar="ARG", help="N, or TAG N for 'family'")
    p.add_argument("--over", action="store_true", help="count over-indecomposables instead")
    p.add_argument("--mode", choices=("filter", "construct"), default="construct",
                   help="how family members are enumerated")

    p = add("verify", "run an exhaustive verification suite", cmd_verify)
    p.add_argument("suite", choices=SUITES + ("all",))
    p.add_argument("n_max", nargs="?", type=int, default=None)
    p.add_argument("--n-max", dest="n_max_flag", type=int, default=None)
    p.add_argument("--jobs", type=int, default=1)

    for name, fn in (("product", cmd_product), ("coproduct", cmd_coproduct)):
        p = add(name, f"{name} of elements given as JSON (inline, file path, or -)", fn)
        p.add_argument("--family", default=None, help="family tag, or fiber-sum algebra name")
        p.add_argument("--style", choices=("quotient", "fiber-sum"), default=None)
        if name == "product":
            p.add_argument("operands", nargs="+", metavar="ELEMENT")
        else:
            p.add_argument("operand", metavar="ELEMENT")
            p.add_argument("--reduced", action="store_true", help="reduced cut coproduct on the E basis")

    p = add("project", "apply a deletion map to a poset", cmd_project)
    p.add_argument("--map", required=True, help=", ".join(sorted(proj.MAPS)))
    p.add_argument("relation", nargs="?", default=None, metavar="RELATION")
    p.add_argument("--permutation", default=None, help="e.g. 2751346")
    p.add_argument("--partition", default=None, help="e.g. '125|37|46'")

    p = add("export-dot", "Hasse diagram of the weak order in DOT", cmd_export_dot)
    p.add_argument("object", choices=("weak-order", "tamari"))
    p.add_argument("n", type=int)
    p.add_argument("--family", default=None)
    p.add_argument("-o", "--output", default=None)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    if args.enum_limit is not None:
        set_enumeration_limit(args.enum_limit)
    try:
        return args.func(args)
    except fa.TamariQuotientRefused as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except fa.ClosureViolation as exc:
        print(f"closure violation: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (UsageError, EnumerationLimitError, rel.RelationError, fam.FamilyError,
            alg.AlgebraError, proj.ProjectionError, alg.CoefficientOverflow) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        if args.enum_limit is not None:
            set_enumeration_limit(None)


if __name__ == "__main__":
    sys.exit(main())
