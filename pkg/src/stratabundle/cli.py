"""Command-line surface binding every operation to the JSON documents.

Exit codes: 0 success, 1 validation failure, 2 precondition refused,
3 unreadable or malformed document.  Every command writes its output
atomically and prints a one-line summary to stderr; reports and documents
go to the path given with ``-o`` or to stdout.
"""
from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from . import cellbase, corpus, fincat, funcspace, jsonio, oracle, strabundle, triviality
from .validation import DocumentError, PreconditionError, StructureError

OK, INVALID, REFUSED, UNREADABLE = 0, 1, 2, 3


def _emit(doc, out: str | None) -> None:
    if out:
        jsonio.write_doc(out, doc)
    else:
        sys.stdout.write(jsonio.canon_dumps(doc))


def _say(msg: str) -> None:
    sys.stderr.write(msg + "\n")


def _load_bundle(path: str) -> strabundle.StratBundle:
    return jsonio.bundle_from_doc(jsonio.read_doc(path))


def _require_valid_bundle(x: strabundle.StratBundle):
    rep = strabundle.validate_bundle(x)
    rep.merge(fincat.validate_category(x.cat))
    rep.merge(fincat.validate_fibre_functor(x.cat, x.ff))
    return rep


def cmd_validate(args) -> int:
    doc = jsonio.read_doc(args.document)
    kind = args.kind or jsonio.detect_kind(doc)
    if kind == "category":
        cat, ff = jsonio.category_from_doc(doc)
        rep = fincat.validate_category(cat)
        rep.merge(fincat.validate_fibre_functor(cat, ff))
    elif kind == "complex":
        b, s = jsonio.complex_from_doc(doc)
        rep = cellbase.validate_complex(b, s)
    elif kind == "bundle":
        rep = _require_valid_bundle(jsonio.bundle_from_doc(doc))
    elif kind == "diagram":
        rep = funcspace.validate_diagram(jsonio.diagram_from_doc(doc))
    else:
        raise DocumentError(f"cannot validate a document of kind {kind!r}")
    _emit(rep.to_doc(), args.out)
    _say(str(rep))
    return OK if rep.ok else INVALID


def cmd_attach(args) -> int:
    y = _load_bundle(args.bundle)
    m, a_cells, h = jsonio.attachment_from_doc(jsonio.read_doc(args.attachment), y)
    res = strabundle.attach_bundle(y, m, a_cells, h)
    _emit(jsonio.bundle_to_doc(res.bundle), args.out)
    _say(f"attached {len(res.new_cells)} new cell(s)")
    return OK


def cmd_pullback(args) -> int:
    x = _load_bundle(args.bundle)
    fbar, w_strat = jsonio.map_from_doc(jsonio.read_doc(args.map), x.base)
    res = strabundle.pullback(x, fbar, w_strat)
    _emit(jsonio.bundle_to_doc(res.bundle), args.out)
    _say(f"pulled back over {len(fbar.source.cells)} cell(s)")
    return OK


def cmd_restrict(args) -> int:
    x = _load_bundle(args.bundle)
    if args.star:
        region = cellbase.star_cells(x.base, args.star)
    else:
        region = set(args.cells.split(","))
    sub = strabundle.restrict(x, region)
    _emit(jsonio.bundle_to_doc(sub), args.out)
    _say(f"restricted to {len(sub.base.cells)} cell(s)")
    return OK


def cmd_product(args) -> int:
    x = _load_bundle(args.bundle)
    x2 = _load_bundle(args.other)
    res = strabundle.fiberwise_product(x, x2)
    _emit(jsonio.bundle_to_doc(res.bundle), args.out)
    _say("fibrewise product built")
    return OK


def cmd_fnspace(args) -> int:
    x = _load_bundle(args.bundle)
    fb = funcspace.function_bundle(x, args.object)
    _emit(jsonio.bundle_to_doc(fb.bundle), args.out)
    _say(f"function bundle at {args.object}")
    return OK


def cmd_principal(args) -> int:
    x = _load_bundle(args.bundle)
    d = funcspace.principal_diagram(x)
    _emit(jsonio.diagram_to_doc(d), args.out)
    _say(f"principal diagram with {len(d.components)} component(s)")
    return OK


def cmd_coend(args) -> int:
    d = jsonio.diagram_from_doc(jsonio.read_doc(args.diagram))
    rep = funcspace.validate_diagram(d)
    if not rep.ok:
        _emit(rep.to_doc(), args.out)
        _say(str(rep))
        return INVALID
    if not args.category:
        raise PreconditionError(
            "coend needs a fibre functor: pass a category document with --category"
        )
    _, ff = jsonio.category_from_doc(jsonio.read_doc(args.category))
    res = funcspace.coend(d, ff)
    if not res.report.ok:
        _emit(res.report.to_doc(), args.out)
        _say(str(res.report))
        return INVALID
    _emit(jsonio.bundle_to_doc(res.bundle), args.out)
    _say("coend computed")
    return OK


def cmd_reconstruct(args) -> int:
    x = _load_bundle(args.bundle)
    rep = _require_valid_bundle(x)
    if not rep.ok:
        _emit(rep.to_doc(), args.out)
        _say(str(rep))
        return INVALID
    res = funcspace.reconstruct_check(x)
    if not res.ok:
        _emit(res.coend.report.to_doc(), args.out)
        _say("reconstruction failed")
        return INVALID
    _emit(res.iso_doc(), args.out)
    _say("reconstruction verified; iso written")
    return OK


def cmd_associate(args) -> int:
    x = _load_bundle(args.bundle)
    phi, gg = jsonio.functor_from_doc(jsonio.read_doc(args.functor), x.cat)
    res = funcspace.associated_bundle(x, phi, gg)
    _emit(jsonio.bundle_to_doc(res.bundle), args.out)
    _say("associated bundle built")
    return OK


def cmd_trivialize(args) -> int:
    x = _load_bundle(args.bundle)
    if args.star:
        region = cellbase.star_cells(x.base, args.star)
    elif args.region:
        region = set(args.region.split(","))
    else:
        region = set(x.base.cells)
    res = triviality.trivialize_over(x, region)
    if res.ok:
        t = res.trivialization
        doc = {
            "kind": "trivialization",
            "region": list(t.region),
            "object": t.object,
            "charts": dict(sorted(t.charts.items())),
        }
        _say("trivialization found")
    else:
        o = res.obstruction
        doc = {
            "kind": "obstruction",
            "loop": list(o.loop),
            "holonomy": o.holonomy,
            "detail": o.detail,
        }
        _say("obstructed: " + o.detail)
    _emit(doc, args.out)
    return OK


def cmd_certify(args) -> int:
    x = _load_bundle(args.bundle)
    cert = triviality.local_triviality_certificate(x)
    _emit(cert.to_doc(), args.out)
    _say(f"atlas with {len(cert.stars)} star trivialization(s)")
    return OK


def cmd_cover(args) -> int:
    x = _load_bundle(args.bundle)
    cert = triviality.covering_space(x)
    doc = cert.to_doc()
    if args.dot:
        Path(args.dot).write_text(jsonio.total_to_dot(cert.total), encoding="utf-8")
    doc["total"] = jsonio.total_to_doc(cert.total)
    _emit(doc, args.out)
    sheets = ", ".join(f"{c}: {n}" for c, n in sorted(cert.sheets.items()))
    _say(f"covering with {cert.components} component(s); sheets {{{sheets}}}")
    return OK


def cmd_stratify(args) -> int:
    x = _load_bundle(args.bundle)
    strat = jsonio.strat_from_doc(jsonio.read_doc(args.stratification))
    res = triviality.stratify_bundle(x, strat)
    _emit(jsonio.bundle_to_doc(res.bundle), args.out)
    _say(f"stratified into {len(res.decomposition) + 1} stratum piece(s)")
    return OK


def cmd_verify(args) -> int:
    spec = oracle.InstanceSpec(
        seed=args.seed,
        max_cells=args.max_cells,
        max_objects=args.max_objects,
        max_fibre_size=args.max_fibre_size,
        groupoid_only=args.suite == "bundle",
        strata_depth=args.strata_depth,
    )
    names = list(oracle.SUITES) if args.suite == "all" else [args.suite]
    failures = 0
    docs = {}
    for name in names:
        rep = oracle.run_suite(name, spec, args.seeds)
        docs[name] = rep.to_doc()
        failures += len(rep.failures) + len(rep.invalid_inputs)
        _say(
            f"{name}: {rep.passes}/{rep.instances} pass, "
            f"{len(rep.failures)} theorem violation(s), "
            f"{len(rep.invalid_inputs)} invalid input(s), "
            f"{rep.elapsed:.2f}s"
        )
    out_doc = docs[names[0]] if len(names) == 1 else {"suites": docs}
    _emit(out_doc, args.out)
    return OK if failures == 0 else INVALID


def cmd_example(args) -> int:
    if args.list:
        for name in corpus.example_names():
            sys.stdout.write(name + "\n")
        return OK
    if not args.name:
        raise DocumentError("give an example name or --list")
    _emit(corpus.example_doc(args.name), args.out)
    return OK


def cmd_total(args) -> int:
    x = _load_bundle(args.bundle)
    total = strabundle.realize_total(x)
    if args.dot:
        sys.stdout.write(jsonio.total_to_dot(total))
        return OK
    _emit(jsonio.total_to_doc(total), args.out)
    return OK


def cmd_manifest(args) -> int:
    directory = Path(args.directory)
    if args.check:
        problems = jsonio.check_manifest(directory)
        for p in problems:
            _say(p)
        return OK if not problems else INVALID
    manifest = jsonio.build_manifest(directory)
    jsonio.write_doc(directory / "manifest.json", manifest)
    _say(f"manifest covers {len(manifest['documents'])} document(s)")
    return OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stratabundle",
        description="stratified bundles of finite fibres: build, transform, verify",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, configure):
        p = sub.add_parser(name)
        p.add_argument("-o", "--out", help="output path (stdout otherwise)")
        configure(p)
        p.set_defaults(fn=fn)

    add("validate", cmd_validate, lambda p: (
        p.add_argument("document"),
        p.add_argument("--kind", choices=["category", "complex", "bundle", "diagram"]),
    ))
    add("attach", cmd_attach, lambda p: (
        p.add_argument("bundle"),
        p.add_argument("attachment"),
    ))
    add("pullback", cmd_pullback, lambda p: (
        p.add_argument("bundle"),
        p.add_argument("map"),
    ))
    add("restrict", cmd_restrict, lambda p: (
        p.add_argument("bundle"),
        p.add_argument("--cells", help="comma-separated face-closed cell set"),
        p.add_argument("--star", help="restrict to the closed star of this cell"),
    ))
    add("product", cmd_product, lambda p: (
        p.add_argument("bundle"),
        p.add_argument("other"),
    ))
    add("fnspace", cmd_fnspace, lambda p: (
        p.add_argument("bundle"),
        p.add_argument("-V", "--object", required=True),
    ))
    add("principal", cmd_principal, lambda p: p.add_argument("bundle"))
    add("coend", cmd_coend, lambda p: (
        p.add_argument("diagram"),
        p.add_argument("--category", help="category document supplying the fibre functor"),
    ))
    add("reconstruct", cmd_reconstruct, lambda p: p.add_argument("bundle"))
    add("associate", cmd_associate, lambda p: (
        p.add_argument("bundle"),
        p.add_argument("functor"),
    ))
    add("trivialize", cmd_trivialize, lambda p: (
        p.add_argument("bundle"),
        p.add_argument("--region", help="comma-separated cells"),
        p.add_argument("--star", help="trivialize over the closed star of this cell"),
    ))
    add("certify", cmd_certify, lambda p: p.add_argument("bundle"))
    add("cover", cmd_cover, lambda p: (
        p.add_argument("bundle"),
        p.add_argument("--dot", help="also write a dot-format graph here"),
    ))
    add("stratify", cmd_stratify, lambda p: (
        p.add_argument("bundle"),
        p.add_argument("stratification"),
    ))
    add("verify", cmd_verify, lambda p: (
        p.add_argument("--suite", default="all", choices=list(oracle.SUITES) + ["all"]),
        p.add_argument("--seeds", type=int, default=100),
        p.add_argument("--seed", type=int, default=1),
        p.add_argument("--max-cells", type=int, default=30),
        p.add_argument("--max-objects", type=int, default=3),
        p.add_argument("--max-fibre-size", type=int, default=4),
        p.add_argument("--strata-depth", type=int, default=3),
    ))
    add("example", cmd_example, lambda p: (
        p.add_argument("name", nargs="?"),
        p.add_argument("--list", action="store_true"),
    ))
    add("total", cmd_total, lambda p: (
        p.add_argument("bundle"),
        p.add_argument("--dot", action="store_true"),
    ))
    add("manifest", cmd_manifest, lambda p: (
        p.add_argument("directory"),
        p.add_argument("--check", action="store_true"),
    ))
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        code = args.fn(args)
    except DocumentError as exc:
        _say(f"document error: {exc}")
        return UNREADABLE
    except PreconditionError as exc:
        _say(f"refused: {exc}")
        return REFUSED
    except StructureError as exc:
        _say(f"invalid: {exc}")
        return INVALID
    except OSError as exc:
        _say(f"i/o error: {exc}")
        return UNREADABLE
    _say(f"done in {time.perf_counter() - start:.3f}s")
    return code


def entry() -> None:
    sys.exit(main())
