"""Command-line front end.

Every command prints one JSON document on stdout; diagnostics go to stderr.
Exit codes: 0 success, 1 verification failed, 2 invalid input, 3 unsupported
case (self-folded segment, redundant states, forbidden flip).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import catalog
from .algebra import LatticeMismatch, LatticeVec, QTorusElement, SkewLattice
from .catalog import CatalogEntry, UnknownEntry
from .loops import InvalidLoop, LoopPosition, UnsupportedSegment, require_valid_loop, total_intersection
from .mutation import CALIBRATED, LITERAL, theta_apply, verify_flip_naturality
from .qtrace import RedundantStates, UnsupportedClosedForm, format_state, trace, trace_closed_form, trace_with_states
from .surface import InvalidTriangulation, Triangulation, UnsupportedFlip, exchange_matrix, flip, mutate_exchange, validate
from .teschner import (
    TeschnerWitness,
    TripleWitness,
    solve_witness,
    strongly_commute,
    verify_strong_triple,
    verify_weak_triple,
)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INVALID = 2
EXIT_UNSUPPORTED = 3

CONVENTIONS = {"calibrated": CALIBRATED, "literal": LITERAL}


class InputError(ValueError):
    pass


def _emit(obj, pretty: bool = False) -> None:
    sys.stdout.write(json.dumps(obj, indent=2 if pretty else None) + "\n")


def _fail(kind: str, message: str, diagnostics=None) -> None:
    err: dict = {"error": kind, "message": message}
    if diagnostics:
        err["diagnostics"] = [d.to_json() for d in diagnostics]
    sys.stderr.write(json.dumps(err) + "\n")


def _threads() -> int | None:
    # Accepted as a cap; every computation here runs serially, so any cap is honoured.
    raw = os.environ.get("QTM_THREADS")
    if raw is None or raw == "":
        return None
    try:
        n = int(raw)
    except ValueError:
        raise InputError(f"QTM_THREADS must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise InputError(f"QTM_THREADS must be a positive integer, got {raw!r}")
    return n


# ---------------------------------------------------------------- input resolution


class Context:
    """The triangulation a command works on, and the catalog entry it came from."""

    def __init__(self, surface: Triangulation, entry: CatalogEntry | None, label: str):
        self.surface = surface
        self.entry = entry
        self.label = label
        self._lattice: SkewLattice | None = None

    @property
    def lattice(self) -> SkewLattice:
        if self._lattice is None:
            self._lattice = exchange_matrix(self.surface)
        return self._lattice

    def loop(self, ref: str) -> LoopPosition:
        """A loop by catalog name, or from a loop JSON file."""
        if self.entry is not None and ref in self.entry.loops:
            return self.entry.loops[ref]
        p = Path(ref)
        if p.is_file():
            lp, _ = LoopPosition.load(p)
            return require_valid_loop(self.surface, lp)
        if self.entry is not None:
            raise InputError(f"{ref!r} is neither a loop of {self.entry.name!r} {sorted(self.entry.loops)} nor a file")
        raise InputError(f"loop file {ref!r} not found")


def _surface_from_ref(ref: str, base: Path | None = None) -> Context:
    """``ref`` is a catalog name or a path (relative to ``base`` if given)."""
    if ref in catalog.names() or _looks_like_catalog(ref):
        try:
            e = catalog.get(ref)
            return Context(e.surface, e, e.name)
        except UnknownEntry:
            pass
    p = Path(ref)
    if not p.is_absolute() and base is not None and not p.is_file():
        p = base / p
    if not p.is_file():
        raise InputError(f"surface {ref!r} is neither a catalog entry nor a file")
    return Context(Triangulation.load(p), None, str(p))


def _looks_like_catalog(ref: str) -> bool:
    return "/" not in ref and not ref.endswith(".json")


def _context(args, need_loop_surface: bool = False) -> Context:
    if getattr(args, "catalog", None):
        e = catalog.get(args.catalog)
        return Context(e.surface, e, e.name)
    if getattr(args, "surface", None):
        return _surface_from_ref(args.surface)
    if need_loop_surface and getattr(args, "loop", None):
        # fall back on the loop file's own surface reference
        p = Path(args.loop)
        if not p.is_file():
            raise InputError(f"loop file {args.loop!r} not found")
        _, ref = LoopPosition.load(p)
        if not ref:
            raise InputError("loop file has no 'surface' field; pass --surface or --catalog")
        return _surface_from_ref(ref, base=p.parent)
    raise InputError("pass --catalog NAME or --surface FILE")


def _vec(text: str | None, lattice: SkewLattice, flag: str) -> LatticeVec:
    if text is None:
        raise InputError(f"{flag} is required")
    v = LatticeVec.parse(text)
    lattice.check(v)
    return v


def _names(text: str, n: int, flag: str) -> list[str]:
    parts = [x.strip() for x in text.split(",")]
    if len(parts) != n or not all(parts):
        raise InputError(f"{flag} expects {n} comma-separated entries, got {text!r}")
    return parts


def _load_trace(path: str, lattice: SkewLattice) -> QTorusElement:
    with open(path) as fh:
        data = json.load(fh)
    if isinstance(data, dict):
        if "terms" not in data:
            raise InputError(f"{path}: expected a term list or an object with 'terms'")
        data = data["terms"]
    el = QTorusElement.from_json(lattice, data)
    for v in el.support():
        lattice.check(v)
    return el


# ---------------------------------------------------------------- commands


def cmd_surface_validate(args) -> int:
    ctx = _context(args)
    diags = validate(ctx.surface)
    out = {"surface": ctx.label, "ok": not diags, "diagnostics": [d.to_json() for d in diags]}
    if not diags:
        out["arcs"] = list(ctx.surface.arcs)
        out["triangles"] = len(ctx.surface.triangles)
        out["exchange_matrix"] = ctx.lattice.to_json()
    _emit(out, args.pretty)
    return EXIT_OK if not diags else EXIT_FAILED


def cmd_trace(args) -> int:
    ctx = _context(args, need_loop_surface=True)
    if not args.loop:
        raise InputError("--loop is required")
    lp = ctx.loop(args.loop)
    res = trace_with_states(ctx.surface, lp, ctx.lattice)
    element = res.element
    if args.method == "closed-form":
        element = trace_closed_form(ctx.surface, lp, ctx.lattice)
    out: dict = {"surface": ctx.label, "loop": lp.name or args.loop, "terms": element.to_json(), "metadata": res.metadata()}
    out["metadata"]["method"] = args.method
    if args.states:
        out["states"] = [format_state(j) for j in res.states]
    if args.pretty:
        out["pretty"] = repr(element)
    _emit(out, args.pretty)
    return EXIT_OK


def _flip_traces(args, ctx: Context, k: str) -> tuple[QTorusElement, QTorusElement, SkewLattice]:
    eps = ctx.lattice
    eps_after = mutate_exchange(eps, k)
    if args.trace_before and args.trace_after:
        return _load_trace(args.trace_before, eps), _load_trace(args.trace_after, eps_after), eps_after
    if ctx.entry is None or not args.loop:
        raise InputError("pass --trace-before and --trace-after, or --catalog with --loop")
    info = ctx.entry.expected.get("flip")
    if not info or info["arc"] != k:
        raise InputError(f"catalog entry {ctx.entry.name!r} has no flip partner at arc {k!r}")
    partner = catalog.get(info["partner"])
    before = trace(ctx.surface, ctx.entry.loop(args.loop), eps)
    after = trace(partner.surface, partner.loop(args.loop), eps_after)
    return before, after, eps_after


def cmd_flip_verify(args) -> int:
    ctx = _context(args)
    k = args.arc
    if k not in ctx.lattice:
        raise InputError(f"unknown arc {k!r}")
    conv = CONVENTIONS[args.convention]
    before, after, eps_after = _flip_traces(args, ctx, k)
    ok = verify_flip_naturality(before, after, ctx.lattice, k, conv)
    image = theta_apply(ctx.lattice, k, after, conv)
    out = {
        "surface": ctx.label,
        "arc": k,
        "convention": args.convention,
        "natural": ok,
        "denominator_degree": image.M,
        "exchange_matrix_consistent": exchange_matrix(flip(ctx.surface, k)) == eps_after,
    }
    _emit(out, args.pretty)
    return EXIT_OK if ok else EXIT_FAILED


def _triple(args, ctx: Context):
    names = _names(args.triple, 3, "--triple")
    loops = [ctx.loop(n) for n in names]
    traces = [trace(ctx.surface, lp, ctx.lattice) for lp in loops]
    if args.v_gamma:
        vg = _vec(args.v_gamma, ctx.lattice, "--v-gamma")
    else:
        vg = total_intersection(ctx.surface, loops[0])
    return names, traces, vg


def _catalog_spec(ctx: Context, names: list[str]):
    if ctx.entry is None:
        return None
    for spec in ctx.entry.triples():
        if list(spec.loops) == names:
            return spec
    return None


def cmd_teschner_verify(args) -> int:
    ctx = _context(args)
    names, (f, f1, f2), vg = _triple(args, ctx)
    spec = _catalog_spec(ctx, names)
    if args.v1 is None and args.v2 is None and spec is not None:
        v1, v2 = spec.v1, spec.v2
    else:
        v1, v2 = _vec(args.v1, ctx.lattice, "--v1"), _vec(args.v2, ctx.lattice, "--v2")
    w = TeschnerWitness.from_vectors(ctx.lattice, v1, v2, vg)
    tr5 = None
    if args.tr5:
        tnames = _names(args.tr5, 3, "--tr5")
        tl = [ctx.loop(n) for n in tnames]
        tt = [trace(ctx.surface, lp, ctx.lattice) for lp in tl]
        tspec = _catalog_spec(ctx, tnames)
        if args.tr5_v1 is None and args.tr5_v2 is None and tspec is not None:
            u1, u2 = tspec.v1, tspec.v2
        else:
            u1, u2 = _vec(args.tr5_v1, ctx.lattice, "--tr5-v1"), _vec(args.tr5_v2, ctx.lattice, "--tr5-v2")
        tw = TeschnerWitness.from_vectors(ctx.lattice, u1, u2, total_intersection(ctx.surface, tl[0]))
        tr5 = TripleWitness(tt[0], tt[1], tt[2], tw)
        report = verify_weak_triple(ctx.lattice, f, f1, f2, w, tr5)
        ok = report.weak
    else:
        report = verify_strong_triple(ctx.lattice, f, f1, f2, w)
        ok = report.strong
    out = report.to_json()
    out["strong"] = report.strong
    out["weak"] = report.weak
    out["witness"] = w.to_json()
    _emit(out, args.pretty)
    return EXIT_OK if ok else EXIT_FAILED


def cmd_teschner_solve(args) -> int:
    ctx = _context(args)
    _, (f, f1, f2), vg = _triple(args, ctx)
    found = solve_witness(ctx.lattice, f, f1, f2, vg)
    reports = [verify_strong_triple(ctx.lattice, f, f1, f2, w) for w in found]
    out = {
        "count": len(found),
        "witnesses": [dict(w.to_json(), TR4=r.TR4, pairing_v1_v2=r.pairing_v1_v2) for w, r in zip(found, reports)],
    }
    _emit(out, args.pretty)
    return EXIT_OK


def cmd_commute_check(args) -> int:
    ctx = _context(args)
    if args.traces:
        a, b = (_load_trace(p, ctx.lattice) for p in _names(args.traces, 2, "--traces"))
    elif args.loops:
        a, b = (trace(ctx.surface, ctx.loop(n), ctx.lattice) for n in _names(args.loops, 2, "--loops"))
    else:
        raise InputError("pass --loops A,B or --traces F1,F2")
    res = strongly_commute(ctx.lattice, a, b)
    _emit(res.to_json(), args.pretty)
    return EXIT_OK if res.verified else EXIT_FAILED


def cmd_catalog(args) -> int:
    if args.action == "list":
        _emit(catalog.names(), args.pretty)
        return EXIT_OK
    if not args.name:
        raise InputError("catalog get needs an entry name")
    e = catalog.get(args.name)
    if args.emit:
        what = args.emit[0]
        if what == "surface" and len(args.emit) == 1:
            _emit(e.surface.to_json(), args.pretty)
            return EXIT_OK
        if what == "loop" and len(args.emit) == 2:
            _emit(e.loop(args.emit[1]).to_json(surface=e.name), args.pretty)
            return EXIT_OK
        raise InputError("--emit takes 'surface' or 'loop NAME'")
    out = {
        "name": e.name,
        "arcs": list(e.surface.arcs),
        "boundary_arcs": sorted(e.surface.boundary_arcs),
        "triangles": len(e.surface.triangles),
        "loops": {n: len(lp) for n, lp in e.loops.items()},
        "triples": [s.to_json() for s in e.triples()],
    }
    if e.notes:
        out["notes"] = e.notes
    _emit(out, args.pretty)
    return EXIT_OK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qtm", description="Quantized trace-of-monodromy computations.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, loop_flag=False):
        sp.add_argument("--catalog", metavar="NAME", help="catalog entry to work on")
        sp.add_argument("--surface", metavar="FILE", help="surface JSON file (or catalog name)")
        sp.add_argument("--pretty", action="store_true", help="indented output")
        if loop_flag:
            sp.add_argument("--loop", metavar="LOOP", help="loop name in the catalog entry, or loop JSON file")

    sp = sub.add_parser("surface-validate", help="check a triangulation")
    common(sp)
    sp.set_defaults(func=cmd_surface_validate)

    sp = sub.add_parser("trace", help="quantized trace of a loop")
    common(sp, loop_flag=True)
    sp.add_argument("--method", choices=("state-sum", "closed-form"), default="state-sum")
    sp.add_argument("--states", action="store_true", help="also list the admissible states")
    sp.set_defaults(func=cmd_trace)

    sp = sub.add_parser("flip-verify", help="flip naturality of a trace")
    common(sp, loop_flag=True)
    sp.add_argument("--arc", required=True, metavar="K")
    sp.add_argument("--trace-before", metavar="FILE", help="trace on the given triangulation")
    sp.add_argument("--trace-after", metavar="FILE", help="trace on the triangulation flipped at K")
    sp.add_argument("--convention", choices=sorted(CONVENTIONS), default="calibrated")
    sp.set_defaults(func=cmd_flip_verify)

    for name, func, help_ in (
        ("teschner-verify", cmd_teschner_verify, "verify a strong or weak Teschner triple"),
        ("teschner-solve", cmd_teschner_solve, "search for Teschner witness vectors"),
    ):
        sp = sub.add_parser(name, help=help_)
        common(sp)
        sp.add_argument("--triple", required=True, metavar="G,G1,G2")
        sp.add_argument("--v-gamma", metavar="VEC", help="defaults to the total intersection of G")
        if name == "teschner-verify":
            sp.add_argument("--v1", metavar="VEC", help='comma list "arc:coeff"')
            sp.add_argument("--v2", metavar="VEC")
            sp.add_argument("--tr5", metavar="H,H1,H2", help="strong triple certifying TR5 (weak check)")
            sp.add_argument("--tr5-v1", metavar="VEC")
            sp.add_argument("--tr5-v2", metavar="VEC")
        sp.set_defaults(func=func)

    sp = sub.add_parser("commute-check", help="algebraic strong commutativity of two traces")
    common(sp)
    sp.add_argument("--loops", metavar="A,B")
    sp.add_argument("--traces", metavar="F1,F2", help="trace JSON files")
    sp.set_defaults(func=cmd_commute_check)

    sp = sub.add_parser("catalog", help="list or emit built-in entries")
    sp.add_argument("action", choices=("list", "get"))
    sp.add_argument("name", nargs="?")
    sp.add_argument("--emit", nargs="+", metavar="WHAT", help="'surface' or 'loop NAME'")
    sp.add_argument("--pretty", action="store_true")
    sp.set_defaults(func=cmd_catalog)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_INVALID
    try:
        _threads()
        return args.func(args)
    except (UnsupportedSegment, UnsupportedFlip, RedundantStates, UnsupportedClosedForm) as exc:
        _fail(type(exc).__name__, str(exc), getattr(exc, "diagnostics", None))
        return EXIT_UNSUPPORTED
    except (InvalidTriangulation, InvalidLoop) as exc:
        _fail(type(exc).__name__, str(exc), exc.diagnostics)
        return EXIT_INVALID
    except (InputError, UnknownEntry, LatticeMismatch, KeyError, ValueError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
        _fail(type(exc).__name__, str(msg))
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
