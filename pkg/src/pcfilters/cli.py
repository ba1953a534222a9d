"""Command-line front end: ``pcfilters COMMAND FILE [options]``.

Exit status is 0 for a positive verdict, 1 for a negative one and 2 for
errors.  Reports are plain ``key: value`` text in a fixed key order.
"""

from __future__ import annotations

import argparse
import sys

from . import fspec
from .closure import FixpointCapExceeded, Prefilter, PrefilterInvalid, close, insert_subgroup
from .faithful import (
    faithful_obstructions, is_faithful_filter, is_faithful_genset, is_filtered,
    is_fully_faithful, is_weakly_filtered, pi_map,
)
from .filters import CapExceeded, boundary, is_distributive, lattice_closure, validate_filter
from .inertia import InertiaPersists, NotNilpotent, NotProgressive, b_sequence, refresh_all
from .lattice_table import MissingEntry
from .lie import associated_lie
from .monoid import MonoidError

COMMANDS = ("validate", "boundary", "close", "insert", "lie", "inert", "refresh",
            "faithful", "bijection", "hasse")


class Report:
    """Ordered ``key: value`` lines; lists become indented blocks."""

    def __init__(self):
        self.items = []

    def add(self, key, value):
        self.items.append((key, value))

    def render(self) -> str:
        out = []
        for k, v in self.items:
            if isinstance(v, list):
                out.append(f"{k}:")
                out.extend(f"  {x}" for x in v)
            elif isinstance(v, bool):
                out.append(f"{k}: {'true' if v else 'false'}")
            else:
                out.append(f"{k}: {v}")
        return "\n".join(out) + "\n"


def _rows(f) -> list:
    return [f"{s}: {lab}" for s, lab in f.table()]


def _need(doc, attr, what):
    if attr == "filter" and doc.filter is None and doc.prefilter is not None:
        doc.filter = close(Prefilter(doc.monoid, doc.backend, doc.prefilter), doc.class_hint)
    val = getattr(doc, attr)
    if val is None:
        raise fspec.FspecSyntaxError(f"this command needs a [{what}] section")
    return val


def _header(rep, doc, command):
    rep.add("command", command)
    rep.add("source", doc.source)
    rep.add("monoid", f"{doc.monoid.description} ({len(doc.monoid)} elements)")
    b = doc.backend
    if b.has_elements:
        rep.add("group", f"pc presentation, order {b.order(b.top())}")
    else:
        rep.add("group", f"subgroup table, {len(b.table.nodes)} nodes")


def cmd_validate(doc, args, rep):
    f = _need(doc, "filter", "filter")
    r = validate_filter(f)
    rep.add("valid", r.ok)
    if not r.ok:
        rep.add("violations", [str(v) for v in r.violations[:20]])
    rep.add("values", _rows(f))
    return r.ok


def cmd_boundary(doc, args, rep):
    f = _need(doc, "filter", "filter")
    d = boundary(f)
    ok = validate_filter(d).ok
    rep.add("boundary_valid", ok)
    rep.add("boundary", _rows(d))
    return ok


def cmd_close(doc, args, rep):
    pre = _need(doc, "prefilter", "prefilter")
    hint = args.class_hint if args.class_hint is not None else doc.class_hint
    f = close(Prefilter(doc.monoid, doc.backend, pre), hint)
    rep.add("valid", validate_filter(f).ok)
    rep.add("closure", _rows(f))
    if doc.backend.has_elements:
        rep.add("lie_order", associated_lie(f).total_order())
    return True


def _lattice(rep, f, cap):
    lat = lattice_closure(f, cap=cap)
    rep.add("lattice_nodes", len(lat))
    rep.add("lattice_edges", len(lat.edges))
    rep.add("nodes", [f"{lab} ({f.backend.order(x)})" for lab, x in zip(lat.labels(), lat.nodes)])
    rep.add("edges", [f"{lat.labels()[a]} > {lat.labels()[b]}" for a, b in lat.edges])
    return lat


def cmd_insert(doc, args, rep):
    f = _need(doc, "filter", "filter")
    ins = _need(doc, "insert", "insert")
    hint = args.class_hint if args.class_hint is not None else doc.class_hint
    g = insert_subgroup(f, ins["insertions"], ins["extension"], class_hint=hint)
    rep.add("valid", validate_filter(g).ok)
    rep.add("extended_monoid", f"{g.monoid.description} ({len(g.monoid)} elements)")
    lat = _lattice(rep, g, args.cap)
    _write_dot(args, lat)
    return True


def cmd_lie(doc, args, rep):
    f = _need(doc, "filter", "filter")
    L = associated_lie(f)
    rep.add("components", [f"{lab}: {inv}" for lab, inv in L.hilbert_data().items()])
    rep.add("order", L.total_order())
    rep.add("rank", L.rank())
    if not L.additive_only:
        pairs = sorted(L.constants.items())
        rep.add("brackets", [f"[b{a}, b{c}] = {list(v)}" for (a, c), v in pairs])
    else:
        rep.add("brackets", "not available for subgroup tables")
    return True


def cmd_inert(doc, args, rep):
    f = _need(doc, "filter", "filter")
    r = b_sequence(f)
    lab = f.backend.label
    rep.add("levels", [", ".join(lab(h) for h in lvl) for lvl in r.levels])
    rep.add("inert", [lab(h) for h in r.inert])
    rep.add("inert_free", r.inert_free)
    return r.inert_free


def cmd_refresh(doc, args, rep):
    f = _need(doc, "filter", "filter")
    g = refresh_all(f, free_model=args.free_model)
    rep.add("monoid_after", f"{g.monoid.description} ({len(g.monoid)} elements)")
    rep.add("inert", [g.backend.label(h) for h in b_sequence(g).inert])
    rep.add("lie_order", associated_lie(g).total_order())
    rep.add("values", _rows(g))
    rep.add("boundary", _rows(boundary(g)))
    return True


def cmd_faithful(doc, args, rep):
    f = _need(doc, "filter", "filter")
    ff = is_faithful_filter(f, cap=args.cap)
    full = is_fully_faithful(f, cap=args.cap)
    rep.add("faithful_filter", ff.ok)
    if not ff.ok:
        rep.add("faithful_filter_witness", str(ff.witness))
    rep.add("fully_faithful", full.ok)
    if not full.ok:
        rep.add("fully_faithful_reasons", [str(r) for r in full.witnesses])
    if doc.backend.has_elements:
        rep.add("obstructions", [f"{s}: {x} also at {', '.join(o)}" for s, x, o in faithful_obstructions(f)])
    verdict = full.ok
    if doc.genset is not None:
        w = is_weakly_filtered(doc.genset, f)
        fl = is_filtered(doc.genset, f, cap=args.cap)
        fg = is_faithful_genset(doc.genset, f)
        G = doc.backend.group
        rep.add("weakly_filtered", w.ok)
        if not w.ok:
            rep.add("weak_witness", w.witness)
        rep.add("filtered", fl.ok)
        if not fl.ok:
            x = fl.witness
            rep.add("filtered_witness", f"{x.kind} over {{{', '.join(x.labels)}}}")
            if x.kind == "join":
                rep.add("join_side", sorted(G.format(g) for g in x.lhs))
                rep.add("union_side", sorted(G.format(g) for g in x.rhs))
        rep.add("faithful_genset", fg.ok)
        if not fg.ok:
            rep.add("faithful_witness", [f"{x} at {', '.join(s)}" for x, s in fg.witnesses])
        verdict = fl.ok and fg.ok
    return verdict


def cmd_bijection(doc, args, rep):
    f = _need(doc, "filter", "filter")
    c = pi_map(f, cap=args.enum_cap)
    rep.add("basis_order", c.order)
    rep.add("lie_order", c.size_lie)
    rep.add("target_order", c.size_target)
    rep.add("surjective", c.surjective)
    rep.add("injective", c.injective)
    rep.add("bijective", c.bijective)
    rep.add("contains_pcgs", c.contains_pcgs)
    rep.add("lifts_are_pcgs", c.lifts_are_pcgs)
    rep.add("fully_faithful", c.fully_faithful)
    rep.add("inert_present", c.inert_present)
    return c.bijective


def _write_dot(args, lat):
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(lat.to_dot())


def cmd_hasse(doc, args, rep):
    f = _need(doc, "filter", "filter")
    lat = _lattice(rep, f, args.cap)
    rep.add("distributive", is_distributive(lat).ok)
    if args.dot:
        _write_dot(args, lat)
    else:
        rep.dot = lat.to_dot()
    return True


HANDLERS = {c: globals()[f"cmd_{c}"] for c in COMMANDS}

ERRORS = (fspec.FspecError, MonoidError, PrefilterInvalid, FixpointCapExceeded, CapExceeded,
          NotProgressive, NotNilpotent, InertiaPersists, MissingEntry, ValueError, OSError)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pcfilters", description="Filters of finite groups and their Lie rings.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("file", help="an .fspec file, or the name of a bundled example")
    p.add_argument("--report", help="write the report here instead of stdout")
    p.add_argument("--dot", help="write the lattice as DOT to this path")
    p.add_argument("--cap", type=int, default=16, help="cap on distinct filter values (default 16)")
    p.add_argument("--enum-cap", type=int, default=200_000, help="element enumeration cap")
    p.add_argument("--seed", type=int, default=0, help="seed for sampled checks")
    p.add_argument("--class-hint", type=int, default=None, help="stop closures at this length")
    p.add_argument("--free-model", action="store_true",
                   help="treat a truncated monoid as standing in for N^d during refresh")
    return p


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    rep = Report()
    rep.dot = None
    try:
        doc = fspec.load(args.file)
        _header(rep, doc, args.command)
        ok = HANDLERS[args.command](doc, args, rep)
        code = 0 if ok else 1
    except ERRORS as exc:
        rep.add("error", f"{type(exc).__name__}: {exc}")
        code = 2
    rep.add("exit", code)
    text = rep.render()
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(text)
        if rep.dot:
            out.write(rep.dot)
    else:
        out.write(rep.dot if rep.dot else text)
    return code


def main(argv=None) -> None:
    sys.exit(run(argv))
