"""Reader for the line-oriented ``.fspec`` filter description format.

A document is a sequence of bracketed sections::

    [monoid]
    factors = (3,1) (3,1)
    order = direct

    [group]
    preset = cyclic 60

    [subgroups]
    0 =

    [filter]
    default = 0
    at (0,0) = G
    at e1 = <2>

Sections: ``monoid``, ``group`` (a preset, or ``orders``/``power``/``comm``
lines), ``table`` (a subgroup oracle instead of a group), ``subgroups``,
``filter``, ``prefilter``, ``genset`` and ``insert``.  ``#`` starts a
comment.  Words over generators are written ``g1^2*g3^-1``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from . import groups
from .backend import PcBackend
from .filters import Filter
from .lattice_table import SubgroupTable, TableBackend
from .monoid import INF, MonoidError, adjoin_infinity, make_monoid
from .pcgroup import PcGroup

SECTIONS = ("monoid", "group", "table", "subgroups", "filter", "prefilter", "genset", "insert")


class FspecError(Exception):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)
        self.line = line
        self.column = column


class FspecSyntaxError(FspecError):
    pass


class UnresolvedName(FspecError):
    pass


class IndexOutOfMonoid(FspecError):
    pass


@dataclass
class Entry:
    line: int
    column: int
    text: str


@dataclass
class Document:
    """A parsed and resolved filter description."""

    monoid: object
    backend: object
    filter: Filter | None = None
    prefilter: dict | None = None
    class_hint: int | None = None
    genset: list | None = None
    insert: dict | None = None
    source: str = ""
    raw: dict = field(default_factory=dict)


def bundled(name: str) -> Path:
    return Path(str(resources.files("pcfilters") / "data" / name))


def read_text(path: str) -> tuple[str, str]:
    p = Path(path)
    if not p.exists():
        q = bundled(path if path.endswith(".fspec") else path + ".fspec")
        if q.exists():
            p = q
    return p.read_text(encoding="utf-8"), str(p)


def _split_sections(text: str) -> dict:
    out = {}
    current = None
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        stripped = line.strip()
        col = len(line) - len(line.lstrip()) + 1
        if stripped.startswith("["):
            m = re.fullmatch(r"\[([a-z]+)\]", stripped)
            if not m:
                raise FspecSyntaxError("malformed section header", n, col)
            if m.group(1) not in SECTIONS:
                raise FspecSyntaxError(f"unknown section [{m.group(1)}]", n, col + 1)
            current = m.group(1)
            if current in out:
                raise FspecSyntaxError(f"section [{current}] appears twice", n, col)
            out[current] = []
            continue
        if current is None:
            raise FspecSyntaxError("content before the first section", n, col)
        out[current].append(Entry(n, col, stripped))
    return out


def _kv(e: Entry) -> tuple[str, str]:
    if "=" not in e.text:
        raise FspecSyntaxError("expected 'key = value'", e.line, e.column)
    k, v = e.text.split("=", 1)
    return k.strip(), v.strip()


def _value_col(e: Entry) -> int:
    return e.column + e.text.index("=") + 2


_PAIR = re.compile(r"C?\(\s*(\d+)\s*,\s*(\d+)\s*\)")


def _factors(e: Entry, value: str) -> list:
    pos = 0
    out = []
    for m in _PAIR.finditer(value):
        if value[pos:m.start()].strip():
            raise FspecSyntaxError("expected factors like (3,1)", e.line, _value_col(e) + pos)
        out.append((int(m.group(1)), int(m.group(2))))
        pos = m.end()
    if value[pos:].strip() or not out:
        raise FspecSyntaxError("expected factors like (3,1)", e.line, _value_col(e) + pos)
    return out


def _order(e: Entry, value: str, nfactors: int):
    words = value.split()
    if len(words) == 1 and ":" not in words[0]:
        return words[0]
    blocks = []
    for w in words:
        m = re.fullmatch(r"([a-z]+):(\d+)", w)
        if not m:
            raise FspecSyntaxError("expected order blocks like lex:1 direct:2", e.line, _value_col(e))
        blocks.append((m.group(1), int(m.group(2))))
    if sum(c for _, c in blocks) != nfactors:
        raise FspecSyntaxError("order blocks do not cover the factors", e.line, _value_col(e))
    return blocks


def _monoid(entries: list):
    factors = order = None
    infinity = free = False
    for e in entries:
        k, v = _kv(e)
        if k == "factors":
            factors = _factors(e, v)
        elif k == "order":
            order = (e, v)
        elif k == "infinity":
            infinity = v.lower() in ("true", "yes", "1")
        elif k == "free":
            free = v.lower() in ("true", "yes", "1")
        else:
            raise FspecSyntaxError(f"unknown monoid key {k!r}", e.line, e.column)
    if factors is None:
        line = entries[0].line if entries else 0
        raise FspecSyntaxError("monoid block needs 'factors'", line, 1)
    kind = _order(*order, len(factors)) if order else "direct"
    try:
        m = make_monoid(factors, kind)
        if infinity:
            m = adjoin_infinity(m)
    except MonoidError as exc:
        e = order[0] if order else entries[0]
        raise FspecSyntaxError(str(exc), e.line, e.column) from exc
    if free:
        # the truncation stands in for N^d when refreshing
        m.free_model = True
    return m


def parse_index(m, text: str, line: int = 0, column: int = 0) -> int:
    """``0``, ``inf``, ``e2``, ``3e1``, ``(1,2)`` or a bare integer in one dimension."""
    t = text.strip().replace(" ", "")
    d = len(m.factors)
    if t == "inf":
        coords = INF
    elif t == "0":
        coords = (0,) * d
    elif re.fullmatch(r"\d*e\d+", t):
        k, i = t.split("e")
        i = int(i)
        if not 1 <= i <= d:
            raise IndexOutOfMonoid(f"no basis vector e{i} in a {d}-factor monoid", line, column)
        coords = tuple(int(k or 1) if j == i - 1 else 0 for j in range(d))
    elif re.fullmatch(r"\(\d+(,\d+)*\)", t):
        coords = tuple(int(x) for x in t[1:-1].split(","))
    elif re.fullmatch(r"\d+", t) and d == 1:
        coords = (int(t),)
    else:
        raise FspecSyntaxError(f"cannot read index {text!r}", line, column)
    if coords == INF:
        if INF not in m.index:
            raise IndexOutOfMonoid("monoid has no adjoined top", line, column)
        return m.index[INF]
    if len(coords) != d:
        raise IndexOutOfMonoid(f"index {text} has {len(coords)} coordinates, monoid has {d}", line, column)
    for c, (r, s) in zip(coords, m.factors):
        if c >= r + s:
            raise IndexOutOfMonoid(f"index {text} is outside the monoid", line, column)
    key = m.canonical(coords)
    if key not in m.index:
        raise IndexOutOfMonoid(f"index {text} is outside the monoid", line, column)
    return m.index[key]


def parse_word(G: PcGroup, text: str, line: int = 0, column: int = 0) -> tuple:
    """Evaluate ``g1^2*g3^-1`` in ``G``; ``1`` or an empty string is the identity."""
    text = text.strip()
    x = G.identity
    if text in ("", "1"):
        return x
    index = {nm: i for i, nm in enumerate(G.names)}
    for part in text.split("*"):
        m = re.fullmatch(r"\s*([A-Za-z_][A-Za-z_0-9]*)\s*(?:\^\s*(-?\d+))?\s*", part)
        if not m:
            raise FspecSyntaxError(f"cannot read word {text!r}", line, column)
        name, e = m.group(1), int(m.group(2) or 1)
        if name not in index:
            raise UnresolvedName(f"unknown generator {name!r}", line, column)
        x = G.mul(x, G.pow(G.gen(index[name]), e))
    return x


PRESETS = {
    "cyclic": groups.cyclic,
    "heisenberg": groups.heisenberg,
    "unitriangular": groups.unitriangular,
    "hk": groups.hk_group,
    "genus3": groups.genus3,
}


def _group(entries: list):
    preset = None
    orders = names = None
    powers, comms = {}, {}
    general = False
    pending = []
    for e in entries:
        k, v = _kv(e)
        if k == "preset":
            words = v.split()
            if not words or words[0] not in PRESETS:
                raise UnresolvedName(f"unknown preset {v!r}", e.line, _value_col(e))
            preset = (words[0], [int(w) for w in words[1:]])
        elif k == "orders":
            orders = [int(w) for w in v.split()]
        elif k == "names":
            names = v.split()
        elif k == "general":
            general = v.lower() in ("true", "yes", "1")
        elif k.startswith("power ") or k.startswith("comm "):
            pending.append((e, k.split(), v))
        else:
            raise FspecSyntaxError(f"unknown group key {k!r}", e.line, e.column)
    if preset:
        G, subs = PRESETS[preset[0]](*preset[1])
        return G, dict(subs)
    if orders is None:
        raise FspecSyntaxError("group block needs 'preset' or 'orders'", entries[0].line if entries else 0, 1)
    names = names or [f"g{i + 1}" for i in range(len(orders))]
    index = {nm: i for i, nm in enumerate(names)}
    scratch = PcGroup(orders, names=names, check=False)
    for e, words, v in pending:
        try:
            gens = [index[w] for w in words[1:]]
        except KeyError as exc:
            raise UnresolvedName(f"unknown generator {exc.args[0]!r}", e.line, e.column) from None
        vec = parse_word(scratch, v, e.line, _value_col(e))
        word = [(i, x) for i, x in enumerate(vec) if x]
        if words[0] == "power" and len(gens) == 1:
            powers[gens[0]] = word
        elif words[0] == "comm" and len(gens) == 2:
            comms[(gens[0], gens[1])] = word
        else:
            raise FspecSyntaxError("expected 'power g = word' or 'comm a b = word'", e.line, e.column)
    G = PcGroup(orders, powers, comms, names=names, general=general)
    return G, {"G": G.whole(), "1": G.trivial()}


def _table(entries: list) -> SubgroupTable:
    t = SubgroupTable([], {})
    for e in entries:
        words = e.text.replace("=", " = ").split()
        head = words[0]
        if head == "node":
            # node NAME ORDER [< ABOVE ...]
            if len(words) < 3 or not words[2].isdigit():
                raise FspecSyntaxError("expected 'node NAME ORDER [< ABOVE ...]'", e.line, e.column)
            t.nodes.append(words[1])
            t.orders[words[1]] = int(words[2])
            if len(words) > 3:
                if words[3] != "<":
                    raise FspecSyntaxError("expected '<' before overgroups", e.line, e.column)
                for w in words[4:]:
                    t.below.add((words[1], w))
        elif head in ("comm", "join", "meet") and len(words) == 5 and words[3] == "=":
            getattr(t, "commutator" if head == "comm" else head)[(words[1], words[2])] = words[4]
        elif head == "section" and len(words) >= 6 and words[2] == "/" and words[4] == "=":
            t.sections[(words[1], words[3])] = [int(w) for w in words[5:]]
        else:
            raise FspecSyntaxError(f"cannot read table line {e.text!r}", e.line, e.column)
    known = set(t.nodes)
    for e in entries:
        for w in e.text.replace("=", " ").split()[1:]:
            if w not in known and not w.isdigit() and w not in ("<", "/"):
                raise UnresolvedName(f"unknown table node {w!r}", e.line, e.column)
    return t


def _resolve(backend, name: str, e: Entry):
    try:
        return backend.lookup(name)
    except KeyError:
        raise UnresolvedName(f"unknown subgroup {name!r}", e.line, _value_col(e)) from None


def _assignments(m, backend, entries: list, allow=("default",)):
    table, extras = {}, {}
    for e in entries:
        k, v = _kv(e)
        if k.startswith("at "):
            s = parse_index(m, k[3:], e.line, e.column + 3)
            table[s] = _resolve(backend, v, e)
        elif k in allow:
            extras[k] = (e, v)
        else:
            raise FspecSyntaxError(f"unexpected key {k!r}", e.line, e.column)
    return table, extras


def parse(text: str, source: str = "<string>") -> Document:
    secs = _split_sections(text)
    if "monoid" not in secs:
        raise FspecSyntaxError("missing [monoid] section", 1, 1)
    m = _monoid(secs["monoid"])
    if "group" in secs and "table" in secs:
        raise FspecSyntaxError("give either [group] or [table], not both", secs["table"][0].line if secs["table"] else 1, 1)
    if "group" in secs:
        G, names = _group(secs["group"])
        for e in secs.get("subgroups", []):
            k, v = _kv(e)
            words = [w for w in v.split(",") if w.strip()]
            gens = [parse_word(G, w, e.line, _value_col(e)) for w in words]
            names[k] = G.subgroup(gens)
        backend = PcBackend(G, names)
    elif "table" in secs:
        if secs.get("subgroups"):
            e = secs["subgroups"][0]
            raise FspecSyntaxError("[subgroups] needs a [group] section", e.line, e.column)
        backend = TableBackend(_table(secs["table"]))
    else:
        raise FspecSyntaxError("missing [group] or [table] section", 1, 1)
    doc = Document(m, backend, source=source, raw=secs)
    if "filter" in secs:
        table, extras = _assignments(m, backend, secs["filter"])
        default = None
        if "default" in extras:
            e, v = extras["default"]
            default = _resolve(backend, v, e)
        vals = [table.get(i, default) for i in range(len(m))]
        if any(v is None for v in vals):
            missing = next(i for i, v in enumerate(vals) if v is None)
            line = secs["filter"][0].line if secs["filter"] else 0
            raise FspecSyntaxError(f"no value for index {m.format(missing)} and no default", line, 1)
        doc.filter = Filter(m, backend, vals)
    if "prefilter" in secs:
        table, extras = _assignments(m, backend, secs["prefilter"], allow=("class",))
        doc.prefilter = table
        if "class" in extras:
            doc.class_hint = int(extras["class"][1])
    if "genset" in secs:
        if not backend.has_elements:
            e = secs["genset"][0]
            raise FspecSyntaxError("[genset] needs a [group] section", e.line, e.column)
        X = []
        for e in secs["genset"]:
            k, v = _kv(e)
            if k != "elements":
                raise FspecSyntaxError(f"unexpected key {k!r}", e.line, e.column)
            X.extend(parse_word(backend.group, w, e.line, _value_col(e)) for w in v.split(","))
        doc.genset = X
    if "insert" in secs:
        ext = []
        pending = []
        for e in secs["insert"]:
            k, v = _kv(e)
            if k == "extension":
                ext = _factors(e, v)
            elif k.startswith("at "):
                pending.append((e, k[3:], v))
            else:
                raise FspecSyntaxError(f"unexpected key {k!r}", e.line, e.column)
        d = len(m.factors) + len(ext)
        ins = []
        for e, idx, v in pending:
            t = idx.strip().replace(" ", "")
            if not re.fullmatch(r"\(\d+(,\d+)*\)", t):
                raise FspecSyntaxError("insertion indices are written as tuples", e.line, e.column + 3)
            coords = tuple(int(x) for x in t[1:-1].split(","))
            if len(coords) != d:
                raise IndexOutOfMonoid(f"insertion index {idx} needs {d} coordinates", e.line, e.column + 3)
            ins.append((coords, _resolve(backend, v, e)))
        doc.insert = {"extension": ext, "insertions": ins}
    return doc


def load(path: str) -> Document:
    text, where = read_text(path)
    return parse(text, where)
