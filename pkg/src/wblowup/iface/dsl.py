"""Line-oriented setup files (``*.wb``).

Grammar (one item per line, ``#`` starts a comment, indentation ignored)::

    ring Y                      # section headers
      gens y:1, z:2             # generator declarations name:degree
      rels 24*y^3               # homogeneous relations, comma separated
    ring X                      # an empty ring section is the point, Z
    pullback
      y -> 0                    # i^*: one line per generator of Y
    codim 2
    module_gens                 # optional; defaults to  mu1 = 1
      mu1 = 1
    pushforward
      mu1 -> 24*y^2             # i_*(mu_l), one line per module generator
    bundle
      weight 4 rank 1           # optional:  chern c1, c2, ...  (default 0)
      weight 6 rank 1
    truncate 8                  # optional; defaults to codim + 4

Polynomials use integers, generator names, ``+ - * ^`` and parentheses.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..blowup import BlowupSetup, SetupError, make_setup
from ..chern import BundleComponent, WeightedBundle
from ..errors import InputError
from ..gring import GradedRing, PushforwardData, RingMap
from ..polyring import GenSignature, IntPolynomial, PolySyntaxError, T, parse_poly

SECTIONS = ("ring Y", "ring X", "pullback", "codim", "module_gens", "pushforward",
            "bundle", "truncate")
REQUIRED = ("ring Y", "ring X", "pullback", "codim", "pushforward", "bundle")


class DslError(InputError):
    def __init__(self, message, line=None, column=None, section=None):
        where = []
        if line is not None:
            where.append(f"line {line}")
            if column is not None:
                where.append(f"column {column}")
        prefix = ", ".join(where)
        if section:
            prefix = f"{prefix} [{section}]" if prefix else f"[{section}]"
        super().__init__(f"{prefix}: {message}" if prefix else message)
        self.line, self.column, self.section = line, column, section


@dataclass
class Item:
    """A body line (or header argument) with its location."""
    text: str
    line: int
    column: int


@dataclass
class SetupDocument:
    sections: dict[str, list[Item]] = field(default_factory=dict)
    headers: dict[str, Item] = field(default_factory=dict)

    def body(self, name):
        return self.sections.get(name, [])


def _strip_comment(raw):
    i = raw.find("#")
    return raw if i < 0 else raw[:i]


_HEADER = re.compile(r"^(ring\s+[A-Za-z_]\w*|pullback|codim|module_gens|pushforward|bundle|"
                     r"truncate)\b\s*(.*)$")


def parse_document(text: str) -> SetupDocument:
    doc = SetupDocument()
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).rstrip()
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        body = line.strip()
        m = _HEADER.match(body)
        if m:
            name = re.sub(r"\s+", " ", m.group(1))
            if name not in SECTIONS:
                raise DslError(f"unknown section {name!r} (expected ring Y or ring X)",
                               lineno, indent + 1)
            if name in doc.sections:
                raise DslError(f"duplicate section {name!r}", lineno, indent + 1, name)
            doc.sections[name] = []
            rest = m.group(2)
            doc.headers[name] = Item(rest.strip(), lineno, indent + 1 + m.start(2))
            if rest.strip() and name not in ("codim", "truncate"):
                # allow a single body item on the header line
                doc.sections[name].append(doc.headers[name])
            current = name
            continue
        if current is None:
            raise DslError(f"content before any section: {body!r}", lineno, indent + 1)
        if current in ("codim", "truncate"):
            raise DslError(f"section {current!r} takes a single inline value", lineno,
                           indent + 1, current)
        doc.sections[current].append(Item(body, lineno, indent + 1))
    for name in REQUIRED:
        if name not in doc.sections:
            raise DslError(f"missing required section {name!r}")
    return doc


def _split_commas(item: Item):
    out = []
    start = 0
    text = item.text
    for part in text.split(","):
        lead = len(part) - len(part.lstrip())
        out.append(Item(part.strip(), item.line, item.column + start + lead))
        start += len(part) + 1
    return out


def _poly(item: Item, sig, section):
    if not item.text:
        raise DslError("expected a polynomial", item.line, item.column, section)
    try:
        return parse_poly(item.text, sig)
    except PolySyntaxError as exc:
        col = item.column + (exc.pos or 0)
        raise DslError(exc.detail, item.line, col, section) from None


def _int(item: Item, section, minimum=None):
    if not re.fullmatch(r"-?\d+", item.text):
        raise DslError(f"expected an integer, got {item.text!r}", item.line, item.column, section)
    v = int(item.text)
    if minimum is not None and v < minimum:
        raise DslError(f"value must be >= {minimum}, got {v}", item.line, item.column, section)
    return v


def _ring(doc, name):
    section = name
    pairs = []
    rel_items = []
    for item in doc.body(name):
        kw, _, rest = item.text.partition(" ")
        rest_item = Item(rest.strip(), item.line, item.column + len(kw) + 1 +
                         (len(rest) - len(rest.lstrip())))
        if kw == "gens":
            for g in _split_commas(rest_item):
                m = re.fullmatch(r"([A-Za-z_]\w*)\s*:\s*(\d+)", g.text)
                if not m:
                    raise DslError(f"expected name:degree, got {g.text!r}", g.line, g.column,
                                   section)
                if m.group(1) in (T, "T"):
                    raise DslError(f"generator name {m.group(1)!r} is reserved", g.line,
                                   g.column, section)
                pairs.append((m.group(1), int(m.group(2)), g))
        elif kw == "rels":
            rel_items.extend(_split_commas(rest_item))
        else:
            raise DslError(f"expected 'gens' or 'rels', got {kw!r}", item.line, item.column,
                           section)
    try:
        sig = GenSignature(tuple(p[0] for p in pairs), tuple(p[1] for p in pairs))
    except InputError as exc:
        first = pairs[0][2] if pairs else None
        raise DslError(str(exc), first and first.line, first and first.column, section) from None
    rels = []
    for item in rel_items:
        r = _poly(item, sig, section)
        if not r.is_homogeneous():
            raise DslError(f"inhomogeneous relation {r}", item.line, item.column, section)
        if r and r.degree() == 0:
            raise DslError(f"relation {r} has degree 0", item.line, item.column, section)
        rels.append(r)
    return GradedRing(sig, rels)


def _arrow_items(doc, name, arrow):
    out = []
    for item in doc.body(name):
        lhs, sep, rhs = item.text.partition(arrow)
        if not sep:
            raise DslError(f"expected 'name {arrow} polynomial'", item.line, item.column, name)
        lhs = lhs.strip()
        if not re.fullmatch(r"[A-Za-z_]\w*", lhs):
            raise DslError(f"expected a name before {arrow!r}, got {lhs!r}", item.line,
                           item.column, name)
        off = item.text.index(sep) + len(sep)
        lead = len(rhs) - len(rhs.lstrip())
        out.append((lhs, Item(rhs.strip(), item.line, item.column + off + lead), item))
    return out


def build_setup(doc: SetupDocument, max_degree: int | None = None) -> BlowupSetup:
    ring_y = _ring(doc, "ring Y")
    ring_x = _ring(doc, "ring X")

    images = {}
    for name, rhs, item in _arrow_items(doc, "pullback", "->"):
        if name not in ring_y.sig.names:
            raise DslError(f"unknown generator {name!r} of ring Y", item.line, item.column,
                           "pullback")
        if name in images:
            raise DslError(f"duplicate image for {name!r}", item.line, item.column, "pullback")
        images[name] = _poly(rhs, ring_x.sig, "pullback")
    missing = [n for n in ring_y.sig.names if n not in images]
    if missing:
        h = doc.headers["pullback"]
        raise DslError(f"no image for generator(s) {', '.join(missing)}", h.line, None,
                       "pullback")
    try:
        pullback = RingMap(ring_y, ring_x, images)
    except InputError as exc:
        h = doc.headers["pullback"]
        raise DslError(str(exc), h.line, None, "pullback") from None

    codim = _int(doc.headers["codim"], "codim", minimum=1)

    mus = {}
    if "module_gens" in doc.sections:
        for name, rhs, item in _arrow_items(doc, "module_gens", "="):
            if name in mus:
                raise DslError(f"duplicate module generator {name!r}", item.line, item.column,
                               "module_gens")
            mu = _poly(rhs, ring_x.sig, "module_gens")
            if not mu.is_homogeneous() or mu.is_zero():
                raise DslError(f"module generator {mu} must be nonzero and homogeneous",
                               rhs.line, rhs.column, "module_gens")
            mus[name] = mu
    else:
        mus["mu1"] = ring_x.one()
    if not mus or next(iter(mus.values())) != 1:
        h = doc.headers.get("module_gens")
        raise DslError("the first module generator must be 1", h and h.line, None,
                       "module_gens")

    pushed = {}
    for name, rhs, item in _arrow_items(doc, "pushforward", "->"):
        if name not in mus:
            raise DslError(f"unknown module generator {name!r}", item.line, item.column,
                           "pushforward")
        img = _poly(rhs, ring_y.sig, "pushforward")
        want = mus[name].degree() + codim
        if img and (not img.is_homogeneous() or img.degree() != want):
            raise DslError(f"degree mismatch: pushforward of {name} must have degree {want} "
                           f"(codim {codim}), got {img}", rhs.line, rhs.column, "pushforward")
        pushed[name] = img
    missing = [n for n in mus if n not in pushed]
    if missing:
        h = doc.headers["pushforward"]
        raise DslError(f"no pushforward for {', '.join(missing)}", h.line, None, "pushforward")
    names = tuple(mus)
    push = PushforwardData(codim, tuple(mus[n] for n in names),
                           tuple(pushed[n] for n in names), names)

    comps = []
    for item in doc.body("bundle"):
        m = re.fullmatch(r"weight\s+(-?\d+)\s+rank\s+(-?\d+)(?:\s+chern\s+(.*))?", item.text)
        if not m:
            raise DslError("expected 'weight A rank N [chern c1, ..., cN]'", item.line,
                           item.column, "bundle")
        w, r = int(m.group(1)), int(m.group(2))
        if w <= 0:
            raise DslError(f"weights must be positive, got {w}", item.line, item.column, "bundle")
        if r <= 0:
            raise DslError(f"ranks must be positive, got {r}", item.line, item.column, "bundle")
        chern = []
        if m.group(3) is not None:
            chern_item = Item(m.group(3), item.line, item.column + m.start(3))
            for k, c_item in enumerate(_split_commas(chern_item), start=1):
                c = _poly(c_item, ring_x.sig, "bundle")
                if c and (not c.is_homogeneous() or c.degree() != k):
                    raise DslError(f"c_{k} must have degree {k}, got {c}", c_item.line,
                                   c_item.column, "bundle")
                chern.append(c)
            if len(chern) > r:
                raise DslError(f"rank {r} component given {len(chern)} Chern classes",
                               item.line, item.column, "bundle")
        comps.append(BundleComponent(w, r, tuple(chern)))
    if not comps:
        h = doc.headers["bundle"]
        raise DslError("bundle needs at least one component", h.line, None, "bundle")
    bundle = WeightedBundle(ring_x, comps)

    if "truncate" in doc.headers:
        truncation = _int(doc.headers["truncate"], "truncate", minimum=0)
    else:
        truncation = codim + 4
    if max_degree is not None:
        truncation = max_degree

    try:
        return make_setup(ring_y, ring_x, pullback, push, bundle, truncation)
    except SetupError as exc:
        first = exc.report.failures[0]
        h = doc.headers.get(first.section)
        raise DslError(f"validation failed: {exc}", h and h.line, None, first.section) from None


def parse_setup(text: str, max_degree: int | None = None) -> BlowupSetup:
    """Parse and validate a setup document."""
    return build_setup(parse_document(text), max_degree)


def load_setup(path, max_degree: int | None = None) -> BlowupSetup:
    with open(path, encoding="utf-8") as fh:
        return parse_setup(fh.read(), max_degree)


def _ring_lines(ring):
    lines = []
    if ring.sig.names:
        lines.append("  gens " + ", ".join(f"{n}:{d}" for n, d in zip(ring.sig.names,
                                                                      ring.sig.degrees)))
    if ring.relations:
        lines.append("  rels " + ", ".join(str(r) for r in ring.relations))
    return lines


def render_setup(s: BlowupSetup) -> str:
    """Setup document text; ``parse_setup(render_setup(s))`` reproduces ``s``."""
    out = ["ring Y", *_ring_lines(s.ring_y), "ring X", *_ring_lines(s.ring_x), "pullback"]
    for name in s.ring_y.sig.names:
        out.append(f"  {name} -> {s.pullback.images[name]}")
    out.append(f"codim {s.codim}")
    names = s.pushforward.names or tuple(f"mu{i}" for i in
                                         range(1, len(s.pushforward.generators) + 1))
    out.append("module_gens")
    for name, mu in zip(names, s.pushforward.generators):
        out.append(f"  {name} = {mu}")
    out.append("pushforward")
    for name, img in zip(names, s.pushforward.images):
        out.append(f"  {name} -> {img}")
    out.append("bundle")
    for comp in s.bundle.components:
        line = f"  weight {comp.weight} rank {comp.rank}"
        if any(c for c in comp.chern):
            line += " chern " + ", ".join(str(c) for c in comp.chern)
        out.append(line)
    out.append(f"truncate {s.truncation}")
    return "\n".join(out) + "\n"
