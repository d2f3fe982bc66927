"""Text formats for families and posets.

Family files: `#` starts a comment anywhere on a line; each remaining
non-blank line is one set as whitespace-separated element labels; the single
token EMPTYSET denotes the empty set.  The universe is the union of
mentioned labels in first-appearance order, unless the first content line is
a header `elements: a b c ...` fixing it.

Poset files: a mandatory `elements:` header, then lines `x < y` declaring
generating relations; the transitive closure is taken and validated on load.
"""

from __future__ import annotations

from ucf.core import SetFamily, Universe, build_universe
from ucf.errors import ParseError, ValidationError
from ucf.lattice import Poset

EMPTY_TOKEN = "EMPTYSET"
HEADER = "elements:"


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def parse_family(text: str, universe: Universe | None = None) -> SetFamily:
    """Parse the family format; `universe` (if given) overrides inference."""
    rows: list[tuple[int, list[str]]] = []
    header: list[str] | None = None
    first = True
    for lineno, line in _content_lines(text):
        if first and line.startswith(HEADER):
            header = line[len(HEADER):].split()
            first = False
            continue
        first = False
        if line.startswith(HEADER):
            raise ParseError("elements: header allowed only on the first line", lineno)
        rows.append((lineno, line.split()))

    if universe is None:
        if header is not None:
            try:
                universe = build_universe(header)
            except ValidationError as exc:
                raise ParseError(str(exc), 1) from exc
        else:
            order: list[str] = []
            seen = set()
            for _, tokens in rows:
                for tok in tokens:
                    if tok != EMPTY_TOKEN and tok not in seen:
                        seen.add(tok)
                        order.append(tok)
            if not order:
                raise ParseError("no elements mentioned and no header given")
            try:
                universe = build_universe(order)
            except ValidationError as exc:
                raise ParseError(str(exc)) from exc

    masks = []
    for lineno, tokens in rows:
        if tokens == [EMPTY_TOKEN]:
            masks.append(0)
            continue
        bits = 0
        for tok in tokens:
            if tok == EMPTY_TOKEN:
                raise ParseError("EMPTYSET must stand alone on its line", lineno)
            try:
                bits |= 1 << universe.index(tok)
            except ValidationError as exc:
                raise ParseError(str(exc), lineno) from exc
        masks.append(bits)
    if not masks:
        raise ParseError("family file has no sets")
    return SetFamily(universe, masks)


def format_family(f: SetFamily) -> str:
    """Canonical text for a family; parse_family round-trips it exactly."""
    lines = [f"{HEADER} " + " ".join(f.universe.names)]
    for s in f:
        lines.append(" ".join(s.labels()) if len(s) else EMPTY_TOKEN)
    return "\n".join(lines) + "\n"


def parse_poset(text: str) -> Poset:
    """Parse the poset format (header plus `x < y` relation lines)."""
    lines = list(_content_lines(text))
    if not lines or not lines[0][1].startswith(HEADER):
        raise ParseError("poset file must start with an elements: header",
                         lines[0][0] if lines else None)
    labels = lines[0][1][len(HEADER):].split()
    if not labels:
        raise ParseError("empty elements: header", lines[0][0])
    index = {}
    for lab in labels:
        if lab in index:
            raise ParseError(f"duplicate element {lab!r}", lines[0][0])
        index[lab] = len(index)
    pairs = []
    for lineno, line in lines[1:]:
        parts = line.split("<")
        if len(parts) != 2:
            raise ParseError("relation lines must look like `x < y`", lineno)
        a, b = parts[0].strip(), parts[1].strip()
        if a not in index or b not in index:
            raise ParseError(f"unknown element in relation {line!r}", lineno)
        if a == b:
            raise ParseError("strict relation x < x is contradictory", lineno)
        pairs.append((index[a], index[b]))
    try:
        return Poset.from_relations(len(labels), pairs, labels=tuple(labels))
    except ValidationError as exc:
        raise ParseError(str(exc)) from exc


def format_poset(p: Poset) -> str:
    labels = p.labels or tuple(str(i) for i in range(p.n))
    lines = [f"{HEADER} " + " ".join(labels)]
    for i, j in p.cover_pairs():
        lines.append(f"{labels[i]} < {labels[j]}")
    return "\n".join(lines) + "\n"
