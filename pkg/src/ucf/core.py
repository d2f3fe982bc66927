"""Universes, bitset-encoded sets, and set families with their primitive algebra.

A Universe fixes an ordered ground set of at most 64 labelled elements; an
ElementSet is one subset of it stored as a bit word; a SetFamily is a
duplicate-free, canonically sorted sequence of ElementSets.  All values are
immutable after construction and every operation is a pure function, so any
value may be shared freely across workers.
"""

from __future__ import annotations

from functools import cached_property
from typing import Iterable, Iterator, Sequence

from ucf import kernels
from ucf.errors import UniverseMismatchError, ValidationError

UNIVERSE_CAP = 64


class Universe:
    """An ordered ground set; the index of a label is its position."""

    __slots__ = ("names", "_index")

    def __init__(self, names: Sequence[str]):
        names = tuple(names)
        if not names:
            raise ValidationError("universe needs at least one element")
        if len(names) > UNIVERSE_CAP:
            raise ValidationError(
                f"capacity exceeded: {len(names)} elements, cap is {UNIVERSE_CAP}"
            )
        seen = set()
        for name in names:
            if not name or any(c.isspace() for c in name) or "#" in name:
                raise ValidationError(f"malformed label {name!r}")
            if name in seen:
                raise ValidationError(f"duplicate label {name!r}")
            seen.add(name)
        self.names = names
        self._index = {name: i for i, name in enumerate(names)}

    @property
    def width(self) -> int:
        return len(self.names)

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise ValidationError(f"unknown element {label!r}") from None

    def label(self, i: int) -> str:
        return self.names[i]

    def subset(self, *labels: str) -> "ElementSet":
        bits = 0
        for label in labels:
            bits |= 1 << self.index(label)
        return ElementSet(self, bits)

    def from_mask(self, bits: int) -> "ElementSet":
        return ElementSet(self, bits)

    @property
    def empty(self) -> "ElementSet":
        return ElementSet(self, 0)

    @property
    def full(self) -> "ElementSet":
        return ElementSet(self, (1 << self.width) - 1)

    def extended(self, extra: Iterable[str]) -> "Universe":
        """This universe plus any genuinely new labels, in given order."""
        names = list(self.names)
        for label in extra:
            if label not in self._index:
                names.append(label)
        return Universe(names)

    def __eq__(self, other) -> bool:
        return isinstance(other, Universe) and self.names == other.names

    def __hash__(self) -> int:
        return hash(self.names)

    def __repr__(self) -> str:
        return f"Universe({' '.join(self.names)})"


def build_universe(labels: Sequence[str]) -> Universe:
    """Validated universe with the given label order."""
    return Universe(labels)


def _same_universe(a: Universe, b: Universe) -> None:
    if a != b:
        raise UniverseMismatchError(f"universe mismatch: {a!r} vs {b!r}")


class ElementSet:
    """A subset of a universe, encoded as a fixed-width bit word."""

    __slots__ = ("universe", "bits")

    def __init__(self, universe: Universe, bits: int):
        if bits < 0 or bits >> universe.width:
            raise ValidationError(f"bit word {bits:#x} exceeds universe width")
        self.universe = universe
        self.bits = bits

    def labels(self) -> tuple[str, ...]:
        return tuple(self.universe.names[i] for i in kernels.mask_bits(self.bits))

    def __len__(self) -> int:
        return self.bits.bit_count()

    def __contains__(self, label: str) -> bool:
        return bool(self.bits >> self.universe.index(label) & 1)

    def __iter__(self) -> Iterator[str]:
        return iter(self.labels())

    def _coerce(self, other: "ElementSet") -> int:
        _same_universe(self.universe, other.universe)
        return other.bits

    def __or__(self, other: "ElementSet") -> "ElementSet":
        return ElementSet(self.universe, self.bits | self._coerce(other))

    def __and__(self, other: "ElementSet") -> "ElementSet":
        return ElementSet(self.universe, self.bits & self._coerce(other))

    def __sub__(self, other: "ElementSet") -> "ElementSet":
        return ElementSet(self.universe, self.bits & ~self._coerce(other))

    def __le__(self, other: "ElementSet") -> bool:
        return self.bits & ~self._coerce(other) == 0

    def __lt__(self, other: "ElementSet") -> bool:
        return self <= other and self.bits != other.bits

    def isdisjoint(self, other: "ElementSet") -> bool:
        return self.bits & self._coerce(other) == 0

    def complement(self) -> "ElementSet":
        return ElementSet(self.universe, self.universe.full.bits & ~self.bits)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ElementSet)
            and self.universe == other.universe
            and self.bits == other.bits
        )

    def __hash__(self) -> int:
        return hash((self.universe, self.bits))

    def __repr__(self) -> str:
        return "{" + " ".join(self.labels()) + "}" if self.bits else "{}"


class SetFamily:
    """A universe plus canonically sorted, duplicate-free member sets.

    Members are kept as raw masks in `masks` (strictly increasing); the
    ElementSet view is built on demand.  Closure flags are cached lazily and
    always agree with recomputation.
    """

    def __init__(self, universe: Universe, masks: Iterable[int]):
        self.universe = universe
        canonical = sorted(set(masks))
        if canonical and (canonical[0] < 0 or canonical[-1] >> universe.width):
            raise ValidationError("member mask exceeds universe width")
        self.masks: tuple[int, ...] = tuple(canonical)

    @classmethod
    def from_sets(cls, sets: Iterable[ElementSet]) -> "SetFamily":
        sets = list(sets)
        if not sets:
            raise ValidationError("cannot infer a universe from no sets")
        universe = sets[0].universe
        for s in sets[1:]:
            _same_universe(universe, s.universe)
        return cls(universe, (s.bits for s in sets))

    def __len__(self) -> int:
        return len(self.masks)

    def __iter__(self) -> Iterator[ElementSet]:
        for m in self.masks:
            yield ElementSet(self.universe, m)

    def __contains__(self, s: ElementSet) -> bool:
        _same_universe(self.universe, s.universe)
        return s.bits in self._mask_set

    def member(self, i: int) -> ElementSet:
        return ElementSet(self.universe, self.masks[i])

    @cached_property
    def _mask_set(self) -> frozenset:
        return frozenset(self.masks)

    @cached_property
    def is_union_closed(self) -> bool:
        return kernels.is_union_closed(list(self.masks))

    @cached_property
    def is_intersection_closed(self) -> bool:
        return kernels.is_intersection_closed(list(self.masks))

    @property
    def contains_empty(self) -> bool:
        return bool(self.masks) and self.masks[0] == 0

    @cached_property
    def union_mask(self) -> int:
        out = 0
        for m in self.masks:
            out |= m
        return out

    @cached_property
    def generator_masks(self) -> tuple[int, ...]:
        """Non-empty members that are not unions of other members."""
        out = []
        for m in self.masks:
            if m == 0:
                continue
            below = 0
            for v in self.masks:
                if v != m and v | m == m:
                    below |= v
            if below != m:
                out.append(m)
        return tuple(out)

    def union_of_members(self) -> ElementSet:
        return ElementSet(self.universe, self.union_mask)

    def adjoin(self, s: ElementSet) -> "SetFamily":
        _same_universe(self.universe, s.universe)
        return SetFamily(self.universe, self.masks + (s.bits,))

    def embed(self, universe: Universe) -> "SetFamily":
        """The same family re-encoded over a universe containing every label."""
        if universe == self.universe:
            return self
        shift = [universe.index(name) for name in self.universe.names]
        out = []
        for m in self.masks:
            bits = 0
            for i in kernels.mask_bits(m):
                bits |= 1 << shift[i]
            out.append(bits)
        return SetFamily(universe, out)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SetFamily)
            and self.universe == other.universe
            and self.masks == other.masks
        )

    def __hash__(self) -> int:
        return hash((self.universe, self.masks))

    def __repr__(self) -> str:
        shown = ", ".join(repr(s) for s in self)
        return f"SetFamily[{len(self)}]({shown})"


def union_close(generators: SetFamily, include_empty: bool) -> SetFamily:
    """Smallest union-closed family containing the generators.

    Computed by worklist fixed point over pairwise unions, never by
    enumerating the 2^|generators| subsets.  The empty set is added exactly
    when `include_empty` asks for it (it is never removed).
    """
    if not generators.masks:
        raise ValidationError("union_close needs at least one generator")
    closed = kernels.union_close(list(generators.masks), include_empty)
    return SetFamily(generators.universe, closed)


def restrict(f: SetFamily, y: ElementSet, mode: str) -> SetFamily:
    """The four induced families: below y, above y, onto y, away from y."""
    _same_universe(f.universe, y.universe)
    b = y.bits
    if mode == "below":
        masks: Iterable[int] = (m for m in f.masks if m & ~b == 0)
    elif mode == "above":
        masks = (m for m in f.masks if m & b == b)
    elif mode == "onto":
        masks = {m & b for m in f.masks}
    elif mode == "away":
        masks = {m & ~b for m in f.masks}
    else:
        raise ValidationError(f"unknown restriction mode {mode!r}")
    return SetFamily(f.universe, masks)


def join_families(f: SetFamily, g: SetFamily) -> SetFamily:
    """{U | V : U in f, V in g}, deduplicated."""
    _same_universe(f.universe, g.universe)
    return SetFamily(f.universe, kernels.join_masks(list(f.masks), list(g.masks)))


def meet_families(f: SetFamily, g: SetFamily) -> SetFamily:
    """{U & V : U in f, V in g}, deduplicated."""
    _same_universe(f.universe, g.universe)
    return SetFamily(f.universe, kernels.meet_masks(list(f.masks), list(g.masks)))


def degree(f: SetFamily, y: ElementSet) -> int:
    """Number of members containing y."""
    _same_universe(f.universe, y.universe)
    return kernels.count_supersets(list(f.masks), y.bits)


class TransposeTable:
    """Rows of the transposed family: for each element, which members hold it.

    Rows are member-index sets (one per universe element, with multiplicity),
    encoded as ElementSets over an index universe m0..m{k-1}.
    """

    def __init__(self, family: SetFamily):
        self.family = family
        width = max(len(family), 1)
        self.row_universe = Universe(tuple(f"m{i}" for i in range(width)))
        rows = []
        for i in range(family.universe.width):
            bit = 1 << i
            row = 0
            for j, m in enumerate(family.masks):
                if m & bit:
                    row |= 1 << j
            rows.append(row)
        self._row_masks = tuple(rows)
        mult: dict[int, int] = {}
        for row in rows:
            mult[row] = mult.get(row, 0) + 1
        self.multiplicity = mult

    @property
    def rows(self) -> tuple[ElementSet, ...]:
        return tuple(ElementSet(self.row_universe, r) for r in self._row_masks)

    def row_for(self, label: str) -> ElementSet:
        i = self.family.universe.index(label)
        return ElementSet(self.row_universe, self._row_masks[i])

    @property
    def is_simple(self) -> bool:
        return all(count == 1 for count in self.multiplicity.values())

    @property
    def is_primitive(self) -> bool:
        return self.is_simple and self.family.union_mask == self.family.universe.full.bits


def transpose(f: SetFamily) -> TransposeTable:
    return TransposeTable(f)


def graph_of(f: SetFamily) -> bool:
    """True iff every member has one or two elements (vacuously for none)."""
    return all(1 <= m.bit_count() <= 2 for m in f.masks)


def simple_graph(f: SetFamily) -> bool:
    """True iff every member has exactly two elements (vacuously for none)."""
    return all(m.bit_count() == 2 for m in f.masks)
