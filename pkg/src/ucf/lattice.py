"""Order-theoretic view of families and abstract posets.

Posets store one bitmask row per element (`up[i]` = everything above i), so
all order computations are word operations; sizes here stay desk-scale.
LatticeView adds least-upper/greatest-lower tables computed generically from
the order, so families and parsed poset files share every classification
code path.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from ucf import kernels
from ucf.core import ElementSet, SetFamily, Universe
from ucf.errors import CapExceededError, ValidationError

SELFDUAL_CAP = 20


class Poset:
    """A finite poset given by its validated order relation."""

    __slots__ = ("n", "up", "labels", "__dict__")

    def __init__(self, up: Sequence[int], labels: tuple[str, ...] | None = None):
        n = len(up)
        self.n = n
        self.up = tuple(up)
        self.labels = labels
        if labels is not None and len(labels) != n:
            raise ValidationError("label count does not match poset size")
        full = (1 << n) - 1
        for i, row in enumerate(self.up):
            if row < 0 or row & ~full:
                raise ValidationError("order matrix row out of range")
            if not row >> i & 1:
                raise ValidationError("order not reflexive")
        for i in range(n):
            for j in kernels.mask_bits(self.up[i]):
                if j != i and self.up[j] >> i & 1:
                    raise ValidationError("order not antisymmetric")
                if self.up[j] & ~self.up[i]:
                    raise ValidationError("order not transitive")

    @classmethod
    def from_relations(
        cls, n: int, pairs: Iterable[tuple[int, int]],
        labels: tuple[str, ...] | None = None,
    ) -> "Poset":
        """Reflexive-transitive closure of the generating relations."""
        up = [1 << i for i in range(n)]
        for a, b in pairs:
            up[a] |= 1 << b
        for k in range(n):
            bit = 1 << k
            for i in range(n):
                if up[i] & bit:
                    up[i] |= up[k]
        return cls(up, labels)

    @classmethod
    def from_leq(cls, leq: Sequence[Sequence[bool]],
                 labels: tuple[str, ...] | None = None) -> "Poset":
        up = []
        for row in leq:
            bits = 0
            for j, v in enumerate(row):
                if v:
                    bits |= 1 << j
            up.append(bits)
        return cls(up, labels)

    def leq(self, i: int, j: int) -> bool:
        return bool(self.up[i] >> j & 1)

    @cached_property
    def down(self) -> tuple[int, ...]:
        out = [0] * self.n
        for i in range(self.n):
            for j in kernels.mask_bits(self.up[i]):
                out[j] |= 1 << i
        return tuple(out)

    def covers(self, i: int, j: int) -> bool:
        """True iff j covers i (nothing strictly between)."""
        if i == j or not self.leq(i, j):
            return False
        between = self.up[i] & self.down[j] & ~(1 << i) & ~(1 << j)
        return between == 0

    def cover_pairs(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.n) for j in range(self.n)
                if self.covers(i, j)]

    @cached_property
    def upper_covers(self) -> tuple[int, ...]:
        out = [0] * self.n
        for i, j in self.cover_pairs():
            out[i] |= 1 << j
        return tuple(out)

    @cached_property
    def lower_covers(self) -> tuple[int, ...]:
        out = [0] * self.n
        for i, j in self.cover_pairs():
            out[j] |= 1 << i
        return tuple(out)

    def minimal_elements(self) -> list[int]:
        return [i for i in range(self.n) if self.down[i] == 1 << i]

    def maximal_elements(self) -> list[int]:
        return [i for i in range(self.n) if self.up[i] == 1 << i]

    def bottom(self) -> int | None:
        mins = self.minimal_elements()
        return mins[0] if len(mins) == 1 else None

    def top(self) -> int | None:
        maxs = self.maximal_elements()
        return maxs[0] if len(maxs) == 1 else None

    def linear_extension(self) -> list[int]:
        """Topological order, smallest index first among minimal elements."""
        remaining = set(range(self.n))
        out = []
        while remaining:
            pick = min(i for i in remaining
                       if all(j not in remaining or j == i
                              for j in kernels.mask_bits(self.down[i])))
            out.append(pick)
            remaining.remove(pick)
        return out

    def sub(self, indices: Sequence[int]) -> "Poset":
        """Induced subposet on the given elements (in the given order)."""
        pos = {e: k for k, e in enumerate(indices)}
        up = []
        for e in indices:
            bits = 0
            for j in kernels.mask_bits(self.up[e]):
                if j in pos:
                    bits |= 1 << pos[j]
            up.append(bits)
        labels = None
        if self.labels is not None:
            labels = tuple(self.labels[e] for e in indices)
        return Poset(up, labels)

    def dual(self) -> "Poset":
        return Poset(self.down, self.labels)

    def lub(self, members: int) -> int | None:
        """Least upper bound of the elements in the given index mask, if any."""
        ub = (1 << self.n) - 1
        for i in kernels.mask_bits(members):
            ub &= self.up[i]
        for z in kernels.mask_bits(ub):
            if ub & ~self.up[z] == 0:
                return z
        return None

    def glb(self, members: int) -> int | None:
        lb = (1 << self.n) - 1
        for i in kernels.mask_bits(members):
            lb &= self.down[i]
        for z in kernels.mask_bits(lb):
            if lb & ~self.down[z] == 0:
                return z
        return None

    @cached_property
    def height(self) -> int:
        """Length (cover steps) of the longest chain."""
        h = [0] * self.n
        for i in self.linear_extension():
            lows = kernels.mask_bits(self.lower_covers[i])
            h[i] = 1 + max((h[j] for j in lows), default=-1)
        return max(h, default=0)

    def _signature(self, i: int) -> tuple[int, int, int, int]:
        return (
            self.down[i].bit_count(),
            self.up[i].bit_count(),
            self.lower_covers[i].bit_count(),
            self.upper_covers[i].bit_count(),
        )

    def isomorphic(self, other: "Poset") -> bool:
        """Exhaustive backtracking isomorphism test with signature pruning."""
        if self.n != other.n:
            return False
        if max(self.n, other.n) > SELFDUAL_CAP:
            raise CapExceededError(
                f"isomorphism search capped at {SELFDUAL_CAP} elements")
        mine = sorted(self._signature(i) for i in range(self.n))
        theirs = sorted(other._signature(i) for i in range(other.n))
        if mine != theirs:
            return False
        cands = [
            [j for j in range(other.n) if other._signature(j) == self._signature(i)]
            for i in range(self.n)
        ]
        order = sorted(range(self.n), key=lambda i: len(cands[i]))
        assigned: dict[int, int] = {}
        used = set()

        def extend(k: int) -> bool:
            if k == self.n:
                return True
            i = order[k]
            for j in cands[i]:
                if j in used:
                    continue
                if all(self.leq(i, i2) == other.leq(j, j2)
                       and self.leq(i2, i) == other.leq(j2, j)
                       for i2, j2 in assigned.items()):
                    assigned[i] = j
                    used.add(j)
                    if extend(k + 1):
                        return True
                    del assigned[i]
                    used.remove(j)
            return False

        return extend(0)

    def __eq__(self, other) -> bool:
        return isinstance(other, Poset) and self.up == other.up

    def __hash__(self) -> int:
        return hash(self.up)

    def __repr__(self) -> str:
        return f"Poset(n={self.n})"


def poset_ops(p: Poset, q: Poset, kind: str) -> Poset:
    """Disjoint sum, componentwise product, or dual."""
    if kind == "dual":
        return p.dual()
    if kind == "sum":
        up = [row for row in p.up]
        up += [row << p.n for row in q.up]
        return Poset(up)
    if kind == "product":
        n = p.n * q.n
        up = []
        for i in range(p.n):
            for j in range(q.n):
                bits = 0
                for k in kernels.mask_bits(p.up[i]):
                    for l in kernels.mask_bits(q.up[j]):
                        bits |= 1 << (k * q.n + l)
                up.append(bits)
        return Poset(up)
    raise ValidationError(f"unknown poset operation {kind!r}")


class LatticeView:
    """A poset together with its (possibly partial) join and meet tables.

    Table entry -1 marks a missing bound; the view is a lattice when both
    tables are total.
    """

    def __init__(self, poset: Poset,
                 join_table: tuple[tuple[int, ...], ...],
                 meet_table: tuple[tuple[int, ...], ...]):
        self.poset = poset
        self.join_table = join_table
        self.meet_table = meet_table

    @classmethod
    def from_poset(cls, poset: Poset) -> "LatticeView":
        n = poset.n
        join = []
        meet = []
        for i in range(n):
            jrow = []
            mrow = []
            for j in range(n):
                z = poset.lub((1 << i) | (1 << j))
                jrow.append(-1 if z is None else z)
                z = poset.glb((1 << i) | (1 << j))
                mrow.append(-1 if z is None else z)
            join.append(tuple(jrow))
            meet.append(tuple(mrow))
        return cls(poset, tuple(join), tuple(meet))

    @property
    def n(self) -> int:
        return self.poset.n

    @cached_property
    def is_join_semilattice(self) -> bool:
        return all(v >= 0 for row in self.join_table for v in row)

    @cached_property
    def is_meet_semilattice(self) -> bool:
        return all(v >= 0 for row in self.meet_table for v in row)

    @property
    def is_lattice(self) -> bool:
        return self.is_join_semilattice and self.is_meet_semilattice

    def join(self, i: int, j: int) -> int:
        v = self.join_table[i][j]
        if v < 0:
            raise ValidationError(f"join of {i} and {j} does not exist")
        return v

    def meet(self, i: int, j: int) -> int:
        v = self.meet_table[i][j]
        if v < 0:
            raise ValidationError(f"meet of {i} and {j} does not exist")
        return v

    def join_of(self, indices: Iterable[int]) -> int:
        """Join of several elements; the empty join is the bottom."""
        acc = None
        for i in indices:
            acc = i if acc is None else self.join(acc, i)
        if acc is None:
            b = self.poset.bottom()
            if b is None:
                raise ValidationError("empty join needs a least element")
            return b
        return acc

    def with_bottom(self) -> "LatticeView":
        """Adjoin a least element (index n) when the poset lacks one."""
        if self.poset.bottom() is not None:
            return self
        n = self.poset.n
        up = list(self.poset.up)
        up.append((1 << (n + 1)) - 1)
        labels = None
        if self.poset.labels is not None:
            labels = self.poset.labels + ("_bottom",)
        return LatticeView.from_poset(Poset(tuple(up), labels))

    @cached_property
    def join_irreducible_indices(self) -> tuple[int, ...]:
        """Elements that are not the join of the elements strictly below.

        The least element (when present) is excluded by convention.
        """
        p = self.poset
        bottom = p.bottom()
        out = []
        for x in range(p.n):
            if x == bottom:
                continue
            below = p.down[x] & ~(1 << x)
            if below == 0:
                out.append(x)
                continue
            if p.lub(below) != x:
                out.append(x)
        return tuple(out)

    @cached_property
    def meet_irreducible_indices(self) -> tuple[int, ...]:
        p = self.poset
        top = p.top()
        out = []
        for x in range(p.n):
            if x == top:
                continue
            above = p.up[x] & ~(1 << x)
            if above == 0:
                out.append(x)
                continue
            if p.glb(above) != x:
                out.append(x)
        return tuple(out)

    def element_name(self, i: int) -> str:
        if self.poset.labels is not None:
            return self.poset.labels[i]
        return str(i)

    def dual(self) -> "LatticeView":
        return LatticeView(self.poset.dual(),
                           self.meet_table, self.join_table)

    def __repr__(self) -> str:
        return f"LatticeView(n={self.n})"


def order_of_family(f: SetFamily) -> LatticeView:
    """The family ordered by inclusion, with generic bound tables.

    For a union-closed family the join table is set union; with the empty
    set present the meet is the largest member inside the intersection.
    """
    if len(f) < 2:
        raise ValidationError("order view needs at least two members")
    masks = f.masks
    n = len(masks)
    up = []
    for i in range(n):
        bits = 0
        for j in range(n):
            if masks[i] & ~masks[j] == 0:
                bits |= 1 << j
        up.append(bits)
    labels = tuple(",".join(ElementSet(f.universe, m).labels()) or "()"
                   for m in masks)
    return LatticeView.from_poset(Poset(up, labels))


def join_irreducibles(f: SetFamily, mode: str = "irreducibles") -> SetFamily:
    """Members not equal to the union of the members strictly below them.

    mode="generators" returns the union generators (irreducibles of the
    family with the empty set adjoined): no member of the result is a union
    of any collection of the others.  mode="irreducibles" additionally drops
    the family's least member when one exists.
    """
    if not f.is_union_closed:
        raise ValidationError("join irreducibles require a union-closed family")
    gens = list(f.generator_masks)
    if mode == "generators":
        return SetFamily(f.universe, gens)
    if mode != "irreducibles":
        raise ValidationError(f"unknown mode {mode!r}")
    least = None
    if f.masks:
        meet_all = f.masks[0]
        for m in f.masks:
            meet_all &= m
        if meet_all in f._mask_set:
            least = meet_all
    return SetFamily(f.universe, (m for m in gens if m != least))


def meet_irreducibles(f: SetFamily) -> SetFamily:
    """The meet-irreducible members, located through the sets M_x.

    M_x is the union of all members avoiding element x; for a primitive
    union-closed family every meet-irreducible element arises as some M_x.
    A candidate survives when it has exactly one upper cover in the order
    with a bottom adjoined (an M_x of the empty kind stands for that
    adjoined bottom when the empty set is absent).  The largest element is
    excluded by convention, and never qualifies anyway.
    """
    from ucf.core import transpose

    if not f.is_union_closed:
        raise ValidationError("meet irreducibles require a union-closed family")
    if not transpose(f).is_primitive:
        raise ValidationError("meet irreducibles require a primitive family")
    candidates = set()
    for i in range(f.universe.width):
        avoid = ~(1 << i)
        m_x = 0
        for m in f.masks:
            if m & ~avoid == 0:
                m_x |= m
        candidates.add(m_x)
    completed = sorted(set(f.masks) | {0})
    top = f.union_mask
    out = []
    for c in candidates:
        if c == top:
            continue
        above = [m for m in completed if m != c and m | c == m]
        covers = [m for m in above
                  if not any(v != m and v | c == v and m | v == m
                             for v in above)]
        if len(covers) == 1:
            out.append(c)
    return SetFamily(f.universe, out)


def family_of_semilattice(l: LatticeView, kind: str = "meet") -> SetFamily:
    """The canonical family of a semilattice.

    kind="meet": the intersection-closed family of join-irreducibles below
    each element, over a universe with one label per join-irreducible.
    kind="join": the union-closed family of meet-irreducibles NOT above each
    element (complements within the meet-irreducibles of the dual reading).
    """
    if kind == "meet":
        if not l.is_meet_semilattice:
            raise ValidationError("kind='meet' needs a meet-semilattice")
        irr = l.join_irreducible_indices
        picker = lambda x: [k for k, j in enumerate(irr) if l.poset.leq(j, x)]
    elif kind == "join":
        if not l.is_join_semilattice:
            raise ValidationError("kind='join' needs a join-semilattice")
        irr = l.meet_irreducible_indices
        picker = lambda x: [k for k, j in enumerate(irr) if not l.poset.leq(x, j)]
    else:
        raise ValidationError(f"unknown kind {kind!r}")
    labels = []
    seen = set()
    for j in irr:
        name = l.element_name(j).replace(" ", "_")
        if not name or name in seen or "#" in name:
            name = f"j{j}"
        seen.add(name)
        labels.append(name)
    universe = Universe(tuple(labels) or ("j0",))
    masks = []
    for x in range(l.n):
        bits = 0
        for k in picker(x):
            bits |= 1 << k
        masks.append(bits)
    return SetFamily(universe, masks)


@dataclass(frozen=True)
class LatticeClassification:
    size: int
    distributive: bool
    modular: bool
    geometric: bool
    lower_semimodular_coatom_exists: bool
    complemented_ideals: bool
    selfdual: bool | None
    height: int
    join_irreducible_count: int
    height_equals_irreducibles: bool


def classify(l: LatticeView) -> LatticeClassification:
    """Brute-force classification predicates over a (completed) lattice."""
    if not l.is_lattice:
        l = l.with_bottom()
    if not l.is_lattice:
        raise ValidationError("classification needs a lattice")
    p = l.poset
    n = p.n
    join = l.join_table
    meet = l.meet_table
    bottom = p.bottom()
    top = p.top()

    distributive = all(
        meet[x][join[y][z]] == join[meet[x][y]][meet[x][z]]
        for x in range(n) for y in range(n) for z in range(n)
    )
    modular = all(
        join[x][meet[y][z]] == meet[join[x][y]][z]
        for x in range(n) for z in range(n) if p.leq(x, z)
        for y in range(n)
    )

    atoms = kernels.mask_bits(p.upper_covers[bottom])
    atomistic = True
    for x in range(n):
        acc = bottom
        for a in atoms:
            if p.leq(a, x):
                acc = join[acc][a]
        if acc != x:
            atomistic = False
            break
    upper_semimodular = all(
        not p.covers(meet[x][y], x) or p.covers(y, join[x][y])
        for x in range(n) for y in range(n)
    )
    geometric = atomistic and upper_semimodular

    coatom_ok = False
    for a in kernels.mask_bits(p.lower_covers[top]):
        if all(p.leq(w, a) or p.covers(meet[a][w], w) for w in range(n)):
            coatom_ok = True
            break

    complemented_ideals = True
    for x in range(n):
        for y in kernels.mask_bits(p.down[x]):
            if not any(
                meet[y][z] == bottom and join[y][z] == x
                for z in kernels.mask_bits(p.down[x])
            ):
                complemented_ideals = False
                break
        if not complemented_ideals:
            break

    selfdual: bool | None
    if n <= SELFDUAL_CAP:
        selfdual = p.isomorphic(p.dual())
    else:
        selfdual = None

    jcount = len(l.join_irreducible_indices)
    height = p.height
    return LatticeClassification(
        size=n,
        distributive=distributive,
        modular=modular,
        geometric=geometric,
        lower_semimodular_coatom_exists=coatom_ok,
        complemented_ideals=complemented_ideals,
        selfdual=selfdual,
        height=height,
        join_irreducible_count=jcount,
        height_equals_irreducibles=height == jcount,
    )
