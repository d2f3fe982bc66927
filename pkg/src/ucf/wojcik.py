"""The index-to-set bijection, its union-closed initial segments, and the
brute-force minimum total size / size density oracles.

The bijection sends n with leading binary bit l to the set holding l plus
the positions below l whose bit is zero; initial segments of the induced
order on finite sets are union-closed.  The minima here are exact and come
with lexicographically least minimizers for reproducibility.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from ucf import kernels
from ucf.core import ElementSet, SetFamily, Universe, build_universe
from ucf.errors import ValidationError

INDEX_CAP = 32


@lru_cache(maxsize=8)
def _nat_universe(width: int) -> Universe:
    return build_universe([str(i) for i in range(width)])


def _set_mask_of_index(n: int) -> int:
    if n == 0:
        return 0
    lead = n.bit_length() - 1
    mask = 1 << lead
    for i in range(lead):
        if not n >> i & 1:
            mask |= 1 << i
    return mask


def _index_of_mask(mask: int) -> int:
    if mask == 0:
        return 0
    lead = mask.bit_length() - 1
    n = 1 << lead
    for i in range(lead):
        if not mask >> i & 1:
            n |= 1 << i
    return n


def set_of_index(n: int, cap: int = INDEX_CAP) -> ElementSet:
    """The n-th finite set of the bijection, over the universe 0..cap-1."""
    if cap > INDEX_CAP:
        raise ValidationError(f"index cap is {INDEX_CAP}")
    if not 0 <= n < (1 << cap):
        raise ValidationError(f"index {n} outside [0, 2^{cap})")
    return ElementSet(_nat_universe(cap), _set_mask_of_index(n))


def index_of_set(s: ElementSet) -> int:
    """Inverse of set_of_index; defined for every finite set."""
    return _index_of_mask(s.bits)


def index_family(n: int, cap: int = INDEX_CAP) -> SetFamily:
    """The family of the first n sets of the bijection; always union-closed."""
    if n < 1:
        raise ValidationError("the family needs n >= 1")
    if n > (1 << cap):
        raise ValidationError(f"index {n} outside the cap")
    width = max(1, (n - 1).bit_length())
    fam = SetFamily(_nat_universe(width), (_set_mask_of_index(i) for i in range(n)))
    if not fam.is_union_closed:
        raise ValidationError("internal invariant failed: segment not union-closed")
    return fam


def total_size(f: SetFamily) -> int:
    """Sum of the member sizes."""
    return sum(m.bit_count() for m in f.masks)


def size_density(f: SetFamily, ground: Universe) -> Fraction:
    """Total size over member count times ground size; support must fit."""
    support = {f.universe.label(i) for i in kernels.mask_bits(f.union_mask)}
    if not support <= set(ground.names):
        raise ValidationError("family support is not inside the ground set")
    return Fraction(total_size(f), len(f) * ground.width)


def _dfs_union_closed(k: int, emit, exact_members: int | None = None) -> None:
    """Enumerate union-closed subfamilies of 2^[k] by descending-index DFS.

    Deciding subsets in decreasing numeric order means every union of two
    chosen subsets is already decided, so a branch dies the moment a union
    is missing.  With exact_members set, cardinality bounds prune as well.
    Pure Python on purpose: the independent counterpart of the flat kernel
    scan.
    """
    top = (1 << k) - 1
    chosen: list[int] = []
    chosen_set: set[int] = set()

    def rec(i: int):
        if exact_members is not None:
            if len(chosen) > exact_members:
                return
            if len(chosen) + i + 1 < exact_members:
                return
        if i < 0:
            if chosen:
                emit(tuple(chosen))
            return
        rec(i - 1)
        ok = True
        for c in chosen:
            u = c | i
            if u != i and u != c and u not in chosen_set:
                ok = False
                break
        if ok:
            chosen.append(i)
            chosen_set.add(i)
            rec(i - 1)
            chosen.pop()
            chosen_set.remove(i)

    rec(top)


def min_total_size(n: int, universe_cap: int) -> tuple[int, SetFamily]:
    """Exact minimum total size over union-closed families with n members.

    Searches every union-closed subfamily of the power set of the cap-sized
    universe by DFS with union-closure and cardinality pruning.  Whether the
    cap is large enough for the true optimum is an open soundness gap; run
    caps 3 and 4 and compare.
    """
    if n > 8:
        raise ValidationError("member count capped at 8")
    if universe_cap > 4:
        raise ValidationError("universe capped at 4")
    if n > 1 << universe_cap:
        raise ValidationError("n exceeds the power set of the universe")
    best: tuple[int, tuple[int, ...]] | None = None

    def emit(members: tuple[int, ...]):
        nonlocal best
        if len(members) != n:
            return
        s = sum(m.bit_count() for m in members)
        key = (s, tuple(sorted(members)))
        if best is None or key < best:
            best = key
    _dfs_union_closed(universe_cap, emit, exact_members=n)
    assert best is not None
    return best[0], SetFamily(_nat_universe(universe_cap), best[1])


def min_size_density(m: int, strategy: str = "flat") -> tuple[Fraction, SetFamily]:
    """Exact minimum size density over union-closed families covering [m].

    strategy="flat" filters the kernel's flat subfamily scan;
    strategy="recursive" reruns the independent DFS enumeration.  Both must
    agree; the acceptance suite compares them.
    """
    if m > 4:
        raise ValidationError("ground set capped at 4")
    full = (1 << m) - 1
    best: tuple[Fraction, tuple[int, ...]] | None = None

    def consider(members: tuple[int, ...]):
        nonlocal best
        support = 0
        for x in members:
            support |= x
        if support != full:
            return
        value = Fraction(sum(x.bit_count() for x in members), len(members) * m)
        key = (value, tuple(sorted(members)))
        if best is None or key < best:
            best = key

    if strategy == "flat":
        for fam in kernels.union_closed_masks(m):
            consider(tuple(kernels.mask_bits(fam)))
    elif strategy == "recursive":
        _dfs_union_closed(m, consider)
    else:
        raise ValidationError(f"unknown strategy {strategy!r}")
    assert best is not None
    return best[0], SetFamily(_nat_universe(m), best[1])


def check_union_order(bound: int) -> bool:
    """Bijectivity on [0, bound) plus the union-order law.

    The law: whenever the union of the k-th and l-th sets (k < l) is the
    i-th set, i is at most l.  This is what makes initial segments
    union-closed.
    """
    if bound > 1 << 16:
        raise ValidationError("order check capped at 2^16")
    masks = [_set_mask_of_index(i) for i in range(bound)]
    if len(set(masks)) != bound:
        return False
    for i, mask in enumerate(masks):
        if _index_of_mask(mask) != i:
            return False
    for l in range(bound):
        ml = masks[l]
        for k in range(l):
            if _index_of_mask(masks[k] | ml) > l:
                return False
    return True
