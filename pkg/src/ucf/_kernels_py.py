"""Pure-Python bit kernels for the hot enumeration loops.

Element i of a universe is bit ``1 << i``; a set is an int mask; a family is
a sorted list of member masks.  ``ucf.kernels`` re-exports everything here,
preferring the compiled twins from ``ucf._kernels_c`` when that extension
built.  Both implementations must stay behaviourally identical; the test
suite cross-checks them.
"""

BACKEND = "python"


def mask_bits(mask):
    """Positions of the set bits of `mask`, ascending."""
    out = []
    while mask:
        b = mask & -mask
        out.append(b.bit_length() - 1)
        mask ^= b
    return out


def subset_expand(positions, index):
    """Place the bits of `index` at the given positions (subset decoding)."""
    out = 0
    for j, p in enumerate(positions):
        if index >> j & 1:
            out |= 1 << p
    return out


def subset_index(positions, mask):
    """Inverse of subset_expand for mask a subset of the positions."""
    out = 0
    for j, p in enumerate(positions):
        if mask >> p & 1:
            out |= 1 << j
    return out


def union_close(gens, include_empty):
    """Close `gens` under pairwise union by worklist fixed point; sorted."""
    closed = set(gens)
    frontier = list(closed)
    while frontier:
        fresh = []
        snapshot = list(closed)
        for w in frontier:
            for m in snapshot:
                u = m | w
                if u not in closed:
                    closed.add(u)
                    fresh.append(u)
        frontier = fresh
    if include_empty:
        closed.add(0)
    return sorted(closed)

def closed_subsets(gens, universe_mask):
    """All W within `universe_mask` equal to the union of the gens they contain.

    Equals union_close(gens, include_empty=True) when every gen is inside
    `universe_mask`, but runs in 2^|universe| scans instead of a fixed point.
    """
    if universe_mask.bit_count() > 24:
        raise ValueError("closed_subsets enumerates 2^|universe| sets; "
                         "universe too large")
    positions = mask_bits(universe_mask)
    out = []
    for idx in range(1 << len(positions)):
        w = subset_expand(positions, idx)
        pi = 0
        for g in gens:
            if g & ~w == 0:
                pi |= g
        if pi == w:
            out.append(w)
    out.sort()
    return out


def count_supersets(members, u):
    """How many members contain u."""
    n = 0
    for m in members:
        if m & u == u:
            n += 1
    return n


def pi_union(gens, x):
    """Union of the gens contained in x (the closure of x)."""
    pi = 0
    for g in gens:
        if g & ~x == 0:
            pi |= g
    return pi


def join_masks(a, b):
    """Sorted, deduplicated pairwise unions {x | y}."""
    return sorted({x | y for x in a for y in b})


def meet_masks(a, b):
    """Sorted, deduplicated pairwise intersections {x & y}."""
    return sorted({x & y for x in a for y in b})


def masks_without(members, u):
    """Sorted, deduplicated {m \\ u}."""
    nu = ~u
    return sorted({m & nu for m in members})


def is_union_closed(members):
    have = set(members)
    k = len(members)
    for i in range(k):
        mi = members[i]
        for j in range(i + 1, k):
            if mi | members[j] not in have:
                return False
    return True


def is_intersection_closed(members):
    have = set(members)
    k = len(members)
    for i in range(k):
        mi = members[i]
        for j in range(i + 1, k):
            if mi & members[j] not in have:
                return False
    return True


def eset_mask(gens, u, x):
    """Guaranteed-completion test for every Y inside u, batched as a bitmask.

    Bit yi of the result is set iff the subset of u with compressed index yi
    is a guaranteed completion of x: every element of Y, and every element
    outside u of a generator whose outside part already sits inside x, must
    be covered by some generator inside x | Y.  The result packs one bit per
    subset of u, so u is capped at 6 elements (matching the compiled twin).
    """
    if u.bit_count() > 6:
        raise ValueError("completion masks pack one bit per subset of u; "
                         "u capped at 6 elements")
    needed = 0
    for g in gens:
        gout = g & ~u
        if gout and gout & ~x == 0:
            needed |= gout
    u_positions = mask_bits(u)
    res = 0
    for yi in range(1 << len(u_positions)):
        y = subset_expand(u_positions, yi)
        xy = x | y
        req = y | needed
        ok = True
        while req:
            b = req & -req
            req ^= b
            hit = False
            for g in gens:
                if g & b and g & ~xy == 0:
                    hit = True
                    break
            if not hit:
                ok = False
                break
        if ok:
            res |= 1 << yi
    return res


def eset_sizes_many(gens, u, xs):
    """|E(X)| for each X in xs."""
    return [eset_mask(gens, u, x).bit_count() for x in xs]


def eset_masks_powerset(gens, u, s):
    """eset_mask for every X a subset of s, in compressed-index order."""
    positions = mask_bits(s)
    return [
        eset_mask(gens, u, subset_expand(positions, i))
        for i in range(1 << len(positions))
    ]


def eset_sizes_powerset(gens, u, s):
    return [m.bit_count() for m in eset_masks_powerset(gens, u, s)]


def powerset_filters(k):
    """Non-empty up-closed subfamilies of 2^[k], ascending.

    A filter is encoded as a mask over subset indices: bit i is set iff the
    subset of [k] with characteristic int i belongs to the filter.  Subsets
    are decided in decreasing index order, so every superset is decided
    before its subsets and up-closure reduces to the immediate supersets.
    """
    n = 1 << k
    sup = [[i | (1 << b) for b in range(k) if not i >> b & 1] for i in range(n)]
    out = []

    def rec(i, mask):
        if i < 0:
            if mask:
                out.append(mask)
            return
        rec(i - 1, mask)
        for s in sup[i]:
            if not mask >> s & 1:
                return
        rec(i - 1, mask | (1 << i))

    rec(n - 1, 0)
    return out


def union_closed_masks(k):
    """Masks of the non-empty union-closed subfamilies of 2^[k] (flat scan).

    Bit i of a mask says the subset with characteristic int i is a member.
    """
    n = 1 << k
    out = []
    for fam in range(1, 1 << n):
        mems = []
        rest = fam
        while rest:
            b = rest & -rest
            mems.append(b.bit_length() - 1)
            rest ^= b
        ok = True
        ln = len(mems)
        for a in range(ln):
            ma = mems[a]
            for b2 in range(a + 1, ln):
                if not fam >> (ma | mems[b2]) & 1:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(fam)
    return out
