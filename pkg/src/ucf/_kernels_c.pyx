# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the pure-Python bit kernels.

Same contracts as ucf._kernels_py, with the inner loops on C arrays of
64-bit words.  Masks must fit in 64 bits, which the 64-element universe cap
guarantees; filter masks over up to 6 ground elements need exactly 64 bits.
"""

from libc.stdlib cimport free, malloc

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil

BACKEND = "cython"

ctypedef unsigned long long u64


cdef u64* _as_array(object xs, Py_ssize_t* n) except? NULL:
    cdef Py_ssize_t k = len(xs)
    cdef u64* arr = <u64*> malloc(sizeof(u64) * (k if k else 1))
    if arr == NULL:
        raise MemoryError()
    cdef Py_ssize_t i
    for i in range(k):
        arr[i] = xs[i]
    n[0] = k
    return arr


cdef int _positions(u64 mask, int* pos) nogil:
    cdef int k = 0
    while mask:
        pos[k] = __builtin_ctzll(mask)
        mask &= mask - 1
        k += 1
    return k


cdef u64 _expand(int* pos, int k, u64 index) nogil:
    cdef u64 out = 0
    cdef int j
    for j in range(k):
        if (index >> j) & 1:
            out |= (<u64> 1) << pos[j]
    return out


def union_close(gens, include_empty):
    """Close `gens` under pairwise union by worklist fixed point; sorted."""
    cdef Py_ssize_t n_gens
    cdef u64* g = _as_array(list(gens), &n_gens)
    closed = set()
    cdef Py_ssize_t i
    for i in range(n_gens):
        closed.add(g[i])
    free(g)
    frontier = list(closed)
    cdef u64 w, m, u
    while frontier:
        fresh = []
        snapshot = list(closed)
        for wobj in frontier:
            w = wobj
            for mobj in snapshot:
                m = mobj
                u = m | w
                if u not in closed:
                    closed.add(u)
                    fresh.append(u)
        frontier = fresh
    if include_empty:
        closed.add(0)
    return sorted(closed)


def closed_subsets(gens, universe_mask):
    """All W within `universe_mask` equal to the union of the gens inside."""
    if universe_mask.bit_count() > 24:
        raise ValueError("closed_subsets enumerates 2^|universe| sets; "
                         "universe too large")
    cdef Py_ssize_t n_gens
    cdef u64* g = _as_array(list(gens), &n_gens)
    cdef u64 universe = universe_mask
    cdef int pos[64]
    cdef int k = _positions(universe, pos)
    cdef u64 idx, w, pi
    cdef Py_ssize_t i
    out = []
    for idx in range(<u64> 1 << k):
        w = _expand(pos, k, idx)
        pi = 0
        for i in range(n_gens):
            if g[i] & ~w == 0:
                pi |= g[i]
        if pi == w:
            out.append(w)
    free(g)
    out.sort()
    return out


def count_supersets(members, u):
    cdef Py_ssize_t n
    cdef u64* arr = _as_array(list(members), &n)
    cdef u64 uu = u
    cdef Py_ssize_t i, count = 0
    for i in range(n):
        if arr[i] & uu == uu:
            count += 1
    free(arr)
    return count


def pi_union(gens, x):
    cdef Py_ssize_t n
    cdef u64* arr = _as_array(list(gens), &n)
    cdef u64 xx = x
    cdef u64 pi = 0
    cdef Py_ssize_t i
    for i in range(n):
        if arr[i] & ~xx == 0:
            pi |= arr[i]
    free(arr)
    return pi


def join_masks(a, b):
    return _pairwise(a, b, 1)


def meet_masks(a, b):
    return _pairwise(a, b, 0)


cdef _pairwise(a, b, int use_or):
    cdef Py_ssize_t na, nb
    cdef u64* xa = _as_array(list(a), &na)
    cdef u64* xb = _as_array(list(b), &nb)
    cdef Py_ssize_t i, j
    out = set()
    for i in range(na):
        for j in range(nb):
            if use_or:
                out.add(xa[i] | xb[j])
            else:
                out.add(xa[i] & xb[j])
    free(xa)
    free(xb)
    return sorted(out)


def masks_without(members, u):
    cdef Py_ssize_t n
    cdef u64* arr = _as_array(list(members), &n)
    cdef u64 keep = ~(<u64> u)
    cdef Py_ssize_t i
    out = set()
    for i in range(n):
        out.add(arr[i] & keep)
    free(arr)
    return sorted(out)


def is_union_closed(members):
    return bool(_closed_check(members, 1))


def is_intersection_closed(members):
    return bool(_closed_check(members, 0))


cdef int _closed_check(members, int use_or) except -1:
    cdef Py_ssize_t n
    cdef u64* arr = _as_array(list(members), &n)
    have = set(members)
    cdef Py_ssize_t i, j
    cdef u64 u
    for i in range(n):
        for j in range(i + 1, n):
            u = (arr[i] | arr[j]) if use_or else (arr[i] & arr[j])
            if u not in have:
                free(arr)
                return 0
    free(arr)
    return 1


cdef u64 _eset_mask_c(u64* g, Py_ssize_t n_gens, u64 u, u64 x,
                      int* upos, int uk) nogil:
    cdef u64 needed = 0
    cdef u64 gout, y, xy, req, b
    cdef Py_ssize_t i
    cdef u64 yi
    cdef u64 res = 0
    cdef int ok, hit
    for i in range(n_gens):
        gout = g[i] & ~u
        if gout and gout & ~x == 0:
            needed |= gout
    for yi in range(<u64> 1 << uk):
        y = _expand(upos, uk, yi)
        xy = x | y
        req = y | needed
        ok = 1
        while req:
            b = req & (~req + 1)
            req ^= b
            hit = 0
            for i in range(n_gens):
                if (g[i] & b) and (g[i] & ~xy) == 0:
                    hit = 1
                    break
            if not hit:
                ok = 0
                break
        if ok:
            res |= (<u64> 1) << yi
    return res


cdef int _check_u_cap(object u) except -1:
    if u.bit_count() > 6:
        raise ValueError("completion masks pack one bit per subset of u; "
                         "u capped at 6 elements")
    return 0


def eset_mask(gens, u, x):
    """Guaranteed-completion bitmask over the subsets of u; see the pure twin."""
    _check_u_cap(u)
    cdef Py_ssize_t n_gens
    cdef u64* g = _as_array(list(gens), &n_gens)
    cdef int upos[64]
    cdef int uk = _positions(<u64> u, upos)
    cdef u64 res = _eset_mask_c(g, n_gens, <u64> u, <u64> x, upos, uk)
    free(g)
    return res


def eset_sizes_many(gens, u, xs):
    _check_u_cap(u)
    cdef Py_ssize_t n_gens, n_xs
    cdef u64* g = _as_array(list(gens), &n_gens)
    cdef u64* xa = _as_array(list(xs), &n_xs)
    cdef int upos[64]
    cdef int uk = _positions(<u64> u, upos)
    cdef Py_ssize_t i
    out = []
    for i in range(n_xs):
        out.append(__builtin_popcountll(
            _eset_mask_c(g, n_gens, <u64> u, xa[i], upos, uk)))
    free(g)
    free(xa)
    return out


def eset_masks_powerset(gens, u, s):
    _check_u_cap(u)
    cdef Py_ssize_t n_gens
    cdef u64* g = _as_array(list(gens), &n_gens)
    cdef int upos[64]
    cdef int uk = _positions(<u64> u, upos)
    cdef int spos[64]
    cdef int sk = _positions(<u64> s, spos)
    cdef u64 xi
    out = []
    for xi in range(<u64> 1 << sk):
        out.append(_eset_mask_c(g, n_gens, <u64> u,
                                _expand(spos, sk, xi), upos, uk))
    free(g)
    return out


def eset_sizes_powerset(gens, u, s):
    _check_u_cap(u)
    cdef Py_ssize_t n_gens
    cdef u64* g = _as_array(list(gens), &n_gens)
    cdef int upos[64]
    cdef int uk = _positions(<u64> u, upos)
    cdef int spos[64]
    cdef int sk = _positions(<u64> s, spos)
    cdef u64 xi
    out = []
    for xi in range(<u64> 1 << sk):
        out.append(__builtin_popcountll(
            _eset_mask_c(g, n_gens, <u64> u,
                         _expand(spos, sk, xi), upos, uk)))
    free(g)
    return out


def powerset_filters(k):
    """Non-empty up-closed subfamilies of 2^[k], ascending; see the pure twin."""
    cdef int kk = k
    if kk > 6:
        raise ValueError("filter masks need at most 64 bits (k <= 6)")
    cdef int n = 1 << kk
    cdef int sup[64][6]
    cdef int nsup[64]
    cdef int i, b, c
    for i in range(n):
        c = 0
        for b in range(kk):
            if not (i >> b) & 1:
                sup[i][c] = i | (1 << b)
                c += 1
        nsup[i] = c
    out = []
    _filters_rec(n - 1, 0, sup, nsup, out)
    return out


cdef void _filters_rec(int i, u64 mask, int sup[64][6], int* nsup, list out):
    if i < 0:
        if mask:
            out.append(mask)
        return
    _filters_rec(i - 1, mask, sup, nsup, out)
    cdef int j
    for j in range(nsup[i]):
        if not (mask >> sup[i][j]) & 1:
            return
    _filters_rec(i - 1, mask | ((<u64> 1) << i), sup, nsup, out)


def union_closed_masks(k):
    """Masks of the non-empty union-closed subfamilies of 2^[k] (flat scan)."""
    cdef int kk = k
    if kk > 4:
        raise ValueError("subfamily masks need at most 64 bits (k <= 4)")
    cdef int n = 1 << kk
    cdef u64 fam, top = (<u64> 1 << n) - 1 if n < 64 else <u64> 0 - 1
    cdef int mems[16]
    cdef int ln, a, b2, ok
    cdef u64 rest
    out = []
    for fam in range(1, (<u64> 1 << n)):
        rest = fam
        ln = 0
        while rest:
            mems[ln] = __builtin_ctzll(rest)
            rest &= rest - 1
            ln += 1
        ok = 1
        for a in range(ln):
            for b2 in range(a + 1, ln):
                if not (fam >> (mems[a] | mems[b2])) & 1:
                    ok = 0
                    break
            if not ok:
                break
        if ok:
            out.append(fam)
    return out
