"""Cross-backend equivalence of the kernel twins.

Runs against whichever backends are importable; when the compiled extension
is missing only the pure backend is exercised (so the suite stays green on
a fallback install).
"""

import random

import pytest

from ucf import _kernels_py

BACKENDS = [_kernels_py]
try:
    from ucf import _kernels_c

    BACKENDS.append(_kernels_c)
except ImportError:
    pass

PAIRED = len(BACKENDS) == 2


def random_instances(seed, count):
    rng = random.Random(seed)
    for _ in range(count):
        k = rng.randint(1, 5)
        gens = [rng.randrange(1, 1 << k) for _ in range(rng.randint(1, 7))]
        u = rng.randrange(0, 1 << k)
        x = rng.randrange(0, 1 << k) & ~u
        yield k, gens, u, x


@pytest.mark.parametrize("impl", BACKENDS, ids=lambda m: m.BACKEND)
def test_union_close_properties(impl):
    for _, gens, _, _ in random_instances(3, 120):
        closed = impl.union_close(gens, True)
        have = set(closed)
        assert 0 in have and set(gens) <= have
        assert closed == sorted(have)
        for a in closed:
            for b in closed:
                assert a | b in have


@pytest.mark.skipif(not PAIRED, reason="compiled backend unavailable")
def test_backends_agree_pointwise():
    py, cy = BACKENDS
    for k, gens, u, x in random_instances(11, 400):
        universe = (1 << k) - 1
        assert py.union_close(gens, True) == cy.union_close(gens, True)
        assert py.closed_subsets(gens, universe) == cy.closed_subsets(gens, universe)
        assert py.count_supersets(gens, u) == cy.count_supersets(gens, u)
        assert py.pi_union(gens, x) == cy.pi_union(gens, x)
        assert py.join_masks(gens, gens[:3]) == cy.join_masks(gens, gens[:3])
        assert py.meet_masks(gens, gens[:3]) == cy.meet_masks(gens, gens[:3])
        assert py.masks_without(gens, u) == cy.masks_without(gens, u)
        members = sorted(set(gens))
        assert py.is_union_closed(members) == cy.is_union_closed(members)
        assert py.is_intersection_closed(members) == cy.is_intersection_closed(members)
        assert py.eset_mask(gens, u, x) == cy.eset_mask(gens, u, x)
        s = universe & ~u
        assert py.eset_masks_powerset(gens, u, s) == cy.eset_masks_powerset(gens, u, s)
        assert py.eset_sizes_powerset(gens, u, s) == cy.eset_sizes_powerset(gens, u, s)
        xs = [x, 0, s]
        assert py.eset_sizes_many(gens, u, xs) == cy.eset_sizes_many(gens, u, xs)


@pytest.mark.skipif(not PAIRED, reason="compiled backend unavailable")
@pytest.mark.parametrize("k", range(0, 6))
def test_filters_agree(k):
    py, cy = BACKENDS
    assert py.powerset_filters(k) == cy.powerset_filters(k)


@pytest.mark.skipif(not PAIRED, reason="compiled backend unavailable")
@pytest.mark.parametrize("k", range(1, 5))
def test_union_closed_masks_agree(k):
    py, cy = BACKENDS
    assert py.union_closed_masks(k) == cy.union_closed_masks(k)


@pytest.mark.parametrize("impl", BACKENDS, ids=lambda m: m.BACKEND)
def test_dedekind_counts(impl):
    # filters of 2^[k] including the empty one
    expected = {0: 2, 1: 3, 2: 6, 3: 20, 4: 168, 5: 7581}
    for k, count in expected.items():
        assert len(impl.powerset_filters(k)) + 1 == count


@pytest.mark.parametrize("impl", BACKENDS, ids=lambda m: m.BACKEND)
def test_closed_subsets_equals_union_close(impl):
    for _, gens, _, _ in random_instances(5, 80):
        universe = 0
        for g in gens:
            universe |= g
        assert impl.closed_subsets(gens, universe) == impl.union_close(gens, True)


@pytest.mark.parametrize("impl", BACKENDS, ids=lambda m: m.BACKEND)
def test_filters_are_up_closed(impl):
    for k in range(0, 5):
        n = 1 << k
        for fmask in impl.powerset_filters(k):
            assert fmask
            for i in range(n):
                if fmask >> i & 1:
                    for b in range(k):
                        assert fmask >> (i | 1 << b) & 1


@pytest.mark.parametrize("impl", BACKENDS, ids=lambda m: m.BACKEND)
def test_full_width_masks(impl):
    """Bit 63 must survive every kernel (the 64-element universe cap)."""
    hi = 1 << 63
    gens = [hi, 1, hi | 2]
    closed = impl.union_close(gens, True)
    assert hi | 1 in closed and hi | 2 | 1 in closed
    assert impl.count_supersets(closed, hi) == 4
    assert impl.pi_union(gens, hi | 1) == hi | 1
    assert impl.masks_without(closed, 1)[-1] == hi | 2
    assert impl.join_masks([hi], [1]) == [hi | 1]
    assert impl.eset_mask([hi | 1], 1, hi) == 0b11


@pytest.mark.parametrize("impl", BACKENDS, ids=lambda m: m.BACKEND)
def test_guard_parity(impl):
    with pytest.raises(ValueError):
        impl.eset_mask([3], (1 << 7) - 1, 0)
    with pytest.raises(ValueError):
        impl.closed_subsets([1], (1 << 25) - 1)
    with pytest.raises(ValueError):
        impl.powerset_filters(7)
    with pytest.raises(ValueError):
        impl.union_closed_masks(5)
