import pytest
from hypothesis import given, strategies as st

from ucf import kernels
from ucf.core import (
    ElementSet,
    SetFamily,
    build_universe,
    degree,
    graph_of,
    join_families,
    meet_families,
    restrict,
    simple_graph,
    transpose,
    union_close,
)
from ucf.errors import UniverseMismatchError, ValidationError


def fam(universe, *sets):
    return SetFamily.from_sets([universe.subset(*s) for s in sets])


class TestUniverse:
    def test_build(self):
        u = build_universe(["a", "b"])
        assert u.width == 2
        assert u.index("b") == 1
        assert u.label(1) == "b"

    def test_duplicate_label(self):
        with pytest.raises(ValidationError):
            build_universe(["a", "a"])

    def test_capacity(self):
        build_universe([f"e{i}" for i in range(64)])
        with pytest.raises(ValidationError):
            build_universe([f"e{i}" for i in range(65)])

    @pytest.mark.parametrize("bad", ["", "a b", "x#y", "a\tb"])
    def test_malformed_label(self, bad):
        with pytest.raises(ValidationError):
            build_universe([bad])

    def test_label_round_trip(self):
        u = build_universe(["p", "q", "r"])
        assert [u.label(u.index(n)) for n in u.names] == list(u.names)


class TestElementSet:
    def test_algebra_matches_sets(self):
        u = build_universe(list("abcd"))
        x = u.subset("a", "b")
        y = u.subset("b", "c")
        assert set((x | y).labels()) == {"a", "b", "c"}
        assert set((x & y).labels()) == {"b"}
        assert set((x - y).labels()) == {"a"}
        assert u.subset("b") <= x
        assert not x <= y

    def test_universe_mismatch(self):
        u1 = build_universe(["a"])
        u2 = build_universe(["b"])
        with pytest.raises(UniverseMismatchError):
            u1.subset("a") | u2.subset("b")

    def test_width_guard(self):
        u = build_universe(["a"])
        with pytest.raises(ValidationError):
            ElementSet(u, 0b10)


class TestSetFamily:
    def test_canonical_sorted_dedup(self):
        u = build_universe(list("ab"))
        f = SetFamily(u, [3, 1, 3, 0])
        assert f.masks == (0, 1, 3)

    def test_flags_agree_with_recomputation(self, triangle):
        assert triangle.is_union_closed
        assert not triangle.is_intersection_closed
        assert triangle.contains_empty

    def test_embed_preserves_labels(self, path):
        bigger = path.universe.extended(["z"])
        moved = path.embed(bigger)
        assert {s.labels() for s in moved} == {s.labels() for s in path}


class TestUnionClose:
    def test_triangle(self, triangle):
        assert len(triangle) == 5

    def test_single_edge(self):
        u = build_universe(["a", "b"])
        f = union_close(fam(u, ("a", "b")), True)
        assert f.masks == (0, 3)

    def test_pentagon_matches_no_isolated_point_description(self, pentagon):
        assert len(pentagon) == 17
        u = pentagon.universe
        # independently: subsets of the 5 vertices with no isolated vertex
        edges = [(u.subset(str(i), str((i + 1) % 5))).bits for i in range(5)]
        expected = []
        for w in range(32):
            ok = all(any(e & ~w == 0 and e & (1 << v) for e in edges)
                     for v in kernels.mask_bits(w))
            if ok:
                expected.append(w)
        assert list(pentagon.masks) == sorted(expected)

    def test_empty_generators_rejected(self):
        u = build_universe(["a"])
        with pytest.raises(ValidationError):
            union_close(SetFamily(u, []), True)

    def test_keeps_empty_generator_even_without_flag(self):
        u = build_universe(["a"])
        f = union_close(SetFamily(u, [0, 1]), False)
        assert 0 in f.masks


class TestRestrict:
    def test_above(self, triangle):
        u = triangle.universe
        above = restrict(triangle, u.subset("0"), "above")
        assert len(above) == 3

    def test_away_dedups(self, triangle):
        u = triangle.universe
        away = restrict(triangle, u.subset("0"), "away")
        assert len(away) == 4

    def test_above_empty_is_identity(self, pentagon):
        assert restrict(pentagon, pentagon.universe.empty, "above") == pentagon

    def test_below_onto(self):
        u = build_universe(list("abc"))
        f = fam(u, (), ("a",), ("a", "b"), ("a", "b", "c"))
        below = restrict(f, u.subset("a", "b"), "below")
        assert len(below) == 3
        onto = restrict(f, u.subset("b"), "onto")
        assert {s.bits for s in onto} == {0, u.subset("b").bits}

    def test_unknown_mode(self, triangle):
        with pytest.raises(ValidationError):
            restrict(triangle, triangle.universe.empty, "sideways")


class TestJoinMeet:
    def test_small_join(self):
        u = build_universe(["a", "b"])
        f = fam(u, (), ("a",))
        g = fam(u, (), ("b",))
        assert len(join_families(f, g)) == 4

    def test_join_identity(self, pentagon):
        unit = SetFamily(pentagon.universe, [0])
        assert join_families(pentagon, unit) == pentagon

    def test_meet(self):
        u = build_universe(list("ab"))
        f = fam(u, ("a", "b"), ("a",))
        g = fam(u, ("b",))
        assert {s.bits for s in meet_families(f, g)} == {0, u.subset("b").bits}


class TestDegree:
    def test_triangle(self, triangle):
        assert degree(triangle, triangle.universe.subset("0")) == 3

    def test_empty_set_counts_all(self, pentagon):
        assert degree(pentagon, pentagon.universe.empty) == len(pentagon)

    def test_pentagon_edge(self, pentagon):
        assert degree(pentagon, pentagon.universe.subset("0", "1")) == 7


class TestTranspose:
    def test_simple_primitive(self):
        u = build_universe(["1", "2"])
        f = fam(u, (), ("1",), ("1", "2"))
        t = transpose(f)
        assert t.row_for("1").bits == 0b110
        assert t.row_for("2").bits == 0b100
        assert t.is_simple and t.is_primitive

    def test_not_simple(self):
        u = build_universe(["1", "2"])
        f = fam(u, (), ("1", "2"))
        t = transpose(f)
        assert not t.is_simple

    def test_simple_not_primitive(self):
        u = build_universe(["1", "2"])
        f = fam(u, (), ("1",))
        t = transpose(f)
        assert t.is_simple and not t.is_primitive

    def test_simplicity_is_pairwise_separation(self):
        import itertools

        u = build_universe(list("abc"))
        for masks in itertools.combinations(range(8), 3):
            f = SetFamily(u, masks)
            separated = all(
                any(bool(m >> i & 1) != bool(m >> j & 1) for m in f.masks)
                for i in range(3) for j in range(i + 1, 3)
            )
            assert transpose(f).is_simple == separated


class TestGraphPredicates:
    def test_examples(self):
        u = build_universe(list("abc"))
        assert graph_of(fam(u, ("a", "b"), ("b", "c")))
        assert simple_graph(fam(u, ("a", "b"), ("b", "c")))
        assert graph_of(fam(u, ("a",), ("a", "b")))
        assert not simple_graph(fam(u, ("a",), ("a", "b")))
        assert not graph_of(fam(u, ("a", "b", "c")))


small_masks = st.lists(st.integers(min_value=0, max_value=15),
                       min_size=1, max_size=8)


@given(small_masks)
def test_union_close_idempotent_and_contains_generators(masks):
    u = build_universe(list("wxyz"))
    gens = SetFamily(u, masks)
    closed = union_close(gens, True)
    assert closed.is_union_closed
    assert set(gens.masks) <= set(closed.masks)
    assert union_close(closed, True) == closed


@given(small_masks, st.integers(min_value=0, max_value=15))
def test_degree_equals_above_restriction(masks, y):
    u = build_universe(list("wxyz"))
    f = SetFamily(u, masks)
    ys = ElementSet(u, y)
    above = restrict(f, ys, "above")
    assert degree(f, ys) == len(above)
    assert set(above.masks) <= set(f.masks)


@given(small_masks, small_masks, small_masks)
def test_join_associative_commutative(a, b, c):
    u = build_universe(list("wxyz"))
    fa, fb, fc = (SetFamily(u, m) for m in (a, b, c))
    assert join_families(fa, fb) == join_families(fb, fa)
    assert join_families(join_families(fa, fb), fc) == \
        join_families(fa, join_families(fb, fc))


@given(small_masks)
def test_complement_duality(masks):
    u = build_universe(list("wxyz"))
    f = union_close(SetFamily(u, masks), True)
    comp = SetFamily(u, (u.full.bits & ~m for m in f.masks))
    assert comp.is_intersection_closed
    # inclusion order reverses
    for m1 in f.masks:
        for m2 in f.masks:
            if m1 | m2 == m2:
                assert (u.full.bits & ~m2) | (u.full.bits & ~m1) \
                    == u.full.bits & ~m1
