from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ucf import catalog, kernels
from ucf.core import ElementSet, SetFamily, build_universe, join_families, union_close
from ucf.density import (
    ExtensionSpec,
    closure,
    completion_average,
    completions,
    density,
    generated_neighborhood,
    guaranteed_completions,
    kleitman_bound,
    local_degree_certificate,
    min_completion_average,
    neighborhood_profile,
    powerset_filters,
    reciprocal_density,
    undercut_below_two,
)
from ucf.errors import CapExceededError, ValidationError

HALF = Fraction(1, 2)


def two_edge_path():
    """Edges {a,b} and {a,x}: members {}, ab, ax, abx."""
    u = build_universe(["a", "b", "x"])
    return union_close(
        SetFamily(u, [u.subset("a", "b").bits, u.subset("a", "x").bits]), True)


def single_edge():
    u = build_universe(["a", "b"])
    return union_close(SetFamily(u, [3]), True)


class TestClosure:
    def test_hub_example(self, hub):
        u = hub.universe
        closed, isolated = closure(hub, u.subset("x1", "a", "x5"))
        assert closed == u.subset("x1", "a")
        assert isolated == u.subset("x5")

    def test_member_is_closed(self, hub):
        for member in hub:
            closed, isolated = closure(hub, member)
            assert closed == member and isolated.bits == 0

    def test_lonely_element(self, hub):
        u = hub.universe
        closed, isolated = closure(hub, u.subset("x5"))
        assert closed.bits == 0 and isolated == u.subset("x5")

    def test_membership_equivalences(self, pentagon):
        # member <=> fixed point <=> empty isolated part
        u = pentagon.universe
        for w in range(32):
            x = ElementSet(u, w)
            closed, isolated = closure(pentagon, x)
            member = x in pentagon
            assert member == (closed == x) == (isolated.bits == 0)

    @given(st.lists(st.integers(min_value=0, max_value=31), min_size=1,
                    max_size=6),
           st.integers(min_value=0, max_value=31),
           st.integers(min_value=0, max_value=31))
    def test_monotone_contractive_idempotent(self, gens, x, y):
        u = build_universe(list("abcde"))
        f = union_close(SetFamily(u, gens), True)
        px = closure(f, ElementSet(u, x))[0].bits
        py = closure(f, ElementSet(u, x | y))[0].bits
        assert px & ~x == 0                      # contractive
        assert px & ~py == 0                     # monotone on x <= x|y
        assert closure(f, ElementSet(u, px))[0].bits == px  # idempotent


class TestDensity:
    def test_pentagon(self, pentagon):
        assert density(pentagon, pentagon.universe.subset("0", "1")) == Fraction(7, 17)

    def test_path(self, path):
        assert density(path, path.universe.subset("a", "b")) == Fraction(4, 7)

    def test_empty_is_one(self, path):
        assert density(path, path.universe.empty) == 1

    def test_unbounded_reciprocal(self, path):
        u = path.universe
        assert reciprocal_density(path, u.subset("x", "y")) == Fraction(7, 1)
        f = SetFamily(u, [0, u.subset("x", "a").bits])
        assert reciprocal_density(f, u.subset("y")) is None


class TestNeighborhoods:
    def test_pentagon(self, pentagon):
        u = pentagon.universe
        prof = neighborhood_profile(pentagon, u.subset("0", "1"))
        assert prof.n1 == u.subset("0", "1", "2", "4")
        assert prof.n2 == u.full
        assert prof.na == u.subset("4")
        assert prof.nb == u.subset("2")
        assert prof.nab.bits == 0
        assert prof.n_of["4"] == 1 and prof.n_of["2"] == 1

    def test_hub(self, hub):
        u = hub.universe
        prof = neighborhood_profile(hub, u.subset("a", "b"))
        assert prof.nab == u.subset("x3")
        assert prof.na == u.subset("x1", "x2")
        assert prof.nb == u.subset("x4")
        assert u.subset("x5") <= prof.n2 - prof.n1

    def test_single_edge(self):
        f = single_edge()
        u = f.universe
        prof = neighborhood_profile(f, u.subset("a", "b"))
        assert prof.n1 == prof.n2 == u.subset("a", "b")
        assert prof.na.bits == prof.nb.bits == prof.nab.bits == 0

    def test_partition_covers_when_graph(self, pentagon):
        u = pentagon.universe
        prof = neighborhood_profile(pentagon, u.subset("1", "2"))
        combined = prof.na | prof.nb | prof.nab
        assert combined == prof.n1 - prof.u
        assert prof.n_of == {lab: len(prof.a_edges[lab])
                             for lab in prof.n_of}


class TestGeneratedNeighborhood:
    def test_hub_first(self, hub):
        u = hub.universe
        first = generated_neighborhood(hub, u.subset("a", "b"), "first")
        gens = {s.labels() for s in
                SetFamily(u, first.generator_masks)}
        assert ("x4", "x5") not in gens and len(gens) == 6

    def test_hub_third_is_whole_family(self, hub):
        u = hub.universe
        third = generated_neighborhood(hub, u.subset("a", "b"), "third")
        assert third == hub

    def test_no_incident_generator(self):
        u = build_universe(list("abcz"))
        f = union_close(
            SetFamily(u, [u.subset("a", "b").bits, u.subset("b", "c").bits]),
            True)
        for order in ("first", "third"):
            assert generated_neighborhood(f, u.subset("z"), order).masks == (0,)

    def test_tail_vertex_reaches_more_at_third(self, hub):
        u = hub.universe
        first = generated_neighborhood(hub, u.subset("x5"), "first")
        third = generated_neighborhood(hub, u.subset("x5"), "third")
        assert len(first) == 2   # just the tail edge with the empty set
        assert len(third) > len(first)


class TestGuaranteedCompletions:
    @pytest.mark.parametrize("xs,expected", [
        (("x4", "x5"), {(), ("b",), ("a", "b")}),
        (("x3",), {("a",), ("b",), ("a", "b")}),
        (("x1", "x4"), {("a", "b")}),
    ])
    def test_hub_golden(self, hub, xs, expected):
        u = hub.universe
        for method in ("generators", "closure"):
            e = guaranteed_completions(hub, u.subset("a", "b"), u.subset(*xs),
                                       method)
            assert {s.labels() for s in e} == expected

    def test_methods_agree_on_path_neighbourhood(self, path):
        u = path.universe
        uu = u.subset("a", "b")
        for w in range(16):
            x = ElementSet(u, w & ~uu.bits)
            a = guaranteed_completions(path, uu, x, "generators")
            b = guaranteed_completions(path, uu, x, "closure")
            assert a == b

    def test_x_meeting_u_rejected(self, path):
        u = path.universe
        with pytest.raises(ValidationError):
            guaranteed_completions(path, u.subset("a", "b"), u.subset("a"))

    def test_contains_u_when_u_generates(self, pentagon):
        u = pentagon.universe
        uu = u.subset("0", "1")
        for w in range(32):
            x = ElementSet(u, w & ~uu.bits)
            e = guaranteed_completions(pentagon, uu, x)
            assert e.universe.width == 2
            assert (1 << 2) - 1 in {s.bits for s in e}  # the full completion


class TestCompletions:
    def test_path_empty(self, path):
        u = path.universe
        t = completions(path, u.subset("a", "b"), u.empty)
        assert {s.labels() for s in t} == {(), ("a", "b")}

    def test_path_x(self, path):
        u = path.universe
        t = completions(path, u.subset("a", "b"), u.subset("x"))
        assert {s.labels() for s in t} == {("a",), ("a", "b")}

    def test_contains_guaranteed(self, path):
        u = path.universe
        uu = u.subset("a", "b")
        away = sorted({m & ~uu.bits for m in path.masks})
        for m in away:
            x = ElementSet(u, m)
            e = {s.bits for s in guaranteed_completions(path, uu, x)}
            t = {s.bits for s in completions(path, uu, x)}
            assert e <= t


class TestCompletionAverage:
    def test_path_self_extension(self, path):
        u = path.universe
        ext = ExtensionSpec.create(path, SetFamily(u, [0]))
        rep = completion_average(path, ext, u.subset("a", "b"))
        assert rep.mu == Fraction(7, 4)
        sizes = {k.labels(): v for k, v in rep.e_sizes.items()}
        assert sizes == {(): 2, ("x",): 2, ("y",): 2, ("x", "y"): 1}
        assert rep.one_over_rho == Fraction(7, 4)

    def test_path_join_filter_xy(self, path):
        u = path.universe
        h = SetFamily(u, [u.subset("x", "y").bits])
        rep = completion_average(path, ExtensionSpec.create(path, h),
                                 u.subset("a", "b"))
        assert rep.mu == 1

    def test_path_join_filter_x_y(self, path):
        u = path.universe
        h = SetFamily(u, [u.subset("x").bits, u.subset("y").bits,
                          u.subset("x", "y").bits])
        rep = completion_average(path, ExtensionSpec.create(path, h),
                                 u.subset("a", "b"))
        assert rep.mu == Fraction(5, 3)

    def test_invalid_extension(self, path):
        u = path.universe
        h = SetFamily(u, [u.subset("a").bits])
        with pytest.raises(ValidationError):
            completion_average(path, ExtensionSpec.create(path, h),
                               u.subset("a", "b"))

    def test_warns_when_u_not_generator(self, path):
        u = path.universe
        ext = ExtensionSpec.create(path, SetFamily(u, [0]))
        with pytest.warns(UserWarning):
            completion_average(path, ext, u.subset("a"))

    def test_identity_when_u_member(self, path, pentagon):
        """With u a member, 1/rho equals the average completion count,
        for every filter extension of the pair."""
        for f, labels in ((path, ("a", "b")), (pentagon, ("0", "1"))):
            u = f.universe
            uu = u.subset(*labels)
            prof = neighborhood_profile(f, uu)
            s = ElementSet(u, prof.n2.bits & ~uu.bits)
            for h in powerset_filters(s):
                joined = ExtensionSpec.create(f, h).joined
                away = sorted({m & ~uu.bits for m in joined.masks})
                total = sum(len(completions(joined, uu, ElementSet(u, m)))
                            for m in away)
                assert reciprocal_density(joined, uu) == Fraction(total, len(away))

    def test_guaranteed_inside_actual_over_filter_extensions(self, path):
        """E(X) sits inside the completions of X in every filter extension."""
        u = path.universe
        uu = u.subset("a", "b")
        prof = neighborhood_profile(path, uu)
        s = ElementSet(u, prof.n2.bits & ~uu.bits)
        for h in powerset_filters(s):
            joined = ExtensionSpec.create(path, h).joined
            for m in sorted({mm & ~uu.bits for mm in joined.masks}):
                x = ElementSet(u, m)
                e = {y.bits for y in guaranteed_completions(path, uu, x)}
                t = {y.bits for y in completions(joined, uu, x)}
                assert e <= t


class TestFilters:
    def test_counts(self):
        u = build_universe(list("abcdef"))
        assert len(list(powerset_filters(u.empty))) == 1
        assert len(list(powerset_filters(u.subset("a", "b")))) == 5
        assert len(list(powerset_filters(u.subset("a", "b", "c", "d")))) == 167

    def test_filters_are_up_closed_families(self):
        u = build_universe(list("abc"))
        s = u.subset("a", "b", "c")
        for filt in powerset_filters(s):
            members = set(filt.masks)
            for m in members:
                for w in range(8):
                    if m | w == w and w & ~s.bits == 0:
                        assert w in members

    def test_cap(self):
        u = build_universe(list("abcdefg"))
        with pytest.raises(CapExceededError):
            list(powerset_filters(u.full))


class TestMinCompletionAverage:
    def test_path(self, path):
        u = path.universe
        rep = min_completion_average(path, u.subset("a", "b"))
        assert rep.value == 1
        assert [s.labels() for s in rep.witness] == [("x", "y")]

    def test_two_edge_path(self):
        f = two_edge_path()
        u = f.universe
        rep = min_completion_average(f, u.subset("a", "b"))
        assert rep.value == 2

    def test_single_edge(self):
        f = single_edge()
        rep = min_completion_average(f, f.universe.subset("a", "b"))
        assert rep.value == 2
        assert rep.witness.masks == (0,)

    def test_u_must_generate(self, path):
        with pytest.raises(ValidationError):
            min_completion_average(path, path.universe.subset("x", "b"))

    def test_undercut_matches_exact(self, path, pentagon):
        for f, labels in ((path, ("a", "b")), (pentagon, ("0", "1")),
                          (two_edge_path(), ("a", "b"))):
            u = f.universe.subset(*labels)
            exact = min_completion_average(f, u).value
            assert undercut_below_two(f, u) == (exact < 2)


class TestKleitmanBound:
    def test_pentagon(self, pentagon):
        u = pentagon.universe.subset("0", "1")
        assert kleitman_bound(pentagon, u) == Fraction(9, 4)
        assert kleitman_bound(pentagon, u, brute=True) == Fraction(9, 4)

    def test_path_vanishes(self, path):
        u = path.universe.subset("a", "b")
        assert kleitman_bound(path, u) == 1
        assert kleitman_bound(path, u, brute=True) == 1

    def test_two_edge_path(self):
        f = two_edge_path()
        u = f.universe.subset("a", "b")
        assert kleitman_bound(f, u) == 2
        assert kleitman_bound(f, u, brute=True) == 2

    def test_brute_agrees_on_hub(self, hub):
        u = hub.universe.subset("a", "b")
        assert kleitman_bound(hub, u) == kleitman_bound(hub, u, brute=True)

    def test_needs_edge(self, pentagon):
        with pytest.raises(ValidationError):
            kleitman_bound(pentagon, pentagon.universe.subset("0"))


class TestLocalCertificate:
    def test_pentagon(self, pentagon):
        cert = local_degree_certificate(pentagon,
                                        pentagon.universe.subset("0", "1"))
        assert cert.min_degree_hypothesis and cert.guaranteed
        assert cert.rho == Fraction(7, 17)

    def test_path_hypothesis_fails(self, path):
        cert = local_degree_certificate(path, path.universe.subset("a", "b"))
        assert not cert.min_degree_hypothesis
        assert not cert.subgraph_hypothesis
        assert cert.rho == Fraction(4, 7)

    def test_two_edge_path_side_edge(self):
        f = two_edge_path()
        cert = local_degree_certificate(f, f.universe.subset("a", "x"))
        assert cert.guaranteed and cert.rho == HALF

    def test_explicit_subgraph(self, pentagon):
        u = pentagon.universe
        edges = SetFamily(u, [u.subset(str(i), str((i + 1) % 5)).bits
                              for i in range(5)])
        cert = local_degree_certificate(pentagon, u.subset("0", "1"), edges)
        assert cert.subgraph_hypothesis

    def test_big_generator_near_u_blocks_graph_hypothesis(self):
        u = build_universe(list("abc"))
        f = union_close(SetFamily(u, [u.subset("a", "b").bits,
                                      u.subset("a", "b", "c").bits]), True)
        cert = local_degree_certificate(f, u.subset("a", "b"))
        assert not cert.min_degree_hypothesis
        assert not cert.guaranteed
        assert cert.rho == Fraction(2, 3)

    def test_subgraph_hypothesis_with_faraway_big_generator(self):
        """A non-graph generator away from u leaves the subgraph route open."""
        u = build_universe(list("abxcde"))
        gens = [u.subset("a", "b"), u.subset("x", "a"), u.subset("x", "b"),
                u.subset("c", "d", "e")]
        f = union_close(SetFamily.from_sets(gens), True)
        uu = u.subset("a", "b")
        cert = local_degree_certificate(f, uu)
        assert not cert.min_degree_hypothesis   # generators are not a graph
        assert cert.subgraph_hypothesis and cert.guaranteed
        assert cert.rho <= HALF
        assert min_completion_average(f, uu).value == Fraction(5, 2)
        assert not undercut_below_two(f, uu)


class TestLocalityAndFilters:
    def test_e_depends_only_on_second_neighborhood(self, hub):
        u = hub.universe
        uu = u.subset("a", "b")
        prof = neighborhood_profile(hub, uu)
        n2 = prof.n2.bits
        for w in range(0, 1 << u.width, 3):
            x = w & ~uu.bits
            a = guaranteed_completions(hub, uu, ElementSet(u, x))
            b = guaranteed_completions(hub, uu, ElementSet(u, x & n2))
            assert a == b

    def test_third_neighbourhood_average_invariance(self, hub):
        u = hub.universe
        uu = u.subset("a", "b")
        third = generated_neighborhood(hub, uu, "third")
        outside = [g for g in hub.generator_masks
                   if g not in set(third.masks)]
        h0 = SetFamily(u, kernels.union_close(outside, True) if outside else [0])
        for filt_masks in ([0], [u.subset("x5").bits],
                           [u.subset("x1", "x5").bits]):
            h = SetFamily(u, kernels.union_close(filt_masks, False)
                          if filt_masks != [0] else [0])
            rep1 = completion_average(hub, ExtensionSpec.create(hub, h), uu)
            h2 = join_families(h0, h)
            rep2 = completion_average(third, ExtensionSpec.create(third, h2), uu)
            assert rep1.mu == rep2.mu
            assert ExtensionSpec.create(hub, h).joined == \
                ExtensionSpec.create(third, h2).joined

    def test_edge_filters_are_up_closed(self, pentagon):
        """The per-element activation families really are filters."""
        u = pentagon.universe
        uu = u.subset("0", "1")
        prof = neighborhood_profile(pentagon, uu)
        s = prof.n2.bits & ~uu.bits
        gen_set = set(pentagon.generator_masks)
        positions = kernels.mask_bits(s)
        for x in kernels.mask_bits(prof.n1.bits & ~uu.bits):
            for y_mask in (0, uu.bits & -uu.bits):
                member = set()
                for i in range(1 << len(positions)):
                    xs = kernels.subset_expand(positions, i)
                    hit = any(
                        g.bit_count() <= 2 and g >> x & 1
                        and (g == 1 << x or (g & ~(1 << x)) & (xs | y_mask))
                        for g in gen_set)
                    if hit:
                        member.add(xs)
                for m in member:
                    for w in range(1 << len(positions)):
                        ws = kernels.subset_expand(positions, w)
                        if m | ws == ws:
                            assert ws in member


def test_partition_injection_small_instance():
    """The shift injection between closure classes of a filter."""
    u = build_universe(list("pq"))
    g_fam = union_close(SetFamily(u, [1, 2]), False)  # {p},{q},{pq}
    g_masks = set(g_fam.masks)
    # filter generated by g in the power set of {p,q}
    h = {w for w in range(4) if any(m | w == w for m in g_masks)}

    def pi_g(y):
        return kernels.pi_union(list(g_masks), y)

    classes = {x: [y for y in h if pi_g(y) == x] for x in g_masks}
    for x in g_masks:
        for y in g_masks:
            if x | y == y and x != y:
                assert len(classes[x]) >= len(classes[y])
                images = {(z & ~y) | x for z in classes[y]}
                assert len(images) == len(classes[y])
                assert images <= set(classes[x])


def test_shrinking_inequality_grid():
    """(1-a)^b >= 1-ba on the sampled grid."""
    for ai in range(11):
        a = ai / 10
        b = 1.0
        while b <= 8.0:
            assert (1 - a) ** b >= 1 - b * a - 1e-12
            b += 0.5


def test_kleitman_lemma_exhaustive_small():
    for n in (1, 2, 3):
        filters = kernels.powerset_filters(n)
        total = 1 << (1 << n)  # unused sanity anchor
        assert total >= len(filters)
        for f1 in filters:
            for f2 in filters:
                inter = (f1 & f2).bit_count()
                assert inter * (1 << n) >= f1.bit_count() * f2.bit_count()
