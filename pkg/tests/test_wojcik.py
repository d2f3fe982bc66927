from fractions import Fraction

import pytest

from ucf.core import build_universe
from ucf.errors import ValidationError
from ucf.wojcik import (
    check_union_order,
    index_family,
    index_of_set,
    min_size_density,
    min_total_size,
    set_of_index,
    size_density,
    total_size,
)


class TestBijection:
    @pytest.mark.parametrize("n,labels", [
        (0, ()), (5, ("1", "2")), (7, ("2",)), (1, ("0",)), (2, ("0", "1")),
    ])
    def test_values(self, n, labels):
        assert set_of_index(n).labels() == labels

    def test_round_trip(self):
        for i in range(4096):
            assert index_of_set(set_of_index(i)) == i

    def test_out_of_range(self):
        with pytest.raises(ValidationError):
            set_of_index(-1)
        with pytest.raises(ValidationError):
            set_of_index(1 << 40, cap=32)


class TestIndexFamily:
    def test_four(self):
        f = index_family(4)
        assert [s.labels() for s in sorted(f, key=lambda s: index_of_set(s))] \
            == [(), ("0",), ("0", "1"), ("1",)]

    def test_one(self):
        assert index_family(1).masks == (0,)

    def test_eight_is_boolean(self):
        f = index_family(8)
        assert len(f) == 8 and f.union_mask == 0b111

    def test_union_closed_up_to_512(self):
        for n in range(1, 513):
            assert index_family(n).is_union_closed


class TestSizes:
    def test_total(self):
        assert total_size(index_family(4)) == 4
        assert total_size(index_family(1)) == 0

    def test_size_density(self):
        u = build_universe(["1", "2"])
        from ucf.core import SetFamily

        f = SetFamily(u, [0, 1, 3])
        assert size_density(f, u) == Fraction(1, 2)

    def test_ground_mismatch(self):
        u = build_universe(["1", "2"])
        small = build_universe(["1"])
        from ucf.core import SetFamily

        f = SetFamily(u, [0, 3])
        with pytest.raises(ValidationError):
            size_density(f, small)

    def test_scaling_in_ground_size(self):
        """Density times ground size does not depend on the ground set."""
        from ucf.core import SetFamily

        u = build_universe(["1", "2"])
        f = SetFamily(u, [0, 1, 3])
        for extra in range(3):
            ground = build_universe(["1", "2"] + [f"z{i}" for i in range(extra)])
            assert size_density(f, ground) * ground.width \
                == Fraction(total_size(f), len(f))


class TestMinTotalSize:
    def test_trivial(self):
        value, fam = min_total_size(1, 3)
        assert value == 0 and fam.masks == (0,)

    def test_two(self):
        value, fam = min_total_size(2, 3)
        assert value == 1 and [s.labels() for s in fam] == [(), ("0",)]

    def test_four_matches_segment(self):
        value, _ = min_total_size(4, 4)
        assert value == total_size(index_family(4)) == 4

    def test_caps(self):
        with pytest.raises(ValidationError):
            min_total_size(9, 4)
        with pytest.raises(ValidationError):
            min_total_size(4, 5)

    def test_monotone_in_members(self):
        values = [min_total_size(n, 4)[0] for n in range(1, 9)]
        assert values == sorted(values)


class TestMinSizeDensity:
    def test_one_and_two(self):
        assert min_size_density(1)[0] == Fraction(1, 2)
        assert min_size_density(2)[0] == Fraction(1, 2)

    def test_strategies_agree(self):
        for m in (1, 2, 3):
            flat_v, flat_f = min_size_density(m, "flat")
            rec_v, rec_f = min_size_density(m, "recursive")
            assert flat_v == rec_v and flat_f == rec_f

    def test_strategies_enumerate_identically(self):
        from ucf import kernels
        from ucf.wojcik import _dfs_union_closed

        for k in (1, 2, 3):
            via_dfs = set()
            _dfs_union_closed(k, lambda ms: via_dfs.add(tuple(sorted(ms))))
            via_flat = {tuple(kernels.mask_bits(m))
                        for m in kernels.union_closed_masks(k)}
            assert via_dfs == via_flat

    def test_minimizer_covers_ground(self):
        value, fam = min_size_density(3)
        assert fam.union_mask == 0b111
        assert size_density(fam, fam.universe) == value


class TestUnionOrder:
    def test_small_bound(self):
        assert check_union_order(256)

    def test_single_instance(self):
        # the union of the 1st and 3rd sets is the 2nd, and 2 <= 3
        u1 = set_of_index(1)
        u3 = set_of_index(3)
        assert index_of_set(u1 | u3) == 2
