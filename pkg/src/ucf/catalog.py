"""Named small structures shared by tests, audits, and the CLI."""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations

from ucf import kernels
from ucf.core import SetFamily, Universe, build_universe, union_close
from ucf.lattice import LatticeView, Poset


def chain_poset(k: int) -> Poset:
    """The k-element chain [k]."""
    return Poset.from_relations(k, [(i, i + 1) for i in range(k - 1)])


def antichain_poset(k: int) -> Poset:
    return Poset.from_relations(k, [])


def chain_lattice(k: int) -> LatticeView:
    return LatticeView.from_poset(chain_poset(k))


def boolean_family(n: int) -> SetFamily:
    """All subsets of an n-element universe."""
    u = build_universe([chr(ord("a") + i) for i in range(n)])
    return SetFamily(u, range(1 << n))


def boolean_lattice(n: int) -> LatticeView:
    from ucf.lattice import order_of_family

    return order_of_family(boolean_family(n))


def diamond_lattice() -> LatticeView:
    """Three atoms between bottom and top (the modular non-distributive M3)."""
    p = Poset.from_relations(
        5, [(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)],
        labels=("bot", "p", "q", "r", "top"))
    return LatticeView.from_poset(p)


def pentagon_lattice() -> LatticeView:
    """The five-element non-modular N5: bot < x < z < top and bot < y < top."""
    p = Poset.from_relations(
        5, [(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)],
        labels=("bot", "x", "z", "y", "top"))
    return LatticeView.from_poset(p)


def graph_family(n_vertices: int, edges, singletons=()) -> SetFamily:
    """Union closure (with the empty set) of the given edges and singletons."""
    u = build_universe([str(i) for i in range(n_vertices)])
    gens = [u.subset(str(a), str(b)).bits for a, b in edges]
    gens += [u.subset(str(v)).bits for v in singletons]
    return SetFamily(u, kernels.union_close(gens, True))


def cycle_family(n: int) -> SetFamily:
    """Family generated by the edges of the n-cycle, with the empty set."""
    return graph_family(n, [(i, (i + 1) % n) for i in range(n)])


def pentagon_family() -> SetFamily:
    return cycle_family(5)


def triangle_family() -> SetFamily:
    return cycle_family(3)


def path_family(labels: str = "xaby") -> SetFamily:
    """Union closure of the path along the given labels, with the empty set."""
    u = build_universe(list(labels))
    gens = [u.subset(labels[i], labels[i + 1]).bits for i in range(len(labels) - 1)]
    return SetFamily(u, kernels.union_close(gens, True))


def hub_graph_family() -> SetFamily:
    """Two hub vertices a, b with pendants and a tail: the worked E-set example."""
    u = build_universe(["a", "b", "x1", "x2", "x3", "x4", "x5"])
    gens = [
        u.subset("a", "b"), u.subset("x1", "a"), u.subset("x2", "a"),
        u.subset("x3", "a"), u.subset("x3", "b"), u.subset("x4", "b"),
        u.subset("x4", "x5"),
    ]
    return union_close(SetFamily.from_sets(gens), True)


@lru_cache(maxsize=4)
def union_closed_families(max_universe: int, min_members: int = 1,
                          require_empty: bool = False) -> tuple[SetFamily, ...]:
    """Every union-closed family over a fixed universe of the given size."""
    u = build_universe([str(i) for i in range(max_universe)])
    out = []
    for fam_mask in kernels.union_closed_masks(max_universe):
        masks = kernels.mask_bits(fam_mask)
        if len(masks) < min_members:
            continue
        if require_empty and masks[0] != 0:
            continue
        out.append(SetFamily(u, masks))
    return tuple(out)


def complete_graph_edges(n: int) -> list[tuple[int, int]]:
    return list(combinations(range(n), 2))
