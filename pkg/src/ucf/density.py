"""The density engine: closure, neighbourhoods, completion sets, extension
averages, filter minimisation, and the local degree certificates.

Fix a union-closed family F containing the empty set and a set U.  An
extension of (F, U) is F v H for a non-empty union-closed H whose support
avoids U.  For X disjoint from U the completions of X in an extension F' are
the Y inside U with X | Y in F'; the guaranteed completions E(X) are the Y
certified by F alone to be completions in *every* extension.  The average
|E(X)| over the U-avoiding restriction of F' lower-bounds |F'| / |F'_above_U|,
so pushing that average to 2 certifies that U witnesses the union-closed
sets conjecture.  Every density here is an exact Fraction; no verdict ever
goes through floating point.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction

from ucf import kernels
from ucf.core import ElementSet, SetFamily, Universe, join_families
from ucf.errors import CapExceededError, UcfError, ValidationError

FILTER_CAP = 6


def _require_union_closed(f: SetFamily, with_empty: bool = False) -> None:
    if not f.is_union_closed:
        raise ValidationError("operation requires a union-closed family")
    if with_empty and not f.contains_empty:
        raise ValidationError("operation requires the empty set as a member")


def closure(f: SetFamily, x: ElementSet) -> tuple[ElementSet, ElementSet]:
    """The closure of x in f and the isolated part x minus it.

    The closure is the union of the members of f inside x, equivalently the
    union of the generators inside x; x belongs to f exactly when the
    isolated part is empty.
    """
    _require_union_closed(f)
    pi = kernels.pi_union(list(f.masks), x.bits)
    return (ElementSet(f.universe, pi), ElementSet(f.universe, x.bits & ~pi))


def density(f: SetFamily, u: ElementSet) -> Fraction:
    """Fraction of members containing u."""
    if not f.masks:
        raise ValidationError("density of the empty family is undefined")
    return Fraction(kernels.count_supersets(list(f.masks), u.bits), len(f))


def reciprocal_density(f: SetFamily, u: ElementSet) -> Fraction | None:
    """|f| / |members containing u|, or None when no member contains u."""
    if not f.masks:
        raise ValidationError("density of the empty family is undefined")
    d = kernels.count_supersets(list(f.masks), u.bits)
    return None if d == 0 else Fraction(len(f), d)


@dataclass(frozen=True)
class NeighborhoodProfile:
    """First and second element neighbourhoods of u, with the edge partition.

    For u = {a, b} (a the smaller-indexed element) the part beyond u splits
    into elements adjacent only to a, only to b, or to both, where adjacency
    means a two-element generator.  a_edges lists, per element x outside u,
    the two-element generators at x avoiding u; n_of counts them.
    """

    u: ElementSet
    n1: ElementSet
    n2: ElementSet
    na: ElementSet | None
    nb: ElementSet | None
    nab: ElementSet | None
    a_edges: dict[str, tuple[ElementSet, ...]]
    n_of: dict[str, int]

    @property
    def partition_applicable(self) -> bool:
        return self.na is not None


def _neighborhood_mask(gens, x_mask: int) -> int:
    out = x_mask
    for g in gens:
        if g & x_mask:
            out |= g
    return out


def neighborhood_profile(f: SetFamily, u: ElementSet) -> NeighborhoodProfile:
    _require_union_closed(f, with_empty=True)
    gens = f.generator_masks
    n1 = _neighborhood_mask(gens, u.bits)
    n2 = _neighborhood_mask(gens, n1)
    universe = f.universe

    na = nb = nab = None
    if len(u) == 2:
        a_bit, b_bit = (1 << i for i in kernels.mask_bits(u.bits))
        gen_set = set(gens)
        na_m = nb_m = nab_m = 0
        for i in kernels.mask_bits(n1 & ~u.bits):
            x_bit = 1 << i
            at_a = (x_bit | a_bit) in gen_set
            at_b = (x_bit | b_bit) in gen_set
            if at_a and at_b:
                nab_m |= x_bit
            elif at_a:
                na_m |= x_bit
            elif at_b:
                nb_m |= x_bit
        na = ElementSet(universe, na_m)
        nb = ElementSet(universe, nb_m)
        nab = ElementSet(universe, nab_m)

    a_edges: dict[str, tuple[ElementSet, ...]] = {}
    n_of: dict[str, int] = {}
    for i in kernels.mask_bits(n1 & ~u.bits):
        x_bit = 1 << i
        edges = tuple(
            ElementSet(universe, g)
            for g in gens
            if g.bit_count() == 2 and g & x_bit and not (g & ~x_bit) & u.bits
        )
        label = universe.label(i)
        a_edges[label] = edges
        n_of[label] = len(edges)

    return NeighborhoodProfile(
        u=u,
        n1=ElementSet(universe, n1),
        n2=ElementSet(universe, n2),
        na=na, nb=nb, nab=nab,
        a_edges=a_edges, n_of=n_of,
    )


def generated_neighborhood(f: SetFamily, u: ElementSet,
                           order: str = "first") -> SetFamily:
    """The union-closed family generated by the generators meeting u.

    order="third" regenerates from everything meeting the support of the
    first neighbourhood family, reaching two steps of generators.
    """
    _require_union_closed(f, with_empty=True)
    gens = f.generator_masks
    touched = [g for g in gens if g & u.bits]
    if order == "third":
        support = 0
        for g in touched:
            support |= g
        touched = [g for g in gens if g & support]
    elif order != "first":
        raise ValidationError(f"unknown neighbourhood order {order!r}")
    closed = kernels.union_close(touched, True)
    return SetFamily(f.universe, closed)


def _sub_universe(u: ElementSet) -> Universe:
    labels = u.labels()
    return Universe(labels if labels else ("_",))


def completions(fprime: SetFamily, u: ElementSet, x: ElementSet) -> SetFamily:
    """All Y inside u with x | Y a member, as a family over u's labels."""
    if x.bits & u.bits:
        raise ValidationError("x must avoid u")
    have = fprime._mask_set
    positions = kernels.mask_bits(u.bits)
    masks = [yi for yi in range(1 << len(positions))
             if (x.bits | kernels.subset_expand(positions, yi)) in have]
    return SetFamily(_sub_universe(u), masks)


def guaranteed_completions(f: SetFamily, u: ElementSet, x: ElementSet,
                           method: str = "generators") -> SetFamily:
    """The completions of x certified by f alone, over u's labels.

    Two independent routes are exposed and cross-checked by the tests:
    method="generators" runs the generator-cover conditions; while
    method="closure" evaluates the closure conditions directly, namely that
    the closure of x | Y meets u exactly in Y and swallows the closure of
    x | u outside u.
    """
    _require_union_closed(f, with_empty=True)
    if x.bits & u.bits:
        raise ValidationError("x must avoid u")
    if len(u) > 6:
        raise CapExceededError(
            "guaranteed completions enumerate the subsets of u; "
            "u is capped at 6 elements")
    if method == "generators":
        ymask = kernels.eset_mask(list(f.generator_masks), u.bits, x.bits)
        masks = kernels.mask_bits(ymask)
    elif method == "closure":
        members = list(f.masks)
        positions = kernels.mask_bits(u.bits)
        pi_xu = kernels.pi_union(members, x.bits | u.bits)
        need_outside = pi_xu & ~u.bits
        masks = []
        for yi in range(1 << len(positions)):
            y = kernels.subset_expand(positions, yi)
            pi = kernels.pi_union(members, x.bits | y)
            if pi & u.bits == y and need_outside & ~pi == 0:
                masks.append(yi)
    else:
        raise ValidationError(f"unknown method {method!r}")
    return SetFamily(_sub_universe(u), masks)


@dataclass(frozen=True)
class ExtensionSpec:
    """A conservative extension: joined = base v h for union-closed h."""

    base: SetFamily
    h: SetFamily
    joined: SetFamily

    @classmethod
    def create(cls, base: SetFamily, h: SetFamily) -> "ExtensionSpec":
        if not h.masks:
            raise ValidationError("extension family must be non-empty")
        if not h.is_union_closed:
            raise ValidationError("extension family must be union-closed")
        return cls(base, h, join_families(base, h))


@dataclass(frozen=True)
class MuReport:
    """Exact average completion guarantee over the u-avoiding restriction."""

    mu: Fraction
    e_sizes: dict[ElementSet, int]
    rho: Fraction | None
    one_over_rho: Fraction | None


def completion_average(base: SetFamily, ext: ExtensionSpec,
                       u: ElementSet) -> MuReport:
    """Average |E(X)| over X in the u-avoiding restriction of the extension.

    Always at most the reciprocal density of u in the extension; the report
    re-checks that inequality and refuses to return otherwise.
    """
    _require_union_closed(base, with_empty=True)
    if ext.base != base:
        raise ValidationError("extension spec was built for a different base")
    if ext.h.union_mask & u.bits:
        raise ValidationError("invalid extension: support meets u")
    if not ext.h.masks:
        raise ValidationError("invalid extension: empty family")
    if u.bits not in base.generator_masks:
        warnings.warn("u is not a generator; density-property reading is off",
                      stacklevel=2)
    away = kernels.masks_without(list(ext.joined.masks), u.bits)
    gens = list(base.generator_masks)
    sizes = kernels.eset_sizes_many(gens, u.bits, away)
    mu = Fraction(sum(sizes), len(away))
    e_sizes = {ElementSet(base.universe, m): s for m, s in zip(away, sizes)}
    rho = density(ext.joined, u)
    inv = reciprocal_density(ext.joined, u)
    if inv is not None and mu > inv:
        raise UcfError("internal invariant failed: mu exceeds 1/rho")
    return MuReport(mu=mu, e_sizes=e_sizes, rho=rho, one_over_rho=inv)


def powerset_filters(s: ElementSet, cap: int = FILTER_CAP):
    """Yield every non-empty up-closed subfamily of the power set of s.

    The count is one less than the Dedekind number of |s|.  Raises when |s|
    exceeds the cap; pass a larger cap explicitly to go further.
    """
    k = len(s)
    if k > cap:
        raise CapExceededError(
            f"filter enumeration over {k} elements exceeds cap {cap}; "
            "raise the cap to proceed")
    positions = kernels.mask_bits(s.bits)
    universe = s.universe
    for fmask in kernels.powerset_filters(k):
        members = [kernels.subset_expand(positions, i)
                   for i in kernels.mask_bits(fmask)]
        yield SetFamily(universe, members)


@dataclass(frozen=True)
class MinimizationReport:
    """Exact minimum of the completion average over all extensions."""

    value: Fraction
    witness: SetFamily


def _filter_masks_and_sizes(f: SetFamily, u: ElementSet, cap: int):
    profile = neighborhood_profile(f, u)
    s_mask = profile.n2.bits & ~u.bits
    k = s_mask.bit_count()
    if k > cap:
        raise CapExceededError(
            f"minimisation over {k} outside elements exceeds cap {cap}")
    third = generated_neighborhood(f, u, "third")
    gens3 = list(third.generator_masks)
    sizes = kernels.eset_sizes_powerset(gens3, u.bits, s_mask)
    return s_mask, sizes


def min_completion_average(f: SetFamily, u: ElementSet,
                           cap: int = FILTER_CAP) -> MinimizationReport:
    """Minimise the completion average over every extension of (f, u).

    The search space collapses to the non-empty filters of the power set of
    the second neighbourhood minus u: the average only depends on that
    locality, and some minimising extension restricts to such a filter.  The
    witness is the minimising filter, lexicographically least encoding on
    ties.
    """
    _require_union_closed(f, with_empty=True)
    if u.bits not in f.generator_masks:
        raise ValidationError("u must be a generator of f")
    s_mask, sizes = _filter_masks_and_sizes(f, u, cap)
    positions = kernels.mask_bits(s_mask)

    best: Fraction | None = None
    best_members: tuple[int, ...] | None = None
    for fmask in kernels.powerset_filters(len(positions)):
        idxs = kernels.mask_bits(fmask)
        value = Fraction(sum(sizes[i] for i in idxs), len(idxs))
        if best is None or value < best:
            best = value
            best_members = None
        if value == best:
            members = tuple(sorted(kernels.subset_expand(positions, i)
                                   for i in idxs))
            if best_members is None or members < best_members:
                best_members = members
    assert best is not None and best_members is not None
    return MinimizationReport(value=best,
                              witness=SetFamily(f.universe, best_members))


def undercut_below_two(f: SetFamily, u: ElementSet,
                       cap: int = FILTER_CAP) -> bool:
    """Can any extension push the completion average below 2?

    Only filters whose minimal members have exactly one guaranteed
    completion can witness an average below 2, so only those are scanned.
    """
    _require_union_closed(f, with_empty=True)
    if u.bits not in f.generator_masks:
        raise ValidationError("u must be a generator of f")
    s_mask, sizes = _filter_masks_and_sizes(f, u, cap)
    k = s_mask.bit_count()
    for fmask in kernels.powerset_filters(k):
        idxs = kernels.mask_bits(fmask)
        minimal_ok = True
        for i in idxs:
            if any(j != i and i | j == i for j in idxs):
                continue
            if sizes[i] != 1:
                minimal_ok = False
                break
        if not minimal_ok:
            continue
        if Fraction(sum(sizes[i] for i in idxs), len(idxs)) < 2:
            return True
    return False


def _incident_edge_graph(f: SetFamily, u: ElementSet) -> None:
    gens = f.generator_masks
    for g in gens:
        if g & u.bits and g.bit_count() > 2:
            raise ValidationError(
                "generators meeting u must form a graph for this bound")


def _nu_exact(gen_set, gens2_at, x_bit: int, y_mask: int, s_mask: int) -> Fraction:
    """Density of the filter of supports activating x, given completion y."""
    if x_bit in gen_set:
        return Fraction(1)
    b_mask = 0
    for g in gens2_at.get(x_bit, ()):
        other = g & ~x_bit
        if other & y_mask:
            return Fraction(1)
        if other & s_mask:
            b_mask |= other
    b = (b_mask & s_mask).bit_count()
    return 1 - Fraction(1, 1 << b)


def _nu_brute(gen_set, gens2_at, x_bit: int, y_mask: int,
              s_mask: int) -> Fraction:
    positions = kernels.mask_bits(s_mask)
    count = 0
    total = 1 << len(positions)
    edges = gens2_at.get(x_bit, ())
    singleton = x_bit in gen_set
    for i in range(total):
        x_set = kernels.subset_expand(positions, i)
        if singleton or any((g & ~x_bit) & (x_set | y_mask) for g in edges):
            count += 1
    return Fraction(count, total)


def kleitman_bound(f: SetFamily, u: ElementSet, brute: bool = False) -> Fraction:
    """Correlation lower bound on the completion average at an edge u.

    One plus, over the proper subsets Y of u, the product over elements x
    outside u in the neighbourhood of the exact density of supports that
    activate an edge at x given Y.  Valid as a bound for every extension
    whose restriction is a filter with single-completion minimal members;
    brute=True recounts each density by enumerating all supports.
    """
    if len(u) != 2:
        raise ValidationError("the bound needs |u| = 2")
    _require_union_closed(f, with_empty=True)
    _incident_edge_graph(f, u)
    profile = neighborhood_profile(f, u)
    s_mask = profile.n2.bits & ~u.bits
    outside = kernels.mask_bits(profile.n1.bits & ~u.bits)
    gen_set = set(f.generator_masks)
    gens2_at: dict[int, list[int]] = {}
    for g in f.generator_masks:
        if g.bit_count() == 2:
            for i in kernels.mask_bits(g):
                gens2_at.setdefault(1 << i, []).append(g)
    nu = _nu_brute if brute else _nu_exact

    total = Fraction(1)
    u_positions = kernels.mask_bits(u.bits)
    for yi in range(1 << len(u_positions)):
        y_mask = kernels.subset_expand(u_positions, yi)
        if y_mask == u.bits:
            continue
        prod = Fraction(1)
        for i in outside:
            prod *= nu(gen_set, gens2_at, 1 << i, y_mask, s_mask)
            if prod == 0:
                break
        total += prod
    return total


@dataclass(frozen=True)
class LocalCertificate:
    """Verdict of the two local degree conditions at a two-element generator."""

    min_degree_hypothesis: bool
    subgraph_hypothesis: bool
    guaranteed: bool
    rho: Fraction


def _graph_degree(edges: set[int], v: int) -> int:
    return sum(1 for w in edges if w != v and w & v)


def local_degree_certificate(f: SetFamily, u: ElementSet,
                             gprime: SetFamily | str = "auto") -> LocalCertificate:
    """Check the degree hypotheses that certify density 1/2 at u.

    min_degree_hypothesis: all generators are graph sets and every edge
    meeting u has degree at least u's within the two-element generators.
    subgraph_hypothesis: the generators meeting u form a graph, and a simple
    graph inside the generators (the two-element generators when "auto")
    contains every edge meeting u with degree at least u's.  Either one
    forces the density of u to at most 1/2, which the result re-checks.
    """
    _require_union_closed(f, with_empty=True)
    if len(u) != 2:
        raise ValidationError("local certificate needs |u| = 2")
    gens = f.generator_masks
    if u.bits not in gens:
        raise ValidationError("u must be a generator of f")
    jprime = {g for g in gens if g.bit_count() == 2}

    graph_all = all(1 <= g.bit_count() <= 2 for g in gens)
    du = _graph_degree(jprime, u.bits)
    min_degree = graph_all and all(
        _graph_degree(jprime, v) >= du
        for v in jprime if v & u.bits
    )

    incident = [g for g in gens if g & u.bits]
    incident_graph = all(g.bit_count() <= 2 for g in incident)
    if gprime == "auto":
        gp = jprime
    else:
        if not all(m.bit_count() == 2 for m in gprime.masks):
            raise ValidationError("gprime must be a simple graph")
        if not set(gprime.masks) <= set(gens):
            raise ValidationError("gprime must consist of generators of f")
        gp = set(gprime.masks)
    subgraph = incident_graph and all(
        v in gp and _graph_degree(gp, v) >= _graph_degree(gp, u.bits)
        for v in incident if v.bit_count() == 2
    )

    guaranteed = min_degree or subgraph
    rho = density(f, u)
    if guaranteed and rho > Fraction(1, 2):
        raise UcfError("internal invariant failed: certificate with rho > 1/2")
    return LocalCertificate(
        min_degree_hypothesis=min_degree,
        subgraph_hypothesis=subgraph,
        guaranteed=guaranteed,
        rho=rho,
    )
