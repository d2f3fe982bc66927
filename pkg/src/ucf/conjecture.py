"""Conjecture-level verifiers: witnesses, problem transforms, covers, and the
exhaustive desk-scale scans.

The scans stream their enumeration, stop at the first violation, and report
the violating family verbatim in the family text format, so a failure is
always reproducible from the report alone.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from ucf import kernels
from ucf.core import ElementSet, SetFamily, build_universe, restrict
from ucf.errors import UcfError, ValidationError
from ucf.lattice import LatticeView, order_of_family

MIN_MEMBERS_NOTE = "families with fewer than two members are outside scope"


@dataclass(frozen=True)
class WitnessReport:
    kind: str
    witness: ElementSet
    degree: int
    threshold: Fraction
    satisfied: bool


def _check_analyzable(f: SetFamily) -> None:
    if len(f) < 2:
        raise ValidationError(MIN_MEMBERS_NOTE)
    if not f.is_union_closed:
        raise ValidationError("witness search requires a union-closed family")
    if f.union_mask == 0:
        raise ValidationError("witness search needs a non-empty member")


def find_witness(f: SetFamily, form: str = "element") -> WitnessReport:
    """Best conjecture witness: max-degree element or min-degree generator.

    An element witness satisfies degree >= |f|/2; a generator witness
    satisfies degree <= |f|/2.  Ties break to the smallest encoding.
    """
    _check_analyzable(f)
    n = len(f)
    threshold = Fraction(n, 2)
    if form == "element":
        best_i, best_d = 0, -1
        for i in range(f.universe.width):
            d = kernels.count_supersets(list(f.masks), 1 << i)
            if d > best_d:
                best_i, best_d = i, d
        return WitnessReport(
            kind="element",
            witness=ElementSet(f.universe, 1 << best_i),
            degree=best_d,
            threshold=threshold,
            satisfied=best_d >= threshold,
        )
    if form == "generator":
        if not f.contains_empty:
            raise ValidationError("generator witnesses need the empty set present")
        best_m, best_d = None, None
        for m in f.generator_masks:
            d = kernels.count_supersets(list(f.masks), m)
            if best_d is None or d < best_d or (d == best_d and m < best_m):
                best_m, best_d = m, d
        if best_m is None:
            raise ValidationError("family has no generators")
        return WitnessReport(
            kind="generator",
            witness=ElementSet(f.universe, best_m),
            degree=best_d,
            threshold=threshold,
            satisfied=best_d <= threshold,
        )
    raise ValidationError(f"unknown witness form {form!r}")


def complement_family(f: SetFamily) -> SetFamily:
    """Complement every member within the universe (an involution)."""
    full = f.universe.full.bits
    return SetFamily(f.universe, (full & ~m for m in f.masks))


def transform(f: SetFamily, target: str):
    """Problem transforms: complement, generator form, or semilattice form."""
    if target == "complement":
        if not (f.is_union_closed or f.is_intersection_closed):
            raise ValidationError("complement transform needs a closed family")
        return complement_family(f)
    if target == "generator_form":
        if not f.is_union_closed:
            raise ValidationError("generator form needs a union-closed family")
        return SetFamily(f.universe, f.masks + (0,))
    if target == "semilattice_form":
        if not f.is_union_closed:
            raise ValidationError("semilattice form needs a union-closed family")
        return order_of_family(SetFamily(f.universe, f.masks + (0,)))
    raise ValidationError(f"unknown transform {target!r}")


@dataclass(frozen=True)
class EquivalenceReport:
    element_form: bool
    complement_form: bool
    semilattice_form: bool
    generator_form: bool

    @property
    def agree(self) -> bool:
        return (self.element_form == self.complement_form
                == self.semilattice_form == self.generator_form)


def check_equivalences(f: SetFamily) -> EquivalenceReport:
    """Evaluate the four problem forms on a family and its transforms.

    element: some element has degree >= |f|/2.  complement: some element of
    the complement family's support has degree <= half.  semilattice: some
    join-irreducible of the order with the empty set has an up-set of at
    most half.  generator: some generator has degree <= half.
    """
    _check_analyzable(f)
    v_elem = find_witness(f, "element").satisfied

    comp = complement_family(f)
    n = len(comp)
    v_comp = False
    for i in kernels.mask_bits(comp.union_mask):
        if 2 * kernels.count_supersets(list(comp.masks), 1 << i) <= n:
            v_comp = True
            break

    with_empty = SetFamily(f.universe, f.masks + (0,))
    lv = order_of_family(with_empty)
    half = Fraction(lv.n, 2)
    v_semi = any(
        lv.poset.up[a].bit_count() <= half
        for a in lv.join_irreducible_indices
    )
    v_gen = find_witness(with_empty, "generator").satisfied
    return EquivalenceReport(
        element_form=v_elem,
        complement_form=v_comp,
        semilattice_form=v_semi,
        generator_form=v_gen,
    )


@dataclass(frozen=True)
class SufficientReport:
    cofull_member: bool
    small_average: bool
    applies: bool
    average_size: Fraction
    ground_half: Fraction
    witness: ElementSet | None
    witness_degree: int | None


def sufficient_conditions(f: SetFamily) -> SufficientReport:
    """Two double-counting conditions that force a low-degree element.

    cofull_member: some member misses only one or two elements of the
    support.  small_average: the average member size is at most half the
    support.  When either holds, a minimum-degree element of the support is
    verified to have degree at most |f|/2.
    """
    if len(f) < 2:
        raise ValidationError(MIN_MEMBERS_NOTE)
    if not f.is_intersection_closed:
        raise ValidationError("sufficient conditions need intersection-closed input")
    support = f.union_mask
    total = sum(m.bit_count() for m in f.masks)
    avg = Fraction(total, len(f))
    ground_half = Fraction(support.bit_count(), 2)
    cofull = any(1 <= (support & ~m).bit_count() <= 2 for m in f.masks)
    small_avg = avg <= ground_half
    applies = cofull or small_avg
    witness = None
    wd = None
    if applies:
        best_i, best_d = None, None
        for i in kernels.mask_bits(support):
            d = kernels.count_supersets(list(f.masks), 1 << i)
            if best_d is None or d < best_d:
                best_i, best_d = i, d
        witness = ElementSet(f.universe, 1 << best_i)
        wd = best_d
        if 2 * wd > len(f):
            raise UcfError("internal invariant failed: no verified witness")
    return SufficientReport(
        cofull_member=cofull,
        small_average=small_avg,
        applies=applies,
        average_size=avg,
        ground_half=ground_half,
        witness=witness,
        witness_degree=wd,
    )


def greedy_cover(f: SetFamily) -> tuple[str, ...]:
    """Greedy transversal of the non-empty members.

    Repeatedly takes the element covering the most remaining members
    (smallest index on ties) and keeps only the members it misses.  The
    result always covers every non-empty member, with at most
    ceil(log2(|f| + 1)) picks; that bound is re-checked before returning.
    """
    if not f.is_union_closed or not f.contains_empty:
        raise ValidationError("greedy cover needs a union-closed family with the empty set")
    if f.union_mask == 0:
        raise ValidationError("greedy cover needs a non-empty member")
    current = list(f.masks)
    picked: list[int] = []
    while any(m for m in current):
        support = 0
        for m in current:
            support |= m
        best_i, best_d = None, -1
        for i in kernels.mask_bits(support):
            d = kernels.count_supersets(current, 1 << i)
            if d > best_d:
                best_i, best_d = i, d
        picked.append(best_i)
        bit = 1 << best_i
        current = [m for m in current if not m & bit]
    bound = len(f).bit_length()
    if len(picked) > bound:
        raise UcfError("internal invariant failed: greedy cover exceeded log bound")
    return tuple(f.universe.label(i) for i in picked)


@dataclass(frozen=True)
class MinimalCoverReport:
    covers: tuple[ElementSet, ...]
    all_boolean: bool
    max_size: int
    within_log_bound: bool


def minimal_cover_report(f: SetFamily) -> MinimalCoverReport:
    """Every inclusion-minimal cover, with the Boolean-restriction check.

    For each minimal cover Y of the non-empty members, the restriction of f
    onto Y plus the empty set must be the full power set of Y; that forces
    2^|Y| <= |f| + 1.
    """
    if f.union_mask == 0:
        raise ValidationError("cover analysis needs a non-empty member")
    support_bits = kernels.mask_bits(f.union_mask)
    nonempty = [m for m in f.masks if m]
    covers = []
    for r in range(1, len(support_bits) + 1):
        for combo in combinations(support_bits, r):
            y = 0
            for i in combo:
                y |= 1 << i
            if any(not m & y for m in nonempty):
                continue
            if any(all(m & (y & ~(1 << i)) for m in nonempty) for i in combo):
                continue  # some element removable: not minimal
            covers.append(y)
    all_boolean = True
    max_size = 0
    within = True
    for y in covers:
        k = y.bit_count()
        max_size = max(max_size, k)
        onto = set(kernels.masks_without([m & y for m in f.masks], 0)) | {0}
        sub = set()
        positions = kernels.mask_bits(y)
        for i in range(1 << k):
            sub.add(kernels.subset_expand(positions, i))
        if onto != sub:
            all_boolean = False
        if (1 << k) > len(f) + 1:
            within = False
    return MinimalCoverReport(
        covers=tuple(ElementSet(f.universe, y) for y in covers),
        all_boolean=all_boolean,
        max_size=max_size,
        within_log_bound=within,
    )


def _chunks(total: int, parts: int) -> list[range]:
    parts = max(1, min(parts, total)) if total else 1
    step = (total + parts - 1) // parts if total else 1
    return [range(lo, min(lo + step, total)) for lo in range(0, total, step)]


def _merge_scan(parts: list[dict]) -> dict:
    merged = {
        "scanned": 0, "analyzed": 0, "passed": 0,
        "extremal_rho": None, "witness_family": None,
    }
    violation_index = None
    for part in parts:
        merged["scanned"] += part["scanned"]
        merged["analyzed"] += part["analyzed"]
        merged["passed"] += part["passed"]
        rho = part["extremal_rho"]
        if rho is not None and (merged["extremal_rho"] is None
                                or rho > merged["extremal_rho"]):
            merged["extremal_rho"] = rho
        if part["witness_family"] is not None:
            idx = part["violation_index"]
            if violation_index is None or idx < violation_index:
                violation_index = idx
                merged["witness_family"] = part["witness_family"]
    merged["violation_index"] = violation_index
    return merged


def scan_graph_families(max_vertices: int, include_singletons: bool = False,
                        threads: int = 1) -> dict:
    """Verify the conjecture over every labelled graph generator set.

    Enumerates all edge subsets of the complete graph (optionally crossed
    with all singleton-generator subsets), closes each under union together
    with the empty set, and checks that (a) some generator has density at
    most 1/2 and (b) every minimum-degree two-element generator has density
    at most 1/2.  Stops at the first violation and reports it verbatim.
    """
    if max_vertices > 6:
        raise ValidationError("graph scan capped at 6 vertices")
    edge_pairs = list(combinations(range(max_vertices), 2))
    edge_masks = [(1 << a) | (1 << b) for a, b in edge_pairs]
    n_single = max_vertices if include_singletons else 0
    total = (1 << len(edge_pairs)) * (1 << n_single)
    universe = build_universe([str(i) for i in range(max_vertices)])

    def run_chunk(idx_range: range) -> dict:
        from ucf.fileio import format_family

        part = {"scanned": 0, "analyzed": 0, "passed": 0,
                "extremal_rho": None, "witness_family": None,
                "violation_index": None}
        for index in idx_range:
            part["scanned"] += 1
            edge_sel = index >> n_single
            single_sel = index & ((1 << n_single) - 1)
            gens = [edge_masks[i] for i in kernels.mask_bits(edge_sel)]
            single_bits = [1 << v for v in kernels.mask_bits(single_sel)]
            gens += single_bits
            if not gens:
                continue
            part["analyzed"] += 1
            support = 0
            for g in gens:
                support |= g
            members = kernels.closed_subsets(gens, support)
            nf = len(members)

            single_set = set(single_bits)
            gen_masks = sorted(
                set(single_bits)
                | {e for e in gens if e.bit_count() == 2
                   and not all((1 << i) in single_set
                               for i in kernels.mask_bits(e))}
            )
            degs = {g: kernels.count_supersets(members, g) for g in gen_masks}
            min_rho = min(Fraction(degs[g], nf) for g in gen_masks)
            ok = min_rho <= Fraction(1, 2)
            if ok:
                jprime = [g for g in gen_masks if g.bit_count() == 2]
                if jprime:
                    gdeg = {v: sum(1 for w in jprime if w != v and w & v)
                            for v in jprime}
                    dmin = min(gdeg.values())
                    for v in jprime:
                        if gdeg[v] == dmin and 2 * degs[v] > nf:
                            ok = False
                            break
            if ok:
                part["passed"] += 1
                rho = part["extremal_rho"]
                if rho is None or min_rho > rho:
                    part["extremal_rho"] = min_rho
            else:
                part["witness_family"] = format_family(
                    SetFamily(universe, members))
                part["violation_index"] = index
                break
        return part

    parts = _run_chunks(run_chunk, _chunks(total, threads), threads)
    return _merge_scan(parts)


def _run_chunks(run_chunk, ranges, threads: int) -> list[dict]:
    if threads > 1 and len(ranges) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(run_chunk, ranges))
    parts = []
    for r in ranges:
        part = run_chunk(r)
        parts.append(part)
        if part["witness_family"] is not None:
            break
    return parts


def scan_small_families(max_universe: int, threads: int = 1) -> dict:
    """Check the element-witness form on every union-closed family over a
    small universe; reports the count and the minimum witness margin."""
    if max_universe > 4:
        raise ValidationError("family scan capped at universe size 4")
    fam_masks = kernels.union_closed_masks(max_universe)
    universe = build_universe([str(i) for i in range(max_universe)])

    def run_chunk(idx_range: range) -> dict:
        from ucf.fileio import format_family

        part = {"scanned": 0, "analyzed": 0, "passed": 0,
                "min_margin": None, "extremal_rho": None,
                "witness_family": None, "violation_index": None}
        for index in idx_range:
            fam = fam_masks[index]
            part["scanned"] += 1
            members = kernels.mask_bits(fam)
            if len(members) < 2 or members[-1] == 0:
                continue
            part["analyzed"] += 1
            best = max(kernels.count_supersets(members, 1 << i)
                       for i in range(max_universe))
            margin = best - Fraction(len(members), 2)
            if margin >= 0:
                part["passed"] += 1
                if part["min_margin"] is None or margin < part["min_margin"]:
                    part["min_margin"] = margin
            else:
                part["witness_family"] = format_family(
                    SetFamily(universe, members))
                part["violation_index"] = index
                break
        return part

    parts = _run_chunks(run_chunk, _chunks(len(fam_masks), threads), threads)
    merged = _merge_scan(parts)
    margins = [p["min_margin"] for p in parts if p["min_margin"] is not None]
    merged["min_margin"] = min(margins) if margins else None
    del merged["extremal_rho"]
    return merged
