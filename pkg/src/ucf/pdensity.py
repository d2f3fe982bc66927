"""Densities and matching properties of order-preserving maps into lattices.

For a poset P with p order filters, an element a of a lattice L has P-density
|[a)^P| / |L^P|; a witnesses the P-density property when that ratio is at
most 1/p.  Type classes split L^P by the filter of points mapped above a;
the matching property asks for degree-decreasing injections between type
classes, decided here as bipartite maximum matchings.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ucf import kernels
from ucf.errors import CapExceededError, ValidationError
from ucf.lattice import LatticeView, Poset, poset_ops

MAP_BUDGET = 10 ** 6


def _guard_budget(target_size: int, source_size: int,
                  budget: int = MAP_BUDGET) -> None:
    if target_size ** source_size > budget:
        raise CapExceededError(
            f"{target_size}^{source_size} assignments exceed the map budget")


def order_maps(p: Poset, target: Poset, mode: str = "count",
               budget: int = MAP_BUDGET):
    """Count or enumerate the order-preserving maps from p into target.

    Backtracks along a linear extension of p; a new point only needs to sit
    above the images of its already-assigned predecessors, which prunes the
    target^|p| assignment space.
    """
    _guard_budget(target.n, p.n, budget)
    order = p.linear_extension()
    preds = []
    for k, e in enumerate(order):
        preds.append([j for j in range(k) if p.leq(order[j], e)])
    full = (1 << target.n) - 1
    assign = [0] * p.n
    enumerate_mode = mode == "enumerate"
    if not enumerate_mode and mode != "count":
        raise ValidationError(f"unknown mode {mode!r}")
    out: list[tuple[int, ...]] = []
    count = 0

    last = p.n - 1

    def rec(k: int):
        nonlocal count
        allowed = full
        for j in preds[k]:
            allowed &= target.up[assign[order[j]]]
        if k == last and not enumerate_mode:
            count += allowed.bit_count()
            return
        for v in kernels.mask_bits(allowed):
            assign[order[k]] = v
            if k == last:
                out.append(tuple(assign))
            else:
                rec(k + 1)

    if p.n == 0:
        return [] if enumerate_mode else 1
    rec(0)
    return out if enumerate_mode else count


def poset_filters(p: Poset) -> list[int]:
    """All up-closed subsets of p as element masks (including empty and full)."""
    if p.n > 20:
        raise CapExceededError("filter enumeration capped at 20 poset elements")
    order = p.linear_extension()[::-1]
    out: list[int] = []

    def rec(k: int, mask: int):
        if k == len(order):
            out.append(mask)
            return
        e = order[k]
        rec(k + 1, mask)
        if p.upper_covers[e] & ~mask == 0:
            rec(k + 1, mask | (1 << e))

    rec(0, 0)
    out.sort()
    return out


def filter_count(p: Poset) -> int:
    return len(poset_filters(p))


def p_density(l: LatticeView, a: int, p: Poset,
              budget: int = MAP_BUDGET) -> Fraction:
    """|[a)^P| / |L^P| for a join-irreducible a of l."""
    if a not in l.join_irreducible_indices:
        raise ValidationError("density witness must be join-irreducible")
    upset = kernels.mask_bits(l.poset.up[a])
    num = order_maps(p, l.poset.sub(upset), "count", budget)
    den = order_maps(p, l.poset, "count", budget)
    return Fraction(num, den)


def has_p_density_property(l: LatticeView, p: Poset,
                           budget: int = MAP_BUDGET) -> int | None:
    """First join-irreducible whose P-density is at most 1/(filter count)."""
    if l.n < 2:
        return None
    threshold = Fraction(1, filter_count(p))
    for a in l.join_irreducible_indices:
        if p_density(l, a, p, budget) <= threshold:
            return a
    return None


def type_partition(l: LatticeView, a: int, p: Poset,
                   budget: int = MAP_BUDGET) -> dict[int, list[tuple[int, ...]]]:
    """Split L^P by the set of points mapped above a; keys are filters of p."""
    classes: dict[int, list[tuple[int, ...]]] = {}
    for pi in order_maps(p, l.poset, "enumerate", budget):
        key = 0
        for x in range(p.n):
            if l.poset.leq(a, pi[x]):
                key |= 1 << x
        classes.setdefault(key, []).append(pi)
    for key in classes:
        for x in kernels.mask_bits(key):
            if p.up[x] & ~key:
                raise ValidationError("type class key is not a filter")
    return classes


def _max_matching(left: list[tuple[int, ...]], right: list[tuple[int, ...]],
                  poset: Poset) -> int:
    """Augmenting-path maximum matching; edge pi -> sigma iff sigma <= pi."""
    adj = []
    for pi in left:
        row = [j for j, sigma in enumerate(right)
               if all(poset.leq(sigma[x], pi[x]) for x in range(len(pi)))]
        adj.append(row)
    match_right: dict[int, int] = {}

    def augment(i: int, seen: set[int]) -> bool:
        for j in adj[i]:
            if j in seen:
                continue
            seen.add(j)
            if j not in match_right or augment(match_right[j], seen):
                match_right[j] = i
                return True
        return False

    size = 0
    for i in range(len(left)):
        if augment(i, set()):
            size += 1
    return size


@dataclass(frozen=True)
class MatchingVerdict:
    holds: bool
    a: int
    full: bool
    failing_pair: tuple[int, int] | None


def matching_property(l: LatticeView, a: int, p: Poset, full: bool = False,
                      budget: int = MAP_BUDGET) -> MatchingVerdict:
    """Decide the (full) matching property of l at the join-irreducible a.

    Plain: for every filter F of p there is a decreasing injection from the
    all-of-p type class into the F class.  Full: one for every pair of
    nested filters F inside G.  Decrease means pointwise order, so existence
    is a bipartite maximum matching question.
    """
    if a not in l.join_irreducible_indices:
        raise ValidationError("matching witness must be join-irreducible")
    classes = type_partition(l, a, p, budget)
    filters = poset_filters(p)
    top = (1 << p.n) - 1
    if full:
        pairs = [(g, f) for g in filters for f in filters if f | g == g]
    else:
        pairs = [(top, f) for f in filters]
    for g, f in pairs:
        left = classes.get(g, [])
        right = classes.get(f, [])
        if not left:
            continue
        if len(left) > len(right):
            return MatchingVerdict(False, a, full, (g, f))
        if _max_matching(left, right, l.poset) < len(left):
            return MatchingVerdict(False, a, full, (g, f))
    return MatchingVerdict(True, a, full, None)


def matching_sweep(l: LatticeView, p: Poset, full: bool = False,
                   budget: int = MAP_BUDGET) -> dict[int, MatchingVerdict]:
    """Matching verdicts for every join-irreducible of l."""
    return {a: matching_property(l, a, p, full, budget)
            for a in l.join_irreducible_indices}


def has_matching_property(l: LatticeView, p: Poset, full: bool = False,
                          budget: int = MAP_BUDGET) -> int | None:
    for a in l.join_irreducible_indices:
        if matching_property(l, a, p, full, budget).holds:
            return a
    return None


def exponent_lattice(l: LatticeView, q: Poset,
                     budget: int = MAP_BUDGET) -> LatticeView:
    """The lattice of order-preserving maps q -> l under pointwise order."""
    if not l.is_lattice:
        raise ValidationError("exponent needs a lattice base")
    maps = sorted(order_maps(q, l.poset, "enumerate", budget))
    index = {m: i for i, m in enumerate(maps)}
    n = len(maps)
    up = []
    for pi in maps:
        bits = 0
        for j, sigma in enumerate(maps):
            if all(l.poset.leq(pi[x], sigma[x]) for x in range(q.n)):
                bits |= 1 << j
        up.append(bits)
    poset = Poset(up)
    join = []
    meet = []
    for pi in maps:
        jrow = []
        mrow = []
        for sigma in maps:
            jrow.append(index[tuple(l.join(pi[x], sigma[x]) for x in range(q.n))])
            mrow.append(index[tuple(l.meet(pi[x], sigma[x]) for x in range(q.n))])
        join.append(tuple(jrow))
        meet.append(tuple(mrow))
    return LatticeView(poset, tuple(join), tuple(meet))


def product_lattice(l: LatticeView, m: LatticeView) -> LatticeView:
    """Componentwise product of two lattices; tables filled componentwise."""
    if not (l.is_lattice and m.is_lattice):
        raise ValidationError("product needs two lattices")
    poset = poset_ops(l.poset, m.poset, "product")
    nm = m.n

    def table(pick) -> tuple[tuple[int, ...], ...]:
        rows = []
        for i in range(l.n):
            for j in range(nm):
                row = []
                for k in range(l.n):
                    lk = pick(l, i, k)
                    base = lk * nm
                    row.extend(base + pick(m, j, t) for t in range(nm))
                rows.append(tuple(row))
        return tuple(rows)

    join = table(lambda lat, a, b: lat.join_table[a][b])
    meet = table(lambda lat, a, b: lat.meet_table[a][b])
    return LatticeView(poset, join, meet)


def ideal_lattice(l: LatticeView, v: int) -> tuple[LatticeView, dict[int, int]]:
    """The principal ideal of v as a lattice, plus the index embedding."""
    indices = kernels.mask_bits(l.poset.down[v])
    sub = l.poset.sub(indices)
    return LatticeView.from_poset(sub), {e: k for k, e in enumerate(indices)}


def _map_count_ok(l: LatticeView, p: Poset, map_cap: int) -> bool:
    """Cheap guard: matching checks only when |L^P| stays small."""
    try:
        return order_maps(p, l.poset, "count") <= map_cap
    except CapExceededError:
        return False


def preservation_report(corpus: list[tuple[str, LatticeView]], p: Poset,
                        q: Poset | None = None,
                        budget: int = MAP_BUDGET,
                        map_cap: int = 600) -> dict:
    """Empirically verify the preservation laws on a corpus of lattices.

    Checks, recording any counterexample verbatim: density transfers to
    products; the (full) matching property transfers to products, principal
    ideals containing the witness, and exponent lattices; the full sum
    matching property is equivalent to both full factor properties; plain
    factor properties compose to the sum, and split back at atoms.
    Matching checks are skipped (and counted) when |L^P| exceeds map_cap.
    """
    if q is None:
        q = p
    sum_pq = poset_ops(p, q, "sum")
    report = {
        section: {"checked": 0, "skipped": 0, "violations": []}
        for section in (
            "density_product", "matching_product", "matching_ideal",
            "matching_exponent", "full_sum_equivalence", "sum_composition",
        )
    }

    def note(section: str, ok: bool, label: str):
        report[section]["checked"] += 1
        if not ok:
            report[section]["violations"].append(label)

    density_havers = []
    matching: dict[str, dict[int, MatchingVerdict]] = {}
    full_matching: dict[str, dict[int, MatchingVerdict]] = {}
    for name, l in corpus:
        if has_p_density_property(l, p, budget) is not None:
            density_havers.append((name, l))
        if _map_count_ok(l, p, map_cap):
            matching[name] = matching_sweep(l, p)
            full_matching[name] = matching_sweep(l, p, full=True)

    for name_l, l in density_havers:
        for name_m, m in corpus:
            prod = product_lattice(l, m)
            try:
                ok = has_p_density_property(prod, p, budget) is not None
            except CapExceededError:
                report["density_product"]["skipped"] += 1
                continue
            note("density_product", ok, f"{name_l} x {name_m}")

    for name_l, l in corpus:
        if name_l not in matching:
            continue
        plain_as = [a for a, v in matching[name_l].items() if v.holds]
        if plain_as:
            for name_m, m in corpus:
                prod = product_lattice(l, m)
                if not _map_count_ok(prod, p, map_cap):
                    report["matching_product"]["skipped"] += 1
                    continue
                note("matching_product",
                     has_matching_property(prod, p) is not None,
                     f"{name_l} x {name_m}")
        for a in plain_as:
            for v in range(l.n):
                if not l.poset.leq(a, v):
                    continue
                ideal, emb = ideal_lattice(l, v)
                if ideal.n < 2:
                    continue
                note("matching_ideal",
                     matching_property(ideal, emb[a], p).holds,
                     f"{name_l} ideal at {l.element_name(v)}")
            expo = exponent_lattice(l, q, budget)
            if _map_count_ok(expo, p, map_cap):
                note("matching_exponent",
                     has_matching_property(expo, p) is not None,
                     f"{name_l} ^ q")
            else:
                report["matching_exponent"]["skipped"] += 1

        if not _map_count_ok(l, sum_pq, map_cap):
            report["full_sum_equivalence"]["skipped"] += 1
            continue
        full_q = matching_sweep(l, q, full=True)
        full_sum = matching_sweep(l, sum_pq, full=True)
        plain_q = matching_sweep(l, q)
        plain_sum = matching_sweep(l, sum_pq)
        bottom = l.poset.bottom()
        atoms = l.poset.upper_covers[bottom] if bottom is not None else 0
        for a in l.join_irreducible_indices:
            lhs = full_sum[a].holds
            rhs = full_matching[name_l][a].holds and full_q[a].holds
            note("full_sum_equivalence", lhs == rhs,
                 f"{name_l} at {l.element_name(a)}")
            if matching[name_l][a].holds and plain_q[a].holds:
                note("sum_composition", plain_sum[a].holds,
                     f"{name_l} at {l.element_name(a)} (compose)")
            if atoms >> a & 1 and plain_sum[a].holds:
                note("sum_composition",
                     matching[name_l][a].holds and plain_q[a].holds,
                     f"{name_l} at {l.element_name(a)} (atom split)")
    report["ok"] = all(not sec["violations"]
                       for sec in report.values() if isinstance(sec, dict))
    return report


def _is_chain(p: Poset) -> bool:
    return all(p.leq(i, j) or p.leq(j, i)
               for i in range(p.n) for j in range(p.n))


def density_audit(corpus: list[tuple[str, LatticeView]],
                  posets: list[tuple[str, Poset]],
                  budget: int = MAP_BUDGET) -> dict:
    """Classify each corpus lattice and assert its class's density claims.

    Distributive, modular, lower-semimodular-coatom, and height-counts-
    irreducibles lattices must show the P-density property for every tested
    poset; geometric ones for the chain posets; complemented-ideal and
    selfdual ones for the single point.  Every lattice (or its dual) must
    have the plain density property.  The minimum density and the crude
    asymptotic reference value 1 - 1/log_p(|L|) are reported, never asserted.
    """
    from math import log

    from ucf.lattice import classify

    single = None
    single_name = None
    for pname, p in posets:
        if p.n == 1 and single is None:
            single = p
            single_name = pname
    if single is None:
        raise ValidationError("the audit needs the one-point poset among posets")
    records = []
    ok = True
    for name, l in corpus:
        if not l.is_lattice:
            l = l.with_bottom()
        cls = classify(l)
        per_poset = {}
        violations = []
        for pname, p in posets:
            witness = has_p_density_property(l, p, budget)
            densities = [p_density(l, a, p, budget)
                         for a in l.join_irreducible_indices]
            dmin = min(densities) if densities else None
            pcount = filter_count(p)
            ref = None
            if l.n > 1 and pcount > 1:
                lg = log(l.n, pcount)
                ref = 1 - 1 / lg if lg > 0 else None
            per_poset[pname] = {
                "holds": witness is not None,
                "witness": witness,
                "min_density": dmin,
                "threshold": Fraction(1, pcount),
                "reference_bound": ref,
            }
            claimed = (
                cls.distributive or cls.modular
                or cls.lower_semimodular_coatom_exists
                or cls.height_equals_irreducibles
                or (cls.geometric and _is_chain(p))
                or (p.n == 1 and (cls.complemented_ideals or bool(cls.selfdual)))
            )
            if claimed and witness is None:
                violations.append(f"{name}: claimed {pname}-density fails")
        dual_holds = has_p_density_property(
            LatticeView.from_poset(l.poset.dual()), single, budget) is not None
        duality = per_poset[single_name]["holds"] or dual_holds
        if not duality:
            violations.append(f"{name}: neither L nor its dual has the density property")
        if violations:
            ok = False
        records.append({
            "name": name,
            "classification": cls,
            "per_poset": per_poset,
            "duality_holds": duality,
            "violations": violations,
        })
    return {"ok": ok, "lattices": records}
