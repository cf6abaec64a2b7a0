"""Concept lattices: enumeration, order structure, reduction, validation.

Concepts are enumerated with the Next-Closure algorithm and kept in
lectic order of their intents (the first attribute is the most significant
one), which makes the set representation matrix reproducible across runs.
Index 0 is always the top concept (smallest intent) and the last index the
bottom concept (intent = M).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .context import FormalContext
from .geometry import conflict_distance

__all__ = [
    "Concept",
    "ConceptLattice",
    "compute_lattice",
    "reduce_context",
    "standard_context",
    "rank",
    "validate_line_diagram",
    "DiagramReport",
    "lattices_isomorphic",
    "canonical_form",
]


@dataclass(frozen=True)
class Concept:
    """A formal concept: extent and intent as bitmasks."""

    extent: int
    intent: int


def _lectic_key(intent: int, n_attributes: int):
    # lectic order on intents = ascending binary with attribute 0 as the
    # most significant bit
    return [(intent >> i) & 1 for i in range(n_attributes)]


def _next_closure(ctx: FormalContext, intent: int):
    """Smallest closed attribute set lectically greater than ``intent``."""
    n = ctx.n_attributes
    for i in range(n - 1, -1, -1):
        bit = 1 << i
        if intent & bit:
            intent &= ~bit
        else:
            candidate = ctx.close_attributes((intent & (bit - 1)) | bit)
            # candidate must not introduce attributes below position i
            if not (candidate & (bit - 1) & ~intent):
                return candidate
    return None


@dataclass(frozen=True)
class ConceptLattice:
    """The concept lattice of a formal context.

    ``leq[i, j]`` is True iff concept i <= concept j (extent inclusion).
    ``covers`` lists (lower, upper) index pairs of the covering relation.
    All arrays are immutable after construction.
    """

    context: FormalContext
    concepts: tuple
    leq: np.ndarray
    covers: tuple
    object_concept: tuple
    attribute_concept: tuple
    top: int
    bottom: int
    join_irreducible: tuple
    meet_irreducible: tuple
    upper_covers: tuple = field(repr=False)
    lower_covers: tuple = field(repr=False)

    def __len__(self):
        return len(self.concepts)

    # -- order helpers ---------------------------------------------------

    def lt(self, i: int, j: int) -> bool:
        return i != j and bool(self.leq[i, j])

    def incomparable(self, i: int, j: int) -> bool:
        return i != j and not self.leq[i, j] and not self.leq[j, i]

    def join(self, i: int, j: int) -> int:
        ctx = self.context
        extent = ctx.close_objects(self.concepts[i].extent | self.concepts[j].extent)
        return self._index_by_extent(extent)

    def meet(self, i: int, j: int) -> int:
        ctx = self.context
        intent = ctx.close_attributes(self.concepts[i].intent | self.concepts[j].intent)
        return self._index_by_intent(intent)

    def _index_by_extent(self, extent: int) -> int:
        return self._extent_index[extent]

    def _index_by_intent(self, intent: int) -> int:
        return self._intent_index[intent]

    @property
    def _extent_index(self):
        cache = self.__dict__.get("_extent_index_cache")
        if cache is None:
            cache = {c.extent: i for i, c in enumerate(self.concepts)}
            self.__dict__["_extent_index_cache"] = cache
        return cache

    @property
    def _intent_index(self):
        cache = self.__dict__.get("_intent_index_cache")
        if cache is None:
            cache = {c.intent: i for i, c in enumerate(self.concepts)}
            self.__dict__["_intent_index_cache"] = cache
        return cache

    def labels(self, i: int):
        """Reduced labelling: objects introduced at gamma(g)=i, attributes
        introduced at mu(m)=i."""
        ctx = self.context
        objs = [ctx.objects[g] for g in range(ctx.n_objects) if self.object_concept[g] == i]
        atts = [ctx.attributes[m] for m in range(ctx.n_attributes) if self.attribute_concept[m] == i]
        return objs, atts


def compute_lattice(ctx: FormalContext) -> ConceptLattice:
    """Enumerate all formal concepts of ``ctx`` in lectic intent order."""
    intents = []
    current = ctx.close_attributes(0)
    while current is not None:
        intents.append(current)
        current = _next_closure(ctx, current)

    n = len(intents)
    extents = [ctx.derive_attributes(b) for b in intents]
    concepts = tuple(Concept(extent=a, intent=b) for a, b in zip(extents, intents))

    leq = np.zeros((n, n), dtype=bool)
    for i in range(n):
        for j in range(n):
            # subset test on extents
            leq[i, j] = (extents[i] & ~extents[j]) == 0
    leq.setflags(write=False)

    strict = leq & ~np.eye(n, dtype=bool)
    # cover = strict minus two-step strict reachability
    two_step = np.zeros_like(strict)
    for k in range(n):
        two_step |= np.outer(strict[:, k], strict[k, :])
    cover_matrix = strict & ~two_step
    covers = tuple(
        (int(i), int(j)) for i, j in np.argwhere(cover_matrix)
    )

    upper = tuple(
        tuple(int(j) for j in np.flatnonzero(cover_matrix[i])) for i in range(n)
    )
    lower = tuple(
        tuple(int(j) for j in np.flatnonzero(cover_matrix[:, i])) for i in range(n)
    )

    intent_index = {b: i for i, b in enumerate(intents)}
    object_concept = tuple(
        intent_index[ctx.derive_objects(1 << g)] for g in range(ctx.n_objects)
    )
    attribute_concept = tuple(
        intent_index[ctx.close_attributes(1 << m)] for m in range(ctx.n_attributes)
    )

    top = int(np.flatnonzero([len(u) == 0 for u in upper])[0]) if n else 0
    bottom = int(np.flatnonzero([len(l) == 0 for l in lower])[0]) if n else 0

    join_irr = tuple(i for i in range(n) if len(lower[i]) == 1)
    meet_irr = tuple(i for i in range(n) if len(upper[i]) == 1)

    return ConceptLattice(
        context=ctx,
        concepts=concepts,
        leq=leq,
        covers=covers,
        object_concept=object_concept,
        attribute_concept=attribute_concept,
        top=top,
        bottom=bottom,
        join_irreducible=join_irr,
        meet_irreducible=meet_irr,
        upper_covers=upper,
        lower_covers=lower,
    )


def rank(lat: ConceptLattice) -> dict:
    """Recursive rank: rank(bottom) = 0, rank(v) = 1 + max over lower covers."""
    n = len(lat)
    ranks = {lat.bottom: 0}
    # process in order of increasing number of strict predecessors
    order = sorted(range(n), key=lambda i: int(lat.leq[:, i].sum()))
    for v in order:
        if v in ranks:
            continue
        ranks[v] = 1 + max(ranks[u] for u in lat.lower_covers[v])
    return ranks


def standard_context(lat: ConceptLattice) -> FormalContext:
    """The standard context (J(L), M(L), <=) of a lattice."""
    ji = list(lat.join_irreducible)
    mi = list(lat.meet_irreducible)

    def _object_name(i):
        objs, _ = lat.labels(i)
        return objs[0] if objs else f"j{i}"

    def _attribute_name(i):
        _, atts = lat.labels(i)
        return atts[0] if atts else f"m{i}"

    obj_names = [_object_name(i) for i in ji]
    att_names = [_attribute_name(i) for i in mi]
    # disambiguate collisions that can arise from placeholder names
    seen = {}
    for names in (obj_names, att_names):
        for k, name in enumerate(names):
            if name in seen:
                seen[name] += 1
                names[k] = f"{name}#{seen[name]}"
            else:
                seen[name] = 0
    incidence = np.zeros((len(ji), len(mi)), dtype=bool)
    for a, i in enumerate(ji):
        for b, j in enumerate(mi):
            incidence[a, b] = lat.leq[i, j]
    return FormalContext(tuple(obj_names), tuple(att_names), incidence)


def reduce_context(ctx: FormalContext) -> FormalContext:
    """Return the standard context of the concept lattice of ``ctx``."""
    return standard_context(compute_lattice(ctx))


# -- isomorphism ---------------------------------------------------------


def canonical_form(lat: ConceptLattice) -> tuple:
    """A canonical encoding of the lattice order, identical for isomorphic
    lattices.

    Every lattice element is the join of the join-irreducibles below it (and
    dually the meet of the meet-irreducibles above it), so the family of
    irreducible down-sets determines the lattice up to isomorphism.  We
    canonicalize by minimizing over permutations of the smaller irreducible
    set, restricted to invariant-respecting blocks.
    """
    n = len(lat)
    leq = lat.leq
    ji, mi = list(lat.join_irreducible), list(lat.meet_irreducible)
    if len(ji) <= len(mi):
        gens, down = ji, True
    else:
        gens, down = mi, False
    k = len(gens)

    # element signatures: bitmask over generator positions
    def signature(e, order):
        mask = 0
        for p, g in enumerate(order):
            related = leq[g, e] if down else leq[e, g]
            if related:
                mask |= 1 << p
        return mask

    # invariant refinement on generators to cut the permutation search
    ranks = rank(lat)
    up_deg = leq.sum(axis=1)
    dn_deg = leq.sum(axis=0)
    inv = {g: (ranks[g], int(up_deg[g]), int(dn_deg[g])) for g in gens}
    for _ in range(k):
        new = {}
        for g in gens:
            neigh = sorted(
                inv[h] for h in gens if h != g and (leq[g, h] or leq[h, g])
            )
            new[g] = (inv[g], tuple(neigh))
        if len(set(new.values())) == len(set(inv.values())):
            inv = new
            break
        inv = new

    groups = {}
    for g in gens:
        groups.setdefault(inv[g], []).append(g)
    blocks = [groups[key] for key in sorted(groups)]

    best = [None]

    def encode(order):
        return tuple(sorted(signature(e, order) for e in range(n)))

    def backtrack(order, remaining):
        if not remaining:
            key = encode(order)
            if best[0] is None or key < best[0]:
                best[0] = key
            return
        block, rest = remaining[0], remaining[1:]
        if not block:
            backtrack(order, rest)
            return
        for i, g in enumerate(block):
            backtrack(order + [g], [block[:i] + block[i + 1:]] + rest)

    backtrack([], blocks)
    return (n, down, len(lat.covers), best[0])


def lattices_isomorphic(a: ConceptLattice, b: ConceptLattice) -> bool:
    if len(a) != len(b) or len(a.covers) != len(b.covers):
        return False
    return canonical_form(a) == canonical_form(b)


# -- line diagram validation ----------------------------------------------


@dataclass(frozen=True)
class DiagramReport:
    """Validity report for a layout against a lattice (not an exception)."""

    cover_violations: tuple          # (lower, upper, dy) with dy <= required
    node_clashes: tuple              # (i, j, distance) below min_gap
    conflict_violations: tuple       # (node, lower, upper, distance)
    min_conflict_distance: float

    @property
    def order_valid(self) -> bool:
        return not self.cover_violations

    @property
    def valid(self) -> bool:
        return (
            not self.cover_violations
            and not self.node_clashes
            and not self.conflict_violations
        )


def validate_line_diagram(
    lat: ConceptLattice,
    positions: np.ndarray,
    min_slope: float = 0.0,
    min_gap: float = 1e-9,
) -> DiagramReport:
    """Check the hard line-diagram constraints.

    * every cover pair strictly increases in y (and at least ``min_slope``
      per unit of horizontal distance),
    * no two nodes closer than ``min_gap``,
    * no node closer than ``min_gap`` to a non-incident cover edge.
    """
    pos = np.asarray(positions, dtype=float)
    if pos.shape[0] != len(lat):
        raise ValueError("layout does not cover all concepts")
    xy = pos[:, -2:] if pos.shape[1] > 2 else pos

    cover_violations = []
    for lo, up in lat.covers:
        dy = xy[up, 1] - xy[lo, 1]
        required = min_slope * abs(xy[up, 0] - xy[lo, 0])
        if not (dy > 0 and dy >= required):
            cover_violations.append((lo, up, float(dy)))

    node_clashes = []
    n = len(lat)
    for i in range(n):
        for j in range(i + 1, n):
            d = float(np.hypot(*(xy[i] - xy[j])))
            if d < min_gap:
                node_clashes.append((i, j, d))

    conflict_violations = []
    min_conflict = np.inf
    for v in range(n):
        for lo, up in lat.covers:
            if v == lo or v == up:
                continue
            if np.allclose(xy[lo], xy[up]):
                d = float(np.hypot(*(xy[v] - xy[lo])))
            else:
                d = conflict_distance(xy[v], xy[lo], xy[up])
            min_conflict = min(min_conflict, d)
            if d < min_gap:
                conflict_violations.append((v, lo, up, float(d)))

    if not np.isfinite(min_conflict):
        min_conflict = np.inf

    return DiagramReport(
        cover_violations=tuple(cover_violations),
        node_clashes=tuple(node_clashes),
        conflict_violations=tuple(conflict_violations),
        min_conflict_distance=float(min_conflict),
    )
