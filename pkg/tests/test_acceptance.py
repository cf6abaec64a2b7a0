"""Acceptance criteria, one test per criterion, at their stated tolerances.

Each test prints a single PASS line on success so a ``pytest -s`` run yields
a per-criterion report.  The FM(3) criterion asserts the stated reference values
(extension size 15, twelve minimal solutions); the machine-verified values
for the genuine free modular lattice differ (16 and 6, matching the 16
inserted edges of the reference diagram), so that assertion documents the
discrepancy rather than hiding it; see the companion test in
``test_dimdraw.py`` for the verified values.
"""

import itertools as it
import math
import random
import time

import numpy as np
import pytest

from golden import DRAG_FRAMES, DRAG_NODE, DRAG_STEP, DWARF_SRM

from latflux import data
from latflux.additive import (
    RepresentationKind,
    build_srm,
    is_additive,
    normalize_display,
    positions_from_vectors,
    project_additive,
)
from latflux.dimdraw import (
    enumerate_minimal_extensions,
    incomparable_pairs,
    is_two_dimensional,
    minimal_extension,
    realizer_embed,
    rotate_stretch,
)
from latflux.forces import FdpModel, ForceMode, SingularConfigurationError
from latflux.lattice import compute_lattice, validate_line_diagram
from latflux.pipeline import (
    batch_evaluate,
    enumerate_four_meet_irreducible_lattices,
)

pytestmark = pytest.mark.acceptance


def _report(name):
    print(f"ACCEPTANCE PASS: {name}")


# -- 1. concept count ----------------------------------------------------------


def test_criterion_concept_count():
    """Dwarf-planet context yields exactly 11 concepts in under a second."""
    t0 = time.perf_counter()
    lat = compute_lattice(data.dwarf_planets())
    elapsed = time.perf_counter() - t0
    assert len(lat) == 11
    assert elapsed < 1.0
    _report(f"concept count (11 concepts in {elapsed * 1000:.1f} ms)")


# -- 2. SRM golden ---------------------------------------------------------------


def test_criterion_srm_golden():
    """Doubly-additive SRM equals the reference 11 x 9 matrix bit for bit."""
    lat = compute_lattice(data.dwarf_planets())
    basis = build_srm(lat, RepresentationKind.DOUBLY_ADDITIVE)
    assert basis.srm.shape == (11, 9)
    assert np.array_equal(basis.srm, DWARF_SRM)
    _report("SRM golden (bit-for-bit)")


# -- 3. projection golden -----------------------------------------------------------


def test_criterion_projection_golden():
    """Projecting the hand layout reproduces the reference additive layout
    within 1e-3 per coordinate (after its display normalization: uniform
    rescale keeping the top at y = 12, horizontal bounding-box centring)."""
    lat = compute_lattice(data.dwarf_planets())
    basis = build_srm(lat, RepresentationKind.DOUBLY_ADDITIVE)
    projected = project_additive(basis, data.dwarf_planets_hand_layout())
    displayed = normalize_display(projected, lat.top, 12.0)
    error = np.abs(displayed - data.dwarf_planets_projected_layout()).max()
    assert error < 1e-3
    _report(f"projection golden (max deviation {error:.2e})")


# -- 4. drag reproduction -------------------------------------------------------------


def test_criterion_drag_reproduction():
    """Three equal horizontal steps on the middle atom reproduce the three
    reference intermediate layouts within 1e-3 per coordinate."""
    lat = compute_lattice(data.dwarf_planets())
    basis = build_srm(lat, RepresentationKind.DOUBLY_ADDITIVE)
    layout = data.dwarf_planets_projected_layout().copy()
    worst = 0.0
    for frame in DRAG_FRAMES:
        moved = layout.copy()
        moved[DRAG_NODE, 0] += DRAG_STEP
        layout = normalize_display(project_additive(basis, moved), lat.top, 12.0)
        worst = max(worst, float(np.abs(layout - frame).max()))
        assert np.abs(layout - frame).max() < 1e-3
    _report(f"drag reproduction (worst deviation {worst:.2e})")


# -- 5. FM(3) extension ----------------------------------------------------------------


@pytest.mark.slow
def test_criterion_fm3_extension():
    """Stated values: minimal extension size 15 with exactly 12 minimal
    solutions, within a ten-minute budget, and a non-additive embedding.

    The size and solution-count assertions below reflect the criterion as
    stated; the verified minimum for the free modular lattice is 16
    (the reference diagram itself inserts 16 edges) with 6 solutions forming
    one orbit of the order-12 symmetry group.
    """
    t0 = time.perf_counter()
    leq = data.free_modular_lattice_order()
    result = minimal_extension(leq)
    solutions = enumerate_minimal_extensions(leq, result.k)
    elapsed = time.perf_counter() - t0
    assert elapsed < 600.0

    # non-additivity of the embedded representative
    lat = compute_lattice(data.free_modular_standard_context())
    lat_result = minimal_extension(lat)
    embedded = rotate_stretch(realizer_embed(lat, lat_result.realizer))
    basis = build_srm(lat, RepresentationKind.DOUBLY_ADDITIVE)
    projected = project_additive(basis, embedded)
    residual = float(np.abs(embedded - projected).max())
    assert residual > 1e-3

    assert result.minimal
    assert result.k == 15, (
        f"verified minimal closed extension size is {result.k}; the reference "
        f"diagram inserts {result.k} edges while the criterion states 15"
    )
    assert len(solutions) == 12, (
        f"verified distinct minimal added-pair sets: {len(solutions)}"
    )
    _report(
        f"FM(3) extension (k={result.k}, {len(solutions)} solutions, "
        f"residual {residual:.3f}, {elapsed:.0f}s)"
    )


# -- 6. 126-lattice enumeration -----------------------------------------------------------


def test_criterion_126_enumeration():
    """Exactly 126 pairwise non-isomorphic lattices with four
    meet-irreducibles, within one minute."""
    from latflux.lattice import canonical_form

    t0 = time.perf_counter()
    lattices = enumerate_four_meet_irreducible_lattices()
    elapsed = time.perf_counter() - t0
    assert len(lattices) == 126
    forms = {canonical_form(lat) for lat in lattices}
    assert len(forms) == 126
    assert elapsed < 60.0
    _report(f"126-lattice enumeration ({elapsed:.1f}s)")


# -- 7. batch validity -----------------------------------------------------------------------


@pytest.mark.slow
def test_criterion_batch_validity():
    """The combined pipeline yields hard-constraint-valid diagrams for all
    126 lattices within fifteen minutes."""
    t0 = time.perf_counter()
    lattices = enumerate_four_meet_irreducible_lattices()
    rows = batch_evaluate(
        [(f"lattice-{i + 1:03d}", lat) for i, lat in enumerate(lattices)],
        ["dimflux"],
    )
    elapsed = time.perf_counter() - t0
    assert len(rows) == 126
    invalid = [r for r in rows if not r.valid or r.error]
    assert not invalid, [r.lattice_id for r in invalid]
    assert all(r.metrics.min_conflict_distance > 0 for r in rows)
    assert elapsed < 900.0
    _report(f"batch validity (126/126 valid, {elapsed:.0f}s)")


# -- 8. gradient suite -----------------------------------------------------------------------


def _repulsive_boundary_safe(model, vec, tol=1e-4):
    W = model.positions(vec)
    v, lo, up, w, w1, w2, f, a, b = model._pair_geometry(W)
    af = np.einsum("ij,ij->i", a, f)
    bf = np.einsum("ij,ij->i", b, f)
    return not (np.any(np.abs(af) < tol) or np.any(np.abs(bf) < tol))


def _grav_boundary_safe(model, vec, tol=1e-4):
    for e in model.variables:
        x, y = vec[e]
        sigma = 1.0 if model.is_object[e] else -1.0
        ym = sigma * y
        if abs(ym) < tol:
            return False
        if ym > 0:
            psi = math.atan2(ym, x)
            phi0 = model.phi0[e]
            if abs(psi - phi0) < tol or abs(psi - (math.pi - phi0)) < tol:
                return False
    return True


def test_criterion_gradient_suite():
    """For 200 random non-degenerate states per energy term, the analytic
    force matches the central finite difference within 1e-3 relative."""
    rng = np.random.default_rng(2024)
    lat = compute_lattice(data.dwarf_planets())
    model = FdpModel(lat, ForceMode.DOUBLY_ADDITIVE)
    h = 1e-6
    counted = {"repulsive": 0, "attractive": 0, "gravitational": 0}
    worst = {"repulsive": 0.0, "attractive": 0.0, "gravitational": 0.0}

    terms = {
        "repulsive": (
            lambda v: model.repulsive_energy(model.positions(v)),
            model.repulsive_force,
            _repulsive_boundary_safe,
        ),
        "attractive": (
            lambda v: model.attractive_energy(model.positions(v)),
            model.attractive_force,
            lambda m, v: True,
        ),
        "gravitational": (
            model.gravitational_energy,
            model.gravitational_force,
            _grav_boundary_safe,
        ),
    }

    guard = 0
    while min(counted.values()) < 200 and guard < 20000:
        guard += 1
        vec = rng.normal(scale=2.0, size=(model.n_elements, 2))
        for name, (energy_fn, force_fn, safe_fn) in terms.items():
            if counted[name] >= 200 or not safe_fn(model, vec):
                continue
            try:
                force = force_fn(vec)
                e = rng.choice(model.variables)
                c = int(rng.integers(0, 2))
                vp = vec.copy(); vp[e, c] += h
                vm = vec.copy(); vm[e, c] -= h
                fd = -(energy_fn(vp) - energy_fn(vm)) / (2 * h)
            except SingularConfigurationError:
                continue
            an = force[e, c]
            scale = max(abs(fd), abs(an), 1e-8)
            rel = abs(fd - an) / scale
            assert rel <= 1e-3, (name, e, c, fd, an)
            worst[name] = max(worst[name], rel)
            counted[name] += 1

    assert all(v >= 200 for v in counted.values()), counted
    _report(
        "gradient suite (200 states/term, worst rel. err "
        + ", ".join(f"{k}={v:.1e}" for k, v in worst.items())
        + ")"
    )


# -- 9. projection properties ------------------------------------------------------------------


def test_criterion_projection_properties():
    """Idempotence, linearity and residual orthogonality of the projection,
    1000 randomized trials each, tolerance 1e-9."""
    rng = np.random.default_rng(99)
    lat = compute_lattice(data.dwarf_planets())
    basis = build_srm(lat, RepresentationKind.DOUBLY_ADDITIVE)
    S = basis.srm.astype(float)

    def project(x):
        return project_additive(basis, x)

    for _ in range(1000):
        L = rng.normal(size=(basis.n_concepts, 2))
        P = project(L)
        assert np.abs(project(P) - P).max() < 1e-9
    for _ in range(1000):
        L1 = rng.normal(size=(basis.n_concepts, 2))
        L2 = rng.normal(size=(basis.n_concepts, 2))
        a, b = rng.normal(size=2)
        lhs = project(a * L1 + b * L2)
        rhs = a * project(L1) + b * project(L2)
        assert np.abs(lhs - rhs).max() < 1e-9
    for _ in range(1000):
        L = rng.normal(size=(basis.n_concepts, 2))
        residual = L - project(L)
        assert np.abs(residual.T @ S).max() < 1e-9
    _report("projection properties (3 x 1000 trials at 1e-9)")


# -- 10. dimension oracle -----------------------------------------------------------------------


def _random_poset(n, p, rng):
    leq = np.zeros((n, n), dtype=bool)
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                leq[i, j] = True
    for k in range(n):
        for i in range(n):
            if leq[i, k]:
                leq[i] |= leq[k]
    return leq | np.eye(n, dtype=bool)


def _linear_extensions(leq, cap=None):
    n = leq.shape[0]
    strict = leq & ~np.eye(n, dtype=bool)
    out = []

    def rec(prefix, remaining):
        if cap is not None and len(out) > cap:
            return
        if not remaining:
            out.append(tuple(prefix))
            return
        for v in sorted(remaining):
            if all(not strict[u, v] for u in remaining if u != v):
                remaining.remove(v)
                prefix.append(v)
                rec(prefix, remaining)
                prefix.pop()
                remaining.add(v)

    rec([], set(range(n)))
    return out


def _two_dim_by_extension_pairs(leq):
    n = leq.shape[0]
    strict = leq & ~np.eye(n, dtype=bool)
    exts = _linear_extensions(leq)
    positions = []
    for ext in exts:
        pos = [0] * n
        for i, e in enumerate(ext):
            pos[e] = i
        positions.append(pos)
    for p1 in positions:
        for p2 in positions:
            if all(
                (p1[u] < p1[v] and p2[u] < p2[v]) == bool(strict[u, v])
                for u in range(n) for v in range(n) if u != v
            ):
                return True
    return False


def _closure(leq, pairs):
    n = leq.shape[0]
    ext = np.array(leq, dtype=bool)
    for u, v in pairs:
        ext[u, v] = True
    for k in range(n):
        for i in range(n):
            if ext[i, k]:
                ext[i] |= ext[k]
    return ext


def _min_extension_by_subset_search(leq):
    """Exhaustive subset search over closed added-pair candidates: for
    k = 0, 1, ... try every oriented subset of incomparable pairs of size k
    that is transitively closed relative to the order; the first k admitting
    a two-dimensional extension is the minimum."""
    n = leq.shape[0]
    inc = incomparable_pairs(leq)
    oriented = [(u, v) for u, v in inc] + [(v, u) for u, v in inc]
    for k in range(len(oriented) + 1):
        for subset in it.combinations(oriented, k):
            seen = {frozenset((u, v)) for u, v in subset}
            if len(seen) < k:
                continue  # both orientations of one pair
            ext = _closure(leq, subset)
            if np.any(ext & ext.T & ~np.eye(n, dtype=bool)):
                continue  # cycle
            added = int(ext.sum() - np.array(leq).sum())
            if added != k:
                continue  # not closed: its closed form shows up separately
            if _two_dim_by_extension_pairs(ext):
                return k
    raise AssertionError("no linear extension found")


def _min_extension_by_pairs(leq):
    n = leq.shape[0]
    strict = leq & ~np.eye(n, dtype=bool)
    exts = _linear_extensions(leq)
    positions = []
    for ext in exts:
        pos = [0] * n
        for i, e in enumerate(ext):
            pos[e] = i
        positions.append(pos)
    best = None
    for p1 in positions:
        for p2 in positions:
            added = sum(
                1
                for u in range(n) for v in range(n)
                if u != v and not strict[u, v] and p1[u] < p1[v] and p2[u] < p2[v]
            )
            best = added if best is None else min(best, added)
    return best


@pytest.mark.slow
def test_criterion_dimension_oracle_random_posets():
    """minimal_extension agrees with exhaustive subset search on 50 random
    posets of up to 8 elements (bounded incomparability so the oracle is
    exhaustive in reasonable time)."""
    rng = random.Random(2718)
    checked = 0
    while checked < 50:
        n = rng.randint(4, 8)
        leq = _random_poset(n, rng.choice([0.3, 0.4, 0.5]), rng)
        if len(incomparable_pairs(leq)) > 12:
            continue
        if len(_linear_extensions(leq, cap=400)) > 400:
            continue
        mine = minimal_extension(leq)
        oracle_pairs = _min_extension_by_pairs(leq)
        assert mine.k == oracle_pairs
        if oracle_pairs <= 2:
            # full subset search is feasible for small minima
            assert _min_extension_by_subset_search(leq) == mine.k
        checked += 1
    _report("dimension oracle: 50 random posets vs exhaustive search")


def _all_lattices_up_to_7():
    """All lattices with at most 7 elements, as reflexive order matrices,
    up to isomorphism (78 in total)."""

    def transitive_relations(n):
        up = [0] * n
        results = []

        def rec(i):
            if i < 0:
                results.append(tuple(up))
                return
            full = 0
            for j in range(i + 1, n):
                full |= 1 << j
            s = full
            while True:
                ok = True
                t = s
                while t:
                    j = (t & -t).bit_length() - 1
                    if up[j] & ~s:
                        ok = False
                        break
                    t &= t - 1
                if ok:
                    up[i] = s
                    rec(i - 1)
                if s == 0:
                    break
                s = (s - 1) & full
            up[i] = 0

        rec(n - 1)
        return results

    def is_lattice(up, n):
        leq = [(1 << i) | up[i] for i in range(n)]
        maximal = sum(1 for i in range(n) if up[i] == 0)
        if maximal != 1:
            return None
        below = [0] * n
        for i in range(n):
            for j in range(n):
                if leq[j] >> i & 1:
                    below[i] |= 1 << j
        minimal = sum(1 for i in range(n) if below[i] == (1 << i))
        if minimal != 1:
            return None
        for a in range(n):
            for b in range(a + 1, n):
                ub = [v for v in range(n) if leq[a] >> v & 1 and leq[b] >> v & 1]
                mins = [u for u in ub if all(not (leq[v] >> u & 1) or v == u for v in ub)]
                if len(mins) != 1:
                    return None
                lb = [v for v in range(n) if below[a] >> v & 1 and below[b] >> v & 1]
                maxs = [u for u in lb if all(not (leq[u] >> v & 1) or v == u for v in lb)]
                if len(maxs) != 1:
                    return None
        return leq

    def canon(leq_rows, n):
        # invariant: (updeg, dndeg) refinement, then minimize over block perms
        up_deg = [bin(r).count("1") for r in leq_rows]
        dn = [0] * n
        for i in range(n):
            for j in range(n):
                if leq_rows[j] >> i & 1:
                    dn[i] += 1
        inv = list(zip(up_deg, dn))
        for _ in range(n):
            new = [
                (inv[i], tuple(sorted(inv[j] for j in range(n) if i != j and (leq_rows[i] >> j & 1 or leq_rows[j] >> i & 1))))
                for i in range(n)
            ]
            if len(set(new)) == len(set(inv)):
                inv = new
                break
            inv = new
        groups = {}
        for i in range(n):
            groups.setdefault(inv[i], []).append(i)
        blocks = [groups[k] for k in sorted(groups, key=repr)]
        best = [None]

        def encode(perm):
            out = []
            inverse = {old: new for new, old in enumerate(perm)}
            for new_i in range(n):
                row = 0
                old_i = perm[new_i]
                for new_j in range(n):
                    if leq_rows[old_i] >> perm[new_j] & 1:
                        row |= 1 << new_j
                out.append(row)
            return tuple(out)

        def backtrack(perm, remaining):
            if not remaining:
                key = encode(perm)
                if best[0] is None or key < best[0]:
                    best[0] = key
                return
            block, rest = remaining[0], remaining[1:]
            if not block:
                backtrack(perm, rest)
                return
            for idx, v in enumerate(block):
                backtrack(perm + [v], [block[:idx] + block[idx + 1:]] + rest)

        backtrack([], blocks)
        return (n, best[0])

    classes = {}
    for n in range(1, 8):
        for up in transitive_relations(n):
            leq_rows = is_lattice(up, n)
            if leq_rows is None:
                continue
            key = canon(leq_rows, n)
            if key not in classes:
                mat = np.zeros((n, n), dtype=bool)
                for i in range(n):
                    for j in range(n):
                        mat[i, j] = bool(leq_rows[i] >> j & 1)
                classes[key] = mat
    return list(classes.values())


@pytest.mark.slow
def test_criterion_dimension_oracle_all_small_lattices():
    """is_two_dimensional agrees with the exhaustive two-extension search on
    every lattice with at most 7 elements."""
    lattices = _all_lattices_up_to_7()
    assert len(lattices) == 78  # 1+1+1+2+5+15+53 lattices on 1..7 elements
    for leq in lattices:
        mine = is_two_dimensional(leq) is not None
        oracle = _two_dim_by_extension_pairs(leq)
        assert mine == oracle
    _report(f"dimension oracle: all {len(lattices)} lattices with <= 7 elements")


# -- 11. realizer embedding --------------------------------------------------------------------


def test_criterion_realizer_embedding():
    """Every computed realizer embeds bottom at the origin, top at
    (|L|-1, |L|-1), and strictly increases both coordinates along the order."""
    cases = [
        compute_lattice(data.dwarf_planets()),
        compute_lattice(data.n5_lattice()),
        compute_lattice(data.m3_lattice()),
        compute_lattice(data.contranominal_scale(3)),
        compute_lattice(data.nominal_scale(3)),
        compute_lattice(data.chain_context(4)),
    ]
    for lat in cases:
        result = minimal_extension(lat)
        pos = realizer_embed(lat, result.realizer)
        n = len(lat)
        assert tuple(pos[lat.bottom]) == (0.0, 0.0)
        assert tuple(pos[lat.top]) == (float(n - 1), float(n - 1))
        for u in range(n):
            for v in range(n):
                if lat.lt(u, v):
                    assert pos[u, 0] < pos[v, 0]
                    assert pos[u, 1] < pos[v, 1]
        rotated = rotate_stretch(pos)
        report = validate_line_diagram(lat, rotated)
        assert report.order_valid
    _report("realizer embedding (corners and strict monotonicity)")
