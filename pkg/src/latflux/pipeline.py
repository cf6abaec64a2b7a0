"""End-to-end drawing pipelines, quality metrics, and the evaluation harness.

The combined pipeline draws a concept lattice in three stages: a minimal
two-dimensional extension gives grid coordinates (realizer embedding), an
orthogonal projection moves them into the doubly-additive space, and the
force-directed model refines the recovered element vectors.  The classic
force-directed baseline replaces the first two stages with the Sup-Inf
planarity enhancer and parabola initialization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .additive import (
    RepresentationKind,
    build_srm,
    is_additive,
    project_additive,
    recover_vectors,
)
from .context import FormalContext
from .dimdraw import ExtensionResult, minimal_extension, realizer_embed, rotate_stretch
from .forces import (
    ForceConfig,
    ForceMode,
    initialize_vectors,
    optimize,
    planarity_enhancer,
)
from .geometry import conflict_distance, count_distinct_slopes, count_edge_crossings
from .lattice import (
    ConceptLattice,
    compute_lattice,
    validate_line_diagram,
)

__all__ = [
    "QualityMetrics",
    "PipelineResult",
    "dimflux",
    "fdp_pipeline",
    "dimdraw_layout",
    "quality_metrics",
    "layout_distance",
    "enumerate_four_meet_irreducible_lattices",
    "batch_evaluate",
    "ALGORITHMS",
]


@dataclass(frozen=True)
class QualityMetrics:
    min_conflict_distance: float
    edge_crossings: int
    distinct_slopes: int
    reference_distance: float | None = None

    def as_dict(self):
        out = {
            "min_conflict_distance": self.min_conflict_distance,
            "edge_crossings": self.edge_crossings,
            "distinct_slopes": self.distinct_slopes,
        }
        if self.reference_distance is not None:
            out["reference_distance"] = self.reference_distance
        return out


@dataclass
class PipelineResult:
    lattice: ConceptLattice
    stages: dict                      # name -> layout array
    vectors: np.ndarray | None
    extension: ExtensionResult | None
    metrics: dict                     # stage name -> QualityMetrics
    converged: bool
    flags: tuple = ()

    @property
    def layout(self) -> np.ndarray:
        return self.stages["refined"]


def quality_metrics(lat: ConceptLattice, layout: np.ndarray,
                    reference: np.ndarray | None = None) -> QualityMetrics:
    """Hard and soft readability measures of a drawn diagram."""
    pos = np.asarray(layout, dtype=float)
    min_conflict = math.inf
    for v in range(len(lat)):
        for lo, up in lat.covers:
            if v == lo or v == up:
                continue
            if np.allclose(pos[lo], pos[up]):
                d = float(np.hypot(*(pos[v] - pos[lo])))
            else:
                d = conflict_distance(pos[v], pos[lo], pos[up])
            min_conflict = min(min_conflict, d)
    if not lat.covers or math.isinf(min_conflict):
        min_conflict = math.inf
    ref = None
    if reference is not None:
        ref = layout_distance(layout, reference, normalize=True)
    return QualityMetrics(
        min_conflict_distance=float(min_conflict),
        edge_crossings=count_edge_crossings(pos, lat.covers),
        distinct_slopes=count_distinct_slopes(pos, lat.covers),
        reference_distance=ref,
    )


def layout_distance(a: np.ndarray, b: np.ndarray, normalize: bool = False) -> float:
    """Euclidean distance between two layouts of the same lattice, viewed as
    vectors of all node coordinates.  With ``normalize`` both layouts are
    first translated to centroid origin and scaled to unit RMS radius."""
    A = np.asarray(a, dtype=float)
    B = np.asarray(b, dtype=float)
    if A.shape != B.shape:
        raise ValueError("layouts must cover the same concepts")
    if normalize:
        def canon(L):
            L = L - L.mean(axis=0)
            rms = np.sqrt((L ** 2).sum(axis=1).mean())
            return L / rms if rms > 0 else L
        A, B = canon(A), canon(B)
    return float(np.linalg.norm(A - B))


def dimdraw_layout(lat: ConceptLattice, budget_conflicts: int | None = None):
    """Realizer-embedded coordinates (rotated upright) of a minimal
    two-dimensional extension."""
    ext = minimal_extension(lat, budget_conflicts)
    embedded = rotate_stretch(realizer_embed(lat, ext.realizer))
    return embedded, ext


def dimflux(ctx_or_lattice, cfg: ForceConfig | None = None,
            budget_conflicts: int | None = None) -> PipelineResult:
    """Two-dimensional extension -> projection -> force-directed refinement."""
    cfg = cfg or ForceConfig()
    lat = (
        ctx_or_lattice
        if isinstance(ctx_or_lattice, ConceptLattice)
        else compute_lattice(ctx_or_lattice)
    )
    flags = []
    if budget_conflicts is None:
        budget_conflicts = cfg.extension_budget
    embedded, ext = dimdraw_layout(lat, budget_conflicts)
    if not ext.minimal:
        flags.append("extension-budget-exceeded")

    basis = build_srm(lat, RepresentationKind.DOUBLY_ADDITIVE)
    already_additive, _ = is_additive(basis, embedded, 1e-9)
    projected = embedded.copy() if already_additive else project_additive(basis, embedded)

    vectors, _offset, _resid = recover_vectors(basis, projected)
    # the force model works on upward object / downward attribute vectors;
    # the representation parameterization is its mirror on the attributes
    nG = lat.context.n_objects
    seed_vectors = vectors.copy()
    seed_vectors[nG:] = -seed_vectors[nG:]

    result = optimize(lat, seed_vectors, ForceMode.DOUBLY_ADDITIVE, cfg)
    if not result.converged:
        flags.append("optimizer-not-converged")

    stages = {
        "embedded": embedded,
        "projected": projected,
        "refined": result.layout,
    }
    metrics = {name: quality_metrics(lat, layout) for name, layout in stages.items()}
    report = validate_line_diagram(lat, result.layout, min_gap=1e-9)
    if not report.valid:
        flags.append("refined-layout-invalid")
    return PipelineResult(
        lattice=lat,
        stages=stages,
        vectors=result.vectors,
        extension=ext,
        metrics=metrics,
        converged=result.converged,
        flags=tuple(flags),
    )


def fdp_pipeline(ctx_or_lattice, mode: ForceMode = ForceMode.DOUBLY_ADDITIVE,
                      cfg: ForceConfig | None = None) -> PipelineResult:
    """Planarity enhancer -> parabola initialization -> force optimization."""
    cfg = cfg or ForceConfig()
    lat = (
        ctx_or_lattice
        if isinstance(ctx_or_lattice, ConceptLattice)
        else compute_lattice(ctx_or_lattice)
    )
    order = planarity_enhancer(lat, mode, cfg)
    vec0 = initialize_vectors(lat, order, mode, cfg)
    initial_kind = (
        RepresentationKind.DOUBLY_ADDITIVE
        if mode is ForceMode.DOUBLY_ADDITIVE
        else RepresentationKind.ATTRIBUTE_ADDITIVE
    )
    result = optimize(lat, vec0, mode, cfg)
    flags = [] if result.converged else ["optimizer-not-converged"]
    from .forces import FdpModel  # local import to avoid cycle noise

    initial_layout = FdpModel(lat, mode, cfg).layout_in_srm_space(vec0)
    stages = {"initial": initial_layout, "refined": result.layout}
    metrics = {name: quality_metrics(lat, layout) for name, layout in stages.items()}
    report = validate_line_diagram(lat, result.layout, min_gap=1e-9)
    if not report.valid:
        flags.append("refined-layout-invalid")
    return PipelineResult(
        lattice=lat,
        stages=stages,
        vectors=result.vectors,
        extension=None,
        metrics=metrics,
        converged=result.converged,
        flags=tuple(flags),
    )


def _dimdraw_pipeline(lat: ConceptLattice, cfg: ForceConfig) -> PipelineResult:
    embedded, ext = dimdraw_layout(lat, cfg.extension_budget)
    stages = {"embedded": embedded, "refined": embedded}
    metrics = {name: quality_metrics(lat, layout) for name, layout in stages.items()}
    flags = () if ext.minimal else ("extension-budget-exceeded",)
    return PipelineResult(
        lattice=lat,
        stages=stages,
        vectors=None,
        extension=ext,
        metrics=metrics,
        converged=True,
        flags=flags,
    )


ALGORITHMS = {
    "attr-fdp": lambda lat, cfg: fdp_pipeline(lat, ForceMode.ATTRIBUTE_ADDITIVE, cfg),
    "doubly-fdp": lambda lat, cfg: fdp_pipeline(lat, ForceMode.DOUBLY_ADDITIVE, cfg),
    "dimdraw": lambda lat, cfg: _dimdraw_pipeline(lat, cfg),
    "dimflux": lambda lat, cfg: dimflux(lat, cfg),
}


# -- the 126 lattices with four meet-irreducibles ----------------------------


def _moore_families_with_top(n_attributes: int = 4):
    """All intersection-closed subset families over {0..3} containing the
    full set (families given as frozensets of attribute bitmasks)."""
    full = (1 << n_attributes) - 1
    rest = [s for s in range(full + 1) if s != full]
    out = []
    for mask in range(1 << len(rest)):
        fam = [full]
        m = mask
        i = 0
        while m:
            if m & 1:
                fam.append(rest[i])
            m >>= 1
            i += 1
        ok = True
        fam_set = set(fam)
        items = list(fam_set)
        for a in range(len(items)):
            for b in range(a + 1, len(items)):
                if items[a] & items[b] not in fam_set:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(frozenset(fam_set))
    return out


def _family_keeps_four_meet_irreducibles(fam, n_attributes: int = 4) -> bool:
    full = (1 << n_attributes) - 1
    mus = []
    for m in range(n_attributes):
        inter = full
        for s in fam:
            if s >> m & 1:
                inter &= s
        mus.append(inter)
    if len(set(mus)) != n_attributes:
        return False
    for X in mus:
        below = [Y for Y in fam if Y != X and (Y & X) == Y]
        maximal = [
            Y for Y in below
            if not any(Z != Y and (Y & Z) == Y for Z in below)
        ]
        if len(maximal) != 1:
            return False
    return True


def _family_canonical(fam, n_attributes: int = 4):
    import itertools as it

    best = None
    for perm in it.permutations(range(n_attributes)):
        mapped = []
        for s in fam:
            t = 0
            for m in range(n_attributes):
                if s >> m & 1:
                    t |= 1 << perm[m]
            mapped.append(t)
        key = tuple(sorted(mapped))
        if best is None or key < best:
            best = key
    return best


def _context_from_family(fam, n_attributes: int = 4) -> FormalContext:
    """Objects are the closed sets themselves (attribute membership rows);
    reduction then yields the standard context of the family's lattice."""
    rows = sorted(fam)
    incidence = np.array(
        [[bool(s >> m & 1) for m in range(n_attributes)] for s in rows]
    )
    return FormalContext(
        tuple(f"c{k}" for k in range(len(rows))),
        tuple(f"m{k}" for k in range(n_attributes)),
        incidence,
    )


def enumerate_four_meet_irreducible_lattices():
    """All 126 pairwise non-isomorphic lattices with exactly four
    meet-irreducible elements, as concept lattices in a stable canonical
    order (concept count, then canonical family encoding)."""
    classes = {}
    for fam in _moore_families_with_top(4):
        if not _family_keeps_four_meet_irreducibles(fam):
            continue
        key = _family_canonical(fam)
        classes.setdefault(key, fam)
    ordered = sorted(classes.items(), key=lambda kv: (len(kv[1]), kv[0]))
    return [compute_lattice(_context_from_family(fam)) for _key, fam in ordered]


# -- batch evaluation ---------------------------------------------------------


@dataclass
class BatchRow:
    lattice_id: str
    algorithm: str
    n_concepts: int
    valid: bool
    converged: bool
    metrics: QualityMetrics
    error: str | None = None

    def as_dict(self):
        out = {
            "lattice": self.lattice_id,
            "algorithm": self.algorithm,
            "concepts": self.n_concepts,
            "valid": self.valid,
            "converged": self.converged,
            **self.metrics.as_dict(),
        }
        if self.error:
            out["error"] = self.error
        return out


def batch_evaluate(lattices, algorithms, cfg: ForceConfig | None = None,
                   references: dict | None = None):
    """Run the requested algorithms over a collection of lattices.

    ``lattices`` is a list of (identifier, ConceptLattice); per-lattice
    failures are isolated into the result rows and never abort the batch.
    ``references`` optionally maps identifiers to reference layouts for the
    normalized layout-distance column.
    """
    cfg = cfg or ForceConfig()
    rows = []
    for lattice_id, lat in lattices:
        for algo in algorithms:
            runner = ALGORITHMS[algo]
            try:
                result = runner(lat, cfg)
                layout = result.layout
                report = validate_line_diagram(lat, layout, min_gap=1e-9)
                reference = (references or {}).get(lattice_id)
                metrics = quality_metrics(lat, layout, reference)
                rows.append(
                    BatchRow(
                        lattice_id=lattice_id,
                        algorithm=algo,
                        n_concepts=len(lat),
                        valid=report.valid,
                        converged=result.converged,
                        metrics=metrics,
                    )
                )
            except Exception as exc:  # isolate per-lattice failures
                rows.append(
                    BatchRow(
                        lattice_id=lattice_id,
                        algorithm=algo,
                        n_concepts=len(lat),
                        valid=False,
                        converged=False,
                        metrics=QualityMetrics(math.nan, -1, -1),
                        error=f"{type(exc).__name__}: {exc}",
                    )
                )
    return rows
