"""latflux: concept lattice drawing.

Formal concept analysis core, additive diagram projections, force-directed
placement on element vectors, realizer embeddings via minimal
two-dimensional order extensions, and the combined drawing pipeline —
plus a CLI, an HTTP layout service, and a batch evaluation harness.
"""

__version__ = "0.1.0"

from .context import FormalContext
from .lattice import (
    Concept,
    ConceptLattice,
    compute_lattice,
    rank,
    reduce_context,
    standard_context,
    validate_line_diagram,
)
from .additive import (
    AdditiveBasis,
    RepresentationKind,
    build_srm,
    is_additive,
    normalize_display,
    positions_from_vectors,
    project_additive,
    project_affine,
    recover_vectors,
    snap_to_grid,
    validate_vector_cone,
)
from .forces import (
    FdpModel,
    ForceConfig,
    ForceMode,
    OptimizeResult,
    initialize_vectors,
    optimize,
    planarity_enhancer,
    sup_inf_distance,
)
from .dimdraw import (
    ExtensionResult,
    Realizer,
    enumerate_minimal_extensions,
    incomparable_pairs,
    is_two_dimensional,
    minimal_extension,
    realizer_embed,
    rotate_stretch,
)
from .pipeline import (
    PipelineResult,
    QualityMetrics,
    batch_evaluate,
    dimflux,
    enumerate_four_meet_irreducible_lattices,
    layout_distance,
    quality_metrics,
    fdp_pipeline,
)

__all__ = [name for name in dir() if not name.startswith("_")]
