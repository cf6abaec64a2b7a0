"""Set representations, the SRM, and orthogonal projection onto additive space.

An additive placement assigns each element of a representation set S a plane
vector and positions every concept at the sum of the vectors of its
representation.  All such placements form the column space of the 0/1 set
representation matrix (SRM), so the nearest additive diagram to an arbitrary
one is an orthogonal projection, computed here from an orthonormal basis
obtained by modified Gram-Schmidt.

Additivity *testing* is performed in the translation quotient: a diagram that
is a translate of an additive one draws identically, and bundled reference
layouts are translated for display (centred bounding box), so ``is_additive``
first removes the optimal global shift.  ``project_additive`` itself is the
plain linear projection.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .lattice import ConceptLattice

__all__ = [
    "RepresentationKind",
    "AdditiveBasis",
    "build_srm",
    "positions_from_vectors",
    "project_additive",
    "project_affine",
    "is_additive",
    "recover_vectors",
    "snap_to_grid",
    "validate_vector_cone",
    "normalize_display",
]


class RepresentationKind(enum.Enum):
    """Which set representation backs the additive space."""

    DOUBLY_ADDITIVE = "doubly"          # S = G u M,  REP(A,B) = A u (M \ B)
    ATTRIBUTE_ADDITIVE = "attribute"    # S = M,      REP(A,B) = M \ B
    OBJECT_ADDITIVE = "object"          # S = G,      REP(A,B) = A
    DUAL_ATTRIBUTE = "dual-attribute"   # S = M,      REP(A,B) = B


def _element_order(lat: ConceptLattice, kind: RepresentationKind):
    ctx = lat.context
    objs = [("object", name) for name in ctx.objects]
    atts = [("attribute", name) for name in ctx.attributes]
    if kind is RepresentationKind.DOUBLY_ADDITIVE:
        return objs + atts
    if kind is RepresentationKind.OBJECT_ADDITIVE:
        return objs
    return atts


def _rep_row(lat: ConceptLattice, kind: RepresentationKind, concept_index: int):
    ctx = lat.context
    c = lat.concepts[concept_index]
    nG, nM = ctx.n_objects, ctx.n_attributes
    ext = [(c.extent >> g) & 1 for g in range(nG)]
    in_intent = [(c.intent >> m) & 1 for m in range(nM)]
    if kind is RepresentationKind.DOUBLY_ADDITIVE:
        return ext + [1 - b for b in in_intent]
    if kind is RepresentationKind.ATTRIBUTE_ADDITIVE:
        return [1 - b for b in in_intent]
    if kind is RepresentationKind.OBJECT_ADDITIVE:
        return ext
    if kind is RepresentationKind.DUAL_ATTRIBUTE:
        return in_intent
    raise ValueError(kind)


def _gram_schmidt(columns: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Orthonormal basis of the column space by modified Gram-Schmidt with
    re-orthogonalization; columns with residual norm below ``tol`` are
    dropped."""
    basis = []
    for j in range(columns.shape[1]):
        v = columns[:, j].astype(float).copy()
        for _ in range(2):  # re-orthogonalize once for numerical safety
            for q in basis:
                v -= (q @ v) * q
        norm = np.linalg.norm(v)
        if norm >= tol:
            basis.append(v / norm)
    if not basis:
        return np.zeros((columns.shape[0], 0))
    return np.column_stack(basis)


@dataclass(frozen=True)
class AdditiveBasis:
    """SRM of a lattice for a chosen representation, with an orthonormal
    basis of its column space."""

    kind: RepresentationKind
    srm: np.ndarray                 # |concepts| x |S|, 0/1
    ortho_basis: np.ndarray         # |concepts| x rank, orthonormal columns
    element_order: tuple            # ("object"|"attribute", name) per column

    @property
    def n_concepts(self) -> int:
        return self.srm.shape[0]

    @property
    def n_elements(self) -> int:
        return self.srm.shape[1]

    @property
    def rank(self) -> int:
        return self.ortho_basis.shape[1]


def build_srm(lat: ConceptLattice, kind: RepresentationKind) -> AdditiveBasis:
    """Construct the set representation matrix in canonical concept order."""
    rows = [_rep_row(lat, kind, i) for i in range(len(lat))]
    srm = np.array(rows, dtype=int) if rows else np.zeros((0, 0), dtype=int)
    if srm.ndim == 1:
        srm = srm.reshape(len(lat), -1)
    ortho = _gram_schmidt(srm.astype(float))
    srm.setflags(write=False)
    ortho.setflags(write=False)
    return AdditiveBasis(
        kind=kind,
        srm=srm,
        ortho_basis=ortho,
        element_order=tuple(_element_order(lat, kind)),
    )


def positions_from_vectors(basis: AdditiveBasis, vectors: np.ndarray) -> np.ndarray:
    """Layout = SRM . vectors, the exact linear combination."""
    vec = np.asarray(vectors, dtype=float)
    if vec.shape[0] != basis.n_elements:
        raise ValueError("vector matrix does not cover the element set")
    if basis.n_elements == 0:
        return np.zeros((basis.n_concepts, vec.shape[1] if vec.ndim > 1 else 2))
    return basis.srm.astype(float) @ vec


def project_additive(basis: AdditiveBasis, layout: np.ndarray) -> np.ndarray:
    """Orthogonal projection of each coordinate column onto im(SRM)."""
    L = np.asarray(layout, dtype=float)
    if L.shape[0] != basis.n_concepts:
        raise ValueError("layout does not cover all concepts")
    Q = basis.ortho_basis
    if Q.shape[1] == 0:
        return np.zeros_like(L)
    return Q @ (Q.T @ L)


def project_affine(basis: AdditiveBasis, layout: np.ndarray) -> np.ndarray:
    """Orthogonal projection onto im(SRM) + global translations.

    The translation-quotient companion of :func:`project_additive`: a layout
    that is a translate of an additive placement is a fixed point.  Used by
    interactive dragging, where display layouts carry a centring shift that
    must survive the re-projection.
    """
    L = np.asarray(layout, dtype=float)
    if L.shape[0] != basis.n_concepts:
        raise ValueError("layout does not cover all concepts")
    base = project_additive(basis, L)
    residual = L - base
    Q = basis.ortho_basis
    ones = np.ones(basis.n_concepts)
    w = ones - (Q @ (Q.T @ ones) if Q.shape[1] else 0.0)
    denom = w @ w
    if denom < 1e-18:
        return base
    return base + np.outer(w, (w @ residual) / denom)


def _optimal_shift(basis: AdditiveBasis, layout: np.ndarray) -> np.ndarray:
    """Per-column translation minimizing the distance to im(SRM)."""
    L = np.asarray(layout, dtype=float)
    Q = basis.ortho_basis
    ones = np.ones(basis.n_concepts)
    w = ones - (Q @ (Q.T @ ones) if Q.shape[1] else 0.0)
    denom = w @ w
    if denom < 1e-18:  # translations already inside the additive space
        return np.zeros(L.shape[1])
    return (w @ L) / denom


def is_additive(basis: AdditiveBasis, layout: np.ndarray, tol: float):
    """Is the layout a (translate of an) additive placement?

    Returns ``(flag, residual)`` where ``residual`` is the infinity norm of
    the difference to the projected layout after removing the optimal global
    shift.  Diagrams are translation-equivalent for every drawing purpose,
    and reference layouts are shifted for display, so the test is performed
    in the translation quotient.
    """
    L = np.asarray(layout, dtype=float)
    shift = _optimal_shift(basis, L)
    centred = L - shift
    residual = float(np.abs(centred - project_additive(basis, centred)).max()) if L.size else 0.0
    return residual <= tol, residual


def recover_vectors(basis: AdditiveBasis, layout: np.ndarray):
    """Least-squares element vectors for a layout.

    Returns ``(vectors, offset, residual)`` with ``SRM @ vectors + offset``
    the best additive-plus-translation fit; among least-squares solutions the
    minimum-norm one is returned.  For a layout in im(SRM) the offset is zero
    and the recovery is exact.
    """
    L = np.asarray(layout, dtype=float)
    if L.shape[0] != basis.n_concepts:
        raise ValueError("layout does not cover all concepts")
    offset = _optimal_shift(basis, L)
    centred = L - offset
    if basis.n_elements == 0:
        residual = float(np.linalg.norm(centred)) if centred.size else 0.0
        return np.zeros((0, L.shape[1])), offset, residual
    vectors, *_ = np.linalg.lstsq(basis.srm.astype(float), centred, rcond=None)
    residual = float(np.linalg.norm(basis.srm @ vectors - centred))
    return vectors, offset, residual


def snap_to_grid(basis: AdditiveBasis, layout: np.ndarray, grid_step: float):
    """Snap the *element vectors* (not the nodes) to the grid.

    The SRM has integer entries, so rounding every vector component (and the
    global offset) to the nearest multiple of ``grid_step`` yields a layout
    whose node coordinates are all grid multiples while staying additive.
    """
    if grid_step <= 0:
        raise ValueError("grid_step must be positive")
    vectors, offset, _ = recover_vectors(basis, layout)
    snapped_vec = np.round(vectors / grid_step) * grid_step
    snapped_off = np.round(offset / grid_step) * grid_step
    return positions_from_vectors(basis, snapped_vec) + snapped_off


def validate_vector_cone(lat: ConceptLattice, basis: AdditiveBasis, vectors) -> bool:
    """True iff for every cover pair the y-sum over the representation
    difference is strictly positive, i.e. the induced layout is a valid
    upward diagram."""
    vec = np.asarray(vectors, dtype=float)
    srm = basis.srm
    for lo, up in lat.covers:
        diff = srm[up] - srm[lo]
        if float(diff @ vec[:, 1]) <= 0:
            return False
    return True


def normalize_display(layout: np.ndarray, top_index: int, top_y: float | None = None) -> np.ndarray:
    """Display normalization used for bundled reference diagrams: uniform
    rescale so the top concept keeps (or is assigned) its y-coordinate, then
    horizontal bounding-box centring.  A pure presentation transform; it does
    not change validity and keeps y-columns additive."""
    L = np.asarray(layout, dtype=float).copy()
    if top_y is None:
        top_y = L[top_index, 1]
    cur = L[top_index, 1]
    if abs(cur) > 1e-15:
        L = L * (top_y / cur)
    L[:, 0] -= (L[:, 0].max() + L[:, 0].min()) / 2.0
    return L
