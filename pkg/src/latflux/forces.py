"""The force-directed placement model on element vectors.

The physical model works on one plane vector per element: object vectors
point upward, attribute vectors downward, and every concept sits at the sum
of the vectors of the objects in its extent and the attributes in its intent.
Three energies shape the diagram:

* a repulsive term, the summed reciprocal conflict distances between nodes
  and non-incident cover edges,
* an attractive term, the summed squared cover-edge lengths,
* a gravitational term that confines each vector to an angular safe zone in
  its semi-plane (upper for objects, lower for attributes) and penalizes the
  wrong semi-plane quadratically in the vertical displacement.

All forces are the exact analytic gradients of the energies (validated
against finite differences in the tests); a conjugate-gradient descent with a
monotone line search drives the optimization.  The attribute-additive mode is
the special case with the object vectors pinned at zero.

The optimized layout is returned translated into the column space of the
corresponding set representation matrix (a pure translation, since the vector
sum differs from the SRM parameterization only by the constant shift of the
summed attribute vectors).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .lattice import ConceptLattice

__all__ = [
    "ForceMode",
    "ForceConfig",
    "SingularConfigurationError",
    "FdpModel",
    "OptimizeResult",
    "sup_inf_distance",
    "sup_inf_matrix",
    "relax_spring_system",
    "planarity_enhancer",
    "initialize_vectors",
    "optimize",
]


class ForceMode(enum.Enum):
    ATTRIBUTE_ADDITIVE = "attribute"
    DOUBLY_ADDITIVE = "doubly"


@dataclass(frozen=True)
class ForceConfig:
    """Knobs of the physical model and its optimizer."""

    max_iterations: int = 2000
    convergence_tol: float = 1e-4      # infinity norm of the total force
    initial_step: float = 0.05
    w_rep: float = 1.0
    w_att: float = 1.0
    w_grav: float = 1.0
    parabola_a: float = 0.09
    parabola_c: float = 1.75
    spacing: float = 1.8
    shift_delta: float = 0.1           # chain-decomposition disambiguation
    enhancer_max_iterations: int = 1500
    enhancer_tol: float = 1e-4
    enhancer_step: float = 0.02
    cone_margin: float = 1e-6          # minimum cover y-increase kept during descent
    extension_budget: int | None = None  # SAT conflict budget for 2D extensions
    seed: int = 0                      # threaded through for reproducibility

    def with_overrides(self, **kwargs) -> "ForceConfig":
        return replace(self, **kwargs)


class SingularConfigurationError(ValueError):
    """A node lies on a non-incident edge (zero conflict distance)."""

    def __init__(self, node: int, edge):
        self.node = node
        self.edge = tuple(edge)
        super().__init__(f"zero conflict distance: node {node} on edge {self.edge}")


def mode_operator(is_object: bool) -> int:
    """+1 for objects, -1 for attributes."""
    return 1 if is_object else -1


# -- Sup-Inf distance -------------------------------------------------------


def _element_concept(lat: ConceptLattice, element: int):
    """Concept index of gamma(g) / mu(m) for unified element index."""
    nG = lat.context.n_objects
    if element < nG:
        return lat.object_concept[element]
    return lat.attribute_concept[element - nG]


def sup_inf_distance(lat: ConceptLattice, e_i: int, e_j: int) -> float:
    """Structural distance between two elements of G u M (unified indices:
    objects first).  Zero for comparable associated concepts; for mixed
    object/attribute pairs the closure discrepancy can go negative and is
    clamped at zero (it feeds a target distance)."""
    value, _ = _sup_inf_raw(lat, e_i, e_j)
    return value


def _sup_inf_raw(lat: ConceptLattice, e_i: int, e_j: int):
    if e_i == e_j:
        raise ValueError("elements must differ")
    ctx = lat.context
    nG = ctx.n_objects
    ci = lat.concepts[_element_concept(lat, e_i)]
    cj = lat.concepts[_element_concept(lat, e_j)]
    ii, jj = _element_concept(lat, e_i), _element_concept(lat, e_j)
    if lat.leq[ii, jj] or lat.leq[jj, ii]:
        return 0.0, False
    Ai, Bi = ci.extent, ci.intent
    Aj, Bj = cj.extent, cj.intent
    obj_i, obj_j = e_i < nG, e_j < nG
    if obj_i and obj_j:
        joined = ctx.close_objects(Ai | Aj)
        return float(bin(joined).count("1") - bin(Ai & Aj).count("1") - 1), False
    if not obj_i and not obj_j:
        joined = ctx.close_attributes(Bi | Bj)
        return float(bin(joined).count("1") - bin(Bi & Bj).count("1") - 1), False
    ext_join = ctx.close_objects(Ai | Aj)
    int_join = ctx.close_attributes(Bi | Bj)
    d_meet = bin(Ai & Aj).count("1") - bin(Bi & Bj).count("1")
    d_join = bin(ext_join).count("1") - bin(int_join).count("1")
    value = float(d_meet - d_join - 1)
    if value < 0:
        return 0.0, True
    return value, False


def sup_inf_matrix(lat: ConceptLattice, elements):
    """Symmetric Sup-Inf distance matrix over the given unified element
    indices; returns ``(matrix, clamped_pairs)``."""
    n = len(elements)
    mat = np.zeros((n, n))
    clamped = []
    for a in range(n):
        for b in range(a + 1, n):
            value, was_clamped = _sup_inf_raw(lat, elements[a], elements[b])
            mat[a, b] = mat[b, a] = value
            if was_clamped:
                clamped.append((elements[a], elements[b]))
    return mat, clamped


# -- model -------------------------------------------------------------------


class FdpModel:
    """Precomputed structure for energy/force evaluation on a lattice.

    Elements use unified indices: objects ``0..|G|-1`` then attributes.  The
    contribution matrix ``D`` maps element vectors to concept positions via
    the vector-sum rule (extent membership for objects, intent membership for
    attributes); in attribute-additive mode object columns are zero and the
    object vectors are not part of the variable set.
    """

    def __init__(self, lat: ConceptLattice, mode: ForceMode, cfg: ForceConfig | None = None):
        self.lattice = lat
        self.mode = mode
        self.cfg = cfg or ForceConfig()
        ctx = lat.context
        nG, nM = ctx.n_objects, ctx.n_attributes
        self.n_elements = nG + nM
        self.is_object = np.array([True] * nG + [False] * nM)

        D = np.zeros((len(lat), self.n_elements))
        for c, concept in enumerate(lat.concepts):
            for g in range(nG):
                if concept.extent >> g & 1:
                    D[c, g] = 1.0
            for m in range(nM):
                if concept.intent >> m & 1:
                    D[c, nG + m] = 1.0
        if mode is ForceMode.ATTRIBUTE_ADDITIVE:
            D[:, :nG] = 0.0
            self.variables = np.arange(nG, nG + nM)
        else:
            self.variables = np.arange(self.n_elements)
        self.pinned = np.setdiff1d(np.arange(self.n_elements), self.variables)
        self.D = D

        # node/edge pair lists for the repulsive term
        covers = lat.covers
        self.cover_lo = np.array([lo for lo, _ in covers], dtype=int)
        self.cover_up = np.array([up for _, up in covers], dtype=int)
        pairs = [
            (v, k)
            for v in range(len(lat))
            for k, (lo, up) in enumerate(covers)
            if v != lo and v != up
        ]
        self.pair_v = np.array([p[0] for p in pairs], dtype=int)
        self.pair_e = np.array([p[1] for p in pairs], dtype=int)

        # safe-zone half angles
        phi0 = np.empty(self.n_elements)
        phi0[:nG] = math.pi / (nG + 1) if nG else math.pi / 2
        phi0[nG:] = math.pi / (nM + 1) if nM else math.pi / 2
        self.phi0 = phi0

    # -- geometry -----------------------------------------------------------

    def positions(self, vectors: np.ndarray) -> np.ndarray:
        """Concept positions for the given element vectors (vector-sum rule)."""
        return self.D @ vectors

    def layout_in_srm_space(self, vectors: np.ndarray) -> np.ndarray:
        """Positions translated into the SRM column space of the mode's set
        representation (subtract the summed attribute vectors)."""
        nG = self.lattice.context.n_objects
        shift = vectors[nG:].sum(axis=0)
        return self.positions(vectors) - shift

    def is_upward(self, vectors: np.ndarray, margin: float = 0.0) -> bool:
        """Strict y-increase (by more than ``margin``) along every cover edge
        of the induced layout."""
        y = self.positions(vectors)[:, 1]
        if len(self.cover_lo) == 0:
            return True
        return bool(np.all(y[self.cover_up] - y[self.cover_lo] > margin))

    def _pair_geometry(self, W: np.ndarray):
        v, e = self.pair_v, self.pair_e
        lo, up = self.cover_lo[e], self.cover_up[e]
        w = W[v]
        w1 = W[lo]
        w2 = W[up]
        f = w2 - w1
        a = w1 - w
        b = w2 - w
        return v, lo, up, w, w1, w2, f, a, b

    def _distances(self, W: np.ndarray):
        """Conflict distance and case data for every (node, edge) pair."""
        v, lo, up, w, w1, w2, f, a, b = self._pair_geometry(W)
        af = np.einsum("ij,ij->i", a, f)
        bf = np.einsum("ij,ij->i", b, f)
        case_a = af > 0
        case_b = (bf < 0) & ~case_a
        case_c = ~case_a & ~case_b
        d = np.empty(len(v))
        na = np.linalg.norm(a, axis=1)
        nb = np.linalg.norm(b, axis=1)
        nf = np.linalg.norm(f, axis=1)
        cross = a[:, 0] * b[:, 1] - a[:, 1] * b[:, 0]
        with np.errstate(divide="ignore", invalid="ignore"):
            d[case_a] = na[case_a]
            d[case_b] = nb[case_b]
            d[case_c] = np.abs(cross[case_c]) / nf[case_c]
        if np.any(nf == 0):
            k = int(np.flatnonzero(nf == 0)[0])
            raise SingularConfigurationError(
                int(v[k]), (int(lo[k]), int(up[k]))
            )
        bad = d <= 0
        if np.any(bad):
            k = int(np.flatnonzero(bad)[0])
            raise SingularConfigurationError(int(v[k]), (int(lo[k]), int(up[k])))
        return v, lo, up, f, a, b, af, bf, case_a, case_b, case_c, d, na, nb, nf, cross

    # -- energies -----------------------------------------------------------

    def repulsive_energy(self, W: np.ndarray) -> float:
        if len(self.pair_v) == 0:
            return 0.0
        *_, d, na, nb, nf, cross = self._distances(W)
        return float(np.sum(1.0 / d))

    def attractive_energy(self, W: np.ndarray) -> float:
        f = W[self.cover_up] - W[self.cover_lo]
        return float(np.sum(f * f))

    def gravitational_energy(self, vectors: np.ndarray) -> float:
        total = 0.0
        for e in self.variables:
            total += self._grav_energy_single(vectors[e], self.phi0[e], self.is_object[e])
        return total

    def _grav_energy_single(self, n, phi0, is_obj) -> float:
        x, y = float(n[0]), float(n[1])
        sigma = 1.0 if is_obj else -1.0
        ym = sigma * y
        if ym <= 0.0:
            return y * y
        psi = math.atan2(ym, x)
        s0 = math.sin(phi0)
        if psi < phi0:
            return (psi + (s0 * s0) * (math.cos(psi) / math.sin(psi))
                    - phi0 - s0 * math.cos(phi0))
        if psi > math.pi - phi0:
            return (-psi - (s0 * s0) * (math.cos(psi) / math.sin(psi))
                    + math.pi - phi0 - s0 * math.cos(phi0))
        return 0.0

    def total_energy(self, vectors: np.ndarray) -> float:
        W = self.positions(vectors)
        cfg = self.cfg
        return (
            cfg.w_rep * self.repulsive_energy(W)
            + cfg.w_att * self.attractive_energy(W)
            + cfg.w_grav * self.gravitational_energy(vectors)
        )

    def energy_components(self, vectors: np.ndarray):
        W = self.positions(vectors)
        return (
            self.repulsive_energy(W),
            self.attractive_energy(W),
            self.gravitational_energy(vectors),
        )

    # -- forces (exact analytic gradients) -----------------------------------

    def repulsive_force(self, vectors: np.ndarray) -> np.ndarray:
        """Force per element: -d(E_rep)/d(vector)."""
        W = self.positions(vectors)
        node_grad = np.zeros_like(W)
        if len(self.pair_v):
            v, lo, up, f, a, b, af, bf, ca, cb, cc, d, na, nb, nf, cross = self._distances(W)
            inv_d2 = 1.0 / (d * d)

            gw = np.zeros((len(v), 2))
            g1 = np.zeros((len(v), 2))
            g2 = np.zeros((len(v), 2))

            # below the edge: d = |w1 - w|
            gw[ca] = -a[ca] / na[ca, None]
            g1[ca] = a[ca] / na[ca, None]
            # above the edge: d = |w2 - w|
            gw[cb] = -b[cb] / nb[cb, None]
            g2[cb] = b[cb] / nb[cb, None]
            # between: perpendicular distance
            if np.any(cc):
                s = np.sign(cross[cc])
                n_plus = np.column_stack([-f[cc, 1], f[cc, 0]]) / nf[cc, None]
                gw[cc] = s[:, None] * n_plus
                g1[cc] = -(s * bf[cc] / (nf[cc] * nf[cc]))[:, None] * n_plus
                g2[cc] = (s * af[cc] / (nf[cc] * nf[cc]))[:, None] * n_plus

            np.add.at(node_grad, v, inv_d2[:, None] * gw)
            np.add.at(node_grad, lo, inv_d2[:, None] * g1)
            np.add.at(node_grad, up, inv_d2[:, None] * g2)
        force = self.D.T @ node_grad
        force[self.pinned] = 0.0
        return force

    def attractive_force(self, vectors: np.ndarray) -> np.ndarray:
        W = self.positions(vectors)
        node_grad = np.zeros_like(W)
        f = W[self.cover_up] - W[self.cover_lo]
        np.add.at(node_grad, self.cover_up, -2.0 * f)
        np.add.at(node_grad, self.cover_lo, 2.0 * f)
        force = self.D.T @ node_grad
        force[self.pinned] = 0.0
        return force

    def gravitational_force(self, vectors: np.ndarray) -> np.ndarray:
        force = np.zeros_like(vectors)
        for e in self.variables:
            force[e] = self._grav_force_single(
                vectors[e], self.phi0[e], self.is_object[e]
            )
        return force

    def _grav_force_single(self, n, phi0, is_obj):
        x, y = float(n[0]), float(n[1])
        sigma = 1.0 if is_obj else -1.0
        ym = sigma * y
        if ym <= 0.0:
            return np.array([0.0, -2.0 * y])
        psi = math.atan2(ym, x)
        if phi0 <= psi <= math.pi - phi0:
            return np.zeros(2)
        ell = 1.0 if psi < phi0 else -1.0
        s_psi2 = (ym * ym) / (x * x + ym * ym)
        s0 = math.sin(phi0)
        scale = ell * (s_psi2 - s0 * s0) / (ym * ym)
        fm = scale * np.array([ym, -x])
        return np.array([fm[0], sigma * fm[1]])

    def total_force(self, vectors: np.ndarray) -> np.ndarray:
        cfg = self.cfg
        return (
            cfg.w_rep * self.repulsive_force(vectors)
            + cfg.w_att * self.attractive_force(vectors)
            + cfg.w_grav * self.gravitational_force(vectors)
        )


# -- planarity enhancer ------------------------------------------------------


def _variable_elements(lat: ConceptLattice, mode: ForceMode):
    nG = lat.context.n_objects
    nM = lat.context.n_attributes
    if mode is ForceMode.ATTRIBUTE_ADDITIVE:
        return list(range(nG, nG + nM))
    return list(range(nG + nM))


def relax_spring_system(dsi: np.ndarray, cfg: ForceConfig | None = None) -> np.ndarray:
    """Relax the Sup-Inf spring system from the unit-circle start.

    Descends the energy ``sum (|n_i - n_j| - d_SI)^2`` by monotone gradient
    steps until the force drops below the tolerance; returns the final
    points.
    """
    cfg = cfg or ForceConfig()
    n = dsi.shape[0]
    angles = 2.0 * math.pi * np.arange(n) / n
    pts = np.column_stack([np.cos(angles), np.sin(angles)])

    def separation(p):
        diff = p[:, None, :] - p[None, :, :]
        dist = np.linalg.norm(diff, axis=2)
        return diff, dist

    def energy(p):
        _, dist = separation(p)
        iu = np.triu_indices(n, 1)
        return float(np.sum((dist[iu] - dsi[iu]) ** 2))

    def force(p):
        diff, dist = separation(p)
        # deterministic jitter for coincident points (1/|n_i - n_j| guard)
        clash = (dist == 0) & ~np.eye(n, dtype=bool)
        if clash.any():
            for i, j in zip(*np.nonzero(clash)):
                if i < j:
                    p[i] += 1e-6 * np.array(
                        [math.cos(2.0 * math.pi * i / n + 0.5),
                         math.sin(2.0 * math.pi * i / n + 0.5)]
                    )
            diff, dist = separation(p)
        with np.errstate(divide="ignore", invalid="ignore"):
            coeff = np.where(dist > 0, (dist - dsi) / np.where(dist > 0, dist, 1.0), 0.0)
        np.fill_diagonal(coeff, 0.0)
        return -2.0 * np.einsum("ij,ijk->ik", coeff, diff)

    step = cfg.enhancer_step
    e_cur = energy(pts)
    for _ in range(cfg.enhancer_max_iterations):
        F = force(pts)
        if np.abs(F).max() < cfg.enhancer_tol:
            break
        trial = pts + step * F
        e_trial = energy(trial)
        if e_trial <= e_cur:
            pts, e_cur = trial, e_trial
            step = min(step * 1.2, 0.5)
        else:
            step *= 0.5
            if step < 1e-12:
                break
    return pts


def planarity_enhancer(lat: ConceptLattice, mode: ForceMode, cfg: ForceConfig | None = None):
    """Relax the Sup-Inf spring system and return a linear element order.

    The final points are projected onto the axis through the two most
    distant of them; the order of the projections is the element order used
    by the vector initialization.
    """
    cfg = cfg or ForceConfig()
    elements = _variable_elements(lat, mode)
    n = len(elements)
    if n == 0:
        return []
    if n == 1:
        return list(elements)
    dsi, _clamped = sup_inf_matrix(lat, elements)
    pts = relax_spring_system(dsi, cfg)

    dist = np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=2)
    i, j = np.unravel_index(np.argmax(dist), dist.shape)
    axis = pts[j] - pts[i]
    if not axis.any():
        axis = np.array([1.0, 0.0])
    proj = pts @ axis
    order = sorted(range(n), key=lambda k: (proj[k], k))
    return [elements[k] for k in order]


# -- vector initialization ---------------------------------------------------


def _parabola_offsets(count: int, spacing: float):
    return [(i - (count - 1) / 2.0) * spacing for i in range(count)]


def initialize_vectors(
    lat: ConceptLattice,
    order,
    mode: ForceMode,
    cfg: ForceConfig | None = None,
) -> np.ndarray:
    """Initial element vectors from parabola placement and chain decomposition.

    Attributes whose attribute concept is maximal within the attribute-concept
    image sit on the downward parabola ``y = -a x^2 - c``; in doubly-additive
    mode, objects whose object concept is minimal sit on the mirrored upward
    parabola.  Every remaining attribute is the mean of the attribute vectors
    strictly above it (dually for objects), plus a small perpendicular shift
    when several elements share the same neighbour set.
    """
    cfg = cfg or ForceConfig()
    ctx = lat.context
    nG, nM = ctx.n_objects, ctx.n_attributes
    vectors = np.zeros((nG + nM, 2))
    pos_in_order = {e: k for k, e in enumerate(order)}

    def place_side(indices, concept_of, is_attribute_side):
        """Place one side (attributes or objects) of the model."""
        if not indices:
            return
        concepts = {e: concept_of(e) for e in indices}
        if is_attribute_side:
            extreme = [
                e for e in indices
                if not any(lat.lt(concepts[e], concepts[o]) for o in indices if o != e)
            ]
        else:
            extreme = [
                e for e in indices
                if not any(lat.lt(concepts[o], concepts[e]) for o in indices if o != e)
            ]
        extreme.sort(key=lambda e: pos_in_order.get(e, 0))
        sign = -1.0 if is_attribute_side else 1.0
        for x, e in zip(_parabola_offsets(len(extreme), cfg.spacing), extreme):
            vectors[e] = (x, sign * (cfg.parabola_a * x * x + cfg.parabola_c))

        remaining = [e for e in indices if e not in set(extreme)]

        def above_set(e):
            if is_attribute_side:
                others = [o for o in indices if o != e and lat.lt(concepts[e], concepts[o])]
            else:
                others = [o for o in indices if o != e and lat.lt(concepts[o], concepts[e])]
            return frozenset(others)

        groups = {}
        for e in remaining:
            groups.setdefault(above_set(e), []).append(e)

        # process so that all neighbours above (below) are already placed
        def depth(e):
            return len(above_set(e))

        placed = list(extreme)
        for e in sorted(remaining, key=depth):
            neigh = above_set(e)
            mean = (
                np.mean([vectors[o] for o in neigh], axis=0)
                if neigh
                else np.zeros(2)
            )
            norm = np.hypot(*mean)
            perp = (
                np.array([-mean[1], mean[0]]) / norm
                if norm > 1e-12
                else np.array([1.0, 0.0])
            )
            group = sorted(groups[neigh], key=lambda x: pos_in_order.get(x, 0))
            if len(group) > 1:
                k = group.index(e)
                delta = (k - (len(group) - 1) / 2.0) * cfg.shift_delta * perp
            else:
                delta = np.zeros(2)
            candidate = mean + delta
            # the shift also has to separate an element from an existing
            # vector it would otherwise duplicate (overlapping concepts)
            bump = 1
            while any(np.allclose(candidate, vectors[o], atol=1e-9) for o in placed):
                candidate = mean + delta + bump * cfg.shift_delta * perp
                bump += 1
            vectors[e] = candidate
            placed.append(e)

    attribute_indices = list(range(nG, nG + nM))
    place_side(
        attribute_indices,
        lambda e: lat.attribute_concept[e - nG],
        is_attribute_side=True,
    )
    if mode is ForceMode.DOUBLY_ADDITIVE:
        object_indices = list(range(nG))
        place_side(
            object_indices,
            lambda e: lat.object_concept[e],
            is_attribute_side=False,
        )
    return vectors


# -- optimizer ----------------------------------------------------------------


@dataclass
class OptimizeResult:
    vectors: np.ndarray
    layout: np.ndarray
    trace: list = field(default_factory=list)   # (iter, e_rep, e_att, e_grav, f_inf)
    converged: bool = False
    iterations: int = 0

    @property
    def energies(self):
        return self.trace[-1][1:4] if self.trace else (math.nan,) * 3


def optimize(
    lat: ConceptLattice,
    vectors0: np.ndarray,
    mode: ForceMode,
    cfg: ForceConfig | None = None,
) -> OptimizeResult:
    """Polak-Ribiere conjugate gradient descent on the total energy.

    Accepted steps never increase the energy (Armijo backtracking); the
    direction restarts to steepest descent every ``2 |variables|`` iterations
    and whenever it stops being a descent direction.  Singular configurations
    encountered during the line search shrink the step; twenty consecutive
    failed line searches abort with ``converged=False``.
    """
    cfg = cfg or ForceConfig()
    model = FdpModel(lat, mode, cfg)
    vec = np.array(vectors0, dtype=float)
    if vec.shape != (model.n_elements, 2):
        raise ValueError("vector array has wrong shape")

    var = model.variables
    n_var = len(var)

    def components_of(v):
        try:
            return model.energy_components(v)
        except SingularConfigurationError:
            return None

    def total_of(comp):
        if comp is None:
            return math.inf
        return cfg.w_rep * comp[0] + cfg.w_att * comp[1] + cfg.w_grav * comp[2]

    trace: list = []

    def record(it, comp, f_inf):
        if comp is None:
            comp = (math.inf,) * 3
        trace.append((it, comp[0], comp[1], comp[2], f_inf))

    # deterministic jitter if the starting configuration is singular
    # (a node exactly on a non-incident edge)
    magnitude = 1e-4
    for _ in range(12):
        comp = components_of(vec)
        if comp is not None:
            break
        angles = 2.399963 * np.arange(model.n_elements)  # golden-angle spread
        jitter = magnitude * np.column_stack([np.cos(angles), np.sin(angles)])
        vec[var] += jitter[var]
        magnitude *= 3.0
    else:
        raise SingularConfigurationError(-1, (-1, -1))

    force = model.total_force(vec)
    f_inf = float(np.abs(force[var]).max()) if n_var else 0.0
    record(0, comp, f_inf)
    if f_inf < cfg.convergence_tol:
        return OptimizeResult(
            vectors=vec,
            layout=model.layout_in_srm_space(vec),
            trace=trace,
            converged=True,
            iterations=0,
        )

    energy = total_of(comp)
    grad = -force[var]
    direction = -grad
    failures = 0
    restart_every = max(2 * n_var, 10)
    iterations = 0

    for it in range(1, cfg.max_iterations + 1):
        iterations = it
        if (it % restart_every == 0) or float(np.sum(direction * grad)) >= 0:
            direction = -grad

        # scale-invariant line search: unit infinity-norm direction
        dir_norm = float(np.abs(direction).max())
        if dir_norm == 0 or not math.isfinite(dir_norm):
            break
        unit_dir = direction / dir_norm
        slope = float(np.sum(unit_dir * grad))
        step = cfg.initial_step
        accepted = False
        # once inside the cone of upward diagrams, stay inside: steps that
        # would invert or (numerically) flatten a cover edge are rejected
        currently_upward = model.is_upward(vec, cfg.cone_margin)
        for _ in range(60):
            trial = vec.copy()
            trial[var] += step * unit_dir
            if not currently_upward or model.is_upward(trial, cfg.cone_margin):
                trial_comp = components_of(trial)
                e_trial = total_of(trial_comp)
                if math.isfinite(e_trial) and e_trial <= energy + 1e-4 * step * slope:
                    accepted = True
                    break
            step *= 0.5
        if not accepted:
            failures += 1
            direction = -grad
            if failures >= 20:
                break
            continue
        failures = 0

        vec = trial
        energy = e_trial
        new_force = model.total_force(vec)
        new_grad = -new_force[var]
        f_inf = float(np.abs(new_force[var]).max()) if n_var else 0.0
        record(it, trial_comp, f_inf)

        if f_inf < cfg.convergence_tol:
            return OptimizeResult(
                vectors=vec,
                layout=model.layout_in_srm_space(vec),
                trace=trace,
                converged=True,
                iterations=it,
            )

        # Polak-Ribiere with non-negativity restart
        denom = float(np.sum(grad * grad))
        beta = 0.0
        if denom > 0:
            beta = max(0.0, float(np.sum(new_grad * (new_grad - grad))) / denom)
        direction = -new_grad + beta * direction
        grad = new_grad

    return OptimizeResult(
        vectors=vec,
        layout=model.layout_in_srm_space(vec),
        trace=trace,
        converged=False,
        iterations=iterations,
    )
