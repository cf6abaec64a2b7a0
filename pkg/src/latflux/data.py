"""Bundled example contexts and reference layouts.

The dwarf-planet context is the running example of the documentation: five
dwarf planets described by four astronomical attributes.  Its hand-drawn
layout (a deliberately clumsy diagram on an integer grid, scaled for
display so the top concept sits at y = 12) and the additively projected
version serve as reference data for the projection and drag features.
"""

from __future__ import annotations

import numpy as np

from .context import FormalContext
from .lattice import ConceptLattice, compute_lattice

__all__ = [
    "dwarf_planets",
    "dwarf_planets_hand_layout",
    "dwarf_planets_projected_layout",
    "nominal_scale",
    "contranominal_scale",
    "chain_context",
    "n5_lattice",
    "m3_lattice",
    "free_modular_lattice_order",
    "free_modular_standard_context",
]


def dwarf_planets() -> FormalContext:
    """Five dwarf planets with four attributes; eleven concepts."""
    rows = {
        "Ceres": "xx..",
        "Makemake": "x.xx",
        "Eris": ".xxx",
        "Heumea": "x.x.",
        "Pluto": ".xx.",
    }
    attributes = ("Non-Spherical", "Atmosphere", "Trans-Neptunian", "One Moon")
    incidence = np.array([[c == "x" for c in row] for row in rows.values()])
    return FormalContext(tuple(rows), attributes, incidence)


def dwarf_planets_hand_layout() -> np.ndarray:
    """Hand-drawn (non-additive) layout, indexed by lectic concept order."""
    return np.array([
        [1.0909, 12.0],
        [1.0909, 7.6364],
        [1.0909, 5.4545],
        [4.3636, 7.6363],
        [3.2727, 5.4545],
        [2.1818, 2.1818],
        [-3.2727, 6.5454],
        [-4.3636, 4.3636],
        [-3.2727, 2.1818],
        [0.0, 2.1818],
        [-1.0909, 0.0],
    ])


def dwarf_planets_projected_layout() -> np.ndarray:
    """The additive projection of the hand layout (display-normalized)."""
    return np.array([
        [1.2857, 12.0],
        [0.4286, 9.1429],
        [0.2381, 5.3333],
        [4.4286, 8.0],
        [3.5714, 5.1429],
        [2.9048, 2.6667],
        [-3.5714, 6.8571],
        [-4.4286, 4.0],
        [-2.8095, 2.6667],
        [-0.4286, 2.8571],
        [-0.1429, 0.0],
    ])


def nominal_scale(n: int) -> FormalContext:
    """g_i I m_j iff i == j; the concept lattice is M_n (an antichain of n
    atoms plus top and bottom); n = 2 gives the diamond B_2."""
    eye = np.eye(n, dtype=bool)
    return FormalContext(
        tuple(f"g{i}" for i in range(n)),
        tuple(f"m{i}" for i in range(n)),
        eye,
    )


def contranominal_scale(n: int) -> FormalContext:
    """g_i I m_j iff i != j; the concept lattice is the boolean lattice B_n."""
    inc = ~np.eye(n, dtype=bool)
    return FormalContext(
        tuple(f"g{i}" for i in range(n)),
        tuple(f"m{i}" for i in range(n)),
        inc,
    )


def chain_context(n_concepts: int) -> FormalContext:
    """Strictly upper-triangular staircase whose lattice is a chain of
    exactly ``n_concepts`` concepts (n_concepts >= 2)."""
    k = n_concepts - 1
    inc = np.triu(np.ones((k, k), dtype=bool), 1)
    return FormalContext(
        tuple(f"g{i}" for i in range(k)),
        tuple(f"m{i}" for i in range(k)),
        inc,
    )


def _lattice_from_covers(n: int, covers) -> np.ndarray:
    leq = np.eye(n, dtype=bool)
    strict = np.zeros((n, n), dtype=bool)
    for a, b in covers:
        strict[a, b] = True
    for k in range(n):
        for i in range(n):
            if strict[i, k]:
                strict[i] |= strict[k]
    return leq | strict


def n5_lattice() -> FormalContext:
    """Standard context of the pentagon N5 (bot < c < a < top, bot < b < top)."""
    # objects: join-irreducibles c, a, b; attributes: meet-irreducibles c, a, b
    # N5 order: c < a, both parallel to b
    incidence = np.array([
        # m_c  m_a  m_b     (object <= attribute concept)
        [True, True, False],   # c
        [False, True, False],  # a
        [False, False, True],  # b
    ])
    return FormalContext(("c", "a", "b"), ("mc", "ma", "mb"), incidence)


def m3_lattice() -> FormalContext:
    """Standard context of the diamond M3 (three parallel atoms)."""
    inc = np.eye(3, dtype=bool)
    return FormalContext(("a", "b", "c"), ("ma", "mb", "mc"), inc)


_FM3_NAMES = "bot a b c d e f g h i j k l m n o p q r s t u v w x y z top".split()
_FM3_COVERS = [
    ("bot", "x"), ("x", "u"), ("u", "q"), ("q", "k"), ("k", "g"), ("g", "d"),
    ("d", "a"), ("a", "top"),
    ("bot", "z"), ("z", "w"), ("w", "t"), ("t", "p"), ("p", "j"), ("j", "f"),
    ("f", "c"), ("c", "top"),
    ("bot", "y"), ("y", "u"), ("y", "w"),
    ("x", "v"), ("v", "r"), ("r", "l"), ("l", "h"), ("h", "e"), ("e", "a"),
    ("z", "v"), ("v", "s"), ("s", "o"), ("o", "i"), ("i", "e"), ("e", "c"),
    ("u", "r"), ("r", "m"), ("m", "h"), ("h", "d"),
    ("w", "r"), ("r", "n"), ("n", "h"),
    ("q", "l"), ("l", "g"),
    ("t", "n"), ("n", "j"),
    ("s", "m"), ("m", "i"),
    ("h", "f"), ("f", "b"),
    ("d", "b"), ("b", "top"),
]


def free_modular_lattice_order() -> np.ndarray:
    """Order matrix (reflexive) of the 28-element free modular lattice on
    three generators."""
    idx = {name: i for i, name in enumerate(_FM3_NAMES)}
    covers = [(idx[a], idx[b]) for a, b in _FM3_COVERS]
    return _lattice_from_covers(len(_FM3_NAMES), covers)


def free_modular_standard_context() -> FormalContext:
    """Standard context (J(L), M(L), <=) of the free modular lattice FM(3)."""
    leq = free_modular_lattice_order()
    n = leq.shape[0]
    strict = leq & ~np.eye(n, dtype=bool)
    two = np.zeros_like(strict)
    for k in range(n):
        two |= np.outer(strict[:, k], strict[k, :])
    cover = strict & ~two
    lower = [list(np.flatnonzero(cover[:, i])) for i in range(n)]
    upper = [list(np.flatnonzero(cover[i])) for i in range(n)]
    ji = [i for i in range(n) if len(lower[i]) == 1]
    mi = [i for i in range(n) if len(upper[i]) == 1]
    incidence = np.array([[bool(leq[a, b]) for b in mi] for a in ji])
    return FormalContext(
        tuple(_FM3_NAMES[i] for i in ji),
        tuple(f"m_{_FM3_NAMES[i]}" for i in mi),
        incidence,
    )


def lattice_of(ctx: FormalContext) -> ConceptLattice:
    return compute_lattice(ctx)
