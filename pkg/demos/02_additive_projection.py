"""Additive diagrams and the orthogonal projection.

An additive diagram places every concept at the sum of vectors attached to
the objects of its extent and the attributes missing from its intent.  All
such placements form the column space of the 0/1 set representation matrix,
so the nearest additive diagram to any drawing is an orthogonal projection.

This script starts from a clumsy hand-drawn diagram of the dwarf-planet
lattice, projects it, and renders before/after SVGs.
"""

from pathlib import Path

import numpy as np

from latflux import data
from latflux.additive import (
    RepresentationKind,
    build_srm,
    is_additive,
    normalize_display,
    project_additive,
    recover_vectors,
    snap_to_grid,
)
from latflux.lattice import compute_lattice
from latflux.render import RenderOptions, render

lat = compute_lattice(data.dwarf_planets())
basis = build_srm(lat, RepresentationKind.DOUBLY_ADDITIVE)

print("set representation matrix (rows = concepts, cols = objects then attributes):")
print(basis.srm)

hand = data.dwarf_planets_hand_layout()
flag, residual = is_additive(basis, hand, 1e-3)
print(f"\nhand layout additive? {flag} (residual {residual:.4f})")

projected = project_additive(basis, hand)
flag, residual = is_additive(basis, projected, 1e-9)
print(f"projected layout additive? {flag} (residual {residual:.2e})")

displayed = normalize_display(projected, lat.top, 12.0)
print("\nnode positions after projection (display-normalized):")
for i, (x, y) in enumerate(displayed):
    print(f"  {i:2d}: ({x:8.4f}, {y:8.4f})")

# element vectors behind the placement
vectors, offset, fit = recover_vectors(basis, projected)
print("\nrecovered element vectors:")
for (kind, name), vec in zip(basis.element_order, vectors):
    print(f"  {kind:9s} {name:16s} ({vec[0]:7.3f}, {vec[1]:7.3f})")

# snapping the vectors (not the nodes!) to a half-unit grid keeps additivity
snapped = snap_to_grid(basis, projected, 0.5)
print("\nsnapped coordinates are multiples of 0.5:",
      bool(np.allclose(snapped / 0.5, np.round(snapped / 0.5))))

out = Path(__file__).with_suffix("") .name
outdir = Path(__file__).parent / "output"
outdir.mkdir(exist_ok=True)
(outdir / "dwarf_hand.svg").write_bytes(render(lat, hand, RenderOptions()))
(outdir / "dwarf_projected.svg").write_bytes(render(lat, displayed, RenderOptions()))
print(f"\nwrote {outdir}/dwarf_hand.svg and {outdir}/dwarf_projected.svg")
