"""Formal contexts and their concept lattices.

A formal context is a cross table between objects and attributes; its
concepts are the maximal rectangles (closed pairs), ordered by extent
inclusion into a complete lattice.  We walk through the running example of
this package: five dwarf planets with four astronomical attributes.
"""

import numpy as np

from latflux import data
from latflux.lattice import compute_lattice, rank, reduce_context

# The context as a cross table
ctx = data.dwarf_planets()
print("objects:   ", ", ".join(ctx.objects))
print("attributes:", ", ".join(ctx.attributes))
print()
width = max(len(o) for o in ctx.objects)
for g, name in enumerate(ctx.objects):
    row = "".join("x" if ctx.incidence[g, m] else "." for m in range(ctx.n_attributes))
    print(f"  {name:<{width}}  {row}")

# Derivation operators: which attributes do Makemake and Eris share?
pair = ctx.object_mask(["Makemake", "Eris"])
common = ctx.derive_objects(pair)
print("\nMakemake and Eris share:", ", ".join(ctx.attribute_names(common)))

# The concept lattice: all closed (extent, intent) pairs in lectic order
lat = compute_lattice(ctx)
print(f"\n{len(lat)} concepts:")
for i, concept in enumerate(lat.concepts):
    extent = ", ".join(ctx.object_names(concept.extent)) or "-"
    intent = ", ".join(ctx.attribute_names(concept.intent)) or "-"
    print(f"  {i:2d}  extent: {extent:<34s} intent: {intent}")

print(f"\ncover edges: {len(lat.covers)}")
print("top rank:", rank(lat)[lat.top])

# Reduction keeps only irreducible rows/columns; this context already is
# its own standard context.
reduced = reduce_context(ctx)
print("reduced size:", reduced.n_objects, "x", reduced.n_attributes)
