"""Order dimension, realizers, and grid embeddings.

A two-dimensional order is the intersection of two linear extensions; its
nodes embed on a grid using their ranks in the two extensions.  Higher
dimensional lattices are first extended by a minimal set of incomparable
pairs (found by a satisfiability search) until a two-dimensional realizer
exists.
"""

import numpy as np

from latflux import data
from latflux.dimdraw import (
    enumerate_minimal_extensions,
    incomparable_pairs,
    is_two_dimensional,
    minimal_extension,
    realizer_embed,
    rotate_stretch,
)
from latflux.lattice import compute_lattice

# the pentagon and the diamond are two-dimensional
for name, factory in (("N5", data.n5_lattice), ("M3", data.m3_lattice)):
    lat = compute_lattice(factory())
    realizer = is_two_dimensional(lat)
    print(f"{name}: dimension <= 2: {realizer is not None}")
    pos = realizer_embed(lat, realizer)
    for i, (x, y) in enumerate(pos):
        print(f"   concept {i}: grid ({int(x)}, {int(y)})")

# the cube B3 needs one temporary pair
lat = compute_lattice(data.contranominal_scale(3))
print("\nB3 two-dimensional:", is_two_dimensional(lat) is not None)
result = minimal_extension(lat)
print(f"B3 minimal extension: {result.k} added pair(s): {sorted(result.added_pairs)}")
solutions = enumerate_minimal_extensions(lat, result.k)
print(f"distinct minimal solutions: {len(solutions)}")

# the embedding respects the order in both coordinates; rotating by 45
# degrees turns it into an upward diagram
pos = realizer_embed(lat, result.realizer)
upright = rotate_stretch(pos)
print("\nbottom :", pos[lat.bottom], "->", np.round(upright[lat.bottom], 3))
print("top    :", pos[lat.top], "->", np.round(upright[lat.top], 3))

# the 28-element free modular lattice: the classic non-additive case
leq = data.free_modular_lattice_order()
print(f"\nfree modular lattice: 28 elements, {len(incomparable_pairs(leq))} incomparable pairs")
print("searching its minimal two-dimensional extension (about half a minute)...")
result = minimal_extension(leq)
print(f"minimal extension size: {result.k}")
