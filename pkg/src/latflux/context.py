"""Formal contexts and derivation operators.

A formal context is a triple (G, M, I) of objects, attributes and a binary
incidence relation.  Subsets of objects and attributes are represented as
Python integer bitmasks throughout this package: bit ``i`` of an object set
corresponds to ``objects[i]``.  This keeps closures and derivations cheap at
desk scale (hundreds of elements) without pulling in bitset libraries.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "FormalContext",
    "bitmask_from_indices",
    "indices_from_bitmask",
]


def bitmask_from_indices(indices) -> int:
    """Pack an iterable of indices into a bitmask."""
    mask = 0
    for i in indices:
        mask |= 1 << i
    return mask


def indices_from_bitmask(mask: int):
    """Unpack a bitmask into a sorted list of indices."""
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


@dataclass(frozen=True)
class FormalContext:
    """A finite formal context (G, M, I).

    ``incidence`` is a |G| x |M| boolean matrix; ``incidence[g, m]`` is True
    iff object ``g`` has attribute ``m``.  Instances are immutable and safe
    to share between threads.
    """

    objects: tuple
    attributes: tuple
    incidence: np.ndarray
    # per-object attribute masks and per-attribute object masks, precomputed
    _object_rows: tuple = field(init=False, repr=False, compare=False)
    _attribute_cols: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        objects = tuple(str(o) for o in self.objects)
        attributes = tuple(str(m) for m in self.attributes)
        incidence = np.asarray(self.incidence, dtype=bool)
        if incidence.shape != (len(objects), len(attributes)):
            raise ValueError(
                f"incidence shape {incidence.shape} does not match "
                f"{len(objects)} objects x {len(attributes)} attributes"
            )
        if len(set(objects)) != len(objects):
            raise ValueError("object names must be pairwise distinct")
        if len(set(attributes)) != len(attributes):
            raise ValueError("attribute names must be pairwise distinct")
        incidence.setflags(write=False)
        object.__setattr__(self, "objects", objects)
        object.__setattr__(self, "attributes", attributes)
        object.__setattr__(self, "incidence", incidence)
        rows = tuple(
            bitmask_from_indices(np.flatnonzero(incidence[g]))
            for g in range(len(objects))
        )
        cols = tuple(
            bitmask_from_indices(np.flatnonzero(incidence[:, m]))
            for m in range(len(attributes))
        )
        object.__setattr__(self, "_object_rows", rows)
        object.__setattr__(self, "_attribute_cols", cols)

    # -- basic shape ---------------------------------------------------

    @property
    def n_objects(self) -> int:
        return len(self.objects)

    @property
    def n_attributes(self) -> int:
        return len(self.attributes)

    @property
    def full_object_set(self) -> int:
        return (1 << self.n_objects) - 1

    @property
    def full_attribute_set(self) -> int:
        return (1 << self.n_attributes) - 1

    # -- derivation operators -------------------------------------------

    def derive_objects(self, object_set: int) -> int:
        """A' -- the attributes common to all objects in ``object_set``.

        The empty set derives to the full attribute set (vacuous
        quantification).
        """
        if object_set < 0 or object_set > self.full_object_set:
            raise ValueError("object set out of range")
        result = self.full_attribute_set
        rows = self._object_rows
        g = 0
        while object_set and result:
            if object_set & 1:
                result &= rows[g]
            object_set >>= 1
            g += 1
        return result

    def derive_attributes(self, attribute_set: int) -> int:
        """B' -- the objects that have all attributes in ``attribute_set``."""
        if attribute_set < 0 or attribute_set > self.full_attribute_set:
            raise ValueError("attribute set out of range")
        result = self.full_object_set
        cols = self._attribute_cols
        m = 0
        while attribute_set:
            if attribute_set & 1:
                result &= cols[m]
            attribute_set >>= 1
            m += 1
        return result

    def close_attributes(self, attribute_set: int) -> int:
        """B'' -- closure of an attribute set."""
        return self.derive_objects(self.derive_attributes(attribute_set))

    def close_objects(self, object_set: int) -> int:
        """A'' -- closure of an object set."""
        return self.derive_attributes(self.derive_objects(object_set))

    # -- conveniences ----------------------------------------------------

    def object_mask(self, names) -> int:
        index = {name: i for i, name in enumerate(self.objects)}
        return bitmask_from_indices(index[n] for n in names)

    def attribute_mask(self, names) -> int:
        index = {name: i for i, name in enumerate(self.attributes)}
        return bitmask_from_indices(index[n] for n in names)

    def object_names(self, mask: int):
        return [self.objects[i] for i in indices_from_bitmask(mask)]

    def attribute_names(self, mask: int):
        return [self.attributes[i] for i in indices_from_bitmask(mask)]

    def __repr__(self):
        return (
            f"FormalContext({self.n_objects} objects, "
            f"{self.n_attributes} attributes)"
        )
