"""Plane geometry helpers shared by validation, forces and metrics."""

from __future__ import annotations

import numpy as np

__all__ = [
    "conflict_distance",
    "segments_cross",
    "count_edge_crossings",
    "count_distinct_slopes",
]


def conflict_distance(w, w1, w2) -> float:
    """Distance between a node ``w`` and the edge segment ``w1 -> w2``.

    Case split of the point-to-segment distance:

    * below the lower endpoint:  |w1 - w|   when (w1 - w) . (w2 - w1) > 0
    * beyond the upper endpoint: |w2 - w|   when (w2 - w) . (w2 - w1) < 0
    * otherwise the perpendicular distance |(w1 - w) x (w2 - w)| / |w2 - w1|

    Raises ``ValueError`` for a degenerate edge (w1 == w2).
    """
    w = np.asarray(w, dtype=float)
    w1 = np.asarray(w1, dtype=float)
    w2 = np.asarray(w2, dtype=float)
    f = w2 - w1
    if not f.any():
        raise ValueError("degenerate edge: endpoints coincide")
    a = w1 - w
    b = w2 - w
    if a @ f > 0:
        return float(np.hypot(*a))
    if b @ f < 0:
        return float(np.hypot(*b))
    cross = a[0] * b[1] - a[1] * b[0]
    return float(abs(cross) / np.hypot(*f))


def _orient(p, q, r):
    return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])


def segments_cross(p1, p2, q1, q2, eps: float = 1e-12) -> bool:
    """Proper intersection test: segments cross in their interiors."""
    d1 = _orient(q1, q2, p1)
    d2 = _orient(q1, q2, p2)
    d3 = _orient(p1, p2, q1)
    d4 = _orient(p1, p2, q2)
    return (d1 * d2 < -eps) and (d3 * d4 < -eps)


def count_edge_crossings(positions, edges) -> int:
    """Count proper crossings between edges that share no endpoint."""
    pos = np.asarray(positions, dtype=float)
    count = 0
    for i in range(len(edges)):
        a, b = edges[i]
        for j in range(i + 1, len(edges)):
            c, d = edges[j]
            if len({a, b, c, d}) < 4:
                continue
            if segments_cross(pos[a], pos[b], pos[c], pos[d]):
                count += 1
    return count


def count_distinct_slopes(positions, edges, angle_tol: float = 1e-6) -> int:
    """Number of distinct edge slopes, with angles bucketed at ``angle_tol``."""
    pos = np.asarray(positions, dtype=float)
    buckets = set()
    for a, b in edges:
        d = pos[b] - pos[a]
        if not d.any():
            continue
        angle = np.arctan2(d[1], d[0]) % np.pi  # undirected slope
        buckets.add(round(angle / angle_tol))
    return len(buckets)
