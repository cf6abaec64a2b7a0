"""Order dimension, realizers, and realizer-embedded coordinates.

A finite order has dimension at most two iff there is a linear extension
whose reversal on incomparable pairs is also a linear extension; the encoding
below uses one boolean per incomparable pair (its orientation in the first
extension, the second takes the reverse) plus transitivity clauses over all
element triples.  The minimal two-dimensional extension search layers
selection variables (pair oriented the *same* way in both extensions, i.e.
added to the order) with a sequential-counter cardinality bound on top.

Positions of a two-dimensional realizer give the classic grid embedding: a
node's coordinates are its ranks in the two linear extensions; rotating by
45 degrees and rescaling yields the familiar upward diagram.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .lattice import ConceptLattice
from .sat import CnfSolver

__all__ = [
    "Realizer",
    "ExtensionResult",
    "incomparable_pairs",
    "is_two_dimensional",
    "minimal_extension",
    "enumerate_minimal_extensions",
    "realizer_embed",
    "rotate_stretch",
]


@dataclass(frozen=True)
class Realizer:
    """Linear extensions (tuples of element indices, smallest first) whose
    intersection is the realized order."""

    extensions: tuple

    @property
    def arity(self) -> int:
        return len(self.extensions)

    def positions(self) -> np.ndarray:
        """Ranks of every element in every extension, |elements| x arity."""
        n = len(self.extensions[0])
        out = np.zeros((n, self.arity), dtype=int)
        for d, ext in enumerate(self.extensions):
            for pos, e in enumerate(ext):
                out[e, d] = pos
        return out


@dataclass(frozen=True)
class ExtensionResult:
    """A set of temporary relations making the order two-dimensional."""

    added_pairs: frozenset       # ordered (u, v) pairs, transitively closed
    realizer: Realizer           # realizes the extended order
    k: int
    minimal: bool                # False when the search budget was exhausted


def _as_leq(order) -> np.ndarray:
    if isinstance(order, ConceptLattice):
        return np.asarray(order.leq, dtype=bool)
    leq = np.asarray(order, dtype=bool)
    if leq.ndim != 2 or leq.shape[0] != leq.shape[1]:
        raise ValueError("order must be a square boolean matrix")
    return leq


def incomparable_pairs(order):
    """Unordered pairs {u, v} with neither u <= v nor v <= u."""
    leq = _as_leq(order)
    n = leq.shape[0]
    return [
        (u, v)
        for u in range(n)
        for v in range(u + 1, n)
        if not leq[u, v] and not leq[v, u]
    ]


class _PairVars:
    """Orientation literals for both extensions over a base order.

    ``lit(ext, u, v)`` is the DIMACS literal asserting "u before v in the
    given extension", or +/-infinity markers for pairs fixed by the order.
    """

    TRUE = "true"
    FALSE = "false"

    def __init__(self, leq: np.ndarray, solver: CnfSolver, with_selection: bool):
        self.leq = leq
        self.n = leq.shape[0]
        self.solver = solver
        self.x1 = {}
        self.x2 = {}
        self.select = {}
        for u, v in incomparable_pairs(leq):
            self.x1[(u, v)] = solver.new_var()
            self.x2[(u, v)] = solver.new_var()
            if with_selection:
                s = solver.new_var()
                self.select[(u, v)] = s
                a, b = self.x1[(u, v)], self.x2[(u, v)]
                # s <-> (a <-> b)
                solver.add_clause([-s, -a, b])
                solver.add_clause([-s, a, -b])
                solver.add_clause([s, -a, -b])
                solver.add_clause([s, a, b])
            else:
                # second extension reverses every incomparable pair
                a, b = self.x1[(u, v)], self.x2[(u, v)]
                solver.add_clause([-a, -b])
                solver.add_clause([a, b])

    def lit(self, ext: int, u: int, v: int):
        if u == v:
            return self.FALSE
        if self.leq[u, v]:
            return self.TRUE
        if self.leq[v, u]:
            return self.FALSE
        table = self.x1 if ext == 1 else self.x2
        if (u, v) in table:
            return table[(u, v)]
        return -table[(v, u)]

    def add_transitivity(self):
        solver = self.solver
        n = self.n
        for ext in (1, 2):
            for u, v, w in itertools.permutations(range(n), 3):
                a = self.lit(ext, u, v)
                b = self.lit(ext, v, w)
                c = self.lit(ext, u, w)
                # clause: ¬a ∨ ¬b ∨ c
                if a == self.FALSE or b == self.FALSE or c == self.TRUE:
                    continue
                clause = []
                if a != self.TRUE:
                    clause.append(-a)
                if b != self.TRUE:
                    clause.append(-b)
                if c != self.FALSE:
                    clause.append(c)
                if not clause:
                    raise RuntimeError("inconsistent base order")
                solver.add_clause(clause)

    def extension_order(self, ext: int):
        """Total order (list of elements) of an extension from the model."""
        solver = self.solver
        n = self.n

        def before(u, v):
            lit = self.lit(ext, u, v)
            if lit == self.TRUE:
                return True
            if lit == self.FALSE:
                return False
            return solver.model_value(lit)

        counts = [sum(before(w, u) for w in range(n) if w != u) for u in range(n)]
        order = sorted(range(n), key=lambda u: counts[u])
        if sorted(counts) != list(range(n)):
            raise RuntimeError("model does not induce a total order")
        return tuple(order)


def _add_at_most_k(solver: CnfSolver, variables, k: int):
    """Sinz sequential counter for sum(variables) <= k."""
    n = len(variables)
    if k >= n:
        return
    if k == 0:
        for a in variables:
            solver.add_clause([-a])
        return
    s = [[solver.new_var() for _ in range(k)] for _ in range(n)]
    solver.add_clause([-variables[0], s[0][0]])
    for j in range(1, k):
        solver.add_clause([-s[0][j]])
    for i in range(1, n):
        solver.add_clause([-variables[i], s[i][0]])
        solver.add_clause([-s[i - 1][0], s[i][0]])
        for j in range(1, k):
            solver.add_clause([-variables[i], -s[i - 1][j - 1], s[i][j]])
            solver.add_clause([-s[i - 1][j], s[i][j]])
        solver.add_clause([-variables[i], -s[i - 1][k - 1]])


def is_two_dimensional(order):
    """A two-extension realizer of the order, or None if its dimension
    exceeds two."""
    leq = _as_leq(order)
    n = leq.shape[0]
    if n <= 1:
        ext = tuple(range(n))
        return Realizer(extensions=(ext, ext))
    solver = CnfSolver()
    pv = _PairVars(leq, solver, with_selection=False)
    pv.add_transitivity()
    if solver.solve() is not True:
        return None
    return Realizer(extensions=(pv.extension_order(1), pv.extension_order(2)))


def _solve_extension(leq: np.ndarray, k: int | None, max_conflicts=None):
    """Solve the 2D-extension problem with at most ``k`` selected pairs
    (no bound when k is None); returns (result-or-None, conflicts, exhausted)."""
    solver = CnfSolver()
    pv = _PairVars(leq, solver, with_selection=True)
    pv.add_transitivity()
    sel_pairs = sorted(pv.select)
    if k is not None:
        _add_at_most_k(solver, [pv.select[p] for p in sel_pairs], k)
    outcome = solver.solve(max_conflicts=max_conflicts)
    if outcome is None:
        return None, solver.conflicts, True
    if outcome is False:
        return None, solver.conflicts, False
    return _extract(pv, sel_pairs), solver.conflicts, False


def _extract(pv: _PairVars, sel_pairs):
    solver = pv.solver
    realizer = Realizer(extensions=(pv.extension_order(1), pv.extension_order(2)))
    added = set()
    for (u, v) in sel_pairs:
        a = solver.model_value(pv.x1[(u, v)])
        b = solver.model_value(pv.x2[(u, v)])
        if a == b:
            added.add((u, v) if a else (v, u))
    return realizer, frozenset(added)


def minimal_extension(order, budget_conflicts: int | None = None) -> ExtensionResult:
    """Smallest set T of incomparable pairs whose insertion makes the order
    two-dimensional.

    The search tightens an upper bound: an unconstrained solve yields some
    extension, whose size then bounds the cardinality constraint for the next
    round, until the bound cannot be met; the last satisfiable bound is the
    minimum (certified by the final unsatisfiable round).  ``budget_conflicts``
    caps the total solver effort; on exhaustion the best extension found so
    far is returned flagged non-minimal.
    """
    leq = _as_leq(order)
    n = leq.shape[0]
    if n <= 1 or not incomparable_pairs(leq):
        ext = tuple(np.argsort([-int(leq[u].sum()) for u in range(n)], kind="stable"))
        # chain: sort by number of successors descending = the chain order
        realizer = Realizer(extensions=(ext, ext))
        return ExtensionResult(frozenset(), realizer, 0, True)

    remaining = budget_conflicts
    best, used, exhausted = _solve_extension(leq, None, remaining)
    if best is None:
        if exhausted:
            raise RuntimeError("budget exhausted before any extension was found")
        raise RuntimeError("order admits no linear extension; not a poset?")
    realizer, added = best
    minimal = True
    while added:
        if remaining is not None:
            remaining -= used
            if remaining <= 0:
                minimal = False
                break
        nxt, used, exhausted = _solve_extension(leq, len(added) - 1, remaining)
        if exhausted:
            minimal = False
            break
        if nxt is None:
            break
        realizer, added = nxt
    return ExtensionResult(frozenset(added), realizer, len(added), minimal)


def enumerate_minimal_extensions(order, k: int):
    """All distinct added-pair sets of size ``k``, by blocking-clause
    enumeration."""
    leq = _as_leq(order)
    solver = CnfSolver()
    pv = _PairVars(leq, solver, with_selection=True)
    pv.add_transitivity()
    sel_pairs = sorted(pv.select)
    _add_at_most_k(solver, [pv.select[p] for p in sel_pairs], k)
    solutions = []
    while solver.solve() is True:
        realizer, added = _extract(pv, sel_pairs)
        if len(added) != k:
            raise RuntimeError(
                f"found extension of size {len(added)} below the requested {k}"
            )
        solutions.append(ExtensionResult(added, realizer, k, True))
        block = []
        for (u, v) in added:
            key = (u, v) if (u, v) in pv.x1 else (v, u)
            sign = 1 if key == (u, v) else -1
            block.append(-sign * pv.x1[key])
            block.append(-sign * pv.x2[key])
        solver.add_clause(block)
    return solutions


def realizer_embed(lat_or_n, realizer: Realizer) -> np.ndarray:
    """Grid coordinates: element ranks in the two linear extensions."""
    if realizer.arity != 2:
        raise ValueError("embedding requires a two-dimensional realizer")
    return realizer.positions().astype(float)


def rotate_stretch(layout: np.ndarray) -> np.ndarray:
    """Turn the grid embedding upright: (x, y) -> (sqrt(2) (x - y), (x + y) / sqrt(2))."""
    L = np.asarray(layout, dtype=float)
    out = np.empty_like(L)
    out[:, 0] = np.sqrt(2.0) * (L[:, 0] - L[:, 1])
    out[:, 1] = (L[:, 0] + L[:, 1]) / np.sqrt(2.0)
    return out
