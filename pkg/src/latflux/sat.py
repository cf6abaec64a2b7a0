"""A self-contained CNF satisfiability solver.

Conflict-driven clause learning with two watched literals per clause,
first-UIP learning, activity-based branching with phase saving, and Luby
restarts.  Ample for the desk-scale order encodings in this package (a few
thousand variables); DIMACS export/import is provided as an escape hatch to
external solvers.

Variables are positive integers; a literal is ``+v`` or ``-v`` as in DIMACS.
"""

from __future__ import annotations

__all__ = ["CnfSolver", "to_dimacs", "parse_dimacs_model"]


class CnfSolver:
    def __init__(self):
        self.n_vars = 0
        self.clauses = []          # list of lists of internal literals
        self.watches = [[], []]    # per internal literal: clause indices
        self.assign = []           # per var: -1 unassigned / 0 false / 1 true
        self.level = []            # per var: decision level
        self.reason = []           # per var: clause index or -1
        self.trail = []
        self.trail_lim = []
        self.activity = []
        self.phase = []
        self.var_inc = 1.0
        self.ok = True
        self.conflicts = 0

    # -- construction -------------------------------------------------------

    def new_var(self) -> int:
        self.n_vars += 1
        self.assign.append(-1)
        self.level.append(0)
        self.reason.append(-1)
        self.activity.append(0.0)
        self.phase.append(False)
        self.watches.append([])
        self.watches.append([])
        return self.n_vars

    def _internal(self, lit: int) -> int:
        v = abs(lit)
        while v > self.n_vars:
            self.new_var()
        return 2 * (v - 1) + (0 if lit > 0 else 1)

    @staticmethod
    def _sign(ilit: int) -> int:
        return ilit & 1

    @staticmethod
    def _var(ilit: int) -> int:
        return ilit >> 1

    def _value(self, ilit: int) -> int:
        a = self.assign[ilit >> 1]
        if a < 0:
            return -1
        return a ^ (ilit & 1)

    def add_clause(self, lits) -> bool:
        """Add a clause of DIMACS-style literals; returns False if the
        formula became trivially unsatisfiable."""
        if not self.ok:
            return False
        seen = {}
        simplified = []
        for lit in lits:
            il = self._internal(lit)
            v = il >> 1
            if v in seen:
                if seen[v] != il:
                    return True  # tautology
                continue
            val = self._value(il)
            if val == 1 and self.level[v] == 0:
                return True  # satisfied at root
            if val == 0 and self.level[v] == 0:
                continue     # falsified at root: drop literal
            seen[v] = il
            simplified.append(il)
        if not simplified:
            self.ok = False
            return False
        if len(simplified) == 1:
            if not self._enqueue(simplified[0], -1):
                self.ok = False
                return False
            conflict = self._propagate()
            if conflict is not None:
                self.ok = False
                return False
            return True
        ci = len(self.clauses)
        self.clauses.append(simplified)
        self.watches[simplified[0]].append(ci)
        self.watches[simplified[1]].append(ci)
        return True

    # -- core ----------------------------------------------------------------

    def _enqueue(self, ilit: int, reason: int) -> bool:
        v = ilit >> 1
        val = self._value(ilit)
        if val == 0:
            return False
        if val == 1:
            return True
        self.assign[v] = 1 - (ilit & 1)
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(ilit)
        return True

    def _propagate(self):
        """Unit propagation; returns a conflicting clause index or None."""
        head = getattr(self, "_qhead", 0)
        clauses = self.clauses
        watches = self.watches
        while head < len(self.trail):
            ilit = self.trail[head]
            head += 1
            false_lit = ilit ^ 1
            watch_list = watches[false_lit]
            i = 0
            while i < len(watch_list):
                ci = watch_list[i]
                clause = clauses[ci]
                # ensure the false literal is at position 1
                if clause[0] == false_lit:
                    clause[0], clause[1] = clause[1], clause[0]
                first = clause[0]
                if self._value(first) == 1:
                    i += 1
                    continue
                # search replacement watch
                found = False
                for k in range(2, len(clause)):
                    if self._value(clause[k]) != 0:
                        clause[1], clause[k] = clause[k], clause[1]
                        watches[clause[1]].append(ci)
                        watch_list[i] = watch_list[-1]
                        watch_list.pop()
                        found = True
                        break
                if found:
                    continue
                # clause is unit or conflicting
                if self._value(first) == 0:
                    self._qhead = head
                    return ci
                self.assign[first >> 1] = 1 - (first & 1)
                self.level[first >> 1] = len(self.trail_lim)
                self.reason[first >> 1] = ci
                self.trail.append(first)
                i += 1
        self._qhead = head
        return None

    def _analyze(self, conflict: int):
        learnt = []
        seen = [False] * self.n_vars
        counter = 0
        p = -1
        index = len(self.trail) - 1
        btlevel = 0
        reason_clause = self.clauses[conflict]
        cur_level = len(self.trail_lim)
        while True:
            for q in reason_clause:
                if p != -1 and q == p:
                    continue
                v = q >> 1
                if not seen[v] and self.level[v] > 0:
                    seen[v] = True
                    self._bump(v)
                    if self.level[v] >= cur_level:
                        counter += 1
                    else:
                        learnt.append(q)
                        btlevel = max(btlevel, self.level[v])
            while True:
                p = self.trail[index]
                index -= 1
                if seen[p >> 1]:
                    break
            counter -= 1
            seen[p >> 1] = False
            if counter == 0:
                break
            reason_clause = self.clauses[self.reason[p >> 1]]
        learnt.insert(0, p ^ 1)
        return learnt, btlevel

    def _bump(self, v: int):
        self.activity[v] += self.var_inc
        if self.activity[v] > 1e100:
            for i in range(self.n_vars):
                self.activity[i] *= 1e-100
            self.var_inc *= 1e-100

    def _backtrack(self, level: int):
        while len(self.trail_lim) > level:
            limit = self.trail_lim.pop()
            while len(self.trail) > limit:
                ilit = self.trail.pop()
                v = ilit >> 1
                self.phase[v] = self.assign[v] == 1
                self.assign[v] = -1
                self.reason[v] = -1
        self._qhead = len(self.trail)

    def _decide(self) -> int:
        best, best_act = -1, -1.0
        for v in range(self.n_vars):
            if self.assign[v] < 0 and self.activity[v] > best_act:
                best, best_act = v, self.activity[v]
        if best < 0:
            return -1
        return 2 * best + (0 if self.phase[best] else 1)

    @staticmethod
    def _luby(i: int) -> int:
        k = 1
        while (1 << (k + 1)) <= i + 1:
            k += 1
        while (1 << k) - 1 != i + 1:
            i = i - (1 << k) + 1
            k = 1
            while (1 << (k + 1)) <= i + 1:
                k += 1
        return 1 << (k - 1)

    def solve(self, max_conflicts: int | None = None):
        """Returns True (satisfiable), False (unsatisfiable), or None when
        the conflict budget is exhausted."""
        if not self.ok:
            return False
        self._backtrack(0)
        conflict = self._propagate()
        if conflict is not None:
            self.ok = False
            return False
        restart_round = 0
        budget_used = 0
        while True:
            limit = 100 * self._luby(restart_round)
            restart_round += 1
            result = self._search(limit, max_conflicts, budget_used)
            if result == "sat":
                model = [self.assign[v] == 1 for v in range(self.n_vars)]
                self._model = model
                self._backtrack(0)
                return True
            if result == "unsat":
                self.ok = False
                return False
            budget_used = self.conflicts
            if max_conflicts is not None and self.conflicts >= max_conflicts:
                self._backtrack(0)
                return None
            self._backtrack(0)

    def _search(self, restart_limit: int, max_conflicts, start_conflicts):
        local = 0
        while True:
            conflict = self._propagate()
            if conflict is not None:
                self.conflicts += 1
                local += 1
                if not self.trail_lim:
                    return "unsat"
                learnt, btlevel = self._analyze(conflict)
                self._backtrack(btlevel)
                if len(learnt) == 1:
                    self._enqueue(learnt[0], -1)
                else:
                    # second watch must be a highest-level literal, otherwise
                    # later falsifications can bypass the watch scan
                    hi = max(range(1, len(learnt)), key=lambda k: self.level[learnt[k] >> 1])
                    learnt[1], learnt[hi] = learnt[hi], learnt[1]
                    ci = len(self.clauses)
                    self.clauses.append(learnt)
                    self.watches[learnt[0]].append(ci)
                    self.watches[learnt[1]].append(ci)
                    self._enqueue(learnt[0], ci)
                self.var_inc *= 1.05
                if max_conflicts is not None and self.conflicts >= max_conflicts:
                    return "budget"
                if local >= restart_limit:
                    return "restart"
            else:
                decision = self._decide()
                if decision < 0:
                    return "sat"
                self.trail_lim.append(len(self.trail))
                self._enqueue(decision, -1)

    def model(self):
        return list(self._model)

    def model_value(self, lit: int) -> bool:
        v = self._model[abs(lit) - 1]
        return v if lit > 0 else not v


def to_dimacs(n_vars: int, clauses) -> str:
    """Serialize clauses of DIMACS literals to DIMACS CNF text."""
    lines = [f"p cnf {n_vars} {len(clauses)}"]
    for clause in clauses:
        lines.append(" ".join(str(l) for l in clause) + " 0")
    return "\n".join(lines) + "\n"


def parse_dimacs_model(text: str):
    """Parse a solver model line ('v 1 -2 3 ... 0') into an assignment dict."""
    assignment = {}
    for line in text.splitlines():
        line = line.strip()
        if line.startswith("v") or line.startswith("V"):
            line = line[1:]
        elif line and line[0] not in "-0123456789":
            continue
        for token in line.split():
            lit = int(token)
            if lit == 0:
                continue
            assignment[abs(lit)] = lit > 0
    return assignment
