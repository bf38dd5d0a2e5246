"""A small, deterministic CDCL SAT solver.

Complete clause-learning search with two-watched-literal propagation,
first-UIP learning with basic clause minimization, VSIDS-style variable
activities, phase saving, Luby restarts, and LBD-based reduction of the
learnt-clause database.  No randomness anywhere and all ties break
toward the smallest variable, so repeated runs explore identical search
trees and model enumeration order is reproducible.

Clauses may be added between `solve()` calls (the solver backtracks to
the root first), which is what incremental model enumeration with
blocking clauses relies on.
"""

from __future__ import annotations

import time
from heapq import heapify, heappop, heappush
from typing import Iterable, Optional, Sequence

_RESTART_UNIT = 100
_ACT_RESCALE = 1e100


def luby(i: int) -> int:
    """The i-th term (0-based) of the Luby restart sequence 1,1,2,1,1,2,4,..."""
    size, seq = 1, 0
    while size < i + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != i:
        size = (size - 1) // 2
        seq -= 1
        i = i % size
    return 1 << seq


class Solver:
    """Deterministic incremental CDCL solver over variables 1..num_vars."""

    def __init__(self, num_vars: int):
        if num_vars < 0:
            raise ValueError("negative variable count")
        self.num_vars = num_vars
        self.ok = True
        self.assign = [0] * (num_vars + 1)  # 0 unassigned, +1 true, -1 false
        self.level = [0] * (num_vars + 1)
        self.reason = [-1] * (num_vars + 1)
        self.phase = [False] * (num_vars + 1)
        self.activity = [0.0] * (num_vars + 1)
        self.var_inc = 1.0
        self.heap: list[tuple[float, int]] = [(0.0, v) for v in range(1, num_vars + 1)]
        heapify(self.heap)
        self.clauses: list[list[int]] = []
        self.learnt: list[bool] = []
        self.lbd: list[int] = []
        self.watches: list[list[int]] = [[] for _ in range(2 * num_vars + 2)]
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.seen = bytearray(num_vars + 1)
        self.n_learnt = 0
        self.max_learnt = 4000.0
        self._model: Optional[tuple[bool, ...]] = None
        self.decisions = 0
        self.conflicts = 0
        self.propagations = 0
        self.restarts = 0

    # -- literal plumbing ------------------------------------------------

    @staticmethod
    def _widx(lit: int) -> int:
        return (lit << 1) if lit > 0 else ((-lit << 1) | 1)

    def _value(self, lit: int) -> int:
        a = self.assign[lit if lit > 0 else -lit]
        return a if lit > 0 else -a

    # -- clause input ----------------------------------------------------

    def add_clause(self, lits: Iterable[int]) -> None:
        """Add a clause; backtracks to the root level first.  An empty or
        root-falsified clause makes the instance unsatisfiable."""
        if not self.ok:
            return
        if self.trail_lim:
            self._cancel_until(0)
        out: list[int] = []
        seen: set[int] = set()
        for lit in lits:
            if lit == 0 or abs(lit) > self.num_vars:
                raise ValueError(f"literal {lit} outside variable range")
            if -lit in seen:
                return  # tautology
            if lit in seen:
                continue
            seen.add(lit)
            val = self._value(lit)
            if val == 1:
                return  # satisfied at root forever
            if val == -1:
                continue  # false at root forever
            out.append(lit)
        if not out:
            self.ok = False
            return
        if len(out) == 1:
            self._enqueue(out[0], -1)
            if self._propagate() != -1:
                self.ok = False
            return
        ci = len(self.clauses)
        self.clauses.append(out)
        self.learnt.append(False)
        self.lbd.append(0)
        self.watches[self._widx(out[0])].append(ci)
        self.watches[self._widx(out[1])].append(ci)

    # -- trail management ------------------------------------------------

    def _enqueue(self, lit: int, reason: int) -> None:
        v = lit if lit > 0 else -lit
        self.assign[v] = 1 if lit > 0 else -1
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(lit)

    def _cancel_until(self, target: int) -> None:
        if len(self.trail_lim) <= target:
            return
        limit = self.trail_lim[target]
        heap = self.heap
        for i in range(len(self.trail) - 1, limit - 1, -1):
            lit = self.trail[i]
            v = lit if lit > 0 else -lit
            self.phase[v] = lit > 0
            self.assign[v] = 0
            self.reason[v] = -1
            heappush(heap, (-self.activity[v], v))
        del self.trail[limit:]
        del self.trail_lim[target:]
        self.qhead = len(self.trail)

    # -- propagation -----------------------------------------------------

    def _propagate(self) -> int:
        """Unit propagation; returns the index of a conflicting clause or -1."""
        trail = self.trail
        watches = self.watches
        clauses = self.clauses
        assign = self.assign
        while self.qhead < len(trail):
            p = trail[self.qhead]
            self.qhead += 1
            self.propagations += 1
            np = -p
            iw = (np << 1) if np > 0 else ((-np << 1) | 1)
            wl = watches[iw]
            if not wl:
                continue
            new_wl: list[int] = []
            conflict = -1
            count = len(wl)
            i = 0
            while i < count:
                ci = wl[i]
                i += 1
                lits = clauses[ci]
                if lits[0] == np:
                    lits[0] = lits[1]
                    lits[1] = np
                first = lits[0]
                v0 = first if first > 0 else -first
                a0 = assign[v0]
                if (a0 if first > 0 else -a0) == 1:
                    new_wl.append(ci)
                    continue
                found = False
                for k in range(2, len(lits)):
                    lk = lits[k]
                    vk = lk if lk > 0 else -lk
                    ak = assign[vk]
                    if (ak if lk > 0 else -ak) != -1:
                        lits[1] = lk
                        lits[k] = np
                        watches[(lk << 1) if lk > 0 else ((-lk << 1) | 1)].append(ci)
                        found = True
                        break
                if found:
                    continue
                new_wl.append(ci)
                if a0 != 0:
                    # first is false: the whole clause is false
                    new_wl.extend(wl[i:])
                    conflict = ci
                    break
                assign[v0] = 1 if first > 0 else -1
                self.level[v0] = len(self.trail_lim)
                self.reason[v0] = ci
                trail.append(first)
            watches[iw] = new_wl
            if conflict != -1:
                self.qhead = len(trail)
                return conflict
        return -1

    # -- activities --------------------------------------------------------

    def _bump_var(self, v: int) -> None:
        act = self.activity[v] + self.var_inc
        self.activity[v] = act
        if act > _ACT_RESCALE:
            scale = 1.0 / _ACT_RESCALE
            for u in range(1, self.num_vars + 1):
                self.activity[u] *= scale
            self.var_inc *= scale
            self.heap = [
                (-self.activity[u], u) for u in range(1, self.num_vars + 1) if not self.assign[u]
            ]
            heapify(self.heap)
        elif not self.assign[v]:
            heappush(self.heap, (-act, v))

    # -- conflict analysis -------------------------------------------------

    def _analyze(self, confl: int) -> tuple[list[int], int, int]:
        """First-UIP learning; returns (learnt clause, backjump level, lbd).
        The asserting literal is placed first, a literal of the backjump
        level second."""
        clauses = self.clauses
        level = self.level
        seen = self.seen
        learnt = [0]
        to_clear: list[int] = []
        cur_level = len(self.trail_lim)
        counter = 0
        p = 0
        idx = len(self.trail) - 1
        ci = confl
        while True:
            lits = clauses[ci]
            for k in range(1 if p else 0, len(lits)):
                q = lits[k]
                v = q if q > 0 else -q
                if not seen[v] and level[v] > 0:
                    seen[v] = 1
                    to_clear.append(v)
                    self._bump_var(v)
                    if level[v] >= cur_level:
                        counter += 1
                    else:
                        learnt.append(q)
            while not seen[self.trail[idx] if self.trail[idx] > 0 else -self.trail[idx]]:
                idx -= 1
            p = self.trail[idx]
            v = p if p > 0 else -p
            idx -= 1
            seen[v] = 0
            counter -= 1
            if counter == 0:
                break
            ci = self.reason[v]
        learnt[0] = -p

        # basic minimization: drop literals implied by the rest
        kept = [learnt[0]]
        for q in learnt[1:]:
            v = q if q > 0 else -q
            rc = self.reason[v]
            if rc == -1:
                kept.append(q)
                continue
            for x in clauses[rc]:
                xv = x if x > 0 else -x
                if xv != v and not seen[xv] and level[xv] > 0:
                    kept.append(q)
                    break
        learnt = kept
        for v in to_clear:
            seen[v] = 0

        if len(learnt) == 1:
            bt = 0
        else:
            mi = 1
            for k in range(2, len(learnt)):
                if level[abs(learnt[k])] > level[abs(learnt[mi])]:
                    mi = k
            learnt[1], learnt[mi] = learnt[mi], learnt[1]
            bt = level[abs(learnt[1])]
        lbd = len({level[abs(q)] for q in learnt})
        return learnt, bt, lbd

    # -- learnt database ---------------------------------------------------

    def _locked(self, ci: int) -> bool:
        first = self.clauses[ci][0]
        v = first if first > 0 else -first
        return self.assign[v] != 0 and self.reason[v] == ci

    def _reduce_db(self) -> None:
        """Drop the worse half of disposable learnt clauses (lbd > 2,
        not a reason), rebuilding clause storage and watches."""
        disposable = [
            ci
            for ci in range(len(self.clauses))
            if self.learnt[ci] and self.lbd[ci] > 2 and not self._locked(ci)
        ]
        disposable.sort(key=lambda ci: (self.lbd[ci], len(self.clauses[ci]), ci))
        drop = set(disposable[len(disposable) // 2 :])
        remap: dict[int, int] = {}
        clauses: list[list[int]] = []
        learnt: list[bool] = []
        lbd: list[int] = []
        for ci in range(len(self.clauses)):
            if ci in drop:
                continue
            remap[ci] = len(clauses)
            clauses.append(self.clauses[ci])
            learnt.append(self.learnt[ci])
            lbd.append(self.lbd[ci])
        self.clauses = clauses
        self.learnt = learnt
        self.lbd = lbd
        self.n_learnt -= len(drop)
        for v in range(1, self.num_vars + 1):
            rc = self.reason[v]
            if rc != -1:
                self.reason[v] = remap[rc] if self.assign[v] else -1
        self.watches = [[] for _ in range(2 * self.num_vars + 2)]
        for ci, cl in enumerate(clauses):
            self.watches[self._widx(cl[0])].append(ci)
            self.watches[self._widx(cl[1])].append(ci)
        self.max_learnt *= 1.15

    # -- search ------------------------------------------------------------

    def _pick_branch_var(self) -> int:
        heap = self.heap
        assign = self.assign
        activity = self.activity
        while heap:
            negact, v = heappop(heap)
            if not assign[v] and activity[v] == -negact:
                return v
        return 0

    def solve(self, timeout: float | None = None) -> Optional[bool]:
        """Decide the current clause set.  Returns True (model available
        via `model()`), False (unsatisfiable), or None on timeout."""
        if not self.ok:
            return False
        deadline = time.monotonic() + timeout if timeout is not None else None
        budget = _RESTART_UNIT * luby(self.restarts)
        conflicts_here = 0
        while True:
            confl = self._propagate()
            if confl != -1:
                self.conflicts += 1
                conflicts_here += 1
                if not self.trail_lim:
                    self.ok = False
                    return False
                learnt, bt, lbd = self._analyze(confl)
                self._cancel_until(bt)
                if len(learnt) == 1:
                    self._enqueue(learnt[0], -1)
                else:
                    ci = len(self.clauses)
                    self.clauses.append(learnt)
                    self.learnt.append(True)
                    self.lbd.append(lbd)
                    self.watches[self._widx(learnt[0])].append(ci)
                    self.watches[self._widx(learnt[1])].append(ci)
                    self.n_learnt += 1
                    self._enqueue(learnt[0], ci)
                self.var_inc /= 0.95
                if deadline is not None and self.conflicts % 128 == 0:
                    if time.monotonic() > deadline:
                        self._cancel_until(0)
                        return None
                if self.n_learnt > self.max_learnt:
                    self._reduce_db()
                if conflicts_here >= budget:
                    self.restarts += 1
                    budget = _RESTART_UNIT * luby(self.restarts)
                    conflicts_here = 0
                    self._cancel_until(0)
            else:
                v = self._pick_branch_var()
                if v == 0:
                    self._model = tuple(self.assign[u] == 1 for u in range(1, self.num_vars + 1))
                    return True
                self.decisions += 1
                self.trail_lim.append(len(self.trail))
                self._enqueue(v if self.phase[v] else -v, -1)

    def model(self) -> tuple[bool, ...]:
        """The model found by the last successful solve()."""
        if self._model is None:
            raise RuntimeError("no model available; call solve() first")
        return self._model


def solve_clauses(
    num_vars: int, clauses: Iterable[Sequence[int]], timeout: float | None = None
) -> tuple[Optional[bool], Optional[tuple[bool, ...]]]:
    """One-shot convenience wrapper: returns (status, model)."""
    solver = Solver(num_vars)
    for clause in clauses:
        solver.add_clause(clause)
    result = solver.solve(timeout=timeout)
    return result, solver.model() if result else None
