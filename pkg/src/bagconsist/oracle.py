"""Ground-truth integer-feasibility solver for witness systems.

Solves the marginal-equation system over the join of the supports by
exhaustive depth-first search with slack propagation. Exponential in the
worst case by design: this module exists to certify small instances and to
cross-check every other decision path.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Optional, Union

from .bags import Bag, SchemaMismatchError, project_row


class _Exhausted:
    """Singleton return value for budget exhaustion."""

    def __repr__(self):
        return "EXHAUSTED"


EXHAUSTED = _Exhausted()


@dataclass(frozen=True)
class OracleBudget:
    max_join_support: int = 10 ** 6
    max_nodes: int = 10 ** 8
    max_seconds: float = 60.0

    def __post_init__(self):
        if self.max_join_support <= 0 or self.max_nodes <= 0 or self.max_seconds <= 0:
            raise ValueError("budget limits must be positive")


def check_witness(w: Bag, db) -> bool:
    """True iff the bag's marginals reproduce every bag of the database."""
    union = set()
    for bag in db.bags:
        union |= set(bag.schema)
    if set(w.schema) != union:
        raise SchemaMismatchError(
            "witness schema %r != union schema %r" % (w.schema, tuple(sorted(union))))
    return all(w.marginal(bag.schema) == bag for bag in db.bags)


@dataclass
class _System:
    union_schema: tuple
    join_rows: list                 # candidate witness rows, canonical order
    demands: list                   # one per constraint row
    row_tuples: list                # per join row: indices of constraint rows
    incident: list                  # per constraint row: count of incident join rows


def _build_system(db, budget: OracleBudget) -> Union[_System, _Exhausted, None]:
    """Join the supports and set up the marginal-equation rows.

    Returns None when a bag's constraint provably cannot be met because the
    join support is empty while demands are positive.
    """
    union_schema = tuple(sorted({a for bag in db.bags for a in bag.schema}))
    joined = None
    for bag in db.bags:
        rel = bag.support()
        joined = rel if joined is None else joined.join(rel)
        if joined is not None and len(joined) > budget.max_join_support:
            return EXHAUSTED
    if joined is None:  # no bags at all
        join_rows = []
    else:
        # pad up to the union schema if some attribute never occurs (cannot
        # happen for databases, where edges tile the schema)
        join_rows = [project_row(joined.schema, r, joined.schema)
                     for r in joined.rows()]
        union_schema = joined.schema

    demands = []
    row_index: dict[tuple[int, tuple], int] = {}
    for i, bag in enumerate(db.bags):
        for r in bag.rows():
            row_index[(i, r)] = len(demands)
            demands.append(bag.entries[r])

    row_tuples = []
    incident = [0] * len(demands)
    for jrow in join_rows:
        hit = []
        for i, bag in enumerate(db.bags):
            key = (i, project_row(union_schema, jrow, bag.schema))
            hit.append(row_index[key])
            incident[row_index[key]] += 1
        row_tuples.append(hit)
    return _System(union_schema, join_rows, demands, row_tuples, incident)


def _search(db, budget: OracleBudget, want_all: bool):
    """Complete DFS over join-row multiplicities. Yields a status string
    plus the solutions found."""
    sys_ = _build_system(db, budget)
    if sys_ is EXHAUSTED:
        return "exhausted", []
    demands = sys_.demands
    if not sys_.join_rows:
        if all(d == 0 for d in demands):
            return "done", [Bag(sys_.union_schema, {})]
        return "done", []
    if any(d > 0 and c == 0 for d, c in zip(demands, sys_.incident)):
        return "done", []
    # every join row contributes exactly once to each bag's equation system,
    # so all bag totals must equal the witness total mass
    totals = {sum(bag.entries.values()) for bag in db.bags}
    if len(totals) > 1:
        return "done", []

    cap = max(demands, default=0)
    n = len(sys_.join_rows)
    rem = list(demands)
    # per constraint row: how many join rows at position >= p still touch it
    pending = list(sys_.incident)
    assignment = [0] * n
    solutions: list[Bag] = []
    nodes = 0
    deadline = time.monotonic() + budget.max_seconds

    def record():
        entries = {row: m for row, m in zip(sys_.join_rows, assignment) if m}
        solutions.append(Bag(sys_.union_schema, entries))

    # iterative DFS with explicit value stack, descending value order
    p = 0
    value_stack: list[int] = []  # next value to try at each depth

    def bounds(p):
        rows = sys_.row_tuples[p]
        ub = cap
        lb = 0
        for r in rows:
            if rem[r] < ub:
                ub = rem[r]
            floor = rem[r] - (pending[r] - 1) * cap
            if floor > lb:
                lb = floor
        return lb, ub

    lb, ub = bounds(0)
    value_stack.append(ub)
    lb_stack = [lb]
    status = "done"
    while value_stack:
        nodes += 1
        if nodes > budget.max_nodes or (nodes % 1024 == 0
                                        and time.monotonic() > deadline):
            status = "exhausted"
            solutions = []
            break
        p = len(value_stack) - 1
        val = value_stack[p]
        if val < lb_stack[p]:
            # exhausted values at this depth: backtrack
            value_stack.pop()
            lb_stack.pop()
            if value_stack:
                q = len(value_stack) - 1
                old = assignment[q]
                for r in sys_.row_tuples[q]:
                    rem[r] += old
                    pending[r] += 1
                assignment[q] = 0
                value_stack[q] -= 1
            continue
        # place val at position p
        assignment[p] = val
        ok = True
        for r in sys_.row_tuples[p]:
            rem[r] -= val
            pending[r] -= 1
            if rem[r] < 0:
                ok = False
        if not ok or any(rem[r] > pending[r] * cap for r in sys_.row_tuples[p]):
            for r in sys_.row_tuples[p]:
                rem[r] += val
                pending[r] += 1
            assignment[p] = 0
            value_stack[p] -= 1
            continue
        if p + 1 == n:
            if all(x == 0 for x in rem):
                record()
                if not want_all:
                    break
            for r in sys_.row_tuples[p]:
                rem[r] += val
                pending[r] += 1
            assignment[p] = 0
            value_stack[p] -= 1
            continue
        lb, ub = bounds(p + 1)
        value_stack.append(ub)
        lb_stack.append(lb)
    return status, solutions


def solve_feasibility(db, budget: Optional[OracleBudget] = None
                      ) -> Union[Bag, None, _Exhausted]:
    """A witness bag, None when provably infeasible, or EXHAUSTED."""
    budget = budget or OracleBudget()
    status, sols = _search(db, budget, want_all=False)
    if status == "exhausted":
        return EXHAUSTED
    return sols[0] if sols else None


def enumerate_witnesses(db, budget: Optional[OracleBudget] = None
                        ) -> Union[list, _Exhausted]:
    """All distinct witnesses, by complete enumeration of the search tree."""
    budget = budget or OracleBudget()
    status, sols = _search(db, budget, want_all=True)
    if status == "exhausted":
        return EXHAUSTED
    return sols


@dataclass(frozen=True)
class BoundsReport:
    """The witness-size inequalities, evaluated exactly (logs carry a
    relative tolerance)."""
    mult_bound: int
    mult_bound_limit: int
    support_size: int
    unary_limit: int
    binary_limit: float
    mult_bound_ok: bool = field(init=False)
    unary_ok: bool = field(init=False)
    binary_ok: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "mult_bound_ok",
                           self.mult_bound <= self.mult_bound_limit)
        object.__setattr__(self, "unary_ok",
                           self.support_size <= self.unary_limit)
        tol = 1e-9 * max(1.0, abs(self.binary_limit))
        object.__setattr__(self, "binary_ok",
                           self.support_size <= self.binary_limit + tol)

    @property
    def all_ok(self) -> bool:
        return self.mult_bound_ok and self.unary_ok and self.binary_ok


def verify_bounds(db, w: Bag) -> BoundsReport:
    """Evaluate the three witness-size bounds for a (minimal) witness.

    The binary bound only holds for support-minimal witnesses; the caller
    decides which flags are load-bearing.
    """
    if not check_witness(w, db):
        raise ValueError("bag is not a witness for the database")
    wn = w.norms()
    norms = [bag.norms() for bag in db.bags]
    return BoundsReport(
        mult_bound=wn.multiplicity_bound,
        mult_bound_limit=max((n.multiplicity_bound for n in norms), default=0),
        support_size=wn.support_size,
        unary_limit=sum(n.unary_size for n in norms),
        binary_limit=math.fsum(n.binary_size for n in norms),
    )
