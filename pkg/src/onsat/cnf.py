"""CNF satisfiability as a specialization of the system solver.

Clauses are frozensets of signed literals in the DIMACS convention:
literal ``+k`` is variable id k-1 true, ``-k`` is it false.  The solver
is the classic unit/pure/split loop, except that splitting uses an
orthonormal chain of terms over several literals at once; with
split_depth=1 the chain degenerates to the usual two-way branch.

Pure literals behave differently per mode.  In decide mode they are
assigned true one at a time (ascending variable id, skipping any whose
variable disappears along the way), which is satisfiability-preserving.
In enumerate mode fixing pures would lose solutions, so the node
branches over the full pure-literal chain instead.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence

from .boolalg import (
    PartialAssignment,
    ParseError,
    not_,
    or_all,
    var,
)
from .onset import OnSet, term_chain
from .solver import (
    Conflict,
    DECIDE,
    ENUMERATE,
    SAT,
    UNSAT,
    BoolSystem,
    Solution,
    SolveOutcome,
    SolverConfig,
    _Search,
)


class NoPureLiterals(Exception):
    """A pure-literal chain was requested but no literal is pure."""


class HeaderMismatch(Warning):
    """DIMACS header counts disagree with the literal content."""


def _check_clause(lits: Sequence[int], line: Optional[int]) -> frozenset:
    clause = frozenset(lits)
    for l in clause:
        if l == 0:
            raise ParseError("literal 0 inside a clause", line)
        if -l in clause:
            raise ParseError(
                f"variable {abs(l)} appears with both polarities in one clause",
                line,
            )
    return clause


class CnfSet:
    """An ordered list of clauses over variables 0..num_vars-1."""

    __slots__ = ("clauses", "num_vars")

    def __init__(self, clauses: Sequence[frozenset], num_vars: int):
        self.clauses = tuple(clauses)
        self.num_vars = int(num_vars)

    @classmethod
    def from_clauses(
        cls, clauses: Sequence[Sequence[int]], num_vars: Optional[int] = None
    ) -> "CnfSet":
        """Build from DIMACS-style signed literal lists."""
        built = [_check_clause(c, None) for c in clauses]
        top = max((abs(l) for c in built for l in c), default=0)
        return cls(built, num_vars if num_vars is not None else top)

    def occurring(self) -> frozenset:
        return frozenset(abs(l) - 1 for c in self.clauses for l in c)

    @property
    def vars(self) -> frozenset:
        return frozenset(range(self.num_vars))

    def __len__(self) -> int:
        return len(self.clauses)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CnfSet):
            return NotImplemented
        return self.clauses == other.clauses and self.num_vars == other.num_vars

    def __repr__(self) -> str:
        return f"CnfSet({len(self.clauses)} clauses, {self.num_vars} vars)"


# ---------------------------------------------------------------------------
# DIMACS input and output

def parse_dimacs(text: str, strict: bool = False) -> CnfSet:
    """Parse DIMACS CNF.  Header mismatches warn unless strict."""
    declared_vars = None
    declared_clauses = None
    clauses = []
    pending: list = []
    pending_line = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            break
        if line.startswith("p"):
            fields = line.split()
            if len(fields) != 4 or fields[1] != "cnf":
                raise ParseError(f"bad problem line {line!r}", lineno)
            try:
                declared_vars = int(fields[2])
                declared_clauses = int(fields[3])
            except ValueError:
                raise ParseError(f"bad problem line {line!r}", lineno) from None
            continue
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise ParseError(f"non-integer literal {tok!r}", lineno) from None
            if lit == 0:
                clauses.append(_check_clause(pending, pending_line or lineno))
                pending = []
                pending_line = None
            else:
                if pending_line is None:
                    pending_line = lineno
                pending.append(lit)
    if pending:
        raise ParseError("last clause is not terminated by 0", pending_line)
    top = max((abs(l) for c in clauses for l in c), default=0)
    num_vars = top if declared_vars is None else max(declared_vars, top)
    problems = []
    if declared_vars is not None and top > declared_vars:
        problems.append(
            f"header declares {declared_vars} variables but {top} are used"
        )
    if declared_clauses is not None and declared_clauses != len(clauses):
        problems.append(
            f"header declares {declared_clauses} clauses but {len(clauses)} found"
        )
    for message in problems:
        if strict:
            raise ParseError(message)
        warnings.warn(message, HeaderMismatch, stacklevel=2)
    return CnfSet(clauses, num_vars)


def emit_dimacs(c: CnfSet) -> str:
    """Serialize to DIMACS, clause order preserved."""
    lines = [f"p cnf {c.num_vars} {len(c.clauses)}"]
    for clause in c.clauses:
        lits = sorted(clause, key=lambda l: (abs(l), l))
        lines.append(" ".join(str(l) for l in lits + [0]))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# reductions

def assign_and_reduce(c: CnfSet, p) -> CnfSet:
    """Apply a partial assignment: drop satisfied clauses, shrink others.

    Raises Conflict as soon as a clause loses all its literals.  This is
    the clause-level counterpart of cofactoring.
    """
    if isinstance(p, PartialAssignment):
        p = p.as_dict()
    out = []
    for clause in c.clauses:
        satisfied = False
        kept = []
        for lit in clause:
            v = abs(lit) - 1
            b = p.get(v)
            if b is None:
                kept.append(lit)
            elif (lit > 0) == bool(b):
                satisfied = True
                break
        if satisfied:
            continue
        if not kept:
            raise Conflict("empty clause")
        out.append(frozenset(kept))
    return CnfSet(out, c.num_vars)


def unit_literals(c: CnfSet) -> list:
    return [next(iter(clause)) for clause in c.clauses if len(clause) == 1]


def propagate_units(c: CnfSet) -> tuple[CnfSet, PartialAssignment]:
    """Assign every unit clause's literal true, to a fixpoint."""
    assigned: dict = {}
    while True:
        if any(len(clause) == 0 for clause in c.clauses):
            raise Conflict("empty clause")
        units = unit_literals(c)
        if not units:
            break
        step: dict = {}
        for lit in units:
            v = abs(lit) - 1
            b = 1 if lit > 0 else 0
            if step.setdefault(v, b) != b or assigned.get(v, b) != b:
                raise Conflict(f"contradictory unit clauses on variable {v + 1}")
        assigned.update(step)
        c = assign_and_reduce(c, step)
    return c, PartialAssignment(assigned)


def find_pure_literals(c: CnfSet) -> list:
    """Variables occurring with a single polarity, as (id, polarity)."""
    seen: dict = {}
    for clause in c.clauses:
        for lit in clause:
            v = abs(lit) - 1
            pol = lit > 0
            prev = seen.get(v)
            if prev is None:
                seen[v] = pol
            elif prev != pol:
                seen[v] = "mixed"
    return [(v, pol) for v, pol in sorted(seen.items()) if pol != "mixed"]


def assign_pure_round(c: CnfSet) -> tuple[CnfSet, PartialAssignment]:
    """One round of pure-literal assignments, lowest variable first.

    The pures detected at the start of the round are assigned true in
    their polarity one at a time; a literal whose variable no longer
    occurs by the time its turn comes is skipped (its clauses are
    already gone, so the variable stays free).  Pure assignments never
    shrink a clause, so no conflict can arise here.
    """
    assigned: dict = {}
    for v, pol in find_pure_literals(c):
        if v not in c.occurring():
            continue
        assigned[v] = 1 if pol else 0
        c = assign_and_reduce(c, {v: assigned[v]})
    return c, PartialAssignment(assigned)


def pure_literal_chain(c: CnfSet) -> OnSet:
    """The ON term chain over the pure literals, in their polarity.

    Satisfiability is decided by the last term alone (all pures true);
    enumerating all solutions requires every branch of the chain.
    """
    pures = find_pure_literals(c)
    if not pures:
        raise NoPureLiterals("the clause set has no pure literal")
    return term_chain(pures)


def decompose_cnf(c: CnfSet, terms: OnSet) -> list:
    """Reduce by each term of an ON chain; None marks a conflicted branch."""
    if terms.terms is None:
        raise ValueError("decomposition needs an ON set of terms")
    out = []
    for t in terms.terms:
        try:
            out.append(assign_and_reduce(c, t.partial_assignment()))
        except Conflict:
            out.append(None)
    return out


def choose_split_cnf(c: CnfSet, cfg: SolverConfig) -> OnSet:
    """Term chain over the most frequent variables, polarity by count."""
    pos: dict = {}
    neg: dict = {}
    for clause in c.clauses:
        for lit in clause:
            v = abs(lit) - 1
            if lit > 0:
                pos[v] = pos.get(v, 0) + 1
            else:
                neg[v] = neg.get(v, 0) + 1
    totals = {v: pos.get(v, 0) + neg.get(v, 0) for v in pos.keys() | neg.keys()}
    ranked = sorted(totals, key=lambda v: (-totals[v], v))
    depth = min(cfg.split_depth, len(ranked))
    if depth == 0:
        raise ValueError("no variables left to split on")
    lits = [(v, pos.get(v, 0) >= neg.get(v, 0)) for v in ranked[:depth]]
    return term_chain(lits)


# ---------------------------------------------------------------------------
# the SAT driver

@dataclass(frozen=True)
class _CnfNode:
    cnf: CnfSet
    trail: tuple  # sorted (var, value) pairs


def _node(cnf: CnfSet, trail: dict) -> _CnfNode:
    return _CnfNode(cnf, tuple(sorted(trail.items())))


def _leaf_solutions(node: _CnfNode, local_iter, occ: list) -> list:
    universe = set(range(node.cnf.num_vars))
    trail = dict(node.trail)
    n = len(occ)
    out = []
    for idx in local_iter:
        assignment = dict(trail)
        for i, v in enumerate(occ):
            assignment[v] = (idx >> (n - 1 - i)) & 1
        dont_care = universe - assignment.keys()
        out.append(Solution.make(assignment, dont_care))
    return out


def _brute_indices(c: CnfSet, occ: list) -> Iterator[int]:
    """Indices of satisfying points over occ, via truth-table bitmasks."""
    from .boolalg import _var_pattern

    n = len(occ)
    full = (1 << (1 << n)) - 1
    pos = {v: i for i, v in enumerate(occ)}
    patterns: dict = {}
    mask = full
    for clause in c.clauses:
        violate = full
        for lit in clause:
            v = abs(lit) - 1
            pat = patterns.get(v)
            if pat is None:
                pat = _var_pattern(n, pos[v])
                patterns[v] = pat
            violate &= pat if lit < 0 else full ^ pat
        mask &= full ^ violate
        if mask == 0:
            break
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _cnf_step(cfg: SolverConfig):
    enumerate_mode = cfg.mode == ENUMERATE

    def step(node: _CnfNode):
        c = node.cnf
        trail = dict(node.trail)
        try:
            c, units = propagate_units(c)
        except Conflict:
            return [], []
        trail.update(units.as_dict())
        if enumerate_mode:
            pures = find_pure_literals(c)
            if pures:
                children = []
                chain = term_chain(pures)
                for t in chain.terms:
                    q = t.partial_assignment().as_dict()
                    try:
                        reduced = assign_and_reduce(c, q)
                    except Conflict:
                        continue
                    child_trail = dict(trail)
                    child_trail.update(q)
                    children.append(_node(reduced, child_trail))
                return [], children
        else:
            while True:
                c, pures = assign_pure_round(c)
                if not pures:
                    break
                trail.update(pures.as_dict())
        occ = sorted(c.occurring())
        if len(occ) <= cfg.n0:
            node2 = _node(c, trail)
            return _leaf_solutions(node2, _brute_indices(c, occ), occ), []
        chain = choose_split_cnf(c, cfg)
        children = []
        for t in chain.terms:
            q = t.partial_assignment().as_dict()
            try:
                reduced = assign_and_reduce(c, q)
            except Conflict:
                continue
            child_trail = dict(trail)
            child_trail.update(q)
            children.append(_node(reduced, child_trail))
        return [], children

    return step


def solve_sat(c: CnfSet, cfg: Optional[SolverConfig] = None) -> SolveOutcome:
    """Decide or enumerate satisfiability of a clause set.

    The node loop is: unit propagation to a fixpoint, pure-literal
    handling (mode-dependent, see the module docstring), then either
    brute force below the n0 threshold or decomposition by a term chain
    over the most frequent variables.
    """
    if cfg is None:
        cfg = SolverConfig()
    search = _Search(_cnf_step(cfg), cfg.workers, cfg.mode == DECIDE)
    solutions = search.run(_node(c, {}))
    return SolveOutcome(SAT if solutions else UNSAT, solutions)


def to_system(c: CnfSet) -> BoolSystem:
    """Encode each clause as the equation clause-disjunction = 1.

    The native clause path is what the solver uses; this generic
    encoding exists for cross-checking against the system engine.
    """
    from .boolalg import const

    equations = []
    for clause in c.clauses:
        lits = [
            var(abs(l) - 1) if l > 0 else not_(var(abs(l) - 1))
            for l in sorted(clause, key=abs)
        ]
        equations.append((or_all(lits), const(1)))
    return BoolSystem.root(equations, range(c.num_vars))
