"""Boolean functions over the two-element algebra {0, 1}.

Functions are immutable expression trees over integer variable ids with
eager constant folding.  The module provides evaluation, truth tables,
zero sets and supports, cofactoring/substitution, the dual and star
operations, and the text grammar used by the file formats:

    variables   identifiers (``x``, ``x1``, ``carry_out`` ...)
    operators   ``&`` (AND), ``|`` (OR), ``^`` (XOR), ``~`` or postfix
                ``'`` (NOT), constants ``0`` and ``1``
    precedence  ``~``  >  ``&``  >  ``^``  >  ``|``, parentheses allowed

Everything here is a value: safe to share across threads, never mutated
after construction.
"""

from __future__ import annotations

import re
from typing import Iterable, Iterator, Mapping, Optional, Sequence, Union

#: Hard ceiling on exhaustive enumeration (number of point evaluations).
#: Operations that would exceed it raise TooManyVariables instead of
#: silently sampling.
DEFAULT_CAP = 1 << 24


class BoolAlgError(Exception):
    """Base class for all errors raised by this package."""


class UndeclaredVariable(BoolAlgError, KeyError):
    """An assignment was queried for a variable it does not declare."""


class TooManyVariables(BoolAlgError):
    """An exhaustive operation would exceed the enumeration cap."""


class ConflictingAssignment(BoolAlgError):
    """A partial assignment binds the same variable twice."""


class DuplicateVariable(BoolAlgError):
    """A term or literal list names the same variable twice."""


class ParseError(BoolAlgError):
    """Malformed expression or input file."""

    def __init__(self, message: str, line: Optional[int] = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


def _check_cap(n_vars: int, cap: Optional[int]) -> None:
    limit = DEFAULT_CAP if cap is None else cap
    if n_vars >= limit.bit_length() or (1 << n_vars) > limit:
        raise TooManyVariables(
            f"2^{n_vars} evaluations exceed the cap of {limit}"
        )


# ---------------------------------------------------------------------------
# assignments


class Assignment:
    """A total map from variable ids to {0, 1} over a declared set."""

    __slots__ = ("_d", "_hash")

    def __init__(self, values: Mapping[int, int]):
        d = {}
        for v, b in values.items():
            if b not in (0, 1):
                raise ValueError(f"assignment value for x{v} must be 0 or 1")
            d[int(v)] = int(b)
        self._d = d
        self._hash = None

    def __getitem__(self, var: int) -> int:
        try:
            return self._d[var]
        except KeyError:
            raise UndeclaredVariable(var) from None

    def __contains__(self, var: int) -> bool:
        return var in self._d

    def __iter__(self) -> Iterator[int]:
        return iter(self._d)

    def __len__(self) -> int:
        return len(self._d)

    def items(self):
        return self._d.items()

    def keys(self):
        return self._d.keys()

    def as_dict(self) -> dict:
        return dict(self._d)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Assignment):
            return NotImplemented
        return self._d == other._d

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._d.items()))
        return self._hash

    def __repr__(self) -> str:
        inner = ", ".join(f"x{v}={b}" for v, b in sorted(self._d.items()))
        return f"Assignment({inner})"


class PartialAssignment:
    """A map from variable ids to {0, 1} covering any subset of variables.

    Extension (`merge`) requires disjoint variable sets so that composing
    partial assignments stays associative and never reorders bindings.
    """

    __slots__ = ("_d",)

    def __init__(self, values: Mapping[int, int] = ()):
        d = {}
        for v, b in dict(values).items():
            if b not in (0, 1):
                raise ValueError(f"assignment value for x{v} must be 0 or 1")
            d[int(v)] = int(b)
        self._d = d

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, int]]) -> "PartialAssignment":
        d = {}
        for v, b in pairs:
            if v in d:
                raise ConflictingAssignment(f"x{v} assigned twice")
            d[v] = b
        return cls(d)

    def merge(self, other: "PartialAssignment") -> "PartialAssignment":
        overlap = self._d.keys() & other._d.keys()
        if overlap:
            v = min(overlap)
            raise ConflictingAssignment(f"x{v} assigned twice")
        d = dict(self._d)
        d.update(other._d)
        return PartialAssignment(d)

    def __getitem__(self, var: int) -> int:
        try:
            return self._d[var]
        except KeyError:
            raise UndeclaredVariable(var) from None

    def __contains__(self, var: int) -> bool:
        return var in self._d

    def __iter__(self) -> Iterator[int]:
        return iter(self._d)

    def __len__(self) -> int:
        return len(self._d)

    def items(self):
        return self._d.items()

    def keys(self):
        return self._d.keys()

    def as_dict(self) -> dict:
        return dict(self._d)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PartialAssignment):
            return NotImplemented
        return self._d == other._d

    def __hash__(self) -> int:
        return hash(frozenset(self._d.items()))

    def __repr__(self) -> str:
        inner = ", ".join(f"x{v}={b}" for v, b in sorted(self._d.items()))
        return f"PartialAssignment({inner})"


def star(a: Assignment) -> Assignment:
    """Componentwise complement of a point; star is an involution."""
    return Assignment({v: 1 - b for v, b in a.items()})


# ---------------------------------------------------------------------------
# expression nodes

VAR = "var"
CONST = "const"
NOT = "not"
AND = "and"
OR = "or"
XOR = "xor"


class BoolFunc:
    """An immutable Boolean expression.

    Built through :func:`var`, :func:`const` and the operators ``&``,
    ``|``, ``^``, ``~``.  Constants fold eagerly on construction; no
    other simplification is performed, so two semantically equal
    functions may be structurally different (compare those with
    :func:`semantically_equal`).
    """

    __slots__ = ("kind", "var", "value", "left", "right", "_vars", "_hash")

    def __init__(self, kind, var=None, value=None, left=None, right=None):
        self.kind = kind
        self.var = var
        self.value = value
        self.left = left
        self.right = right
        self._vars = None
        self._hash = None

    # -- construction -------------------------------------------------

    def __and__(self, other: "BoolFunc") -> "BoolFunc":
        return and_(self, other)

    def __or__(self, other: "BoolFunc") -> "BoolFunc":
        return or_(self, other)

    def __xor__(self, other: "BoolFunc") -> "BoolFunc":
        return xor(self, other)

    def __invert__(self) -> "BoolFunc":
        return not_(self)

    # -- structure ----------------------------------------------------

    @property
    def vars(self) -> frozenset:
        """The set of variable ids the expression mentions."""
        if self._vars is None:
            if self.kind == VAR:
                self._vars = frozenset((self.var,))
            elif self.kind == CONST:
                self._vars = frozenset()
            elif self.kind == NOT:
                self._vars = self.left.vars
            else:
                self._vars = self.left.vars | self.right.vars
        return self._vars

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, BoolFunc):
            return NotImplemented
        if hash(self) != hash(other) or self.kind != other.kind:
            return False
        if self.kind == VAR:
            return self.var == other.var
        if self.kind == CONST:
            return self.value == other.value
        if self.kind == NOT:
            return self.left == other.left
        return self.left == other.left and self.right == other.right

    def __hash__(self) -> int:
        if self._hash is None:
            if self.kind == VAR:
                self._hash = hash((VAR, self.var))
            elif self.kind == CONST:
                self._hash = hash((CONST, self.value))
            elif self.kind == NOT:
                self._hash = hash((NOT, hash(self.left)))
            else:
                self._hash = hash((self.kind, hash(self.left), hash(self.right)))
        return self._hash

    def __repr__(self) -> str:
        return f"BoolFunc({to_text(self)})"

    # -- evaluation ---------------------------------------------------

    def eval(self, assignment: Union[Assignment, Mapping[int, int]]) -> int:
        """Value of the function at a point; the point must cover vars."""
        memo = {}

        def go(f: BoolFunc) -> int:
            key = id(f)
            got = memo.get(key)
            if got is not None:
                return got
            k = f.kind
            if k == VAR:
                try:
                    r = assignment[f.var]
                except KeyError:
                    raise UndeclaredVariable(f.var) from None
            elif k == CONST:
                r = f.value
            elif k == NOT:
                r = 1 - go(f.left)
            elif k == AND:
                r = go(f.left) & go(f.right)
            elif k == OR:
                r = go(f.left) | go(f.right)
            else:
                r = go(f.left) ^ go(f.right)
            memo[key] = r
            return r

        return go(self)


_CONST0 = BoolFunc(CONST, value=0)
_CONST1 = BoolFunc(CONST, value=1)


def const(value: int) -> BoolFunc:
    if value not in (0, 1):
        raise ValueError("Boolean constant must be 0 or 1")
    return _CONST1 if value else _CONST0


def var(index: int) -> BoolFunc:
    if index < 0:
        raise ValueError("variable ids are nonnegative")
    return BoolFunc(VAR, var=index)


def not_(f: BoolFunc) -> BoolFunc:
    if f.kind == CONST:
        return const(1 - f.value)
    if f.kind == NOT:
        return f.left
    return BoolFunc(NOT, left=f)


def and_(f: BoolFunc, g: BoolFunc) -> BoolFunc:
    if f.kind == CONST:
        return g if f.value else _CONST0
    if g.kind == CONST:
        return f if g.value else _CONST0
    if f is g:
        return f
    return BoolFunc(AND, left=f, right=g)


def or_(f: BoolFunc, g: BoolFunc) -> BoolFunc:
    if f.kind == CONST:
        return _CONST1 if f.value else g
    if g.kind == CONST:
        return _CONST1 if g.value else f
    if f is g:
        return f
    return BoolFunc(OR, left=f, right=g)


def xor(f: BoolFunc, g: BoolFunc) -> BoolFunc:
    if f.kind == CONST:
        return not_(g) if f.value else g
    if g.kind == CONST:
        return not_(f) if g.value else f
    if f is g:
        return _CONST0
    return BoolFunc(XOR, left=f, right=g)


def _fold_balanced(op, fs: Sequence[BoolFunc], empty: BoolFunc) -> BoolFunc:
    # Balanced fold keeps the tree depth logarithmic in len(fs).
    fs = list(fs)
    if not fs:
        return empty
    while len(fs) > 1:
        fs = [
            op(fs[i], fs[i + 1]) if i + 1 < len(fs) else fs[i]
            for i in range(0, len(fs), 2)
        ]
    return fs[0]


def and_all(fs: Sequence[BoolFunc]) -> BoolFunc:
    return _fold_balanced(and_, fs, _CONST1)


def or_all(fs: Sequence[BoolFunc]) -> BoolFunc:
    return _fold_balanced(or_, fs, _CONST0)


def xor_all(fs: Sequence[BoolFunc]) -> BoolFunc:
    return _fold_balanced(xor, fs, _CONST0)


def literal_of(f: BoolFunc) -> Optional[tuple[int, bool]]:
    """(variable, polarity) if f is a bare literal, else None."""
    if f.kind == VAR:
        return (f.var, True)
    if f.kind == NOT and f.left.kind == VAR:
        return (f.left.var, False)
    return None


# ---------------------------------------------------------------------------
# terms


class Term:
    """A product of literals over distinct variables.

    The empty term is the constant 1.  ``partial_assignment`` gives the
    unique bindings that make the term evaluate to 1.
    """

    __slots__ = ("_lits",)

    def __init__(self, literals: Mapping[int, bool] = ()):
        self._lits = {int(v): bool(p) for v, p in dict(literals).items()}

    @classmethod
    def from_literals(cls, pairs: Iterable[tuple[int, bool]]) -> "Term":
        d = {}
        for v, p in pairs:
            if v in d:
                raise DuplicateVariable(f"x{v} appears twice in term")
            d[v] = p
        return cls(d)

    @property
    def literals(self) -> dict:
        return dict(self._lits)

    @property
    def vars(self) -> frozenset:
        return frozenset(self._lits)

    def __len__(self) -> int:
        return len(self._lits)

    def partial_assignment(self) -> PartialAssignment:
        return PartialAssignment({v: 1 if p else 0 for v, p in self._lits.items()})

    def func(self) -> BoolFunc:
        """The term as an expression (AND of its literals)."""
        lits = [
            var(v) if p else not_(var(v)) for v, p in sorted(self._lits.items())
        ]
        return and_all(lits)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Term):
            return NotImplemented
        return self._lits == other._lits

    def __hash__(self) -> int:
        return hash(frozenset(self._lits.items()))

    def __repr__(self) -> str:
        if not self._lits:
            return "Term(1)"
        body = "".join(
            f"x{v}" if p else f"x{v}'" for v, p in sorted(self._lits.items())
        )
        return f"Term({body})"


def as_term(f: BoolFunc) -> Optional[Term]:
    """Recognize an AND-of-literals expression as a Term, else None."""
    if f.kind == CONST:
        return Term() if f.value == 1 else None
    lits = {}
    stack = [f]
    while stack:
        g = stack.pop()
        if g.kind == AND:
            stack.append(g.left)
            stack.append(g.right)
            continue
        lit = literal_of(g)
        if lit is None:
            return None
        v, p = lit
        if v in lits and lits[v] != p:
            return None
        lits[v] = p
    return Term(lits)


# ---------------------------------------------------------------------------
# truth tables and exhaustive set operations

def _var_pattern(n: int, pos: int) -> int:
    """Bitmask over 2^n points where the variable at MSB-position pos is 1."""
    s = n - 1 - pos
    block = ((1 << (1 << s)) - 1) << (1 << s)
    width = 1 << (s + 1)
    total = 1 << n
    pat = block
    while width < total:
        pat |= pat << width
        width <<= 1
    return pat


def truth_table(f: BoolFunc, order: Sequence[int], cap: Optional[int] = None) -> int:
    """Truth table of f as an integer bitmask.

    Bit a holds f at the point whose bits, read most-significant first,
    assign the variables in ``order``.  The first variable in ``order``
    is the most significant bit, matching the minterm index convention.
    """
    order = list(order)
    n = len(order)
    _check_cap(n, cap)
    missing = f.vars - set(order)
    if missing:
        raise UndeclaredVariable(min(missing))
    full = (1 << (1 << n)) - 1
    pos = {v: i for i, v in enumerate(order)}
    patterns = {}
    memo = {}

    def go(g: BoolFunc) -> int:
        key = id(g)
        got = memo.get(key)
        if got is not None:
            return got
        k = g.kind
        if k == VAR:
            r = patterns.get(g.var)
            if r is None:
                r = _var_pattern(n, pos[g.var])
                patterns[g.var] = r
        elif k == CONST:
            r = full if g.value else 0
        elif k == NOT:
            r = full ^ go(g.left)
        elif k == AND:
            r = go(g.left) & go(g.right)
        elif k == OR:
            r = go(g.left) | go(g.right)
        else:
            r = go(g.left) ^ go(g.right)
        memo[key] = r
        return r

    return go(f)


def index_to_assignment(index: int, order: Sequence[int]) -> Assignment:
    """The point encoded by ``index`` under the MSB-first convention."""
    n = len(order)
    return Assignment({v: (index >> (n - 1 - i)) & 1 for i, v in enumerate(order)})


def all_assignments(order: Sequence[int]) -> Iterator[Assignment]:
    for idx in range(1 << len(order)):
        yield index_to_assignment(idx, order)


def _resolve_universe(f: BoolFunc, over: Optional[Iterable[int]]) -> list:
    if over is None:
        return sorted(f.vars)
    universe = sorted(set(over))
    missing = f.vars - set(universe)
    if missing:
        raise UndeclaredVariable(min(missing))
    return universe


def zero_set(
    f: BoolFunc, over: Optional[Iterable[int]] = None, cap: Optional[int] = None
) -> set:
    """All points where f evaluates to 0, over the given variable universe.

    ``over`` defaults to the variables the expression mentions; pass a
    larger universe to enumerate over declared-but-unused variables.
    """
    order = _resolve_universe(f, over)
    table = truth_table(f, order, cap)
    n = len(order)
    return {
        index_to_assignment(idx, order)
        for idx in range(1 << n)
        if not (table >> idx) & 1
    }


def support(
    f: BoolFunc, over: Optional[Iterable[int]] = None, cap: Optional[int] = None
) -> set:
    """All points where f evaluates to 1; the complement of zero_set."""
    order = _resolve_universe(f, over)
    table = truth_table(f, order, cap)
    n = len(order)
    return {
        index_to_assignment(idx, order) for idx in range(1 << n) if (table >> idx) & 1
    }


def semantically_equal(
    f: BoolFunc,
    g: BoolFunc,
    over: Optional[Iterable[int]] = None,
    cap: Optional[int] = None,
) -> bool:
    """Exhaustive equality over the union of the two variable sets."""
    order = sorted(set(over) if over is not None else (f.vars | g.vars))
    return truth_table(f, order, cap) == truth_table(g, order, cap)


def is_zero(f: BoolFunc, cap: Optional[int] = None) -> bool:
    return truth_table(f, sorted(f.vars), cap) == 0


def is_one(f: BoolFunc, cap: Optional[int] = None) -> bool:
    order = sorted(f.vars)
    return truth_table(f, order, cap) == (1 << (1 << len(order))) - 1


# ---------------------------------------------------------------------------
# substitution, cofactors, dual

def substitute(f: BoolFunc, mapping: Mapping[int, Union[BoolFunc, int]]) -> BoolFunc:
    """Replace variables by expressions (or constants), folding as it goes."""
    repl = {}
    for v, g in mapping.items():
        repl[v] = const(g) if isinstance(g, int) else g
    memo = {}

    def go(g: BoolFunc) -> BoolFunc:
        key = id(g)
        got = memo.get(key)
        if got is not None:
            return got
        k = g.kind
        if k == VAR:
            r = repl.get(g.var, g)
        elif k == CONST:
            r = g
        elif k == NOT:
            r = not_(go(g.left))
        elif k == AND:
            r = and_(go(g.left), go(g.right))
        elif k == OR:
            r = or_(go(g.left), go(g.right))
        else:
            r = xor(go(g.left), go(g.right))
        memo[key] = r
        return r

    return go(f)


def cofactor(
    f: BoolFunc, p: Union[PartialAssignment, Mapping[int, int], Term]
) -> BoolFunc:
    """f with the partial assignment substituted and constants folded.

    For a term t this computes the ratio f/t = f(t=1), a function of the
    free variables only.
    """
    if isinstance(p, Term):
        p = p.partial_assignment()
    elif not isinstance(p, PartialAssignment):
        p = PartialAssignment.from_pairs(dict(p).items())
    return substitute(f, {v: b for v, b in p.items()})


def conjugate(f: BoolFunc) -> BoolFunc:
    """f composed with the star map: every variable complemented."""
    return substitute(f, {v: not_(var(v)) for v in f.vars})


def dual(f: BoolFunc) -> BoolFunc:
    """The dual function: complement of f at the complemented point."""
    return not_(conjugate(f))


def point_function(a: Assignment) -> BoolFunc:
    """The function whose zero set is exactly the point a."""
    return or_all([xor(var(v), const(b)) for v, b in sorted(a.items())])


def _children(f: BoolFunc) -> tuple:
    if f.kind in (VAR, CONST):
        return ()
    if f.kind == NOT:
        return (f.left,)
    return (f.left, f.right)


def var_occurrences(f: BoolFunc) -> dict:
    """Occurrence count per variable, as in the fully unshared tree.

    Shared subtrees count once per path from the root, so the result
    matches the textual occurrence count of the expression.
    """
    # post-order over the DAG, each node once
    post = []
    seen = set()
    stack = [(f, False)]
    while stack:
        node, processed = stack.pop()
        if processed:
            post.append(node)
            continue
        if id(node) in seen:
            continue
        seen.add(id(node))
        stack.append((node, True))
        for child in _children(node):
            if id(child) not in seen:
                stack.append((child, False))
    paths = {id(node): 0 for node in post}
    paths[id(f)] = 1
    counts: dict = {}
    for node in reversed(post):
        p = paths[id(node)]
        if node.kind == VAR:
            counts[node.var] = counts.get(node.var, 0) + p
        for child in _children(node):
            paths[id(child)] += p
    return counts


# ---------------------------------------------------------------------------
# names and parsing


class VarTable:
    """Symbol table mapping external names to dense variable ids."""

    def __init__(self):
        self._ids = {}
        self._names = []

    def intern(self, name: str) -> int:
        vid = self._ids.get(name)
        if vid is None:
            vid = len(self._names)
            self._ids[name] = vid
            self._names.append(name)
        return vid

    def id_of(self, name: str) -> int:
        try:
            return self._ids[name]
        except KeyError:
            raise UndeclaredVariable(name) from None

    def name_of(self, vid: int) -> str:
        return self._names[vid]

    @property
    def names(self) -> list:
        return list(self._names)

    def __len__(self) -> int:
        return len(self._names)

    def __contains__(self, name: str) -> bool:
        return name in self._ids


_TOKEN_RE = re.compile(r"[A-Za-z_]\w*|[01&|^~()']|\S")


class _Parser:
    def __init__(self, text: str, table: VarTable, line: Optional[int] = None):
        self.tokens = _TOKEN_RE.findall(text)
        self.pos = 0
        self.table = table
        self.line = line

    def peek(self) -> Optional[str]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> Optional[str]:
        tok = self.peek()
        self.pos += 1
        return tok

    def fail(self, message: str):
        raise ParseError(message, self.line)

    def parse(self) -> BoolFunc:
        f = self.disjunction()
        if self.peek() is not None:
            self.fail(f"unexpected token {self.peek()!r}")
        return f

    def disjunction(self) -> BoolFunc:
        parts = [self.xor_chain()]
        while self.peek() == "|":
            self.take()
            parts.append(self.xor_chain())
        return or_all(parts)

    def xor_chain(self) -> BoolFunc:
        parts = [self.conjunction()]
        while self.peek() == "^":
            self.take()
            parts.append(self.conjunction())
        return xor_all(parts)

    def conjunction(self) -> BoolFunc:
        parts = [self.unary()]
        while self.peek() == "&":
            self.take()
            parts.append(self.unary())
        return and_all(parts)

    def unary(self) -> BoolFunc:
        if self.peek() == "~":
            self.take()
            return not_(self.unary())
        return self.postfix()

    def postfix(self) -> BoolFunc:
        f = self.atom()
        while self.peek() == "'":
            self.take()
            f = not_(f)
        return f

    def atom(self) -> BoolFunc:
        tok = self.take()
        if tok is None:
            self.fail("unexpected end of expression")
        if tok == "(":
            f = self.disjunction()
            if self.take() != ")":
                self.fail("missing closing parenthesis")
            return f
        if tok == "0":
            return _CONST0
        if tok == "1":
            return _CONST1
        if re.fullmatch(r"[A-Za-z_]\w*", tok):
            return var(self.table.intern(tok))
        self.fail(f"unexpected token {tok!r}")


def parse_expr(text: str, table: VarTable, line: Optional[int] = None) -> BoolFunc:
    """Parse an expression in the text grammar, interning new names."""
    if not text.strip():
        raise ParseError("empty expression", line)
    return _Parser(text, table, line).parse()


def to_text(f: BoolFunc, table: Optional[VarTable] = None) -> str:
    """Render an expression in the text grammar (fully parenthesized)."""

    def name(v: int) -> str:
        return table.name_of(v) if table is not None else f"x{v}"

    def go(g: BoolFunc) -> str:
        k = g.kind
        if k == VAR:
            return name(g.var)
        if k == CONST:
            return str(g.value)
        if k == NOT:
            inner = go(g.left)
            if g.left.kind == VAR:
                return f"~{inner}"
            return f"~({inner})"
        sym = {AND: "&", OR: "|", XOR: "^"}[k]
        return f"({go(g.left)} {sym} {go(g.right)})"

    return go(f)
