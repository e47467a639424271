"""Constraint handling: rewriting, collection, matching, satisfiability.

The predicate fragment in scope -- boolean connectives over linear integer
comparisons, equality over a finite symbol universe, and closed-world
relations -- is decided by a built-in enumerative solver.  Integer variables
range over a grid derived from the comparison constants (wide enough to be
exact for order constraints); symbol variables range over the collected
universe.  ``emit_smtlib`` renders the same problems as SMT-LIB v2 text for
external solvers.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import terms
from .preds import (
    And,
    Binding,
    Cmp,
    FALSE,
    Not,
    Or,
    Relation,
    TRUE,
    cmp,
    conj,
    disj,
    neg,
    pred_evaluate,
    pred_free_vars,
    pred_simplify,
    pred_substitute,
)
from .terms import (
    Concrete,
    Constrained,
    CorDef,
    CorIns,
    DefRef,
    Directed,
    InlineApp,
    Power,
    Seq,
    StartApp,
    Tup,
    Union,
    Var,
    ZeroType,
    flatten,
    substitute,
)


class ConstraintError(Exception):
    pass


class UnsupportedPredicate(ConstraintError):
    """A relation name with no registered interpretation."""


class DomainConflict(ConstraintError):
    """A variable used both as an integer and as a concrete symbol."""


class RedefinedRelation(ConstraintError):
    pass


class _Bottom:
    """No conditions make the two types equal."""

    def __repr__(self):
        return "⊥"


BOTTOM = _Bottom()


@dataclass
class ConditionSet:
    """The outcome of a successful match: uniquely determined variable
    bindings plus whatever predicate remains over the undetermined ones."""

    bindings: dict
    residual: object = TRUE

    def is_trivial(self) -> bool:
        return not self.bindings and self.residual == TRUE

    def __repr__(self):
        from .notation import render, render_pred

        pairs = ", ".join("%s ↦ %s" % (k, render(v)) for k, v in self.bindings.items())
        return "{%s} / %s" % (pairs, render_pred(self.residual))


class Universe:
    """All concrete symbols of one analysis plus the registered relations.

    Populated once, before reduction starts; treated as read-only afterwards.
    """

    def __init__(self, symbols=(), relations=None):
        self.symbols = tuple(sorted(set(symbols)))
        self.relations = dict(relations or {})

    @classmethod
    def collect(cls, *types):
        symbols = set()
        for t in types:
            symbols |= collect_concrete(t)
        return cls(symbols)

    def register_relation(self, name: str, pairs):
        if name in self.relations:
            raise RedefinedRelation(name)
        rows = frozenset(tuple(p) for p in pairs)
        arities = {len(r) for r in rows}
        if len(arities) > 1:
            raise ConstraintError("inconsistent arity for relation %s" % name)
        self.relations[name] = rows
        for row in rows:
            self.symbols = tuple(sorted(set(self.symbols) | set(row)))

    def holds(self, name: str, *args) -> bool:
        if name not in self.relations:
            raise UnsupportedPredicate(name)
        return tuple(args) in self.relations[name]


def collect_concrete(t) -> set:
    """All concrete type names occurring anywhere in a term."""
    out = set()

    def walk(x):
        if isinstance(x, Concrete):
            out.add(x.name)
        elif isinstance(x, (Seq, Tup)):
            for i in x.items:
                walk(i)
        elif isinstance(x, Union):
            walk(x.left)
            walk(x.right)
        elif isinstance(x, Power):
            walk(x.base)
        elif isinstance(x, Constrained):
            walk(x.base)
            walk_pred(x.pred)
        elif isinstance(x, Directed):
            walk(x.payload)
        elif isinstance(x, (CorDef, CorIns)):
            for i in x.flow:
                walk(i)
            if x.constraint is not None:
                walk_pred(x.constraint)
        elif isinstance(x, (StartApp, InlineApp)):
            walk(x.target)
            for _, v in x.bindings:
                walk(v)
        # bare variables and Zero contribute nothing

    def walk_pred(p):
        if isinstance(p, (And, Or)):
            for i in p.items:
                walk_pred(i)
        elif isinstance(p, Not):
            walk_pred(p.item)
        elif isinstance(p, Cmp):
            walk(p.lhs)
            walk(p.rhs)
        elif isinstance(p, Binding):
            walk(p.value)
        elif isinstance(p, Relation):
            for a in p.args:
                walk(a)

    walk(flatten(t))
    return out


# ---------------------------------------------------------------------------
# constrained-type rewriting


def reduce_constrained(t, universe: Universe | None = None):
    """Rewrite constrained types to a fixpoint.

    Rules: a false guard erases the type, a true guard vanishes, stacked
    guards merge, and an ``x ↦ v`` conjunct is applied as a substitution.
    """
    relations = universe.relations if universe is not None else None
    prev = None
    t = flatten(t)
    while t != prev:
        prev = t
        t = _rc_walk(t, relations)
    return t


def _rc_walk(t, relations):
    if isinstance(t, Constrained):
        base = _rc_walk(t.base, relations)
        base, pred = _apply_guard(base, t.pred, relations)
        if pred is None:
            return base
        return flatten(Constrained(base, pred))
    if isinstance(t, (CorIns, CorDef)) and t.constraint is not None:
        inner = type(t)(tuple(_rc_walk(i, relations) for i in t.flow), None, t.label)
        body, pred = _apply_guard(inner, t.constraint, relations)
        if isinstance(body, (CorIns, CorDef)):
            return flatten(type(body)(body.flow, pred, body.label))
        return body if pred is None else flatten(Constrained(body, pred))
    if isinstance(t, (CorIns, CorDef)):
        return flatten(type(t)(tuple(_rc_walk(i, relations) for i in t.flow), None, t.label))
    if isinstance(t, Seq):
        return flatten(Seq(tuple(_rc_walk(i, relations) for i in t.items)))
    if isinstance(t, Tup):
        return flatten(Tup(tuple(_rc_walk(i, relations) for i in t.items)))
    if isinstance(t, Union):
        return flatten(Union(_rc_walk(t.left, relations), _rc_walk(t.right, relations)))
    if isinstance(t, Directed):
        return Directed(t.direction, _rc_walk(t.payload, relations))
    if isinstance(t, StartApp):
        return StartApp(_rc_walk(t.target, relations), t.bindings)
    if isinstance(t, InlineApp):
        return InlineApp(_rc_walk(t.target, relations), t.bindings)
    return t


def _apply_guard(base, pred, relations):
    """Run the guard rules on one constrained node; returns (base, pred|None)."""
    while True:
        pred = pred_simplify(pred, relations)
        if pred == FALSE:
            return terms.ZERO, None
        if pred == TRUE:
            return base, None
        binding, rest = _extract_binding(pred)
        if binding is None:
            return base, pred
        name, value = binding
        base = substitute(base, {name: value})
        pred = pred_substitute(rest, {name: value})


def _extract_binding(pred):
    if isinstance(pred, Binding) and isinstance(pred.value, (int, Concrete, Var)):
        return (pred.var.name, pred.value), TRUE
    if isinstance(pred, And):
        for k, item in enumerate(pred.items):
            if isinstance(item, Binding) and isinstance(item.value, (int, Concrete, Var)):
                rest = conj(*(pred.items[:k] + pred.items[k + 1 :]))
                return (item.var.name, item.value), rest
    return None, pred


# ---------------------------------------------------------------------------
# structural equality compiled to a predicate


def equate(a, b):
    """A predicate equivalent to "a and b denote the same type".

    Symmetric in its arguments.  Sequences align positionally; a symbolic
    power aligns with another power, with a run of equal items, or with a
    single item.  A variable may only equal a symbol, an integer, or another
    variable -- anything structured yields false.
    """
    a, b = flatten(a), flatten(b)
    if isinstance(a, Constrained):
        return conj(equate(a.base, b), a.pred)
    if isinstance(b, Constrained):
        return conj(equate(a, b.base), b.pred)
    if isinstance(a, Union):
        return disj(equate(a.left, b), equate(a.right, b))
    if isinstance(b, Union):
        return disj(equate(a, b.left), equate(a, b.right))
    if isinstance(a, Var) or isinstance(b, Var):
        v, other = (a, b) if isinstance(a, Var) else (b, a)
        if isinstance(other, Var):
            return TRUE if v.name == other.name else cmp(v, "=", other)
        if isinstance(other, (Concrete, int)):
            return cmp(v, "=", other)
        return FALSE  # a variable never equals a structured type or Zero
    if isinstance(a, Power) or isinstance(b, Power):
        return _equate_power(a, b)
    if isinstance(a, ZeroType) or isinstance(b, ZeroType):
        return TRUE if type(a) is type(b) else FALSE
    if isinstance(a, int) or isinstance(b, int):
        return TRUE if a == b else FALSE
    if isinstance(a, Concrete) and isinstance(b, Concrete):
        return TRUE if a.name == b.name else FALSE
    if isinstance(a, Seq) and isinstance(b, Seq):
        if len(a.items) != len(b.items):
            return FALSE
        return conj(*(equate(x, y) for x, y in zip(a.items, b.items)))
    if isinstance(a, Tup) and isinstance(b, Tup):
        if len(a.items) != len(b.items):
            return FALSE
        return conj(*(equate(x, y) for x, y in zip(a.items, b.items)))
    if isinstance(a, Directed) and isinstance(b, Directed):
        if a.direction != b.direction:
            return FALSE
        return equate(a.payload, b.payload)
    if type(a) is type(b) and isinstance(a, (CorIns, CorDef)):
        if len(a.flow) != len(b.flow):
            return FALSE
        parts = [equate(x, y) for x, y in zip(a.flow, b.flow)]
        for side in (a, b):
            if side.constraint is not None:
                parts.append(side.constraint)
        return conj(*parts)
    if isinstance(a, DefRef) and isinstance(b, DefRef):
        return TRUE if a.name == b.name else FALSE
    if type(a) is type(b) and isinstance(a, (StartApp, InlineApp)):
        return TRUE if a == b else FALSE
    return FALSE


def _equate_power(a, b):
    if isinstance(a, Power) and isinstance(b, Power):
        return conj(equate(a.base, b.base), cmp(a.count, "=", b.count))
    p, other = (a, b) if isinstance(a, Power) else (b, a)
    if isinstance(other, ZeroType):
        return cmp(p.count, "=", 0)
    if isinstance(other, Seq):
        parts = [equate(p.base, item) for item in other.items]
        parts.append(cmp(p.count, "=", len(other.items)))
        return conj(*parts)
    return conj(equate(p.base, other), cmp(p.count, "=", 1))


# ---------------------------------------------------------------------------
# satisfiability over the finite fragment

INT = "int"
SYM = "sym"


def _infer_domains(expr, universe: Universe):
    """Assign each variable an integer or symbol domain, scanning atoms in
    order; a conflicting later use raises DomainConflict."""
    domain: dict[str, str] = {}
    groups: dict[str, str] = {}  # union-find parent by name

    def find(name):
        while groups.get(name, name) != name:
            name = groups[name]
        return name

    def assign(name, dom, why):
        root = find(name)
        have = domain.get(root)
        if have is None:
            domain[root] = dom
        elif have != dom:
            raise DomainConflict("%s used as %s and %s (%s)" % (name, have, dom, why))

    def merge(x, y):
        rx, ry = find(x), find(y)
        if rx == ry:
            return
        dx, dy = domain.get(rx), domain.get(ry)
        if dx and dy and dx != dy:
            raise DomainConflict("%s and %s have different domains" % (x, y))
        groups[ry] = rx
        if dy and not dx:
            domain[rx] = dy
        domain.pop(ry, None)

    def atom(lhs, op, rhs, why):
        if isinstance(lhs, Var) and isinstance(rhs, Var):
            merge(lhs.name, rhs.name)
            return
        for var, other in ((lhs, rhs), (rhs, lhs)):
            if not isinstance(var, Var):
                continue
            if isinstance(other, int):
                assign(var.name, INT, why)
            elif isinstance(other, Concrete):
                if op != "=":
                    raise DomainConflict(
                        "symbol %s under ordering comparison" % other.name
                    )
                assign(var.name, SYM, why)

    def walk(p):
        if isinstance(p, (And, Or)):
            for i in p.items:
                walk(i)
        elif isinstance(p, Not):
            walk(p.item)
        elif isinstance(p, Cmp):
            if p.op != "=" :
                for side in (p.lhs, p.rhs):
                    if isinstance(side, Var):
                        assign(side.name, INT, "ordering comparison")
                    elif isinstance(side, Concrete):
                        raise DomainConflict(
                            "symbol %s under ordering comparison" % side.name
                        )
            atom(p.lhs, p.op, p.rhs, "comparison")
        elif isinstance(p, Binding):
            atom(p.var, "=", p.value, "binding")
        elif isinstance(p, Relation):
            for a in p.args:
                if isinstance(a, Var):
                    assign(a.name, SYM, "relation argument")

    walk(expr)
    out = {}
    for name in pred_free_vars(expr):
        dom = domain.get(find(name))
        if dom is None:
            dom = SYM if universe.symbols else INT
        out[name] = dom
    return out


def _int_constants(expr):
    consts = set()

    def walk(p):
        if isinstance(p, (And, Or)):
            for i in p.items:
                walk(i)
        elif isinstance(p, Not):
            walk(p.item)
        elif isinstance(p, Cmp):
            for side in (p.lhs, p.rhs):
                if isinstance(side, int):
                    consts.add(side)
        elif isinstance(p, Binding):
            if isinstance(p.value, int):
                consts.add(p.value)

    walk(expr)
    return consts


def _check_relations(expr, universe: Universe):
    def walk(p):
        if isinstance(p, (And, Or)):
            for i in p.items:
                walk(i)
        elif isinstance(p, Not):
            walk(p.item)
        elif isinstance(p, Relation):
            if p.name not in universe.relations:
                raise UnsupportedPredicate(p.name)

    walk(expr)


def solve(expr, universe: Universe):
    """Find a satisfying assignment (name -> int | Concrete), or None.

    Deterministic: variables are tried in sorted name order and candidate
    values in ascending/lexicographic order, so a satisfiable expression
    always yields the same witness.
    """
    expr = pred_simplify(expr, universe.relations)
    if expr == TRUE:
        return {}
    if expr == FALSE:
        return None
    _check_relations(expr, universe)
    domains = _infer_domains(expr, universe)
    names = sorted(domains)
    # Order constraints never force a variable further than the number of
    # variables away from a mentioned constant, so this grid is exact.
    pad = len([n for n in names if domains[n] == INT]) + 1
    consts = _int_constants(expr) or {0}
    grid = sorted({c + d for c in consts for d in range(-pad, pad + 1)})
    sym_values = [Concrete(s) for s in universe.symbols]

    def candidates(name):
        return grid if domains[name] == INT else sym_values

    assignment: dict = {}

    def search(k):
        if k == len(names):
            return pred_evaluate(expr, assignment, universe.relations)
        name = names[k]
        for value in candidates(name):
            assignment[name] = value
            if search(k + 1):
                return True
        del assignment[name]
        return False

    if search(0):
        return dict(assignment)
    return None


def unique_bindings(expr, interp: dict, universe: Universe) -> ConditionSet:
    """Split a satisfying assignment into pinned bindings and a residual.

    A variable is pinned only when re-solving with its value excluded fails;
    otherwise it stays symbolic and its constraints remain in the residual.
    """
    bindings = {}
    for name in sorted(interp):
        value = interp[name]
        excluded = conj(expr, neg(Cmp(Var(name), "=", value)))
        if solve(excluded, universe) is None:
            bindings[name] = value
    residual = pred_simplify(
        pred_substitute(expr, bindings), universe.relations
    )
    return ConditionSet(bindings, pred_canonical(residual))


def pred_canonical(p):
    """Sort n-ary connectives by rendered text, for stable, symmetric output."""
    from .notation import render_pred

    if isinstance(p, And):
        items = tuple(sorted((pred_canonical(i) for i in p.items), key=render_pred))
        return conj(*items)
    if isinstance(p, Or):
        items = tuple(sorted((pred_canonical(i) for i in p.items), key=render_pred))
        return disj(*items)
    if isinstance(p, Not):
        return neg(pred_canonical(p.item))
    return p


def match(pending, pattern, universe: Universe):
    """Unify two (possibly constrained) types; commutative.

    Returns a ConditionSet on success and BOTTOM when no assignment over the
    universe makes the types equal.
    """
    a = reduce_constrained(flatten(pending), universe)
    b = reduce_constrained(flatten(pattern), universe)
    a, rho1 = _strip(a)
    b, rho2 = _strip(b)
    expr = pred_simplify(conj(equate(a, b), rho1, rho2), universe.relations)
    if expr == FALSE:
        return BOTTOM
    if expr == TRUE:
        return ConditionSet({}, TRUE)
    _check_relations(expr, universe)
    if not pred_free_vars(expr):
        ok = pred_evaluate(expr, {}, universe.relations)
        return ConditionSet({}, TRUE) if ok else BOTTOM
    interp = solve(expr, universe)
    if interp is None:
        return BOTTOM
    return unique_bindings(expr, interp, universe)


def _strip(t):
    if isinstance(t, Constrained):
        return t.base, t.pred
    return t, TRUE


# ---------------------------------------------------------------------------
# partitioning of unresolved integer conditions


@dataclass
class Case:
    """One analysis case: an assumption under which every branch predicate
    in the program has a fixed truth value."""

    assumption: object
    label: str


def partition_cases(predicates, universe: Universe) -> list[Case]:
    """Split the integer line so every given predicate is constant per case.

    Cells with identical predicate valuations merge into a single case, so
    e.g. two guard intervals over one variable yield at most four cases.
    """
    predicates = [pred_simplify(p, universe.relations) for p in predicates]
    names = []
    for p in predicates:
        for n in pred_free_vars(p):
            if n not in names:
                names.append(n)
    names.sort()
    if not names:
        return [Case(TRUE, "")]
    for p in predicates:
        doms = _infer_domains(p, universe)
        for n, d in doms.items():
            if d != INT:
                raise ConstraintError(
                    "cannot partition on non-integer variable %s" % n
                )

    def boundaries(var):
        points = set()

        def walk(q):
            if isinstance(q, (And, Or)):
                for i in q.items:
                    walk(i)
            elif isinstance(q, Not):
                walk(q.item)
            elif isinstance(q, Cmp):
                sides = (q.lhs, q.rhs)
                if not any(isinstance(s, Var) and s.name == var for s in sides):
                    return
                const = next((s for s in sides if isinstance(s, int)), None)
                if const is None:
                    raise ConstraintError(
                        "cannot partition %s: comparison against a non-constant"
                        % var
                    )
                # orient as var-op-const
                op = q.op
                if isinstance(q.rhs, Var) and q.rhs.name == var:
                    op = {"<": ">", "<=": ">=", "=": "=", ">=": "<=", ">": "<"}[op]
                if op in ("<", ">="):
                    points.add(const)
                elif op in ("<=", ">"):
                    points.add(const + 1)
                else:  # equality flips entering and leaving the value
                    points.add(const)
                    points.add(const + 1)

        for p in predicates:
            walk(p)
        return sorted(points)

    def intervals(var):
        pts = boundaries(var)
        if not pts:
            return [(None, None)]
        out = [(None, pts[0] - 1)]
        for lo, nxt in zip(pts, pts[1:]):
            out.append((lo, nxt - 1))
        out.append((pts[-1], None))
        return out

    per_var = {n: intervals(n) for n in names}

    def representative(lo, hi):
        if lo is not None:
            return lo
        if hi is not None:
            return hi
        return 0

    def interval_pred(var, lo, hi):
        v = Var(var)
        if lo is None and hi is None:
            return TRUE
        if lo is None:
            return Cmp(v, "<=", hi)
        if hi is None:
            return Cmp(v, ">=", lo)
        if lo == hi:
            return Cmp(v, "=", lo)
        return conj(Cmp(v, ">=", lo), Cmp(v, "<=", hi))

    cells = [()]
    for n in names:
        cells = [cell + (iv,) for cell in cells for iv in per_var[n]]

    grouped: dict[tuple, list] = {}
    order = []
    for cell in cells:
        assignment = {
            n: representative(lo, hi) for n, (lo, hi) in zip(names, cell)
        }
        valuation = tuple(
            pred_evaluate(p, assignment, universe.relations) for p in predicates
        )
        if valuation not in grouped:
            grouped[valuation] = []
            order.append(valuation)
        grouped[valuation].append(cell)

    cases = []
    from .notation import render_pred

    for valuation in order:
        members = grouped[valuation]
        parts = [
            conj(*(interval_pred(n, lo, hi) for n, (lo, hi) in zip(names, cell)))
            for cell in members
        ]
        assumption = disj(*parts)
        cases.append(Case(assumption, render_pred(assumption)))
    return cases


# ---------------------------------------------------------------------------
# SMT-LIB emission


def emit_smtlib(expr, universe: Universe) -> str:
    """A self-contained SMT-LIB v2 script asserting the expression.

    Declares the symbol enumeration, the variables with inferred sorts, and
    each registered relation with its positive rows plus a universally
    quantified closed-world implication.  Byte output is deterministic.
    """
    expr = pred_simplify(expr, universe.relations)
    lines = ["(set-logic ALL)"]
    if universe.symbols:
        ctors = " ".join("(%s)" % s for s in universe.symbols)
        lines.append("(declare-datatypes ((Concrete 0)) ((%s)))" % ctors)
    else:
        lines.append("(declare-sort Concrete 0)")
    domains = _infer_domains(expr, universe)
    for name in sorted(domains):
        sort = "Int" if domains[name] == INT else "Concrete"
        lines.append("(declare-const %s %s)" % (name, sort))
    for rel in sorted(universe.relations):
        rows = sorted(universe.relations[rel])
        arity = len(next(iter(rows))) if rows else 2
        params = " ".join(["Concrete"] * arity)
        lines.append("(declare-fun %s (%s) Bool)" % (rel, params))
        for row in rows:
            lines.append("(assert (%s %s))" % (rel, " ".join(row)))
        formals = [("x%d" % k) for k in range(arity)]
        decls = " ".join("(%s Concrete)" % f for f in formals)
        known = " ".join(
            "(and %s)" % " ".join("(= %s %s)" % (f, v) for f, v in zip(formals, row))
            for row in rows
        )
        known = "(or %s)" % known if rows else "false"
        lines.append(
            "(assert (forall (%s) (let ((r (not %s))) (=> r (= (%s %s) false)))))"
            % (decls, known, rel, " ".join(formals))
        )
    lines.append("(assert %s)" % _smt(expr))
    lines.append("(check-sat)")
    return "\n".join(lines) + "\n"


def _smt(p) -> str:
    if isinstance(p, type(TRUE)):
        return "true"
    if isinstance(p, type(FALSE)):
        return "false"
    if isinstance(p, And):
        return "(and %s)" % " ".join(_smt(i) for i in p.items)
    if isinstance(p, Or):
        return "(or %s)" % " ".join(_smt(i) for i in p.items)
    if isinstance(p, Not):
        return "(not %s)" % _smt(p.item)
    if isinstance(p, Cmp):
        return "(%s %s %s)" % (p.op, _smt_term(p.lhs), _smt_term(p.rhs))
    if isinstance(p, Binding):
        return "(= %s %s)" % (_smt_term(p.var), _smt_term(p.value))
    if isinstance(p, Relation):
        return "(%s %s)" % (p.name, " ".join(_smt_term(a) for a in p.args))
    raise ConstraintError("cannot emit %r" % (p,))


def _smt_term(t) -> str:
    if isinstance(t, int):
        return str(t) if t >= 0 else "(- %d)" % -t
    if isinstance(t, (Var, Concrete)):
        return t.name
    raise ConstraintError("cannot emit term %r" % (t,))
