"""The predicate language attached to constrained types.

Predicates guard union branches and travel with matched values: boolean
connectives over integer comparisons, symbol equality, explicit variable
bindings, and named closed-world relations.  Atom operands are variables,
plain Python ints, or Concrete symbols from the term module.
"""

from __future__ import annotations

from dataclasses import dataclass

from .terms import Concrete, Var

OPS = ("<", "<=", "=", ">=", ">")
_FLIP = {"<": ">", "<=": ">=", "=": "=", ">=": "<=", ">": "<"}
_NEGATE = {"<": ">=", "<=": ">", ">=": "<", ">": "<="}


@dataclass(frozen=True)
class TruePred:
    def __repr__(self):
        return "true"


@dataclass(frozen=True)
class FalsePred:
    def __repr__(self):
        return "false"


TRUE = TruePred()
FALSE = FalsePred()


@dataclass(frozen=True)
class And:
    items: tuple

    def __repr__(self):
        from .notation import render_pred

        return render_pred(self)


@dataclass(frozen=True)
class Or:
    items: tuple

    def __repr__(self):
        from .notation import render_pred

        return render_pred(self)


@dataclass(frozen=True)
class Not:
    item: object

    def __repr__(self):
        from .notation import render_pred

        return render_pred(self)


@dataclass(frozen=True)
class Cmp:
    lhs: object
    op: str
    rhs: object

    def __repr__(self):
        from .notation import render_pred

        return render_pred(self)


@dataclass(frozen=True)
class Binding:
    """The predicate form of ``x ↦ v``; consumed by constraint rewriting."""

    var: Var
    value: object

    def __repr__(self):
        from .notation import render_pred

        return render_pred(self)


@dataclass(frozen=True)
class Relation:
    """An application of a registered closed-world relation."""

    name: str
    args: tuple

    def __repr__(self):
        from .notation import render_pred

        return render_pred(self)


# ---------------------------------------------------------------------------
# smart constructors; these keep connectives in flattened n-ary form


def conj(*preds):
    items = []
    for p in preds:
        if isinstance(p, TruePred):
            continue
        if isinstance(p, FalsePred):
            return FALSE
        if isinstance(p, And):
            items.extend(p.items)
        else:
            items.append(p)
    if not items:
        return TRUE
    if len(items) == 1:
        return items[0]
    return And(tuple(items))


def disj(*preds):
    items = []
    for p in preds:
        if isinstance(p, FalsePred):
            continue
        if isinstance(p, TruePred):
            return TRUE
        if isinstance(p, Or):
            items.extend(p.items)
        else:
            items.append(p)
    if not items:
        return FALSE
    if len(items) == 1:
        return items[0]
    return Or(tuple(items))


def neg(p):
    if isinstance(p, TruePred):
        return FALSE
    if isinstance(p, FalsePred):
        return TRUE
    if isinstance(p, Not):
        return p.item
    if isinstance(p, Cmp) and p.op in _NEGATE:
        return Cmp(p.lhs, _NEGATE[p.op], p.rhs)
    return Not(p)


def cmp(lhs, op, rhs):
    if op not in OPS:
        raise ValueError("unknown comparison operator %r" % op)
    # canonical orientation: a variable goes on the left when possible
    if not isinstance(lhs, Var) and isinstance(rhs, Var):
        lhs, op, rhs = rhs, _FLIP[op], lhs
    elif isinstance(lhs, Var) and isinstance(rhs, Var) and rhs.name < lhs.name:
        lhs, op, rhs = rhs, _FLIP[op], lhs
    return Cmp(lhs, op, rhs)


# ---------------------------------------------------------------------------
# traversal and evaluation


def pred_free_vars(p):
    """Variable names occurring in a predicate, in first-occurrence order."""
    out = []

    def walk(q):
        if isinstance(q, (And, Or)):
            for item in q.items:
                walk(item)
        elif isinstance(q, Not):
            walk(q.item)
        elif isinstance(q, Cmp):
            for side in (q.lhs, q.rhs):
                if isinstance(side, Var) and side.name not in out:
                    out.append(side.name)
        elif isinstance(q, Binding):
            if q.var.name not in out:
                out.append(q.var.name)
            if isinstance(q.value, Var) and q.value.name not in out:
                out.append(q.value.name)
        elif isinstance(q, Relation):
            for a in q.args:
                if isinstance(a, Var) and a.name not in out:
                    out.append(a.name)

    walk(p)
    return out


def pred_substitute(p, binding: dict):
    """Replace bound variables in a predicate, then fold ground atoms."""

    def sub_term(t):
        if isinstance(t, Var):
            return binding.get(t.name, t)
        return t

    def walk(q):
        if isinstance(q, (TruePred, FalsePred)):
            return q
        if isinstance(q, And):
            return conj(*(walk(i) for i in q.items))
        if isinstance(q, Or):
            return disj(*(walk(i) for i in q.items))
        if isinstance(q, Not):
            return neg(walk(q.item))
        if isinstance(q, Cmp):
            return _fold_cmp(Cmp(sub_term(q.lhs), q.op, sub_term(q.rhs)))
        if isinstance(q, Binding):
            lhs = sub_term(q.var)
            rhs = sub_term(q.value)
            if isinstance(lhs, Var):
                return Binding(lhs, rhs)
            return _fold_cmp(Cmp(lhs, "=", rhs))
        if isinstance(q, Relation):
            return Relation(q.name, tuple(sub_term(a) for a in q.args))
        raise TypeError("not a predicate: %r" % (q,))

    return walk(p)


def _fold_cmp(c):
    lhs, rhs = c.lhs, c.rhs
    if isinstance(lhs, int) and isinstance(rhs, int):
        return TRUE if _cmp_ints(lhs, c.op, rhs) else FALSE
    if isinstance(lhs, Concrete) and isinstance(rhs, Concrete):
        if c.op == "=":
            return TRUE if lhs == rhs else FALSE
    if isinstance(lhs, Var) and lhs == rhs:
        return FALSE if c.op in ("<", ">") else TRUE
    return c


def _cmp_ints(a, op, b):
    return {
        "<": a < b,
        "<=": a <= b,
        "=": a == b,
        ">=": a >= b,
        ">": a > b,
    }[op]


def pred_is_ground(p) -> bool:
    return not pred_free_vars(p)


def pred_evaluate(p, assignment: dict, relations: dict | None = None) -> bool:
    """Evaluate a predicate under a full assignment (name -> int | Concrete)."""

    def term(t):
        if isinstance(t, Var):
            if t.name not in assignment:
                raise KeyError("unassigned variable %s" % t.name)
            return assignment[t.name]
        return t

    def walk(q):
        if isinstance(q, TruePred):
            return True
        if isinstance(q, FalsePred):
            return False
        if isinstance(q, And):
            return all(walk(i) for i in q.items)
        if isinstance(q, Or):
            return any(walk(i) for i in q.items)
        if isinstance(q, Not):
            return not walk(q.item)
        if isinstance(q, (Cmp, Binding)):
            if isinstance(q, Binding):
                lhs, op, rhs = term(q.var), "=", term(q.value)
            else:
                lhs, op, rhs = term(q.lhs), q.op, term(q.rhs)
            if isinstance(lhs, int) and isinstance(rhs, int):
                return _cmp_ints(lhs, op, rhs)
            if isinstance(lhs, Concrete) and isinstance(rhs, Concrete):
                if op != "=":
                    raise ValueError("symbols admit equality only: %r" % (q,))
                return lhs == rhs
            return False
        if isinstance(q, Relation):
            if relations is None or q.name not in relations:
                raise KeyError("relation %s has no interpretation" % q.name)
            row = tuple(
                a.name if isinstance(a, Concrete) else term(a).name for a in q.args
            )
            return row in relations[q.name]
        raise TypeError("not a predicate: %r" % (q,))

    return walk(p)


def pred_simplify(p, relations: dict | None = None):
    """Fold every ground subformula down to true/false."""

    def walk(q):
        if isinstance(q, (TruePred, FalsePred)):
            return q
        if isinstance(q, And):
            return conj(*(walk(i) for i in q.items))
        if isinstance(q, Or):
            return disj(*(walk(i) for i in q.items))
        if isinstance(q, Not):
            return neg(walk(q.item))
        if isinstance(q, Cmp):
            return _fold_cmp(q)
        if isinstance(q, Binding):
            if isinstance(q.value, Var) and q.value.name == q.var.name:
                return TRUE
            return q
        if isinstance(q, Relation):
            if relations is not None and all(isinstance(a, Concrete) for a in q.args):
                if q.name in relations:
                    row = tuple(a.name for a in q.args)
                    return TRUE if row in relations[q.name] else FALSE
            return q
        raise TypeError("not a predicate: %r" % (q,))

    return walk(p)
