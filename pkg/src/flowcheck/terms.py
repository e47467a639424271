"""Behavioral type terms for coroutine flows.

A coroutine's protocol is a list of directed flow items (`!t` yields a value
of type t, `?t` receives one).  Definitions may branch on predicates via
union types; instances are branch-free.  All terms are immutable, and every
factory returns the canonical (flattened) form, so structural equality is
plain ``==``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Callable, TypeVar

YIELD = "!"
RECEIVE = "?"


class CalculusError(Exception):
    pass


class HeadOfDefinition(CalculusError):
    """Head/tail is only defined on coroutine instances, never definitions."""


class EmptyInstance(CalculusError):
    """Head/tail of an instance with no remaining flow items."""


class IllegalBinding(CalculusError):
    """A variable may only be bound to a concrete symbol, an integer, or
    another variable -- never to a structured type or the empty behavior."""


@dataclass(frozen=True)
class ZeroType:
    """The empty behavior."""

    def __repr__(self):
        return "0"


ZERO = ZeroType()


@dataclass(frozen=True)
class Concrete:
    """An opaque simple type such as Int or StringBuilder."""

    name: str

    def __repr__(self):
        return self.name


@dataclass(frozen=True)
class Var:
    """A placeholder for a concrete type, an integer, or another variable."""

    name: str

    def __repr__(self):
        return self.name


@dataclass(frozen=True)
class Seq:
    """A flat, associative sequence of types."""

    items: tuple

    def __repr__(self):
        from .notation import render

        return render(self)


@dataclass(frozen=True)
class Tup:
    """A product type; groups elements without the splicing of sequences."""

    items: tuple

    def __repr__(self):
        from .notation import render

        return render(self)


@dataclass(frozen=True)
class Union:
    """Two alternative behaviors; allowed in definitions only."""

    left: object
    right: object

    def __repr__(self):
        from .notation import render

        return render(self)


@dataclass(frozen=True)
class Constrained:
    """A type guarded by a boolean predicate."""

    base: object
    pred: object

    def __repr__(self):
        from .notation import render

        return render(self)


@dataclass(frozen=True)
class Power:
    """A sequence of ``count`` copies of ``base`` with symbolic length.

    Concrete counts are expanded eagerly into a Seq by the factories; a
    Power node survives only while its count is a variable.
    """

    base: object
    count: Var

    def __repr__(self):
        from .notation import render

        return render(self)


@dataclass(frozen=True)
class Directed:
    """One flow item: a direction applied to a payload type."""

    direction: str
    payload: object

    def __repr__(self):
        from .notation import render

        return render(self)


@dataclass(frozen=True)
class CorDef:
    """A coroutine definition; union branches may still be unresolved."""

    flow: tuple
    constraint: object = None
    label: Optional[str] = field(default=None, compare=False)

    def __repr__(self):
        from .notation import render

        return render(self)


@dataclass(frozen=True)
class CorIns:
    """A running coroutine: an ordered, branch-free list of flow items."""

    flow: tuple
    constraint: object = None
    label: Optional[str] = field(default=None, compare=False)

    def __repr__(self):
        from .notation import render

        return render(self)


@dataclass(frozen=True)
class DefRef:
    """A definition referenced by name, resolved through the definition
    environment when started or inlined.  This is how a recursive function
    can start itself without the term becoming cyclic."""

    name: str

    def __repr__(self):
        return self.name


@dataclass(frozen=True)
class StartApp:
    """Pending application of Start to a definition: spawns a new instance."""

    target: object
    bindings: tuple = ()

    def __repr__(self):
        from .notation import render

        return render(self)


@dataclass(frozen=True)
class InlineApp:
    """Pending application of Inline: splices a definition into the caller."""

    target: object
    bindings: tuple = ()

    def __repr__(self):
        from .notation import render

        return render(self)


# ---------------------------------------------------------------------------
# canonicalization


def flatten(t):
    """Return the canonical form of a term; idempotent.

    Nested sequences merge left-to-right, singleton sequences unwrap, empty
    sequences become Zero, stacked constraints collapse into one predicate,
    concrete powers expand, and a constraint wrapped around a coroutine is
    folded into the coroutine's own constraint field.
    """
    if isinstance(t, (ZeroType, Concrete, Var, DefRef, int)):
        return t
    if isinstance(t, Seq):
        items = []
        for item in t.items:
            item = flatten(item)
            if isinstance(item, Seq):
                items.extend(item.items)
            elif isinstance(item, ZeroType):
                continue
            else:
                items.append(item)
        if not items:
            return ZERO
        if len(items) == 1:
            return items[0]
        return Seq(tuple(items))
    if isinstance(t, Tup):
        return Tup(tuple(flatten(i) for i in t.items))
    if isinstance(t, Union):
        return Union(flatten(t.left), flatten(t.right))
    if isinstance(t, Power):
        base = flatten(t.base)
        if isinstance(base, ZeroType):
            return ZERO
        if isinstance(t.count, int):
            return flatten(Seq((base,) * t.count))
        return Power(base, t.count)
    if isinstance(t, Constrained):
        from .preds import conj, TRUE  # leaf nodes live here; preds builds on them

        base = flatten(t.base)
        pred = t.pred
        while isinstance(base, Constrained):
            pred = conj(base.pred, pred)
            base = flatten(base.base)
        if isinstance(base, ZeroType):
            return ZERO
        if isinstance(base, (CorIns, CorDef)):
            merged = pred if base.constraint is None else conj(base.constraint, pred)
            if merged == TRUE:
                merged = None
            return type(base)(base.flow, merged, base.label)
        if pred == TRUE:
            return base
        return Constrained(base, pred)
    if isinstance(t, Directed):
        return Directed(t.direction, flatten(t.payload))
    if isinstance(t, (CorDef, CorIns)):
        items = []
        for item in t.flow:
            item = flatten(item)
            if isinstance(item, ZeroType):
                continue
            if isinstance(item, Seq):
                items.extend(item.items)
            elif isinstance(item, Directed) and isinstance(item.payload, Seq):
                items.extend(distribute(item.direction, item.payload))
            else:
                items.append(item)
        return type(t)(tuple(items), t.constraint, t.label)
    if isinstance(t, StartApp):
        return StartApp(flatten(t.target), t.bindings)
    if isinstance(t, InlineApp):
        return InlineApp(flatten(t.target), t.bindings)
    raise TypeError("not a type term: %r" % (t,))


def distribute(direction, t):
    """Apply a direction to a type, splitting a sequence into one item each."""
    t = flatten(t)
    if isinstance(t, Seq):
        return [Directed(direction, item) for item in t.items]
    return [Directed(direction, t)]


# Factories; these keep every constructed term canonical.


def seq(*items):
    return flatten(Seq(tuple(items)))


def tup(*items):
    return flatten(Tup(tuple(items)))


def union(left, right):
    return flatten(Union(left, right))


def constrained(base, pred):
    return flatten(Constrained(base, pred))


def power(base, count):
    return flatten(Power(base, count))


def cor_def(*items, constraint=None, label=None):
    return flatten(CorDef(tuple(items), constraint, label))


def cor_ins(*items, constraint=None, label=None):
    return flatten(CorIns(tuple(items), constraint, label))


def yielded(payload):
    return Directed(YIELD, flatten(payload))


def received(payload):
    return Directed(RECEIVE, flatten(payload))


def start_app(target, bindings=()):
    if isinstance(bindings, dict):
        bindings = tuple(bindings.items())
    return StartApp(flatten(target), bindings)


def inline_app(target, bindings=()):
    if isinstance(bindings, dict):
        bindings = tuple(bindings.items())
    return InlineApp(flatten(target), bindings)


# ---------------------------------------------------------------------------
# structural helpers


def head(i):
    """First flow item of an instance."""
    if isinstance(i, CorDef):
        raise HeadOfDefinition("head of a definition: %r" % (i,))
    if not isinstance(i, CorIns):
        raise CalculusError("head expects a coroutine instance, got %r" % (i,))
    if not i.flow:
        raise EmptyInstance("head of an exhausted instance")
    return i.flow[0]


def tail(i):
    """The instance minus its first flow item; may be the empty instance."""
    if isinstance(i, CorDef):
        raise HeadOfDefinition("tail of a definition: %r" % (i,))
    if not isinstance(i, CorIns):
        raise CalculusError("tail expects a coroutine instance, got %r" % (i,))
    if not i.flow:
        raise EmptyInstance("tail of an exhausted instance")
    return CorIns(i.flow[1:], i.constraint, i.label)


T = TypeVar("T")


def first(items: Iterable[T], pred: Callable[[T], bool]):
    """Split at the earliest element satisfying pred.

    Returns (found, before, after); when nothing matches, found is None,
    before is the whole list and after is empty.
    """
    items = list(items)
    for k, item in enumerate(items):
        if pred(item):
            return item, items[:k], items[k + 1 :]
    return None, items, []


def none(items, pred) -> bool:
    """True iff no element satisfies pred."""
    found, _, _ = first(items, pred)
    return found is None


LEGAL_BINDING_VALUES = (int, Concrete, Var)


def substitute(t, binding: dict):
    """Replace bound variables throughout a term and re-canonicalize.

    Binding values are restricted to concrete symbols, integers (lengths),
    and variables; anything structured raises IllegalBinding.
    """
    for name, value in binding.items():
        if not isinstance(value, LEGAL_BINDING_VALUES) or isinstance(value, bool):
            raise IllegalBinding("cannot bind %s to %r" % (name, value))
    if not binding:
        return flatten(t)
    return flatten(_subst(t, binding))


def _subst(t, binding):
    if isinstance(t, Var):
        return binding.get(t.name, t)
    if isinstance(t, (ZeroType, Concrete, DefRef, int)):
        return t
    if isinstance(t, Seq):
        return Seq(tuple(_subst(i, binding) for i in t.items))
    if isinstance(t, Tup):
        return Tup(tuple(_subst(i, binding) for i in t.items))
    if isinstance(t, Union):
        return Union(_subst(t.left, binding), _subst(t.right, binding))
    if isinstance(t, Power):
        count = binding.get(t.count.name, t.count)
        return Power(_subst(t.base, binding), count)
    if isinstance(t, Constrained):
        from .preds import pred_substitute

        return Constrained(_subst(t.base, binding), pred_substitute(t.pred, binding))
    if isinstance(t, Directed):
        return Directed(t.direction, _subst(t.payload, binding))
    if isinstance(t, (CorDef, CorIns)):
        constraint = t.constraint
        if constraint is not None:
            from .preds import pred_substitute

            constraint = pred_substitute(constraint, binding)
        return type(t)(tuple(_subst(i, binding) for i in t.flow), constraint, t.label)
    if isinstance(t, StartApp):
        return StartApp(_subst(t.target, binding), _subst_bindings(t.bindings, binding))
    if isinstance(t, InlineApp):
        return InlineApp(_subst(t.target, binding), _subst_bindings(t.bindings, binding))
    raise TypeError("not a type term: %r" % (t,))


def _subst_bindings(bindings, binding):
    return tuple((k, _subst(v, binding)) for k, v in bindings)


def is_exhausted(i) -> bool:
    """An instance with no remaining flow items behaves like Zero."""
    return isinstance(i, CorIns) and not i.flow
