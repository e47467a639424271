"""The deterministic reduction machine over coroutine instances.

One value may be in flight at a time (the pending type); yielded values no
live coroutine can receive accumulate as external yields.  Rules fire in a
fixed priority order, so a given input always produces the same trace:

  1. splice an inline application sitting at the head of an instance
  2. drop a head item whose payload is the empty behavior
  3. with a pending value: resume the first matching receiver (preferring
     coroutines other than the one that just yielded, so a value reaches a
     waiting peer before self-delivery); if nobody matches but spawns are
     still waiting, evaluate one (it may introduce the missing receiver);
     only then move the value to the external yields
  4. hand a whole live coroutine to the first receiver expecting one
  5. main exit: the main coroutine is exhausted, nothing is in flight, and
     no coroutine still has a value to yield -- terminate
  6. yield: transfer the first yielding head into the pending slot
  7. spawn: evaluate a started definition at the head of an instance and
     append the new instance at the end of the live list
  8. otherwise nothing can move: terminate with the leftover residual

Yields outrank spawns when nothing is in flight, and spawned instances are
appended at the end of the list, so a definition that keeps starting itself
cannot starve the coroutines that are ready to communicate.  Main exit
waits for in-flight and yieldable values to settle (a send blocks its
goroutine until paired, so an undeliverable value is a real block), but it
does fire while unstarted spawns remain, which is what terminates
self-starting recursion.  At main exit the verdict reports undeliverable
external yields first; failing that, coroutines left waiting on a receive;
a clean state is deadlock-free.  The base calculus rule that re-injects
external yields is deliberately absent; once a value is external, it stays
external.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

from .notation import render
from .preds import TRUE, conj, neg, pred_free_vars, pred_simplify
from .solver import BOTTOM, Universe, match, solve
from .terms import (
    Constrained,
    CorDef,
    CorIns,
    DefRef,
    Directed,
    InlineApp,
    RECEIVE,
    Seq,
    StartApp,
    Union,
    YIELD,
    ZERO,
    ZeroType,
    cor_ins,
    distribute,
    flatten,
    substitute,
    yielded,
)

DEFAULT_MAX_STEPS = 500


class EngineError(Exception):
    pass


class NoSatisfiableBranch(EngineError):
    """Every branch guard of a union is unsatisfiable."""


class AmbiguousCondition(EngineError):
    """A branch guard that the current assumption does not decide."""


class StepCapExceeded(EngineError):
    pass


# ---------------------------------------------------------------------------
# starting and inlining definitions


def _branches(t):
    """Flatten a union tree into (payload, guard) alternatives."""
    t = flatten(t)
    if isinstance(t, Union):
        return _branches(t.left) + _branches(t.right)
    if isinstance(t, Constrained):
        inner = _branches(t.base)
        return [(payload, conj(guard, t.pred)) for payload, guard in inner]
    return [(t, TRUE)]


def _decide(guard, assumption, universe):
    """True / False when the assumption settles the guard, else None."""
    guard = pred_simplify(guard, universe.relations)
    if guard == TRUE:
        return True
    if not pred_free_vars(guard):
        from .preds import pred_evaluate

        return pred_evaluate(guard, {}, universe.relations)
    if solve(conj(guard, assumption), universe) is None:
        return False
    if solve(conj(neg(guard), assumption), universe) is None:
        return True
    return None


def _resolve_flow(items, universe, assumption):
    """Resolve every union in a flow; returns [(items, guard)] variants.

    Guards decided by the assumption pick a single branch; undecided guards
    enumerate one variant per satisfiable branch, carrying the guard along.
    """
    variants = [([], TRUE)]
    for item in items:
        item_choices = _resolve_item(item, universe, assumption)
        variants = [
            (done + list(extra), conj(guard, g2))
            for done, guard in variants
            for extra, g2 in item_choices
        ]
    return variants


def _resolve_item(item, universe, assumption):
    item = flatten(item)
    if isinstance(item, Union):
        alternatives = []
        any_satisfiable = False
        for payload, guard in _branches(item):
            verdict = _decide(guard, assumption, universe)
            if verdict is False:
                continue
            any_satisfiable = True
            inner = _resolve_item(payload, universe, assumption)
            if verdict is True:
                # a branch the assumption makes definite wins outright
                return inner
            alternatives.extend(
                (items2, conj(guard, g2)) for items2, g2 in inner
            )
        if not any_satisfiable:
            raise NoSatisfiableBranch(render(item))
        return alternatives
    if isinstance(item, Directed):
        out = []
        for payload, guard in _resolve_payload(item.payload, universe, assumption):
            out.append((list(distribute(item.direction, payload)), guard))
        return out
    if isinstance(item, Seq):
        return _resolve_flow(item.items, universe, assumption)
    if isinstance(item, ZeroType):
        return [([], TRUE)]
    return [([item], TRUE)]


def _resolve_payload(t, universe, assumption):
    """Resolve unions inside a yielded/received payload; [(payload, guard)]."""
    t = flatten(t)
    if isinstance(t, Union):
        alternatives = []
        any_satisfiable = False
        for payload, guard in _branches(t):
            verdict = _decide(guard, assumption, universe)
            if verdict is False:
                continue
            any_satisfiable = True
            inner = _resolve_payload(payload, universe, assumption)
            if verdict is True:
                return inner
            alternatives.extend((p2, conj(guard, g2)) for p2, g2 in inner)
        if not any_satisfiable:
            raise NoSatisfiableBranch(render(t))
        return alternatives
    if isinstance(t, Seq):
        variants = [((), TRUE)]
        for item in t.items:
            choices = _resolve_payload(item, universe, assumption)
            variants = [
                (done + (p2,), conj(g, g2))
                for done, g in variants
                for p2, g2 in choices
            ]
        return [(flatten(Seq(done)), g) for done, g in variants]
    return [(t, TRUE)]


def start(definition, bindings=None, universe=None, assumption=TRUE):
    """Instantiate a definition: substitute arguments and resolve branches.

    Returns a single instance when every branch guard is decided, otherwise
    a list of (instance, guard) pairs, one per satisfiable branch -- the
    input to case partitioning.
    """
    if not isinstance(definition, CorDef):
        raise EngineError("start expects a coroutine definition, got %r" % (definition,))
    if universe is None:
        universe = Universe.collect(definition)
    bound = substitute(definition, dict(bindings or {}))
    variants = _resolve_flow(bound.flow, universe, assumption)
    out = []
    for items, guard in variants:
        inst = flatten(CorIns(tuple(items), bound.constraint, definition.label))
        assert not any(isinstance(i, Union) for i in inst.flow)
        out.append((inst, pred_simplify(guard, universe.relations)))
    if len(out) == 1 and out[0][1] == TRUE:
        return out[0][0]
    return out


def _resolve_def(target, defs):
    if isinstance(target, DefRef):
        resolved = (defs or {}).get(target.name)
        if resolved is None:
            raise EngineError("reference to unknown definition %s" % target.name)
        return resolved
    if isinstance(target, CorDef):
        return target
    raise EngineError("expected a coroutine definition, got %s" % render(target))


def _start_single(definition, bindings, universe, assumption, defs=None):
    definition = _resolve_def(definition, defs)
    result = start(definition, bindings, universe, assumption)
    if isinstance(result, CorIns):
        return result
    raise AmbiguousCondition(
        "unresolved branch conditions in %s" % (definition.label or render(definition))
    )


def inline(target, definition, bindings=None, universe=None, assumption=TRUE,
           position="here"):
    """Splice an instantiated definition into an existing instance.

    ``here`` replaces the first pending inline application in the target;
    ``atEnd`` appends after everything else (the defer placement).
    """
    if position not in ("here", "atEnd"):
        raise ValueError("position must be 'here' or 'atEnd'")
    if universe is None:
        universe = Universe.collect(target, definition)
    spliced = _start_single(definition, bindings, universe, assumption)
    items = list(target.flow)
    if position == "atEnd":
        items = items + list(spliced.flow)
    else:
        for k, item in enumerate(items):
            if isinstance(item, InlineApp):
                items[k : k + 1] = list(spliced.flow)
                break
        else:
            raise EngineError("target has no inline application to replace")
    return flatten(CorIns(tuple(items), target.constraint, target.label))


# ---------------------------------------------------------------------------
# reduction state


@dataclass
class _Live:
    inst: CorIns
    name: str

    def head(self):
        return self.inst.flow[0] if self.inst.flow else None


@dataclass
class TraceEntry:
    step: int
    rule: str
    state_before: str
    state_after: str

    def line(self) -> str:
        return "step %d [%s] %s" % (self.step, self.rule, self.state_after)


@dataclass
class Terminal:
    kind: str  # "residual" | "main-exit" | "step-cap"
    residual: object = ZERO
    externals: tuple = ()
    steps: int = 0
    max_steps: int = DEFAULT_MAX_STEPS


@dataclass
class Verdict:
    kind: str  # "NoDeadlock" | "Deadlock" | "Inconclusive" | "Unsupported"
    residual: object = None
    externals: tuple = ()
    reason: str = ""
    case_label: Optional[str] = None

    def __repr__(self):
        if self.kind == "Deadlock":
            return "Deadlock(%s)" % render(self.residual)
        if self.kind == "Unsupported":
            return "Unsupported(%s)" % self.reason
        return self.kind


def classify(terminal: Terminal) -> Verdict:
    """Map a terminal machine state to a verdict.

    An empty residual means every channel operation paired up.  Anything
    left over -- an unconsumed external yield or a blocked coroutine --
    is a deadlock, and hitting the step cap is inconclusive.
    """
    if terminal.kind == "step-cap":
        return Verdict("Inconclusive", reason="step cap %d reached" % terminal.max_steps)
    residual = flatten(terminal.residual)
    if isinstance(residual, ZeroType) or (
        isinstance(residual, CorIns) and not residual.flow
    ):
        return Verdict("NoDeadlock", residual=ZERO)
    return Verdict("Deadlock", residual=residual, externals=tuple(terminal.externals))


@dataclass
class ReductionState:
    live: list = field(default_factory=list)
    pending: object = ZERO
    externals: list = field(default_factory=list)
    steps: int = 0
    max_steps: int = DEFAULT_MAX_STEPS
    trace: list = field(default_factory=list)
    universe: Universe = None
    assumption: object = TRUE
    defs: dict = field(default_factory=dict)
    main_name: Optional[str] = None
    last_yielder: Optional[str] = None
    terminal: Optional[Terminal] = None
    _names: itertools.count = field(default_factory=itertools.count)

    def main(self) -> Optional[_Live]:
        for entry in self.live:
            if entry.name == self.main_name:
                return entry
        return None

    def render_state(self) -> str:
        ext = render(flatten(Seq(tuple(self.externals)))) if self.externals else "0"
        body = ", ".join(render(e.inst) for e in self.live)
        return "(%s, %s) ⊢ ⊚⟨%s⟩" % (render(self.pending), ext, body)

    def fresh_name(self, base) -> str:
        name = base or "c%d" % next(self._names)
        taken = {e.name for e in self.live}
        while name in taken:
            name = "%s'%d" % (base or "c", next(self._names))
        return name


def _record(state, rule, before):
    state.steps += 1
    state.trace.append(
        TraceEntry(state.steps, rule, before, state.render_state())
    )


def _try_spawn(state, before) -> bool:
    """Evaluate the first yielded coroutine or start application, appending
    the new instance at the end of the live list."""
    for entry in state.live:
        head = entry.head()
        spawn = None
        if isinstance(head, Directed) and head.direction == YIELD:
            spawn = head.payload
        elif isinstance(head, (StartApp, CorIns)):
            spawn = head
        if isinstance(spawn, StartApp):
            inst = _start_single(
                spawn.target, dict(spawn.bindings), state.universe,
                state.assumption, state.defs,
            )
        elif isinstance(spawn, CorIns):
            inst = spawn
        else:
            continue
        entry.inst = CorIns(entry.inst.flow[1:], entry.inst.constraint, entry.inst.label)
        state.live.append(_Live(inst, state.fresh_name(inst.label)))
        _record(state, "YieldCo", before)
        return True
    return False


def reduce_step(state: ReductionState):
    """Fire exactly the first applicable rule; returns the state, with
    ``state.terminal`` set once reduction is over."""
    if state.terminal is not None:
        return state
    if state.steps >= state.max_steps:
        raise StepCapExceeded(state.max_steps)
    before = state.render_state()
    universe = state.universe

    # 1. inline evaluation at a head
    for entry in state.live:
        head = entry.head()
        if isinstance(head, InlineApp):
            spliced = _start_single(
                head.target, dict(head.bindings), universe, state.assumption, state.defs
            )
            items = list(spliced.flow) + list(entry.inst.flow[1:])
            entry.inst = flatten(CorIns(tuple(items), entry.inst.constraint, entry.inst.label))
            _record(state, "InlineEval", before)
            return state

    # 2. drop a head item with no behavior
    for entry in state.live:
        head = entry.head()
        if isinstance(head, Directed) and isinstance(head.payload, ZeroType):
            entry.inst = CorIns(entry.inst.flow[1:], entry.inst.constraint, entry.inst.label)
            _record(state, "RemoveVoid", before)
            return state

    # 3. a value is in flight: resume a receiver or externalize it
    if not isinstance(state.pending, ZeroType):
        scan = [e for e in state.live if e.name != state.last_yielder]
        scan += [e for e in state.live if e.name == state.last_yielder]
        for entry in scan:
            head = entry.head()
            if not (isinstance(head, Directed) and head.direction == RECEIVE):
                continue
            pattern = head.payload
            if entry.inst.constraint is not None:
                pattern = Constrained(pattern, entry.inst.constraint)
            conditions = match(state.pending, pattern, universe)
            if conditions is BOTTOM:
                continue
            rest = [substitute(i, conditions.bindings) for i in entry.inst.flow[1:]]
            constraint = None
            if conditions.residual != TRUE:
                constraint = conditions.residual
            entry.inst = flatten(CorIns(tuple(rest), constraint, entry.inst.label))
            state.pending = ZERO
            state.last_yielder = None
            _record(state, "Resume", before)
            return state
        if _try_spawn(state, before):
            return state
        state.externals.append(state.pending)
        state.pending = ZERO
        state.last_yielder = None
        _record(state, "External", before)
        return state

    # 4. a receiver expecting a whole coroutine
    receiver = None
    for entry in state.live:
        head = entry.head()
        if (
            isinstance(head, Directed)
            and head.direction == RECEIVE
            and isinstance(head.payload, (CorIns, CorDef))
        ):
            receiver = entry
            break
    if receiver is not None:
        pattern = receiver.head().payload
        for other in state.live:
            if other is receiver or not other.inst.flow:
                continue
            target = other.inst
            conditions = match(target, pattern, universe)
            if conditions is BOTTOM:
                continue
            rest = [substitute(i, conditions.bindings) for i in receiver.inst.flow[1:]]
            constraint = None
            if conditions.residual != TRUE:
                constraint = conditions.residual
            receiver.inst = flatten(CorIns(tuple(rest), constraint, receiver.inst.label))
            state.live.remove(other)
            _record(state, "ResumeCo", before)
            return state

    # 5. the main coroutine finished; all values have settled
    main = state.main()
    if main is not None and not main.inst.flow and not any(
        isinstance(e.head(), Directed)
        and e.head().direction == YIELD
        and not isinstance(e.head().payload, (CorIns, CorDef, StartApp))
        for e in state.live
    ):
        _record(state, "MainExit", before)
        if state.externals:
            residual = cor_ins(*[yielded(e) for e in state.externals])
        else:
            stranded = [
                e.inst
                for e in state.live
                if isinstance(e.head(), Directed) and e.head().direction == RECEIVE
            ]
            residual = cor_ins(*[yielded(i) for i in stranded])
        state.terminal = Terminal(
            "main-exit", residual, tuple(state.externals), state.steps, state.max_steps
        )
        return state

    # 6. transfer the first yielded value into the pending slot
    for entry in state.live:
        head = entry.head()
        if (
            isinstance(head, Directed)
            and head.direction == YIELD
            and not isinstance(head.payload, (CorIns, CorDef, StartApp))
        ):
            payload = head.payload
            if entry.inst.constraint is not None:
                payload = flatten(Constrained(payload, entry.inst.constraint))
            state.pending = payload
            state.last_yielder = entry.name
            entry.inst = CorIns(entry.inst.flow[1:], entry.inst.constraint, entry.inst.label)
            _record(state, "Yield", before)
            return state

    # 7. spawn a yielded coroutine or started definition, breadth-first
    if _try_spawn(state, before):
        return state

    # 8. nothing can move
    _record(state, "CoToExt", before)
    items = [yielded(e) for e in state.externals]
    for entry in state.live:
        if entry.inst.flow:
            items.append(yielded(entry.inst))
    residual = cor_ins(*items)
    state.terminal = Terminal(
        "residual", residual, tuple(state.externals), state.steps, state.max_steps
    )
    return state


def reduce(initial, max_steps=DEFAULT_MAX_STEPS, universe=None, assumption=TRUE,
           defs=None):
    """Run the machine on a list of instances / start applications.

    The first element is the main coroutine; ``defs`` resolves named
    definition references.  Returns (verdict, trace).
    """
    initial = [flatten(t) for t in initial]
    if universe is None:
        universe = Universe.collect(*initial, *(defs or {}).values())
    state = ReductionState(
        max_steps=max_steps, universe=universe, assumption=assumption, defs=dict(defs or {})
    )
    try:
        for k, item in enumerate(initial):
            if state.steps >= state.max_steps:
                raise StepCapExceeded(state.max_steps)
            before = state.render_state()
            if isinstance(item, StartApp):
                inst = _start_single(item.target, dict(item.bindings), universe, assumption, state.defs)
                entry = _Live(inst, state.fresh_name(inst.label or ("main" if k == 0 else None)))
                state.live.append(entry)
                _record(state, "StartEval", before)
            elif isinstance(item, CorIns):
                state.live.append(_Live(item, state.fresh_name(item.label or ("main" if k == 0 else None))))
            else:
                raise EngineError(
                    "reduce expects instances or start applications, got %s" % render(item)
                )
            if k == 0:
                state.main_name = state.live[0].name
        while state.terminal is None:
            reduce_step(state)
    except StepCapExceeded:
        state.terminal = Terminal("step-cap", steps=state.steps, max_steps=state.max_steps)
    verdict = classify(state.terminal)
    return verdict, state.trace
