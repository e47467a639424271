"""From Go functions to coroutine definitions.

A function joins the coroutine map when it sends or receives on a channel,
or when it calls or starts a function already in the map (a fixed point
over the call graph).  Member bodies translate statement by statement:
sends yield the channel's element type, receives expect it, ``go`` becomes
a start application, plain calls of members inline, ``defer`` inlines at
the end of the flow (last deferred first), and undecided conditionals
become unions guarded by the condition predicate.

Channel identity is deliberately not tracked: two channels with the same
element type are indistinguishable, so a program that uses them out of
order can slip through; the analyzer emits a warning when it sees one.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..preds import Cmp, FALSE, TRUE, conj, disj, neg, pred_free_vars, pred_simplify
from ..terms import (
    Concrete,
    CorDef,
    DefRef,
    Directed,
    InlineApp,
    Seq,
    StartApp,
    Union,
    Var,
    ZERO,
    cor_def,
    constrained,
    received,
    seq,
    substitute,
    union,
    yielded,
)
from .goast import (
    Assign,
    Binary,
    BoolLit,
    Call,
    ChanType,
    DeferStmt,
    ExprStmt,
    Func,
    FuncLit,
    FuncType,
    GoStmt,
    Ident,
    If,
    IntLit,
    MakeExpr,
    NamedType,
    Program,
    Recv,
    Return,
    Selector,
    Send,
    ShortVarDecl,
    SliceType,
    Unary,
    VarDecl,
)
from .parser import Unsupported

IGNORABLE_PACKAGES = {"fmt", "time", "os", "log", "math", "strconv"}


class UnknownChannel(Exception):
    def __init__(self, name, line):
        super().__init__("cannot resolve channel %r (line %d)" % (name, line))
        self.name = name
        self.line = line


def concrete_name(gotype) -> str:
    """The concrete symbol a Go type contributes, e.g. int -> Int."""
    if isinstance(gotype, NamedType):
        base = gotype.name.split(".")[-1]
        return base[0].upper() + base[1:]
    if isinstance(gotype, ChanType):
        return "Chan" + concrete_name(gotype.elem)
    if isinstance(gotype, SliceType):
        return concrete_name(gotype.elem) + "Slice"
    if isinstance(gotype, FuncType):
        return "Func"
    raise TypeError("no concrete name for %r" % (gotype,))


class Env:
    """Lexically chained typing environment: channel element types plus
    propagated constant values."""

    def __init__(self, parent=None):
        self.parent = parent
        self.chans: dict[str, str] = {}
        self.consts: dict[str, int] = {}
        self.written: set[str] = set()

    def child(self) -> "Env":
        return Env(self)

    def chan_of(self, name) -> Optional[str]:
        env = self
        while env is not None:
            if name in env.chans:
                return env.chans[name]
            env = env.parent
        return None

    def const_of(self, name) -> Optional[int]:
        env = self
        while env is not None:
            if name in env.consts:
                return env.consts[name]
            if name in env.written:
                return None  # assigned something unknowable
            env = env.parent
        return None

    def set_chan(self, name, elem):
        self.chans[name] = elem

    def set_const(self, name, value):
        self.consts[name] = value
        self.written.add(name)

    def clear_const(self, name):
        self.consts.pop(name, None)
        self.written.add(name)


@dataclass
class Translation:
    program: Program
    cordefs: dict  # name -> CorDef, the coroutine map
    warnings: list
    subtype_pairs: list


class Translator:
    def __init__(self, program: Program):
        self.program = program
        self.members = self._member_fixed_point()
        self.cordefs: dict[str, CorDef] = {}
        self.chan_makes: dict[str, int] = {}

    # -- membership ----------------------------------------------------------

    def _uses_channels(self, f: Func) -> bool:
        found = False

        def walk_expr(e):
            nonlocal found
            if isinstance(e, Recv):
                found = True
                walk_expr(e.chan)
            elif isinstance(e, Call):
                for a in e.args:
                    walk_expr(a)
            elif isinstance(e, (Unary,)):
                walk_expr(e.operand)
            elif isinstance(e, Binary):
                walk_expr(e.left)
                walk_expr(e.right)

        def walk_stmt(s):
            nonlocal found
            if isinstance(s, Send):
                found = True
            elif isinstance(s, (ShortVarDecl, VarDecl, Assign)):
                if getattr(s, "expr", None) is not None:
                    walk_expr(s.expr)
            elif isinstance(s, ExprStmt):
                walk_expr(s.expr)
            elif isinstance(s, (GoStmt, DeferStmt)):
                for a in s.call.args:
                    walk_expr(a)
            elif isinstance(s, If):
                for inner in s.then:
                    walk_stmt(inner)
                if isinstance(s.els, If):
                    walk_stmt(s.els)
                elif s.els:
                    for inner in s.els:
                        walk_stmt(inner)
            elif isinstance(s, Return) and s.expr is not None:
                walk_expr(s.expr)

        for s in f.body:
            walk_stmt(s)
        return found

    def _called_names(self, f: Func) -> set:
        names = set()

        def walk_expr(e):
            if isinstance(e, Call):
                if isinstance(e.fn, Ident):
                    names.add(e.fn.name)
                elif isinstance(e.fn, FuncLit):
                    names.add(e.fn.func.name)
                for a in e.args:
                    walk_expr(a)
            elif isinstance(e, Recv):
                walk_expr(e.chan)
            elif isinstance(e, Unary):
                walk_expr(e.operand)
            elif isinstance(e, Binary):
                walk_expr(e.left)
                walk_expr(e.right)

        def walk_stmt(s):
            if isinstance(s, (GoStmt, DeferStmt)):
                walk_expr(s.call)
            elif isinstance(s, (ShortVarDecl, VarDecl, Assign)):
                if getattr(s, "expr", None) is not None:
                    walk_expr(s.expr)
            elif isinstance(s, ExprStmt):
                walk_expr(s.expr)
            elif isinstance(s, Send):
                walk_expr(s.chan)
                walk_expr(s.value)
            elif isinstance(s, If):
                for inner in s.then:
                    walk_stmt(inner)
                if isinstance(s.els, If):
                    walk_stmt(s.els)
                elif s.els:
                    for inner in s.els:
                        walk_stmt(inner)
            elif isinstance(s, Return) and s.expr is not None:
                walk_expr(s.expr)

        for s in f.body:
            walk_stmt(s)
        return names

    def _member_fixed_point(self) -> set:
        members = {
            name for name, f in self.program.functions.items() if self._uses_channels(f)
        }
        edges = {
            name: self._called_names(f) for name, f in self.program.functions.items()
        }
        changed = True
        while changed:
            changed = False
            for name, called in edges.items():
                if name not in members and called & members:
                    members.add(name)
                    changed = True
        return members

    # -- translation ----------------------------------------------------------

    def translate_all(self) -> dict:
        root = Env()
        for g in self.program.globals:
            self._bind_value(root, g.name, g.gotype, g.expr, g.line)
            if isinstance(g.expr, MakeExpr) and isinstance(g.expr.gotype, ChanType):
                elem = concrete_name(g.expr.gotype.elem)
                self.chan_makes[elem] = self.chan_makes.get(elem, 0) + 1
        self.root_env = root
        for name, f in self.program.functions.items():
            if name in self.members and not f.anonymous:
                self._ensure_translated(f, root)
        return self.cordefs

    def _ensure_translated(self, f: Func, outer_env: Env):
        if f.name in self.cordefs:
            return
        self.cordefs[f.name] = CorDef((), label=f.name)  # cycle stopper
        env = outer_env.child()
        for pname, ptype in f.params:
            if isinstance(ptype, ChanType):
                env.set_chan(pname, concrete_name(ptype.elem))
        deferred: list = []
        items, _ = self._block(f.body, env, deferred, allow_defer=True)
        for item in reversed(deferred):
            items.append(item)
        self.cordefs[f.name] = cor_def(*items, label=f.name)

    def _block(self, stmts, env: Env, deferred, allow_defer) -> tuple:
        items: list = []
        returned = False
        for s in stmts:
            if returned:
                raise Unsupported("statement after return", getattr(s, "line", 0))
            new_items, returned = self._stmt(s, env, deferred, allow_defer)
            items.extend(new_items)
        return items, returned

    def _stmt(self, s, env: Env, deferred, allow_defer) -> tuple:
        if isinstance(s, (ShortVarDecl, VarDecl)):
            items = [] if s.expr is None else self._expr_items(s.expr, env)
            self._bind_value(env, s.name, getattr(s, "gotype", None), s.expr, s.line)
            return items, False
        if isinstance(s, Assign):
            items = self._expr_items(s.expr, env)
            self._bind_value(env, s.name, None, s.expr, s.line)
            return items, False
        if isinstance(s, Send):
            items = self._expr_items(s.value, env)
            elem = self._chan_elem(s.chan, env, s.line)
            items.append(yielded(Concrete(elem)))
            return items, False
        if isinstance(s, ExprStmt):
            return self._expr_items(s.expr, env), False
        if isinstance(s, GoStmt):
            items = []
            for a in s.call.args:
                items.extend(self._expr_items(a, env))
            app = self._spawn_app(s.call, env, StartApp, s.line)
            if app is not None:
                items.append(app)
            return items, False
        if isinstance(s, DeferStmt):
            if not allow_defer:
                raise Unsupported("defer inside a conditional", s.line)
            items = []
            for a in s.call.args:  # defer evaluates its arguments immediately
                items.extend(self._expr_items(a, env))
            app = self._spawn_app(s.call, env, InlineApp, s.line)
            if app is not None:
                deferred.append(app)
            return items, False
        if isinstance(s, If):
            return self._if(s, env, deferred)
        if isinstance(s, Return):
            items = [] if s.expr is None else self._expr_items(s.expr, env)
            return items, True
        raise Unsupported("unrecognized statement", getattr(s, "line", 0))

    def _if(self, s: If, env: Env, deferred) -> tuple:
        value = self._eval_cond(s.cond, env)
        else_body = s.els if s.els is not None else ()
        if isinstance(else_body, If):
            else_body = (else_body,)
        if value is True or value is False:
            body = s.then if value else else_body
            branch_env = env.child()
            items, returned = self._block(body, branch_env, deferred, allow_defer=True)
            self._merge_branch(env, branch_env)
            if returned:
                return items, True
            return items, False
        pred = value
        then_env, else_env = env.child(), env.child()
        then_items, t_ret = self._block(s.then, then_env, deferred, allow_defer=False)
        else_items, e_ret = self._block(else_body, else_env, deferred, allow_defer=False)
        self._merge_branch(env, then_env)
        self._merge_branch(env, else_env)
        if t_ret or e_ret:
            raise Unsupported("return inside an undecided conditional", s.line)
        then_payload = seq(*then_items) if then_items else ZERO
        else_payload = seq(*else_items) if else_items else ZERO
        item = union(
            constrained(then_payload, pred), constrained(else_payload, neg(pred))
        )
        return [item], False

    def _merge_branch(self, env: Env, branch: Env):
        # a value assigned under a condition is no longer a known constant
        for name in branch.written:
            env.clear_const(name)
        env.chans.update(branch.chans)

    # -- expressions ------------------------------------------------------------

    def _expr_items(self, e, env: Env) -> list:
        """Flow items an expression evaluation produces, in evaluation order:
        receives inside it, then an inline application if it calls a member."""
        items: list = []
        if isinstance(e, Recv):
            special = self._time_after(e.chan)
            if special is not None:
                items.extend(special)
                return items
            elem = self._chan_elem(e.chan, env, getattr(e, "line", 0))
            items.append(received(Concrete(elem)))
            return items
        if isinstance(e, Call):
            for a in e.args:
                items.extend(self._expr_items(a, env))
            app = self._spawn_app(e, env, InlineApp, 0, only_members=True)
            if app is not None:
                items.append(app)
            return items
        if isinstance(e, Unary):
            return self._expr_items(e.operand, env)
        if isinstance(e, Binary):
            return self._expr_items(e.left, env) + self._expr_items(e.right, env)
        if isinstance(e, MakeExpr) and isinstance(e.gotype, ChanType):
            elem = concrete_name(e.gotype.elem)
            self.chan_makes[elem] = self.chan_makes.get(elem, 0) + 1
            return items
        return items

    def _time_after(self, chan_expr):
        """``<-time.After(d)`` completes by itself: the runtime yields a Time
        value on a fresh channel and the program receives it."""
        if (
            isinstance(chan_expr, Call)
            and isinstance(chan_expr.fn, Selector)
            and chan_expr.fn.pkg == "time"
            and chan_expr.fn.name == "After"
        ):
            return [yielded(Concrete("Time")), received(Concrete("Time"))]
        return None

    def _spawn_app(self, call: Call, env: Env, app_cls, line, only_members=False):
        """A Start/Inline application for a call, or None when the callee
        never touches channels."""
        fn = call.fn
        if isinstance(fn, FuncLit):
            name = fn.func.name
        elif isinstance(fn, Ident) and fn.name in self.program.functions:
            name = fn.name
        elif isinstance(fn, Selector):
            return None  # library calls carry no channel behavior of their own
        else:
            return None
        if name not in self.members:
            return None
        func = self.program.functions[name]
        self._ensure_translated(func, env if func.anonymous else self.root_env)
        bindings = self._call_bindings(func, call.args, env)
        return app_cls(DefRef(name), tuple(bindings.items()))

    def _call_bindings(self, func: Func, args, env: Env) -> dict:
        """Constant propagation into call arguments; unresolved values stay
        as free variables for the constraint solver."""
        bindings = {}
        for (pname, ptype), arg in zip(func.params, args):
            if isinstance(ptype, (ChanType, FuncType, SliceType)):
                continue  # channels resolve via the callee's own signature
            value = self._eval_value(arg, env)
            if value is not None:
                bindings[pname] = value
            elif isinstance(arg, Ident):
                if arg.name != pname:
                    bindings[pname] = Var(arg.name)
            else:
                bindings[pname] = Var("arg@%d" % getattr(arg, "line", 0))
        return bindings

    def _eval_value(self, e, env: Env):
        if isinstance(e, IntLit):
            return e.value
        if isinstance(e, BoolLit):
            return 1 if e.value else 0
        if isinstance(e, Ident):
            return env.const_of(e.name)
        return None

    def _eval_cond(self, e, env: Env):
        """A condition folds to True/False when constants decide it, and
        otherwise compiles to a predicate over the free variables."""
        pred = self._cond_pred(e, env)
        pred = pred_simplify(pred)
        if pred == TRUE:
            return True
        if pred == FALSE:
            return False
        return pred

    def _cond_pred(self, e, env: Env):
        if isinstance(e, BoolLit):
            return TRUE if e.value else FALSE
        if isinstance(e, Ident):
            value = env.const_of(e.name)
            if value is not None:
                return TRUE if value else FALSE
            return Cmp(Var(e.name), "=", 1)  # a bare flag reads as "is set"
        if isinstance(e, Unary) and e.op == "!":
            return neg(self._cond_pred(e.operand, env))
        if isinstance(e, Binary) and e.op == "&&":
            return conj(self._cond_pred(e.left, env), self._cond_pred(e.right, env))
        if isinstance(e, Binary) and e.op == "||":
            return disj(self._cond_pred(e.left, env), self._cond_pred(e.right, env))
        if isinstance(e, Binary) and e.op in ("==", "!=", "<", "<=", ">", ">="):
            lhs = self._cond_term(e.left, env)
            rhs = self._cond_term(e.right, env)
            op = "=" if e.op in ("==", "!=") else e.op
            out = Cmp(lhs, op, rhs)
            return neg(out) if e.op == "!=" else out
        raise Unsupported("condition beyond integer/boolean comparisons",
                          getattr(e, "line", 0))

    def _cond_term(self, e, env: Env):
        if isinstance(e, IntLit):
            return e.value
        if isinstance(e, BoolLit):
            return 1 if e.value else 0
        if isinstance(e, Ident):
            value = env.const_of(e.name)
            return value if value is not None else Var(e.name)
        raise Unsupported("condition beyond integer/boolean comparisons",
                          getattr(e, "line", 0))

    def _chan_elem(self, e, env: Env, line) -> str:
        if isinstance(e, Ident):
            elem = env.chan_of(e.name)
            if elem is None:
                raise UnknownChannel(e.name, line)
            return elem
        if isinstance(e, Call):
            fn = e.fn
            if isinstance(fn, Ident) and fn.name in self.program.functions:
                result = self.program.functions[fn.name].result
                if isinstance(result, ChanType):
                    return concrete_name(result.elem)
        raise UnknownChannel(getattr(getattr(e, "fn", e), "name", "?"), line)

    def _bind_value(self, env: Env, name, gotype, expr, line):
        if isinstance(expr, MakeExpr) and isinstance(expr.gotype, ChanType):
            # creation is counted by _expr_items; globals are counted below
            env.set_chan(name, concrete_name(expr.gotype.elem))
            return
        if isinstance(gotype, ChanType):
            env.set_chan(name, concrete_name(gotype.elem))
            return
        if isinstance(expr, Call):
            fn = expr.fn
            if isinstance(fn, Ident) and fn.name in self.program.functions:
                result = self.program.functions[fn.name].result
                if isinstance(result, ChanType):
                    env.set_chan(name, concrete_name(result.elem))
                    return
        value = self._eval_value(expr, env) if expr is not None else None
        if value is not None:
            env.set_const(name, value)
        else:
            env.clear_const(name)

def compute_m(program: Program) -> Translation:
    """The coroutine map: every channel-using (direct or transitive)
    function, translated to its coroutine definition."""
    tr = Translator(program)
    cordefs = tr.translate_all()
    warnings = []
    for elem in sorted(tr.chan_makes):
        count = tr.chan_makes[elem]
        if count > 1:
            warnings.append(
                "%d channels share element type %s; channel identity is not "
                "tracked, so operations on them may be conflated" % (count, elem)
            )
    return Translation(program, cordefs, warnings, program.subtype_pairs())


def unresolved_condition_preds(cordefs: dict, entry: str = "main") -> list:
    """Branch guards still symbolic from the entry point's perspective.

    Walks definitions reachable through start/inline applications with the
    call-site bindings applied, so a guard inside a callee surfaces under
    the caller's variable names."""
    from ..notation import render
    from ..engine import _branches

    preds: list = []
    seen: set = set()

    def visit_def(name, bindings):
        if name not in cordefs:
            return
        key = (name, tuple(sorted((k, render(v)) for k, v in bindings.items())))
        if key in seen:
            return
        seen.add(key)
        definition = cordefs[name]
        if bindings:
            definition = substitute(definition, bindings)
        for item in definition.flow:
            visit(item)

    def visit(t):
        if isinstance(t, Union):
            for payload, guard in _branches(t):
                if pred_free_vars(guard):
                    preds.append(guard)
                visit(payload)
        elif isinstance(t, Seq):
            for i in t.items:
                visit(i)
        elif isinstance(t, Directed):
            visit(t.payload)
        elif isinstance(t, (StartApp, InlineApp)):
            if isinstance(t.target, DefRef):
                visit_def(t.target.name, dict(t.bindings))
            else:
                visit(t.target)
        elif isinstance(t, CorDef):
            for i in t.flow:
                visit(i)

    visit_def(entry, {})
    unique = []
    for p in preds:
        if p not in unique:
            unique.append(p)
    return unique
