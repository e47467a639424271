"""The reduction machine: rule behavior, traces, verdicts, determinism."""

import pytest

from flowcheck.engine import (
    NoSatisfiableBranch,
    ReductionState,
    StepCapExceeded,
    Terminal,
    classify,
    inline,
    reduce,
    reduce_step,
    start,
)
from flowcheck.notation import render
from flowcheck.preds import Cmp, conj, neg
from flowcheck.solver import Universe
from flowcheck.terms import (
    Concrete,
    CorIns,
    DefRef,
    Var,
    ZERO,
    cor_def,
    cor_ins,
    constrained,
    inline_app,
    received,
    seq,
    start_app,
    union,
    yielded,
)

Int, Str, Bool, Err = (
    Concrete("Int"),
    Concrete("String"),
    Concrete("Bool"),
    Concrete("Error"),
)
A = Concrete("A")


def moby_defs():
    anon = cor_def(yielded(Err), label="anon")
    run = cor_def(start_app(anon), label="run")
    main = cor_def(inline_app(run), received(Err), label="main")
    return main


class TestStart:
    def branchy(self):
        v = Var("v")
        return cor_def(
            yielded(
                union(
                    constrained(Int, Cmp(v, "<", 10)),
                    constrained(Bool, neg(Cmp(v, "<", 10))),
                )
            ),
            label="s",
        )

    def test_small_argument_picks_first_branch(self):
        assert start(self.branchy(), {"v": 2}) == cor_ins(yielded(Int))

    def test_large_argument_picks_second_branch(self):
        assert start(self.branchy(), {"v": 20}) == cor_ins(yielded(Bool))

    def test_no_unions_no_variables(self):
        d = cor_def(received(A), yielded(Concrete("B")))
        assert start(d, {}) == cor_ins(received(A), yielded(Concrete("B")))

    def test_symbolic_argument_returns_guarded_variants(self):
        result = start(self.branchy(), {})
        assert isinstance(result, list) and len(result) == 2
        instances = [inst for inst, _ in result]
        assert cor_ins(yielded(Int)) in instances
        assert cor_ins(yielded(Bool)) in instances
        for _, guard in result:
            assert guard != None  # noqa: E711 - each variant carries its guard

    def test_every_branch_unsatisfiable(self):
        v = Var("v")
        d = cor_def(
            yielded(
                union(
                    constrained(Int, conj(Cmp(v, "<", 0), Cmp(v, ">", 0))),
                    constrained(Bool, conj(Cmp(v, "<", 5), Cmp(v, ">", 5))),
                )
            )
        )
        with pytest.raises(NoSatisfiableBranch):
            start(d, {})


class TestInline:
    def test_splice_replaces_the_application(self):
        run = cor_def(start_app(cor_def(yielded(Err))), label="run")
        target = cor_ins(inline_app(run), received(Err))
        out = inline(target, run)
        assert out == cor_ins(start_app(cor_def(yielded(Err))), received(Err))

    def test_defer_placement_appends(self):
        d = cor_def(yielded(Bool))
        target = cor_ins(received(Int))
        assert inline(target, d, position="atEnd") == cor_ins(
            received(Int), yielded(Bool)
        )

    def test_empty_definition_changes_nothing(self):
        d = cor_def()
        target = cor_ins(received(Int))
        assert inline(target, d, position="atEnd") == target


class TestReduceStep:
    def _state(self, live, pending=ZERO):
        universe = Universe.collect(*[e for e in live])
        state = ReductionState(universe=universe, pending=pending)
        from flowcheck.engine import _Live

        for k, inst in enumerate(live):
            state.live.append(_Live(inst, "main" if k == 0 else "c%d" % k))
        state.main_name = "main" if live else None
        return state

    def test_resume_consumes_pending(self):
        state = self._state([cor_ins(received(Err))], pending=Err)
        reduce_step(state)
        assert state.trace[-1].rule == "Resume"
        assert state.live[0].inst == CorIns(())
        assert state.pending == ZERO

    def test_external_when_no_receiver_matches(self):
        state = self._state([cor_ins(received(Int), received(Str))], pending=Str)
        reduce_step(state)
        assert state.trace[-1].rule == "External"
        assert state.externals == [Str]
        assert state.pending == ZERO

    def test_empty_input_terminates_clean(self):
        state = self._state([])
        reduce_step(state)
        assert state.terminal is not None
        assert classify(state.terminal).kind == "NoDeadlock"

    def test_step_cap_raises(self):
        state = self._state([cor_ins(yielded(Int))])
        state.max_steps = 0
        with pytest.raises(StepCapExceeded):
            reduce_step(state)


class TestReduce:
    def test_moby_trace(self):
        verdict, trace = reduce([start_app(moby_defs())])
        assert verdict.kind == "NoDeadlock"
        rules = [t.rule for t in trace]
        assert rules == [
            "StartEval",
            "InlineEval",
            "YieldCo",
            "Yield",
            "Resume",
            "MainExit",
        ]

    def test_out_of_order_residual(self):
        work = cor_def(received(Int), received(Str), label="work")
        main = cor_def(start_app(work), yielded(Str), yielded(Int), label="main")
        verdict, _ = reduce([start_app(main)])
        assert verdict.kind == "Deadlock"
        assert render(verdict.residual) == "[!String]"

    def test_empty_input(self):
        verdict, _ = reduce([])
        assert verdict.kind == "NoDeadlock"

    def test_self_cancel_is_permitted(self):
        verdict, _ = reduce(
            [cor_ins(yielded(A), received(A)), cor_ins(received(A), yielded(A))]
        )
        assert verdict.kind == "NoDeadlock"

    def test_single_instance_self_cancel(self):
        verdict, _ = reduce([cor_ins(yielded(A), received(A))])
        assert verdict.kind == "NoDeadlock"

    def test_determinism_byte_identical(self):
        work = cor_def(received(Int), received(Str), label="work")
        main = cor_def(start_app(work), yielded(Str), yielded(Int), label="main")
        runs = []
        for _ in range(2):
            verdict, trace = reduce([start_app(main)])
            runs.append((verdict.kind, "\n".join(t.line() for t in trace)))
        assert runs[0] == runs[1]

    def test_self_start_hits_the_cap(self):
        defs = {
            "loop": cor_def(start_app(DefRef("loop")), received(Concrete("Never")),
                            label="loop")
        }
        verdict, trace = reduce([start_app(DefRef("loop"))], defs=defs)
        assert verdict.kind == "Inconclusive"
        assert len(trace) == 500

    def test_breadth_first_lets_others_progress(self):
        # a self-starting definition is appended at the end, so the pair
        # below still cancels before the cap
        defs = {
            "loop": cor_def(start_app(DefRef("loop")), label="loop"),
        }
        main = cor_def(
            start_app(DefRef("loop")), yielded(A), received(A), label="main"
        )
        verdict, trace = reduce([start_app(main)], defs=defs, max_steps=50)
        rules = [t.rule for t in trace]
        assert "Yield" in rules and "Resume" in rules

    def test_recursive_start_exits_with_main(self):
        defs = {"main": cor_def(start_app(DefRef("main")), label="main")}
        verdict, _ = reduce([start_app(DefRef("main"))], defs=defs)
        assert verdict.kind == "NoDeadlock"

    def test_receive_of_coroutine_pattern(self):
        # calculus-level coroutine cancelation: a receiver takes a whole
        # live coroutine out of the list
        pattern = cor_ins(yielded(A))
        receiver = cor_ins(received(pattern), yielded(Int))
        victim = cor_ins(yielded(A))
        sink = cor_ins(received(Int))
        verdict, trace = reduce([receiver, victim, sink])
        rules = [t.rule for t in trace]
        assert "ResumeCo" in rules
        assert verdict.kind == "NoDeadlock"


class TestClassify:
    def test_zero_residual(self):
        assert classify(Terminal("residual", ZERO)).kind == "NoDeadlock"

    def test_nonzero_residual(self):
        residual = cor_ins(yielded(Str))
        verdict = classify(Terminal("residual", residual, (Str,)))
        assert verdict.kind == "Deadlock"
        assert render(verdict.residual) == "[!String]"

    def test_step_cap(self):
        assert classify(Terminal("step-cap")).kind == "Inconclusive"

    def test_deadlock_always_carries_nonzero_residual(self):
        verdict = classify(Terminal("main-exit", cor_ins(yielded(Int)), (Int,)))
        assert verdict.kind == "Deadlock" and verdict.residual != ZERO


class TestConservation:
    def test_items_only_leave_through_sanctioned_rules(self):
        # multiset of directed items across live + pending + externals:
        # Yield and External preserve it, Resume removes a matched pair,
        # RemoveVoid removes one void item, terminals stop the machine
        import random
        from collections import Counter

        from flowcheck.engine import ReductionState, _Live, reduce_step
        from flowcheck.terms import Directed, RECEIVE, YIELD, ZeroType

        rng = random.Random(7)
        symbols = ("A", "B", "C")
        for _ in range(300):
            live = []
            for k in range(rng.randint(1, 4)):
                items = tuple(
                    Directed(rng.choice((YIELD, RECEIVE)), Concrete(rng.choice(symbols)))
                    for _ in range(rng.randint(0, 3))
                )
                live.append(CorIns(items))
            state = ReductionState(universe=Universe(symbols))
            for k, inst in enumerate(live):
                state.live.append(_Live(inst, "main" if k == 0 else "c%d" % k))
            state.main_name = "main"

            def census():
                counts = Counter()
                for entry in state.live:
                    for item in entry.inst.flow:
                        counts[item] += 1
                if not isinstance(state.pending, ZeroType):
                    counts[("pending", state.pending)] += 1
                for e in state.externals:
                    counts[("external", e)] += 1
                return counts

            while state.terminal is None:
                before = sum(census().values())
                rule_count = len(state.trace)
                reduce_step(state)
                after = sum(census().values())
                rule = state.trace[-1].rule if len(state.trace) > rule_count else None
                if rule == "Resume":
                    assert after == before - 2
                elif rule == "RemoveVoid":
                    assert after == before - 1
                elif rule in ("Yield", "External"):
                    assert after == before
                elif rule in ("MainExit", "CoToExt"):
                    break


class TestRulePriorityTotality:
    def test_every_state_advances_or_terminates(self):
        # the machine never gets stuck: each step fires a rule or produces
        # a terminal, within the cap
        import random

        from flowcheck.engine import ReductionState, _Live, reduce_step
        from flowcheck.terms import Directed, RECEIVE, YIELD

        rng = random.Random(11)
        for _ in range(200):
            state = ReductionState(universe=Universe(("A", "B")), max_steps=100)
            for k in range(rng.randint(1, 3)):
                items = tuple(
                    Directed(rng.choice((YIELD, RECEIVE)), Concrete(rng.choice(("A", "B"))))
                    for _ in range(rng.randint(0, 3))
                )
                state.live.append(_Live(CorIns(items), "main" if k == 0 else "c%d" % k))
            state.main_name = "main"
            while state.terminal is None:
                steps_before = state.steps
                reduce_step(state)
                assert state.steps == steps_before + 1


class TestRecursiveInline:
    def test_self_inlining_definition_hits_the_cap(self):
        # a function that calls itself re-splices forever; the cap catches it
        defs = {
            "f": cor_def(inline_app(DefRef("f")), label="f"),
            "main": cor_def(
                inline_app(DefRef("f")), received(Concrete("X")), label="main"
            ),
        }
        verdict, trace = reduce([start_app(DefRef("main"))], defs=defs)
        assert verdict.kind == "Inconclusive"
        assert len(trace) == 500
