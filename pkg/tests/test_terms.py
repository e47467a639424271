"""Structural operations of the term algebra."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from flowcheck.terms import (
    Concrete,
    CorIns,
    EmptyInstance,
    HeadOfDefinition,
    IllegalBinding,
    Seq,
    Var,
    YIELD,
    ZERO,
    cor_def,
    cor_ins,
    distribute,
    first,
    flatten,
    head,
    none,
    power,
    received,
    seq,
    substitute,
    tail,
    yielded,
)

from strategies import general_types, ground_types

A, B, C = Concrete("A"), Concrete("B"), Concrete("C")
Int = Concrete("Int")


class TestFlatten:
    def test_nested_sequences_merge(self):
        assert seq(seq(A, B), C) == seq(A, B, C)

    def test_singleton_unwraps(self):
        assert seq(A) == A

    def test_empty_sequence_is_zero(self):
        assert seq() == ZERO

    def test_zero_items_vanish(self):
        assert seq(A, ZERO, B) == seq(A, B)

    @given(general_types())
    def test_idempotent(self, t):
        assert flatten(flatten(t)) == flatten(t)

    @given(ground_types(), ground_types(), ground_types())
    def test_associative(self, a, b, c):
        assert flatten(Seq((Seq((a, b)), c))) == flatten(Seq((a, Seq((b, c)))))


class TestDistribute:
    def test_sequence_splits_itemwise(self):
        assert distribute(YIELD, seq(A, B)) == [yielded(A), yielded(B)]

    def test_non_sequence_passes_through(self):
        assert distribute("?", Int) == [received(Int)]

    def test_zero_is_kept_for_void_removal(self):
        assert distribute(YIELD, ZERO) == [yielded(ZERO)]

    @given(st.lists(ground_types().filter(lambda t: t != ZERO), min_size=2, max_size=5))
    def test_preserves_arity(self, items):
        flat = seq(*items)
        if isinstance(flat, Seq):
            assert len(distribute(YIELD, flat)) == len(flat.items)


class TestHeadTail:
    def test_head(self):
        i = cor_ins(yielded(A), received(B))
        assert head(i) == yielded(A)

    def test_head_single(self):
        assert head(cor_ins(received(Int))) == received(Int)

    def test_head_of_definition_rejected(self):
        with pytest.raises(HeadOfDefinition):
            head(cor_def(yielded(A)))

    def test_tail(self):
        i = cor_ins(yielded(A), received(B))
        assert tail(i) == cor_ins(received(B))

    def test_tail_to_empty(self):
        assert tail(cor_ins(yielded(A))) == CorIns(())

    def test_tail_of_definition_rejected(self):
        with pytest.raises(HeadOfDefinition):
            tail(cor_def(yielded(A)))

    def test_empty_instance_rejected(self):
        with pytest.raises(EmptyInstance):
            head(CorIns(()))
        with pytest.raises(EmptyInstance):
            tail(CorIns(()))

    @given(st.data())
    def test_round_trip(self, data):
        from strategies import instances

        i = data.draw(instances())
        if not i.flow:
            return
        assert (head(i),) + tail(i).flow == i.flow


class TestFirst:
    def test_finds_earliest(self):
        found, before, after = first([1, 2, 3], lambda x: x == 2)
        assert (found, before, after) == (2, [1], [3])

    def test_empty(self):
        assert first([], lambda x: True) == (None, [], [])

    def test_not_found_keeps_everything_before(self):
        assert first([1], lambda x: False) == (None, [1], [])

    @given(st.lists(st.integers(0, 5)), st.integers(0, 5))
    def test_partition(self, items, needle):
        found, before, after = first(items, lambda x: x == needle)
        if found is None:
            assert before == items and after == []
            assert needle not in items
        else:
            assert before + [found] + after == items
            assert needle not in before


class TestNone:
    def test_empty_is_vacuously_true(self):
        assert none([], lambda x: True)

    def test_match_found(self):
        assert not none([1], lambda x: x == 1)

    @given(st.lists(st.integers(0, 3), max_size=6), st.integers(0, 3))
    def test_agrees_with_exhaustive_search(self, items, needle):
        pred = lambda x: x == needle
        expected = not any(pred(x) for x in items)
        assert none(items, pred) == expected


class TestSubstitute:
    def test_power_count(self):
        assert substitute(power(Int, Var("n")), {"n": 5}) == seq(*(Int,) * 5)

    def test_empty_binding_is_identity(self):
        assert substitute(A, {}) == A

    @given(general_types())
    def test_empty_binding_identity_property(self, t):
        assert substitute(t, {}) == flatten(t)

    def test_complex_binding_rejected(self):
        with pytest.raises(IllegalBinding):
            substitute(Var("x"), {"x": seq(A, B)})

    def test_zero_binding_rejected(self):
        with pytest.raises(IllegalBinding):
            substitute(Var("x"), {"x": ZERO})

    def test_variable_to_symbol(self):
        assert substitute(seq(Var("x"), B), {"x": A}) == seq(A, B)

    def test_untouched_variables_remain(self):
        assert substitute(Var("y"), {"x": A}) == Var("y")


def test_exhausted_instance_is_inert():
    from flowcheck.terms import is_exhausted

    assert is_exhausted(CorIns(()))
    assert not is_exhausted(cor_ins(yielded(A)))
