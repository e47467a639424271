"""Constraint rewriting, collection, matching, and satisfiability.

The brute-force oracle here is deliberately independent of the production
path: it grounds both terms under every assignment of their free variables
over the symbol universe and the integer range -16..16, expands repeats
itself, and compares structurally.
"""

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flowcheck.preds import (
    Binding,
    Cmp,
    FALSE,
    Relation,
    TRUE,
    conj,
    neg,
    pred_evaluate,
    pred_free_vars,
)
from flowcheck.solver import (
    BOTTOM,
    ConstraintError,
    DomainConflict,
    RedefinedRelation,
    Universe,
    UnsupportedPredicate,
    collect_concrete,
    emit_smtlib,
    equate,
    match,
    partition_cases,
    reduce_constrained,
    solve,
    unique_bindings,
)
from flowcheck.terms import (
    Concrete,
    Constrained,
    Power,
    Seq,
    Tup,
    Var,
    ZERO,
    cor_ins,
    constrained,
    flatten,
    power,
    received,
    seq,
    substitute,
    tup,
    yielded,
)

from strategies import ground_types, simple_preds

Int, Str, Bool = Concrete("Int"), Concrete("String"), Concrete("Bool")
X, Y = Concrete("X"), Concrete("Y")


# ---------------------------------------------------------------------------
# the independent brute-force unifier (test oracle only)

ORACLE_INT_RANGE = range(-16, 17)


def _ground(t, assignment):
    if isinstance(t, Var):
        return assignment[t.name]
    if isinstance(t, Seq):
        return flatten(Seq(tuple(_ground(i, assignment) for i in t.items)))
    if isinstance(t, Tup):
        return Tup(tuple(_ground(i, assignment) for i in t.items))
    if isinstance(t, Power):
        count = assignment[t.count.name]
        if not isinstance(count, int) or count < 0:
            return None
        return flatten(Seq((_ground(t.base, assignment),) * count))
    if isinstance(t, Constrained):
        return _ground(t.base, assignment)
    return t


def _free_type_vars(t):
    out = set()
    if isinstance(t, Var):
        out.add(t.name)
    elif isinstance(t, (Seq, Tup)):
        for i in t.items:
            out |= _free_type_vars(i)
    elif isinstance(t, Power):
        out |= _free_type_vars(t.base)
        out.add(t.count.name)
    elif isinstance(t, Constrained):
        out |= _free_type_vars(t.base)
        out |= set(pred_free_vars(t.pred))
    return out


def brute_force_unifiable(a, b, universe):
    """True iff some assignment over symbols and -16..16 makes a and b the
    same ground term with all attached constraints true."""
    names = sorted(_free_type_vars(a) | _free_type_vars(b))
    preds = []
    for t in (a, b):
        if isinstance(t, Constrained):
            preds.append(t.pred)
    domains = [
        [Concrete(s) for s in universe.symbols] + list(ORACLE_INT_RANGE)
        for _ in names
    ]
    for combo in itertools.product(*domains):
        assignment = dict(zip(names, combo))
        ga = _ground(a, assignment)
        gb = _ground(b, assignment)
        if ga is None or gb is None or ga != gb:
            continue
        try:
            if all(pred_evaluate(p, assignment, universe.relations) for p in preds):
                return True
        except (KeyError, ValueError):
            continue
    return False


# ---------------------------------------------------------------------------


@pytest.fixture
def universe():
    return Universe(["Int", "String", "Bool", "X", "Y"])


class TestReduceConstrained:
    def test_false_guard_erases(self):
        assert reduce_constrained(constrained(Int, FALSE)) == ZERO

    def test_true_guard_vanishes(self):
        assert reduce_constrained(constrained(Int, TRUE)) == Int

    def test_binding_applies_then_ground_guard_folds(self):
        t = constrained(
            power(Int, Var("n")), conj(Binding(Var("n"), 5), Cmp(Var("n"), ">", 0))
        )
        assert reduce_constrained(t) == seq(*(Int,) * 5)

    def test_stacked_guards_merge(self):
        t = Constrained(Constrained(Int, Cmp(Var("v"), "<", 9)), Cmp(Var("v"), ">", 2))
        out = reduce_constrained(t)
        assert out == constrained(
            Int, conj(Cmp(Var("v"), "<", 9), Cmp(Var("v"), ">", 2))
        )

    @given(st.data())
    @settings(max_examples=150)
    def test_fixpoint_on_random_stacks(self, data):
        base = data.draw(ground_types())
        t = base
        for _ in range(data.draw(st.integers(0, 8))):
            t = Constrained(t, data.draw(simple_preds()))
        out = reduce_constrained(t)
        assert reduce_constrained(out) == out


class TestCollect:
    def test_single_symbol(self):
        assert collect_concrete(Int) == {"Int"}

    def test_instance_payloads(self):
        assert collect_concrete(cor_ins(yielded(Int), received(Str))) == {
            "Int",
            "String",
        }

    def test_bare_variable_contributes_nothing(self):
        assert collect_concrete(Var("x")) == set()

    def test_guard_symbols_count(self):
        t = constrained(Int, Cmp(Var("x"), "=", Concrete("User")))
        assert collect_concrete(t) == {"Int", "User"}


class TestMatch:
    def test_power_against_run(self, universe):
        result = match(seq(*(Int,) * 5), power(Int, Var("n")), universe)
        assert result.bindings == {"n": 5}
        assert result.residual == TRUE

    def test_distinct_symbols_bottom(self, universe):
        assert match(Int, Str, universe) is BOTTOM

    def test_uniqueness_worked_example(self, universe):
        pending = constrained(tup(X, power(Y, Var("j"))), Cmp(Var("j"), "<", 5))
        pattern = constrained(
            tup(power(X, Var("i")), power(Y, Var("j"))), Cmp(Var("j"), ">", 0)
        )
        result = match(pending, pattern, universe)
        assert result.bindings == {"i": 1}
        # the residual is exactly the open interval 0 < j < 5
        expected = conj(Cmp(Var("j"), ">", 0), Cmp(Var("j"), "<", 5))
        for j in range(-3, 9):
            assert pred_evaluate(result.residual, {"j": j}) == pred_evaluate(
                expected, {"j": j}
            )

    def test_ground_self_match_never_bottom(self, universe):
        for t in (Int, seq(Int, Str), tup(Int, Bool), cor_ins(yielded(Int))):
            assert match(t, t, universe) is not BOTTOM

    @given(ground_types(), ground_types())
    @settings(max_examples=300)
    def test_commutative_on_ground_pairs(self, a, b):
        universe = Universe.collect(a, b)
        assert match(a, b, universe) == match(b, a, universe)

    @given(st.data())
    @settings(max_examples=150, deadline=None)
    def test_bindings_validated_by_brute_force(self, data):
        universe = Universe(["Int", "String", "Bool", "X", "Y"])
        shapes = st.one_of(
            st.tuples(st.just(seq(*(Int,) * 3)), st.just(power(Int, Var("n")))),
            st.tuples(
                st.just(tup(X, power(Y, Var("j")))),
                st.just(tup(power(X, Var("i")), power(Y, Var("j")))),
            ),
            st.tuples(ground_types(), ground_types()),
            st.tuples(st.just(Var("x")), ground_types()),
        )
        a, b = data.draw(shapes)
        result = match(a, b, universe)
        if result is BOTTOM:
            assert not brute_force_unifiable(a, b, universe)
            return
        bindings = {k: v for k, v in result.bindings.items()}
        aa = substitute(a, bindings)
        bb = substitute(b, bindings)
        assert brute_force_unifiable(aa, bb, universe)


class TestSolve:
    def test_symbol_equality(self):
        u = Universe(["Faculty", "User", "Student"])
        assert solve(Cmp(Var("x"), "=", Concrete("Faculty")), u) == {
            "x": Concrete("Faculty")
        }

    def test_empty_integer_interval(self):
        u = Universe([])
        expr = conj(Cmp(Var("n"), ">", 0), Cmp(Var("n"), "<", 1))
        assert solve(expr, u) is None

    def test_relation_witness_is_any_member(self):
        u = Universe(["Faculty", "User", "Student"])
        u.register_relation("inherit", [("Faculty", "User"), ("Student", "User")])
        witness = solve(Relation("inherit", (Var("x"), Concrete("User"))), u)
        assert witness is not None
        assert witness["x"] in (Concrete("Faculty"), Concrete("Student"))

    def test_domain_conflict(self):
        u = Universe(["Faculty"])
        expr = conj(
            Cmp(Var("x"), "=", 3), Cmp(Var("x"), "=", Concrete("Faculty"))
        )
        with pytest.raises(DomainConflict):
            solve(expr, u)

    def test_unknown_relation(self):
        u = Universe(["Faculty"])
        with pytest.raises(UnsupportedPredicate):
            solve(Relation("mystery", (Var("x"),)), u)

    def test_deterministic_witness(self):
        u = Universe(["Bool", "Int"])
        expr = Cmp(Var("n"), ">", 3)
        assert solve(expr, u) == solve(expr, u)


class TestUniqueBindings:
    def test_interval_variable_stays_symbolic(self):
        u = Universe([])
        expr = conj(Cmp(Var("j"), "<", 5), Cmp(Var("j"), ">", 0))
        interp = solve(expr, u)
        result = unique_bindings(expr, interp, u)
        assert result.bindings == {}
        for j in range(-2, 8):
            assert pred_evaluate(result.residual, {"j": j}) == (0 < j < 5)

    def test_pinned_variable_is_bound(self):
        u = Universe([])
        expr = Cmp(Var("i"), "=", 1)
        result = unique_bindings(expr, {"i": 1}, u)
        assert result.bindings == {"i": 1}
        assert result.residual == TRUE

    def test_symbol_equality_pins(self):
        u = Universe(["Faculty", "User"])
        expr = Cmp(Var("x"), "=", Concrete("Faculty"))
        result = unique_bindings(expr, {"x": Concrete("Faculty")}, u)
        assert result.bindings == {"x": Concrete("Faculty")}

    @given(simple_preds())
    @settings(max_examples=150)
    def test_no_binding_with_satisfiable_negation(self, expr):
        u = Universe(["Int", "Bool"])
        try:
            interp = solve(expr, u)
        except (DomainConflict, UnsupportedPredicate):
            return
        if not interp:
            return
        result = unique_bindings(expr, interp, u)
        for name, value in result.bindings.items():
            again = conj(expr, neg(Cmp(Var(name), "=", value)))
            assert solve(again, u) is None


class TestRelations:
    def test_closed_world(self):
        u = Universe([])
        u.register_relation("inherit", [("Faculty", "User"), ("Student", "User")])
        assert u.holds("inherit", "Faculty", "User")
        assert not u.holds("inherit", "User", "Faculty")
        assert not u.holds("inherit", "Book", "Book")

    def test_redefinition_rejected(self):
        u = Universe([])
        u.register_relation("inherit", [("A", "B")])
        with pytest.raises(RedefinedRelation):
            u.register_relation("inherit", [("C", "D")])


class TestPartition:
    def test_weekday_groups(self):
        u = Universe([])
        w = Var("weekday")
        p1 = conj(Cmp(w, ">=", 1), Cmp(w, "<=", 3))
        p2 = conj(Cmp(w, ">=", 3), Cmp(w, "<=", 5))
        cases = partition_cases([p1, p2], u)
        assert len(cases) == 4
        # every integer lands in exactly one case
        for value in range(-2, 10):
            holds = [
                pred_evaluate(c.assumption, {"weekday": value}) for c in cases
            ]
            assert holds.count(True) == 1

    def test_non_integer_variable_rejected(self):
        u = Universe(["Faculty"])
        with pytest.raises(ConstraintError):
            partition_cases([Cmp(Var("x"), "=", Concrete("Faculty"))], u)

    def test_no_predicates_single_case(self):
        u = Universe([])
        cases = partition_cases([], u)
        assert len(cases) == 1 and cases[0].assumption == TRUE


class TestSmtLib:
    def test_deterministic_bytes(self):
        u = Universe(["Faculty", "User"])
        u.register_relation("inherit", [("Faculty", "User")])
        expr = Relation("inherit", (Var("x"), Concrete("User")))
        assert emit_smtlib(expr, u) == emit_smtlib(expr, u)

    def test_closed_world_forall_clause(self):
        u = Universe(["Faculty", "User", "Student"])
        u.register_relation("inherit", [("Faculty", "User"), ("Student", "User")])
        text = emit_smtlib(TRUE, u)
        assert "(declare-fun inherit (Concrete Concrete) Bool)" in text
        assert "(assert (inherit Faculty User))" in text
        assert "(forall ((x0 Concrete) (x1 Concrete))" in text
        assert "(= (inherit x0 x1) false)" in text

    def test_trivial_script_shape(self):
        u = Universe(["Int"])
        text = emit_smtlib(TRUE, u)
        assert text.startswith("(set-logic ALL)")
        assert text.rstrip().endswith("(check-sat)")
        assert "(assert true)" in text

    def test_unsat_example_script(self):
        # (n > 0 and n < 1) has no integer solution; the emitted script
        # carries exactly that assertion for any external solver to refute
        u = Universe([])
        expr = conj(Cmp(Var("n"), ">", 0), Cmp(Var("n"), "<", 1))
        text = emit_smtlib(expr, u)
        assert "(declare-const n Int)" in text
        assert "(assert (and (> n 0) (< n 1)))" in text
        assert solve(expr, u) is None


class TestEquate:
    def test_variable_never_equals_structured_type(self, universe):
        assert equate(Var("x"), seq(Int, Str)) == FALSE
        assert equate(Var("x"), ZERO) == FALSE

    def test_power_against_single_item(self, universe):
        out = match(power(Int, Var("n")), Int, universe)
        assert out.bindings == {"n": 1}


@given(ground_types())
@settings(max_examples=200)
def test_ground_self_match_property(t):
    universe = Universe.collect(t)
    assert match(t, t, universe) is not BOTTOM
