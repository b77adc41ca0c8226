import pytest
from hypothesis import given, strategies as st

from rrunfold.parser import parse_term
from rrunfold.terms import (NIL, BindingStore, Var, VarGen, format_term, is_ground, is_variant,
                            make_list, occurs, rename_apart, resolve, substitute, term_equal,
                            term_size, term_vars, unify)


def test_unify_list_pattern_binds_elements():
    vs = {}
    pat = parse_term("[C,B|D]", varmap=vs)
    store = BindingStore()
    assert unify(pat, make_list([3, 1, 2]), store)
    assert resolve(vs["C"]) == 3
    assert resolve(vs["B"]) == 1
    assert resolve(vs["D"]) == make_list([2])


def test_unify_fails_on_clash_and_leaves_nothing_bound_under_mark():
    x = VarGen().fresh("X")
    store = BindingStore()
    m = store.mark()
    assert not unify(("f", x, 1), ("f", 2, 2), store)
    store.rollback(m)
    assert x.ref is None


def test_occurs_check_rejects_cyclic_binding():
    x = VarGen().fresh("X")
    store = BindingStore()
    assert occurs(x, ("f", ("g", x)))
    assert not unify(x, ("f", x), store)
    assert x.ref is None


def test_rollback_restores_nested_marks():
    gen = VarGen()
    x, y = gen.fresh("X"), gen.fresh("Y")
    store = BindingStore()
    outer = store.mark()
    store.bind(x, 1)
    inner = store.mark()
    store.bind(y, 2)
    store.rollback(inner)
    assert y.ref is None and x.ref == 1
    store.rollback(outer)
    assert x.ref is None


def test_term_size_counts_nodes_and_big_integer_words():
    # [1,2] is .(1, .(2, [])): two cells, two ints, one nil
    assert term_size(make_list([1, 2])) == 5
    assert term_size(2 ** 128) == 3
    assert term_size(7) == 1


def test_rename_apart_gives_fresh_variables_with_shared_structure():
    gen = VarGen()
    x = gen.fresh("X")
    t = ("f", x, ("g", x))
    c = rename_apart(t, gen)
    assert c[1] is c[2][1]
    assert c[1] is not x
    assert is_variant(t, c)


def test_substitute_and_vars():
    gen = VarGen()
    x, y = gen.fresh("X"), gen.fresh("Y")
    t = ("+", x, ("*", y, x))
    assert term_vars(t) == [x, y]
    assert substitute(t, {x: 2}) == ("+", 2, ("*", y, 2))
    assert not is_ground(t)
    assert is_ground(substitute(t, {x: 1, y: 2}))


def test_is_variant_needs_a_bijection():
    gen = VarGen()
    x, y = gen.fresh(), gen.fresh()
    assert not is_variant(("f", x, x), ("f", x, y))
    assert not is_variant(("f", x, y), ("f", x, x))


def test_term_equal_handles_long_lists():
    n = 200_000
    assert term_equal(make_list(range(n)), make_list(range(n)))
    assert not term_equal(make_list(range(n)), make_list(list(range(n - 1)) + [0]))


def test_format_term_operators_and_lists():
    assert format_term(parse_term("C is 64*A-2016+D")) == "C is 64*A-2016+D"
    assert format_term(parse_term("[a,b|T]")) == "[a,b|T]"
    assert format_term(parse_term("A-(B-C)")) == "A-(B-C)"
    assert format_term(NIL) == "[]"


ints = st.integers(-50, 50)
terms = st.recursive(
    ints | st.sampled_from(["a", "b", "[]"]),
    lambda sub: st.tuples(st.sampled_from(["f", "g"]), sub, sub) | st.lists(sub, max_size=4).map(make_list),
    max_leaves=12,
)


@given(terms)
def test_unify_is_reflexive_on_ground_terms(t):
    assert unify(t, t, BindingStore())


@given(terms, st.integers(0, 5))
def test_unify_then_resolve_yields_equal_terms(t, holes):
    # punch holes: replace some integer leaves by variables
    gen = VarGen()
    count = [0]

    def punch(x):
        if type(x) is int and count[0] < holes:
            count[0] += 1
            return gen.fresh()
        if type(x) is tuple:
            return (x[0],) + tuple(punch(a) for a in x[1:])
        return x

    pat = punch(t)
    assert unify(pat, t, BindingStore())
    assert term_equal(resolve(pat), t)
