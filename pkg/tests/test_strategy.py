import pytest
from conftest import OMEGA, T0, reducible_terms, term
from hypothesis import given, settings

from ppcrs.corpus import lambda_terms
from ppcrs.errors import NormalFormInput, NotLambdaFragment, NotNormalizing
from ppcrs.matching import WAIT, is_decided, match
from ppcrs.multistep import Multistep, is_necessary_bounded, is_never_gripping_bounded, target
from ppcrs.reduction import PPC_ARS, redex_parts, redex_positions
from ppcrs.strategy import (
    SMResult,
    lo_redex,
    lo_strategy,
    normalize,
    parallel_outermost,
    s_match,
    s_pi,
    strategy_S,
)
from ppcrs.syntax import parse_term
from ppcrs.terms import IDENTITY, Abs, App, alpha_equivalent, is_strict_prefix, iter_positions

P = parse_term
t0 = P(T0)
K = r"(\[x] ^x . \[y] ^y . x)"
XY = frozenset({"x", "y"})


class TestSMatch:
    def test_only_the_deciding_argument(self):
        u = term("^a (I ^c) (I ^d)")
        p = P("^a ^x (^c ^y)")
        assert match(XY, u, p) is WAIT
        assert s_match(XY, u, p) == SMResult(frozenset(), frozenset({(2,)}))

    def test_pattern_and_argument(self):
        u = term("^a (I ^c) (^d (I ^c))")
        p = term("^a (^b ^x) (I ^c)")
        assert s_match(XY, u, p) == SMResult(frozenset({(2,)}), frozenset({(1, 2)}))

    def test_bound_matchable(self):
        assert s_match(frozenset({"x"}), term("I ^c"), P("^x")).is_empty()

    def test_same_constructor(self):
        assert s_match(frozenset(), P("^c"), P("^c")).is_empty()


class TestSPi:
    def test_both_contributing_steps(self):
        t = term(r"(\[y] ^a ^b ^c ^y . y) (^a (I ^c) (I ^b) (I ^a))")
        assert s_pi(t) == {(2, 1, 1, 2), (2, 1, 2)}

    def test_pattern_step_and_argument_step(self):
        t = term(r"(\[x,y] ^a (^b ^x) (I ^c) . I ^e) (^a (I ^c) (^d (I ^c)))")
        assert s_pi(t) == {(1, 1, 2), (2, 1, 2)}

    def test_head_of_argument_is_a_redex(self):
        # only the leftmost step of the argument is selected: its head is not a matchable form
        t = term(r"(\[x] ^a ^b ^x . ^e) ((I ^d) (I ^b) ^g)")
        assert s_pi(t) == {(2, 1, 1)}

    def test_normal_form(self):
        assert s_pi(IDENTITY) == frozenset()
        assert s_pi(P("x ^c")) == frozenset()

    def test_decided_root(self):
        assert s_pi(term("I (I ^c)")) == {()}

    def test_t0(self):
        assert s_pi(t0) == {(2, 1, 2), (2, 2)}

    def test_abstraction_pattern_first(self):
        t = term(r"\[x] (I ^c) . (I ^d)")
        assert s_pi(t) == {(1,)}
        assert s_pi(term(r"\[x] ^x . (I ^d)")) == {(2,)}

    def test_hopeless_prestep_looks_inside(self):
        # the pattern is a variable application, so the match never gets decided
        t = term(r"(\[x] (y ^x) . I ^c) ^d")
        assert redex_parts(t, ())[2] is WAIT
        assert s_pi(t) == {(1, 2)}
        t = term(r"(\[x] (y ^x) . ^c) (I ^d)")
        assert s_pi(t) == {(2,)}


class TestStrategyS:
    def test_normal_form_input(self):
        with pytest.raises(NormalFormInput):
            strategy_S(IDENTITY)

    def test_selected_steps(self):
        assert strategy_S(t0) == Multistep(t0, {(2, 1, 2), (2, 2)})


class TestLeftmostOutermost:
    def test_examples(self):
        kio = term(f"{K} I {OMEGA}")
        assert lo_redex(kio).pos == (1,)
        assert lo_redex(term("I (I (I I))")).pos == ()

    def test_errors(self):
        with pytest.raises(NotLambdaFragment):
            lo_redex(t0)
        with pytest.raises(NormalFormInput):
            lo_redex(IDENTITY)
        with pytest.raises(NotLambdaFragment):
            lo_redex(P(r"\[x] ^c ^x . x"))


class TestNormalize:
    def test_t0(self):
        trace = normalize(t0)
        assert len(trace) == 2
        assert [A.positions for _, A in trace.steps] == [{(2, 1, 2), (2, 2)}, {()}]
        assert alpha_equivalent(trace.normal_form, IDENTITY)

    def test_k_i_omega(self):
        trace = normalize(term(f"{K} I {OMEGA}"))
        assert len(trace) == 2 and alpha_equivalent(trace.normal_form, IDENTITY)
        trace = normalize(term(f"{K} I {OMEGA}"), "lo")
        assert len(trace) == 2

    def test_fuse(self):
        trace = normalize(P(OMEGA), fuse=5)
        assert trace.fuse_exceeded and len(trace) == 5

    def test_trace_replays(self):
        trace = normalize(t0)
        terms_ = [u for u, _ in trace.steps] + [trace.normal_form]
        for (u, A), nxt in zip(trace.steps, terms_[1:]):
            assert strategy_S(u) == A
            assert target(A).key == nxt.key

    def test_strategy_callable(self):
        trace = normalize(t0, strategy_S)
        assert len(trace) == 2

    def test_parallel_outermost_is_only_a_comparison(self):
        A = parallel_outermost(t0)
        assert A.positions == {(2, 1, 2), (2, 2)}


def test_lo_coincides_with_strategy_on_lambda_terms():
    checked = 0
    for t in lambda_terms(11):
        if not redex_positions(t):
            continue
        assert strategy_S(t) == lo_strategy(t), t
        checked += 1
    assert checked > 1000


def _steps_decide(theta, u, p, depth):
    """Whether some reduction of pattern and argument within ``depth`` single steps decides the match."""
    frontier, seen = [(u, p)], {(u.key, p.key)}
    for _ in range(depth):
        nxt = []
        for u1, p1 in frontier:
            for side, src in ((0, u1), (1, p1)):
                for a in PPC_ARS.steps_of(src):
                    v = PPC_ARS.contract(a)
                    pair = (v, p1) if side == 0 else (u1, v)
                    if is_decided(match(theta, *pair)):
                        return True
                    k = (pair[0].key, pair[1].key)
                    if k not in seen:
                        seen.add(k)
                        nxt.append(pair)
        frontier = nxt
    return False


def _waiting_presteps(t):
    for _, s in iter_positions(t):
        if isinstance(s, App) and isinstance(s.fun, Abs):
            f = s.fun
            if match(f.binders, s.arg, f.pattern) is WAIT:
                yield f.binders, s.arg, f.pattern


def test_strategy_invariants_on_corpus(reducible9):
    for t in reducible9:
        S = strategy_S(t)
        assert S.positions
        ps = redex_positions(t)
        for a in S.positions:
            assert not any(is_strict_prefix(b, a) for b in ps), t


def test_s_match_finds_a_step_whenever_one_helps(corpus9):
    checked = 0
    for t in corpus9[::3]:
        for theta, u, p in _waiting_presteps(t):
            if _steps_decide(theta, u, p, 4):
                checked += 1
                assert not s_match(theta, u, p).is_empty(), t
    assert checked > 100


@settings(max_examples=40, deadline=None)
@given(reducible_terms)
def test_strategy_on_random_terms(t):
    S = strategy_S(t)
    assert S.positions
    ps = redex_positions(t)
    assert all(not any(is_strict_prefix(b, a) for b in ps) for a in S.positions)
    try:
        assert is_necessary_bounded(S, 8)
    except NotNormalizing:
        pass
    assert is_never_gripping_bounded(S, 3, 30)
