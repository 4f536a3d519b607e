from itertools import combinations

import pytest
from conftest import OMEGA, T0, reducible_terms, term
from hypothesis import given, settings

from ppcrs.ars import Step
from ppcrs.errors import LengthMismatch, NonCoinitial, NotAStep, NotNormalizing, NotPreserved
from ppcrs.multistep import (
    Measure,
    Multireduction,
    Multistep,
    all_steps,
    compare_lex,
    depth,
    develop,
    developments,
    embedded_by,
    empty,
    free_from,
    grips_set,
    is_necessary_bounded,
    is_never_gripping_bounded,
    measure,
    mred_free_from,
    mred_residual,
    never_gripping_witness,
    normal_forms_within,
    partition,
    project,
    residuals_after,
    step_free_from,
    target,
    uses,
)
from ppcrs.reduction import PPC_ARS, redex_positions
from ppcrs.syntax import parse_term
from ppcrs.terms import Mat, alpha_equivalent, parse_position, subterm_at

P = parse_term
t0 = P(T0)


def ms(t, *positions):
    return Multistep(t, frozenset(parse_position(p) for p in positions))


def subsets(xs):
    for r in range(len(xs) + 1):
        yield from combinations(xs, r)


# ((λx. x (I f)) (I g)) (I (I h)) with d = 1, a = 1122, b = 12, e = 2, c = 22
LAM = term(r"((\[x] ^x . x (I ^f)) (I ^g)) (I (I ^h))")


class TestMultistep:
    def test_rejects_non_steps(self):
        with pytest.raises(NotAStep):
            ms(t0, "")

    def test_empty_keeps_source(self):
        E = empty(t0)
        assert E.source is t0 and len(E) == 0
        assert target(E) is t0
        assert develop(E).steps == ()

    def test_equality_up_to_alpha(self):
        u = P(T0.replace("[z] ^z . z", "[q] ^q . q"))
        assert ms(t0, "22") == ms(u, "22")

    def test_of(self):
        A = Multistep.of(t0, [Step(t0, (2, 2))])
        assert A.positions == {(2, 2)}
        with pytest.raises(NonCoinitial):
            Multistep.of(t0, [Step(term("I ^c"), ())])


class TestDevelop:
    def test_development_of_body_then_root(self):
        t = term(r"(\[x] ^x . I x) (I y)")
        dev = develop(ms(t, "", "12"))
        assert [s.pos for s in dev.steps] == [(1, 2), ()]
        assert alpha_equivalent(dev.target, term("I y"))

    def test_argument_then_root(self):
        t = term(r"(\[x] ^x . (\[z] ^z . z z) x) (I y)")
        dev = develop(ms(t, "", "2"))
        assert len(dev) == 2
        assert alpha_equivalent(dev.target, P(r"(\[z] ^z . z z) y"))

    def test_given_order(self):
        t = term(r"(\[x] ^x . I x) (I y)")
        dev = develop(ms(t, "", "12"), order=[(), ()])
        assert alpha_equivalent(dev.target, term("I y"))
        with pytest.raises(NotAStep):
            develop(ms(t, "", "12"), order=[(2,)])
        with pytest.raises(ValueError):
            develop(ms(t, "", "12"), order=[()])

    def test_all_developments_agree(self):
        t = term(r"(\[x] ^x . (\[z] ^z . z z) x) (I y)")
        A = ms(t, "", "2")
        devs = list(developments(A))
        assert len(devs) == 2
        assert len({d.target.key for d in devs}) == 1


class TestDepth:
    def test_depth_grows_after_residuals(self):
        t = term(r"(\[x] ^x . (\[z] ^z . z z) x) (I y)")
        A, B = ms(t, "", "2"), ms(t, "12")
        assert depth(A) == 2
        assert depth(residuals_after(A, B)) == 3
        assert depth(empty(t)) == 0

    def test_residuals_after_nothing(self):
        A = ms(t0, "212", "22")
        assert residuals_after(A, empty(t0)) == A
        assert residuals_after(A, Multireduction.nil(t0)) == A


class TestSetRelations:
    def test_free_and_embedded(self):
        a, b, c, d, e = "1122", "12", "22", "1", "2"
        assert free_from(ms(LAM, c, d, e), ms(LAM, a, b))
        assert embedded_by(ms(LAM, a, b, c), ms(LAM, d, e))
        assert free_from(ms(LAM, a, b), ms(LAM, c, e))
        assert not free_from(ms(LAM, a), ms(LAM, d))
        assert partition(ms(LAM, b, c, e), ms(LAM, a, d)) == (ms(LAM, c, e), ms(LAM, b))

    def test_partition_needs_disjoint_sets(self):
        with pytest.raises(ValueError):
            partition(ms(LAM, "1"), ms(LAM, "1"))

    def test_uses(self):
        delta = Multireduction.chain(LAM, [[(2,)], [(1,), (2,)]])
        assert uses(delta, ms(LAM, "1", "2"))
        assert uses(delta, ms(LAM, "22"))
        assert not uses(delta, ms(LAM, "12"))
        assert mred_free_from(delta, ms(LAM, "1122", "12"))

    def test_uses_on_t0(self):
        delta = Multireduction.chain(t0, [[(2, 2)], [()]])
        assert alpha_equivalent(delta.target, P(r"\[x] ^x . x"))
        assert not uses(delta, ms(t0, "212"))
        assert uses(delta, ms(t0, "22"))
        A = ms(t0, "212", "22")
        assert uses(Multireduction(t0, (A,)), A)

    def test_grips_set(self):
        t = term(r"(\[x] ^x . I x) (I y)")
        assert grips_set(ms(t, ""), ms(t, "12"))
        assert not grips_set(ms(t, "12"), ms(t, ""))


class TestMultireduction:
    def test_nil_differs_from_empty_step(self):
        nil = Multireduction.nil(t0)
        one = Multireduction(t0, (empty(t0),))
        assert len(nil) == 0 and len(one) == 1
        assert nil.is_trivial() and one.is_trivial()
        assert nil != one

    def test_chaining_is_checked(self):
        with pytest.raises(NonCoinitial):
            Multireduction(t0, (ms(t0, "22"), ms(t0, "22")))

    def test_measure(self):
        assert measure(Multireduction.nil(t0)) == Measure(())
        assert measure(Multireduction(t0, (empty(t0),))) == Measure((0,))
        A = ms(LAM, "1", "2", "22")
        assert measure(Multireduction(LAM, (A,))) == Measure((depth(A),))
        delta = Multireduction.chain(LAM, [[(2,)], [(1,), (2,)]])
        assert measure(delta).depths == (2, 1)

    def test_compare_lex(self):
        assert compare_lex(Measure((0, 3)), Measure((1, 0))) == -1
        assert compare_lex(Measure((1, 0)), Measure((1, 0))) == 0
        with pytest.raises(LengthMismatch):
            compare_lex(Measure((1,)), Measure((1, 0)))

    def test_residual_of_multireduction(self):
        delta = Multireduction.chain(LAM, [[(2,)], [(1,), (2,)]])
        B = ms(LAM, "1122", "12")
        res = mred_residual(delta, B)
        assert res.source.key == target(B).key
        assert [len(A) for A in res.elements] == [1, 2]
        left = delta.then(Multireduction(delta.target, (residuals_after(B, delta),)))
        right = Multireduction(LAM, (B,)).then(res)
        assert left.target.key == right.target.key

    def test_project(self):
        t = term(r"(\[x] ^x . x) (I (I ^c))")
        delta = Multireduction.chain(t, [[(2,)], [(2,)]])
        proj = project(delta, (2,))
        assert proj.source == subterm_at(t, (2,))
        assert proj.target.key == subterm_at(delta.target, (2,)).key
        assert [A.positions for A in proj.elements] == [{()}, {()}]
        assert project(Multireduction.nil(t), (2,)) == Multireduction.nil(subterm_at(t, (2,)))
        assert uses(delta, ms(t, "22")) == uses(proj, Multistep(proj.source, {(2,)}))
        with pytest.raises(NotPreserved):
            project(Multireduction(t, (ms(t, ""),)), (2,))


class TestOracles:
    def test_necessary(self):
        assert is_necessary_bounded(ms(t0, "212", "22"))
        assert not is_necessary_bounded(ms(t0, "212"))
        assert not is_necessary_bounded(ms(t0, "22"))
        assert is_necessary_bounded(all_steps(t0))

    def test_not_normalizing(self):
        omega = P(OMEGA)
        with pytest.raises(NotNormalizing):
            is_necessary_bounded(all_steps(omega), 6)

    def test_never_gripping(self):
        t = term("I (I (I I))")
        assert is_never_gripping_bounded(ms(t, ""))
        u = term(r"(\[x] ^x . (\[z] ^z . z z) x) (I y)")
        assert never_gripping_witness(ms(u, "12")) == Multireduction.nil(u)
        assert is_never_gripping_bounded(empty(t0))

    def test_never_gripping_after_a_reduction(self):
        t = term(r"(\[z] ^z . z ^c) (\[x] ^x . I x)")
        B = ms(t, "22")
        assert not grips_set(all_steps(t), B)
        psi = never_gripping_witness(B)
        assert psi == Multireduction.chain(t, [[()]])

    def test_normal_forms_within(self):
        nfs = normal_forms_within(t0, 12)
        assert len(nfs) == 1 and alpha_equivalent(nfs[0], P(r"\[x] ^x . x"))
        assert normal_forms_within(P(OMEGA), 5) == []


def _necessary_by_multisteps(A, bound):
    """Necessity searched over multireductions, each element any non-empty set of steps."""
    frontier, seen = [A], {(A.source.key, A.positions)}
    for _ in range(bound + 1):
        nxt = []
        for R in frontier:
            steps = [s.pos for s in PPC_ARS.steps_of(R.source)]
            if not steps:
                return False
            for chosen in subsets(steps):
                if not chosen or set(chosen) & R.positions:
                    continue
                C = Multistep(R.source, frozenset(chosen))
                R2 = residuals_after(R, C)
                k = (R2.source.key, R2.positions)
                if k not in seen:
                    seen.add(k)
                    nxt.append(R2)
        frontier = nxt
    return True


def test_single_step_search_matches_multistep_search(reducible9):
    checked = 0
    for t in reducible9[::7]:
        if not normal_forms_within(t, 8):
            continue
        steps = [s.pos for s in PPC_ARS.steps_of(t)]
        for chosen in subsets(steps):
            A = Multistep(t, frozenset(chosen))
            assert is_necessary_bounded(A, 8) == _necessary_by_multisteps(A, 8), (t, chosen)
            checked += 1
    assert checked > 1000


def _relation(t, seq):
    return {c.pos: residuals_after(Multistep(t, {c.pos}), seq).positions for c in PPC_ARS.steps_of(t)}


@settings(max_examples=40, deadline=None)
@given(reducible_terms)
def test_multistep_invariants(t):
    steps = [s.pos for s in PPC_ARS.steps_of(t)]
    sets = [Multistep(t, frozenset(c)) for c in subsets(steps) if len(c) <= 3]
    for A in sets:
        for a in A.steps:
            assert depth(A) > depth(residuals_after(A, a))
        for B in sets:
            # both legs of the square end in the same term with the same residual relation
            left = Multireduction(t, (A, residuals_after(B, A)))
            right = Multireduction(t, (B, residuals_after(A, B)))
            assert left.target.key == right.target.key
            assert _relation(t, left) == _relation(t, right)
            for a in A.steps:
                if step_free_from(a, B):
                    assert len(residuals_after(a, B)) == 1
            if free_from(A, B) and not grips_set(A, B):
                assert depth(A) == depth(residuals_after(A, B))


@settings(max_examples=25, deadline=None)
@given(reducible_terms)
def test_order_independence_on_larger_terms(t):
    steps = [s.pos for s in PPC_ARS.steps_of(t)]
    for chosen in subsets(steps):
        if len(chosen) > 3:
            continue
        A = Multistep(t, frozenset(chosen))
        outcomes = {(d.target.key, tuple(sorted(_relation(t, d).items()))) for d in developments(A)}
        assert len(outcomes) == 1


def test_constructor_is_not_a_step():
    with pytest.raises(NotAStep):
        Multistep(Mat("c"), {()})
    assert redex_positions(Mat("c")) == []
