"""The multistep strategy for the pure pattern calculus and a normalisation driver.

``s_pi`` picks positions of a term; within a waiting redex ``s_match`` looks
at pattern and argument together to find the steps that can help decide the
match.  Both are ordered decision lists: the first clause that applies wins.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

from .ars import Step
from .errors import NormalFormInput, NotLambdaFragment
from .matching import is_decided, match
from .multistep import Multistep, target
from .reduction import PPC_ARS, is_normal, redex_positions
from .terms import Abs, App, Mat, Term, is_lambda_fragment, is_matchable_form, is_strict_prefix


def _under(prefix, ps) -> frozenset:
    return frozenset(prefix + p for p in ps)


@dataclass(frozen=True)
class SMResult:
    pattern_positions: frozenset = frozenset()
    argument_positions: frozenset = frozenset()

    def is_empty(self) -> bool:
        return not self.pattern_positions and not self.argument_positions


_NOTHING = SMResult()


def s_match(binders, u: Term, p: Term) -> SMResult:
    """Steps in pattern ``p`` and argument ``u`` that may decide a waiting match."""
    if isinstance(p, Mat) and p.name in binders:
        return _NOTHING
    if isinstance(p, Mat) and isinstance(u, Mat) and u.name == p.name:
        return _NOTHING
    p_mf = is_matchable_form(p)
    u_mf = is_matchable_form(u)
    if isinstance(u, App) and isinstance(p, App) and u_mf and p_mf:
        left = s_match(binders, u.fun, p.fun)
        right = s_match(binders, u.arg, p.arg)
        return SMResult(
            _under((1,), left.pattern_positions) | _under((2,), right.pattern_positions),
            _under((1,), left.argument_positions) | _under((2,), right.argument_positions),
        )
    if not p_mf:
        return SMResult(s_pi(p), frozenset())
    if not u_mf:
        return SMResult(frozenset(), s_pi(u))
    return _NOTHING


@lru_cache(maxsize=1 << 16)
def s_pi(t: Term) -> frozenset:
    if not isinstance(t, (App, Abs)):
        return frozenset()
    if isinstance(t, Abs):
        if not is_normal(t.pattern):
            return _under((1,), s_pi(t.pattern))
        return _under((2,), s_pi(t.body))
    f, u = t.fun, t.arg
    if isinstance(f, Abs):
        if is_decided(match(f.binders, u, f.pattern)):
            return frozenset([()])
        sm = s_match(f.binders, u, f.pattern)
        if not sm.is_empty():
            return _under((1, 1), sm.pattern_positions) | _under((2,), sm.argument_positions)
        if not is_normal(f.pattern):
            return _under((1, 1), s_pi(f.pattern))
        if not is_normal(f.body):
            return _under((1, 2), s_pi(f.body))
        return _under((2,), s_pi(u))
    if not is_normal(f):
        return _under((1,), s_pi(f))
    return _under((2,), s_pi(u))


def strategy_S(t: Term) -> Multistep:
    if is_normal(t):
        raise NormalFormInput("a normal form has no steps to select")
    return Multistep(t, s_pi(t), PPC_ARS)


def lo_redex(t: Term):
    """The leftmost-outermost step of a lambda-calculus term."""
    if not is_lambda_fragment(t):
        raise NotLambdaFragment("term has a non-lambda abstraction")
    ps = redex_positions(t)
    if not ps:
        raise NormalFormInput("a normal form has no leftmost-outermost step")
    # lexicographic order puts ancestors before descendants and 1 before 2
    return Step(t, min(ps))


def lo_strategy(t: Term) -> Multistep:
    return Multistep(t, frozenset([lo_redex(t).pos]), PPC_ARS)


def parallel_outermost(t) -> Multistep:
    """All outermost steps; for comparison only, it does not normalise in general."""
    from .ars import instance_for

    ars = instance_for(t)
    ps = [s.pos for s in ars.steps_of(t)]
    outer = frozenset(p for p in ps if not any(is_strict_prefix(q, p) for q in ps))
    return Multistep(t, outer, ars)


def _por(t):
    from .por import por_strategy

    return por_strategy(t)


STRATEGIES: dict[str, Callable] = {
    "necessary": strategy_S,
    "lo": lo_strategy,
    "por": _por,
    "parallel-outermost": parallel_outermost,
}


@dataclass
class NormalizeTrace:
    steps: list = field(default_factory=list)  # (term, selected multistep) pairs
    normal_form: object = None

    @property
    def fuse_exceeded(self) -> bool:
        return self.normal_form is None

    def __len__(self):
        return len(self.steps)


def normalize(t, strat: str | Callable = "necessary", fuse: int = 64) -> NormalizeTrace:
    """Apply the strategy's multistep until a normal form, or give up after ``fuse`` rounds."""
    from .ars import instance_for

    choose = STRATEGIES[strat] if isinstance(strat, str) else strat
    ars = instance_for(t)
    trace = NormalizeTrace()
    while len(trace.steps) < fuse:
        if ars.is_normal(t):
            trace.normal_form = t
            return trace
        A = choose(t)
        trace.steps.append((t, A))
        t = target(A)
    if ars.is_normal(t):
        trace.normal_form = t
    return trace
