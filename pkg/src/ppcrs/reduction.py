"""Steps of the pure pattern calculus and their residual theory."""

from __future__ import annotations

from enum import Enum

from . import ars
from .ars import ArsInstance, Step, require_coinitial
from .errors import NotAStep, NotCreated
from .matching import FAIL, Match, apply_match, is_decided, match
from .terms import (
    Abs,
    App,
    Mat,
    Position,
    Term,
    Var,
    body_occurrences,
    format_position,
    is_prefix,
    is_strict_prefix,
    iter_positions,
    replace_at,
    size,
    subterm_at,
)


def redex_parts(t: Term, pos: Position) -> tuple[Abs, Term, Match]:
    """The abstraction, argument and match of the prestep at ``pos``."""
    s = subterm_at(t, pos)
    if not (isinstance(s, App) and isinstance(s.fun, Abs)):
        raise NotAStep(f"no abstraction applied at {format_position(pos) or 'ε'}")
    f = s.fun
    return f, s.arg, match(f.binders, s.arg, f.pattern)


def is_redex(s: Term) -> bool:
    return (
        isinstance(s, App)
        and isinstance(s.fun, Abs)
        and is_decided(match(s.fun.binders, s.arg, s.fun.pattern))
    )


def redex_positions(t: Term) -> list[Position]:
    return sorted(p for p, s in iter_positions(t) if is_redex(s))


def is_normal(t: Term) -> bool:
    return not any(is_redex(s) for _, s in iter_positions(t))


def make_step(t: Term, pos: Position) -> Step:
    _, _, mu = redex_parts(t, pos)
    if not is_decided(mu):
        raise NotAStep(f"the match at {format_position(pos) or 'ε'} is waiting")
    return Step(t, tuple(pos))


def bound_matchable_at(p: Term, binders, path: Position) -> tuple[str, int] | None:
    """Walk ``p`` along ``path`` until a bound matchable is reached.

    Returns the matchable's name and the length of the consumed prefix.
    """
    node = p
    for depth in range(len(path) + 1):
        if isinstance(node, Mat) and node.name in binders:
            return node.name, depth
        if depth == len(path) or not isinstance(node, App):
            return None
        node = node.fun if path[depth] == 1 else node.arg
    return None


class CreationCase(Enum):
    I_VAR = "I(i)"
    I_ABS = "I(ii)"
    I_FAIL = "I(iii)"
    II = "II"
    III_BOTH = "III(i)"
    III_ARGUMENT = "III(ii)"
    III_PATTERN = "III(iii)"


class PPC(ArsInstance):
    name = "ppc"

    def _steps_of(self, t):
        return tuple(Step(t, p) for p in redex_positions(t))

    def _contract(self, a):
        f, _, mu = redex_parts(a.source, a.pos)
        if not is_decided(mu):
            raise NotAStep("waiting match")
        return replace_at(a.source, a.pos, apply_match(mu, f.body))

    def _residuals(self, b, a):
        tgt = self.contract(a)
        if b.pos == a.pos:
            return frozenset()
        if not is_prefix(a.pos, b.pos):
            return frozenset([Step(tgt, b.pos)])
        f, _, mu = redex_parts(a.source, a.pos)
        if mu is FAIL:
            return frozenset()
        rel = b.pos[len(a.pos):]
        if rel[:2] == (1, 2):
            return frozenset([Step(tgt, a.pos + rel[2:])])
        if rel[0] == 2:
            found = bound_matchable_at(f.pattern, f.binders, rel[1:])
            if found is None:
                return frozenset()
            x, m = found
            rest = rel[1 + m:]
            return frozenset(
                Step(tgt, a.pos + k + rest) for k, _ in body_occurrences(f.body, {x})
            )
        return frozenset()

    def grips(self, a, b):
        require_coinitial(a, b)
        rel_start = a.pos + (1, 2)
        if not is_prefix(rel_start, b.pos):
            return False
        f, _, mu = redex_parts(a.source, a.pos)
        if mu is FAIL:
            return False
        n = b.pos[len(rel_start):]
        # a bound variable of a occurs free in the body at or below n
        return any(is_prefix(n, k) for k, _ in body_occurrences(f.body, f.binders))

    def size(self, t):
        return size(t)

    def subterm(self, t, pos):
        return subterm_at(t, pos)

    def parse(self, text):
        from .syntax import parse_term

        return parse_term(text)

    def is_normal(self, t):
        return is_normal(t)


PPC_ARS = PPC()
ars.register(Term, PPC_ARS)


def redexes(t: Term) -> tuple[Step, ...]:
    """All steps of ``t`` in position order."""
    return PPC_ARS.steps_of(t)


def contract(a: Step) -> Term:
    return PPC_ARS.contract(a)


def residuals(b: Step, a: Step) -> frozenset:
    return PPC_ARS.residuals(b, a)


def embeds(a: Step, b: Step) -> bool:
    return PPC_ARS.embeds(a, b)


def grips(a: Step, b: Step) -> bool:
    """True when ``a`` is gripped by ``b``: b lies in a's body and uses a bound variable of a."""
    return PPC_ARS.grips(a, b)


def is_created(b2: Step, a: Step, inst: ArsInstance = PPC_ARS) -> bool:
    """No step of ``src(a)`` has ``b2`` among its residuals after ``a``."""
    return not any(b2 in inst.residuals(b, a) for b in inst.steps_of(a.source))


def creation_case(a: Step, b2: Step) -> CreationCase:
    """Which way contracting ``a`` brought the step ``b2`` of its target into being."""
    if not is_created(b2, a):
        raise NotCreated(f"{b2!r} has an ancestor under {a!r}")
    f, _, mu = redex_parts(a.source, a.pos)
    if is_strict_prefix(b2.pos, a.pos):
        rel = a.pos[len(b2.pos):]
        if rel == (1,):
            if mu is FAIL:
                return CreationCase.I_FAIL
            if isinstance(f.body, Var):
                return CreationCase.I_VAR
            return CreationCase.I_ABS
        if rel[:2] == (1, 1):
            return CreationCase.III_PATTERN
        if rel[0] == 2:
            return CreationCase.III_ARGUMENT
    elif is_prefix(a.pos, b2.pos) and mu is not FAIL:
        rel = b2.pos[len(a.pos):]
        s = subterm_at(f.body, rel)
        if isinstance(s, App) and isinstance(s.fun, Var):
            return CreationCase.II
        return CreationCase.III_BOTH
    raise NotCreated(f"{b2!r} fits none of the creation cases for {a!r}")
