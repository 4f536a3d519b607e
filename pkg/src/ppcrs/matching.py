"""Three-valued pattern matching: a positive substitution, fail, or wait."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Union

from .errors import UndefinedOnWait
from .terms import IDENTITY, App, Mat, Term, apply_substitution, is_matchable_form


@dataclass(frozen=True)
class Positive:
    subst: Mapping[str, Term] = field(default_factory=dict)

    def domain(self) -> frozenset:
        return frozenset(self.subst)


class Outcome(Enum):
    FAIL = "fail"
    WAIT = "wait"


FAIL = Outcome.FAIL
WAIT = Outcome.WAIT

Match = Union[Positive, Outcome]


def is_decided(mu: Match) -> bool:
    return mu is not WAIT


def disjoint_union(mu1: Match, mu2: Match) -> Match:
    if isinstance(mu1, Positive) and isinstance(mu2, Positive):
        if mu1.domain() & mu2.domain():
            return FAIL
        return Positive({**mu1.subst, **mu2.subst})
    if FAIL in (mu1, mu2):
        return FAIL
    return WAIT


def compound_match(binders, t: Term, p: Term) -> Match:
    """Match ``t`` against ``p``; the clauses are tried strictly in order."""
    if isinstance(p, Mat) and p.name in binders:
        return Positive({p.name: t})
    if isinstance(p, Mat) and isinstance(t, Mat) and t.name == p.name:
        return Positive({})
    t_mf, p_mf = is_matchable_form(t), is_matchable_form(p)
    if isinstance(t, App) and isinstance(p, App) and t_mf and p_mf:
        return disjoint_union(
            compound_match(binders, t.fun, p.fun), compound_match(binders, t.arg, p.arg)
        )
    if t_mf and p_mf:
        return FAIL
    return WAIT


def check(mu: Match, binders) -> Match:
    if isinstance(mu, Positive) and mu.domain() != frozenset(binders):
        return FAIL
    return mu


def match(binders, t: Term, p: Term) -> Match:
    """The matching outcome of argument ``t`` against pattern ``p`` with binder set ``binders``."""
    return check(compound_match(binders, t, p), binders)


def apply_match(mu: Match, t: Term) -> Term:
    if mu is WAIT:
        raise UndefinedOnWait("a waiting match cannot be applied")
    if mu is FAIL:
        return IDENTITY
    return apply_substitution(mu.subst, t)
