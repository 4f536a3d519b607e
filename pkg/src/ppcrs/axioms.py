"""Exhaustive checks of the rewriting axioms over finite corpora.

Each checker quantifies over all coinitial tuples of steps of each corpus
object and collects counterexample witnesses.  A report passes when it has
no witnesses.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Iterable

from .ars import ArsInstance, Step
from .errors import FuseExceeded
from .multistep import Multistep, develop, step_residuals
from .terms import format_position


@dataclass
class Witness:
    obj: object
    steps: tuple  # (label, position) pairs
    detail: str = ""

    def to_record(self, inst: ArsInstance) -> dict:
        return {
            "term": inst.show(self.obj),
            "steps": {name: format_position(p) for name, p in self.steps},
            "detail": self.detail,
        }


@dataclass
class AxiomReport:
    axiom: str
    checked: int = 0
    counterexamples: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.counterexamples

    def to_record(self, inst: ArsInstance, limit: int = 10) -> dict:
        return {
            "axiom": self.axiom,
            "passed": self.passed,
            "checked": self.checked,
            "counterexamples": [w.to_record(inst) for w in self.counterexamples[:limit]],
        }


class _Local:
    """Steps, targets and residual sets of one object, computed on demand."""

    def __init__(self, inst: ArsInstance, obj):
        self.inst = inst
        self.obj = obj
        self.steps = list(inst.steps_of(obj))
        self._res = {}
        self._created = {}

    def res(self, b: Step, a: Step) -> frozenset:
        k = (b.pos, a.pos)
        r = self._res.get(k)
        if r is None:
            r = self._res[k] = self.inst.residuals(b, a)
        return r

    def tgt_steps(self, a: Step):
        return self.inst.steps_of(self.inst.contract(a))

    def created(self, a: Step) -> list:
        out = self._created.get(a.pos)
        if out is None:
            ancestors = set()
            for b in self.steps:
                ancestors |= {s.pos for s in self.res(b, a)}
            out = self._created[a.pos] = [s for s in self.tgt_steps(a) if s.pos not in ancestors]
        return out

    def lt(self, a: Step, b: Step) -> bool:
        return self.inst.embeds(a, b)

    def le(self, a: Step, b: Step) -> bool:
        return a.pos == b.pos or self.inst.embeds(a, b)

    def grips(self, a: Step, b: Step) -> bool:
        return self.inst.grips(a, b)


def _w(ctx, detail="", **steps):
    return Witness(ctx.obj, tuple((k, v.pos) for k, v in steps.items()), detail)


def _self_reduction(ctx):
    n, bad = 0, []
    for a in ctx.steps:
        n += 1
        if ctx.res(a, a):
            bad.append(_w(ctx, "a has a residual after itself", a=a))
    return n, bad


def _finite_residuals(ctx):
    n, bad = 0, []
    for a in ctx.steps:
        valid = {s.pos for s in ctx.tgt_steps(a)}
        for b in ctx.steps:
            n += 1
            r = ctx.res(b, a)
            if len(r) > len(valid) or any(s.pos not in valid for s in r):
                bad.append(_w(ctx, "residual is not a step of the target", a=a, b=b))
    return n, bad


def _ancestor_uniqueness(ctx):
    n, bad = 0, []
    for a in ctx.steps:
        for b1, b2 in combinations(ctx.steps, 2):
            n += 1
            if ctx.res(b1, a) & ctx.res(b2, a):
                bad.append(_w(ctx, "two ancestors share a residual", a=a, b1=b1, b2=b2))
    return n, bad


def _longest(A: Multistep, fuse: int, memo: dict, active: set) -> int:
    k = (A.source.key, A.positions)
    if k in memo:
        return memo[k]
    if k in active:
        raise FuseExceeded("a development revisits a state")
    if not A.positions:
        return 0
    active.add(k)
    best = 0
    for a in A.steps:
        best = max(best, 1 + _longest(step_residuals(A, a), fuse, memo, active))
        if best > fuse:
            raise FuseExceeded(f"a development exceeds {fuse} steps")
    active.discard(k)
    memo[k] = best
    return best


def _finite_developments(ctx, fuse: int = 64, max_subset: int = 6):
    n, bad = 0, []
    memo = {}
    positions = [s.pos for s in ctx.steps]
    for r in range(1, min(len(positions), max_subset) + 1):
        for ps in combinations(positions, r):
            n += 1
            A = Multistep(ctx.obj, frozenset(ps), ctx.inst)
            try:
                _longest(A, fuse, memo, set())
            except (FuseExceeded, RecursionError) as e:
                bad.append(Witness(ctx.obj, tuple((f"A{i}", p) for i, p in enumerate(ps)), str(e)))
    return n, bad


def _after(ctx, B: Multistep, seq) -> frozenset:
    for s in seq:
        B = step_residuals(B, s)
    return B.positions


def _semantic_orthogonality(ctx):
    n, bad = 0, []
    inst = ctx.inst
    for a, b in combinations(ctx.steps, 2):
        n += 1
        ta, tb = inst.contract(a), inst.contract(b)
        gamma = develop(Multistep(ta, frozenset(s.pos for s in ctx.res(b, a)), inst))
        delta = develop(Multistep(tb, frozenset(s.pos for s in ctx.res(a, b)), inst))
        if gamma.target.key != delta.target.key:
            bad.append(_w(ctx, "the two legs reach different targets", a=a, b=b))
            continue
        for c in ctx.steps:
            left = _after(ctx, Multistep(ta, frozenset(s.pos for s in ctx.res(c, a)), inst), gamma.steps)
            right = _after(ctx, Multistep(tb, frozenset(s.pos for s in ctx.res(c, b)), inst), delta.steps)
            if left != right:
                bad.append(_w(ctx, "residual relations differ", a=a, b=b, c=c))
    return n, bad


def _linearity(ctx):
    n, bad = 0, []
    for a in ctx.steps:
        for b in ctx.steps:
            if ctx.le(a, b):
                continue
            n += 1
            if len(ctx.res(b, a)) != 1:
                bad.append(_w(ctx, f"{len(ctx.res(b, a))} residuals", a=a, b=b))
    return n, bad


def _context_freeness(ctx):
    n, bad = 0, []
    for a in ctx.steps:
        for b in ctx.steps:
            for c in ctx.steps:
                if ctx.lt(a, c):
                    continue
                before = ctx.lt(b, c)
                for b2 in ctx.res(b, a):
                    for c2 in ctx.res(c, a):
                        n += 1
                        if before != ctx.lt(b2, c2):
                            bad.append(_w(ctx, "embedding changed", a=a, b=b, c=c, b_=b2, c_=c2))
    return n, bad


def _enclave_creation(ctx):
    n, bad = 0, []
    for a in ctx.steps:
        created = ctx.created(a)
        if not created:
            continue
        for b in ctx.steps:
            if not ctx.lt(b, a):
                continue
            for b2 in ctx.res(b, a):
                for c2 in created:
                    n += 1
                    if not ctx.lt(b2, c2):
                        bad.append(_w(ctx, "created step escapes the enclave", a=a, b=b, b_=b2, c_=c2))
    return n, bad


def _enclave_embedding(ctx):
    n, bad = 0, []
    for a in ctx.steps:
        for b in ctx.steps:
            if not ctx.lt(b, a):
                continue
            for c in ctx.steps:
                if not ctx.lt(a, c):
                    continue
                for b2 in ctx.res(b, a):
                    for c2 in ctx.res(c, a):
                        n += 1
                        if not ctx.lt(b2, c2):
                            bad.append(_w(ctx, "b' does not embed c'", a=a, b=b, c=c, b_=b2, c_=c2))
    return n, bad


def _pivot(ctx):
    n, bad = 0, []
    for a in ctx.steps:
        for c in ctx.steps:
            if not ctx.lt(a, c):
                continue
            for b in ctx.steps:
                if not ctx.lt(b, c) or ctx.le(b, a):
                    continue
                for c2 in ctx.res(c, a):
                    n += 1
                    if not any(ctx.lt(b2, c2) for b2 in ctx.res(b, a)):
                        bad.append(_w(ctx, "no residual of b embeds c'", a=a, b=b, c=c, c_=c2))
    return n, bad


def _grip_instantiation(ctx):
    n, bad = 0, []
    for a in ctx.steps:
        for b in ctx.steps:
            for c in ctx.steps:
                for b2 in ctx.res(b, a):
                    for c2 in ctx.res(c, a):
                        if not ctx.lt(b2, c2):
                            continue
                        n += 1
                        if not (ctx.lt(b, c) or (ctx.grips(a, b) and ctx.lt(a, c))):
                            bad.append(_w(ctx, "embedding appeared without a grip", a=a, b=b, c=c, b_=b2, c_=c2))
    return n, bad


def _grip_density(ctx):
    n, bad = 0, []
    for a in ctx.steps:
        for b in ctx.steps:
            for c in ctx.steps:
                for b2 in ctx.res(b, a):
                    for c2 in ctx.res(c, a):
                        if not ctx.grips(b2, c2):
                            continue
                        n += 1
                        if not (ctx.grips(b, c) or (ctx.grips(b, a) and ctx.grips(a, c))):
                            bad.append(_w(ctx, "grip appeared without a chain", a=a, b=b, c=c, b_=b2, c_=c2))
    return n, bad


def _grip_convexity(ctx):
    n, bad = 0, []
    for a in ctx.steps:
        for b in ctx.steps:
            if not ctx.grips(a, b):
                continue
            for c in ctx.steps:
                if not ctx.lt(c, b):
                    continue
                n += 1
                if not (ctx.grips(a, c) or ctx.le(c, a)):
                    bad.append(_w(ctx, "grip skips an intermediate step", a=a, b=b, c=c))
    return n, bad


def _stability(ctx):
    n, bad = 0, []
    inst = ctx.inst
    for a, b in combinations(ctx.steps, 2):
        if ctx.le(a, b) or ctx.le(b, a):
            continue
        for a2 in ctx.res(a, b):
            for b2 in ctx.res(b, a):
                for d1 in ctx.tgt_steps(a):
                    via_b = inst.residuals(d1, b2)
                    if not via_b:
                        continue
                    for d2 in ctx.tgt_steps(b):
                        common = via_b & inst.residuals(d2, a2)
                        if not common:
                            continue
                        n += 1
                        ok = any(
                            d1 in ctx.res(d, a)
                            and d2 in ctx.res(d, b)
                            and (not ctx.le(a, d) or not ctx.le(b, d))
                            for d in ctx.steps
                        )
                        if not ok:
                            bad.append(_w(ctx, "no common ancestor", a=a, b=b, d1=d1, d2=d2))
    return n, bad


AXIOMS: dict[str, Callable] = {
    "self-reduction": _self_reduction,
    "finite-residuals": _finite_residuals,
    "ancestor-uniqueness": _ancestor_uniqueness,
    "finite-developments": _finite_developments,
    "semantic-orthogonality": _semantic_orthogonality,
    "linearity": _linearity,
    "context-freeness": _context_freeness,
    "enclave-creation": _enclave_creation,
    "enclave-embedding": _enclave_embedding,
    "pivot": _pivot,
    "grip-instantiation": _grip_instantiation,
    "grip-density": _grip_density,
    "grip-convexity": _grip_convexity,
}

STABILITY = "stability"


def _select(corpus, sample, seed):
    items = list(corpus)
    if sample is not None and sample < len(items):
        items = random.Random(seed).sample(items, sample)
    return items


def check_axioms(
    inst: ArsInstance,
    corpus: Iterable,
    axioms: Iterable[str] | None = None,
    sample: int | None = None,
    seed: int = 0,
) -> list[AxiomReport]:
    """Check several axioms in one pass over the corpus; reports come back in the given order."""
    names = list(axioms) if axioms is not None else list(AXIOMS)
    checkers = {name: (_stability if name == STABILITY else AXIOMS[name]) for name in names}
    reports = {name: AxiomReport(name) for name in names}
    for i, obj in enumerate(_select(corpus, sample, seed)):
        ctx = _Local(inst, obj)
        if ctx.steps:
            for name, check in checkers.items():
                n, bad = check(ctx)
                reports[name].checked += n
                reports[name].counterexamples.extend(bad)
        if i % 5000 == 4999:
            inst.clear_caches()
    return [reports[name] for name in names]


def check_axiom(inst: ArsInstance, axiom: str, corpus: Iterable, sample: int | None = None, seed: int = 0) -> AxiomReport:
    return check_axioms(inst, corpus, [axiom], sample, seed)[0]


def check_stability(inst: ArsInstance, corpus: Iterable) -> AxiomReport:
    return check_axiom(inst, STABILITY, corpus)
