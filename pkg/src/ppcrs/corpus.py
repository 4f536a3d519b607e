"""Exhaustive enumeration of small closed terms.

Size counts tree nodes.  Binders get names determined by their nesting
depth, so no binder shadows another; alpha-duplicates are removed by key.
"""

from __future__ import annotations

from typing import Iterator

from .por import Lam, Or, PApp, PVar, TRUE
from .terms import Abs, App, Mat, Term, Var, lam

CONSTRUCTORS = ("a", "b")
_LETTERS = "xyzw"


def _binder(depth: int, i: int) -> str:
    return f"{_LETTERS[i]}{depth}"


def _ppc(n, mscope, vscope, depth, cons, max_binders) -> Iterator[Term]:
    if n == 1:
        for v in vscope:
            yield Var(v)
        for c in cons + mscope:
            yield Mat(c)
        return
    for k in range(1, n - 1):
        funs = list(_ppc(k, mscope, vscope, depth, cons, max_binders))
        for u in _ppc(n - 1 - k, mscope, vscope, depth, cons, max_binders):
            for f in funs:
                yield App(f, u)
    for nb in range(max_binders + 1):
        theta = tuple(_binder(depth, i) for i in range(nb))
        for k in range(1, n - 1):
            pats = list(_ppc(k, mscope + theta, vscope, depth + 1, cons, max_binders))
            for s in _ppc(n - 1 - k, mscope, vscope + theta, depth + 1, cons, max_binders):
                for p in pats:
                    yield Abs(frozenset(theta), p, s)


def _dedup(terms) -> list:
    seen, out = set(), []
    for t in terms:
        if t.key not in seen:
            seen.add(t.key)
            out.append(t)
    return out


def ppc_terms(max_size: int, constructors=CONSTRUCTORS, max_binders: int = 1) -> list[Term]:
    """Closed terms of size at most ``max_size`` whose free matchables are the constructors."""
    out = []
    for n in range(1, max_size + 1):
        out.extend(_ppc(n, (), (), 0, tuple(constructors), max_binders))
    return _dedup(out)


def ppc_corpus(max_size: int = 9, constructors=CONSTRUCTORS, wide_size: int = 7) -> list[Term]:
    """The default PPC corpus: one binder per abstraction up to ``max_size``,
    up to two binders per abstraction up to ``wide_size``."""
    terms = ppc_terms(max_size, constructors, 1)
    if wide_size:
        terms = _dedup(terms + ppc_terms(min(wide_size, max_size), constructors, 2))
    return terms


def _lambda(n, vscope, depth, cons) -> Iterator[Term]:
    if n == 1:
        for v in vscope:
            yield Var(v)
        for c in cons:
            yield Mat(c)
        return
    for k in range(1, n - 1):
        funs = list(_lambda(k, vscope, depth, cons))
        for u in _lambda(n - 1 - k, vscope, depth, cons):
            for f in funs:
                yield App(f, u)
    if n >= 3:
        x = _binder(depth, 0)
        for s in _lambda(n - 2, vscope + (x,), depth + 1, cons):
            yield lam(x, s)


def lambda_terms(max_size: int = 9, constructors=("a",)) -> list[Term]:
    """Closed lambda-calculus terms (every abstraction is ``\\[x] ^x . s``), constants allowed."""
    out = []
    for n in range(1, max_size + 1):
        out.extend(_lambda(n, (), 0, tuple(constructors)))
    return out


def _por(n, vscope, depth):
    if n == 1:
        for v in vscope:
            yield PVar(v)
        yield TRUE
        return
    x = _binder(depth, 0)
    for s in _por(n - 1, vscope + (x,), depth + 1):
        yield Lam(x, s)
    for k in range(1, n - 1):
        lefts = list(_por(k, vscope, depth))
        for r in _por(n - 1 - k, vscope, depth):
            for left in lefts:
                yield PApp(left, r)
                yield Or(left, r)


def por_terms(max_size: int = 8) -> list:
    """Closed lambda-with-parallel-or terms up to ``max_size`` nodes."""
    out = []
    for n in range(1, max_size + 1):
        out.extend(_por(n, (), 0))
    return out


def random_ppc_term(rng, size: int, constructors=CONSTRUCTORS, max_binders: int = 2) -> Term:
    """A random closed term of roughly ``size`` nodes, biased towards applied abstractions."""
    return _rand(rng, size, (), (), 0, tuple(constructors), max_binders)


def _rand(rng, n, mscope, vscope, depth, cons, max_binders):
    if n <= 2:
        choices = [Mat(c) for c in cons + mscope] + [Var(v) for v in vscope] * 2
        return rng.choice(choices)
    r = rng.random()
    if r < 0.45 and n >= 5:
        # an applied abstraction
        f = _rand_abs(rng, max(3, (2 * n) // 3), mscope, vscope, depth, cons, max_binders)
        return App(f, _rand(rng, n - 1 - (2 * n) // 3, mscope, vscope, depth, cons, max_binders))
    if r < 0.75:
        k = rng.randint(1, n - 2)
        return App(
            _rand(rng, k, mscope, vscope, depth, cons, max_binders),
            _rand(rng, n - 1 - k, mscope, vscope, depth, cons, max_binders),
        )
    return _rand_abs(rng, n, mscope, vscope, depth, cons, max_binders)


def _rand_abs(rng, n, mscope, vscope, depth, cons, max_binders):
    nb = rng.choice([1, 1, 1, 0, 2][: max_binders + 3])
    nb = min(nb, max_binders)
    theta = tuple(_binder(depth, i) for i in range(nb))
    k = rng.choice([1, 1, 3, 3, 5]) if n > 6 else 1
    k = min(k, n - 2)
    if k == 1 and theta and rng.random() < 0.8:
        p = Mat(theta[0])
    else:
        p = _rand(rng, k, mscope + theta, vscope, depth + 1, cons, max_binders)
    s = _rand(rng, n - 1 - k, mscope, vscope + theta, depth + 1, cons, max_binders)
    return Abs(frozenset(theta), p, s)


def random_ppc_corpus(count: int, seed: int = 0, sizes=(9, 11, 13, 15), min_steps: int = 2) -> list[Term]:
    """``count`` distinct random terms having at least ``min_steps`` steps."""
    import random

    from .reduction import redex_positions

    rng = random.Random(seed)
    seen, out = set(), []
    tries = 0
    while len(out) < count and tries < count * 200:
        tries += 1
        t = random_ppc_term(rng, rng.choice(sizes))
        if t.key in seen or len(redex_positions(t)) < min_steps:
            continue
        seen.add(t.key)
        out.append(t)
    return out
