"""Multisteps, developments, depth, multireductions and the bounded oracles.

Everything here is generic over the rewriting instance, which is recovered
from the type of the source term.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from .ars import ArsInstance, Step, instance_for
from .errors import (
    FuseExceeded,
    LengthMismatch,
    NonCoinitial,
    NotAStep,
    NotNormalizing,
    NotPreserved,
)
from .terms import Position, format_position, is_prefix, is_strict_prefix

DEFAULT_FUSE = 10_000


@dataclass(frozen=True, eq=False)
class Multistep:
    """A set of coinitial steps, given by their positions in ``source``."""

    source: object
    positions: frozenset = frozenset()
    ars: ArsInstance = field(default=None, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "positions", frozenset(tuple(p) for p in self.positions))
        if self.ars is None:
            object.__setattr__(self, "ars", instance_for(self.source))
        valid = {s.pos for s in self.ars.steps_of(self.source)}
        bad = self.positions - valid
        if bad:
            shown = ", ".join(format_position(p) or "ε" for p in sorted(bad))
            raise NotAStep(f"not steps of the source: {shown}")

    @classmethod
    def of(cls, source, steps: Iterable[Step], ars=None) -> "Multistep":
        steps = list(steps)
        for s in steps:
            if s.source is not source and s.source.key != source.key:
                raise NonCoinitial("steps do not share the given source")
        return cls(source, frozenset(s.pos for s in steps), ars)

    @property
    def steps(self) -> tuple[Step, ...]:
        return tuple(Step(self.source, p) for p in sorted(self.positions))

    def __iter__(self):
        return iter(self.steps)

    def __len__(self):
        return len(self.positions)

    def __contains__(self, step):
        return step.pos in self.positions and step.source.key == self.source.key

    def __eq__(self, other):
        return (
            isinstance(other, Multistep)
            and self.positions == other.positions
            and self.source.key == other.source.key
        )

    def __hash__(self):
        return hash((self.source.key, self.positions))

    def __repr__(self):
        shown = ", ".join(format_position(p) or "ε" for p in sorted(self.positions))
        return f"Multistep({self.source}, {{{shown}}})"

    def without(self, other: "Multistep") -> "Multistep":
        return Multistep(self.source, self.positions - other.positions, self.ars)

    def union(self, other: "Multistep") -> "Multistep":
        _check_coinitial(self.source, other.source)
        return Multistep(self.source, self.positions | other.positions, self.ars)


def empty(source, ars=None) -> Multistep:
    return Multistep(source, frozenset(), ars)


def all_steps(source, ars=None) -> Multistep:
    ars = ars or instance_for(source)
    return Multistep(source, frozenset(s.pos for s in ars.steps_of(source)), ars)


def _check_coinitial(t, u):
    if t is not u and t.key != u.key:
        raise NonCoinitial("arguments are not coinitial")


@dataclass(frozen=True)
class ReductionSequence:
    source: object
    steps: tuple = ()
    ars: ArsInstance = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.ars is None:
            object.__setattr__(self, "ars", instance_for(self.source))

    @property
    def target(self):
        if not self.steps:
            return self.source
        return self.ars.contract(self.steps[-1])

    def __len__(self):
        return len(self.steps)


def step_residuals(B: Multistep, a: Step) -> Multistep:
    """B⟦a⟧ for a single step ``a`` coinitial with ``B``."""
    ars = B.ars
    out = set()
    for b in B.steps:
        out.update(r.pos for r in ars.residuals(b, a))
    return Multistep(ars.contract(a), frozenset(out), ars)


def _innermost_leftmost(positions) -> Position:
    inner = [p for p in positions if not any(is_strict_prefix(p, q) for q in positions)]
    return min(inner)


def develop(A: Multistep, order: Sequence[Position] | None = None, fuse: int = DEFAULT_FUSE) -> ReductionSequence:
    """A complete development of ``A``.

    Without ``order`` the leftmost-innermost remaining residual is contracted
    each time.  A given ``order`` lists the positions to contract in turn and
    must yield a complete development.
    """
    ars = A.ars
    remaining = A
    steps = []
    todo = list(order) if order is not None else None
    while remaining.positions:
        if len(steps) >= fuse:
            raise FuseExceeded(f"development longer than {fuse} steps")
        if todo is None:
            pos = _innermost_leftmost(remaining.positions)
        else:
            if not todo:
                raise ValueError("given order stops before the development is complete")
            pos = tuple(todo.pop(0))
            if pos not in remaining.positions:
                raise NotAStep(f"{format_position(pos) or 'ε'} is not a remaining residual")
        a = Step(remaining.source, pos)
        steps.append(a)
        remaining = step_residuals(remaining, a)
    if todo:
        raise ValueError("given order continues after the development is complete")
    return ReductionSequence(A.source, tuple(steps), ars)


def developments(A: Multistep, fuse: int = DEFAULT_FUSE) -> Iterator[ReductionSequence]:
    """Every complete development of ``A``; raises FuseExceeded past ``fuse`` steps."""
    ars = A.ars

    def walk(rem: Multistep, prefix):
        if not rem.positions:
            yield ReductionSequence(A.source, tuple(prefix), ars)
            return
        if len(prefix) >= fuse:
            raise FuseExceeded(f"development longer than {fuse} steps")
        for a in rem.steps:
            prefix.append(a)
            yield from walk(step_residuals(rem, a), prefix)
            prefix.pop()

    yield from walk(A, [])


def target(A: Multistep):
    return develop(A).target


@dataclass(frozen=True)
class Multireduction:
    source: object
    elements: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        cur = self.source
        for A in self.elements:
            if A.source is not cur and A.source.key != cur.key:
                raise NonCoinitial("multireduction elements do not chain")
            cur = target(A)

    @classmethod
    def nil(cls, source) -> "Multireduction":
        return cls(source, ())

    @classmethod
    def chain(cls, source, position_sets: Iterable[Iterable[Position]]) -> "Multireduction":
        """Build from position sets, each read in the target of the previous element."""
        elems, cur = [], source
        for ps in position_sets:
            A = Multistep(cur, frozenset(tuple(p) for p in ps))
            elems.append(A)
            cur = target(A)
        return cls(source, tuple(elems))

    @property
    def target(self):
        return target(self.elements[-1]) if self.elements else self.source

    def __len__(self):
        return len(self.elements)

    def is_trivial(self) -> bool:
        return all(not A.positions for A in self.elements)

    def then(self, other: "Multireduction") -> "Multireduction":
        return Multireduction(self.source, self.elements + other.elements)


def _as_sequence_of_multisteps(A):
    if isinstance(A, Multistep):
        return [A]
    if isinstance(A, Multireduction):
        return list(A.elements)
    if isinstance(A, ReductionSequence):
        return [Multistep(s.source, frozenset([s.pos]), A.ars) for s in A.steps]
    if isinstance(A, Step):
        return [Multistep(A.source, frozenset([A.pos]))]
    raise TypeError(f"cannot take residuals after {type(A).__name__}")


def residuals_after(B, A) -> Multistep:
    """B⟦A⟧ where ``A`` is a step, multistep, reduction sequence or multireduction."""
    if isinstance(B, Step):
        B = Multistep(B.source, frozenset([B.pos]))
    elif not isinstance(B, Multistep):
        steps = list(B)
        if not steps:
            raise ValueError("an empty set of steps needs a source; pass a Multistep")
        B = Multistep.of(steps[0].source, steps)
    for C in _as_sequence_of_multisteps(A):
        _check_coinitial(B.source, C.source)
        for c in develop(C).steps:
            B = step_residuals(B, c)
    return B


def mred_residual(delta: Multireduction, B: Multistep) -> Multireduction:
    """Δ⟦B⟧: nil⟦B⟧ = nil and (A;Δ')⟦B⟧ = A⟦B⟧ ; Δ'⟦B⟦A⟧⟧."""
    _check_coinitial(delta.source, B.source)
    source = target(B)
    elems = []
    for A in delta.elements:
        elems.append(residuals_after(A, B))
        B = residuals_after(B, A)
    return Multireduction(source, tuple(elems))


@lru_cache(maxsize=1 << 18)
def depth(A: Multistep) -> int:
    """Length of the longest complete development."""
    if not A.positions:
        return 0
    return max(1 + depth(step_residuals(A, a)) for a in A.steps)


def uses(delta: Multireduction, B: Multistep) -> bool:
    _check_coinitial(delta.source, B.source)
    for A in delta.elements:
        if A.positions & B.positions:
            return True
        B = residuals_after(B, A)
    return False


def step_free_from(a: Step, B: Multistep) -> bool:
    """a is neither equal to nor embedded by a step of B."""
    ars = B.ars
    return all(a.pos != b.pos and not ars.embeds(b, a) for b in B.steps)


def step_embedded_by(a: Step, B: Multistep) -> bool:
    ars = B.ars
    return a.pos not in B.positions and any(ars.embeds(b, a) for b in B.steps)


def free_from(A: Multistep, B: Multistep) -> bool:
    _check_coinitial(A.source, B.source)
    return all(step_free_from(a, B) for a in A.steps)


def embedded_by(A: Multistep, B: Multistep) -> bool:
    _check_coinitial(A.source, B.source)
    return all(step_embedded_by(a, B) for a in A.steps)


def grips_set(A: Multistep, B: Multistep) -> bool:
    """A ≪ B: some step of A is gripped by some step of B."""
    _check_coinitial(A.source, B.source)
    ars = A.ars
    return any(ars.grips(a, b) for a in A.steps for b in B.steps)


def partition(A: Multistep, B: Multistep) -> tuple[Multistep, Multistep]:
    """Split A (disjoint from B) into the part free from B and the part embedded by B."""
    _check_coinitial(A.source, B.source)
    if A.positions & B.positions:
        raise ValueError("partition needs disjoint multisteps")
    free = frozenset(a.pos for a in A.steps if step_free_from(a, B))
    return Multistep(A.source, free, A.ars), Multistep(A.source, A.positions - free, A.ars)


def mred_free_from(delta: Multireduction, B: Multistep) -> bool:
    _check_coinitial(delta.source, B.source)
    for A in delta.elements:
        if not free_from(A, B):
            return False
        B = residuals_after(B, A)
    return True


@dataclass(frozen=True)
class Measure:
    depths: tuple

    def __len__(self):
        return len(self.depths)


def measure(delta: Multireduction) -> Measure:
    """Depths of the elements, last element first."""
    return Measure(tuple(depth(A) for A in reversed(delta.elements)))


def compare_lex(m1: Measure, m2: Measure) -> int:
    if len(m1.depths) != len(m2.depths):
        raise LengthMismatch("measures of different length are incomparable")
    if m1.depths == m2.depths:
        return 0
    return -1 if m1.depths < m2.depths else 1


def preserves(A: Multistep, a: Position) -> bool:
    """No step of A lies strictly above ``a``."""
    return not any(is_strict_prefix(p, a) for p in A.positions)


def project(delta: Multireduction, a: Position) -> Multireduction:
    """Restrict ``delta`` to the subterm at ``a``; steps beside ``a`` are dropped."""
    a = tuple(a)
    elems = []
    for A in delta.elements:
        if not preserves(A, a):
            raise NotPreserved(f"a step lies above {format_position(a) or 'ε'}")
        ars = A.ars
        sub = ars.subterm(A.source, a)
        ps = frozenset(p[len(a):] for p in A.positions if is_prefix(a, p))
        elems.append(Multistep(sub, ps, ars))
    sub_src = instance_for(delta.source).subterm(delta.source, a)
    return Multireduction(sub_src, tuple(elems))


# bounded oracles --------------------------------------------------------


def _state(t, positions):
    return (t.key, positions)


def normal_forms_within(source, step_bound: int, ars=None) -> list:
    """Normal forms reachable by at most ``step_bound`` single steps (breadth first)."""
    ars = ars or instance_for(source)
    seen = {source.key}
    frontier = [source]
    found = {}
    for level in range(step_bound + 1):
        nxt = []
        for t in frontier:
            steps = ars.steps_of(t)
            if not steps:
                found.setdefault(t.key, t)
                continue
            if level == step_bound:
                continue
            for a in steps:
                u = ars.contract(a)
                if u.key not in seen:
                    seen.add(u.key)
                    nxt.append(u)
        frontier = nxt
    return list(found.values())


def is_necessary_bounded(A: Multistep, step_bound: int = 12) -> bool:
    """Every step sequence of length <= step_bound from src(A) to a normal form uses A.

    Avoiding A in a multireduction is the same as avoiding it in some
    flattening into single steps, so single-step sequences suffice.
    """
    ars = A.ars
    if not normal_forms_within(A.source, step_bound, ars):
        raise NotNormalizing(f"no normal form within {step_bound} steps")
    best = {}
    frontier = [A]
    for level in range(step_bound + 1):
        nxt = []
        for R in frontier:
            steps = ars.steps_of(R.source)
            if not steps:
                return False
            if level == step_bound:
                continue
            for a in steps:
                if a.pos in R.positions:
                    continue
                R2 = step_residuals(R, a)
                k = _state(R2.source, R2.positions)
                if k not in best:
                    best[k] = level + 1
                    nxt.append(R2)
        frontier = nxt
    return True


def _subsets(steps):
    for r in range(1, len(steps) + 1):
        yield from combinations(steps, r)


def never_gripping_witness(B: Multistep, depth_bound: int = 4, size_bound: int = 40):
    """A multireduction after which some step is gripped by a residual of B, or None."""
    ars = B.ars
    start = Multireduction.nil(B.source)
    seen = {_state(B.source, B.positions)}
    queue = deque([(B, start, 0)])
    while queue:
        R, psi, level = queue.popleft()
        t = R.source
        steps = ars.steps_of(t)
        if R.positions and any(ars.grips(a, b) for a in steps for b in R.steps):
            return psi
        if level == depth_bound:
            continue
        for chosen in _subsets(steps):
            C = Multistep(t, frozenset(s.pos for s in chosen), ars)
            dev = develop(C)
            u = dev.target
            if ars.size(u) > size_bound:
                continue
            R2 = R
            for c in dev.steps:
                R2 = step_residuals(R2, c)
            k = _state(u, R2.positions)
            if k in seen:
                continue
            seen.add(k)
            queue.append((R2, Multireduction(psi.source, psi.elements + (C,)), level + 1))
    return None


def is_never_gripping_bounded(B: Multistep, depth_bound: int = 4, size_bound: int = 40) -> bool:
    return never_gripping_witness(B, depth_bound, size_bound) is None
