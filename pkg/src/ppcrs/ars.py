"""The abstract rewriting interface shared by the concrete calculi.

An instance supplies the steps of an object, their targets, the residual
relation, embedding and gripping.  Steps are pairs of a source term and a
position; two steps are equal when their sources are alpha-equivalent and
their positions coincide.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import NonCoinitial
from .terms import Position, format_position


@dataclass(frozen=True, eq=False)
class Step:
    source: object
    pos: Position

    def __eq__(self, other):
        if self is other:
            return True
        return isinstance(other, Step) and self.pos == other.pos and self.source.key == other.source.key

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.source.key, self.pos))
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self):
        return f"Step({self.source}, {format_position(self.pos) or 'ε'})"


def coinitial(a: Step, b: Step) -> bool:
    return a.source is b.source or a.source.key == b.source.key


def require_coinitial(a: Step, b: Step):
    if not coinitial(a, b):
        raise NonCoinitial(f"{a!r} and {b!r} have different sources")


def sorted_steps(steps) -> list[Step]:
    return sorted(steps, key=lambda s: s.pos)


class ArsInstance:
    """Base class; subclasses implement the calculus-specific hooks.

    ``steps_of``, ``contract`` and ``residuals`` are memoised on the
    alpha-class of their arguments, which is what makes exhaustive checks
    affordable.
    """

    name = "abstract"

    def __init__(self, cache_size: int = 1 << 18):
        self.steps_of = lru_cache(maxsize=cache_size)(self._steps_of)
        self.contract = lru_cache(maxsize=cache_size)(self._contract)
        self._residuals_cached = lru_cache(maxsize=cache_size)(self._residuals)

    def _steps_of(self, obj) -> tuple[Step, ...]:
        raise NotImplementedError

    def _contract(self, a: Step):
        raise NotImplementedError

    def _residuals(self, b: Step, a: Step) -> frozenset:
        raise NotImplementedError

    def residuals(self, b: Step, a: Step) -> frozenset:
        """b⟦a⟧: the residuals of ``b`` after contracting ``a``."""
        require_coinitial(a, b)
        return self._residuals_cached(b, a)

    def embeds(self, a: Step, b: Step) -> bool:
        """a < b."""
        require_coinitial(a, b)
        return len(a.pos) < len(b.pos) and b.pos[: len(a.pos)] == a.pos

    def grips(self, a: Step, b: Step) -> bool:
        """a ≪ b: contracting ``a`` may substitute into ``b``."""
        raise NotImplementedError

    def target(self, a: Step):
        return self.contract(a)

    def is_normal(self, obj) -> bool:
        return not self.steps_of(obj)

    def size(self, obj) -> int:
        raise NotImplementedError

    def show(self, obj) -> str:
        return str(obj)

    def parse(self, text: str):
        raise NotImplementedError

    def subterm(self, obj, pos: Position):
        raise NotImplementedError

    def clear_caches(self):
        self.steps_of.cache_clear()
        self.contract.cache_clear()
        self._residuals_cached.cache_clear()


_REGISTRY: list[tuple[type, ArsInstance]] = []


def register(term_type: type, inst: ArsInstance):
    _REGISTRY.append((term_type, inst))


def instance_for(obj) -> ArsInstance:
    """The calculus a term belongs to, chosen by its node type."""
    for cls, inst in _REGISTRY:
        if isinstance(obj, cls):
            return inst
    raise TypeError(f"no rewriting instance registered for {type(obj).__name__}")
