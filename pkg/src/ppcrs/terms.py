"""Pure pattern calculus terms.

A term is a variable ``x``, a matchable ``^x``, an application ``t u`` or an
abstraction ``\\[x, y] p . s`` whose binder set binds matchables in the
pattern ``p`` and variables in the body ``s``.  Free matchables play the role
of constructors.

Positions are tuples over {1, 2}: an application has its function at 1 and
argument at 2, an abstraction its pattern at 1 and body at 2.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Mapping

from .errors import InvalidPosition

Position = tuple[int, ...]
EPSILON: Position = ()


class Node:
    """Cached structural hashing plus an alpha-canonical ``key``."""

    def _parts(self) -> tuple:
        raise NotImplementedError

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((type(self).__name__,) + self._parts())
            object.__setattr__(self, "_hash", h)
        return h

    def __eq__(self, other):
        if self is other:
            return True
        if type(self) is not type(other) or hash(self) != hash(other):
            return False
        return self._parts() == other._parts()

    @property
    def key(self):
        """A hashable value shared exactly by the alpha-equivalent terms."""
        k = self.__dict__.get("_key")
        if k is None:
            k = self._compute_key()
            object.__setattr__(self, "_key", k)
        return k

    def _compute_key(self):
        raise NotImplementedError


class Term(Node):
    def _compute_key(self):
        return _canonical(self, {}, {}, [0])

    def __str__(self):
        from .syntax import show

        return show(self)


@dataclass(frozen=True, eq=False)
class Var(Term):
    name: str

    def _parts(self):
        return (self.name,)


@dataclass(frozen=True, eq=False)
class Mat(Term):
    name: str

    def _parts(self):
        return (self.name,)


@dataclass(frozen=True, eq=False)
class App(Term):
    fun: Term
    arg: Term

    def _parts(self):
        return (self.fun, self.arg)


@dataclass(frozen=True, eq=False)
class Abs(Term):
    binders: frozenset
    pattern: Term
    body: Term

    def __post_init__(self):
        if not isinstance(self.binders, frozenset):
            object.__setattr__(self, "binders", frozenset(self.binders))

    def _parts(self):
        return (self.binders, self.pattern, self.body)


def lam(x: str, body: Term) -> Abs:
    """The lambda-calculus abstraction, encoded as ``\\[x] ^x . body``."""
    return Abs(frozenset([x]), Mat(x), body)


def apps(head: Term, *args: Term) -> Term:
    for a in args:
        head = App(head, a)
    return head


IDENTITY = lam("x", Var("x"))


# positions --------------------------------------------------------------

def children(t: Term) -> tuple[Term, ...]:
    if isinstance(t, App):
        return (t.fun, t.arg)
    if isinstance(t, Abs):
        return (t.pattern, t.body)
    return ()


def iter_positions(t: Term, prefix: Position = EPSILON) -> Iterator[tuple[Position, Term]]:
    """Preorder walk yielding ``(position, subterm)`` pairs."""
    stack = [(prefix, t)]
    while stack:
        pos, s = stack.pop()
        yield pos, s
        kids = children(s)
        for i in range(len(kids), 0, -1):
            stack.append((pos + (i,), kids[i - 1]))


def positions(t: Term) -> set[Position]:
    return {p for p, _ in iter_positions(t)}


def subterm_at(t: Term, a: Position) -> Term:
    s = t
    for i in a:
        kids = children(s)
        if i not in (1, 2) or i > len(kids):
            raise InvalidPosition(f"position {format_position(a)} not in term")
        s = kids[i - 1]
    return s


def replace_at(t: Term, a: Position, s: Term) -> Term:
    """Graft ``s`` at ``a``.  No renaming happens, so free symbols of ``s`` may be captured."""
    if not a:
        return s
    i, rest = a[0], a[1:]
    if isinstance(t, App):
        if i == 1:
            return App(replace_at(t.fun, rest, s), t.arg)
        if i == 2:
            return App(t.fun, replace_at(t.arg, rest, s))
    elif isinstance(t, Abs):
        if i == 1:
            return Abs(t.binders, replace_at(t.pattern, rest, s), t.body)
        if i == 2:
            return Abs(t.binders, t.pattern, replace_at(t.body, rest, s))
    raise InvalidPosition(f"position {format_position(a)} not in term")


def is_prefix(a: Position, b: Position) -> bool:
    """a <= b in the prefix order."""
    return len(a) <= len(b) and b[: len(a)] == a


def is_strict_prefix(a: Position, b: Position) -> bool:
    return len(a) < len(b) and b[: len(a)] == a


def disjoint(a: Position, b: Position) -> bool:
    return not is_prefix(a, b) and not is_prefix(b, a)


def format_position(a: Position) -> str:
    return "".join(str(i) for i in a)


def parse_position(text: str) -> Position:
    text = text.strip()
    if text in ("", "e", "ε"):
        return EPSILON
    if not set(text) <= {"1", "2"}:
        raise InvalidPosition(f"bad position {text!r}")
    return tuple(int(c) for c in text)


def size(t: Term) -> int:
    return sum(1 for _ in iter_positions(t))


# free symbols -----------------------------------------------------------

def free_variables(t: Term) -> set[str]:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, Mat):
        return set()
    if isinstance(t, App):
        return free_variables(t.fun) | free_variables(t.arg)
    return (free_variables(t.body) - t.binders) | free_variables(t.pattern)


def free_matchables(t: Term) -> set[str]:
    if isinstance(t, Mat):
        return {t.name}
    if isinstance(t, Var):
        return set()
    if isinstance(t, App):
        return free_matchables(t.fun) | free_matchables(t.arg)
    return (free_matchables(t.pattern) - t.binders) | free_matchables(t.body)


def symbols(t: Term) -> set[str]:
    """Every symbol occurring anywhere, binders included."""
    out = set()
    for _, s in iter_positions(t):
        if isinstance(s, (Var, Mat)):
            out.add(s.name)
        elif isinstance(s, Abs):
            out |= s.binders
    return out


def pattern_occurrences(t: Term, names) -> list[tuple[Position, str]]:
    """Positions of matchables of ``t`` named in ``names`` that are free in ``t``."""
    out = []
    _mat_occ(t, frozenset(names), (), out)
    return out


def _mat_occ(t, names, pos, out):
    if isinstance(t, Mat):
        if t.name in names:
            out.append((pos, t.name))
    elif isinstance(t, App):
        _mat_occ(t.fun, names, pos + (1,), out)
        _mat_occ(t.arg, names, pos + (2,), out)
    elif isinstance(t, Abs):
        _mat_occ(t.pattern, names - t.binders, pos + (1,), out)
        _mat_occ(t.body, names, pos + (2,), out)


def body_occurrences(t: Term, names) -> list[tuple[Position, str]]:
    """Positions of variables of ``t`` named in ``names`` that are free in ``t``."""
    out = []
    _var_occ(t, frozenset(names), (), out)
    return out


def _var_occ(t, names, pos, out):
    if isinstance(t, Var):
        if t.name in names:
            out.append((pos, t.name))
    elif isinstance(t, App):
        _var_occ(t.fun, names, pos + (1,), out)
        _var_occ(t.arg, names, pos + (2,), out)
    elif isinstance(t, Abs):
        _var_occ(t.pattern, names, pos + (1,), out)
        _var_occ(t.body, names - t.binders, pos + (2,), out)


def binder_order(t: Abs) -> list[str]:
    """Binders of ``t`` ordered by first bound occurrence (pattern, then body).

    Binders that occur nowhere come last, sorted by name.
    """
    seen: list[str] = []
    for _, x in pattern_occurrences(t.pattern, t.binders) + body_occurrences(t.body, t.binders):
        if x not in seen:
            seen.append(x)
    return seen + sorted(t.binders - set(seen))


# alpha-equivalence ------------------------------------------------------

def _canonical(t, menv, venv, counter):
    if isinstance(t, Var):
        i = venv.get(t.name)
        return ("v", t.name) if i is None else ("V", i)
    if isinstance(t, Mat):
        i = menv.get(t.name)
        return ("m", t.name) if i is None else ("M", i)
    if isinstance(t, App):
        return ("@", _canonical(t.fun, menv, venv, counter), _canonical(t.arg, menv, venv, counter))
    order = binder_order(t)
    fresh = {}
    for x in order:
        fresh[x] = counter[0]
        counter[0] += 1
    kp = _canonical(t.pattern, {**menv, **fresh}, venv, counter)
    ks = _canonical(t.body, menv, {**venv, **fresh}, counter)
    return ("\\", len(order), kp, ks)


def alpha_equivalent(t: Term, u: Term) -> bool:
    """Simultaneous traversal keeping a pair of renaming maps per namespace."""
    return _alpha(t, u, {}, {}, {}, {})


def _alpha(t, u, m1, m2, v1, v2):
    # m1/m2 map bound matchable names to a shared binder id, v1/v2 likewise for variables
    if type(t) is not type(u):
        return False
    if isinstance(t, Var):
        return _same_symbol(t.name, u.name, v1, v2)
    if isinstance(t, Mat):
        return _same_symbol(t.name, u.name, m1, m2)
    if isinstance(t, App):
        return _alpha(t.fun, u.fun, m1, m2, v1, v2) and _alpha(t.arg, u.arg, m1, m2, v1, v2)
    if len(t.binders) != len(u.binders):
        return False
    ids = [object() for _ in t.binders]
    left = dict(zip(binder_order(t), ids))
    right = dict(zip(binder_order(u), ids))
    return _alpha(t.pattern, u.pattern, {**m1, **left}, {**m2, **right}, v1, v2) and _alpha(
        t.body, u.body, m1, m2, {**v1, **left}, {**v2, **right}
    )


def _same_symbol(x, y, env1, env2):
    b1, b2 = env1.get(x), env2.get(y)
    if b1 is None and b2 is None:
        return x == y
    return b1 is b2


# substitution -----------------------------------------------------------

_SUFFIX = re.compile(r"\d+$")


def fresh_name(base: str, avoid) -> str:
    """``base`` with the least numeric suffix that is not in ``avoid``."""
    stem = _SUFFIX.sub("", base) or base
    n = 1
    while f"{stem}{n}" in avoid:
        n += 1
    return f"{stem}{n}"


def substitution_symbols(sigma: Mapping[str, Term]) -> set[str]:
    out = set(sigma)
    for u in sigma.values():
        out |= free_variables(u) | free_matchables(u)
    return out


def apply_substitution(sigma: Mapping[str, Term], t: Term) -> Term:
    """Capture-avoiding substitution for variables; matchables are untouched."""
    if not sigma:
        return t
    return _subst(dict(sigma), substitution_symbols(sigma), t)


def _subst(sigma, avoid, t):
    if isinstance(t, Var):
        return sigma.get(t.name, t)
    if isinstance(t, Mat):
        return t
    if isinstance(t, App):
        return App(_subst(sigma, avoid, t.fun), _subst(sigma, avoid, t.arg))
    clash = t.binders & avoid
    if clash:
        t = rename_binders(t, clash, avoid)
    return Abs(t.binders, _subst(sigma, avoid, t.pattern), _subst(sigma, avoid, t.body))


def rename_binders(t: Abs, names, avoid) -> Abs:
    """Rename the binders ``names`` of ``t`` to fresh symbols outside ``avoid``."""
    taken = set(avoid) | symbols(t)
    mapping = {}
    for x in sorted(names):
        y = fresh_name(x, taken)
        taken.add(y)
        mapping[x] = y
    binders = frozenset(mapping.get(x, x) for x in t.binders)
    return Abs(binders, _rename_mat(t.pattern, mapping), _rename_var(t.body, mapping))


def _rename_mat(t, mapping):
    if not mapping:
        return t
    if isinstance(t, Mat):
        return Mat(mapping.get(t.name, t.name))
    if isinstance(t, Var):
        return t
    if isinstance(t, App):
        return App(_rename_mat(t.fun, mapping), _rename_mat(t.arg, mapping))
    inner = {k: v for k, v in mapping.items() if k not in t.binders}
    return Abs(t.binders, _rename_mat(t.pattern, inner), _rename_mat(t.body, mapping))


def _rename_var(t, mapping):
    if not mapping:
        return t
    if isinstance(t, Var):
        return Var(mapping.get(t.name, t.name))
    if isinstance(t, Mat):
        return t
    if isinstance(t, App):
        return App(_rename_var(t.fun, mapping), _rename_var(t.arg, mapping))
    inner = {k: v for k, v in mapping.items() if k not in t.binders}
    return Abs(t.binders, _rename_var(t.pattern, mapping), _rename_var(t.body, inner))


# classification ---------------------------------------------------------

class Kind(Enum):
    DATA_STRUCTURE = "data-structure"
    ABSTRACTION = "abstraction"
    MATCHABLE_FORM = "matchable-form"
    NEITHER = "neither"


def head(t: Term) -> Term:
    while isinstance(t, App):
        t = t.fun
    return t


def is_data_structure(t: Term) -> bool:
    return isinstance(head(t), Mat)


def is_matchable_form(t: Term) -> bool:
    return isinstance(t, Abs) or is_data_structure(t)


def classify(t: Term) -> Kind:
    """The most specific class; both data structures and abstractions are matchable forms."""
    if isinstance(t, Abs):
        return Kind.ABSTRACTION
    if is_data_structure(t):
        return Kind.DATA_STRUCTURE
    return Kind.NEITHER


def is_lambda_fragment(t: Term) -> bool:
    """Every abstraction has the shape ``\\[x] ^x . s``."""
    for _, s in iter_positions(t):
        if isinstance(s, Abs):
            if len(s.binders) != 1 or s.pattern != Mat(next(iter(s.binders))):
                return False
    return True


_TAG = {Var: 0, Mat: 1, App: 2, Abs: 3}


def order_key(t: Term):
    """Total order on terms: constructor tag, then children, then symbol names."""
    if isinstance(t, (Var, Mat)):
        return (_TAG[type(t)], t.name)
    if isinstance(t, App):
        return (2, order_key(t.fun), order_key(t.arg))
    return (3, order_key(t.pattern), order_key(t.body), tuple(sorted(t.binders)))
