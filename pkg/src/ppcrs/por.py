"""Lambda calculus with parallel-or.

    t ::= x | \\x. t | t t | or(t, t) | tt

Rules are beta, ``or(t, tt) -> tt`` and ``or(tt, t) -> tt``.  The two or-rules
overlap on ``or(tt, tt)`` with the same result, which is treated as a single
step.  Positions: a lambda has its body at 1, applications and ``or`` their
two children at 1 and 2.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import ars
from .ars import ArsInstance, Step, require_coinitial
from .errors import InvalidPosition, NotAStep
from .syntax import Tokens
from .terms import Node, Position, format_position, fresh_name, is_prefix


class PorTerm(Node):
    def _compute_key(self):
        return _debruijn(self, {}, 0)

    def __str__(self):
        return show(self)


@dataclass(frozen=True, eq=False)
class PVar(PorTerm):
    name: str

    def _parts(self):
        return (self.name,)


@dataclass(frozen=True, eq=False)
class Lam(PorTerm):
    var: str
    body: PorTerm

    def _parts(self):
        return (self.var, self.body)


@dataclass(frozen=True, eq=False)
class PApp(PorTerm):
    fun: PorTerm
    arg: PorTerm

    def _parts(self):
        return (self.fun, self.arg)


@dataclass(frozen=True, eq=False)
class Or(PorTerm):
    left: PorTerm
    right: PorTerm

    def _parts(self):
        return (self.left, self.right)


@dataclass(frozen=True, eq=False)
class TT(PorTerm):
    def _parts(self):
        return ()


TRUE = TT()


def _debruijn(t, env, depth):
    if isinstance(t, PVar):
        return ("V", depth - env[t.name]) if t.name in env else ("v", t.name)
    if isinstance(t, Lam):
        return ("\\", _debruijn(t.body, {**env, t.var: depth + 1}, depth + 1))
    if isinstance(t, PApp):
        return ("@", _debruijn(t.fun, env, depth), _debruijn(t.arg, env, depth))
    if isinstance(t, Or):
        return ("or", _debruijn(t.left, env, depth), _debruijn(t.right, env, depth))
    return ("tt",)


def children(t: PorTerm) -> tuple:
    if isinstance(t, Lam):
        return (t.body,)
    if isinstance(t, PApp):
        return (t.fun, t.arg)
    if isinstance(t, Or):
        return (t.left, t.right)
    return ()


def iter_positions(t: PorTerm, prefix: Position = ()):
    stack = [(prefix, t)]
    while stack:
        pos, s = stack.pop()
        yield pos, s
        kids = children(s)
        for i in range(len(kids), 0, -1):
            stack.append((pos + (i,), kids[i - 1]))


def subterm_at(t: PorTerm, a: Position) -> PorTerm:
    for i in a:
        kids = children(t)
        if i not in (1, 2) or i > len(kids):
            raise InvalidPosition(f"position {format_position(a)} not in term")
        t = kids[i - 1]
    return t


def replace_at(t: PorTerm, a: Position, s: PorTerm) -> PorTerm:
    if not a:
        return s
    i, rest = a[0], a[1:]
    if isinstance(t, Lam) and i == 1:
        return Lam(t.var, replace_at(t.body, rest, s))
    if isinstance(t, PApp) and i in (1, 2):
        return PApp(replace_at(t.fun, rest, s), t.arg) if i == 1 else PApp(t.fun, replace_at(t.arg, rest, s))
    if isinstance(t, Or) and i in (1, 2):
        return Or(replace_at(t.left, rest, s), t.right) if i == 1 else Or(t.left, replace_at(t.right, rest, s))
    raise InvalidPosition(f"position {format_position(a)} not in term")


def size(t: PorTerm) -> int:
    return sum(1 for _ in iter_positions(t))


def free_variables(t: PorTerm) -> set[str]:
    if isinstance(t, PVar):
        return {t.name}
    if isinstance(t, Lam):
        return free_variables(t.body) - {t.var}
    out = set()
    for c in children(t):
        out |= free_variables(c)
    return out


def all_names(t: PorTerm) -> set[str]:
    out = set()
    for _, s in iter_positions(t):
        if isinstance(s, PVar):
            out.add(s.name)
        elif isinstance(s, Lam):
            out.add(s.var)
    return out


def free_occurrences(t: PorTerm, x: str, prefix: Position = ()) -> list[Position]:
    if isinstance(t, PVar):
        return [prefix] if t.name == x else []
    if isinstance(t, Lam):
        return [] if t.var == x else free_occurrences(t.body, x, prefix + (1,))
    out = []
    for i, c in enumerate(children(t), 1):
        out += free_occurrences(c, x, prefix + (i,))
    return out


def substitute(t: PorTerm, x: str, u: PorTerm) -> PorTerm:
    """t[x := u], renaming binders that would capture free variables of u."""
    return _subst(t, x, u, free_variables(u))


def _subst(t, x, u, fvu):
    if isinstance(t, PVar):
        return u if t.name == x else t
    if isinstance(t, TT):
        return t
    if isinstance(t, PApp):
        return PApp(_subst(t.fun, x, u, fvu), _subst(t.arg, x, u, fvu))
    if isinstance(t, Or):
        return Or(_subst(t.left, x, u, fvu), _subst(t.right, x, u, fvu))
    if t.var == x:
        return t
    if t.var in fvu:
        y = fresh_name(t.var, fvu | all_names(t) | {x})
        t = Lam(y, _subst(t.body, t.var, PVar(y), {y}))
    return Lam(t.var, _subst(t.body, x, u, fvu))


def is_redex(t: PorTerm) -> bool:
    if isinstance(t, PApp):
        return isinstance(t.fun, Lam)
    if isinstance(t, Or):
        return isinstance(t.left, TT) or isinstance(t.right, TT)
    return False


def is_normal(t: PorTerm) -> bool:
    return not any(is_redex(s) for _, s in iter_positions(t))


class LambdaOr(ArsInstance):
    name = "por"

    def _steps_of(self, t):
        return tuple(Step(t, p) for p in sorted(p for p, s in iter_positions(t) if is_redex(s)))

    def _contract(self, a):
        s = subterm_at(a.source, a.pos)
        if not is_redex(s):
            raise NotAStep(f"no redex at {format_position(a.pos) or 'ε'}")
        if isinstance(s, Or):
            return replace_at(a.source, a.pos, TRUE)
        return replace_at(a.source, a.pos, substitute(s.fun.body, s.fun.var, s.arg))

    def _residuals(self, b, a):
        if b.pos == a.pos:
            return frozenset()
        tgt = self.contract(a)
        if not is_prefix(a.pos, b.pos):
            return frozenset([Step(tgt, b.pos)])
        s = subterm_at(a.source, a.pos)
        if isinstance(s, Or):
            return frozenset()
        rel = b.pos[len(a.pos):]
        if rel[:2] == (1, 1):
            return frozenset([Step(tgt, a.pos + rel[2:])])
        if rel[0] == 2:
            occ = free_occurrences(s.fun.body, s.fun.var)
            return frozenset(Step(tgt, a.pos + k + rel[1:]) for k in occ)
        return frozenset()

    def grips(self, a, b):
        require_coinitial(a, b)
        s = subterm_at(a.source, a.pos)
        if not (isinstance(s, PApp) and isinstance(s.fun, Lam)):
            return False
        inside = a.pos + (1, 1)
        if not is_prefix(inside, b.pos):
            return False
        n = b.pos[len(inside):]
        return any(is_prefix(n, k) for k in free_occurrences(s.fun.body, s.fun.var))

    def size(self, t):
        return size(t)

    def subterm(self, t, pos):
        return subterm_at(t, pos)

    def parse(self, text):
        return parse_por(text)

    def is_normal(self, t):
        return is_normal(t)


POR_ARS = LambdaOr()
ars.register(PorTerm, POR_ARS)


def por_redexes(t: PorTerm) -> tuple[Step, ...]:
    return POR_ARS.steps_of(t)


def por_contract(a: Step) -> PorTerm:
    return POR_ARS.contract(a)


def por_residuals(b: Step, a: Step) -> frozenset:
    return POR_ARS.residuals(b, a)


def por_embeds(a: Step, b: Step) -> bool:
    return POR_ARS.embeds(a, b)


def por_grips(a: Step, b: Step) -> bool:
    return POR_ARS.grips(a, b)


def por_s_pi(t: PorTerm) -> frozenset:
    """Positions selected by the parallel-or strategy; clauses tried in order."""
    if isinstance(t, PApp) and isinstance(t.fun, Lam):
        return frozenset([()])
    if isinstance(t, Or) and isinstance(t.left, TT):
        return frozenset([()])
    if isinstance(t, Or) and isinstance(t.right, TT):
        return frozenset([()])
    if isinstance(t, PApp):
        if not is_normal(t.fun):
            return _under(1, por_s_pi(t.fun))
        return _under(2, por_s_pi(t.arg))
    if isinstance(t, Lam):
        return _under(1, por_s_pi(t.body))
    if isinstance(t, Or):
        return _under(1, por_s_pi(t.left)) | _under(2, por_s_pi(t.right))
    return frozenset()


def _under(i, ps):
    return frozenset((i,) + p for p in ps)


def por_strategy(t: PorTerm):
    from .multistep import Multistep

    return Multistep(t, por_s_pi(t), POR_ARS)


# syntax -----------------------------------------------------------------


def parse_por(text: str) -> PorTerm:
    toks = Tokens(text)
    t = _term(toks)
    toks.finish()
    return t


def _starts_atom(toks):
    kind, v, _ = toks.peek()
    return kind == "id" or (kind == "sym" and v == "(")


def _term(toks):
    items = []
    while _starts_atom(toks):
        items.append(_atom(toks))
    if toks.at("\\"):
        toks.next()
        x = toks.ident()
        toks.expect(".")
        items.append(Lam(x, _term(toks)))
    if not items:
        toks.fail("expected a term")
    t = items[0]
    for u in items[1:]:
        t = PApp(t, u)
    return t


def _atom(toks):
    kind, v, off = toks.next()
    if kind == "id":
        if v == "tt":
            return TRUE
        if v == "or" and toks.at("("):
            toks.next()
            left = _term(toks)
            toks.expect(",")
            right = _term(toks)
            toks.expect(")")
            return Or(left, right)
        return PVar(v)
    if v == "(":
        t = _term(toks)
        toks.expect(")")
        return t
    toks.fail(f"unexpected {v!r}", off)


def show(t: PorTerm) -> str:
    if isinstance(t, PVar):
        return t.name
    if isinstance(t, TT):
        return "tt"
    if isinstance(t, Or):
        return f"or({show(t.left)},{show(t.right)})"
    if isinstance(t, Lam):
        return f"\\{t.var}. {show(t.body)}"
    fun = f"({show(t.fun)})" if isinstance(t.fun, Lam) else show(t.fun)
    arg = f"({show(t.arg)})" if isinstance(t.arg, (PApp, Lam)) else show(t.arg)
    return f"{fun} {arg}"
