"""Types, terms, patterns, and the value grammar of the object language.

Terms are immutable trees. Evaluation is substitution based, so a value is a
closed term of restricted shape; see is_value. Numerals and list literals are
not separate node kinds, they are the usual constructor spines, and the
helpers here convert between them and Python ints/tuples.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Mapping, Optional, TypeAlias

from .errors import TypeMismatch, UnboundVariable, UndeclaredSymbol

if TYPE_CHECKING:
    from .signatures import Signature

__all__ = [
    "Data", "Arrow", "Ty", "NAT", "LIST",
    "Var", "Cons", "Func", "Lam", "App", "Term",
    "PVar", "PCons", "Pattern", "TyContext",
    "app", "spine", "free_vars", "symbols",
    "numeral", "numeral_value", "list_term", "list_value",
    "render_type", "render_term",
    "substitute", "match_pattern", "is_value", "typecheck",
]


# ---------------------------------------------------------------- types

@dataclass(frozen=True)
class Data:
    """A declared base datatype such as Nat or List."""

    name: str


@dataclass(frozen=True)
class Arrow:
    """Function type; arrows associate to the right."""

    dom: "Ty"
    cod: "Ty"


Ty: TypeAlias = "Data | Arrow"

NAT = Data("Nat")
LIST = Data("List")


# ---------------------------------------------------------------- terms

@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Cons:
    """An occurrence of a constructor symbol."""

    name: str


@dataclass(frozen=True)
class Func:
    """An occurrence of a defined function symbol."""

    name: str


@dataclass(frozen=True)
class Lam:
    var: str
    var_ty: "Ty"
    body: "Term"


@dataclass(frozen=True)
class App:
    fun: "Term"
    arg: "Term"


Term: TypeAlias = "Var | Cons | Func | Lam | App"

TyContext: TypeAlias = Mapping[str, "Ty"]


# ---------------------------------------------------------------- patterns

@dataclass(frozen=True)
class PVar:
    """Pattern variable; matches any value of the annotated type."""

    name: str
    ty: "Ty"


@dataclass(frozen=True)
class PCons:
    """Constructor pattern with sub-patterns for each argument."""

    cons: str
    args: tuple["Pattern", ...]


Pattern: TypeAlias = "PVar | PCons"


# ---------------------------------------------------------------- helpers

def app(fun: Term, *args: Term) -> Term:
    """Left-nested application of fun to args."""
    for a in args:
        fun = App(fun, a)
    return fun


def spine(t: Term) -> tuple[Term, tuple[Term, ...]]:
    """Decompose nested applications into (head, arguments)."""
    args: list[Term] = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fun
    return t, tuple(reversed(args))


def free_vars(t: Term) -> frozenset[str]:
    # iterative: evaluation substitutes values into terms, so results can be
    # far deeper than any source program (a numeral per arithmetic output)
    free: set[str] = set()
    todo: list[tuple[Term, frozenset[str]]] = [(t, frozenset())]
    while todo:
        s, bound = todo.pop()
        if isinstance(s, Var):
            if s.name not in bound:
                free.add(s.name)
        elif isinstance(s, Lam):
            todo.append((s.body, bound | {s.var}))
        elif isinstance(s, App):
            todo.append((s.fun, bound))
            todo.append((s.arg, bound))
    return frozenset(free)


def symbols(t: Term) -> frozenset[str]:
    """All constructor and function symbol names occurring in t."""
    if isinstance(t, (Cons, Func)):
        return frozenset((t.name,))
    if isinstance(t, Var):
        return frozenset()
    if isinstance(t, Lam):
        return symbols(t.body)
    return symbols(t.fun) | symbols(t.arg)


def numeral(n: int) -> Term:
    """The numeral for n: zero under n successors."""
    if n < 0:
        raise ValueError("numerals are naturals")
    t: Term = Cons("zero")
    for _ in range(n):
        t = App(Cons("succ"), t)
    return t


def numeral_value(t: Term) -> Optional[int]:
    """Decode a numeral, or None if t is not one."""
    n = 0
    while True:
        if isinstance(t, Cons) and t.name == "zero":
            return n
        if isinstance(t, App) and isinstance(t.fun, Cons) and t.fun.name == "succ":
            n += 1
            t = t.arg
            continue
        return None


def list_term(items: Iterable[int]) -> Term:
    """The list literal for items, extended element by element on the right."""
    t: Term = Cons("nil")
    for n in items:
        t = App(App(Cons("cons"), t), numeral(n))
    return t


def list_value(t: Term) -> Optional[tuple[int, ...]]:
    """Decode a literal list of numerals, or None if t is not one."""
    rev: list[int] = []
    while True:
        if isinstance(t, Cons) and t.name == "nil":
            return tuple(reversed(rev))
        if (
            isinstance(t, App)
            and isinstance(t.fun, App)
            and isinstance(t.fun.fun, Cons)
            and t.fun.fun.name == "cons"
        ):
            n = numeral_value(t.arg)
            if n is None:
                return None
            rev.append(n)
            t = t.fun.arg
            continue
        return None


# ---------------------------------------------------------------- rendering

def render_type(ty: Ty) -> str:
    if isinstance(ty, Data):
        return ty.name
    dom = render_type(ty.dom)
    if isinstance(ty.dom, Arrow):
        dom = f"({dom})"
    return f"{dom}->{render_type(ty.cod)}"


def render_term(t: Term) -> str:
    n = numeral_value(t)
    if n is not None:
        return str(n)
    items = list_value(t)
    if items is not None:
        return "[" + ",".join(str(i) for i in items) + "]"
    if isinstance(t, Var):
        return t.name
    if isinstance(t, (Cons, Func)):
        return t.name
    if isinstance(t, Lam):
        return f"fn {t.var}:{render_type(t.var_ty)} => {render_term(t.body)}"
    head, args = spine(t)
    return " ".join(_render_atom(s) for s in (head, *args))


def _render_atom(t: Term) -> str:
    s = render_term(t)
    needs_parens = isinstance(t, Lam) or (
        isinstance(t, App) and numeral_value(t) is None and list_value(t) is None
    )
    return f"({s})" if needs_parens else s


# ---------------------------------------------------------------- substitution

def substitute(t: Term, binding: Mapping[str, Term]) -> Term:
    """Replace free occurrences of the bound names.

    Replacement terms must be closed, so capture cannot occur; a shadowing
    binder just stops the walk for its own name. Names without occurrences
    are silently ignored.
    """
    if not binding:
        return t
    if isinstance(t, Var):
        return binding.get(t.name, t)
    if isinstance(t, (Cons, Func)):
        return t
    if isinstance(t, Lam):
        if t.var in binding:
            inner = {k: v for k, v in binding.items() if k != t.var}
            if not inner:
                return t
            return Lam(t.var, t.var_ty, substitute(t.body, inner))
        return Lam(t.var, t.var_ty, substitute(t.body, binding))
    return App(substitute(t.fun, binding), substitute(t.arg, binding))


# ---------------------------------------------------------------- matching

def match_pattern(
    patterns: tuple[Pattern, ...] | list[Pattern],
    values: tuple[Term, ...] | list[Term],
) -> Optional[dict[str, Term]]:
    """Match a vector of values against a vector of patterns.

    Returns the substitution on success, None on mismatch. Patterns are
    linear, so assignments never clash.
    """
    if len(patterns) != len(values):
        return None
    out: dict[str, Term] = {}
    for p, v in zip(patterns, values):
        if not _match_one(p, v, out):
            return None
    return out


def _match_one(p: Pattern, v: Term, out: dict[str, Term]) -> bool:
    if isinstance(p, PVar):
        out[p.name] = v
        return True
    head, args = spine(v)
    return (
        isinstance(head, Cons)
        and head.name == p.cons
        and len(args) == len(p.args)
        and all(_match_one(q, a, out) for q, a in zip(p.args, args))
    )


# ---------------------------------------------------------------- values

def is_value(sig: "Signature", t: Term) -> bool:
    """Decide the value grammar.

    Values are: constructors applied to at most their arity, function symbols
    applied to strictly fewer arguments than their arity (all arguments again
    values), and lambdas whose body has no free variable beyond the binder.
    """
    # iterative for the same reason as free_vars: values reached by
    # evaluation nest constructors as deep as the numbers they encode
    todo: list[Term] = [t]
    while todo:
        s = todo.pop()
        if isinstance(s, Var):
            return False
        if isinstance(s, Lam):
            if not free_vars(s.body) <= {s.var}:
                return False
            continue
        head, args = spine(s)
        if isinstance(head, Cons):
            if len(args) > sig.arity(head.name):
                return False
        elif isinstance(head, Func):
            if len(args) >= sig.arity(head.name):
                return False
        else:
            return False
        todo.extend(args)
    return True


# ---------------------------------------------------------------- typing

def _check_datatypes(sig: "Signature", ty: Ty) -> None:
    if isinstance(ty, Data):
        if ty.name not in sig.datatypes:
            raise UndeclaredSymbol(ty.name)
        return
    _check_datatypes(sig, ty.dom)
    _check_datatypes(sig, ty.cod)


def typecheck(sig: "Signature", ctx: TyContext, t: Term) -> Ty:
    """Type a term in context; raises on any violation."""
    if isinstance(t, Var):
        if t.name not in ctx:
            raise UnboundVariable(t.name)
        return ctx[t.name]
    if isinstance(t, Cons):
        return sig.cons_type(t.name)
    if isinstance(t, Func):
        return sig.func_type(t.name)
    if isinstance(t, Lam):
        _check_datatypes(sig, t.var_ty)
        inner = dict(ctx)
        inner[t.var] = t.var_ty
        return Arrow(t.var_ty, typecheck(sig, inner, t.body))
    fun_ty = typecheck(sig, ctx, t.fun)
    if not isinstance(fun_ty, Arrow):
        raise TypeMismatch("a function type", render_type(fun_ty), render_term(t))
    arg_ty = typecheck(sig, ctx, t.arg)
    if arg_ty != fun_ty.dom:
        raise TypeMismatch(render_type(fun_ty.dom), render_type(arg_ty), render_term(t))
    return fun_ty.cod
