"""Semantic domains, the metalanguage interpreter, and the plain semantics.

The metalanguage is interpreted over SemVal: naturals, finite numeral
sequences, pairs, host functions, and effect annotations drawn from one
EffectTriple (an empty effect, a one-step extension, and a three-way
combination). Swapping the triple and the symbol interpretations changes
the analysis without touching the interpreter.

pure_denote is the effect-free reference semantics used as an independent
value oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional, TypeAlias

from .errors import (
    FuelExhausted,
    MetaTypeMismatch,
    MissingInterpretation,
    ShapeMismatch,
)
from . import meta as M
from .signatures import OracleSpec
from .syntax import App, Cons, Func, Lam, Term, Var

__all__ = [
    "EffectTriple", "COST", "QUERIES", "TRIVIAL",
    "Eff", "Base", "BaseList", "SPair", "SFun", "SemVal", "SemEnv",
    "spair", "as_eff", "as_base", "as_list", "as_pair", "as_fun", "pair_parts",
    "render_semval",
    "Instantiation", "denote", "compose", "pure_denote",
]


# ---------------------------------------------------------------- effects

@dataclass(frozen=True)
class EffectTriple:
    """One choice of effect algebra: carrier, empty, step, combination."""

    carrier: str
    eps: object
    inc: Callable[[object], object]
    com: Callable[[object, object, object], object]


COST = EffectTriple("Nat", 0, lambda c: c + 1, lambda a, b, c: a + b + c)
QUERIES = EffectTriple("NatList", (), lambda c: c, lambda a, b, c: a + b + c)
TRIVIAL = EffectTriple("Unit", None, lambda c: None, lambda a, b, c: None)


# ---------------------------------------------------------------- values

@dataclass(frozen=True)
class Eff:
    """An effect annotation, an element of the active carrier."""

    amount: object


@dataclass(frozen=True)
class Base:
    """A natural number (or a size, under size-based analyses)."""

    value: int


@dataclass(frozen=True)
class BaseList:
    """A finite sequence of naturals."""

    items: tuple[int, ...]


@dataclass(frozen=True)
class SPair:
    fst: "SemVal"
    snd: "SemVal"


@dataclass(frozen=True, eq=False)
class SFun:
    """A host function on semantic values. Must be pure."""

    fn: Callable[["SemVal"], "SemVal"]


SemVal: TypeAlias = "Eff | Base | BaseList | SPair | SFun"
SemEnv: TypeAlias = Mapping[str, "SemVal"]


def spair(amount: object, value: SemVal) -> SPair:
    """Pair an effect amount with a value."""
    return SPair(Eff(amount), value)


def as_eff(v: SemVal) -> Eff:
    if not isinstance(v, Eff):
        raise ShapeMismatch("effect", v)
    return v


def as_base(v: SemVal) -> Base:
    if not isinstance(v, Base):
        raise ShapeMismatch("natural", v)
    return v


def as_list(v: SemVal) -> BaseList:
    if not isinstance(v, BaseList):
        raise ShapeMismatch("sequence", v)
    return v


def as_pair(v: SemVal) -> SPair:
    if not isinstance(v, SPair):
        raise ShapeMismatch("pair", v)
    return v


def as_fun(v: SemVal) -> SFun:
    if not isinstance(v, SFun):
        raise ShapeMismatch("function", v)
    return v


def pair_parts(v: SemVal) -> tuple[object, SemVal]:
    """Split an effect-value pair into (amount, value)."""
    p = as_pair(v)
    return as_eff(p.fst).amount, p.snd


def render_semval(v: SemVal) -> object:
    """JSON-friendly view: naturals and sequences verbatim, the rest opaque."""
    if isinstance(v, Base):
        return v.value
    if isinstance(v, BaseList):
        return list(v.items)
    if isinstance(v, Eff):
        return list(v.amount) if isinstance(v.amount, tuple) else v.amount
    if isinstance(v, SPair):
        return [render_semval(v.fst), render_semval(v.snd)]
    return "<function>"


# ---------------------------------------------------------------- instantiation

@dataclass(frozen=True)
class Instantiation:
    """An analysis: one effect algebra plus symbol interpretations.

    domains documents which SemVal shape inhabits each lifted datatype.
    func_families interprets every member of an indexed family at once,
    keyed by the family head (e.g. "rec" covers rec[Nat], rec[Nat->Nat], ...).
    """

    name: str
    effect: EffectTriple
    domains: Mapping[str, str]
    cons_interp: Mapping[str, SemVal]
    func_interp: Mapping[str, SemVal]
    func_families: Mapping[str, SemVal] = field(default_factory=dict)

    def cons(self, symbol: str) -> SemVal:
        try:
            return self.cons_interp[symbol]
        except KeyError:
            raise MissingInterpretation(symbol, f"not in {self.name}") from None

    def func(self, symbol: str) -> SemVal:
        hit = self.func_interp.get(symbol)
        if hit is not None:
            return hit
        head, bracket, _ = symbol.partition("[")
        if bracket and head in self.func_families:
            return self.func_families[head]
        raise MissingInterpretation(symbol, f"not in {self.name}")


# ---------------------------------------------------------------- interpreter

def denote(inst: Instantiation, env: SemEnv, mt: M.MetaTerm) -> SemVal:
    """Interpret a metalanguage term under an instantiation.

    The translation emits shared subterms; they are evaluated once per
    environment (sound because SemVal functions are pure), which keeps the
    walk linear in the size of the DAG.
    """
    memo: dict[tuple[int, int], tuple[object, object, SemVal]] = {}
    eff = inst.effect

    def go(node: M.MetaTerm, scope: SemEnv) -> SemVal:
        key = (id(node), id(scope))
        hit = memo.get(key)
        if hit is not None and hit[0] is node and hit[1] is scope:
            return hit[2]
        val = step(node, scope)
        memo[key] = (node, scope, val)
        return val

    def step(node: M.MetaTerm, scope: SemEnv) -> SemVal:
        if isinstance(node, M.Iota):
            return Eff(eff.eps)
        if isinstance(node, M.Inc):
            return Eff(eff.inc(as_eff(go(node.body, scope)).amount))
        if isinstance(node, M.Com):
            a = as_eff(go(node.first, scope)).amount
            b = as_eff(go(node.second, scope)).amount
            c = as_eff(go(node.third, scope)).amount
            return Eff(eff.com(a, b, c))
        if isinstance(node, M.MVar):
            try:
                return scope[node.name]
            except KeyError:
                raise MetaTypeMismatch(
                    f"unbound meta variable {node.name!r} at interpretation time"
                ) from None
        if isinstance(node, M.BCons):
            return inst.cons(node.symbol)
        if isinstance(node, M.BFunc):
            return inst.func(node.symbol)
        if isinstance(node, M.MLam):
            body, var = node.body, node.var
            return SFun(lambda a: go(body, {**scope, var: a}))
        if isinstance(node, M.MApp):
            fn = as_fun(go(node.fun, scope))
            return fn.fn(go(node.arg, scope))
        if isinstance(node, M.MPair):
            return SPair(go(node.left, scope), go(node.right, scope))
        if isinstance(node, M.ProjL):
            return as_pair(go(node.pair, scope)).fst
        if isinstance(node, M.ProjR):
            return as_pair(go(node.pair, scope)).snd
        raise MetaTypeMismatch(f"unknown metalanguage node {node!r}")

    return go(mt, dict(env))


def compose(inst: Instantiation, f: SemVal, a: SemVal) -> SemVal:
    """Apply an effect-paired function to an effect-paired argument.

    Combines the function's effect, the argument's effect, and the call's
    effect exactly the way a translated application does.
    """
    c_fun, fun = pair_parts(f)
    c_arg, arg = pair_parts(a)
    c_call, out = pair_parts(as_fun(fun).fn(arg))
    return spair(inst.effect.com(c_fun, c_arg, c_call), out)


# ---------------------------------------------------------------- plain semantics

# depth guard for the host-level search recursion; generous for desk-scale
# searches, small enough to fail cleanly before the host stack does
_SEARCH_DEPTH = 2000


def pure_denote(
    env: Mapping[str, SemVal],
    t: Term,
    oracle: Optional[OracleSpec] = None,
    search_depth: int = _SEARCH_DEPTH,
) -> SemVal:
    """Standard set-theoretic semantics, with no effects anywhere.

    Numerals mean naturals, lists mean sequences, arrows mean host
    functions. The oracle argument gives alpha a meaning when supplied.
    Used to cross-check values produced by every other route.
    """
    if isinstance(t, Var):
        try:
            return env[t.name]
        except KeyError:
            raise MetaTypeMismatch(f"unbound variable {t.name!r}") from None
    if isinstance(t, Lam):
        body, var = t.body, t.var
        frozen = dict(env)
        return SFun(lambda a: pure_denote({**frozen, var: a}, body, oracle, search_depth))
    if isinstance(t, App):
        fn = as_fun(pure_denote(env, t.fun, oracle, search_depth))
        return fn.fn(pure_denote(env, t.arg, oracle, search_depth))
    if isinstance(t, Cons):
        return _pure_cons(t.name)
    if isinstance(t, Func):
        return _pure_func(t.name, oracle, search_depth)
    raise MissingInterpretation(repr(t))


def _pure_cons(name: str) -> SemVal:
    if name == "zero":
        return Base(0)
    if name == "succ":
        return SFun(lambda n: Base(as_base(n).value + 1))
    if name == "nil":
        return BaseList(())
    if name == "cons":
        return SFun(
            lambda a: SFun(lambda n: BaseList(as_list(a).items + (as_base(n).value,)))
        )
    raise MissingInterpretation(name)


def _pure_func(name: str, oracle: Optional[OracleSpec], depth: int) -> SemVal:
    if name == "add":
        return _pure_bin(lambda m, n: m + n)
    if name == "mul":
        return _pure_bin(lambda m, n: m * n)
    if name == "lt":
        return _pure_bin(lambda m, n: 0 if m < n else 1)
    if name == "len":
        return SFun(lambda a: Base(len(as_list(a).items)))
    if name == "ext":
        return SFun(
            lambda a: SFun(lambda n: Base(_pad(as_list(a).items, as_base(n).value)))
        )
    if name == "alpha":
        if oracle is None:
            raise MissingInterpretation("alpha", "no oracle supplied")
        g = oracle
        return SFun(lambda n: Base(g(as_base(n).value)))
    if name.startswith("rec["):
        return SFun(
            lambda a: SFun(lambda f: SFun(lambda n: _pure_rec(a, f, as_base(n).value)))
        )
    if name.startswith("fold["):
        return SFun(
            lambda a: SFun(lambda f: SFun(lambda xs: _pure_fold(a, f, as_list(xs).items)))
        )
    if name == "bar":
        return SFun(
            lambda w: SFun(
                lambda g: SFun(
                    lambda h: SFun(
                        lambda a: _pure_bar(w, g, h, as_list(a).items, depth)
                    )
                )
            )
        )
    if name == "bar1":
        return SFun(
            lambda w: SFun(
                lambda g: SFun(
                    lambda h: SFun(
                        lambda a: SFun(
                            lambda b: _pure_bar1(
                                w, g, h, as_list(a).items, as_base(b).value, depth
                            )
                        )
                    )
                )
            )
        )
    raise MissingInterpretation(name)


def _pure_bin(op: Callable[[int, int], int]) -> SemVal:
    return SFun(lambda m: SFun(lambda n: Base(op(as_base(m).value, as_base(n).value))))


def _pad(items: tuple[int, ...], n: int) -> int:
    # out-of-range lookups read as zero
    return items[n] if n < len(items) else 0


def _pure_rec(a: SemVal, f: SemVal, n: int) -> SemVal:
    cur = a
    for i in range(n):
        cur = as_fun(as_fun(f).fn(Base(i))).fn(cur)
    return cur


def _pure_fold(a: SemVal, f: SemVal, items: tuple[int, ...]) -> SemVal:
    # peeling from the right nests the same way as iterating left to right
    cur = a
    for z in items:
        cur = as_fun(as_fun(f).fn(Base(z))).fn(cur)
    return cur


def _pure_bar(
    w: SemVal, g: SemVal, h: SemVal, items: tuple[int, ...], depth: int
) -> SemVal:
    if depth <= 0:
        raise FuelExhausted(_SEARCH_DEPTH)
    padded = SFun(lambda i: Base(_pad(items, as_base(i).value)))
    settled = as_base(as_fun(w).fn(padded)).value
    if settled < len(items):
        return as_fun(g).fn(BaseList(items))
    cont = SFun(lambda x: _pure_bar(w, g, h, items + (as_base(x).value,), depth - 1))
    return as_fun(as_fun(h).fn(BaseList(items))).fn(cont)


def _pure_bar1(
    w: SemVal, g: SemVal, h: SemVal, items: tuple[int, ...], b: int, depth: int
) -> SemVal:
    if b == 0:
        return as_fun(g).fn(BaseList(items))
    cont = SFun(lambda x: _pure_bar(w, g, h, items + (as_base(x).value,), depth - 1))
    return as_fun(as_fun(h).fn(BaseList(items))).fn(cont)
