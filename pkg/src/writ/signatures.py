"""Language instances: constructors, function symbols, rewrite rules, builtins.

A Signature fixes the datatypes, the constructor arities, and for each
function symbol either a complete orthogonal set of rewrite rules or a
builtin (a schematic rule family computed on the host, one step per unfold).
The recursor families rec[t] and fold[t] are synthesized on demand, one
monomorphic symbol per index type.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Mapping, Sequence, Union

from .errors import DuplicateSymbol, ShapeMismatch, UndeclaredSymbol
from .parser import parse_type
from .syntax import (
    LIST,
    NAT,
    App,
    Arrow,
    Cons,
    Data,
    Func,
    Lam,
    PCons,
    Pattern,
    PVar,
    Term,
    Ty,
    Var,
    app,
    list_value,
    numeral,
    numeral_value,
    render_type,
    symbols,
)

__all__ = [
    "Rule", "Builtin", "ConsDecl", "FuncDecl", "Signature",
    "system_t", "system_t_list", "bar_rec", "with_oracle",
    "OracleSpec", "Identity", "Constant", "Table",
    "oracle_from_json", "oracle_from_string", "oracle_label",
    "signature_for",
]


# ---------------------------------------------------------------- declarations

@dataclass(frozen=True)
class Rule:
    """One rewrite rule: the symbol applied to matching values becomes rhs
    under the matching substitution."""

    patterns: tuple[Pattern, ...]
    rhs: Term


@dataclass(frozen=True)
class Builtin:
    """A schematic rule family.

    delta maps a full vector of argument values to the contractum; the unfold
    costs exactly one step, like any rule. Oracle builtins additionally log
    their numeric argument when unfolded.
    """

    name: str
    arity: int
    delta: Callable[[Sequence[Term]], Term]
    is_oracle: bool = False


@dataclass(frozen=True)
class ConsDecl:
    """Constructor declaration: argument datatypes and result datatype."""

    args: tuple[str, ...]
    result: str


@dataclass(frozen=True)
class FuncDecl:
    """Function symbol declaration: full curried type plus implementation."""

    ty: Ty
    impl: Union[tuple[Rule, ...], Builtin]

    @property
    def arity(self) -> int:
        if isinstance(self.impl, Builtin):
            return self.impl.arity
        return len(self.impl[0].patterns)


_FAMILY_RE = re.compile(r"(rec|fold)\[(.+)\]\Z")


class Signature:
    """Immutable symbol table for one language instance."""

    def __init__(
        self,
        name: str,
        datatypes: frozenset[str] | set[str],
        constructors: Mapping[str, ConsDecl],
        functions: Mapping[str, FuncDecl],
        families: frozenset[str] | set[str] = frozenset(),
    ):
        self.name = name
        self.datatypes = frozenset(datatypes)
        self._cons = dict(constructors)
        self._funcs = dict(functions)
        self._families = frozenset(families)

    # ---- constructors

    def has_cons(self, name: str) -> bool:
        return name in self._cons

    def cons_decl(self, name: str) -> ConsDecl:
        decl = self._cons.get(name)
        if decl is None:
            raise UndeclaredSymbol(name)
        return decl

    def cons_type(self, name: str) -> Ty:
        decl = self.cons_decl(name)
        ty: Ty = Data(decl.result)
        for arg in reversed(decl.args):
            ty = Arrow(Data(arg), ty)
        return ty

    # ---- function symbols

    def has_func(self, name: str) -> bool:
        if name in self._funcs:
            return True
        m = _FAMILY_RE.match(name)
        return bool(m) and m.group(1) in self._families

    def func_decl(self, name: str) -> FuncDecl:
        decl = self._funcs.get(name)
        if decl is not None:
            return decl
        m = _FAMILY_RE.match(name)
        if m and m.group(1) in self._families:
            index = parse_type(m.group(2))
            return _rec_decl(index) if m.group(1) == "rec" else _fold_decl(index)
        raise UndeclaredSymbol(name)

    def func_type(self, name: str) -> Ty:
        return self.func_decl(name).ty

    # ---- shared

    def arity(self, name: str) -> int:
        if name in self._cons:
            return len(self._cons[name].args)
        return self.func_decl(name).arity


# ---------------------------------------------------------------- recursors

@lru_cache(maxsize=None)
def _rec_decl(index: Ty) -> FuncDecl:
    """rec[t] : t -> (Nat -> t -> t) -> Nat -> t, recursion on the numeral."""
    sym = Func(f"rec[{render_type(index)}]")
    step_ty = Arrow(NAT, Arrow(index, index))
    ty = Arrow(index, Arrow(step_ty, Arrow(NAT, index)))
    x, y, z = Var("x"), Var("y"), Var("z")
    rules = (
        Rule((PVar("x", index), PVar("y", step_ty), PCons("zero", ())), x),
        Rule(
            (PVar("x", index), PVar("y", step_ty), PCons("succ", (PVar("z", NAT),))),
            app(y, z, app(sym, x, y, z)),
        ),
    )
    return FuncDecl(ty, rules)


@lru_cache(maxsize=None)
def _fold_decl(index: Ty) -> FuncDecl:
    """fold[t] : t -> (Nat -> t -> t) -> List -> t, recursion on the list."""
    sym = Func(f"fold[{render_type(index)}]")
    step_ty = Arrow(NAT, Arrow(index, index))
    ty = Arrow(index, Arrow(step_ty, Arrow(LIST, index)))
    x, y, z, zs = Var("x"), Var("y"), Var("z"), Var("zs")
    rules = (
        Rule((PVar("x", index), PVar("y", step_ty), PCons("nil", ())), x),
        Rule(
            (
                PVar("x", index),
                PVar("y", step_ty),
                PCons("cons", (PVar("zs", LIST), PVar("z", NAT))),
            ),
            app(y, z, app(sym, x, y, zs)),
        ),
    )
    return FuncDecl(ty, rules)


# ---------------------------------------------------------------- builtins

def _nat(v: Term) -> int:
    n = numeral_value(v)
    if n is None:
        raise ShapeMismatch("numeral", v)
    return n


def _items(v: Term) -> tuple[int, ...]:
    items = list_value(v)
    if items is None:
        raise ShapeMismatch("list literal", v)
    return items


def _delta_add(args: Sequence[Term]) -> Term:
    return numeral(_nat(args[0]) + _nat(args[1]))


def _delta_mul(args: Sequence[Term]) -> Term:
    return numeral(_nat(args[0]) * _nat(args[1]))


def _delta_lt(args: Sequence[Term]) -> Term:
    # numeral 0 means "yes, less than"; anything else is refuted by 1
    return numeral(0 if _nat(args[0]) < _nat(args[1]) else 1)


def _delta_len(args: Sequence[Term]) -> Term:
    return numeral(len(_items(args[0])))


def _delta_ext(args: Sequence[Term]) -> Term:
    items = _items(args[0])
    n = _nat(args[1])
    return numeral(items[n] if n < len(items) else 0)


_NAT2 = Arrow(NAT, Arrow(NAT, NAT))


# ---------------------------------------------------------------- instances

def system_t() -> Signature:
    """Numerals and the numeral recursor family, nothing else."""
    return Signature(
        name="system_t",
        datatypes={"Nat"},
        constructors={
            "zero": ConsDecl((), "Nat"),
            "succ": ConsDecl(("Nat",), "Nat"),
        },
        functions={},
        families={"rec"},
    )


def system_t_list() -> Signature:
    """system_t plus lists, the list recursor family, and arithmetic builtins."""
    return Signature(
        name="system_t_list",
        datatypes={"Nat", "List"},
        constructors={
            "zero": ConsDecl((), "Nat"),
            "succ": ConsDecl(("Nat",), "Nat"),
            "nil": ConsDecl((), "List"),
            # a list grows on the right: cons takes the list first
            "cons": ConsDecl(("List", "Nat"), "List"),
        },
        functions={
            "add": FuncDecl(_NAT2, Builtin("add", 2, _delta_add)),
            "mul": FuncDecl(_NAT2, Builtin("mul", 2, _delta_mul)),
            "lt": FuncDecl(_NAT2, Builtin("lt", 2, _delta_lt)),
            "len": FuncDecl(Arrow(LIST, NAT), Builtin("len", 1, _delta_len)),
        },
        families={"rec", "fold"},
    )


# argument types of the sequential search combinator
_RHO1 = Arrow(Arrow(NAT, NAT), NAT)
_RHO2 = Arrow(LIST, NAT)
_RHO3 = Arrow(LIST, Arrow(Arrow(NAT, NAT), NAT))


def bar_rec() -> Signature:
    """system_t_list plus ext and the two-stage search combinator bar/bar1."""
    base = system_t_list()
    f, g, h, xs = (
        PVar("f", _RHO1),
        PVar("g", _RHO2),
        PVar("h", _RHO3),
        PVar("xs", LIST),
    )
    fv, gv, hv, xsv = Var("f"), Var("g"), Var("h"), Var("xs")
    bar_ty = Arrow(_RHO1, Arrow(_RHO2, Arrow(_RHO3, Arrow(LIST, NAT))))
    bar1_ty = Arrow(_RHO1, Arrow(_RHO2, Arrow(_RHO3, Arrow(LIST, Arrow(NAT, NAT)))))
    # bar defers to bar1 on the decided comparison: has the functional
    # settled on this initial segment yet?
    bar_rule = Rule(
        (f, g, h, xs),
        app(
            Func("bar1"),
            fv,
            gv,
            hv,
            xsv,
            app(Func("lt"), App(fv, App(Func("ext"), xsv)), App(Func("len"), xsv)),
        ),
    )
    bar1_rules = (
        Rule((f, g, h, xs, PCons("zero", ())), App(gv, xsv)),
        Rule(
            (f, g, h, xs, PCons("succ", (PVar("z", NAT),))),
            app(
                hv,
                xsv,
                Lam("x", NAT, app(Func("bar"), fv, gv, hv, app(Cons("cons"), xsv, Var("x")))),
            ),
        ),
    )
    functions = dict(base._funcs)
    functions.update(
        {
            "ext": FuncDecl(Arrow(LIST, Arrow(NAT, NAT)), Builtin("ext", 2, _delta_ext)),
            "bar": FuncDecl(bar_ty, (bar_rule,)),
            "bar1": FuncDecl(bar1_ty, bar1_rules),
        }
    )
    return Signature(
        name="bar_rec",
        datatypes=base.datatypes,
        constructors=base._cons,
        functions=functions,
        families=base._families,
    )


def with_oracle(sig: Signature, g: "OracleSpec") -> Signature:
    """Extend sig with the oracle symbol alpha computing g, one step per call."""
    if sig.has_func("alpha") or sig.has_cons("alpha"):
        raise DuplicateSymbol("alpha")

    def delta(args: Sequence[Term]) -> Term:
        return numeral(g(_nat(args[0])))

    functions = dict(sig._funcs)
    functions["alpha"] = FuncDecl(
        Arrow(NAT, NAT), Builtin("alpha", 1, delta, is_oracle=True)
    )
    return Signature(
        name=f"{sig.name}+oracle",
        datatypes=sig.datatypes,
        constructors=sig._cons,
        functions=functions,
        families=sig._families,
    )


# ---------------------------------------------------------------- oracles

class OracleSpec:
    """A total function on naturals, used as the oracle alpha."""

    def __call__(self, n: int) -> int:
        raise NotImplementedError


@dataclass(frozen=True)
class Identity(OracleSpec):
    def __call__(self, n: int) -> int:
        return n


@dataclass(frozen=True)
class Constant(OracleSpec):
    value: int

    def __call__(self, n: int) -> int:
        return self.value


@dataclass(frozen=True)
class Table(OracleSpec):
    """Finite table with a default for every unlisted argument."""

    pairs: tuple[tuple[int, int], ...]
    default: int = 0

    def __call__(self, n: int) -> int:
        for k, v in self.pairs:
            if k == n:
                return v
        return self.default


def oracle_from_json(source: str | Mapping) -> OracleSpec:
    """Load an oracle from its JSON object form.

    Shapes: {"kind":"identity"}, {"kind":"constant","value":K},
    {"kind":"table","pairs":[[k,v],...],"default":D}.
    """
    obj = json.loads(source) if isinstance(source, str) else source
    if not isinstance(obj, Mapping):
        raise ValueError("oracle JSON must be an object")
    kind = obj.get("kind")
    if kind == "identity":
        return Identity()
    if kind == "constant":
        return Constant(int(obj["value"]))
    if kind == "table":
        pairs = tuple((int(k), int(v)) for k, v in obj.get("pairs", []))
        return Table(pairs, int(obj.get("default", 0)))
    raise ValueError(f"unknown oracle kind {kind!r}")


def oracle_from_string(spec: str) -> OracleSpec:
    """Parse the inline oracle syntax.

    Accepted forms: "identity", "constant:K", "table:k=v,k=v[,default=D]".
    """
    spec = spec.strip()
    if spec == "identity":
        return Identity()
    if spec.startswith("constant:"):
        return Constant(int(spec.removeprefix("constant:")))
    if spec.startswith("table:"):
        pairs: list[tuple[int, int]] = []
        default = 0
        body = spec.removeprefix("table:")
        for piece in filter(None, (p.strip() for p in body.split(","))):
            key, _, val = piece.partition("=")
            if not _:
                raise ValueError(f"bad table entry {piece!r}")
            if key.strip() == "default":
                default = int(val)
            else:
                pairs.append((int(key), int(val)))
        return Table(tuple(pairs), default)
    raise ValueError(f"unknown oracle spec {spec!r}")


def oracle_label(g: OracleSpec) -> str:
    """Short printable form, inverse of oracle_from_string where possible."""
    if isinstance(g, Identity):
        return "identity"
    if isinstance(g, Constant):
        return f"constant:{g.value}"
    if isinstance(g, Table):
        body = ",".join(f"{k}={v}" for k, v in g.pairs)
        sep = "," if body else ""
        return f"table:{body}{sep}default={g.default}"
    return type(g).__name__


# ---------------------------------------------------------------- selection

_LIST_SYMBOLS = frozenset({"nil", "cons", "add", "mul", "lt", "len"})
_BAR_SYMBOLS = frozenset({"ext", "bar", "bar1"})


def _mentions_list_type(t: Term) -> bool:
    if isinstance(t, Lam):
        return _ty_mentions_list(t.var_ty) or _mentions_list_type(t.body)
    if isinstance(t, App):
        return _mentions_list_type(t.fun) or _mentions_list_type(t.arg)
    return False


def _ty_mentions_list(ty: Ty) -> bool:
    if isinstance(ty, Data):
        return ty.name == "List"
    return _ty_mentions_list(ty.dom) or _ty_mentions_list(ty.cod)


def signature_for(t: Term) -> Signature:
    """Pick the smallest shipped signature covering t's symbols.

    The oracle symbol alpha is ignored here; it is added by with_oracle on
    top of whatever this returns.
    """
    names = symbols(t)
    if names & _BAR_SYMBOLS:
        return bar_rec()
    if (
        names & _LIST_SYMBOLS
        or any(n.startswith("fold[") for n in names)
        or _mentions_list_type(t)
    ):
        return system_t_list()
    return system_t()
