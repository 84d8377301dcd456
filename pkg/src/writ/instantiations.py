"""The shipped analyses: one instantiation of the engine per question.

- continuity: effects are query lists; the modulus of a type-two functional
  falls out of the queries its denotation makes.
- cost_exact: effects are step counts; predictions match the evaluator
  exactly.
- cost_bounded: values are size bounds and effects are step-count upper
  bounds over the list fragment.
- majorizability: no effect at all; values dominate the true results.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from .errors import FuelExhausted, TypeMismatch, UnsupportedSymbol
from .engine import (
    COST,
    QUERIES,
    TRIVIAL,
    Base,
    BaseList,
    EffectTriple,
    Instantiation,
    SemVal,
    SFun,
    as_base,
    as_fun,
    as_list,
    compose,
    denote,
    pair_parts,
    spair,
)
from .errors import ShapeMismatch
from .evaluator import DEFAULT_FUEL, Fuel
from .meta import translate
from .signatures import OracleSpec, Signature, signature_for, system_t, system_t_list
from .syntax import (
    NAT,
    Arrow,
    Term,
    render_term,
    render_type,
    symbols,
    typecheck,
)

__all__ = [
    "ModulusReport", "CostReport", "EXACT", "BOUND",
    "continuity_inst", "cost_exact_inst", "cost_bounded_inst", "majorizability_inst",
    "modulus", "exact_cost", "bounded_cost", "majorant",
    "spector_closed_form", "semantic_join",
]

EXACT = "exact"
BOUND = "bound"

# host recursion guard for search denotations; see the evaluator's Fuel for
# the step-level budget
_SEARCH_DEPTH = 2000


@dataclass(frozen=True)
class ModulusReport:
    """How much of the oracle a type-two term can see."""

    phi: int
    support: tuple[int, ...]
    predicted_value: int


@dataclass(frozen=True)
class CostReport:
    predicted: int
    semantic: SemVal
    mode: str


# ---------------------------------------------------------------- shared pieces

def _succ_interp() -> SemVal:
    return SFun(lambda n: Base(as_base(n).value + 1))


def _exact_cons() -> dict[str, SemVal]:
    return {
        "zero": Base(0),
        "succ": SFun(lambda n: Base(as_base(n).value + 1)),
        "nil": BaseList(()),
        "cons": SFun(
            lambda a: SFun(lambda n: BaseList(as_list(a).items + (as_base(n).value,)))
        ),
    }


def _rec_family(eff: EffectTriple) -> SemVal:
    """Numeral recursion, one charged unfold per layer.

    The same code serves both the query effect (inc is the identity, com is
    concatenation) and the step-count effect (inc is +1, com is the sum).
    """

    def run(acc: SemVal, step: SemVal, n: int) -> SemVal:
        if n == 0:
            return spair(eff.inc(eff.eps), acc)
        c_prev, prev = pair_parts(run(acc, step, n - 1))
        c_step, applied = pair_parts(as_fun(step).fn(Base(n - 1)))
        c_call, out = pair_parts(as_fun(applied).fn(prev))
        return spair(eff.inc(eff.com(c_step, c_prev, c_call)), out)

    return SFun(
        lambda a: SFun(lambda f: SFun(lambda n: run(a, f, as_base(n).value)))
    )


def _fold_family(eff: EffectTriple) -> SemVal:
    """List recursion, consuming the rightmost element first."""

    def run(acc: SemVal, step: SemVal, items: tuple[int, ...]) -> SemVal:
        if not items:
            return spair(eff.inc(eff.eps), acc)
        c_prev, prev = pair_parts(run(acc, step, items[:-1]))
        c_step, applied = pair_parts(as_fun(step).fn(Base(items[-1])))
        c_call, out = pair_parts(as_fun(applied).fn(prev))
        return spair(eff.inc(eff.com(c_step, c_prev, c_call)), out)

    return SFun(
        lambda a: SFun(lambda f: SFun(lambda xs: run(a, f, as_list(xs).items)))
    )


def _charged_bin(op: Callable[[int, int], int]) -> SemVal:
    # builtins charge their single step when the last argument lands
    return SFun(
        lambda m: SFun(
            lambda n: spair(1, Base(op(as_base(m).value, as_base(n).value)))
        )
    )


def _pad(items: tuple[int, ...], n: int) -> int:
    return items[n] if n < len(items) else 0


# ---------------------------------------------------------------- continuity

def continuity_inst(g: OracleSpec) -> Instantiation:
    """Query-log effects over the numeral-recursion fragment plus the oracle."""

    def alpha(n: SemVal) -> SemVal:
        k = as_base(n).value
        return spair((k,), Base(g(k)))

    return Instantiation(
        name="continuity",
        effect=QUERIES,
        domains={"Nat": "Base"},
        cons_interp={"zero": Base(0), "succ": _succ_interp()},
        func_interp={"alpha": SFun(alpha)},
        func_families={"rec": _rec_family(QUERIES)},
    )


# ---------------------------------------------------------------- exact cost

def _exact_bar(fuel: Fuel) -> tuple[SemVal, SemVal]:
    """Step-exact denotations of the search combinator and its decision stage.

    Each recursive extension mirrors the rewrite trace: four fixed steps for
    the unfold, the comparison, the lookup closure and the length, plus the
    functional's own work, plus whichever branch runs.
    """

    def probe(items: tuple[int, ...]) -> SemVal:
        return SFun(lambda i: spair(1, Base(_pad(items, as_base(i).value))))

    def run(w: SemVal, g: SemVal, h: SemVal, items: tuple[int, ...], depth: int) -> SemVal:
        if depth <= 0:
            raise FuelExhausted(fuel.max_steps)
        c_w, decided = pair_parts(as_fun(w).fn(probe(items)))
        lead = 4 + c_w
        if as_base(decided).value < len(items):
            c_g, out = pair_parts(as_fun(g).fn(BaseList(items)))
            return spair(lead + c_g, out)
        c_h, c_call, out = _extend(w, g, h, items, depth)
        return spair(lead + c_h + c_call, out)

    def run1(
        w: SemVal, g: SemVal, h: SemVal, items: tuple[int, ...], m: int, depth: int
    ) -> SemVal:
        if m == 0:
            c_g, out = pair_parts(as_fun(g).fn(BaseList(items)))
            return spair(1 + c_g, out)
        c_h, c_call, out = _extend(w, g, h, items, depth)
        return spair(1 + c_h + c_call, out)

    def _extend(
        w: SemVal, g: SemVal, h: SemVal, items: tuple[int, ...], depth: int
    ) -> tuple[int, int, SemVal]:
        # continuing costs one beta step before the next search round
        def cont(x: SemVal) -> SemVal:
            c_next, out = pair_parts(run(w, g, h, items + (as_base(x).value,), depth - 1))
            return spair(1 + c_next, out)

        c_h, applied = pair_parts(as_fun(h).fn(BaseList(items)))
        c_call, out = pair_parts(as_fun(applied).fn(SFun(cont)))
        return c_h, c_call, out

    depth0 = min(fuel.max_steps, _SEARCH_DEPTH)
    bar = SFun(
        lambda w: SFun(
            lambda g: SFun(
                lambda h: SFun(lambda a: run(w, g, h, as_list(a).items, depth0))
            )
        )
    )
    bar1 = SFun(
        lambda w: SFun(
            lambda g: SFun(
                lambda h: SFun(
                    lambda a: SFun(
                        lambda m: run1(
                            w, g, h, as_list(a).items, as_base(m).value, depth0
                        )
                    )
                )
            )
        )
    )
    return bar, bar1


def cost_exact_inst(fuel: Fuel = DEFAULT_FUEL) -> Instantiation:
    """Step-count effects; predictions agree with the evaluator exactly."""
    bar, bar1 = _exact_bar(fuel)
    return Instantiation(
        name="cost_exact",
        effect=COST,
        domains={"Nat": "Base", "List": "BaseList"},
        cons_interp=_exact_cons(),
        func_interp={
            "add": _charged_bin(lambda m, n: m + n),
            "mul": _charged_bin(lambda m, n: m * n),
            "lt": _charged_bin(lambda m, n: 0 if m < n else 1),
            "len": SFun(lambda a: spair(1, Base(len(as_list(a).items)))),
            "ext": SFun(
                lambda a: SFun(
                    lambda n: spair(1, Base(_pad(as_list(a).items, as_base(n).value)))
                )
            ),
            "bar": bar,
            "bar1": bar1,
        },
        func_families={"rec": _rec_family(COST), "fold": _fold_family(COST)},
    )


# ---------------------------------------------------------------- bounded cost

def semantic_join(
    x: SemVal, y: SemVal, combine_eff: Callable[[object, object], object]
) -> SemVal:
    """Least upper bound of two semantic values of the same lifted type.

    Naturals join by max; functions join pointwise, with their effect
    amounts merged by combine_eff.
    """
    if isinstance(x, Base) and isinstance(y, Base):
        return Base(max(x.value, y.value))
    if isinstance(x, SFun) and isinstance(y, SFun):

        def joined(a: SemVal) -> SemVal:
            cx, vx = pair_parts(x.fn(a))
            cy, vy = pair_parts(y.fn(a))
            return spair(combine_eff(cx, cy), semantic_join(vx, vy, combine_eff))

        return SFun(joined)
    raise ShapeMismatch("joinable pair of equal shapes", y)


def _fold_bounded() -> SemVal:
    """List recursion on sizes: every element reads as size one, the result
    joins the base bound with the last step's bound."""

    def run(acc: SemVal, step: SemVal, m: int) -> SemVal:
        if m == 0:
            return spair(1, acc)
        c_prev, prev = pair_parts(run(acc, step, m - 1))
        c_step, applied = pair_parts(as_fun(step).fn(Base(1)))
        c_call, out = pair_parts(as_fun(applied).fn(prev))
        joined = semantic_join(acc, out, lambda a, b: max(a, b))
        return spair(1 + c_step + c_prev + c_call, joined)

    return SFun(lambda a: SFun(lambda f: SFun(lambda m: run(a, f, as_base(m).value))))


def cost_bounded_inst() -> Instantiation:
    """Size-based step bounds over the list fragment.

    Numerals all have size one, so a list's size is its length and the
    analysis stays finite without looking at actual numbers.
    """
    return Instantiation(
        name="cost_bounded",
        effect=COST,
        domains={"Nat": "Base", "List": "Base"},
        cons_interp={
            "zero": Base(1),
            "succ": SFun(lambda n: Base(1)),
            "nil": Base(0),
            "cons": SFun(lambda a: SFun(lambda n: Base(as_base(a).value + 1))),
        },
        func_interp={
            "add": _charged_bin(lambda m, n: 1),
            "mul": _charged_bin(lambda m, n: 1),
            "lt": _charged_bin(lambda m, n: 1),
            "len": SFun(lambda m: spair(1, Base(1))),
        },
        func_families={"fold": _fold_bounded()},
    )


# ---------------------------------------------------------------- majorizability

def _join_flat(x: SemVal, y: SemVal) -> SemVal:
    return semantic_join(x, y, lambda a, b: None)


def _rec_majorized() -> SemVal:
    """Monotone envelope of numeral recursion: the join of every stage up to
    the argument, so the result dominates recursion at any smaller index too."""

    def run(acc: SemVal, step: SemVal, n: int) -> SemVal:
        best = acc
        cur = acc
        for i in range(n):
            _, applied = pair_parts(as_fun(step).fn(Base(i)))
            _, cur = pair_parts(as_fun(applied).fn(cur))
            best = _join_flat(best, cur)
        return spair(None, best)

    return SFun(lambda a: SFun(lambda f: SFun(lambda n: run(a, f, as_base(n).value))))


def majorizability_inst() -> Instantiation:
    """No effect; every value dominates the true one pointwise."""
    return Instantiation(
        name="majorizability",
        effect=TRIVIAL,
        domains={"Nat": "Base"},
        cons_interp={"zero": Base(0), "succ": SFun(lambda n: Base(as_base(n).value + 1))},
        func_interp={
            "add": SFun(
                lambda m: SFun(
                    lambda n: spair(None, Base(as_base(m).value + as_base(n).value))
                )
            ),
            "mul": SFun(
                lambda m: SFun(
                    lambda n: spair(None, Base(as_base(m).value * as_base(n).value))
                )
            ),
            # comparisons only ever produce 0 or 1; the constant covers both,
            # whereas the exact comparison is not monotone and so no majorant
            "lt": SFun(lambda m: SFun(lambda n: spair(None, Base(1)))),
        },
        func_families={"rec": _rec_majorized()},
    )


# ---------------------------------------------------------------- operations

_TYPE_TWO = Arrow(Arrow(NAT, NAT), NAT)


def modulus(
    e: Term,
    g: OracleSpec,
    fuel: Fuel = DEFAULT_FUEL,
    *,
    inst: Optional[Instantiation] = None,
) -> ModulusReport:
    """Support and modulus of a closed type-two term applied to the oracle g.

    The term must live in the numeral-recursion fragment (no oracle symbol
    inside, no search combinator) and have type (Nat->Nat)->Nat. The modulus
    is one past the largest queried position, or zero when nothing is
    queried.
    """
    sig = system_t()
    ty = typecheck(sig, {}, e)
    if ty != _TYPE_TWO:
        raise TypeMismatch(render_type(_TYPE_TWO), render_type(ty), render_term(e))
    active = inst if inst is not None else continuity_inst(g)
    den = denote(active, {}, translate(sig, {}, e))
    oracle_sem = spair(
        (), SFun(lambda n: spair((as_base(n).value,), Base(g(as_base(n).value))))
    )
    support_raw, out = pair_parts(compose(active, den, oracle_sem))
    support = tuple(support_raw)
    phi = max(support) + 1 if support else 0
    return ModulusReport(phi=phi, support=support, predicted_value=as_base(out).value)


def exact_cost(
    e: Term,
    sig: Optional[Signature] = None,
    fuel: Fuel = DEFAULT_FUEL,
    *,
    inst: Optional[Instantiation] = None,
) -> CostReport:
    """Predicted step count and semantic value of a closed term."""
    if sig is None:
        sig = signature_for(e)
    typecheck(sig, {}, e)
    active = inst if inst is not None else cost_exact_inst(fuel)
    den = denote(active, {}, translate(sig, {}, e))
    cost, value = pair_parts(den)
    return CostReport(predicted=cost, semantic=value, mode=EXACT)


def bounded_cost(
    e: Term,
    fuel: Fuel = DEFAULT_FUEL,
    *,
    inst: Optional[Instantiation] = None,
) -> CostReport:
    """Upper bounds on step count and result size over the list fragment.

    Numeral-indexed recursion and the search combinator have no sound
    size-based bound (sizes forget numeral depth), so terms using them are
    rejected.
    """
    names = symbols(e)
    for banned in ("bar", "bar1", "ext"):
        if banned in names:
            raise UnsupportedSymbol(banned, "unbounded search has no size bound")
    for name in sorted(names):
        if name.startswith("rec["):
            raise UnsupportedSymbol(
                name, "sizes are uniform on numerals, so numeral recursion depth is invisible"
            )
    sig = system_t_list()
    typecheck(sig, {}, e)
    active = inst if inst is not None else cost_bounded_inst()
    den = denote(active, {}, translate(sig, {}, e))
    cost, value = pair_parts(den)
    return CostReport(predicted=cost, semantic=value, mode=BOUND)


def majorant(
    e: Term,
    fuel: Fuel = DEFAULT_FUEL,
    *,
    inst: Optional[Instantiation] = None,
) -> SemVal:
    """A semantic value dominating e's value pointwise."""
    sig = signature_for(e)
    typecheck(sig, {}, e)
    active = inst if inst is not None else majorizability_inst()
    den = denote(active, {}, translate(sig, {}, e))
    _, value = pair_parts(den)
    return value


def spector_closed_form(omega: SemVal, g: SemVal, fuel: Fuel = DEFAULT_FUEL) -> int:
    """Total cost of the canonical sequential search, in closed form.

    omega and g are effect-paired semantic functions (the usual shape of
    denoted values): omega consumes a Nat->Nat pair function, g consumes a
    natural. The search stops at the least n where omega, shown the padded
    length-n prefix of g's value stream, answers below n. The closed form
    charges a fixed ten-step frame per round plus omega's own work on every
    prefix and g's work on every extension.
    """
    w = as_fun(omega)
    gf = as_fun(g)
    g_cost: list[int] = []
    g_val: list[int] = []

    def fill(upto: int) -> None:
        while len(g_val) < upto:
            c, v = pair_parts(gf.fn(Base(len(g_val))))
            g_cost.append(c)
            g_val.append(as_base(v).value)

    def prefix(n: int) -> SemVal:
        # reading any position costs one step; positions past n read zero
        return SFun(
            lambda i: spair(
                1,
                Base(
                    g_val[as_base(i).value]
                    if as_base(i).value < n
                    else 0
                ),
            )
        )

    w_cost: list[int] = []
    n = 0
    while True:
        fill(n)
        c, v = pair_parts(w.fn(prefix(n)))
        w_cost.append(c)
        if as_base(v).value < n:
            stop = n
            break
        n += 1
        if n > fuel.max_steps:
            raise FuelExhausted(n)
    return 10 * stop + 5 + sum(w_cost) + sum(g_cost[:stop])
