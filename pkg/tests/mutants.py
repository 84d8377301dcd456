"""Deliberately broken instantiations.

One corrupted copy per analysis, each wrong in a single targeted way. The
harness tests feed these through the verifiers and require a Fail verdict,
which keeps the verifiers honest: a checker that cannot catch a planted bug
is not checking anything.
"""

from dataclasses import replace

from writ.engine import (
    Base,
    EffectTriple,
    Instantiation,
    SFun,
    as_base,
    as_fun,
    pair_parts,
    spair,
)
from writ.instantiations import (
    continuity_inst,
    cost_bounded_inst,
    cost_exact_inst,
    majorizability_inst,
    semantic_join,
)
from writ.signatures import OracleSpec


def overcharging_exact_inst() -> Instantiation:
    """Exact-cost analysis that bills two steps per recursion unfold."""
    inst = cost_exact_inst()

    def run(acc, step, n):
        if n == 0:
            return spair(2, acc)
        c_prev, prev = pair_parts(run(acc, step, n - 1))
        c_step, applied = pair_parts(as_fun(step).fn(Base(n - 1)))
        c_call, out = pair_parts(as_fun(applied).fn(prev))
        return spair(2 + c_step + c_prev + c_call, out)

    broken = SFun(
        lambda a: SFun(lambda f: SFun(lambda n: run(a, f, as_base(n).value)))
    )
    return replace(inst, func_families={**inst.func_families, "rec": broken})


def forgetful_continuity_inst(g: OracleSpec) -> Instantiation:
    """Continuity analysis whose effect combination loses the call's queries."""
    inst = continuity_inst(g)
    leaky = EffectTriple("NatList", (), lambda c: c, lambda a, b, c: a + b)
    return replace(inst, effect=leaky)


def undercounting_bounded_inst() -> Instantiation:
    """Bounded-cost analysis that drops the base step of every fold round."""
    inst = cost_bounded_inst()

    def run(acc, step, m):
        if m == 0:
            return spair(0, acc)
        c_prev, prev = pair_parts(run(acc, step, m - 1))
        c_step, applied = pair_parts(as_fun(step).fn(Base(1)))
        c_call, out = pair_parts(as_fun(applied).fn(prev))
        joined = semantic_join(acc, out, max)
        return spair(c_step + c_prev + c_call, joined)

    broken = SFun(
        lambda a: SFun(lambda f: SFun(lambda m: run(a, f, as_base(m).value)))
    )
    return replace(inst, func_families={**inst.func_families, "fold": broken})


def shrinking_majorizability_inst() -> Instantiation:
    """Majorizability analysis whose addition comes up one short."""
    inst = majorizability_inst()
    lossy = SFun(
        lambda m: SFun(
            lambda n: spair(
                None, Base(max(0, as_base(m).value + as_base(n).value - 1))
            )
        )
    )
    return replace(inst, func_interp={**inst.func_interp, "add": lossy})
