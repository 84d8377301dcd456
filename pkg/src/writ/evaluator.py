"""Big-step call-by-value evaluation with exact step counts and a query log.

Only two things cost a step: a beta reduction and a rule/builtin unfold.
An application contributes the costs of its parts only when at least one
part still has work to do; since finished values cost zero, adding the three
sub-costs is exact and never double counts.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import FuelExhausted, StuckTerm
from .signatures import Builtin, OracleSpec, Signature, with_oracle
from .syntax import (
    App,
    Func,
    Lam,
    Term,
    is_value,
    match_pattern,
    numeral_value,
    render_term,
    spine,
    substitute,
    typecheck,
)

__all__ = ["Fuel", "DEFAULT_FUEL", "EvalResult", "evaluate", "evaluate_with_oracle"]


@dataclass(frozen=True)
class Fuel:
    """Safety budget on rewrite steps."""

    max_steps: int = 10_000_000

    def __post_init__(self) -> None:
        if self.max_steps <= 0:
            raise ValueError("max_steps must be positive")


DEFAULT_FUEL = Fuel()


@dataclass(frozen=True)
class EvalResult:
    """Final value, exact step count, and oracle queries in call order."""

    value: Term
    steps: int
    queries: tuple[int, ...] = ()


class _Run:
    """Mutable state for a single evaluation."""

    __slots__ = ("sig", "steps", "limit", "queries")

    def __init__(self, sig: Signature, fuel: Fuel):
        self.sig = sig
        self.steps = 0
        self.limit = fuel.max_steps
        self.queries: list[int] = []

    def tick(self) -> None:
        self.steps += 1
        if self.steps > self.limit:
            raise FuelExhausted(self.steps)

    def eval(self, t: Term) -> Term:
        if is_value(self.sig, t):
            return t
        # a closed well-typed non-value is an application
        if not isinstance(t, App):
            raise StuckTerm(render_term(t))
        fun = self.eval(t.fun)
        arg = self.eval(t.arg)
        return self.apply(fun, arg)

    def apply(self, fun: Term, arg: Term) -> Term:
        # both sides are values; the application either is itself a value,
        # is a beta redex, or completes a function symbol's argument vector
        t = App(fun, arg)
        if is_value(self.sig, t):
            return t
        if isinstance(fun, Lam):
            self.tick()
            return self.eval(substitute(fun.body, {fun.var: arg}))
        head, args = spine(t)
        if not isinstance(head, Func):
            raise StuckTerm(render_term(t))
        impl = self.sig.func_decl(head.name).impl
        if isinstance(impl, Builtin):
            if impl.is_oracle:
                n = numeral_value(args[0])
                if n is not None:
                    self.queries.append(n)
            self.tick()
            return self.eval(impl.delta(args))
        for rule in impl:
            binding = match_pattern(rule.patterns, args)
            if binding is not None:
                self.tick()
                return self.eval(substitute(rule.rhs, binding))
        raise StuckTerm(render_term(t))


def evaluate(sig: Signature, e: Term, fuel: Fuel = DEFAULT_FUEL) -> EvalResult:
    """Run a closed well-typed term to its value, counting steps exactly.

    Typechecks first as a guard; evaluation itself then cannot get stuck.
    Raises FuelExhausted if the budget runs out.
    """
    typecheck(sig, {}, e)
    run = _Run(sig, fuel)
    v = run.eval(e)
    return EvalResult(v, run.steps, tuple(run.queries))


def evaluate_with_oracle(
    sig: Signature, e: Term, g: OracleSpec, fuel: Fuel = DEFAULT_FUEL
) -> EvalResult:
    """Evaluate under sig extended with the oracle g; every alpha unfold is
    logged in the result's queries."""
    return evaluate(with_oracle(sig, g), e, fuel)
