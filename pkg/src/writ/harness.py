"""Cross-checking verifiers.

Every analysis is replayed against the instrumented evaluator (or, for the
search cost, against an independently coded recurrence) and the comparison
is packaged as a VerifyReport. run_corpus drives a directory of annotated
.wt files and never lets one bad file poison the rest.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Optional, Sequence

from .engine import (
    Base,
    SemVal,
    SFun,
    as_base,
    as_fun,
    denote,
    pair_parts,
    spair,
)
from .errors import FuelExhausted, ParseError, WritError
from .evaluator import DEFAULT_FUEL, Fuel, evaluate, evaluate_with_oracle
from .instantiations import (
    Instantiation,
    bounded_cost,
    cost_exact_inst,
    exact_cost,
    majorant,
    modulus,
    spector_closed_form,
)
from .meta import translate
from .parser import parse_term
from .signatures import (
    OracleSpec,
    Signature,
    Table,
    bar_rec,
    oracle_from_string,
    oracle_label,
    signature_for,
    system_t,
    system_t_list,
)
from .syntax import (
    App,
    Cons,
    Func,
    Term,
    app,
    list_term,
    list_value,
    numeral,
    numeral_value,
    render_term,
    typecheck,
)

__all__ = [
    "VerifyReport",
    "verify_exact_cost",
    "verify_modulus",
    "verify_bound",
    "verify_majorant",
    "verify_spector",
    "verify_file",
    "run_corpus",
    "SEARCH_TEMPLATE",
]

PASS = "pass"
FAIL = "fail"


@dataclass(frozen=True)
class VerifyReport:
    """Outcome of replaying one analysis of one term."""

    term_id: str
    analysis: str
    status: str
    details: str = ""
    evidence: Mapping[str, object] = field(default_factory=dict)
    trials: int = 0
    seed: int = 0

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_dict(self) -> dict:
        return {
            "term_id": self.term_id,
            "analysis": self.analysis,
            "status": self.status,
            "details": self.details,
            "evidence": {k: _jsonable(v) for k, v in self.evidence.items()},
            "trials": self.trials,
            "seed": self.seed,
        }


def _jsonable(v: object) -> object:
    if isinstance(v, tuple):
        return [_jsonable(x) for x in v]
    if isinstance(v, list):
        return [_jsonable(x) for x in v]
    return v


def _fail(
    term_id: str,
    analysis: str,
    details: str,
    evidence: Optional[Mapping[str, object]] = None,
    trials: int = 0,
    seed: int = 0,
) -> VerifyReport:
    return VerifyReport(term_id, analysis, FAIL, details, dict(evidence or {}), trials, seed)


def _ok(
    term_id: str,
    analysis: str,
    evidence: Optional[Mapping[str, object]] = None,
    trials: int = 0,
    seed: int = 0,
) -> VerifyReport:
    return VerifyReport(term_id, analysis, PASS, "", dict(evidence or {}), trials, seed)


def _err(e: WritError) -> str:
    return f"{type(e).__name__}: {e}"


# ---------------------------------------------------------------- exact cost

def verify_exact_cost(
    sig: Signature,
    e: Term,
    term_id: str = "",
    inst: Optional[Instantiation] = None,
    fuel: Fuel = DEFAULT_FUEL,
) -> VerifyReport:
    """Predicted steps must equal observed steps, with zero tolerance."""
    term_id = term_id or render_term(e)
    try:
        res = evaluate(sig, e, fuel)
        rep = exact_cost(e, sig, fuel, inst=inst)
    except WritError as err:
        return _fail(term_id, "cost", _err(err))
    evidence = {"predicted": rep.predicted, "observed": res.steps}
    if rep.predicted != res.steps:
        return _fail(term_id, "cost", "predicted steps differ from observed", evidence)
    return _ok(term_id, "cost", evidence)


# ---------------------------------------------------------------- modulus

def verify_modulus(
    e: Term,
    g: OracleSpec,
    trials: int = 100,
    seed: int = 0,
    window: int = 8,
    term_id: str = "",
    inst: Optional[Instantiation] = None,
    fuel: Fuel = DEFAULT_FUEL,
) -> VerifyReport:
    """Replay the term against the live oracle, then against perturbed ones.

    Checks, in order: the predicted value matches evaluation with the oracle
    installed; every logged query lies in the reported support; and for a
    seeded batch of oracles mutated only at unclaimed positions below the
    modulus and inside a window at or above it, the value never moves.
    """
    term_id = term_id or render_term(e)
    analysis = f"modulus({oracle_label(g)})"
    applied = App(e, Func("alpha"))
    base = system_t()
    try:
        rep = modulus(e, g, fuel, inst=inst)
        res = evaluate_with_oracle(base, applied, g, fuel)
    except WritError as err:
        return _fail(term_id, analysis, _err(err), trials=trials, seed=seed)
    evidence: dict[str, object] = {
        "phi": rep.phi,
        "support": rep.support,
        "predicted_value": rep.predicted_value,
        "observed_value": numeral_value(res.value),
        "queries": res.queries,
    }
    if numeral_value(res.value) != rep.predicted_value:
        return _fail(term_id, analysis, "value differs under the live oracle",
                     evidence, trials, seed)
    if not set(res.queries) <= set(rep.support):
        return _fail(term_id, analysis, "evaluator queried outside the support",
                     evidence, trials, seed)
    rng = random.Random(seed)
    support = set(rep.support)
    mutable = [j for j in range(rep.phi + window) if j not in support]
    ran = 0
    for _ in range(trials):
        if not mutable:
            break
        count = rng.randint(1, min(4, len(mutable)))
        chosen = sorted(rng.sample(mutable, count))
        pairs = tuple(
            (j, g(j) + 1 + rng.randrange(5) if j in chosen else g(j))
            for j in range(rep.phi + window)
        )
        mutated = Table(pairs, default=0)
        try:
            res_m = evaluate_with_oracle(base, applied, mutated, fuel)
        except WritError as err:
            return _fail(term_id, analysis, _err(err),
                         {**evidence, "mutated_positions": chosen}, trials, seed)
        if numeral_value(res_m.value) != rep.predicted_value:
            return _fail(
                term_id,
                analysis,
                "perturbing unclaimed oracle positions changed the value",
                {**evidence, "mutated_positions": chosen,
                 "perturbed_value": numeral_value(res_m.value)},
                trials,
                seed,
            )
        ran += 1
    evidence["perturbations_run"] = ran
    return _ok(term_id, analysis, evidence, trials, seed)


# ---------------------------------------------------------------- bounds

def verify_bound(
    e: Term,
    term_id: str = "",
    inst: Optional[Instantiation] = None,
    fuel: Fuel = DEFAULT_FUEL,
) -> VerifyReport:
    """Observed steps must not exceed the bound; the size bound must cover
    the result (at least one for a numeral, at least the length for a list)."""
    term_id = term_id or render_term(e)
    try:
        rep = bounded_cost(e, fuel, inst=inst)
        res = evaluate(system_t_list(), e, fuel)
    except WritError as err:
        return _fail(term_id, "bound", _err(err))
    evidence: dict[str, object] = {"predicted": rep.predicted, "observed": res.steps}
    if res.steps > rep.predicted:
        return _fail(term_id, "bound", "observed steps exceed the bound", evidence)
    n = numeral_value(res.value)
    items = list_value(res.value)
    if isinstance(rep.semantic, Base):
        size = rep.semantic.value
        evidence["size_bound"] = size
        if n is not None and size < 1:
            return _fail(term_id, "bound", "numeral result needs size at least one", evidence)
        if items is not None:
            evidence["result_length"] = len(items)
            if size < len(items):
                return _fail(term_id, "bound", "size bound below the result length", evidence)
    return _ok(term_id, "bound", evidence)


def verify_majorant(
    e: Term,
    term_id: str = "",
    inst: Optional[Instantiation] = None,
    fuel: Fuel = DEFAULT_FUEL,
) -> VerifyReport:
    """The majorant of a numeral-valued term must dominate its value."""
    term_id = term_id or render_term(e)
    try:
        maj = majorant(e, fuel, inst=inst)
        res = evaluate(signature_for(e), e, fuel)
    except WritError as err:
        return _fail(term_id, "majorant", _err(err))
    n = numeral_value(res.value)
    if n is None or not isinstance(maj, Base):
        return _fail(term_id, "majorant", "majorant checking needs a numeral-valued term",
                     {"value": render_term(res.value)})
    evidence = {"majorant": maj.value, "observed": n}
    if n > maj.value:
        return _fail(term_id, "majorant", "value exceeds its majorant", evidence)
    return _ok(term_id, "majorant", evidence)


# ---------------------------------------------------------------- search

# the canonical unbounded search: extend with the stream given by y until
# the functional w settles on the segment seen so far, return the count of
# extensions made
SEARCH_TEMPLATE = (
    "fn w:(Nat->Nat)->Nat => fn y:Nat->Nat => fn z:List => "
    "bar w (fn u:List => 0) "
    "(fn v:List => fn p:Nat->Nat => succ (p (y (len v)))) z"
)


def _pair_fun(sig: Signature, t: Term, fuel: Fuel) -> SemVal:
    """The effect-paired function denoted by a closed lambda, under exact cost."""
    den = denote(cost_exact_inst(fuel), {}, translate(sig, {}, t))
    _, value = pair_parts(den)
    return value


def _search_recurrence(omega: SemVal, g: SemVal, fuel: Fuel) -> int:
    """Round-by-round unfolding of the search cost, coded independently of
    the closed form: an unsettled round costs a five-step frame plus omega's
    work, and extending costs another five plus the stream's work."""
    w = as_fun(omega)
    gf = as_fun(g)
    costs: list[int] = []
    vals: list[int] = []

    def fill(upto: int) -> None:
        while len(vals) < upto:
            c, v = pair_parts(gf.fn(Base(len(vals))))
            costs.append(c)
            vals.append(as_base(v).value)

    def prefix(n: int) -> SemVal:
        return SFun(
            lambda i: spair(
                1, Base(vals[as_base(i).value] if as_base(i).value < n else 0)
            )
        )

    total = 0
    n = 0
    while True:
        fill(n)
        c_w, v = pair_parts(w.fn(prefix(n)))
        total += 5 + c_w
        if as_base(v).value < n:
            return total
        fill(n + 1)
        total += 5 + costs[n]
        n += 1
        if n > fuel.max_steps:
            raise FuelExhausted(n)


def verify_spector(
    omega_term: Term,
    beta_term: Term,
    term_id: str = "search",
    fuel: Fuel = DEFAULT_FUEL,
) -> VerifyReport:
    """Cross-check the canonical search three ways.

    (i) the fully applied search term's predicted cost equals its observed
    steps; (ii) the closed-form total equals the independently unfolded
    recurrence; (iii) the returned count n really is a settling point:
    omega applied to the padded length-n prefix of the stream answers
    below n.
    """
    sig = bar_rec()
    try:
        search = parse_term(SEARCH_TEMPLATE)
        full = app(search, omega_term, beta_term, Cons("nil"))
        res = evaluate(sig, full, fuel)
        rep = exact_cost(full, sig, fuel)
        omega_fun = _pair_fun(sig, omega_term, fuel)
        beta_fun = _pair_fun(sig, beta_term, fuel)
        closed = spector_closed_form(omega_fun, beta_fun, fuel)
        recurrence = _search_recurrence(omega_fun, beta_fun, fuel)
    except WritError as err:
        return _fail(term_id, "spector", _err(err))
    evidence: dict[str, object] = {
        "predicted": rep.predicted,
        "observed": res.steps,
        "closed_form": closed,
        "recurrence": recurrence,
    }
    if rep.predicted != res.steps:
        return _fail(term_id, "spector", "full-term cost prediction missed", evidence)
    if closed != recurrence:
        return _fail(term_id, "spector", "closed form disagrees with the recurrence",
                     evidence)
    n = numeral_value(res.value)
    if n is None:
        return _fail(term_id, "spector", "search did not return a numeral", evidence)
    evidence["returned"] = n
    try:
        stream = [
            numeral_value(evaluate(sig, App(beta_term, numeral(i)), fuel).value)
            for i in range(n)
        ]
        probe = app(omega_term, App(Func("ext"), list_term(stream)))
        settled = numeral_value(evaluate(sig, probe, fuel).value)
    except WritError as err:
        return _fail(term_id, "spector", _err(err), evidence)
    evidence["settled_at"] = settled
    if settled is None or settled >= n:
        return _fail(term_id, "spector", "returned count is not a settling point",
                     evidence)
    return _ok(term_id, "spector", evidence)


# ---------------------------------------------------------------- corpus

_HEADER_RE = re.compile(r"^\s*--\s*analyses:\s*(.+?)\s*$")


def _split_specs(text: str) -> list[str]:
    pieces: list[str] = []
    depth = 0
    cur: list[str] = []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            pieces.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    tail = "".join(cur).strip()
    if tail:
        pieces.append(tail)
    return [p for p in pieces if p]


def _annotations(text: str) -> list[str]:
    lines = text.splitlines()
    if not lines:
        return []
    m = _HEADER_RE.match(lines[0])
    return _split_specs(m.group(1)) if m else []


def _dispatch(
    spec: str,
    term: Term,
    term_id: str,
    fuel: Fuel,
    trials: int,
    seed: int,
) -> VerifyReport:
    if spec == "cost":
        return verify_exact_cost(signature_for(term), term, term_id=term_id, fuel=fuel)
    if spec == "bound":
        return verify_bound(term, term_id=term_id, fuel=fuel)
    if spec == "majorant":
        return verify_majorant(term, term_id=term_id, fuel=fuel)
    m = re.fullmatch(r"modulus\((.*)\)", spec)
    if m:
        try:
            g = oracle_from_string(m.group(1))
        except ValueError as err:
            return _fail(term_id, spec, f"bad oracle: {err}")
        return verify_modulus(
            term, g, trials=trials, seed=seed, term_id=term_id, fuel=fuel
        )
    return _fail(term_id, spec, f"unknown analysis {spec!r}")


def verify_file(
    path: str | Path,
    fuel: Fuel = DEFAULT_FUEL,
    trials: int = 100,
    seed: int = 0,
) -> list[VerifyReport]:
    """Run every annotated analysis of one .wt file."""
    path = Path(path)
    term_id = path.name
    text = path.read_text(encoding="utf-8")
    specs = _annotations(text)
    try:
        term = parse_term(text)
    except ParseError as err:
        return [_fail(term_id, "parse", str(err))]
    try:
        typecheck(signature_for(term), {}, term)
    except WritError as err:
        # one report for the file; the analyses are not attempted
        return [_fail(term_id, "check", _err(err))]
    return [_dispatch(s, term, term_id, fuel, trials, seed) for s in specs]


def run_corpus(
    path: str | Path,
    fuel: Fuel = DEFAULT_FUEL,
    trials: int = 100,
    seed: int = 0,
) -> list[VerifyReport]:
    """Verify a directory of annotated .wt files, one report per analysis.

    Files are processed in name order; a file that fails to parse or check
    contributes a single failure report and the rest still run. Results are
    deterministic for a fixed seed.
    """
    reports: list[VerifyReport] = []
    for file in sorted(Path(path).glob("*.wt")):
        reports.extend(verify_file(file, fuel=fuel, trials=trials, seed=seed))
    return reports
