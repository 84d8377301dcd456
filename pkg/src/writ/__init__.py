"""A small typed rewrite language with exact step counting, plus four
effect-based static analyses of the same terms: oracle-continuity moduli,
exact cost prediction, size-based cost bounds, and majorants.

The usual flow: parse a term, pick (or infer) a signature, then either run
it with the evaluator or translate it and interpret the translation under
one of the instantiations. The harness replays every analysis against the
evaluator and reports agreement.
"""

from .errors import (
    DuplicateSymbol,
    FuelExhausted,
    MetaTypeMismatch,
    MissingInterpretation,
    ParseError,
    ShapeMismatch,
    StuckTerm,
    TypeMismatch,
    UnboundVariable,
    UndeclaredSymbol,
    UnsupportedSymbol,
    WritError,
)
from .syntax import (
    App,
    Arrow,
    Cons,
    Data,
    Func,
    LIST,
    Lam,
    NAT,
    Pattern,
    PCons,
    PVar,
    Term,
    Ty,
    Var,
    app,
    free_vars,
    is_value,
    list_term,
    list_value,
    match_pattern,
    numeral,
    numeral_value,
    render_term,
    render_type,
    spine,
    substitute,
    symbols,
    typecheck,
)
from .parser import parse_term, parse_type
from .signatures import (
    Builtin,
    Constant,
    ConsDecl,
    FuncDecl,
    Identity,
    OracleSpec,
    Rule,
    Signature,
    Table,
    bar_rec,
    oracle_from_json,
    oracle_from_string,
    oracle_label,
    signature_for,
    system_t,
    system_t_list,
    with_oracle,
)
from .evaluator import DEFAULT_FUEL, EvalResult, Fuel, evaluate, evaluate_with_oracle
from .meta import (
    BCons,
    BFunc,
    GAMMA,
    Gamma,
    IOTA,
    Inc,
    Com,
    Iota,
    MApp,
    MArrow,
    MData,
    MLam,
    MPair,
    MVar,
    MetaTerm,
    MetaType,
    Prod,
    ProjL,
    ProjR,
    bcons_type,
    bfunc_type,
    lift,
    meta_typecheck,
    render_meta,
    render_meta_type,
    translate,
)
from .engine import (
    Base,
    BaseList,
    COST,
    Eff,
    EffectTriple,
    Instantiation,
    QUERIES,
    SemVal,
    SFun,
    SPair,
    TRIVIAL,
    as_base,
    as_eff,
    as_fun,
    as_list,
    as_pair,
    compose,
    denote,
    pair_parts,
    pure_denote,
    render_semval,
    spair,
)
from .instantiations import (
    BOUND,
    CostReport,
    EXACT,
    ModulusReport,
    bounded_cost,
    continuity_inst,
    cost_bounded_inst,
    cost_exact_inst,
    exact_cost,
    majorant,
    majorizability_inst,
    modulus,
    semantic_join,
    spector_closed_form,
)
from .harness import (
    SEARCH_TEMPLATE,
    VerifyReport,
    run_corpus,
    verify_bound,
    verify_exact_cost,
    verify_file,
    verify_majorant,
    verify_modulus,
    verify_spector,
)

__version__ = "0.1.0"
