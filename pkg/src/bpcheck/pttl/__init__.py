"""Probabilistic tree temporal logic: syntax and model checking."""

from .checker import (
    Checker,
    ProbRecord,
    StatusProcess,
    ag_to_af_targets,
    build_ar_product,
    build_au_product,
    prob_ax,
    prob_ex,
    sat_set,
)
from .syntax import (
    AF,
    AG,
    AR,
    AU,
    AX,
    EF,
    EG,
    ER,
    EU,
    EX,
    FALSE,
    And,
    Atom,
    Implies,
    Not,
    Or,
    Prob,
    TrueF,
    format_formula,
    is_qualitative,
    parse_formula,
)
