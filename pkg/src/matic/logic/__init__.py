"""
Stratified logic checker for MaTIC.

Parses formulas, checks stratification and internal/external status, and
applies the idealisation, selection and transference rewrites.
"""

from .finite_model import (
    FiniteModel,
    eval_finite_model,
    extension,
    incremental_set,
    is_inductive,
    nonstandard_witness,
)
from .legality import (
    ComprehensionStatus,
    ComprehensionVerdict,
    check_comprehension,
    comprehensions,
    is_internal,
)
from .parser import (
    BUILTIN_DEFINITIONS,
    FormulaDocument,
    parse_definition,
    parse_document,
    parse_formula,
    parse_term,
)
from .principles import apply_idealisation, apply_selection, apply_transference, reverse_transference
from .stratify import LevelAssignment, NotStratified, is_stratified, stratify_formula, stratify_term
from .syntax import (
    BinOp,
    Comprehension,
    Definition,
    Equal,
    Formula,
    FuncApp,
    Member,
    Modifier,
    Not,
    Num,
    Quant,
    QuantKind,
    Rel,
    SetLit,
    St,
    Term,
    Var,
    free_vars,
)

__all__ = [
    "FiniteModel",
    "eval_finite_model",
    "extension",
    "incremental_set",
    "is_inductive",
    "nonstandard_witness",
    "ComprehensionStatus",
    "ComprehensionVerdict",
    "check_comprehension",
    "comprehensions",
    "is_internal",
    "BUILTIN_DEFINITIONS",
    "FormulaDocument",
    "parse_definition",
    "parse_document",
    "parse_formula",
    "parse_term",
    "apply_idealisation",
    "apply_selection",
    "apply_transference",
    "reverse_transference",
    "LevelAssignment",
    "NotStratified",
    "is_stratified",
    "stratify_formula",
    "stratify_term",
    "BinOp",
    "Comprehension",
    "Definition",
    "Equal",
    "Formula",
    "FuncApp",
    "Member",
    "Modifier",
    "Not",
    "Num",
    "Quant",
    "QuantKind",
    "Rel",
    "SetLit",
    "St",
    "Term",
    "Var",
    "free_vars",
]
