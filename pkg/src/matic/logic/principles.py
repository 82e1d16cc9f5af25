"""
Idealisation, selection and transference as pattern-directed rewrites.

Each rewrite checks its legality preconditions first and raises instead of
producing an unsound formula.
"""

from typing import Iterable, Optional, Set

import structlog

from matic.errors import IllegalSetFormation, IllegalTransfer, NotStratifiedError, PatternMismatch

from .legality import ComprehensionStatus, check_comprehension, is_internal
from .syntax import (
    BinOp,
    Comprehension,
    Definitions,
    Formula,
    Member,
    Modifier,
    Not,
    Quant,
    QuantKind,
    Term,
    Var,
    free_vars,
)

logger = structlog.get_logger(__name__)


def apply_idealisation(f: Formula, definitions: Optional[Definitions] = None) -> Formula:
    """
    forall^stfin Z . exists x . forall y in Z . φ  ==>  exists x . forall^st y . φ

    φ must be internal and must not mention Z.

    Raises:
        PatternMismatch: if f does not have the idealisation shape
    """
    if not (isinstance(f, Quant) and f.kind is QuantKind.FORALL and f.modifier is Modifier.STFIN and f.bound is None):
        raise PatternMismatch("Idealisation expects 'forall^stfin Z . exists x . forall y in Z . ...'")
    inner = f.body
    if not (
        isinstance(inner, Quant)
        and inner.kind is QuantKind.EXISTS
        and inner.modifier is Modifier.PLAIN
        and inner.bound is None
    ):
        raise PatternMismatch("Idealisation expects an unbounded plain 'exists x' under 'forall^stfin Z'")
    core = inner.body
    if not (
        isinstance(core, Quant)
        and core.kind is QuantKind.FORALL
        and core.modifier is Modifier.PLAIN
        and core.bound == Var(f.var)
    ):
        raise PatternMismatch(f"Idealisation expects 'forall y in {f.var}' under 'exists {inner.var}'")
    phi = core.body
    if f.var in free_vars(phi):
        raise PatternMismatch(f"The idealised body may not mention {f.var}")
    if not is_internal(phi, definitions):
        raise PatternMismatch("Idealisation applies to internal formulas only")
    result = Quant(
        QuantKind.EXISTS,
        inner.var,
        Quant(QuantKind.FORALL, core.var, phi, Modifier.ST),
    )
    logger.debug("Idealisation applied", result=str(result))
    return result


def _fresh(name: str, avoid: Set[str]) -> str:
    candidate, k = name, 0
    while candidate in avoid:
        k += 1
        candidate = f"{name}{k}"
    return candidate


def apply_selection(
    x: Term, y: Term, var: str = "z", definitions: Optional[Definitions] = None
) -> Comprehension:
    """
    Build {z | z in X and z in Y} and certify it as a legal set.

    Args:
        x: Predicate term X
        y: Predicate term Y
        var: Preferred name of the comprehension variable

    Returns:
        The comprehension, {z | z in X} when X and Y coincide

    Raises:
        IllegalSetFormation: if X or Y is external
        NotStratifiedError: if the result cannot be stratified
    """
    for side, term in (("X", x), ("Y", y)):
        if not is_internal(term, definitions):
            raise IllegalSetFormation(f"Selection needs an internal predicate {side}", predicate=str(term))
    z = _fresh(var, set(free_vars(x) | free_vars(y)))
    if x == y:
        body: Formula = Member(Var(z), x)
    else:
        body = BinOp("and", Member(Var(z), x), Member(Var(z), y))
    term = Comprehension(z, body)
    verdict = check_comprehension(term, definitions)
    if verdict.status is ComprehensionStatus.ILLEGAL_SET_FORMATION:
        raise IllegalSetFormation("Selection produced an external comprehension", term=str(term))
    if verdict.status is ComprehensionStatus.NOT_STRATIFIED:
        raise NotStratifiedError(f"Selection result {term} is not stratified", list(verdict.cycle))
    return term


def _transfer_nested(f: Formula, standard: Set[str], definitions: Optional[Definitions]) -> Formula:
    """Drop st modifiers of nested quantifiers whose transfer is legal, innermost first."""
    if isinstance(f, Quant):
        inner_standard = standard | {f.var} if f.modifier is Modifier.ST else standard - {f.var}
        body = _transfer_nested(f.body, inner_standard, definitions)
        if f.modifier is Modifier.ST:
            params = free_vars(body) - {f.var}
            if f.bound is not None:
                params |= free_vars(f.bound)
            if is_internal(body, definitions) and params <= standard:
                return Quant(f.kind, f.var, body, Modifier.PLAIN, f.bound)
        return Quant(f.kind, f.var, body, f.modifier, f.bound)
    if isinstance(f, Not):
        return Not(_transfer_nested(f.body, standard, definitions))
    if isinstance(f, BinOp):
        return BinOp(
            f.op,
            _transfer_nested(f.left, standard, definitions),
            _transfer_nested(f.right, standard, definitions),
        )
    return f


def _check_transfer(quant: Quant, body: Formula, standard: Set[str], definitions: Optional[Definitions]) -> None:
    if not is_internal(body, definitions):
        raise IllegalTransfer(
            IllegalTransfer.EXTERNAL_FORMULA,
            f"the body of '{quant.kind.value} {quant.var}' is external",
        )
    params = free_vars(body) - {quant.var}
    if quant.bound is not None:
        params |= free_vars(quant.bound)
    loose = sorted(params - standard)
    if loose:
        raise IllegalTransfer(
            IllegalTransfer.NON_STANDARD_PARAMETER,
            f"parameters not declared standard: {', '.join(loose)}",
        )


def apply_transference(
    f: Formula, standard_params: Iterable[str] = (), definitions: Optional[Definitions] = None
) -> Formula:
    """
    forall^st y . A(y)  ==>  forall y . A(y)   (and the dual exists^st form)

    Nested standard quantifiers inside A are transferred first; variables
    bound by an enclosing standard quantifier count as standard parameters.

    Args:
        f: Formula of shape forall^st y . A or exists^st y . A
        standard_params: Free parameters declared standard

    Raises:
        PatternMismatch: if f is not a standard quantifier
        IllegalTransfer: ExternalFormula if A stays external,
            NonStandardParameter if a free parameter is not declared standard
    """
    if not (isinstance(f, Quant) and f.modifier is Modifier.ST):
        raise PatternMismatch("Transference expects 'forall^st y . A(y)' or 'exists^st y . A(y)'")
    standard = set(standard_params)
    body = _transfer_nested(f.body, standard | {f.var}, definitions)
    _check_transfer(f, body, standard, definitions)
    result = Quant(f.kind, f.var, body, Modifier.PLAIN, f.bound)
    logger.debug("Transference applied", result=str(result))
    return result


def reverse_transference(
    f: Formula, standard_params: Iterable[str] = (), definitions: Optional[Definitions] = None
) -> Formula:
    """
    forall y . A(y)  ==>  forall^st y . A(y), under the same legality rules.

    Raises:
        PatternMismatch: if f is not a plain quantifier
        IllegalTransfer: as for apply_transference
    """
    if not (isinstance(f, Quant) and f.modifier is Modifier.PLAIN):
        raise PatternMismatch("Reverse transference expects 'forall y . A(y)' or 'exists y . A(y)'")
    _check_transfer(f, f.body, set(standard_params), definitions)
    return Quant(f.kind, f.var, f.body, Modifier.ST, f.bound)
