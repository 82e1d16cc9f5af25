"""
Internal/external classification and set-formation legality.

A formula is external when it mentions `st(.)`, uses a standard or
standard-finite quantifier, or calls a definition whose body is external.
Only internal, stratified formulas may form sets.
"""

from dataclasses import dataclass
from enum import Enum
from typing import FrozenSet, Optional, Tuple, Union

from matic.errors import DataError

from .parser import definitions_with
from .stratify import NotStratified, stratify_term
from .syntax import Comprehension, Definitions, Formula, Modifier, Quant, Rel, St, Term, walk


def _external_definitions(definitions: Definitions) -> FrozenSet[str]:
    external = set()
    changed = True
    while changed:
        changed = False
        for name, d in definitions.items():
            if name in external:
                continue
            if _locally_external(d.body) or any(
                isinstance(n, Rel) and n.name in external for n in walk(d.body)
            ):
                external.add(name)
                changed = True
    return frozenset(external)


def _locally_external(node: Union[Formula, Term]) -> bool:
    for n in walk(node):
        if isinstance(n, St):
            return True
        if isinstance(n, Quant) and n.modifier is not Modifier.PLAIN:
            return True
    return False


def is_internal(f: Union[Formula, Term], definitions: Optional[Definitions] = None) -> bool:
    """
    True iff f contains no st(.) and no st/stfin quantifier, directly or
    through the definitions it calls.

    Args:
        f: Formula or term
        definitions: Named definitions; the built-ins `limited` and
            `infinitesimal` are always available
    """
    defs = definitions_with(definitions)
    if _locally_external(f):
        return False
    external = _external_definitions(defs)
    return not any(isinstance(n, Rel) and n.name in external for n in walk(f))


class ComprehensionStatus(Enum):
    LEGAL = "Legal"
    ILLEGAL_SET_FORMATION = "IllegalSetFormation"
    NOT_STRATIFIED = "NotStratified"


@dataclass(frozen=True)
class ComprehensionVerdict:
    status: ComprehensionStatus
    cycle: Tuple[str, ...] = ()

    @property
    def legal(self) -> bool:
        return self.status is ComprehensionStatus.LEGAL

    def to_dict(self):
        return {"status": self.status.value, "cycle": list(self.cycle)}


def check_comprehension(term: Comprehension, definitions: Optional[Definitions] = None) -> ComprehensionVerdict:
    """
    Legality of forming {x | φ}.

    External bodies are reported before stratification failures.
    """
    if not isinstance(term, Comprehension):
        raise DataError("check_comprehension expects a comprehension term", term=str(term))
    if not is_internal(term.body, definitions):
        return ComprehensionVerdict(ComprehensionStatus.ILLEGAL_SET_FORMATION)
    result = stratify_term(term)
    if isinstance(result, NotStratified):
        return ComprehensionVerdict(ComprehensionStatus.NOT_STRATIFIED, result.cycle)
    return ComprehensionVerdict(ComprehensionStatus.LEGAL)


def comprehensions(node: Union[Formula, Term]):
    """Every comprehension term occurring in node, outermost first."""
    return [n for n in walk(node) if isinstance(n, Comprehension)]
