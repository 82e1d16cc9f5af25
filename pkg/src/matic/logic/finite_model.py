"""
Finite models for evaluating formulas.

Plain quantifiers range over the universe, standard ones over the marked
elements, and standard-finite ones over the subsets of the marked elements.
Set-valued terms evaluate to frozensets.
"""

import itertools
import operator
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, FrozenSet, Hashable, Iterable, List, Mapping, Optional, Tuple, Union

from matic.errors import AllStandard, ConfigError, DataError, UnboundVariable

from .parser import definitions_with
from .syntax import (
    BinOp,
    Comprehension,
    Definitions,
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

Element = Hashable
Relation = Union[Callable[..., bool], FrozenSet[Tuple[Any, ...]]]

DEFAULT_RELATIONS: Dict[str, Callable[..., bool]] = {
    "<=": operator.le,
    ">=": operator.ge,
    "<": operator.lt,
    ">": operator.gt,
}
DEFAULT_FUNCTIONS: Dict[str, Callable[..., Any]] = {"*": operator.mul, "+": operator.add}


@dataclass
class FiniteModel:
    """
    A finite universe with a standard mark.

    `membership` holds extra (element, container) pairs for containers that
    are not frozensets; `constants` names elements (for example the full
    universe as `V`).
    """

    universe: Tuple[Element, ...]
    standard: FrozenSet[Element] = frozenset()
    membership: FrozenSet[Tuple[Element, Element]] = frozenset()
    zero: Element = frozenset()
    constants: Dict[str, Element] = field(default_factory=dict)
    relations: Dict[str, Relation] = field(default_factory=dict)
    functions: Dict[str, Callable[..., Any]] = field(default_factory=dict)

    def __post_init__(self):
        self.universe = tuple(dict.fromkeys(self.universe))
        self.standard = frozenset(self.standard)
        outside = [x for x in self.standard if x not in set(self.universe)]
        if outside:
            raise ConfigError("Standard elements must belong to the universe", outside=sorted(map(str, outside)))

    @classmethod
    def of(cls, universe: Iterable[Element], standard: Optional[Iterable[Element]] = None, **kwargs) -> "FiniteModel":
        universe = tuple(universe)
        return cls(universe, frozenset(universe if standard is None else standard), **kwargs)

    @property
    def standard_elements(self) -> List[Element]:
        return [x for x in self.universe if x in self.standard]

    def standard_finite_sets(self) -> List[FrozenSet[Element]]:
        marked = self.standard_elements
        return [
            frozenset(c) for size in range(len(marked) + 1) for c in itertools.combinations(marked, size)
        ]

    def contains(self, container: Any, element: Any) -> bool:
        if isinstance(container, frozenset):
            return element in container
        return (element, container) in self.membership


class _Evaluator:
    def __init__(self, model: FiniteModel, definitions: Definitions):
        self.model = model
        self.definitions = definitions
        self.relations: Dict[str, Relation] = {**DEFAULT_RELATIONS, **model.relations}
        self.functions = {**DEFAULT_FUNCTIONS, **model.functions}

    def term(self, t: Term, env: Mapping[str, Any]) -> Any:
        if isinstance(t, Var):
            if t.name in env:
                return env[t.name]
            if t.name in self.model.constants:
                return self.model.constants[t.name]
            raise UnboundVariable(f"Variable {t.name!r} is not bound", variable=t.name)
        if isinstance(t, Num):
            return t.value
        if isinstance(t, SetLit):
            return frozenset(self.term(e, env) for e in t.elements)
        if isinstance(t, FuncApp):
            fn = self.functions.get(t.name)
            if fn is None:
                raise DataError(f"No interpretation for function {t.name!r}", function=t.name)
            return fn(*(self.term(a, env) for a in t.args))
        if isinstance(t, Comprehension):
            return frozenset(x for x in self.model.universe if self.formula(t.body, {**env, t.var: x}))
        raise DataError(f"Unknown term {t!r}")

    def _relation(self, f: Rel, env: Mapping[str, Any]) -> bool:
        args = tuple(self.term(a, env) for a in f.args)
        rel = self.relations.get(f.name)
        if rel is not None:
            if callable(rel):
                try:
                    return bool(rel(*args))
                except TypeError:
                    return False
            return args in rel
        definition = self.definitions.get(f.name)
        if definition is None:
            raise DataError(f"No interpretation for relation {f.name!r}", relation=f.name)
        if len(definition.params) != len(args):
            raise DataError(f"{f.name} takes {len(definition.params)} arguments", relation=f.name)
        return self.formula(definition.body, dict(zip(definition.params, args)))

    def domain(self, q: Quant, env: Mapping[str, Any]) -> List[Any]:
        if q.modifier is Modifier.ST:
            values: List[Any] = self.model.standard_elements
        elif q.modifier is Modifier.STFIN:
            values = self.model.standard_finite_sets()
        else:
            values = list(self.model.universe)
        if q.bound is not None:
            container = self.term(q.bound, env)
            values = [v for v in values if self.model.contains(container, v)]
        return values

    def formula(self, f: Formula, env: Mapping[str, Any]) -> bool:
        if isinstance(f, Member):
            return self.model.contains(self.term(f.container, env), self.term(f.element, env))
        if isinstance(f, Equal):
            return self.term(f.left, env) == self.term(f.right, env)
        if isinstance(f, Rel):
            return self._relation(f, env)
        if isinstance(f, St):
            return self.term(f.term, env) in self.model.standard
        if isinstance(f, Not):
            return not self.formula(f.body, env)
        if isinstance(f, BinOp):
            left = self.formula(f.left, env)
            if f.op == "and":
                return left and self.formula(f.right, env)
            if f.op == "or":
                return left or self.formula(f.right, env)
            if f.op == "->":
                return (not left) or self.formula(f.right, env)
            return left == self.formula(f.right, env)
        if isinstance(f, Quant):
            values = self.domain(f, env)
            results = (self.formula(f.body, {**env, f.var: v}) for v in values)
            return all(results) if f.kind is QuantKind.FORALL else any(results)
        raise DataError(f"Unknown formula {f!r}")


def eval_finite_model(
    f: Formula,
    m: FiniteModel,
    env: Optional[Mapping[str, Any]] = None,
    definitions: Optional[Definitions] = None,
) -> bool:
    """
    Truth of f in m under variable bindings env.

    Raises:
        UnboundVariable: if a free variable has no binding or constant
    """
    env = dict(env or {})
    unbound = sorted(free_vars(f) - set(env) - set(m.constants))
    if unbound:
        raise UnboundVariable(f"Unbound variables: {', '.join(unbound)}", variables=unbound)
    return _Evaluator(m, definitions_with(definitions)).formula(f, env)


def extension(term: Comprehension, m: FiniteModel, definitions: Optional[Definitions] = None) -> FrozenSet[Element]:
    """Elements of the universe satisfying a comprehension term."""
    return _Evaluator(m, definitions_with(definitions)).term(term, {})


def incremental_set(a: Iterable[FrozenSet[Element]], m: FiniteModel) -> FrozenSet[FrozenSet[Element]]:
    """{ a ∪ {x} | a ∈ A, x ∈ universe, x ∉ a }"""
    return frozenset(
        frozenset(member) | {x} for member in a for x in m.universe if x not in member
    )


def is_inductive(a: Iterable[FrozenSet[Element]], m: FiniteModel) -> bool:
    """Contains 0 (the empty set) and the incremental set of each member."""
    members = frozenset(frozenset(x) for x in a)
    if frozenset(m.zero) not in members:
        return False
    return all(incremental_set([member], m) <= members for member in members)


def _element_key(x: Element):
    if isinstance(x, bool):
        return (1, str(x))
    if isinstance(x, (int, float)):
        return (0, x)
    return (1, str(x))


def nonstandard_witness(m: FiniteModel) -> Element:
    """
    Least element not marked standard (numbers first, then by text).

    Raises:
        AllStandard: when every element is marked
    """
    unmarked = [x for x in m.universe if x not in m.standard]
    if not unmarked:
        raise AllStandard("Every element of the model is standard", size=len(m.universe))
    return min(unmarked, key=_element_key)
