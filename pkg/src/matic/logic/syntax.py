"""
Abstract syntax for the stratified first-order language.

Terms: variables, numerals, function terms (`n*x`), set literals `[x, y]`
and comprehension terms `{x | φ}`. Formulas: membership, equality, named
relations (comparisons included), `st(t)`, connectives and quantifiers with
a plain, standard or standard-finite modifier.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Dict, FrozenSet, Iterator, Optional, Tuple, Union

COMPARATORS = ("<=", ">=", "<", ">")
INFIX_FUNCTIONS = ("*", "+")


class Modifier(Enum):
    PLAIN = ""
    ST = "st"
    STFIN = "stfin"


class QuantKind(Enum):
    FORALL = "forall"
    EXISTS = "exists"


# Terms


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Num:
    value: int

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class FuncApp:
    name: str
    args: Tuple["Term", ...]

    def __str__(self):
        if self.name in INFIX_FUNCTIONS and len(self.args) == 2:
            return f"{self.args[0]}{self.name}{self.args[1]}"
        return f"{self.name}({', '.join(str(a) for a in self.args)})"


@dataclass(frozen=True)
class SetLit:
    elements: Tuple["Term", ...]

    def __str__(self):
        return "[" + ", ".join(str(e) for e in self.elements) + "]"


@dataclass(frozen=True)
class Comprehension:
    var: str
    body: "Formula"

    def __str__(self):
        return f"{{{self.var} | {self.body}}}"


Term = Union[Var, Num, FuncApp, SetLit, Comprehension]


# Formulas


@dataclass(frozen=True)
class Member:
    element: Term
    container: Term

    def __str__(self):
        return f"{self.element} in {self.container}"


@dataclass(frozen=True)
class Equal:
    left: Term
    right: Term

    def __str__(self):
        return f"{self.left} = {self.right}"


@dataclass(frozen=True)
class Rel:
    """Named relation; comparisons are relations with model-supplied meaning."""

    name: str
    args: Tuple[Term, ...]

    def __str__(self):
        if self.name in COMPARATORS and len(self.args) == 2:
            return f"{self.args[0]} {self.name} {self.args[1]}"
        return f"{self.name}({', '.join(str(a) for a in self.args)})"


@dataclass(frozen=True)
class St:
    term: Term

    def __str__(self):
        return f"st({self.term})"


@dataclass(frozen=True)
class Not:
    body: "Formula"

    def __str__(self):
        return f"not {_wrap(self.body)}"


@dataclass(frozen=True)
class BinOp:
    op: str  # and | or | -> | <->
    left: "Formula"
    right: "Formula"

    def __str__(self):
        left = f"({self.left})" if isinstance(self.left, Quant) else str(self.left)
        return f"({left} {self.op} {self.right})"


@dataclass(frozen=True)
class Quant:
    kind: QuantKind
    var: str
    body: "Formula"
    modifier: Modifier = Modifier.PLAIN
    bound: Optional[Term] = None

    def __str__(self):
        head = self.kind.value + (f"^{self.modifier.value}" if self.modifier is not Modifier.PLAIN else "")
        bound = f" in {self.bound}" if self.bound is not None else ""
        return f"{head} {self.var}{bound} . {self.body}"


Formula = Union[Member, Equal, Rel, St, Not, BinOp, Quant]
ATOMS = (Member, Equal, Rel, St)


def _wrap(f: "Formula") -> str:
    return f"({f})" if isinstance(f, Quant) else str(f)


def And(left: Formula, right: Formula) -> BinOp:
    return BinOp("and", left, right)


def Or(left: Formula, right: Formula) -> BinOp:
    return BinOp("or", left, right)


def Implies(left: Formula, right: Formula) -> BinOp:
    return BinOp("->", left, right)


def Iff(left: Formula, right: Formula) -> BinOp:
    return BinOp("<->", left, right)


@dataclass(frozen=True)
class Definition:
    """`def name(params) := body`; the body may use the parameters freely."""

    name: str
    params: Tuple[str, ...]
    body: Formula

    def __str__(self):
        return f"def {self.name}({', '.join(self.params)}) := {self.body}"


Definitions = Dict[str, Definition]


# Traversal


def subterms(t: Term) -> Iterator[Union[Term, Formula]]:
    if isinstance(t, FuncApp):
        yield from t.args
    elif isinstance(t, SetLit):
        yield from t.elements
    elif isinstance(t, Comprehension):
        yield t.body


def children(f: Formula) -> Iterator[Union[Term, Formula]]:
    if isinstance(f, Member):
        yield from (f.element, f.container)
    elif isinstance(f, Equal):
        yield from (f.left, f.right)
    elif isinstance(f, Rel):
        yield from f.args
    elif isinstance(f, St):
        yield f.term
    elif isinstance(f, Not):
        yield f.body
    elif isinstance(f, BinOp):
        yield from (f.left, f.right)
    elif isinstance(f, Quant):
        if f.bound is not None:
            yield f.bound
        yield f.body


def walk(node: Union[Term, Formula]) -> Iterator[Union[Term, Formula]]:
    """Pre-order traversal over formulas and terms."""
    yield node
    inner = subterms(node) if isinstance(node, (Var, Num, FuncApp, SetLit, Comprehension)) else children(node)
    for child in inner:
        yield from walk(child)


def free_vars(node: Union[Term, Formula]) -> FrozenSet[str]:
    if isinstance(node, Var):
        return frozenset([node.name])
    if isinstance(node, Num):
        return frozenset()
    if isinstance(node, Comprehension):
        return free_vars(node.body) - {node.var}
    if isinstance(node, Quant):
        bound = free_vars(node.bound) if node.bound is not None else frozenset()
        return bound | (free_vars(node.body) - {node.var})
    inner = subterms(node) if isinstance(node, (FuncApp, SetLit)) else children(node)
    result: FrozenSet[str] = frozenset()
    for child in inner:
        result |= free_vars(child)
    return result


def relation_names(node: Union[Term, Formula]) -> FrozenSet[str]:
    return frozenset(n.name for n in walk(node) if isinstance(n, Rel))
