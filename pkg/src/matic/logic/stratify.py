"""
Stratification checks for MaTIC.

A formula is stratified when its variables admit integer levels with
level(y) = level(x) + 1 for every `x in y` and equal levels on both sides
of `=` and across relation arguments. Set literals and comprehension terms
sit one level above their elements.
"""

from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Set, Tuple, Union

import networkx as nx
import structlog

from matic.errors import InternalError

from .syntax import (
    BinOp,
    Comprehension,
    Equal,
    Formula,
    FuncApp,
    Member,
    Not,
    Num,
    Quant,
    Rel,
    SetLit,
    St,
    Term,
    Var,
    free_vars,
)

logger = structlog.get_logger(__name__)


@dataclass(frozen=True)
class LevelAssignment:
    """Levels of the formula's variables, each connected group shifted to start at 0."""

    levels: Dict[str, int]


@dataclass(frozen=True)
class NotStratified:
    cycle: Tuple[str, ...]

    def render(self) -> str:
        return " -> ".join(self.cycle)


StratifyResult = Union[LevelAssignment, NotStratified]


@dataclass
class _Constraints:
    """Offset constraints: an edge (u, v, w) means level(v) = level(u) + w."""

    edges: List[Tuple[str, str, int]] = field(default_factory=list)
    variables: List[str] = field(default_factory=list)
    taken: Set[str] = field(default_factory=set)

    def bind(self, name: str) -> str:
        fresh, k = name, 0
        while fresh in self.taken:
            k += 1
            fresh = f"{name}_{k}"
        self.taken.add(fresh)
        self.variables.append(fresh)
        return fresh

    def use(self, name: str, scope: Dict[str, str]) -> str:
        if name in scope:
            return scope[name]
        if name not in self.variables:
            self.variables.append(name)
        return name

    def link(self, u: str, v: str, w: int) -> None:
        self.edges.append((u, v, w))

    def term(self, t: Term, scope: Dict[str, str]) -> str:
        if isinstance(t, Var):
            return self.use(t.name, scope)
        if isinstance(t, Num):
            return f"#{t.value}"
        if isinstance(t, SetLit):
            elements = [self.term(e, scope) for e in t.elements]
            node = f"[{', '.join(elements)}]"
            for element in elements:
                self.link(element, node, 1)
            return node
        if isinstance(t, FuncApp):
            args = [self.term(a, scope) for a in t.args]
            node = f"{t.name}({', '.join(args)})"
            for a in args:
                self.link(a, node, 0)
            return node
        if isinstance(t, Comprehension):
            inner = dict(scope)
            var = self.bind(t.var)
            inner[t.var] = var
            self.formula(t.body, inner)
            node = f"{{{var} | {t.body}}}"
            self.link(var, node, 1)
            return node
        raise InternalError(f"Unknown term {t!r}")

    def formula(self, f: Formula, scope: Dict[str, str]) -> None:
        if isinstance(f, Member):
            self.link(self.term(f.element, scope), self.term(f.container, scope), 1)
        elif isinstance(f, Equal):
            self.link(self.term(f.left, scope), self.term(f.right, scope), 0)
        elif isinstance(f, Rel):
            nodes = [self.term(a, scope) for a in f.args]
            for other in nodes[1:]:
                self.link(nodes[0], other, 0)
        elif isinstance(f, St):
            self.term(f.term, scope)
        elif isinstance(f, Not):
            self.formula(f.body, scope)
        elif isinstance(f, BinOp):
            self.formula(f.left, scope)
            self.formula(f.right, scope)
        elif isinstance(f, Quant):
            inner = dict(scope)
            var = self.bind(f.var)
            inner[f.var] = var
            if f.bound is not None:
                self.link(var, self.term(f.bound, scope), 1)
            self.formula(f.body, inner)
        else:
            raise InternalError(f"Unknown formula {f!r}")


def _solve(constraints: _Constraints) -> StratifyResult:
    graph: Dict[str, List[Tuple[str, int]]] = {}
    for u, v, w in constraints.edges:
        graph.setdefault(u, []).append((v, w))
        graph.setdefault(v, []).append((u, -w))
    for name in constraints.variables:
        graph.setdefault(name, [])

    level: Dict[str, int] = {}
    tree = nx.Graph()
    components: List[List[str]] = []
    for root in graph:
        if root in level:
            continue
        level[root] = 0
        tree.add_node(root)
        component = [root]
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for v, w in graph[u]:
                if v not in level:
                    level[v] = level[u] + w
                    tree.add_edge(u, v)
                    component.append(v)
                    queue.append(v)
                elif level[v] != level[u] + w:
                    path = nx.shortest_path(tree, v, u) if u != v else [u]
                    return NotStratified(tuple(path + [v]))
        components.append(component)

    for component in components:
        low = min(level[n] for n in component)
        for n in component:
            level[n] -= low
    return LevelAssignment({name: level[name] for name in constraints.variables})


def stratify_formula(f: Formula) -> StratifyResult:
    """
    Assign levels to the variables of a formula.

    Bound variables are renamed apart, so a name reused by two binders gets
    two entries (`x`, `x_1`).

    Returns:
        LevelAssignment when stratified, else NotStratified with a cycle of
        constraint nodes that cannot be levelled
    """
    constraints = _Constraints(taken=set(free_vars(f)))
    constraints.formula(f, {})
    result = _solve(constraints)
    logger.debug("Formula stratified", stratified=isinstance(result, LevelAssignment))
    return result


def stratify_term(t: Term) -> StratifyResult:
    constraints = _Constraints(taken=set(free_vars(t)))
    constraints.term(t, {})
    return _solve(constraints)


def is_stratified(node: Union[Formula, Term]) -> bool:
    if isinstance(node, (Var, Num, SetLit, FuncApp, Comprehension)):
        return isinstance(stratify_term(node), LevelAssignment)
    return isinstance(stratify_formula(node), LevelAssignment)
