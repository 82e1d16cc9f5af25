"""
Implicature lattice for MaTIC.

The atoms of the lattice of y are the events preceding y; elements are the
subsets of at most k atoms, plus top (all atoms) and bottom (no atoms),
ordered by inclusion with meet = intersection.
"""

import itertools
from dataclasses import dataclass, field
from typing import FrozenSet, Iterator, List, Optional, Tuple

import structlog

from matic.errors import ConfigError, DataError
from matic.events import Event, Trace, predecessors

logger = structlog.get_logger(__name__)

Element = FrozenSet[str]


@dataclass(frozen=True)
class ImplicatureLattice:
    """
    Bounded meet-semilattice over subsets of the atoms.

    When an exact complement is too large to be an element, pseudo-complement
    and implication return the maximal element made of its latest k atoms.
    """

    atoms: Tuple[Event, ...]
    max_context_size: int
    elements: Tuple[Element, ...] = field(init=False)

    def __post_init__(self):
        if self.max_context_size < 0:
            raise ConfigError("max_context_size must be non-negative")
        ids = [a.id for a in self.atoms]
        elements: List[Element] = []
        for size in range(0, min(self.max_context_size, len(ids)) + 1):
            elements.extend(frozenset(c) for c in itertools.combinations(ids, size))
        if self.top not in elements:
            elements.append(self.top)
        object.__setattr__(self, "elements", tuple(elements))

    @property
    def atom_ids(self) -> Tuple[str, ...]:
        return tuple(a.id for a in self.atoms)

    @property
    def top(self) -> Element:
        return frozenset(self.atom_ids)

    @property
    def bottom(self) -> Element:
        return frozenset()

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[Element]:
        return iter(self.elements)

    def __contains__(self, x: object) -> bool:
        return isinstance(x, frozenset) and (x == self.top or (x <= self.top and len(x) <= self.max_context_size))

    def _require(self, x: Element) -> Element:
        if x not in self:
            raise DataError("Not an element of the lattice", element=sorted(x))
        return x

    def meet(self, x: Element, y: Element) -> Element:
        return self._require(x) & self._require(y)

    def leq(self, x: Element, y: Element) -> bool:
        return self._require(x) <= self._require(y)

    def representable(self, s: Element) -> Element:
        """`s` itself when it is an element, else its latest k atoms."""
        if s in self:
            return s
        latest = [a for a in self.atom_ids if a in s][-self.max_context_size:] if self.max_context_size else []
        return frozenset(latest)

    def atom(self, event_id: str) -> Event:
        for a in self.atoms:
            if a.id == event_id:
                return a
        raise DataError(f"{event_id!r} is not an atom of the lattice")


def build_lattice(trace: Trace, y: Event, max_context_size: int) -> ImplicatureLattice:
    """
    Lattice of candidate contexts for y.

    Args:
        trace: Trace containing y
        y: The event to explain
        max_context_size: k, largest context considered

    Returns:
        Lattice over candidate_causes(trace, y)
    """
    lattice = ImplicatureLattice(tuple(predecessors(trace, y)), max_context_size)
    logger.debug("Lattice built", event_id=y.id, atoms=len(lattice.atoms), elements=len(lattice))
    return lattice


def pseudo_complement(lat: ImplicatureLattice, x: Element) -> Element:
    """
    Largest element z with x ∧ z = ⊥.

    Args:
        lat: Lattice
        x: Element of lat

    Returns:
        The set complement of x within the atoms (latest k atoms if that is
        not an element)
    """
    lat._require(x)
    return lat.representable(lat.top - x)


def heyting_implies(lat: ImplicatureLattice, x: Element, y: Element) -> Element:
    """Largest z with x ∧ z ≤ y: (complement of x) ∪ (x ∩ y), made representable."""
    lat._require(x)
    lat._require(y)
    return lat.representable((lat.top - x) | (x & y))


def contexts_for(lat: ImplicatureLattice, cause_id: str, max_size: Optional[int] = None) -> List[Element]:
    """Elements of at most k atoms that meet {cause} at bottom."""
    k = lat.max_context_size if max_size is None else max_size
    cause = frozenset([cause_id])
    return [z for z in lat.elements if len(z) <= k and not (z & cause)]
