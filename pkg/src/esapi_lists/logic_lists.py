"""Executable counterparts of the logic-list definitions.

Every function here accepts either a live ``Bank`` or a ``MemorySnapshot``;
both expose ``capacity``, ``alloc_idx`` and ``cells[i].next``.  A reference
is *valid* in the model iff it is allocated (index below ``alloc_idx``).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

from .memory_model import NIL, NodeRef

__all__ = [
    'CycleError',
    'BankCell',
    'ContextLoc',
    'SlotLoc',
    'Location',
    'to_ll',
    'linked_ll',
    'unchanged_ll',
    'separated',
    'sep_from_list',
    'pairwise_distinct',
]


class CycleError(Exception):
    """The chain from ``bgn`` never reaches ``end``."""

    def __init__(self, bgn, end, steps):
        super().__init__('no path from %r to %r within %d steps'
                         % (bgn, end, steps))
        self.bgn = bgn
        self.end = end
        self.steps = steps


@dataclass(frozen=True)
class BankCell:
    index: int


@dataclass(frozen=True)
class ContextLoc:
    id: int = 0


@dataclass(frozen=True)
class SlotLoc:
    id: int = 0


Location = Union[BankCell, ContextLoc, SlotLoc]


def to_ll(mem, bgn: NodeRef, end: NodeRef) -> list:
    """Logic list of the nodes from ``bgn`` up to, excluding, ``end``."""
    out = []
    cur = bgn
    bound = mem.capacity + 1
    for _ in range(bound):
        if cur == end:
            return out
        if cur is NIL:
            raise CycleError(bgn, end, len(out))
        out.append(cur)
        cur = mem.cells[cur].next
    raise CycleError(bgn, end, bound)


def linked_ll(mem, bgn: NodeRef, end: NodeRef, ll: Sequence[int]) -> bool:
    """The inductive linking predicate, unfolded one node at a time.

    Each step demands ``bgn != end``, an allocated ``bgn`` equal to the
    head of ``ll`` and separated from the rest of ``ll``; the base case
    demands ``bgn == end`` with nothing left.
    """
    alloc_idx = mem.alloc_idx
    cells = mem.cells
    cur = bgn
    for k, x in enumerate(ll):
        if cur == end or cur is NIL or x != cur:
            return False
        if not 0 <= cur < alloc_idx:
            return False
        if cur in ll[k + 1:]:
            return False
        cur = cells[cur].next
    return cur == end


def unchanged_ll(snap1, snap2, ll: Sequence[int]) -> bool:
    """Every listed node is allocated at both points with the same ``next``."""
    for x in ll:
        if not (snap1.is_allocated(x) and snap2.is_allocated(x)):
            return False
        if snap1.cells[x].next != snap2.cells[x].next:
            return False
    return True


def separated(a: Location, b: Location) -> bool:
    # Whole-object locations: distinct class or distinct index never overlap.
    return a != b


def sep_from_list(loc: Location, ll: Sequence[int]) -> bool:
    return all(separated(loc, BankCell(i)) for i in ll)


def pairwise_distinct(ll: Sequence) -> bool:
    return len(set(ll)) == len(ll)
