"""Node bank, static allocator and freshness.

Node "addresses" are indices into a fixed-capacity bank; ``NIL`` (``None``)
plays the role of the null pointer.  Cells below ``alloc_idx`` are allocated,
cells at or above it form the allocable region.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Optional

from .contracts import ContractViolation, ensure, require

__all__ = [
    'NIL',
    'NodeRef',
    'DEFAULT_CAPACITY',
    'NAME_CAPACITY',
    'Resource',
    'Node',
    'Bank',
    'CellState',
    'MemorySnapshot',
    'new_bank',
    'valid_bank',
    'calloc_node',
    'snapshot',
    'is_fresh_free',
    'calloc_violations',
    'check_calloc',
]

NIL = None
NodeRef = Optional[int]

DEFAULT_CAPACITY = 64
NAME_CAPACITY = 8


@dataclass
class Resource:
    name: bytearray = field(default_factory=lambda: bytearray(NAME_CAPACITY))
    name_size: int = 0
    aux: int = 0

    def __post_init__(self):
        if not 0 <= self.name_size <= len(self.name):
            raise ValueError(
                'name_size %d exceeds name capacity %d'
                % (self.name_size, len(self.name)))


@dataclass
class Node:
    handle: int = 0
    rsrc: Resource = field(default_factory=Resource)
    next: NodeRef = NIL

    def zero(self):
        self.handle = 0
        self.rsrc.name[:] = bytes(len(self.rsrc.name))
        self.rsrc.name_size = 0
        self.rsrc.aux = 0
        self.next = NIL


class CellState(NamedTuple):
    """Immutable image of one bank cell."""

    handle: int
    name: bytes
    name_size: int
    aux: int
    next: NodeRef

    def is_zero(self):
        return (self.handle == 0 and self.name_size == 0 and self.aux == 0
                and self.next is NIL and not any(self.name))


@dataclass
class Bank:
    capacity: int
    alloc_idx: int
    cells: list

    def state_of(self, ref: int) -> CellState:
        node = self.cells[ref]
        return CellState(node.handle, bytes(node.rsrc.name),
                         node.rsrc.name_size, node.rsrc.aux, node.next)

    def is_allocated(self, ref: NodeRef) -> bool:
        return ref is not NIL and 0 <= ref < self.alloc_idx


@dataclass(frozen=True)
class MemorySnapshot:
    """Bank contents at one program point (an ACSL label)."""

    capacity: int
    alloc_idx: int
    cells: tuple

    def is_allocated(self, ref: NodeRef) -> bool:
        return ref is not NIL and 0 <= ref < self.alloc_idx


def new_bank(capacity: int = DEFAULT_CAPACITY,
             name_capacity: int = NAME_CAPACITY) -> Bank:
    if capacity < 1:
        raise ValueError('bank capacity must be positive, got %r' % capacity)
    if name_capacity < 0:
        raise ValueError('name capacity must be non-negative')
    cells = [Node(rsrc=Resource(name=bytearray(name_capacity)))
             for _ in range(capacity)]
    return Bank(capacity, 0, cells)


def valid_bank(bank) -> bool:
    return 0 <= bank.alloc_idx <= bank.capacity


def calloc_node(bank: Bank) -> NodeRef:
    """Hand out the next allocable cell, zeroed, or ``NIL`` when full."""
    require(valid_bank(bank), 'invalid bank: alloc_idx=%d capacity=%d',
            bank.alloc_idx, bank.capacity)
    if bank.alloc_idx >= bank.capacity:
        return NIL
    ref = bank.alloc_idx
    bank.cells[ref].zero()
    bank.alloc_idx += 1
    ensure(valid_bank(bank))
    return ref


def snapshot(bank: Bank) -> MemorySnapshot:
    return MemorySnapshot(
        bank.capacity, bank.alloc_idx,
        tuple(bank.state_of(i) for i in range(bank.capacity)))


def is_fresh_free(bank, refs: Iterable[NodeRef]) -> bool:
    """True iff no known reference points into the allocable region."""
    return all(r is NIL or r < bank.alloc_idx for r in refs)


def calloc_violations(before: MemorySnapshot, after: MemorySnapshot,
                      ref: NodeRef) -> list:
    """Check one ``calloc_node`` call against its two behaviors.

    Returns a list of human-readable violations, empty when the call met
    its contract.
    """
    out = []
    if not valid_bank(after):
        out.append('bank invalid after call')
    if before.alloc_idx < before.capacity:
        if ref != before.alloc_idx:
            out.append('returned %r, expected first allocable cell %d'
                       % (ref, before.alloc_idx))
            return out
        if after.alloc_idx != before.alloc_idx + 1:
            out.append('alloc_idx %d -> %d, expected increment by one'
                       % (before.alloc_idx, after.alloc_idx))
        if not after.cells[ref].is_zero():
            out.append('cell %d not zeroed: %r' % (ref, after.cells[ref]))
        for i, (old, new) in enumerate(zip(before.cells, after.cells)):
            if i != ref and old != new:
                out.append('cell %d modified by allocation' % i)
    else:
        if ref is not NIL:
            out.append('full bank returned %r instead of NIL' % ref)
        if before != after:
            out.append('full-bank allocation modified memory')
    return out


def check_calloc(bank: Bank) -> NodeRef:
    """``calloc_node`` with its postconditions checked at runtime."""
    before = snapshot(bank)
    ref = calloc_node(bank)
    problems = calloc_violations(before, snapshot(bank), ref)
    if problems:
        raise ContractViolation('; '.join(problems))
    return ref
