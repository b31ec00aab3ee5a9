"""Simplified ESAPI resource store: a context holding a handle-keyed list.

``get_node`` searches the context's resource list for a handle and, when
absent, allocates a new head node whose resource name is the marshaled TPM
handle.  ``checked_get_node`` / ``checked_create_node`` wrap the plain
operations with the full runtime contract.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .contracts import ContractViolation
from .logic_lists import (ContextLoc, CycleError, SlotLoc, linked_ll,
                          sep_from_list, to_ll, unchanged_ll)
from .marshal import MU_SUCCESS, marshal_u32
from .memory_model import (NIL, Bank, MemorySnapshot, NodeRef, calloc_node,
                           is_fresh_free, snapshot, valid_bank)

__all__ = [
    'RC_FOUND',
    'RC_OK_CREATE',
    'RC_MEMORY',
    'RC_MARSHAL_FAIL',
    'RC_CREATED',
    'Context',
    'Slot',
    'StoreState',
    'handle_to_tpm',
    'create_node',
    'get_node',
    'capture',
    'resource_list',
    'list_handles',
    'precondition_violations',
    'create_node_violations',
    'get_node_violations',
    'checked_create_node',
    'checked_get_node',
]

RC_FOUND = 616
RC_OK_CREATE = 616
RC_MEMORY = 833
RC_MARSHAL_FAIL = 900
RC_CREATED = 1611

_TPM_HANDLE_MASK = 0x80000000


@dataclass
class Context:
    field0: int = 0
    rsrc_list: NodeRef = NIL

    @property
    def location(self):
        return ContextLoc(0)


@dataclass
class Slot:
    """An out-parameter cell (``NODE_T **``); never aliases a bank cell."""

    id: int = 0
    content: NodeRef = NIL

    @property
    def location(self):
        return SlotLoc(self.id)


class StoreState(NamedTuple):
    mem: MemorySnapshot
    field0: int
    head: NodeRef
    out: NodeRef


def handle_to_tpm(handle: int) -> int:
    return (handle ^ _TPM_HANDLE_MASK) & 0xFFFFFFFF


def create_node(bank: Bank, ctx: Context, handle: int, out: Slot) -> int:
    ref = calloc_node(bank)
    if ref is NIL:
        return RC_MEMORY
    node = bank.cells[ref]
    node.handle = handle
    node.next = ctx.rsrc_list
    ctx.rsrc_list = ref
    out.content = ref
    return RC_OK_CREATE


def get_node(bank: Bank, ctx: Context, handle: int, out: Slot) -> int:
    cur = ctx.rsrc_list
    for _ in range(bank.capacity + 1):
        if cur is NIL:
            break
        if bank.cells[cur].handle == handle:
            out.content = cur
            return RC_FOUND
        cur = bank.cells[cur].next
    else:
        raise ContractViolation('resource list is circular')

    tpm_handle = handle_to_tpm(handle)
    tmp = Slot(id=-1)
    r = create_node(bank, ctx, handle, tmp)
    if r != RC_OK_CREATE:
        return r

    node = bank.cells[tmp.content]
    rc, size = marshal_u32(tpm_handle, node.rsrc.name, 0)
    if rc != MU_SUCCESS:
        return RC_MARSHAL_FAIL
    node.rsrc.name_size = size
    out.content = tmp.content
    return RC_CREATED


def capture(bank: Bank, ctx: Context, out: Slot) -> StoreState:
    return StoreState(snapshot(bank), ctx.field0, ctx.rsrc_list, out.content)


def resource_list(bank, ctx: Context) -> list:
    return to_ll(bank, ctx.rsrc_list, NIL)


def list_handles(bank, ctx: Context) -> list:
    return [bank.cells[i].handle for i in resource_list(bank, ctx)]


def precondition_violations(bank: Bank, ctx: Context, out: Slot) -> list:
    """Shared entry requirements of ``create_node`` and ``get_node``."""
    problems = []
    if not valid_bank(bank):
        return ['invalid bank']
    try:
        ll = to_ll(bank, ctx.rsrc_list, NIL)
    except CycleError as e:
        return ['resource list not well-formed: %s' % e]
    if not linked_ll(bank, ctx.rsrc_list, NIL, ll):
        problems.append('linked_ll fails on resource list %r' % ll)
    if not is_fresh_free(bank, ll + [ctx.rsrc_list, out.content]):
        problems.append('known reference inside allocable region')
    if not (sep_from_list(ctx.location, ll)
            and sep_from_list(out.location, ll)):
        problems.append('context or out slot aliases a list node')
    return problems


def _exit_list(state: StoreState, problems: list):
    mem = state.mem
    if not valid_bank(mem):
        problems.append('bank invalid at exit')
    try:
        ll = to_ll(mem, state.head, NIL)
    except CycleError as e:
        problems.append('exit list not well-formed: %s' % e)
        return None
    if not linked_ll(mem, state.head, NIL, ll):
        problems.append('linked_ll fails at exit on %r' % ll)
    if not is_fresh_free(mem, ll + [state.head, state.out]):
        problems.append('freshness lost at exit')
    return ll


def create_node_violations(entry: StoreState, exit: StoreState,
                           handle: int, code: int) -> list:
    problems = []
    ll_exit = _exit_list(exit, problems)
    ll_entry = to_ll(entry.mem, entry.head, NIL)
    if exit.field0 != entry.field0:
        problems.append('context scalar modified')
    if entry.mem.alloc_idx < entry.mem.capacity:
        r = exit.out
        if code != RC_OK_CREATE:
            problems.append('expected %d, got %d' % (RC_OK_CREATE, code))
        elif r != entry.mem.alloc_idx:
            problems.append('new node %r is not the first free cell' % r)
        else:
            if ll_exit != [r] + ll_entry:
                problems.append('new list %r is not [%r] + %r'
                                % (ll_exit, r, ll_entry))
            if exit.mem.cells[r].handle != handle:
                problems.append('new node carries wrong handle')
            if not unchanged_ll(entry.mem, exit.mem, ll_entry):
                problems.append('old list nodes changed')
    elif code != RC_MEMORY or exit != entry:
        problems.append('exhausted bank: expected %d and no state change, '
                        'got %d' % (RC_MEMORY, code))
    return problems


def get_node_violations(entry: StoreState, exit: StoreState,
                        handle: int, code: int) -> list:
    """All postconditions of one ``get_node`` call, as a list of failures."""
    problems = []
    ll_exit = _exit_list(exit, problems)
    ll_entry = to_ll(entry.mem, entry.head, NIL)
    if code not in (RC_FOUND, RC_CREATED, RC_MEMORY, RC_MARSHAL_FAIL):
        problems.append('unexpected return code %r' % code)
    if exit.field0 != entry.field0:
        problems.append('context scalar modified')
    matches = [x for x in ll_entry if entry.mem.cells[x].handle == handle]
    mem0, mem1 = entry.mem, exit.mem

    if matches:
        if code != RC_FOUND:
            problems.append('found behavior returned %d' % code)
        if exit.out != matches[0]:
            problems.append('out=%r, first match is %r'
                            % (exit.out, matches[0]))
        if ll_exit != ll_entry or not unchanged_ll(mem0, mem1, ll_entry):
            problems.append('list changed by a successful lookup')
        if mem0 != mem1 or exit.head != entry.head:
            problems.append('lookup modified memory')
    elif mem0.alloc_idx < mem0.capacity:
        r = mem0.alloc_idx
        name_cap = len(mem0.cells[r].name)
        if code not in (RC_CREATED, RC_MARSHAL_FAIL):
            problems.append('created behavior returned %d' % code)
        if code == RC_MARSHAL_FAIL and name_cap >= 4:
            problems.append('marshal failure with a %d-byte name' % name_cap)
        if exit.head != r or ll_exit != [r] + ll_entry:
            problems.append('new head shape broken: %r vs [%r] + %r'
                            % (ll_exit, r, ll_entry))
        if not unchanged_ll(mem0, mem1, ll_entry):
            problems.append('old list nodes changed')
        cell = mem1.cells[r]
        if cell.handle != handle:
            problems.append('new node carries wrong handle')
        if code == RC_CREATED:
            expect = handle_to_tpm(handle).to_bytes(4, 'big')
            if exit.out != r:
                problems.append('out=%r, new node is %r' % (exit.out, r))
            if cell.name[:4] != expect or cell.name_size != 4:
                problems.append('name %r/%d, expected %r/4'
                                % (cell.name, cell.name_size, expect))
        elif exit.out != entry.out:
            problems.append('out slot written on failure')
    else:
        if code != RC_MEMORY:
            problems.append('exhausted bank returned %d' % code)
        if exit != entry:
            problems.append('exhausted bank: state changed')
    return problems


def checked_create_node(bank: Bank, ctx: Context, handle: int,
                        out: Slot) -> int:
    problems = precondition_violations(bank, ctx, out)
    if problems:
        raise ContractViolation('create_node precondition: '
                                + '; '.join(problems))
    entry = capture(bank, ctx, out)
    code = create_node(bank, ctx, handle, out)
    problems = create_node_violations(entry, capture(bank, ctx, out),
                                      handle, code)
    if problems:
        raise ContractViolation('create_node: ' + '; '.join(problems))
    return code


def checked_get_node(bank: Bank, ctx: Context, handle: int,
                     out: Slot) -> int:
    problems = precondition_violations(bank, ctx, out)
    if problems:
        raise ContractViolation('get_node precondition: '
                                + '; '.join(problems))
    entry = capture(bank, ctx, out)
    code = get_node(bank, ctx, handle, out)
    problems = get_node_violations(entry, capture(bank, ctx, out),
                                   handle, code)
    if problems:
        raise ContractViolation('get_node(%#x) -> %d: %s'
                                % (handle, code, '; '.join(problems)))
    return code
