"""Executable model of the ESAPI resource-list machinery and its oracles."""

from .contracts import ContractViolation
from .logic_lists import (BankCell, ContextLoc, CycleError, SlotLoc,
                          linked_ll, sep_from_list, separated, to_ll,
                          unchanged_ll)
from .marshal import copy_u32, marshal_u32, unmarshal_u32
from .memory_model import (NIL, Bank, MemorySnapshot, calloc_node,
                           is_fresh_free, new_bank, snapshot, valid_bank)
from .resource_store import (RC_CREATED, RC_FOUND, RC_MARSHAL_FAIL,
                             RC_MEMORY, RC_OK_CREATE, Context, Slot,
                             create_node, get_node, handle_to_tpm)

__version__ = '0.1.0'
