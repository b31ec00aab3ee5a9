"""The three behaviors of get_node: found, created, out of memory.

Run with ``python demos/03_resource_store.py``.
"""
from esapi_lists.resource_store import (Context, Slot, checked_get_node,
                                        list_handles)
from esapi_lists.memory_model import new_bank

bank = new_bank(2)
ctx = Context()
out = Slot()

for handle in (5, 7, 5, 9):
    code = checked_get_node(bank, ctx, handle, out)
    print('get_node(%d) -> %4d  out=%s  list=%s'
          % (handle, code, out.content, list_handles(bank, ctx)))

# The new node's resource name holds the TPM handle, big-endian.
head = bank.cells[ctx.rsrc_list]
print('head name bytes:', bytes(head.rsrc.name[:head.rsrc.name_size]).hex())
