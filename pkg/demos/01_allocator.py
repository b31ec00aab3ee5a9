"""Static bank allocation and freshness.

Run with ``python demos/01_allocator.py``.
"""
from esapi_lists.memory_model import (calloc_node, check_calloc,
                                      is_fresh_free, new_bank, snapshot)

# A bank of four cells: nothing allocated yet.
bank = new_bank(4)
print('alloc_idx:', bank.alloc_idx, 'capacity:', bank.capacity)

# Each allocation returns the first allocable cell and bumps the cursor.
refs = [calloc_node(bank) for _ in range(3)]
print('refs:', refs, 'alloc_idx:', bank.alloc_idx)

# Known references are "fresh-free" while they stay below the cursor.
print('fresh-free {0,1,2}:', is_fresh_free(bank, set(refs)))
print('fresh-free {3}:    ', is_fresh_free(bank, {3}))

# check_calloc runs the same call with both behaviors verified at runtime.
last = check_calloc(bank)
before = snapshot(bank)
print('last cell:', last, '| full bank gives:', check_calloc(bank))
print('full-bank call left memory untouched:', snapshot(bank) == before)
